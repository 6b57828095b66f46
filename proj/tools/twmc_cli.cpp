#include <iostream>
#include <string>
#include <vector>

#include "twmc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return twmc::run_cli(args, std::cout, std::cerr);
}
