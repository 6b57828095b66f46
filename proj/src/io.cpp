#include "twmc/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace twmc {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-blank line split into tokens, comments removed.
    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            std::istringstream ss(line);
            tokens.clear();
            std::string tok;
            while (ss >> tok) {
                tokens.push_back(tok);
            }
            if (!tokens.empty()) {
                return true;
            }
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw InvalidInput("line " + std::to_string(line_no_) + ": " + what);
    }

    long long integer(const std::string& tok) const {
        long long v = 0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
            fail("expected an integer, got '" + tok + "'");
        }
        return v;
    }

    Vertex id(const std::string& tok) const {
        long long v = integer(tok);
        if (v < 0 || v > 2147483647LL) {
            fail("id out of range: " + tok);
        }
        return static_cast<Vertex>(v);
    }

    double real(const std::string& tok) const {
        double v = 0.0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
            fail("expected a number, got '" + tok + "'");
        }
        return v;
    }

    void arity(const std::vector<std::string>& t, std::size_t lo, std::size_t hi) const {
        if (t.size() < lo || t.size() > hi) {
            fail("wrong number of fields for '" + t[0] + "'");
        }
    }

private:
    std::istream& in_;
    int line_no_ = 0;
};

std::pair<long long, long long> header(LineReader& r, std::vector<std::string>& t, const std::string& tag,
                                       long long min_second = 0) {
    if (!r.next(t)) {
        throw InvalidInput("empty file, expected '" + tag + "' header");
    }
    if (t[0] != tag || t.size() != 3) {
        r.fail("expected '" + tag + " <a> <b>' header");
    }
    long long a = r.integer(t[1]);
    long long b = r.integer(t[2]);
    if (a < 0 || b < min_second) {
        r.fail("negative count in header");
    }
    return {a, b};
}

void read_targets(LineReader& r, const std::vector<std::string>& t, std::vector<Vertex>& targets) {
    for (std::size_t i = 1; i < t.size(); ++i) {
        targets.push_back(r.id(t[i]));
    }
}

template <class F>
auto wrap_model_errors(LineReader& r, F&& build) {
    try {
        return build();
    } catch (const InvalidInput& e) {
        r.fail(e.what());
    }
}

std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open " + path);
    }
    return in;
}

}  // namespace

McFile read_mc(std::istream& in) {
    LineReader r(in);
    std::vector<std::string> t;
    auto [n, m] = header(r, t, "MC");
    McFile out;
    std::vector<Edge> edges;
    while (r.next(t)) {
        if (t[0] == "E") {
            r.arity(t, 4, 5);
            edges.push_back({r.id(t[1]), r.id(t[2]), r.real(t[3]), t.size() == 5 ? r.real(t[4]) : 0.0});
        } else if (t[0] == "T") {
            read_targets(r, t, out.targets);
        } else if (t[0] == "L") {
            r.arity(t, 2, 2);
            out.lambda = r.real(t[1]);
        } else {
            r.fail("unknown record '" + t[0] + "'");
        }
    }
    if (static_cast<long long>(edges.size()) != m) {
        r.fail("header declares " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
    }
    out.chain = wrap_model_errors(r, [&] { return MarkovChain(static_cast<Vertex>(n), edges, true); });
    return out;
}

MdpFile read_mdp(std::istream& in) {
    LineReader r(in);
    std::vector<std::string> t;
    auto [n, m] = header(r, t, "MDP");
    MdpFile out;
    std::vector<Owner> owners(n, Owner::Probabilistic);
    std::vector<char> seen(n, 0);
    std::vector<Edge> edges;
    while (r.next(t)) {
        if (t[0] == "V") {
            r.arity(t, 3, 3);
            Vertex v = r.id(t[1]);
            if (v >= n) r.fail("vertex id out of range");
            if (seen[v]) r.fail("vertex " + t[1] + " declared twice");
            seen[v] = 1;
            if (t[2] == "1") {
                owners[v] = Owner::Player1;
            } else if (t[2] != "P") {
                r.fail("owner must be 1 or P");
            }
        } else if (t[0] == "E") {
            r.arity(t, 5, 5);
            Vertex u = r.id(t[1]);
            if (u >= n) r.fail("edge source out of range");
            const bool is_dash = t[3] == "-";
            if (!seen[u]) r.fail("edge from vertex " + t[1] + " before its V line");
            if (owners[u] == Owner::Player1 && !is_dash) r.fail("Player1 edges need '-' as probability");
            if (owners[u] == Owner::Probabilistic && is_dash) r.fail("'-' is only allowed on Player1 edges");
            edges.push_back({u, r.id(t[2]), is_dash ? 0.0 : r.real(t[3]), r.real(t[4])});
        } else if (t[0] == "T") {
            read_targets(r, t, out.targets);
        } else if (t[0] == "L") {
            r.arity(t, 2, 2);
            out.lambda = r.real(t[1]);
        } else {
            r.fail("unknown record '" + t[0] + "'");
        }
    }
    for (Vertex v = 0; v < n; ++v) {
        if (!seen[v]) r.fail("missing V line for vertex " + std::to_string(v));
    }
    if (static_cast<long long>(edges.size()) != m) {
        r.fail("header declares " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
    }
    out.mdp = wrap_model_errors(r, [&] { return MarkovDecisionProcess(owners, edges); });
    return out;
}

TreeDecomposition read_td(std::istream& in) {
    LineReader r(in);
    std::vector<std::string> t;
    auto [count, width] = header(r, t, "TD", -1);
    std::vector<std::vector<Vertex>> bags(count);
    std::vector<char> seen(count, 0);
    std::vector<std::pair<BagId, BagId>> tree;
    while (r.next(t)) {
        if (t[0] == "B") {
            r.arity(t, 2, ~std::size_t{0});
            BagId b = r.id(t[1]);
            if (b >= count) r.fail("bag id out of range");
            if (seen[b]) r.fail("bag " + t[1] + " declared twice");
            seen[b] = 1;
            for (std::size_t i = 2; i < t.size(); ++i) {
                bags[b].push_back(r.id(t[i]));
            }
        } else if (t[0] == "TE") {
            r.arity(t, 3, 3);
            tree.emplace_back(r.id(t[1]), r.id(t[2]));
        } else {
            r.fail("unknown record '" + t[0] + "'");
        }
    }
    for (BagId b = 0; b < count; ++b) {
        if (!seen[b]) r.fail("missing B line for bag " + std::to_string(b));
    }
    TreeDecomposition td(std::move(bags), std::move(tree));
    if (td.width() != width) {
        r.fail("declared width " + std::to_string(width) + " but bags give " + std::to_string(td.width()));
    }
    return td;
}

LinearSystem read_ls(std::istream& in) {
    LineReader r(in);
    std::vector<std::string> t;
    auto [n, m] = header(r, t, "LS");
    LinearSystem sys;
    sys.unknown_count = static_cast<Vertex>(n);
    while (r.next(t)) {
        if (t[0] != "EQ") {
            r.fail("unknown record '" + t[0] + "'");
        }
        r.arity(t, 3, ~std::size_t{0});
        long long k = r.integer(t[1]);
        if (k < 0 || t.size() != static_cast<std::size_t>(2 * k + 3)) {
            r.fail("EQ needs k, k (unknown, coefficient) pairs and a rhs");
        }
        Equation eq;
        for (long long i = 0; i < k; ++i) {
            Vertex v = r.id(t[2 + 2 * i]);
            if (v >= n) r.fail("unknown id out of range");
            eq.terms.push_back({v, r.real(t[3 + 2 * i])});
        }
        eq.rhs = r.real(t.back());
        sys.equations.push_back(std::move(eq));
    }
    if (static_cast<long long>(sys.equations.size()) != m) {
        r.fail("header declares " + std::to_string(m) + " equations, found " +
               std::to_string(sys.equations.size()));
    }
    return sys;
}

McFile read_mc_file(const std::string& path) {
    auto in = open(path);
    return read_mc(in);
}

MdpFile read_mdp_file(const std::string& path) {
    auto in = open(path);
    return read_mdp(in);
}

TreeDecomposition read_td_file(const std::string& path) {
    auto in = open(path);
    return read_td(in);
}

LinearSystem read_ls_file(const std::string& path) {
    auto in = open(path);
    return read_ls(in);
}

namespace {

void write_extras(std::ostream& out, const std::vector<Vertex>& targets, std::optional<double> lambda) {
    if (!targets.empty()) {
        out << 'T';
        for (Vertex v : targets) out << ' ' << v;
        out << '\n';
    }
    if (lambda) {
        out << "L " << format_double(*lambda) << '\n';
    }
}

}  // namespace

void write_mc(std::ostream& out, const MarkovChain& mc, const std::vector<Vertex>& targets,
              std::optional<double> lambda) {
    out << "MC " << mc.vertex_count() << ' ' << mc.edge_count() << '\n';
    for (const auto& e : mc.edges()) {
        out << "E " << e.src << ' ' << e.dst << ' ' << format_double(e.weight) << ' ' << format_double(e.reward)
            << '\n';
    }
    write_extras(out, targets, lambda);
}

void write_mdp(std::ostream& out, const MarkovDecisionProcess& mdp, const std::vector<Vertex>& targets,
               std::optional<double> lambda) {
    out << "MDP " << mdp.vertex_count() << ' ' << mdp.edge_count() << '\n';
    for (Vertex v = 0; v < mdp.vertex_count(); ++v) {
        out << "V " << v << ' ' << (mdp.owner(v) == Owner::Player1 ? "1" : "P") << '\n';
    }
    for (const auto& e : mdp.edges()) {
        out << "E " << e.src << ' ' << e.dst << ' '
            << (mdp.owner(e.src) == Owner::Player1 ? std::string("-") : format_double(e.weight)) << ' '
            << format_double(e.reward) << '\n';
    }
    write_extras(out, targets, lambda);
}

void write_td(std::ostream& out, const TreeDecomposition& td) {
    out << "TD " << td.bag_count() << ' ' << td.width() << '\n';
    for (BagId b = 0; b < td.bag_count(); ++b) {
        out << "B " << b;
        for (Vertex v : td.bag(b)) out << ' ' << v;
        out << '\n';
    }
    for (const auto& [a, b] : td.tree_edges()) {
        out << "TE " << a << ' ' << b << '\n';
    }
}

void write_ls(std::ostream& out, const LinearSystem& sys) {
    out << "LS " << sys.unknown_count << ' ' << sys.equations.size() << '\n';
    for (const auto& eq : sys.equations) {
        out << "EQ " << eq.terms.size();
        for (const auto& t : eq.terms) out << ' ' << t.var << ' ' << format_double(t.coef);
        out << ' ' << format_double(eq.rhs) << '\n';
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidInput("cannot write " + path);
    }
    out << content;
    if (!out) {
        throw InvalidInput("write failed for " + path);
    }
}

}  // namespace twmc
