#include "polystab/graph.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "polystab/errors.hpp"

namespace polystab {

Graph::Graph(int n) : n_(n) {
    if (n <= 0) throw std::invalid_argument("Graph: vertex count must be positive");
    adj_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

std::size_t Graph::idx(int u, int v) const {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw std::out_of_range("Graph: vertex index out of range");
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
}

void Graph::add_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("Graph: self-loops are not allowed");
    const std::size_t a = idx(u, v), b = idx(v, u);
    if (adj_[a]) return;
    adj_[a] = adj_[b] = 1;
    ++edge_count_;
}

int Graph::degree(int v) const {
    int d = 0;
    for (int u = 0; u < n_; ++u)
        if (u != v && adjacent(v, u)) ++d;
    return d;
}

Graph Graph::complement() const {
    Graph c(n_);
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (!adjacent(u, v)) c.add_edge(u, v);
    return c;
}

Matrix Graph::adjacency_matrix() const {
    Matrix m(n_, n_);
    for (int u = 0; u < n_; ++u)
        for (int v = 0; v < n_; ++v) m(u, v) = adjacent(u, v) ? 1.0 : 0.0;
    return m;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> e;
    e.reserve(static_cast<std::size_t>(edge_count_));
    for (int u = 0; u < n_; ++u)
        for (int v = u + 1; v < n_; ++v)
            if (adjacent(u, v)) e.emplace_back(u, v);
    return e;
}

Graph parse_dimacs(std::istream& in) {
    std::string line;
    int n = -1;
    long declared_m = -1;
    int line_no = 0;
    Graph g(1); // replaced once the header is seen
    bool have_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        // strip trailing CR from files with DOS line endings
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue; // blank line
        if (tok == "c") continue;
        if (tok == "p") {
            if (have_header)
                throw ParseError("dimacs line " + std::to_string(line_no) + ": duplicate header");
            std::string fmt;
            if (!(ls >> fmt >> n >> declared_m) || (fmt != "edge" && fmt != "col") || n <= 0 ||
                declared_m < 0)
                throw ParseError("dimacs line " + std::to_string(line_no) + ": malformed header");
            g = Graph(n);
            have_header = true;
            continue;
        }
        if (tok == "e") {
            if (!have_header)
                throw ParseError("dimacs line " + std::to_string(line_no) +
                                 ": edge before header");
            int u = 0, v = 0;
            if (!(ls >> u >> v))
                throw ParseError("dimacs line " + std::to_string(line_no) +
                                 ": malformed edge line");
            if (u < 1 || u > n || v < 1 || v > n)
                throw ParseError("dimacs line " + std::to_string(line_no) +
                                 ": vertex index out of range [1," + std::to_string(n) + "]");
            if (u == v)
                throw ParseError("dimacs line " + std::to_string(line_no) + ": self-loop e " +
                                 std::to_string(u) + " " + std::to_string(v));
            g.add_edge(u - 1, v - 1);
            continue;
        }
        throw ParseError("dimacs line " + std::to_string(line_no) + ": unknown directive '" + tok +
                         "'");
    }
    if (!have_header) throw ParseError("dimacs: missing 'p edge' header");
    return g;
}

Graph parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

std::string to_dimacs(const Graph& g) {
    std::ostringstream out;
    out << "p edge " << g.n() << " " << g.edge_count() << "\n";
    for (auto [u, v] : g.edges()) out << "e " << (u + 1) << " " << (v + 1) << "\n";
    return out.str();
}

Graph random_graph(int n, double edge_prob, Rng& rng) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform01() < edge_prob) g.add_edge(u, v);
    return g;
}

namespace {

// Tomita-style maximum clique search on bitset adjacency. Candidates are
// greedily colored; a branch is cut when |current| + color bound cannot
// beat the incumbent.
class CliqueSearch {
public:
    explicit CliqueSearch(const Graph& g) : n_(g.n()), adj_(static_cast<std::size_t>(g.n()), 0) {
        for (int u = 0; u < n_; ++u)
            for (int v = 0; v < n_; ++v)
                if (u != v && g.adjacent(u, v)) adj_[static_cast<std::size_t>(u)] |= bit(v);
    }

    std::vector<int> run() {
        best_.clear();
        current_.clear();
        const std::uint64_t all = (n_ == 64) ? ~0ull : ((1ull << n_) - 1);
        expand(all);
        std::sort(best_.begin(), best_.end());
        return best_;
    }

private:
    static std::uint64_t bit(int v) { return 1ull << v; }

    void color_sort(std::uint64_t cand, std::vector<int>& order, std::vector<int>& bound) const {
        order.clear();
        bound.clear();
        int color = 0;
        std::uint64_t uncolored = cand;
        while (uncolored) {
            ++color;
            std::uint64_t avail = uncolored;
            while (avail) {
                const int v = std::countr_zero(avail);
                avail &= ~(adj_[static_cast<std::size_t>(v)] | bit(v));
                uncolored &= ~bit(v);
                order.push_back(v);
                bound.push_back(color);
            }
        }
    }

    void expand(std::uint64_t cand) {
        std::vector<int> order, bound;
        color_sort(cand, order, bound);
        for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
            if (static_cast<int>(current_.size()) + bound[static_cast<std::size_t>(i)] <=
                static_cast<int>(best_.size()))
                return;
            const int v = order[static_cast<std::size_t>(i)];
            current_.push_back(v);
            const std::uint64_t next = cand & adj_[static_cast<std::size_t>(v)];
            if (next)
                expand(next);
            else if (current_.size() > best_.size())
                best_ = current_;
            current_.pop_back();
            cand &= ~bit(v);
        }
    }

    int n_;
    std::vector<std::uint64_t> adj_;
    std::vector<int> best_;
    std::vector<int> current_;
};

void check_cap(const Graph& g, int cap) {
    if (cap <= 0 || cap > 64)
        throw std::invalid_argument("brute-force cap must be in [1,64]");
    if (g.n() > cap)
        throw std::invalid_argument("graph has " + std::to_string(g.n()) +
                                    " vertices, exceeding the brute-force cap of " +
                                    std::to_string(cap));
}

} // namespace

GraphOracleResult max_independent_set(const Graph& g, int brute_force_cap) {
    check_cap(g, brute_force_cap);
    const Graph co = g.complement();
    GraphOracleResult res;
    res.witness_set = CliqueSearch(co).run(); // independent set of g
    res.alpha = static_cast<int>(res.witness_set.size());
    res.omega = static_cast<int>(CliqueSearch(g).run().size());
    return res;
}

GraphOracleResult max_clique(const Graph& g, int brute_force_cap) {
    check_cap(g, brute_force_cap);
    GraphOracleResult res;
    res.witness_set = CliqueSearch(g).run();
    res.omega = static_cast<int>(res.witness_set.size());
    res.alpha = static_cast<int>(CliqueSearch(g.complement()).run().size());
    return res;
}

double quadratic_form(const Graph& g, const SimplexPoint& y, bool shifted) {
    if (y.size() != g.n())
        throw std::invalid_argument("quadratic_form: weight length " + std::to_string(y.size()) +
                                    " does not match vertex count " + std::to_string(g.n()));
    double value = 0.0;
    for (int u = 0; u < g.n(); ++u) {
        double row = 0.0;
        for (int v = 0; v < g.n(); ++v)
            if (g.adjacent(u, v)) row += y[v];
        if (shifted) row += y[u];
        value += y[u] * row;
    }
    return value;
}

SimplexPoint motzkin_straus_certificate(const Graph& g, CertificateMode mode,
                                        int brute_force_cap) {
    const GraphOracleResult res = mode == CertificateMode::IndependentSet
                                      ? max_independent_set(g, brute_force_cap)
                                      : max_clique(g, brute_force_cap);
    return SimplexPoint::uniform_on(g.n(), res.witness_set);
}

} // namespace polystab
