#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polystab/matrix.hpp"
#include "polystab/rng.hpp"
#include "polystab/simplex.hpp"

namespace polystab {

// Default cap on exact (branch-and-bound) graph searches.
inline constexpr int kDefaultBruteForceCap = 20;

// Undirected simple graph stored as a dense symmetric 0/1 adjacency
// matrix with zero diagonal. Vertices are 0-based internally; the DIMACS
// text surface is 1-based.
class Graph {
public:
    explicit Graph(int n);

    int n() const { return n_; }
    int edge_count() const { return edge_count_; }

    bool adjacent(int u, int v) const { return adj_[idx(u, v)] != 0; }

    // Inserts {u,v}; duplicates are collapsed silently, self-loops rejected.
    void add_edge(int u, int v);

    int degree(int v) const;

    Graph complement() const;

    // The adjacency matrix C as dense reals.
    Matrix adjacency_matrix() const;

    // Edge list with u < v, sorted.
    std::vector<std::pair<int, int>> edges() const;

private:
    std::size_t idx(int u, int v) const;

    int n_ = 0;
    int edge_count_ = 0;
    std::vector<std::uint8_t> adj_;
};

// DIMACS .col format: comment lines "c ...", one header "p edge <n> <m>",
// then "e <u> <v>" lines with 1-based endpoints. Duplicate edges and both
// orientations are tolerated; self-loops are not.
Graph parse_dimacs(std::istream& in);
Graph parse_dimacs(const std::string& text);

// Canonical serialization: header, then edges with u < v in sorted order.
std::string to_dimacs(const Graph& g);

// Erdos-Renyi G(n, p) with a caller-supplied random source.
Graph random_graph(int n, double edge_prob, Rng& rng);

// Result of an exact search. Both optima are filled in (each is one
// branch-and-bound run; the second runs on the complement), witness_set
// belongs to the quantity that was asked for.
struct GraphOracleResult {
    int alpha = 0;                 // independence number
    int omega = 0;                 // clique number
    std::vector<int> witness_set;  // sorted optimal vertex subset
};

// Exact maximum independent set / maximum clique. Bitset branch-and-bound
// with a greedy coloring bound; throws std::invalid_argument when g.n()
// exceeds the cap.
GraphOracleResult max_independent_set(const Graph& g, int brute_force_cap = kDefaultBruteForceCap);
GraphOracleResult max_clique(const Graph& g, int brute_force_cap = kDefaultBruteForceCap);

// y'(I+C)y when shifted, else y'Cy, with C the adjacency matrix.
double quadratic_form(const Graph& g, const SimplexPoint& y, bool shifted);

enum class CertificateMode { IndependentSet, Clique };

// Uniform weights on one maximum independent set (resp. maximum clique).
// By the Motzkin-Straus identities this point attains the simplex optimum
// of the matching quadratic form: min y'(I+C)y = 1/alpha over the simplex,
// and max y'Cy = 1 - 1/omega.
SimplexPoint motzkin_straus_certificate(const Graph& g, CertificateMode mode,
                                        int brute_force_cap = kDefaultBruteForceCap);

} // namespace polystab
