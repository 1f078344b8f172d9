#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "polystab/errors.hpp"
#include "polystab/graph.hpp"
#include "polystab/rng.hpp"
#include "polystab/simplex.hpp"
#include "testutil.hpp"

using namespace polystab;
using namespace testutil;

TEST_CASE("dimacs parsing of a complete graph") {
    const Graph g = parse_dimacs("p edge 3 3\ne 1 2\ne 1 3\ne 2 3");
    CHECK(g.n() == 3);
    CHECK(g.edge_count() == 3);
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v) CHECK(g.adjacent(u, v) == (u != v));
}

TEST_CASE("dimacs parsing of an edgeless graph") {
    const Graph g = parse_dimacs("p edge 3 0");
    CHECK(g.n() == 3);
    CHECK(g.edge_count() == 0);
}

TEST_CASE("dimacs tolerates comments, duplicates and both orientations") {
    const Graph g = parse_dimacs("c tiny graph\np edge 3 2\ne 1 2\ne 2 1\nc duplicate next\ne 1 2\ne 2 3\n");
    CHECK(g.edge_count() == 2);
    CHECK(g.adjacent(0, 1));
    CHECK(g.adjacent(1, 2));
    CHECK_FALSE(g.adjacent(0, 2));
}

TEST_CASE("dimacs rejects malformed input") {
    CHECK_THROWS_AS(parse_dimacs("p edge 2 1\ne 1 1"), ParseError);       // self-loop
    CHECK_THROWS_AS(parse_dimacs("e 1 2\np edge 3 1"), ParseError);       // edge before header
    CHECK_THROWS_AS(parse_dimacs("p edge 3 1\ne 1 4"), ParseError);       // out of range
    CHECK_THROWS_AS(parse_dimacs("p edge 3 1\ne 0 2"), ParseError);       // out of range (low)
    CHECK_THROWS_AS(parse_dimacs("p graph 3 1"), ParseError);             // malformed header
    CHECK_THROWS_AS(parse_dimacs("p edge -3 1"), ParseError);             // malformed header
    CHECK_THROWS_AS(parse_dimacs(""), ParseError);                        // no header
    CHECK_THROWS_AS(parse_dimacs("p edge 3 0\nq 1 2"), ParseError);       // unknown directive
}

TEST_CASE("dimacs round trip is identity on the adjacency matrix") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 9);
        const Graph g = random_graph(n, rng.uniform01(), rng);
        const Graph h = parse_dimacs(to_dimacs(g));
        REQUIRE(h.n() == g.n());
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) CHECK(h.adjacent(u, v) == g.adjacent(u, v));
        CHECK(to_dimacs(h) == to_dimacs(g));
    }
}

TEST_CASE("exact oracles on the named small graphs") {
    CHECK(max_independent_set(complete(3)).alpha == 1);
    CHECK(max_independent_set(edgeless(3)).alpha == 3);
    CHECK(max_clique(complete(3)).omega == 3);
    CHECK(max_clique(edgeless(3)).omega == 1);

    // frozen from the exhaustive scan over all 32 subsets of C5
    const Graph c5 = cycle(5);
    REQUIRE(naive_alpha(c5) == 2);
    REQUIRE(naive_omega(c5) == 2);
    CHECK(max_independent_set(c5).alpha == 2);
    CHECK(max_clique(c5).omega == 2);
}

TEST_CASE("oracle witnesses are feasible and optimal") {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 11); // up to 12
        const Graph g = random_graph(n, rng.uniform01(), rng);

        const GraphOracleResult mis = max_independent_set(g);
        CHECK(mis.alpha == naive_alpha(g));
        CHECK(static_cast<int>(mis.witness_set.size()) == mis.alpha);
        for (std::size_t a = 0; a < mis.witness_set.size(); ++a)
            for (std::size_t b = a + 1; b < mis.witness_set.size(); ++b)
                CHECK_FALSE(g.adjacent(mis.witness_set[a], mis.witness_set[b]));

        const GraphOracleResult clq = max_clique(g);
        CHECK(clq.omega == naive_omega(g));
        CHECK(static_cast<int>(clq.witness_set.size()) == clq.omega);
        for (std::size_t a = 0; a < clq.witness_set.size(); ++a)
            for (std::size_t b = a + 1; b < clq.witness_set.size(); ++b)
                CHECK(g.adjacent(clq.witness_set[a], clq.witness_set[b]));

        CHECK(mis.alpha >= 1);
        CHECK(mis.alpha <= n);
        CHECK(clq.omega >= 1);
        CHECK(clq.omega <= n);
    }
}

TEST_CASE("alpha of G equals omega of the complement") {
    for (const Graph& g : all_graphs(4))
        CHECK(max_independent_set(g).alpha == max_clique(g.complement()).omega);
    Rng rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        const Graph g = random_graph(3 + static_cast<int>(rng.next_u64() % 8),
                                     rng.uniform01(), rng);
        CHECK(max_independent_set(g).alpha == max_clique(g.complement()).omega);
    }
}

TEST_CASE("brute-force cap is enforced") {
    const Graph g = edgeless(6);
    CHECK_THROWS_AS(max_independent_set(g, 5), std::invalid_argument);
    CHECK_THROWS_AS(max_clique(g, 5), std::invalid_argument);
    CHECK_NOTHROW(max_independent_set(g, 6));
}

TEST_CASE("quadratic form values on the named graphs") {
    const SimplexPoint u3 = SimplexPoint::uniform(3);
    CHECK(quadratic_form(complete(3), u3, true) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(quadratic_form(edgeless(3), u3, true) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(quadratic_form(complete(3), u3, false) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(quadratic_form(complete(4), u3, true), std::invalid_argument);
}

TEST_CASE("motzkin-straus certificates on the named graphs") {
    const Graph e3 = edgeless(3);
    const SimplexPoint ind = motzkin_straus_certificate(e3, CertificateMode::IndependentSet);
    for (int i = 0; i < 3; ++i) CHECK(ind[i] == doctest::Approx(1.0 / 3.0));
    CHECK(quadratic_form(e3, ind, true) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    const Graph k3 = complete(3);
    const SimplexPoint clq = motzkin_straus_certificate(k3, CertificateMode::Clique);
    for (int i = 0; i < 3; ++i) CHECK(clq[i] == doctest::Approx(1.0 / 3.0));
    CHECK(quadratic_form(k3, clq, false) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    const SimplexPoint single = motzkin_straus_certificate(k3, CertificateMode::IndependentSet);
    int support = 0;
    for (int i = 0; i < 3; ++i)
        if (single[i] > 0.0) ++support;
    CHECK(support == 1);
    CHECK(quadratic_form(k3, single, true) == doctest::Approx(1.0).epsilon(1e-12));
}

namespace {

// Certificate optimality against the full denominator-8 simplex grid.
void check_motzkin_straus_on(const Graph& g) {
    const GraphOracleResult mis = max_independent_set(g);
    const GraphOracleResult clq = max_clique(g);

    const SimplexPoint ind = motzkin_straus_certificate(g, CertificateMode::IndependentSet);
    const double ind_value = quadratic_form(g, ind, true);
    CHECK(ind_value == doctest::Approx(1.0 / mis.alpha).epsilon(1e-12));

    const SimplexPoint cl = motzkin_straus_certificate(g, CertificateMode::Clique);
    const double cl_value = quadratic_form(g, cl, false);
    CHECK(cl_value == doctest::Approx(1.0 - 1.0 / clq.omega).epsilon(1e-12));

    for (const SimplexPoint& y : simplex_grid(g.n(), 8)) {
        CHECK(quadratic_form(g, y, true) >= ind_value - 1e-9);
        CHECK(quadratic_form(g, y, false) <= cl_value + 1e-9);
    }
}

} // namespace

TEST_CASE("motzkin-straus certificates are grid-optimal (n <= 9)") {
    check_motzkin_straus_on(complete(3));
    check_motzkin_straus_on(edgeless(3));
    check_motzkin_straus_on(cycle(5));
    check_motzkin_straus_on(path(6));
    check_motzkin_straus_on(cycle(9));

    Rng rng(101);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 8); // up to 9
        check_motzkin_straus_on(random_graph(n, rng.uniform(0.2, 0.8), rng));
    }
}

TEST_CASE("simplex point invariants are enforced") {
    CHECK_THROWS_AS(SimplexPoint({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(SimplexPoint({1.5, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(SimplexPoint(std::vector<double>{}), std::invalid_argument);
    const SimplexPoint p = SimplexPoint::uniform(7);
    double sum = 0.0;
    for (double w : p) sum += w;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("simplex grid enumerates all compositions") {
    CHECK(simplex_grid(2, 8).size() == 9);
    CHECK(simplex_grid(3, 8).size() == 45); // C(10,2)
    for (const SimplexPoint& y : simplex_grid(3, 8)) {
        double s = 0.0;
        for (double w : y) s += w;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    }
}
