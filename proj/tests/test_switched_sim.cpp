#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polystab/switched_sim.hpp"
#include "testutil.hpp"

using namespace polystab;
using namespace testutil;

namespace {

MatrixPolytope single(const Matrix& m) {
    MatrixPolytope p;
    p.matrices = {m};
    return p;
}

Matrix rotation_generator() {
    Matrix a(2, 2);
    a(0, 1) = 1.0;
    a(1, 0) = -1.0;
    return a;
}

} // namespace

TEST_CASE("constant contraction matches the exact exponential") {
    const MatrixPolytope p = single(-Matrix::identity(3));
    const std::vector<double> x0 = {1.0, 0.0, 0.0};
    const Trajectory t = integrate(p, SwitchingPolicy::constant(0), x0, 5.0, 1e-3, 1000);
    REQUIRE(t.status == SimStatus::Ok);
    CHECK(t.times.back() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(t.final_norm() == doctest::Approx(std::exp(-5.0)).epsilon(1e-6));
    CHECK(t.rate_estimate() == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("zero dynamics hold the state") {
    const MatrixPolytope p = single(Matrix(2, 2));
    const std::vector<double> x0 = {0.3, -0.4};
    const Trajectory t = integrate(p, SwitchingPolicy::constant(0), x0, 2.0, 1e-3, 500);
    CHECK(t.status == SimStatus::Ok);
    CHECK(t.states.back()[0] == 0.3);
    CHECK(t.states.back()[1] == -0.4);
    CHECK(t.rate_estimate() == 0.0);
}

TEST_CASE("rotation preserves the norm") {
    const MatrixPolytope p = single(rotation_generator());
    const Trajectory t = integrate(p, SwitchingPolicy::constant(0), {1.0, 0.0}, 5.0, 1e-3, 100);
    REQUIRE(t.status == SimStatus::Ok);
    for (const auto& x : t.states) CHECK(norm2(x) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("step halving shows fourth-order error decay on the rotation test") {
    const MatrixPolytope p = single(rotation_generator());
    const double T = 5.0;
    auto error_at = [&](double h) {
        const Trajectory t =
            integrate(p, SwitchingPolicy::constant(0), {1.0, 0.0}, T, h, 1 << 28);
        const std::vector<double> exact = {std::cos(T), -std::sin(T)};
        const auto& got = t.states.back();
        return std::hypot(got[0] - exact[0], got[1] - exact[1]);
    };
    const double ratio = error_at(0.05) / error_at(0.025);
    CHECK(ratio >= 8.0);  // 16 +- 50%
    CHECK(ratio <= 24.0);
}

TEST_CASE("divergence is detected and reported as an outcome") {
    const MatrixPolytope p = single(2.0 * Matrix::identity(2));
    const Trajectory t = integrate(p, SwitchingPolicy::constant(0), {1.0, 0.0}, 20.0, 1e-3, 1000);
    CHECK(t.status == SimStatus::Diverged);
    CHECK(t.times.back() < 20.0);
    CHECK(t.final_norm() > kDivergenceThreshold);
}

TEST_CASE("non-finite state is a numeric failure, not a divergence") {
    Matrix huge(1, 1);
    huge(0, 0) = 1e308;
    const Trajectory t = integrate(single(huge), SwitchingPolicy::constant(0), {1.0}, 2.0, 1.0, 1);
    CHECK(t.status == SimStatus::NumericFailure);
}

TEST_CASE("periodic schedules switch at segment boundaries") {
    MatrixPolytope p;
    p.matrices = {-Matrix::identity(2), Matrix(2, 2)}; // contract, freeze
    const SwitchingPolicy pol = SwitchingPolicy::periodic({{0, 0.5}, {1, 0.5}});
    const Trajectory t = integrate(p, pol, {1.0, 0.0}, 2.0, 1e-3, 2000);
    REQUIRE(t.status == SimStatus::Ok);
    // half of the horizon contracts, half freezes
    CHECK(t.final_norm() == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    REQUIRE(t.switch_log.size() >= 4);
    CHECK(t.switch_log[0] == std::pair<double, int>{0.0, 0});
    CHECK(t.switch_log[1].second == 1);
    CHECK(t.switch_log[1].first == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t.switch_log[2].second == 0);
    CHECK(t.switch_log[2].first == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("policy and input validation") {
    const MatrixPolytope p = single(-Matrix::identity(2));
    CHECK_THROWS_AS(integrate(p, SwitchingPolicy::constant(1), {1.0, 0.0}, 1.0, 1e-3),
                    std::invalid_argument); // index out of range (k = 1)
    CHECK_THROWS_AS(integrate(p, SwitchingPolicy::periodic({}), {1.0, 0.0}, 1.0, 1e-3),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, SwitchingPolicy::periodic({{0, -1.0}}), {1.0, 0.0}, 1.0, 1e-3),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, SwitchingPolicy::min_projection(0.0), {1.0, 0.0}, 1.0, 1e-3),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, SwitchingPolicy::constant(0), {1.0}, 1.0, 1e-3),
                    std::invalid_argument); // wrong dimension
    CHECK_THROWS_AS(integrate(p, SwitchingPolicy::constant(0), {1.0, 0.0}, 1.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, SwitchingPolicy::constant(0), {1.0, 0.0}, 1e-4, 1e-3),
                    std::invalid_argument); // horizon < step
}

TEST_CASE("min-projection picks the instantaneous best mode at each sample") {
    const ReductionInstance inst = build_hurwitz_instance(cycle(5), 2);
    const MatrixPolytope& p = inst.polytope;
    std::vector<Matrix> sym;
    for (const Matrix& a : p.matrices) sym.push_back(a + a.transpose());

    const double step = 1e-3, period = 1e-2;
    std::vector<double> x0(static_cast<std::size_t>(p.dim()), 0.0);
    x0[0] = 0.6;
    x0[3] = -0.8;
    const Trajectory t =
        integrate(p, SwitchingPolicy::min_projection(period), x0, 2.0, step, 10);

    REQUIRE(t.status == SimStatus::Ok);
    for (std::size_t row = 0; row + 1 < t.times.size(); ++row) {
        const auto& x = t.states[row];
        double best = std::numeric_limits<double>::infinity();
        int best_idx = -1;
        for (int i = 0; i < p.k(); ++i) {
            double v = 0.0;
            for (int r = 0; r < p.dim(); ++r)
                for (int c = 0; c < p.dim(); ++c)
                    v += x[(std::size_t)r] * sym[(std::size_t)i](r, c) * x[(std::size_t)c];
            if (v < best) {
                best = v;
                best_idx = i;
            }
        }
        CHECK(t.active_indices[row] == best_idx);
        // the chosen mode's quadratic equals the minimum (it is the argmin)
        double chosen = 0.0;
        const auto& s = sym[(std::size_t)t.active_indices[row]];
        for (int r = 0; r < p.dim(); ++r)
            for (int c = 0; c < p.dim(); ++c)
                chosen += x[(std::size_t)r] * s(r, c) * x[(std::size_t)c];
        CHECK(std::abs(chosen - best) <= 1e-12 * (1.0 + std::abs(best)));
    }
}

TEST_CASE("assessment on plainly stable and unstable polytopes") {
    AssessConfig cfg;
    cfg.horizon = 10.0;
    cfg.num_random_ics = 5;
    cfg.seed = 3;

    const StabilizabilityReport stable =
        assess_switched_stabilizability(single(-Matrix::identity(3)), cfg);
    CHECK(stable.verdict == StabilizabilityVerdict::StabilizableEvidence);
    CHECK(stable.worst_rate == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK_FALSE(stable.numeric_failure);

    const StabilizabilityReport unstable =
        assess_switched_stabilizability(single(Matrix::identity(3)), cfg);
    CHECK(unstable.verdict == StabilizabilityVerdict::NoEvidence);
    CHECK(unstable.worst_rate > 0.0);
}

TEST_CASE("hurwitz instance is stabilizable in simulation") {
    const ReductionInstance inst = build_hurwitz_instance(edgeless(3), 2);
    AssessConfig cfg;
    cfg.horizon = 10.0;
    cfg.num_random_ics = 5;
    cfg.seed = 5;

    // vertex-valued min-projection
    const StabilizabilityReport vertex = assess_switched_stabilizability(inst.polytope, cfg);
    CHECK(vertex.verdict == StabilizabilityVerdict::StabilizableEvidence);

    // constant convexified signal at the exact witness
    const Decision fixed = decide_exists_hurwitz(inst);
    REQUIRE(fixed.answer == Answer::Yes);
    cfg.policy = SwitchingPolicy::constant_combination(*fixed.witness);
    const StabilizabilityReport convex = assess_switched_stabilizability(inst.polytope, cfg);
    CHECK(convex.verdict == StabilizabilityVerdict::StabilizableEvidence);
    CHECK(convex.worst_rate < -1e-3);
}

TEST_CASE("trajectory csv shape and determinism") {
    const MatrixPolytope p = single(rotation_generator());
    const Trajectory a = integrate(p, SwitchingPolicy::constant(0), {1.0, 0.0}, 1.0, 1e-2, 10);
    const Trajectory b = integrate(p, SwitchingPolicy::constant(0), {1.0, 0.0}, 1.0, 1e-2, 10);
    const std::string csv = trajectory_csv(a);
    CHECK(csv == trajectory_csv(b)); // bit-for-bit
    CHECK(csv.rfind("t,x_1,x_2,active_index\n", 0) == 0);
    CHECK(csv.find("\n0,1,0,1\n") != std::string::npos); // first sample, 1-based index
}

TEST_CASE("conjecture experiment rows on the named graphs") {
    ExperimentConfig cfg;
    cfg.assess.horizon = 10.0;
    cfg.assess.num_random_ics = 4;
    cfg.assess.seed = 7;
    cfg.restarts = 4;

    const std::vector<std::pair<std::string, Graph>> graphs = {
        {"e3", edgeless(3)}, {"k3", complete(3)}, {"c5", cycle(5)}};
    const ExperimentReport report = conjecture_experiment(graphs, {2}, cfg);
    REQUIRE(report.rows.size() == 3);

    const ExperimentRow& e3 = report.rows[0];
    CHECK(e3.alpha == 3);
    CHECK(e3.fixed_answer == Answer::Yes);
    CHECK(e3.switched_convex == StabilizabilityVerdict::StabilizableEvidence);
    CHECK(e3.flag.empty());

    const ExperimentRow& k3 = report.rows[1];
    CHECK(k3.alpha == 1);
    CHECK(k3.fixed_answer == Answer::No);
    // the conjecture expects no stabilizing signal; any evidence is flagged
    const bool evidence =
        k3.switched_vertex == StabilizabilityVerdict::StabilizableEvidence ||
        k3.switched_convex == StabilizabilityVerdict::StabilizableEvidence;
    CHECK((k3.flag == "CONJECTURE_COUNTEREXAMPLE_CANDIDATE") == evidence);

    const ExperimentRow& c5 = report.rows[2];
    CHECK(c5.alpha == 2);
    CHECK(c5.fixed_answer == Answer::Yes);
    CHECK(c5.switched_convex == StabilizabilityVerdict::StabilizableEvidence);
    CHECK(c5.flag.empty());

    CHECK(report.failure_count() == 0);

    // byte-identical on a rerun with the same seed
    const ExperimentReport again = conjecture_experiment(graphs, {2}, cfg);
    CHECK(report.csv() == again.csv());

    // fixed-YES rows always carry convex evidence (constant witness signal)
    for (const ExperimentRow& row : report.rows)
        if (row.fixed_answer == Answer::Yes)
            CHECK(row.switched_convex == StabilizabilityVerdict::StabilizableEvidence);
}

TEST_CASE("experiment records per-row errors and continues") {
    ExperimentConfig cfg;
    cfg.assess.horizon = 2.0;
    cfg.assess.num_random_ics = 1;
    const std::vector<std::pair<std::string, Graph>> graphs = {{"k3", complete(3)}};
    const ExperimentReport report = conjecture_experiment(graphs, {2, 7}, cfg); // j = 7 > n
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[1].flag.rfind("ERROR:", 0) == 0);
    CHECK(report.failure_count() == 1);
}
