#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polystab/optimize.hpp"
#include "polystab/reductions.hpp"

namespace polystab {

// State norm beyond which a run is declared diverged. Initial conditions
// are unit vectors and the dynamics are homogeneous, so the threshold is
// scale-free in practice.
inline constexpr double kDivergenceThreshold = 1e12;

enum class SimStatus { Ok, Diverged, NumericFailure };

std::string to_string(SimStatus s);

// How the active matrix is chosen along the trajectory. Vertex-valued
// policies pick one A_i; the constant-combination policy holds an
// arbitrary point of the polytope (the convexified signal class).
struct SwitchingPolicy {
    enum class Kind { Constant, ConstantCombination, Periodic, MinProjection };

    Kind kind = Kind::MinProjection;
    int constant_index = 0;                       // Constant (0-based)
    std::optional<SimplexPoint> combination;      // ConstantCombination
    std::vector<std::pair<int, double>> schedule; // Periodic: (index, duration), cycled
    double sample_period = 1e-2;                  // MinProjection decision spacing

    static SwitchingPolicy constant(int index);
    static SwitchingPolicy constant_combination(SimplexPoint point);
    static SwitchingPolicy periodic(std::vector<std::pair<int, double>> schedule);
    static SwitchingPolicy min_projection(double sample_period = 1e-2);
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    // Active vertex per recorded instant (-1 when the policy holds a
    // combination rather than a vertex).
    std::vector<int> active_indices;
    std::vector<std::pair<double, int>> switch_log; // (time, new index) on changes
    SimStatus status = SimStatus::Ok;

    double final_norm() const;
    // log(|x(T)|/|x(0)|)/T over the recorded span.
    double rate_estimate() const;
};

// Fixed-step classical RK4 on xdot = A(t) x. Switching decisions are
// sampled: min-projection re-selects every sample_period, periodic
// schedules take effect at the first step boundary past each segment end.
// A state norm above kDivergenceThreshold stops the run as Diverged (a
// valid experimental outcome); non-finite state stops it as
// NumericFailure. Every record_stride-th step is recorded, plus the first
// and last.
Trajectory integrate(const MatrixPolytope& p, const SwitchingPolicy& policy,
                     const std::vector<double>& x0, double horizon, double step,
                     int record_stride = 1);

// CSV dump: t,x_1..x_n,active_index with 1-based vertex indices (0 when
// the policy is combination-valued).
std::string trajectory_csv(const Trajectory& t);

struct AssessConfig {
    // Empty means: canonical basis plus num_random_ics seeded random unit vectors.
    std::vector<std::vector<double>> initial_conditions;
    int num_random_ics = 20;
    double horizon = 50.0;
    double step = 1e-3;
    double sample_period = 1e-2;
    double decay_margin = 1e-3; // required exponential decay rate
    std::uint64_t seed = 0;
    // Defaults to min-projection with sample_period above.
    std::optional<SwitchingPolicy> policy;
};

enum class StabilizabilityVerdict { StabilizableEvidence, NoEvidence };

std::string to_string(StabilizabilityVerdict v);

struct RunOutcome {
    std::vector<double> x0;
    double rate = 0.0;
    bool decayed = false;
    SimStatus status = SimStatus::Ok;
};

// One-sided outcome: evidence requires decay from every tested initial
// condition, and failure to decay under one policy proves nothing about
// other signals.
struct StabilizabilityReport {
    std::vector<RunOutcome> runs;
    SwitchingPolicy policy_used;
    StabilizabilityVerdict verdict = StabilizabilityVerdict::NoEvidence;
    double worst_rate = 0.0; // largest (least negative) rate across runs
    bool numeric_failure = false;
};

StabilizabilityReport assess_switched_stabilizability(const MatrixPolytope& p,
                                                      const AssessConfig& cfg);

// ---------------------------------------------------------------------
// Exploratory experiment: are the hurwitz-kind polytopes stabilizable by
// switching exactly when they contain a Hurwitz matrix? Each (graph, j)
// row compares the exact fixed-uncertainty answer against simulation
// evidence under a vertex-valued min-projection policy and under the
// constant convexified policy at the best known combination.

struct ExperimentConfig {
    AssessConfig assess; // cfg.assess.policy is ignored; both policy classes run
    int brute_force_cap = kDefaultBruteForceCap;
    int restarts = 8; // numeric abscissa search when no exact witness exists
};

struct ExperimentRow {
    std::string graph_id;
    int n = 0;
    int j = 0;
    int alpha = 0;
    Answer fixed_answer = Answer::Unknown;
    StabilizabilityVerdict switched_vertex = StabilizabilityVerdict::NoEvidence;
    StabilizabilityVerdict switched_convex = StabilizabilityVerdict::NoEvidence;
    double worst_rate = 0.0;
    std::string flag; // empty, CONJECTURE_COUNTEREXAMPLE_CANDIDATE, NUMERIC_FAILURE, ERROR: ...
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;

    int flagged_count() const;
    int failure_count() const;
    std::string csv() const;
};

// Per-row failures are recorded in the flag column; the sweep continues.
ExperimentReport conjecture_experiment(const std::vector<std::pair<std::string, Graph>>& graphs,
                                       const std::vector<int>& j_values,
                                       const ExperimentConfig& cfg);

} // namespace polystab
