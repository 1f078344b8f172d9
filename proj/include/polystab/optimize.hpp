#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polystab/graph.hpp"
#include "polystab/reductions.hpp"
#include "polystab/simplex.hpp"
#include "polystab/spectral.hpp"

namespace polystab {

enum class Answer { Yes, No, Unknown, Boundary };
enum class DecisionMethod { GraphOracle, Numeric };

std::string to_string(Answer a);
std::string to_string(DecisionMethod m);

// Outcome of one of the four existence questions. Graph-oracle answers
// are exact; numeric answers come from heuristic search, so a failed
// search yields Unknown, never No. For Yes the margin is the amount by
// which the witness clears the threshold when re-evaluated through the
// eigensolver; for oracle No it is the integer slack (j - alpha or
// j - omega) of the exact comparison.
struct Decision {
    Answer answer = Answer::Unknown;
    std::optional<SimplexPoint> witness;
    double margin = 0.0;
    DecisionMethod method = DecisionMethod::Numeric;
};

// {"answer":, "margin":, "method":, "witness": [...] or null}
std::string decision_to_json(const Decision& d);

// Euclidean projection onto the standard simplex (sort-and-threshold).
SimplexPoint project_to_simplex(const std::vector<double>& v);

enum class Direction { Minimize, Maximize };
enum class SpectralObjective { Radius, Abscissa };

struct OptResult {
    SimplexPoint best_point;
    double best_value = 0.0;
    int restarts_used = 0;
    bool converged = false;
    int eig_failures = 0; // spectral search only: probe points whose eigensolve failed
};

// Multistart search for extrema of y'(I+C)y (shifted) or y'Cy over the
// simplex: all vertex starts plus `restarts` random starts; projected
// gradient with diminishing steps, then pairwise mass transfers solved
// exactly (the objective is quadratic along a transfer).
OptResult optimize_quadratic_over_simplex(const Graph& g, bool shifted, Direction direction,
                                          int restarts, std::uint64_t seed = 0);

// Multistart pairwise-transfer search with golden-section line search on
// the spectral radius or abscissa of the combination. Heuristic only: the
// global problems are NP-hard, so the result is a certified point, not a
// certified optimum.
OptResult optimize_spectral_over_simplex(const MatrixPolytope& p, SpectralObjective objective,
                                         Direction direction, int restarts,
                                         std::uint64_t seed = 0);

struct DecideOptions {
    int brute_force_cap = kDefaultBruteForceCap;
    int restarts = 16;
    std::uint64_t seed = 0;
    double margin = kDefaultStabilityMargin;
};

// The four existence questions. The instance overloads answer exactly
// through the graph oracle whenever the instance kind matches the
// question and the source graph is within the brute-force cap; otherwise
// they fall back to the numeric search on the polytope. Numeric No is
// never emitted.
Decision decide_min_radius(const ReductionInstance& inst, const DecideOptions& opts = {});
Decision decide_min_radius(const MatrixPolytope& p, const DecideOptions& opts = {});

Decision decide_max_radius(const ReductionInstance& inst, const DecideOptions& opts = {});
Decision decide_max_radius(const MatrixPolytope& p, const DecideOptions& opts = {});

Decision decide_exists_m_matrix(const ReductionInstance& inst, const DecideOptions& opts = {});
Decision decide_exists_m_matrix(const MatrixPolytope& p, const DecideOptions& opts = {});

Decision decide_exists_hurwitz(const ReductionInstance& inst, const DecideOptions& opts = {});
Decision decide_exists_hurwitz(const MatrixPolytope& p, const DecideOptions& opts = {});

} // namespace polystab
