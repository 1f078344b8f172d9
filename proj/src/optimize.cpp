#include "polystab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "polystab/errors.hpp"
#include "polystab/rng.hpp"

namespace polystab {

std::string to_string(Answer a) {
    switch (a) {
    case Answer::Yes: return "YES";
    case Answer::No: return "NO";
    case Answer::Unknown: return "UNKNOWN";
    case Answer::Boundary: return "BOUNDARY";
    }
    throw std::logic_error("unreachable answer");
}

std::string to_string(DecisionMethod m) {
    return m == DecisionMethod::GraphOracle ? "GRAPH_ORACLE" : "NUMERIC";
}

std::string decision_to_json(const Decision& d) {
    nlohmann::json doc{{"answer", to_string(d.answer)},
                       {"margin", d.margin},
                       {"method", to_string(d.method)}};
    if (d.witness)
        doc["witness"] = d.witness->weights();
    else
        doc["witness"] = nullptr;
    return doc.dump() + "\n";
}

SimplexPoint project_to_simplex(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("project_to_simplex: empty vector");
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument("project_to_simplex: non-finite entry");

    const int n = static_cast<int>(v.size());
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (int i = 0; i < n; ++i) {
        cumulative += u[static_cast<std::size_t>(i)];
        const double candidate = (cumulative - 1.0) / (i + 1);
        if (u[static_cast<std::size_t>(i)] - candidate > 0.0) theta = candidate;
    }
    std::vector<double> w(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        w[i] = std::max(v[i] - theta, 0.0);
        sum += w[i];
    }
    // sum is 1 up to roundoff; rescale so the SimplexPoint invariant holds
    // even for adversarial magnitudes.
    for (double& x : w) x /= sum;
    return SimplexPoint(std::move(w));
}

namespace {

// ---------------------------------------------------------------------
// quadratic objective machinery

struct QuadForm {
    Matrix q; // C or I + C

    explicit QuadForm(const Graph& g, bool shifted) : q(g.adjacency_matrix()) {
        if (shifted)
            for (int i = 0; i < q.rows(); ++i) q(i, i) += 1.0;
    }

    int dim() const { return q.rows(); }

    double value(const std::vector<double>& y) const {
        double s = 0.0;
        for (int i = 0; i < dim(); ++i) {
            double row = 0.0;
            for (int j = 0; j < dim(); ++j) row += q(i, j) * y[static_cast<std::size_t>(j)];
            s += y[static_cast<std::size_t>(i)] * row;
        }
        return s;
    }

    // qy = Q y (gradient is 2 qy)
    std::vector<double> times(const std::vector<double>& y) const { return matvec(q, y); }
};

bool lexicographically_less(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Incumbent {
    std::vector<double> point;
    double value = std::numeric_limits<double>::infinity(); // in minimization sign
    bool converged = false;

    void offer(std::vector<double> p, double v, bool conv) {
        if (v < value || (v == value && lexicographically_less(p, point))) {
            point = std::move(p);
            value = v;
            converged = conv;
        }
    }
};

std::vector<std::vector<double>> make_starts(int dim, int restarts, std::uint64_t seed) {
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    std::vector<std::vector<double>> starts;
    starts.reserve(static_cast<std::size_t>(dim + restarts));
    for (int i = 0; i < dim; ++i) {
        std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        starts.push_back(std::move(e));
    }
    Rng rng(seed);
    for (int i = 0; i < restarts; ++i) starts.push_back(rng.dirichlet(dim));
    return starts;
}

// Exact minimization of the signed quadratic objective along a pairwise
// transfer y + t (e_a - e_b), t in [-y_a, y_b]. Returns the step and its
// objective delta (both zero when nothing improves).
struct TransferStep {
    double t = 0.0;
    double delta = 0.0;
};

TransferStep best_transfer(double lin, double quad, double lo, double hi) {
    // signed objective along the move: phi(t) = lin * t + quad * t^2
    auto phi = [&](double t) { return lin * t + quad * t * t; };
    TransferStep best;
    auto consider = [&](double t) {
        const double d = phi(t);
        if (d < best.delta) {
            best.delta = d;
            best.t = t;
        }
    };
    consider(lo);
    consider(hi);
    if (quad > 0.0) {
        const double crit = -lin / (2.0 * quad);
        if (crit > lo && crit < hi) consider(crit);
    }
    return best;
}

} // namespace

OptResult optimize_quadratic_over_simplex(const Graph& g, bool shifted, Direction direction,
                                          int restarts, std::uint64_t seed) {
    const QuadForm form(g, shifted);
    const int n = form.dim();
    const double sign = direction == Direction::Minimize ? 1.0 : -1.0;
    const auto starts = make_starts(n, restarts, seed);

    Incumbent incumbent;
    for (const auto& start : starts) {
        std::vector<double> y = start;
        double fy = sign * form.value(y);

        // Projected gradient with diminishing steps. Moves are always
        // taken; the best visited point seeds the transfer phase.
        std::vector<double> best_y = y;
        double best_f = fy;
        for (int t = 0; t < 120; ++t) {
            const std::vector<double> qy = form.times(y);
            std::vector<double> probe(y.size());
            const double step = 1.0 / (1.0 + t);
            for (std::size_t i = 0; i < y.size(); ++i)
                probe[i] = y[i] - step * sign * 2.0 * qy[i];
            y = project_to_simplex(probe).weights();
            fy = sign * form.value(y);
            if (fy < best_f) {
                best_f = fy;
                best_y = y;
            }
        }
        y = best_y;
        fy = best_f;

        // Pairwise transfers with exact 1-D minimization.
        std::vector<double> qy = form.times(y);
        bool converged = false;
        for (int pass = 0; pass < 200; ++pass) {
            double pass_improvement = 0.0;
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    const double lo = -y[static_cast<std::size_t>(a)];
                    const double hi = y[static_cast<std::size_t>(b)];
                    if (hi - lo < 1e-16) continue;
                    const double lin = sign * 2.0 * (qy[static_cast<std::size_t>(a)] -
                                                     qy[static_cast<std::size_t>(b)]);
                    const double quad =
                        sign * (form.q(a, a) + form.q(b, b) - 2.0 * form.q(a, b));
                    const TransferStep step = best_transfer(lin, quad, lo, hi);
                    if (step.delta < 0.0) {
                        const double t = step.t;
                        // exact endpoint assignment keeps weights nonnegative
                        if (t == lo) {
                            y[static_cast<std::size_t>(b)] += y[static_cast<std::size_t>(a)];
                            y[static_cast<std::size_t>(a)] = 0.0;
                        } else if (t == hi) {
                            y[static_cast<std::size_t>(a)] += y[static_cast<std::size_t>(b)];
                            y[static_cast<std::size_t>(b)] = 0.0;
                        } else {
                            y[static_cast<std::size_t>(a)] += t;
                            y[static_cast<std::size_t>(b)] -= t;
                        }
                        for (int i = 0; i < n; ++i)
                            qy[static_cast<std::size_t>(i)] += t * (form.q(i, a) - form.q(i, b));
                        fy += step.delta;
                        pass_improvement += -step.delta;
                    }
                }
            }
            if (pass_improvement < 1e-12) {
                converged = true;
                break;
            }
        }
        for (double& v : y)
            if (v < 0.0) v = 0.0; // transfer roundoff can leave -1ulp
        const double total = std::accumulate(y.begin(), y.end(), 0.0);
        for (double& v : y) v /= total;
        const double final_value = sign * form.value(y); // exact, no incremental drift
        incumbent.offer(std::move(y), final_value, converged);
    }

    OptResult out{SimplexPoint(incumbent.point), sign * incumbent.value,
                  static_cast<int>(starts.size()), incumbent.converged, 0};
    return out;
}

namespace {

// ---------------------------------------------------------------------
// spectral objective machinery

struct SpectralEval {
    const MatrixPolytope& p;
    SpectralObjective objective;
    double sign; // +1 minimize, -1 maximize
    mutable int failures = 0;

    double operator()(const std::vector<double>& pi) const {
        Matrix b(p.dim(), p.dim());
        for (int i = 0; i < p.k(); ++i)
            b.add_scaled(p.matrices[static_cast<std::size_t>(i)], pi[static_cast<std::size_t>(i)]);
        try {
            const Spectrum s = eigenvalues(b);
            return sign * (objective == SpectralObjective::Radius ? s.radius() : s.abscissa());
        } catch (const EigenSolverError&) {
            ++failures;
            return std::numeric_limits<double>::infinity();
        }
    }
};

// Golden-section minimization over [lo, hi]; also probes both endpoints.
template <typename F> std::pair<double, double> golden_min(F&& f, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-10) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    double best_t = f1 <= f2 ? x1 : x2;
    double best_f = std::min(f1, f2);
    for (double t : {lo, hi}) {
        const double ft = f(t);
        if (ft < best_f) {
            best_f = ft;
            best_t = t;
        }
    }
    return {best_t, best_f};
}

} // namespace

OptResult optimize_spectral_over_simplex(const MatrixPolytope& p, SpectralObjective objective,
                                         Direction direction, int restarts, std::uint64_t seed) {
    p.validate();
    const int k = p.k();
    const SpectralEval eval{p, objective, direction == Direction::Minimize ? 1.0 : -1.0};
    const auto starts = make_starts(k, restarts, seed);

    Incumbent incumbent;
    for (const auto& start : starts) {
        std::vector<double> y = start;
        double fy = eval(y);
        bool converged = false;
        for (int pass = 0; pass < 50 && k > 1; ++pass) {
            double pass_improvement = 0.0;
            for (int a = 0; a < k; ++a) {
                for (int b = a + 1; b < k; ++b) {
                    const double lo = -y[static_cast<std::size_t>(a)];
                    const double hi = y[static_cast<std::size_t>(b)];
                    if (hi - lo < 1e-12) continue;
                    auto line = [&](double t) {
                        std::vector<double> probe = y;
                        probe[static_cast<std::size_t>(a)] += t;
                        probe[static_cast<std::size_t>(b)] -= t;
                        if (t == lo) probe[static_cast<std::size_t>(a)] = 0.0;
                        if (t == hi) probe[static_cast<std::size_t>(b)] = 0.0;
                        return eval(probe);
                    };
                    const auto [t, ft] = golden_min(line, lo, hi);
                    if (ft < fy - 1e-15) {
                        pass_improvement += fy - ft;
                        y[static_cast<std::size_t>(a)] += t;
                        y[static_cast<std::size_t>(b)] -= t;
                        if (t == lo) y[static_cast<std::size_t>(a)] = 0.0;
                        if (t == hi) y[static_cast<std::size_t>(b)] = 0.0;
                        fy = ft;
                    }
                }
            }
            if (pass_improvement < 1e-12) {
                converged = true;
                break;
            }
        }
        if (k == 1) converged = true;
        for (double& v : y)
            if (v < 0.0) v = 0.0;
        const double total = std::accumulate(y.begin(), y.end(), 0.0);
        for (double& v : y) v /= total;
        fy = eval(y);
        incumbent.offer(std::move(y), fy, converged);
    }

    const double sign = direction == Direction::Minimize ? 1.0 : -1.0;
    OptResult out{SimplexPoint(incumbent.point), sign * incumbent.value,
                  static_cast<int>(starts.size()), incumbent.converged, eval.failures};
    return out;
}

namespace {

// ---------------------------------------------------------------------
// decision procedures

Decision numeric_min_radius(const MatrixPolytope& p, const DecideOptions& opts) {
    const OptResult opt = optimize_spectral_over_simplex(p, SpectralObjective::Radius,
                                                         Direction::Minimize, opts.restarts,
                                                         opts.seed);
    const Matrix b = convex_combination(p, opt.best_point);
    const StabilityResult sch = is_schur(b, opts.margin);
    switch (sch.verdict) {
    case StabilityVerdict::Stable:
        return {Answer::Yes, opt.best_point, sch.gap, DecisionMethod::Numeric};
    case StabilityVerdict::Boundary:
        return {Answer::Boundary, opt.best_point, sch.gap, DecisionMethod::Numeric};
    case StabilityVerdict::Unstable:
        return {Answer::Unknown, std::nullopt, sch.gap, DecisionMethod::Numeric};
    }
    throw std::logic_error("unreachable verdict");
}

Decision numeric_max_radius(const MatrixPolytope& p, const DecideOptions& opts) {
    const OptResult opt = optimize_spectral_over_simplex(p, SpectralObjective::Radius,
                                                         Direction::Maximize, opts.restarts,
                                                         opts.seed);
    const Matrix b = convex_combination(p, opt.best_point);
    const double gap = spectral_radius(b) - 1.0; // positive = unstable combination found
    if (gap > opts.margin) return {Answer::Yes, opt.best_point, gap, DecisionMethod::Numeric};
    if (gap >= -opts.margin)
        return {Answer::Boundary, opt.best_point, gap, DecisionMethod::Numeric};
    return {Answer::Unknown, std::nullopt, gap, DecisionMethod::Numeric};
}

Decision numeric_exists_m_matrix(const MatrixPolytope& p, const DecideOptions& opts) {
    p.validate();
    // A convex combination of Z-matrices is a Z-matrix; for mixed vertex
    // patterns the Z-structure of a combination is input-dependent and is
    // not searched here.
    for (const Matrix& m : p.matrices)
        if (!is_z_matrix(m)) return {Answer::Unknown, std::nullopt, 0.0, DecisionMethod::Numeric};

    MatrixPolytope negated;
    negated.matrices.reserve(p.matrices.size());
    for (const Matrix& m : p.matrices) negated.matrices.push_back(-m);
    const OptResult opt = optimize_spectral_over_simplex(negated, SpectralObjective::Abscissa,
                                                         Direction::Minimize, opts.restarts,
                                                         opts.seed);
    const Matrix candidate = convex_combination(p, opt.best_point);
    const MMatrixResult check =
        is_nonsingular_m_matrix(candidate, MMatrixVariant::PositiveStable, opts.margin);
    if (check.yes()) return {Answer::Yes, opt.best_point, check.margin, DecisionMethod::Numeric};
    if (std::abs(check.margin) <= opts.margin)
        return {Answer::Boundary, opt.best_point, check.margin, DecisionMethod::Numeric};
    return {Answer::Unknown, std::nullopt, check.margin, DecisionMethod::Numeric};
}

Decision numeric_exists_hurwitz(const MatrixPolytope& p, const DecideOptions& opts) {
    const OptResult opt = optimize_spectral_over_simplex(p, SpectralObjective::Abscissa,
                                                         Direction::Minimize, opts.restarts,
                                                         opts.seed);
    const Matrix b = convex_combination(p, opt.best_point);
    const StabilityResult hw = is_hurwitz(b, opts.margin);
    switch (hw.verdict) {
    case StabilityVerdict::Stable:
        return {Answer::Yes, opt.best_point, hw.gap, DecisionMethod::Numeric};
    case StabilityVerdict::Boundary:
        return {Answer::Boundary, opt.best_point, hw.gap, DecisionMethod::Numeric};
    case StabilityVerdict::Unstable:
        return {Answer::Unknown, std::nullopt, hw.gap, DecisionMethod::Numeric};
    }
    throw std::logic_error("unreachable verdict");
}

bool oracle_applies(const ReductionInstance& inst, ReductionKind expected,
                    const DecideOptions& opts) {
    return inst.kind == expected && inst.source.n() <= opts.brute_force_cap;
}

SimplexPoint oracle_witness(const ReductionInstance& inst, const GraphOracleResult& oracle) {
    return SimplexPoint::uniform_on(inst.source.n(), oracle.witness_set);
}

} // namespace

Decision decide_min_radius(const ReductionInstance& inst, const DecideOptions& opts) {
    if (!oracle_applies(inst, ReductionKind::MinRadius, opts))
        return numeric_min_radius(inst.polytope, opts);
    const GraphOracleResult oracle = max_independent_set(inst.source, opts.brute_force_cap);
    if (oracle.alpha >= inst.j) {
        const SimplexPoint witness = oracle_witness(inst, oracle);
        const StabilityResult sch = is_schur(convex_combination(inst.polytope, witness));
        if (!sch.stable())
            throw std::logic_error("min-radius witness failed Schur re-certification");
        return {Answer::Yes, witness, sch.gap, DecisionMethod::GraphOracle};
    }
    return {Answer::No, std::nullopt, static_cast<double>(inst.j - oracle.alpha),
            DecisionMethod::GraphOracle};
}

Decision decide_min_radius(const MatrixPolytope& p, const DecideOptions& opts) {
    return numeric_min_radius(p, opts);
}

Decision decide_max_radius(const ReductionInstance& inst, const DecideOptions& opts) {
    if (!oracle_applies(inst, ReductionKind::MaxRadius, opts))
        return numeric_max_radius(inst.polytope, opts);
    const GraphOracleResult oracle = max_clique(inst.source, opts.brute_force_cap);
    if (oracle.omega >= inst.j) {
        const SimplexPoint witness = oracle_witness(inst, oracle);
        const double gap = spectral_radius(convex_combination(inst.polytope, witness)) - 1.0;
        if (gap <= kDefaultStabilityMargin)
            throw std::logic_error("max-radius witness failed instability re-certification");
        return {Answer::Yes, witness, gap, DecisionMethod::GraphOracle};
    }
    return {Answer::No, std::nullopt, static_cast<double>(inst.j - oracle.omega),
            DecisionMethod::GraphOracle};
}

Decision decide_max_radius(const MatrixPolytope& p, const DecideOptions& opts) {
    return numeric_max_radius(p, opts);
}

Decision decide_exists_m_matrix(const ReductionInstance& inst, const DecideOptions& opts) {
    if (!oracle_applies(inst, ReductionKind::MMatrix, opts))
        return numeric_exists_m_matrix(inst.polytope, opts);
    const GraphOracleResult oracle = max_independent_set(inst.source, opts.brute_force_cap);
    if (oracle.alpha >= inst.j) {
        const SimplexPoint witness = oracle_witness(inst, oracle);
        const Matrix m = convex_combination(inst.polytope, witness);
        const MMatrixResult check = is_nonsingular_m_matrix(m, MMatrixVariant::PositiveStable);
        if (!check.yes())
            throw std::logic_error("m-matrix witness failed positive-stability re-certification");
        return {Answer::Yes, witness, check.margin, DecisionMethod::GraphOracle};
    }
    return {Answer::No, std::nullopt, static_cast<double>(inst.j - oracle.alpha),
            DecisionMethod::GraphOracle};
}

Decision decide_exists_m_matrix(const MatrixPolytope& p, const DecideOptions& opts) {
    return numeric_exists_m_matrix(p, opts);
}

Decision decide_exists_hurwitz(const ReductionInstance& inst, const DecideOptions& opts) {
    if (!oracle_applies(inst, ReductionKind::Hurwitz, opts))
        return numeric_exists_hurwitz(inst.polytope, opts);
    const GraphOracleResult oracle = max_independent_set(inst.source, opts.brute_force_cap);
    if (oracle.alpha >= inst.j) {
        const SimplexPoint witness = oracle_witness(inst, oracle);
        const StabilityResult hw = is_hurwitz(convex_combination(inst.polytope, witness));
        if (!hw.stable())
            throw std::logic_error("hurwitz witness failed re-certification");
        return {Answer::Yes, witness, hw.gap, DecisionMethod::GraphOracle};
    }
    return {Answer::No, std::nullopt, static_cast<double>(inst.j - oracle.alpha),
            DecisionMethod::GraphOracle};
}

Decision decide_exists_hurwitz(const MatrixPolytope& p, const DecideOptions& opts) {
    return numeric_exists_hurwitz(p, opts);
}

} // namespace polystab
