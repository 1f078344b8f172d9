#include "polystab/switched_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "polystab/format.hpp"
#include "polystab/rng.hpp"

namespace polystab {

std::string to_string(SimStatus s) {
    switch (s) {
    case SimStatus::Ok: return "OK";
    case SimStatus::Diverged: return "DIVERGED";
    case SimStatus::NumericFailure: return "NUMERIC_FAILURE";
    }
    throw std::logic_error("unreachable sim status");
}

std::string to_string(StabilizabilityVerdict v) {
    return v == StabilizabilityVerdict::StabilizableEvidence ? "STABILIZABLE_EVIDENCE"
                                                             : "NO_EVIDENCE";
}

SwitchingPolicy SwitchingPolicy::constant(int index) {
    SwitchingPolicy p;
    p.kind = Kind::Constant;
    p.constant_index = index;
    return p;
}

SwitchingPolicy SwitchingPolicy::constant_combination(SimplexPoint point) {
    SwitchingPolicy p;
    p.kind = Kind::ConstantCombination;
    p.combination = std::move(point);
    return p;
}

SwitchingPolicy SwitchingPolicy::periodic(std::vector<std::pair<int, double>> schedule) {
    SwitchingPolicy p;
    p.kind = Kind::Periodic;
    p.schedule = std::move(schedule);
    return p;
}

SwitchingPolicy SwitchingPolicy::min_projection(double sample_period) {
    SwitchingPolicy p;
    p.kind = Kind::MinProjection;
    p.sample_period = sample_period;
    return p;
}

double Trajectory::final_norm() const {
    return states.empty() ? 0.0 : norm2(states.back());
}

double Trajectory::rate_estimate() const {
    if (times.size() < 2) return 0.0;
    const double span = times.back() - times.front();
    if (span <= 0.0) return 0.0;
    const double n0 = std::max(norm2(states.front()), 1e-300);
    const double nT = std::max(final_norm(), 1e-300);
    return std::log(nT / n0) / span;
}

namespace {

void validate_policy(const SwitchingPolicy& policy, int k) {
    using Kind = SwitchingPolicy::Kind;
    switch (policy.kind) {
    case Kind::Constant:
        if (policy.constant_index < 0 || policy.constant_index >= k)
            throw std::invalid_argument("policy: constant index out of range");
        return;
    case Kind::ConstantCombination:
        if (!policy.combination || policy.combination->size() != k)
            throw std::invalid_argument("policy: combination weights must match k");
        return;
    case Kind::Periodic:
        if (policy.schedule.empty())
            throw std::invalid_argument("policy: empty periodic schedule");
        for (const auto& [idx, dur] : policy.schedule) {
            if (idx < 0 || idx >= k)
                throw std::invalid_argument("policy: schedule index out of range");
            if (!(dur > 0.0)) throw std::invalid_argument("policy: durations must be positive");
        }
        return;
    case Kind::MinProjection:
        if (!(policy.sample_period > 0.0))
            throw std::invalid_argument("policy: sample_period must be positive");
        return;
    }
    throw std::logic_error("unreachable policy kind");
}

// RK4 with a fixed active matrix over one step; buffers preallocated.
struct Rk4Workspace {
    std::vector<double> k1, k2, k3, k4, tmp;

    explicit Rk4Workspace(std::size_t dim) : k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim) {}

    static void mul(const Matrix& a, const std::vector<double>& x, std::vector<double>& out) {
        const int n = a.rows();
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += a(i, j) * x[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(i)] = s;
        }
    }

    void step(const Matrix& a, std::vector<double>& x, double h) {
        const std::size_t n = x.size();
        mul(a, x, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
        mul(a, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
        mul(a, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
        mul(a, tmp, k4);
        const double sixth = h / 6.0;
        for (std::size_t i = 0; i < n; ++i)
            x[i] += sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
};

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace

Trajectory integrate(const MatrixPolytope& p, const SwitchingPolicy& policy,
                     const std::vector<double>& x0, double horizon, double step,
                     int record_stride) {
    p.validate();
    validate_policy(policy, p.k());
    const int dim = p.dim();
    if (static_cast<int>(x0.size()) != dim)
        throw std::invalid_argument("integrate: x0 dimension does not match polytope");
    if (!(step > 0.0)) throw std::invalid_argument("integrate: step must be positive");
    if (horizon < step) throw std::invalid_argument("integrate: horizon must be >= step");
    if (record_stride < 1) throw std::invalid_argument("integrate: record_stride must be >= 1");

    using Kind = SwitchingPolicy::Kind;
    const long long n_steps = std::max(1ll, std::llround(horizon / step));

    // Active matrix plumbing. Combination policies own their matrix.
    Matrix combination_matrix;
    if (policy.kind == Kind::ConstantCombination)
        combination_matrix = convex_combination(p, *policy.combination);

    // Symmetric parts for the min-projection decision rule.
    std::vector<Matrix> sym_parts;
    if (policy.kind == Kind::MinProjection) {
        sym_parts.reserve(p.matrices.size());
        for (const Matrix& a : p.matrices) sym_parts.push_back(a + a.transpose());
    }
    const long long steps_per_sample =
        policy.kind == Kind::MinProjection
            ? std::max(1ll, std::llround(policy.sample_period / step))
            : 1ll;

    // Periodic bookkeeping.
    std::size_t segment = 0;
    double next_boundary =
        policy.kind == Kind::Periodic ? policy.schedule.front().second : 0.0;

    auto quad = [&](const Matrix& s, const std::vector<double>& x) {
        double v = 0.0;
        for (int i = 0; i < dim; ++i) {
            double row = 0.0;
            for (int j = 0; j < dim; ++j) row += s(i, j) * x[static_cast<std::size_t>(j)];
            v += x[static_cast<std::size_t>(i)] * row;
        }
        return v;
    };

    int active = -1;
    const Matrix* active_matrix = nullptr;
    switch (policy.kind) {
    case Kind::Constant:
        active = policy.constant_index;
        active_matrix = &p.matrices[static_cast<std::size_t>(active)];
        break;
    case Kind::ConstantCombination:
        active = -1;
        active_matrix = &combination_matrix;
        break;
    case Kind::Periodic:
        active = policy.schedule.front().first;
        active_matrix = &p.matrices[static_cast<std::size_t>(active)];
        break;
    case Kind::MinProjection:
        break; // chosen at t = 0 below
    }

    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(n_steps / record_stride + 2));
    std::vector<double> x = x0;
    std::vector<double> x_before_step = x0;
    Rk4Workspace ws(static_cast<std::size_t>(dim));

    long long last_recorded_step = -1;
    auto record = [&](double t, long long k, const std::vector<double>& state) {
        if (k == last_recorded_step) return;
        traj.times.push_back(t);
        traj.states.push_back(state);
        traj.active_indices.push_back(active);
        last_recorded_step = k;
    };
    auto log_switch = [&](double t, int idx) {
        if (traj.switch_log.empty() || traj.switch_log.back().second != idx)
            traj.switch_log.emplace_back(t, idx);
    };

    bool recorded_last = false;
    for (long long k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * step;

        // policy decisions take effect at step boundaries
        if (policy.kind == Kind::MinProjection && k % steps_per_sample == 0) {
            int best = 0;
            double best_val = quad(sym_parts[0], x);
            for (int i = 1; i < p.k(); ++i) {
                const double v = quad(sym_parts[static_cast<std::size_t>(i)], x);
                if (v < best_val) {
                    best_val = v;
                    best = i;
                }
            }
            active = best;
            active_matrix = &p.matrices[static_cast<std::size_t>(active)];
        } else if (policy.kind == Kind::Periodic) {
            while (t >= next_boundary - 1e-12) {
                segment = (segment + 1) % policy.schedule.size();
                next_boundary += policy.schedule[segment].second;
                active = policy.schedule[segment].first;
                active_matrix = &p.matrices[static_cast<std::size_t>(active)];
            }
        }
        if (k == 0) log_switch(0.0, active);
        else if (!traj.switch_log.empty() && traj.switch_log.back().second != active)
            log_switch(t, active);

        if (k % record_stride == 0) record(t, k, x);

        x_before_step = x;
        ws.step(*active_matrix, x, step);

        if (!all_finite(x)) {
            // keep the trajectory's states finite: the last good state is
            // the record, the status carries the failure
            traj.status = SimStatus::NumericFailure;
            record(t, k, x_before_step);
            recorded_last = true;
            break;
        }
        if (norm2(x) > kDivergenceThreshold) {
            traj.status = SimStatus::Diverged;
            record((static_cast<double>(k) + 1.0) * step, k + 1, x);
            recorded_last = true;
            break;
        }
    }
    if (!recorded_last) record(static_cast<double>(n_steps) * step, n_steps, x);
    return traj;
}

std::string trajectory_csv(const Trajectory& t) {
    std::ostringstream out;
    const std::size_t dim = t.states.empty() ? 0 : t.states.front().size();
    out << "t";
    for (std::size_t i = 1; i <= dim; ++i) out << ",x_" << i;
    out << ",active_index\n";
    for (std::size_t row = 0; row < t.times.size(); ++row) {
        out << format_double(t.times[row]);
        for (double v : t.states[row]) out << "," << format_double(v);
        out << "," << (t.active_indices[row] + 1) << "\n"; // 1-based; 0 = combination
    }
    return out.str();
}

StabilizabilityReport assess_switched_stabilizability(const MatrixPolytope& p,
                                                      const AssessConfig& cfg) {
    p.validate();
    const int dim = p.dim();

    std::vector<std::vector<double>> ics = cfg.initial_conditions;
    if (ics.empty()) {
        for (int i = 0; i < dim; ++i) {
            std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
            e[static_cast<std::size_t>(i)] = 1.0;
            ics.push_back(std::move(e));
        }
        Rng rng(cfg.seed);
        for (int i = 0; i < cfg.num_random_ics; ++i) ics.push_back(rng.unit_vector(dim));
    }

    StabilizabilityReport report;
    report.policy_used = cfg.policy.value_or(SwitchingPolicy::min_projection(cfg.sample_period));

    const long long n_steps = std::max(1ll, std::llround(cfg.horizon / cfg.step));
    const int stride = static_cast<int>(std::min<long long>(n_steps, 1 << 30));

    bool all_decayed = true;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& ic : ics) {
        const Trajectory traj = integrate(p, report.policy_used, ic, cfg.horizon, cfg.step, stride);
        RunOutcome run;
        run.x0 = ic;
        run.status = traj.status;
        run.rate = traj.rate_estimate();
        if (!std::isfinite(run.rate)) run.rate = std::numeric_limits<double>::infinity();
        run.decayed = traj.status == SimStatus::Ok && run.rate < -cfg.decay_margin;
        if (traj.status == SimStatus::NumericFailure) report.numeric_failure = true;
        all_decayed = all_decayed && run.decayed;
        worst = std::max(worst, run.rate);
        report.runs.push_back(std::move(run));
    }
    report.verdict = all_decayed && !report.runs.empty()
                         ? StabilizabilityVerdict::StabilizableEvidence
                         : StabilizabilityVerdict::NoEvidence;
    report.worst_rate = report.runs.empty() ? 0.0 : worst;
    return report;
}

int ExperimentReport::flagged_count() const {
    int c = 0;
    for (const auto& row : rows)
        if (row.flag == "CONJECTURE_COUNTEREXAMPLE_CANDIDATE") ++c;
    return c;
}

int ExperimentReport::failure_count() const {
    int c = 0;
    for (const auto& row : rows)
        if (!row.flag.empty() && row.flag != "CONJECTURE_COUNTEREXAMPLE_CANDIDATE") ++c;
    return c;
}

std::string ExperimentReport::csv() const {
    std::ostringstream out;
    out << "graph_id,n,j,alpha,fixed_answer,switched_vertex_verdict,switched_convex_verdict,"
           "worst_rate,flag\n";
    for (const auto& row : rows) {
        out << row.graph_id << "," << row.n << "," << row.j << "," << row.alpha << ","
            << to_string(row.fixed_answer) << "," << to_string(row.switched_vertex) << ","
            << to_string(row.switched_convex) << "," << format_double(row.worst_rate) << ","
            << row.flag << "\n";
    }
    return out.str();
}

ExperimentReport conjecture_experiment(const std::vector<std::pair<std::string, Graph>>& graphs,
                                       const std::vector<int>& j_values,
                                       const ExperimentConfig& cfg) {
    ExperimentReport report;
    for (const auto& [id, g] : graphs) {
        for (int j : j_values) {
            ExperimentRow row;
            row.graph_id = id;
            row.n = g.n();
            row.j = j;
            try {
                const GraphOracleResult oracle = max_independent_set(g, cfg.brute_force_cap);
                row.alpha = oracle.alpha;
                const ReductionInstance inst = build_hurwitz_instance(g, j);

                DecideOptions opts;
                opts.brute_force_cap = cfg.brute_force_cap;
                opts.restarts = cfg.restarts;
                opts.seed = cfg.assess.seed;
                const Decision fixed = decide_exists_hurwitz(inst, opts);
                row.fixed_answer = fixed.answer;

                AssessConfig vertex_cfg = cfg.assess;
                vertex_cfg.policy = SwitchingPolicy::min_projection(cfg.assess.sample_period);
                const StabilizabilityReport vertex_report =
                    assess_switched_stabilizability(inst.polytope, vertex_cfg);
                row.switched_vertex = vertex_report.verdict;

                // Constant convexified signal at the best known combination:
                // the exact witness when fixed-stabilizable, otherwise the
                // numeric abscissa minimizer.
                SimplexPoint convex_point =
                    fixed.witness
                        ? *fixed.witness
                        : optimize_spectral_over_simplex(inst.polytope,
                                                         SpectralObjective::Abscissa,
                                                         Direction::Minimize, cfg.restarts,
                                                         cfg.assess.seed)
                              .best_point;
                AssessConfig convex_cfg = cfg.assess;
                convex_cfg.policy = SwitchingPolicy::constant_combination(convex_point);
                const StabilizabilityReport convex_report =
                    assess_switched_stabilizability(inst.polytope, convex_cfg);
                row.switched_convex = convex_report.verdict;

                if (convex_report.verdict == StabilizabilityVerdict::StabilizableEvidence)
                    row.worst_rate = convex_report.worst_rate;
                else if (vertex_report.verdict == StabilizabilityVerdict::StabilizableEvidence)
                    row.worst_rate = vertex_report.worst_rate;
                else
                    row.worst_rate = std::max(vertex_report.worst_rate, convex_report.worst_rate);

                if (vertex_report.numeric_failure || convex_report.numeric_failure)
                    row.flag = "NUMERIC_FAILURE";
                else if (fixed.answer == Answer::No &&
                         (row.switched_vertex == StabilizabilityVerdict::StabilizableEvidence ||
                          row.switched_convex == StabilizabilityVerdict::StabilizableEvidence))
                    row.flag = "CONJECTURE_COUNTEREXAMPLE_CANDIDATE";
            } catch (const std::exception& e) {
                row.flag = std::string("ERROR: ") + e.what();
            }
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

} // namespace polystab
