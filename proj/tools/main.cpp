// polystab command line: build graph-derived matrix polytopes, decide the
// stability existence questions with certified witnesses, inspect spectra,
// simulate switched trajectories, and run the stabilizability experiment.
//
// Machine-readable JSON goes to stdout, human summaries to stderr. Exit
// codes: 0 = success/YES, 1 = NO, 2 = usage or input error, 3 = UNKNOWN or
// BOUNDARY.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polystab/errors.hpp"
#include "polystab/format.hpp"
#include "polystab/graph.hpp"
#include "polystab/optimize.hpp"
#include "polystab/polytope_json.hpp"
#include "polystab/reductions.hpp"
#include "polystab/rng.hpp"
#include "polystab/spectral.hpp"
#include "polystab/switched_sim.hpp"

namespace {

using namespace polystab;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, delim)) parts.push_back(cur);
    return parts;
}

double parse_real(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("cannot parse " + what + " '" + s + "'");
    }
}

int parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("cannot parse " + what + " '" + s + "'");
    }
}

SimplexPoint parse_weights(const std::string& spec, int k) {
    if (spec == "uniform") return SimplexPoint::uniform(k);
    if (spec.rfind("vertex:", 0) == 0) {
        const int idx = parse_int(spec.substr(7), "vertex index");
        if (idx < 1 || idx > k) throw std::runtime_error("vertex index out of range [1,k]");
        return SimplexPoint::vertex(k, idx - 1);
    }
    std::vector<double> w;
    for (const std::string& tok : split(spec, ',')) w.push_back(parse_real(tok, "weight"));
    if (static_cast<int>(w.size()) != k)
        throw std::runtime_error("expected " + std::to_string(k) + " weights");
    return SimplexPoint(std::move(w));
}

std::vector<double> parse_x0(const std::string& spec, int dim) {
    if (spec.size() >= 2 && spec[0] == 'e') {
        bool basis = true;
        for (std::size_t i = 1; i < spec.size(); ++i)
            basis = basis && std::isdigit(static_cast<unsigned char>(spec[i]));
        if (basis) {
            const int idx = parse_int(spec.substr(1), "basis index");
            if (idx < 1 || idx > dim) throw std::runtime_error("basis index out of range [1,n]");
            std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
            x[static_cast<std::size_t>(idx - 1)] = 1.0;
            return x;
        }
    }
    std::vector<double> x;
    for (const std::string& tok : split(spec, ',')) x.push_back(parse_real(tok, "state entry"));
    if (static_cast<int>(x.size()) != dim)
        throw std::runtime_error("expected " + std::to_string(dim) + " state entries");
    return x;
}

SwitchingPolicy parse_policy(const std::string& spec, int k, double sample_period) {
    if (spec == "min-projection") return SwitchingPolicy::min_projection(sample_period);
    if (spec.rfind("constant:", 0) == 0) {
        const int idx = parse_int(spec.substr(9), "policy index");
        if (idx < 1 || idx > k) throw std::runtime_error("policy index out of range [1,k]");
        return SwitchingPolicy::constant(idx - 1);
    }
    if (spec.rfind("constant-point:", 0) == 0)
        return SwitchingPolicy::constant_combination(parse_weights(spec.substr(15), k));
    if (spec.rfind("periodic:", 0) == 0) {
        std::vector<std::pair<int, double>> schedule;
        for (const std::string& seg : split(spec.substr(9), ',')) {
            const auto parts = split(seg, ':');
            if (parts.size() != 2) throw std::runtime_error("periodic segment must be idx:dur");
            const int idx = parse_int(parts[0], "policy index");
            if (idx < 1 || idx > k) throw std::runtime_error("policy index out of range [1,k]");
            schedule.emplace_back(idx - 1, parse_real(parts[1], "duration"));
        }
        return SwitchingPolicy::periodic(std::move(schedule));
    }
    throw std::runtime_error("unknown policy '" + spec + "'");
}

std::vector<int> parse_j_spec(const std::string& spec) {
    std::vector<int> js;
    const auto range = spec.find("..");
    if (range != std::string::npos) {
        const int lo = parse_int(spec.substr(0, range), "j");
        const int hi = parse_int(spec.substr(range + 2), "j");
        for (int j = lo; j <= hi; ++j) js.push_back(j);
    } else {
        for (const std::string& tok : split(spec, ',')) js.push_back(parse_int(tok, "j"));
    }
    if (js.empty()) throw std::runtime_error("empty j specification");
    return js;
}

int exit_code_for(Answer a) {
    switch (a) {
    case Answer::Yes: return 0;
    case Answer::No: return 1;
    case Answer::Unknown:
    case Answer::Boundary: return 3;
    }
    return 2;
}

// ---------------------------------------------------------------------

struct ReduceArgs {
    std::string graph_file;
    std::string kind = "min-radius";
    int j = 2;
    std::string out;
};

int cmd_reduce(const ReduceArgs& args) {
    const Graph g = parse_dimacs(read_file(args.graph_file));
    const ReductionInstance inst =
        build_reduction(g, args.j, reduction_kind_from_string(args.kind));
    const std::string doc = instance_to_json(inst);
    if (args.out.empty())
        std::cout << doc;
    else
        write_file_atomic(args.out, doc);
    std::cerr << "reduce: kind=" << to_string(inst.kind) << " n=" << inst.polytope.dim()
              << " k=" << inst.polytope.k() << " r=" << format_double(inst.r) << "\n";
    return 0;
}

struct DecideArgs {
    std::string polytope_file;
    std::string question; // empty = infer from meta
    int restarts = 16;
    std::uint64_t seed = 0;
    double margin = kDefaultStabilityMargin;
    int cap = kDefaultBruteForceCap;
};

int cmd_decide(const DecideArgs& args) {
    if (!(args.margin > 0.0)) throw std::runtime_error("--margin must be positive");
    if (args.restarts < 1) throw std::runtime_error("--restarts must be >= 1");
    const LoadedPolytope loaded = polytope_from_json(read_file(args.polytope_file));

    std::string question = args.question;
    if (question.empty()) {
        if (!loaded.instance)
            throw std::runtime_error("polytope has no meta; --question is required");
        switch (loaded.instance->kind) {
        case ReductionKind::MinRadius: question = "schur-exists"; break;
        case ReductionKind::MaxRadius: question = "unstable-exists"; break;
        case ReductionKind::MMatrix: question = "m-matrix-exists"; break;
        case ReductionKind::Hurwitz: question = "hurwitz-exists"; break;
        }
    }

    DecideOptions opts;
    opts.restarts = args.restarts;
    opts.seed = args.seed;
    opts.margin = args.margin;
    opts.brute_force_cap = args.cap;

    Decision decision;
    if (question == "schur-exists")
        decision = loaded.instance ? decide_min_radius(*loaded.instance, opts)
                                   : decide_min_radius(loaded.polytope, opts);
    else if (question == "unstable-exists")
        decision = loaded.instance ? decide_max_radius(*loaded.instance, opts)
                                   : decide_max_radius(loaded.polytope, opts);
    else if (question == "m-matrix-exists")
        decision = loaded.instance ? decide_exists_m_matrix(*loaded.instance, opts)
                                   : decide_exists_m_matrix(loaded.polytope, opts);
    else if (question == "hurwitz-exists")
        decision = loaded.instance ? decide_exists_hurwitz(*loaded.instance, opts)
                                   : decide_exists_hurwitz(loaded.polytope, opts);
    else
        throw std::runtime_error("unknown question '" + question + "'");

    std::cout << decision_to_json(decision);
    std::cerr << "decide: " << question << " -> " << to_string(decision.answer)
              << " (method=" << to_string(decision.method)
              << ", margin=" << format_double(decision.margin) << ")\n";
    return exit_code_for(decision.answer);
}

struct SpectrumArgs {
    std::string polytope_file;
    std::string weights = "uniform";
};

int cmd_spectrum(const SpectrumArgs& args) {
    const LoadedPolytope loaded = polytope_from_json(read_file(args.polytope_file));
    const SimplexPoint pi = parse_weights(args.weights, loaded.polytope.k());
    const Matrix b = convex_combination(loaded.polytope, pi);
    const Spectrum dense = eigenvalues(b);

    nlohmann::json out;
    out["eigensolver"] = nlohmann::json::array();
    for (const auto& ev : dense.eigenvalues) out["eigensolver"].push_back({ev.real(), ev.imag()});

    std::cerr << "spectrum: " << (loaded.instance ? to_string(loaded.instance->kind) : "raw")
              << " polytope, n=" << loaded.polytope.dim() << "\n";
    std::cerr << "  eigensolver:";
    for (const auto& ev : dense.eigenvalues)
        std::cerr << " (" << format_double(ev.real()) << "," << format_double(ev.imag()) << ")";
    std::cerr << "\n";

    if (loaded.instance) {
        const BlockSpectrum cf = closed_form_spectrum(*loaded.instance, pi);
        const std::vector<double> cf_vals = cf.combination_eigenvalues();
        double deviation = 0.0;
        for (std::size_t i = 0; i < cf_vals.size(); ++i) {
            deviation =
                std::max(deviation, std::abs(dense.eigenvalues[i].real() - cf_vals[i]));
            deviation = std::max(deviation, std::abs(dense.eigenvalues[i].imag()));
        }
        out["closed_form"] = cf_vals;
        out["max_deviation"] = deviation;
        std::cerr << "  closed form:";
        for (double v : cf_vals) std::cerr << " " << format_double(v);
        std::cerr << "\n  max deviation: " << format_double(deviation) << "\n";
    } else {
        out["closed_form"] = nullptr;
        out["max_deviation"] = nullptr;
        std::cerr << "  closed form: not available (no reduction meta)\n";
    }
    std::cout << out.dump() << "\n";
    return 0;
}

struct SimulateArgs {
    std::string polytope_file;
    std::string policy = "min-projection";
    std::string x0 = "e1";
    double horizon = 10.0;
    double step = 1e-3;
    double sample_period = 1e-2;
    int record_stride = 1;
    std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
    const LoadedPolytope loaded = polytope_from_json(read_file(args.polytope_file));
    const SwitchingPolicy policy =
        parse_policy(args.policy, loaded.polytope.k(), args.sample_period);
    const std::vector<double> x0 = parse_x0(args.x0, loaded.polytope.dim());

    const Trajectory traj =
        integrate(loaded.polytope, policy, x0, args.horizon, args.step, args.record_stride);
    if (!args.out.empty()) write_file_atomic(args.out, trajectory_csv(traj));

    nlohmann::json out{{"status", to_string(traj.status)},
                       {"final_time", traj.times.back()},
                       {"final_norm", traj.final_norm()},
                       {"rate", traj.rate_estimate()}};
    std::cout << out.dump() << "\n";
    std::cerr << "simulate: status=" << to_string(traj.status)
              << " final_norm=" << format_double(traj.final_norm())
              << " rate=" << format_double(traj.rate_estimate()) << "\n";
    return traj.status == SimStatus::NumericFailure ? 2 : 0;
}

struct ExperimentArgs {
    std::string graphs_dir;
    int random_graphs = 0;
    int n = 6;
    double edge_prob = 0.5;
    std::string j_spec = "2..4";
    std::uint64_t seed = 0;
    std::string out = "experiment.csv";
    double horizon = 50.0;
    double step = 1e-3;
    double sample_period = 1e-2;
    int num_random_ics = 20;
    int restarts = 8;
    int cap = kDefaultBruteForceCap;
};

int cmd_experiment(const ExperimentArgs& args) {
    std::vector<std::pair<std::string, Graph>> graphs;
    if (!args.graphs_dir.empty()) {
        namespace fs = std::filesystem;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(args.graphs_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".col")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        if (files.empty()) throw std::runtime_error("no .col files in " + args.graphs_dir);
        for (const auto& f : files)
            graphs.emplace_back(f.filename().string(), parse_dimacs(read_file(f.string())));
    } else if (args.random_graphs > 0) {
        Rng rng(args.seed);
        for (int i = 0; i < args.random_graphs; ++i)
            graphs.emplace_back("er-" + std::to_string(i),
                                random_graph(args.n, args.edge_prob, rng));
    } else {
        throw std::runtime_error("provide --graphs-dir or --random-graphs");
    }

    ExperimentConfig cfg;
    cfg.assess.horizon = args.horizon;
    cfg.assess.step = args.step;
    cfg.assess.sample_period = args.sample_period;
    cfg.assess.num_random_ics = args.num_random_ics;
    cfg.assess.seed = args.seed;
    cfg.brute_force_cap = args.cap;
    cfg.restarts = args.restarts;

    const ExperimentReport report = conjecture_experiment(graphs, parse_j_spec(args.j_spec), cfg);
    write_file_atomic(args.out, report.csv());

    nlohmann::json out{{"rows", report.rows.size()},
                       {"flagged", report.flagged_count()},
                       {"failures", report.failure_count()},
                       {"out", args.out}};
    std::cout << out.dump() << "\n";
    std::cerr << "experiment: " << report.rows.size() << " rows, " << report.flagged_count()
              << " conjecture-counterexample candidates, " << report.failure_count()
              << " failures -> " << args.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph-derived matrix polytopes: stability decisions, spectra, simulation"};
    app.require_subcommand(1);

    ReduceArgs reduce_args;
    CLI::App* reduce = app.add_subcommand("reduce", "build a polytope from a DIMACS graph");
    reduce->add_option("graph", reduce_args.graph_file, "DIMACS .col file")->required();
    reduce->add_option("--kind", reduce_args.kind, "min-radius|max-radius|m-matrix|hurwitz")
        ->check(CLI::IsMember({"min-radius", "max-radius", "m-matrix", "hurwitz"}));
    reduce->add_option("--j", reduce_args.j, "threshold (>= 2)")->required();
    reduce->add_option("-o,--out", reduce_args.out, "output polytope JSON (default stdout)");

    DecideArgs decide_args;
    CLI::App* decide = app.add_subcommand("decide", "answer an existence question");
    decide->add_option("polytope", decide_args.polytope_file, "polytope JSON file")->required();
    decide->add_option("--question", decide_args.question,
                       "schur-exists|unstable-exists|m-matrix-exists|hurwitz-exists");
    decide->add_option("--restarts", decide_args.restarts, "random restarts for numeric search");
    decide->add_option("--seed", decide_args.seed, "random seed");
    decide->add_option("--margin", decide_args.margin, "certification margin");
    decide->add_option("--cap", decide_args.cap, "brute-force cap on graph size");

    SpectrumArgs spectrum_args;
    CLI::App* spectrum = app.add_subcommand("spectrum", "closed form vs eigensolver spectrum");
    spectrum->add_option("polytope", spectrum_args.polytope_file, "polytope JSON file")->required();
    spectrum->add_option("--weights", spectrum_args.weights, "uniform|vertex:K|w1,w2,...");

    SimulateArgs simulate_args;
    CLI::App* simulate = app.add_subcommand("simulate", "integrate a switched trajectory");
    simulate->add_option("polytope", simulate_args.polytope_file, "polytope JSON file")->required();
    simulate->add_option("--policy", simulate_args.policy,
                         "min-projection|constant:K|constant-point:w,...|periodic:K:D,...");
    simulate->add_option("--x0", simulate_args.x0, "eK or comma list");
    simulate->add_option("--horizon", simulate_args.horizon, "integration horizon");
    simulate->add_option("--step", simulate_args.step, "RK4 step");
    simulate->add_option("--sample-period", simulate_args.sample_period,
                         "min-projection sampling period");
    simulate->add_option("--record-stride", simulate_args.record_stride, "record every k-th step");
    simulate->add_option("-o,--out", simulate_args.out, "trajectory CSV path");

    ExperimentArgs experiment_args;
    CLI::App* experiment =
        app.add_subcommand("experiment", "fixed vs switched stabilizability sweep");
    experiment->add_option("--graphs-dir", experiment_args.graphs_dir, "directory of .col files");
    experiment->add_option("--random-graphs", experiment_args.random_graphs,
                           "number of seeded random graphs");
    experiment->add_option("--n", experiment_args.n, "random graph vertex count");
    experiment->add_option("--edge-prob", experiment_args.edge_prob,
                           "random graph edge probability");
    experiment->add_option("--j", experiment_args.j_spec, "thresholds, e.g. 2..4 or 2,3");
    experiment->add_option("--seed", experiment_args.seed, "random seed");
    experiment->add_option("-o,--out", experiment_args.out, "experiment CSV path");
    experiment->add_option("--horizon", experiment_args.horizon, "integration horizon");
    experiment->add_option("--step", experiment_args.step, "RK4 step");
    experiment->add_option("--sample-period", experiment_args.sample_period, "sampling period");
    experiment->add_option("--ics", experiment_args.num_random_ics, "random initial conditions");
    experiment->add_option("--restarts", experiment_args.restarts, "numeric search restarts");
    experiment->add_option("--cap", experiment_args.cap, "brute-force cap on graph size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*reduce) return cmd_reduce(reduce_args);
        if (*decide) return cmd_decide(decide_args);
        if (*spectrum) return cmd_spectrum(spectrum_args);
        if (*simulate) return cmd_simulate(simulate_args);
        if (*experiment) return cmd_experiment(experiment_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "error: no subcommand\n";
    return 2;
}
