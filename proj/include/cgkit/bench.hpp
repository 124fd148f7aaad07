#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cgkit/estimators.hpp"
#include "cgkit/feasible_set.hpp"
#include "cgkit/problems.hpp"
#include "cgkit/scgs.hpp"
#include "cgkit/sfw.hpp"
#include "cgkit/stats.hpp"
#include "cgkit/svg.hpp"
#include "cgkit/trace.hpp"
#include "cgkit/zo_sgd.hpp"

namespace cgkit {

// ---------------------------------------------------------------------------
// f* baseline estimation
// ---------------------------------------------------------------------------

struct FStarEstimate {
    double lower_bound = 0.0;   // best observed f minus the final FW gap
    double certified_gap = 0.0; // accuracy certificate
    long iterations = 0;
};

// Deterministic full-gradient Frank-Wolfe with exact line search. For convex
// f, f* >= f(x) - G_f(x), so the returned value is a valid lower bound with
// the final gap as its certificate. Stops early once the gap is at rounding
// level. Does not touch any oracle counters.
inline FStarEstimate estimate_f_star(const StochasticObjective& obj,
                                     const FeasibleSet& set, long budget) {
    if (budget < 10000) throw std::invalid_argument("estimate_f_star: budget must be >= 1e4");
    OracleCounters scratch;
    Point x = set.lmo(Point::Ones(obj.dim()), scratch);
    double f_best = obj.value(x);
    double gap = 0.0;
    long it = 0;
    for (; it < budget; ++it) {
        Point grad = obj.gradient(x);
        Point v = set.lmo(grad, scratch);
        gap = grad.dot(x - v);
        f_best = std::min(f_best, obj.value(x));
        if (gap <= 1e-13 * (1.0 + std::abs(f_best))) break;
        double gamma = obj.line_search(x, v - x);
        if (gamma == 0.0) break;
        x += gamma * (v - x);
    }
    return {f_best - gap, gap, it};
}

// ---------------------------------------------------------------------------
// Experiment configuration (flat key = value text file)
// ---------------------------------------------------------------------------

// Configuration problems (bad file, bad key, bad value) get their own type so
// the CLI can map them to a distinct exit code.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SolverKind { Sfw, Scgs, ZoSgd };
enum class ProblemKind { Blobs, Quadratic };

struct ExperimentConfig {
    ProblemKind problem = ProblemKind::Quadratic;
    // blobs parameters
    BlobsConfig blobs;
    std::string data_file;  // optional dataset CSV (overrides generation)
    // quadratic parameters
    int quad_n = 8;
    int quad_d = 20;
    double quad_condition = 4.0;

    // feasible set
    SetKind set_kind = SetKind::L1Ball;
    double set_param = 1.0;

    SolverKind solver = SolverKind::Sfw;
    OracleMode mode = OracleMode::FirstOrder;
    int T = 100;
    int num_seeds = 20;
    std::uint64_t base_seed = 1;
    std::optional<double> rho_override;
    long fstar_budget = 100000;
    std::vector<int> checkpoints;

    static ExperimentConfig parse(std::istream& is);
    static ExperimentConfig load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw config_error("config file not found: " + path);
        return parse(f);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error("config: bad boolean for " + key + ": " + v);
}

}  // namespace detail

inline ExperimentConfig ExperimentConfig::parse(std::istream& is) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        }
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        try {
            if (key == "problem") {
                if (val == "blobs") cfg.problem = ProblemKind::Blobs;
                else if (val == "quadratic") cfg.problem = ProblemKind::Quadratic;
                else throw config_error("unknown problem kind: " + val);
            } else if (key == "blobs.n") cfg.blobs.n = std::stoi(val);
            else if (key == "blobs.d") cfg.blobs.d = std::stoi(val);
            else if (key == "blobs.mean_shift") cfg.blobs.mean_shift = std::stod(val);
            else if (key == "blobs.sigma") cfg.blobs.sigma = std::stod(val);
            else if (key == "blobs.separable") cfg.blobs.separable = detail::parse_bool(val, key);
            else if (key == "blobs.margin_floor") cfg.blobs.margin_floor = std::stod(val);
            else if (key == "blobs.feature_scale") cfg.blobs.feature_scale = std::stod(val);
            else if (key == "blobs.seed") cfg.blobs.seed = std::stoull(val);
            else if (key == "data_file") cfg.data_file = val;
            else if (key == "quadratic.n") cfg.quad_n = std::stoi(val);
            else if (key == "quadratic.d") cfg.quad_d = std::stoi(val);
            else if (key == "quadratic.condition") cfg.quad_condition = std::stod(val);
            else if (key == "set") {
                if (val == "l1ball") cfg.set_kind = SetKind::L1Ball;
                else if (val == "l2ball") cfg.set_kind = SetKind::L2Ball;
                else if (val == "simplex") cfg.set_kind = SetKind::Simplex;
                else throw config_error("unknown set kind: " + val);
            } else if (key == "set.param") cfg.set_param = std::stod(val);
            else if (key == "solver") {
                if (val == "sfw") cfg.solver = SolverKind::Sfw;
                else if (val == "scgs") cfg.solver = SolverKind::Scgs;
                else if (val == "zosgd") cfg.solver = SolverKind::ZoSgd;
                else throw config_error("unknown solver: " + val);
            } else if (key == "mode") {
                if (val == "first") cfg.mode = OracleMode::FirstOrder;
                else if (val == "zeroth") cfg.mode = OracleMode::ZerothOrder;
                else throw config_error("unknown oracle mode: " + val);
            } else if (key == "T") cfg.T = std::stoi(val);
            else if (key == "num_seeds") cfg.num_seeds = std::stoi(val);
            else if (key == "base_seed") cfg.base_seed = std::stoull(val);
            else if (key == "rho") cfg.rho_override = std::stod(val);
            else if (key == "fstar_budget") cfg.fstar_budget = std::stol(val);
            else if (key == "checkpoints") {
                std::stringstream ss(val);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    cfg.checkpoints.push_back(std::stoi(detail::trim(item)));
                }
            } else {
                throw config_error("unknown config key: " + key);
            }
        } catch (const std::invalid_argument&) {
            throw config_error("config line " + std::to_string(lineno) +
                                     ": bad value for " + key + ": " + val);
        }
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Parallel seed fan-out
// ---------------------------------------------------------------------------

inline int default_jobs() {
    if (const char* env = std::getenv("CGKIT_JOBS")) {
        int j = std::atoi(env);
        if (j >= 1) return j;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(k) for k in [0, count); results are collected by index so the
// reduction order is independent of completion order. The first failing index
// wins error reporting.
template <typename Fn>
inline void parallel_for_ordered(int count, int jobs, Fn&& fn) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::string> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (int k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
                try {
                    fn(k);
                } catch (const std::exception& e) {
                    errors[k] = e.what();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (int k = 0; k < count; ++k) {
        if (!errors[k].empty()) {
            throw std::runtime_error("seed " + std::to_string(k) + ": " + errors[k]);
        }
    }
}

// ---------------------------------------------------------------------------
// Experiment driver
// ---------------------------------------------------------------------------

struct AggregateRow {
    int t = 0;
    double mean_subopt = 0.0;
    double stderr_subopt = 0.0;
    double sfo = 0.0, szo = 0.0, lmo = 0.0;  // lmo averaged (varies for SCGS)
};

struct AggregateTrace {
    std::vector<AggregateRow> rows;
    double f_star_used = 0.0;
    double f_star_gap = 0.0;  // 0 when an interpolation certificate fixed f* = 0
    double rho_used = 1.0;
    std::vector<RunTrace> traces;  // per-seed, ordered by seed index
};

struct ExperimentSetup {
    std::shared_ptr<StochasticObjective> objective;
    FeasibleSet set;
    double rho = 1.0;
    double f_star = 0.0;
    double f_star_gap = 0.0;
};

inline FeasibleSet make_set(const ExperimentConfig& cfg, int d) {
    switch (cfg.set_kind) {
        case SetKind::L1Ball: return FeasibleSet::l1_ball(d, cfg.set_param);
        case SetKind::L2Ball: return FeasibleSet::l2_ball(d, cfg.set_param);
        case SetKind::Simplex: return FeasibleSet::simplex(d, cfg.set_param);
        default: throw std::runtime_error("make_set: unsupported set kind");
    }
}

inline ExperimentSetup build_experiment(const ExperimentConfig& cfg) {
    if (cfg.problem == ProblemKind::Blobs) {
        Eigen::MatrixXd x;
        Eigen::VectorXd y;
        std::optional<Point> certificate;
        if (!cfg.data_file.empty()) {
            std::ifstream f(cfg.data_file);
            if (!f) throw std::runtime_error("data file not found: " + cfg.data_file);
            std::tie(x, y) = read_dataset_csv(f);
            // Generated separable datasets are normalized so w = e_1 attains
            // margin >= 1; re-checking that recovers the f* = 0 certificate
            // for data that round-tripped through CSV.
            bool e1_separates = true;
            for (int i = 0; i < x.rows(); ++i) {
                if (y[i] * x(i, 0) < 1.0) {
                    e1_separates = false;
                    break;
                }
            }
            if (e1_separates && x.rows() > 0) {
                Point w0 = Point::Zero(static_cast<int>(x.cols()));
                w0[0] = 1.0;
                certificate = w0;
            }
        } else {
            BlobsData data = generate_blobs(cfg.blobs);
            x = std::move(data.x);
            y = std::move(data.y);
            certificate = data.certificate;
        }
        int d = static_cast<int>(x.cols());
        FeasibleSet set = make_set(cfg, d);
        if (certificate && cfg.set_kind == SetKind::L1Ball && cfg.set_param >= 1.0) {
            auto obj = std::make_shared<HingeSquaredObjective>(std::move(x), std::move(y), 0.0);
            double rho = cfg.rho_override.value_or(obj->max_component_smoothness() /
                                                   obj->smoothness());
            return {obj, set, rho, 0.0, 0.0};
        }
        auto probe = HingeSquaredObjective(x, y);
        FStarEstimate est = estimate_f_star(probe, set, cfg.fstar_budget);
        auto obj = std::make_shared<HingeSquaredObjective>(std::move(x), std::move(y),
                                                           est.lower_bound);
        double rho = cfg.rho_override.value_or(obj->max_component_smoothness() /
                                               obj->smoothness());
        return {obj, set, rho, est.lower_bound, est.certified_gap};
    }
    // Interpolating quadratic; x* strictly interior along e_1.
    FeasibleSet set = make_set(cfg, cfg.quad_d);
    Point x_star = Point::Zero(cfg.quad_d);
    x_star[0] = 0.3 * cfg.set_param;
    RngStream prng(cfg.base_seed, 0x70726f62ULL);  // problem-construction stream
    auto obj = std::make_shared<InterpolatingQuadratic>(
        make_quadratic(cfg.quad_n, cfg.quad_d, cfg.quad_condition, x_star, prng));
    double rho = cfg.rho_override.value_or(
        cfg.mode == OracleMode::FirstOrder ? obj->rho_variance() : obj->rho_moment());
    return {obj, set, rho, 0.0, 0.0};
}

inline RunTrace run_single_seed(const ExperimentSetup& setup, const ExperimentConfig& cfg,
                                int seed_index) {
    RngStream rng(cfg.base_seed + seed_index, static_cast<std::uint64_t>(seed_index));
    const auto& obj = *setup.objective;
    Point x0 = setup.set.random_point(rng, 3);
    switch (cfg.solver) {
        case SolverKind::Sfw: {
            SfwSchedule sched = cfg.mode == OracleMode::FirstOrder
                                    ? SfwSchedule::first_order(cfg.T)
                                    : SfwSchedule::zeroth_order(cfg.T, obj.dim(),
                                                                setup.set.diameter());
            return sfw_run(obj, setup.set, x0, sched, rng);
        }
        case SolverKind::Scgs: {
            ScgsSchedule sched =
                cfg.mode == OracleMode::FirstOrder
                    ? ScgsSchedule::first_order(cfg.T, obj.smoothness(),
                                                setup.set.diameter(), setup.rho)
                    : ScgsSchedule::zeroth_order(cfg.T, obj.dim(), obj.smoothness(),
                                                 setup.set.diameter(), setup.rho);
            return scgs_run(obj, setup.set, x0, sched, rng);
        }
        case SolverKind::ZoSgd: {
            ZoSgdConfig zc = ZoSgdConfig::with_defaults(cfg.T, obj.smoothness(), setup.rho,
                                                        obj.dim(), setup.set.diameter());
            ZoSgdResult res = zo_sgd_run(obj, x0, zc, rng);
            // Repackage as a RunTrace so the CSV/plot pipeline applies.
            RunTrace trace;
            trace.counters = res.counters;
            trace.final_x = res.x_out;
            for (int t = 0; t < cfg.T; ++t) {
                trace.rows.push_back({t, 0.0, res.grad_sq[t],
                                      0, static_cast<std::uint64_t>(2) * t, 0, zc.eta, 1, 0});
            }
            return trace;
        }
    }
    throw std::logic_error("run_single_seed: unreachable");
}

// Fixed f_star applied to a trace whose subopt column was NaN (estimated
// baselines only become available after the runs are configured).
inline void apply_f_star(RunTrace& trace, double f_star) {
    for (auto& r : trace.rows) {
        if (std::isnan(r.subopt)) r.subopt = r.f - f_star;
    }
}

inline AggregateTrace aggregate_traces(std::vector<RunTrace> traces) {
    AggregateTrace agg;
    size_t rows = traces.front().rows.size();
    for (const auto& tr : traces) {
        if (tr.rows.size() != rows) {
            throw std::runtime_error("aggregate: trace length mismatch");
        }
    }
    for (size_t i = 0; i < rows; ++i) {
        std::vector<double> subopts;
        double lmo_acc = 0.0;
        for (const auto& tr : traces) {
            subopts.push_back(tr.rows[i].subopt);
            lmo_acc += static_cast<double>(tr.rows[i].lmo);
        }
        MeanStderr ms = mean_stderr(subopts);
        const auto& r0 = traces.front().rows[i];
        agg.rows.push_back({r0.t, ms.mean, ms.stderr_, static_cast<double>(r0.sfo),
                            static_cast<double>(r0.szo),
                            lmo_acc / static_cast<double>(traces.size())});
    }
    agg.traces = std::move(traces);
    return agg;
}

inline void write_aggregate_csv(std::ostream& os, const AggregateTrace& agg) {
    os << "t,mean_subopt,stderr_subopt,sfo,szo,lmo\n";
    for (const auto& r : agg.rows) {
        os << r.t << ',' << format_double(r.mean_subopt) << ','
           << format_double(r.stderr_subopt) << ',' << format_double(r.sfo) << ','
           << format_double(r.szo) << ',' << format_double(r.lmo) << '\n';
    }
}

// Runs num_seeds independent seeds in parallel, aggregates deterministically,
// and writes per-seed trace CSVs, the aggregate CSV, and the two SVG plots
// (suboptimality vs iteration and vs cumulative oracle calls) into out_dir.
inline AggregateTrace run_experiment(const ExperimentConfig& cfg,
                                     const std::string& out_dir,
                                     int jobs = default_jobs()) {
    ExperimentSetup setup = build_experiment(cfg);
    std::vector<RunTrace> traces(cfg.num_seeds);
    parallel_for_ordered(cfg.num_seeds, jobs, [&](int k) {
        traces[k] = run_single_seed(setup, cfg, k);
        apply_f_star(traces[k], setup.f_star);
    });

    AggregateTrace agg = aggregate_traces(std::move(traces));
    agg.f_star_used = setup.f_star;
    agg.f_star_gap = setup.f_star_gap;
    agg.rho_used = setup.rho;

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    for (int k = 0; k < cfg.num_seeds; ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "trace_s%03d.csv", k);
        std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
        write_trace_csv(f, agg.traces[k]);
    }
    {
        std::ofstream f(fs::path(out_dir) / "aggregate.csv", std::ios::binary);
        write_aggregate_csv(f, agg);
    }
    bool zo = cfg.mode == OracleMode::ZerothOrder || cfg.solver == SolverKind::ZoSgd;
    SvgSeries iter_series{"mean suboptimality", "#1f77b4", {}, {}};
    SvgSeries oracle_series{"mean suboptimality", "#d62728", {}, {}};
    for (const auto& r : agg.rows) {
        if (r.t >= 1) {
            iter_series.x.push_back(r.t);
            iter_series.y.push_back(r.mean_subopt);
            oracle_series.x.push_back(zo ? r.szo : r.sfo);
            oracle_series.y.push_back(r.mean_subopt);
        }
    }
    {
        std::ofstream f(fs::path(out_dir) / "plot_iterations.svg", std::ios::binary);
        write_svg_plot(f, "suboptimality vs iteration", "iteration t", "f - f*",
                       {iter_series});
    }
    {
        std::ofstream f(fs::path(out_dir) / "plot_oracle.svg", std::ios::binary);
        write_svg_plot(f, zo ? "suboptimality vs SZO calls" : "suboptimality vs SFO calls",
                       zo ? "SZO calls" : "SFO calls", "f - f*", {oracle_series});
    }
    return agg;
}

}  // namespace cgkit
