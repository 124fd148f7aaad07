// cgkit command-line harness: dataset generation, multi-seed experiments,
// rate-check reports, f* baselines, and CSV -> SVG replotting.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error,
// 3 rate-check failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cgkit/bench.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitRateFail = 3;

cgkit::ExperimentConfig load_config(const std::string& path) {
    return cgkit::ExperimentConfig::load(path);
}

int cmd_generate_data(const std::string& config_path, const std::string& out,
                      std::uint64_t seed, bool seed_set) {
    cgkit::ExperimentConfig cfg = load_config(config_path);
    if (seed_set) cfg.blobs.seed = seed;
    cgkit::BlobsData data = cgkit::generate_blobs(cfg.blobs);
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out);
    cgkit::write_dataset_csv(f, data.x, data.y);
    std::cout << "wrote " << data.x.rows() << " rows, " << data.x.cols()
              << " features to " << out
              << (data.certificate ? " (separable, certificate verified)" : "") << "\n";
    return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& out, int jobs,
            std::uint64_t seed, bool seed_set) {
    cgkit::ExperimentConfig cfg = load_config(config_path);
    if (seed_set) cfg.base_seed = seed;
    cgkit::AggregateTrace agg = cgkit::run_experiment(cfg, out, jobs);
    const auto& last = agg.rows.back();
    std::cout << "seeds: " << cfg.num_seeds << "\n"
              << "f* baseline: " << cgkit::format_double(agg.f_star_used)
              << " (certified gap " << cgkit::format_double(agg.f_star_gap) << ")\n"
              << "rho: " << cgkit::format_double(agg.rho_used) << "\n"
              << "final mean suboptimality: " << cgkit::format_double(last.mean_subopt)
              << " +/- " << cgkit::format_double(last.stderr_subopt) << "\n"
              << "oracle calls: sfo=" << cgkit::format_double(last.sfo)
              << " szo=" << cgkit::format_double(last.szo)
              << " lmo(mean)=" << cgkit::format_double(last.lmo) << "\n"
              << "outputs in " << out << "\n";
    return kExitOk;
}

int cmd_fstar(const std::string& config_path, long budget) {
    cgkit::ExperimentConfig cfg = load_config(config_path);
    cfg.rho_override = 1.0;  // irrelevant for the baseline; avoid probe cost
    cgkit::ExperimentSetup setup = cgkit::build_experiment(cfg);
    cgkit::FStarEstimate est =
        cgkit::estimate_f_star(*setup.objective, setup.set, budget);
    std::cout << "f* lower bound: " << cgkit::format_double(est.lower_bound) << "\n"
              << "certified gap:  " << cgkit::format_double(est.certified_gap) << "\n"
              << "iterations:     " << est.iterations << "\n";
    return kExitOk;
}

int cmd_rate_check(const std::string& config_path, const std::string& theorem,
                   const std::string& out, int jobs) {
    cgkit::ExperimentConfig cfg = load_config(config_path);
    // Force the solver/mode combination the requested bound applies to.
    if (theorem == "1a") { cfg.solver = cgkit::SolverKind::Sfw; cfg.mode = cgkit::OracleMode::FirstOrder; }
    else if (theorem == "1b") { cfg.solver = cgkit::SolverKind::Sfw; cfg.mode = cgkit::OracleMode::ZerothOrder; }
    else if (theorem == "2a") { cfg.solver = cgkit::SolverKind::Scgs; cfg.mode = cgkit::OracleMode::FirstOrder; }
    else if (theorem == "2b") { cfg.solver = cgkit::SolverKind::Scgs; cfg.mode = cgkit::OracleMode::ZerothOrder; }
    else throw cgkit::config_error("unknown theorem id (use 1a, 1b, 2a, 2b): " + theorem);

    cgkit::AggregateTrace agg = cgkit::run_experiment(cfg, out, jobs);
    std::vector<int> cps = cfg.checkpoints;
    if (cps.empty()) {
        for (int t : {10, cfg.T / 10, cfg.T}) {
            if (t >= 1 && (cps.empty() || t > cps.back())) cps.push_back(t);
        }
    }
    const auto& obj = *cgkit::build_experiment(cfg).objective;
    double L = obj.smoothness();
    double D = cfg.set_kind == cgkit::SetKind::Simplex
                   ? cfg.set_param * std::sqrt(2.0)
                   : 2.0 * cfg.set_param;

    bool pass = false;
    std::ostringstream report;
    if (theorem == "1a" || theorem == "1b") {
        int lo = std::max(10, cfg.T / 10), hi = cfg.T;
        cgkit::RateReport r = cgkit::sfw_rate_check(agg.traces, cfg.mode, agg.rho_used,
                                                    L, D, cps, lo, hi);
        for (const auto& cp : r.checkpoints) {
            report << "t=" << cp.t << " mean=" << cgkit::format_double(cp.mean_subopt)
                   << " +2se=" << cgkit::format_double(cp.mean_subopt + 2 * cp.stderr_)
                   << " bound=" << cgkit::format_double(cp.bound)
                   << (cp.pass ? " OK" : " VIOLATED") << "\n";
        }
        report << "slope[" << lo << "," << hi << "]="
               << cgkit::format_double(r.slope.slope) << " target -1 +/- "
               << r.slope.tol << (r.slope.pass ? " OK" : " VIOLATED") << "\n";
        pass = r.pass;
    } else {
        std::vector<double> eps{1e-2, 1e-3, 1e-4};
        cgkit::ScgsRateReport r = cgkit::scgs_rate_check(
            agg.traces, cfg.mode, L, D, /*grad_star_norm=*/0.0, cps, eps);
        for (const auto& cp : r.rate.checkpoints) {
            report << "t=" << cp.t << " mean=" << cgkit::format_double(cp.mean_subopt)
                   << " +2se=" << cgkit::format_double(cp.mean_subopt + 2 * cp.stderr_)
                   << " bound=" << cgkit::format_double(cp.bound)
                   << (cp.pass ? " OK" : " VIOLATED") << "\n";
        }
        auto show = [&](const char* name, const cgkit::EpsilonSlope& es) {
            report << name << " slope=" << cgkit::format_double(es.slope)
                   << (es.evaluated ? (es.pass ? " OK" : " VIOLATED") : " (not evaluable)")
                   << "\n";
        };
        show("sfo-vs-eps", r.sfo_slope);
        show("lmo-vs-eps", r.lmo_slope);
        pass = r.pass;
    }
    report << (pass ? "RATE CHECK PASS" : "RATE CHECK FAIL") << "\n";
    std::cout << report.str();
    return pass ? kExitOk : kExitRateFail;
}

int cmd_plot(const std::string& input, const std::string& out, bool vs_calls) {
    std::ifstream f(input);
    if (!f) throw std::runtime_error("cannot open CSV: " + input);
    std::string header;
    if (!std::getline(f, header) || header.rfind("t,mean_subopt", 0) != 0) {
        throw std::runtime_error("expected an aggregate CSV (t,mean_subopt,...): " + input);
    }
    cgkit::SvgSeries series{"mean suboptimality", "#1f77b4", {}, {}};
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != 6) throw std::runtime_error("bad aggregate row: " + line);
        double x = vs_calls ? std::max(row[3], row[4]) : row[0];
        if (x > 0 && row[1] > 0) {
            series.x.push_back(x);
            series.y.push_back(row[1]);
        }
    }
    std::ofstream o(out, std::ios::binary);
    if (!o) throw std::runtime_error("cannot open output file: " + out);
    cgkit::write_svg_plot(o, vs_calls ? "suboptimality vs oracle calls"
                                      : "suboptimality vs iteration",
                          vs_calls ? "oracle calls" : "iteration t", "f - f*", {series});
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cgkit: projection-free stochastic optimization benchmarks"};
    app.require_subcommand(1);

    std::string config_path, out = "out", input;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = cgkit::default_jobs();
    long budget = 100000;
    std::string theorem;
    bool vs_calls = false;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config_path, "experiment config file");
        if (needs_config) c->required();
        sub->add_option("--out", out, "output file or directory");
        sub->add_option("--seed", seed, "override the base seed")
            ->each([&](const std::string&) { seed_set = true; });
    };

    auto* gen = app.add_subcommand("generate-data", "generate a blobs dataset CSV");
    add_common(gen, true);

    auto* run = app.add_subcommand("run", "run a multi-seed experiment");
    add_common(run, true);
    run->add_option("--jobs", jobs, "worker threads (default: CGKIT_JOBS or hardware)");

    auto* rc = app.add_subcommand("rate-check", "check a convergence bound empirically");
    add_common(rc, true);
    rc->add_option("--theorem", theorem, "bound id: 1a, 1b, 2a, 2b")->required();
    rc->add_option("--jobs", jobs, "worker threads");

    auto* fs = app.add_subcommand("fstar", "estimate the optimal value baseline");
    add_common(fs, true);
    fs->add_option("--budget", budget, "iteration budget (>= 1e4)");

    auto* pl = app.add_subcommand("plot", "replot an aggregate CSV as SVG");
    pl->add_option("--input", input, "aggregate CSV file")->required();
    pl->add_option("--out", out, "output SVG path")->required();
    pl->add_flag("--vs-calls", vs_calls, "use cumulative oracle calls on the x axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    try {
        if (gen->parsed()) return cmd_generate_data(config_path, out, seed, seed_set);
        if (run->parsed()) return cmd_run(config_path, out, jobs, seed, seed_set);
        if (rc->parsed()) return cmd_rate_check(config_path, theorem, out, jobs);
        if (fs->parsed()) return cmd_fstar(config_path, budget);
        if (pl->parsed()) return cmd_plot(input, out, vs_calls);
    } catch (const cgkit::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
