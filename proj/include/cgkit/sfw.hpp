#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgkit/estimators.hpp"
#include "cgkit/feasible_set.hpp"
#include "cgkit/objective.hpp"
#include "cgkit/stats.hpp"
#include "cgkit/trace.hpp"

namespace cgkit {

// Stochastic Frank-Wolfe schedule: gamma_t = 4/(t+3) with batch
// ceil((t+3)/2) in the first-order mode or (t+3)(d+4) with smoothing radius
// nu = D / ((T+3)(d+6)^{3/2}) in the zeroth-order mode.
struct SfwSchedule {
    OracleMode mode = OracleMode::FirstOrder;
    int T = 0;
    double nu = 0.0;

    static SfwSchedule first_order(int T) { return {OracleMode::FirstOrder, T, 0.0}; }
    static SfwSchedule zeroth_order(int T, int d, double diameter) {
        SfwSchedule s{OracleMode::ZerothOrder, T, 0.0};
        s.nu = diameter / ((T + 3) * std::pow(d + 6, 1.5));
        return s;
    }

    double gamma(int t) const { return 4.0 / (t + 3); }
    long batch(int t, int d) const {
        if (mode == OracleMode::FirstOrder) return (t + 3 + 1) / 2;  // ceil((t+3)/2)
        return static_cast<long>(t + 3) * (d + 4);
    }
};

inline RunTrace sfw_run(const StochasticObjective& obj, const FeasibleSet& set,
                        const Point& x0, const SfwSchedule& schedule, RngStream& rng) {
    if (x0.size() != obj.dim() || set.dim() != obj.dim()) {
        throw std::invalid_argument("sfw_run: dimension mismatch");
    }
    if (!set.contains(x0, 1e-9)) throw std::invalid_argument("sfw_run: x0 infeasible");

    const int d = obj.dim();
    const auto fstar = obj.f_star();
    RunTrace trace;
    trace.rows.reserve(schedule.T + 1);

    Point x = x0;
    auto log_row = [&](int t, double gamma, long b) {
        double f = obj.value(x);
        if (!std::isfinite(f)) {
            throw std::runtime_error("sfw_run: non-finite objective at iteration " +
                                     std::to_string(t));
        }
        trace.rows.push_back({t, f, fstar ? f - *fstar : std::nan(""),
                              trace.counters.sfo_calls, trace.counters.szo_calls,
                              trace.counters.lmo_calls, gamma, b, 0});
    };
    log_row(0, 0.0, 0);

    for (int t = 1; t <= schedule.T; ++t) {
        long b = schedule.batch(t, d);
        GradientEstimate g =
            schedule.mode == OracleMode::FirstOrder
                ? minibatch_gradient(obj, x, b, rng, trace.counters)
                : zo_gradient(obj, x, b, schedule.nu, rng, trace.counters);
        Point dir = set.lmo(g.vector, trace.counters);
        x = convex_combine(x, dir, schedule.gamma(t));
        log_row(t, schedule.gamma(t), b);
    }
    trace.final_x = std::move(x);
    return trace;
}

struct RateCheckpoint {
    int t = 0;
    double mean_subopt = 0.0;
    double stderr_ = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct SlopeCheck {
    double slope = 0.0;
    double target = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct RateReport {
    std::vector<RateCheckpoint> checkpoints;
    SlopeCheck slope;
    bool pass = false;
};

namespace detail {

inline MeanStderr subopt_at(const std::vector<RunTrace>& traces, int t) {
    std::vector<double> vals;
    vals.reserve(traces.size());
    for (const auto& tr : traces) {
        if (t >= static_cast<int>(tr.rows.size())) {
            throw std::invalid_argument("rate check: checkpoint beyond trace horizon");
        }
        double v = tr.rows[t].subopt;
        if (std::isnan(v)) throw std::invalid_argument("rate check: f_star unknown");
        vals.push_back(v);
    }
    return mean_stderr(vals);
}

inline SlopeCheck subopt_slope(const std::vector<RunTrace>& traces, int t_lo, int t_hi,
                               double target, double tol) {
    std::vector<double> ts, means;
    for (int t = t_lo; t <= t_hi; ++t) {
        MeanStderr ms = subopt_at(traces, t);
        if (ms.mean > 0.0) {
            ts.push_back(t);
            means.push_back(ms.mean);
        }
    }
    SlopeCheck sc{loglog_slope(ts, means), target, tol, false};
    sc.pass = std::abs(sc.slope - sc.target) <= sc.tol;
    return sc;
}

}  // namespace detail

// Checks the averaged suboptimality (+2 standard errors) against the proven
// expectation bound (2 phi_0 + 8 (rho+1) L D^2) / (t+3); the zeroth-order
// variant uses the (rho + 1/rho + 1) constant. Also fits the log-log decay
// slope over [slope_lo, slope_hi] against -1 +/- slope_tol.
inline RateReport sfw_rate_check(const std::vector<RunTrace>& traces, OracleMode mode,
                                 double rho, double L, double D,
                                 const std::vector<int>& checkpoints, int slope_lo,
                                 int slope_hi, double slope_tol = 0.3) {
    if (traces.size() < 20) {
        throw std::invalid_argument("sfw_rate_check: need >= 20 seeds");
    }
    double phi0 = detail::subopt_at(traces, 0).mean;
    double c = mode == OracleMode::FirstOrder ? (rho + 1.0) : (rho + 1.0 / rho + 1.0);
    RateReport report;
    for (int t : checkpoints) {
        MeanStderr ms = detail::subopt_at(traces, t);
        double bound = (2.0 * phi0 + 8.0 * c * L * D * D) / (t + 3);
        report.checkpoints.push_back(
            {t, ms.mean, ms.stderr_, bound, ms.mean + 2.0 * ms.stderr_ <= bound});
    }
    report.slope = detail::subopt_slope(traces, slope_lo, slope_hi, -1.0, slope_tol);
    report.pass = report.slope.pass;
    for (const auto& cp : report.checkpoints) report.pass = report.pass && cp.pass;
    return report;
}

}  // namespace cgkit
