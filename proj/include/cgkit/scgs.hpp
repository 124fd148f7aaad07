#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgkit/estimators.hpp"
#include "cgkit/feasible_set.hpp"
#include "cgkit/objective.hpp"
#include "cgkit/sfw.hpp"
#include "cgkit/stats.hpp"
#include "cgkit/trace.hpp"

namespace cgkit {

// Conditional gradient sliding schedule: beta_t = 4L/(t+2), gamma_t = 3/(t+2),
// eta_t = L D^2 / (t(t+1)), batch ceil(3 rho t(t+1)) (first-order) or
// ceil(6 rho (d+4) t(t+1)) (zeroth-order, with nu = D/((T+2)^2 (d+6)^{3/2})).
struct ScgsSchedule {
    OracleMode mode = OracleMode::FirstOrder;
    int T = 0;
    double L = 0.0;
    double D = 0.0;
    double rho = 1.0;
    double nu = 0.0;

    static ScgsSchedule first_order(int T, double L, double D, double rho) {
        return {OracleMode::FirstOrder, T, L, D, rho, 0.0};
    }
    static ScgsSchedule zeroth_order(int T, int d, double L, double D, double rho) {
        ScgsSchedule s{OracleMode::ZerothOrder, T, L, D, rho, 0.0};
        s.nu = D / (std::pow(T + 2, 2) * std::pow(d + 6, 1.5));
        return s;
    }

    double beta(int t) const { return 4.0 * L / (t + 2); }
    double gamma(int t) const { return 3.0 / (t + 2); }
    double eta(int t) const {
        return L * D * D / (static_cast<double>(t) * (t + 1));
    }
    long batch(int t, int d) const {
        double tt = static_cast<double>(t) * (t + 1);
        double b = mode == OracleMode::FirstOrder ? 3.0 * rho * tt
                                                  : 6.0 * rho * (d + 4) * tt;
        return static_cast<long>(std::ceil(b));
    }
    // Inner-iteration cap from the termination guarantee for the inner FW loop.
    long icg_cap(int t) const {
        return static_cast<long>(std::ceil(6.0 * beta(t) * D * D / eta(t)));
    }
};

struct IcgResult {
    Point point;
    long inner_iterations = 0;
    double final_gap = 0.0;
};

// Inexact conditional gradient: solves the proximal subproblem
//   min_{x in set} <g, x> + (beta/2) ||x - u||^2
// by Frank-Wolfe with exact line search, to Wolfe-gap tolerance eta.
// One LMO call per inner iteration. Exceeding the cap signals a schedule or
// constant bug, since termination within the cap is guaranteed.
inline IcgResult icg(const FeasibleSet& set, const Point& g, const Point& u, double beta,
                     double eta, long cap, OracleCounters& counters) {
    if (!(beta > 0.0) || !(eta > 0.0)) {
        throw std::invalid_argument("icg: beta and eta must be positive");
    }
    if (!set.contains(u, 1e-9)) throw std::invalid_argument("icg: anchor infeasible");
    Point uk = u;
    for (long k = 1;; ++k) {
        Point grad_k = g + beta * (uk - u);  // gradient of the prox objective at uk
        Point vk = set.lmo(grad_k, counters);
        double h = dot(grad_k, uk - vk);
        if (h <= eta) return {std::move(uk), k, h};
        if (k >= cap) {
            throw std::runtime_error("icg: inner-iteration cap " + std::to_string(cap) +
                                     " exceeded, final gap " + std::to_string(h));
        }
        Point diff = vk - uk;
        double denom = beta * diff.squaredNorm();
        if (denom == 0.0) return {std::move(uk), k, 0.0};
        // Exact line search for the quadratic prox objective; h > 0 here.
        double alpha = std::min(1.0, h / denom);
        uk += alpha * diff;
    }
}

inline RunTrace scgs_run(const StochasticObjective& obj, const FeasibleSet& set,
                         const Point& x0, const ScgsSchedule& schedule, RngStream& rng) {
    if (x0.size() != obj.dim() || set.dim() != obj.dim()) {
        throw std::invalid_argument("scgs_run: dimension mismatch");
    }
    if (!set.contains(x0, 1e-9)) throw std::invalid_argument("scgs_run: x0 infeasible");

    const int d = obj.dim();
    const auto fstar = obj.f_star();
    RunTrace trace;
    trace.rows.reserve(schedule.T + 1);

    Point x = x0;
    Point y = x0;
    auto log_row = [&](int t, double gamma, long b, int inner) {
        double f = obj.value(x);
        if (!std::isfinite(f)) {
            throw std::runtime_error("scgs_run: non-finite objective at iteration " +
                                     std::to_string(t));
        }
        trace.rows.push_back({t, f, fstar ? f - *fstar : std::nan(""),
                              trace.counters.sfo_calls, trace.counters.szo_calls,
                              trace.counters.lmo_calls, gamma, b, inner});
    };
    log_row(0, 0.0, 0, 0);

    for (int t = 1; t <= schedule.T; ++t) {
        double gamma = schedule.gamma(t);
        long b = schedule.batch(t, d);
        Point z = convex_combine(x, y, gamma);
        GradientEstimate g =
            schedule.mode == OracleMode::FirstOrder
                ? minibatch_gradient(obj, z, b, rng, trace.counters)
                : zo_gradient(obj, z, b, schedule.nu, rng, trace.counters);
        IcgResult inner = icg(set, g.vector, y, schedule.beta(t), schedule.eta(t),
                              schedule.icg_cap(t), trace.counters);
        y = std::move(inner.point);
        x = convex_combine(x, y, gamma);
        log_row(t, gamma, b, static_cast<int>(inner.inner_iterations));
    }
    trace.final_x = std::move(x);
    return trace;
}

struct EpsilonSlope {
    std::vector<double> eps;
    std::vector<double> calls;  // mean cumulative calls at the first t reaching eps
    double slope = 0.0;
    bool evaluated = false;
    bool pass = false;
};

struct ScgsRateReport {
    RateReport rate;
    EpsilonSlope sfo_slope;
    EpsilonSlope lmo_slope;
    bool pass = false;
};

namespace detail {

inline EpsilonSlope calls_vs_eps(const std::vector<RunTrace>& traces,
                                 const std::vector<double>& eps_list, bool use_sfo,
                                 double slope_lo, double slope_hi) {
    EpsilonSlope es;
    int horizon = static_cast<int>(traces.front().rows.size()) - 1;
    for (double eps : eps_list) {
        int t_hit = -1;
        for (int t = 1; t <= horizon; ++t) {
            if (subopt_at(traces, t).mean <= eps) {
                t_hit = t;
                break;
            }
        }
        if (t_hit < 0) return es;  // eps unreached: slope not evaluable
        double calls = 0.0;
        for (const auto& tr : traces) {
            const auto& row = tr.rows[t_hit];
            calls += static_cast<double>(use_sfo ? (row.sfo + row.szo) : row.lmo);
        }
        es.eps.push_back(eps);
        es.calls.push_back(calls / traces.size());
    }
    std::vector<double> inv_eps;
    for (double e : es.eps) inv_eps.push_back(1.0 / e);
    es.slope = loglog_slope(inv_eps, es.calls);
    es.evaluated = true;
    es.pass = es.slope >= slope_lo && es.slope <= slope_hi;
    return es;
}

}  // namespace detail

// Theorem-bound check at checkpoints plus oracle-calls-vs-epsilon scaling.
// grad_star_norm is ||grad f(x*)|| (exact when x* is known, else an upper
// bound); it only enters the first-order bound.
inline ScgsRateReport scgs_rate_check(const std::vector<RunTrace>& traces,
                                      OracleMode mode, double L, double D,
                                      double grad_star_norm,
                                      const std::vector<int>& checkpoints,
                                      const std::vector<double>& eps_list) {
    if (traces.size() < 20) {
        throw std::invalid_argument("scgs_rate_check: need >= 20 seeds");
    }
    ScgsRateReport report;
    for (int t : checkpoints) {
        MeanStderr ms = detail::subopt_at(traces, t);
        double bound =
            mode == OracleMode::FirstOrder
                ? 6.0 * L * D * D / std::pow(t + 2, 2) +
                      (15.0 * L * D * D + 3.0 * grad_star_norm * D) /
                          (static_cast<double>(t + 1) * (t + 2))
                : 8.0 * L * D * D / std::pow(t + 2, 2) +
                      32.0 * L * D * D / (static_cast<double>(t + 1) * (t + 2));
        report.rate.checkpoints.push_back(
            {t, ms.mean, ms.stderr_, bound, ms.mean + 2.0 * ms.stderr_ <= bound});
    }
    report.rate.pass = true;
    for (const auto& cp : report.rate.checkpoints) {
        report.rate.pass = report.rate.pass && cp.pass;
    }
    report.pass = report.rate.pass;
    if (!eps_list.empty()) {
        report.sfo_slope = detail::calls_vs_eps(traces, eps_list, true, 1.1, 1.9);
        report.lmo_slope = detail::calls_vs_eps(traces, eps_list, false, 0.7, 1.3);
        report.pass = report.pass && report.sfo_slope.evaluated && report.sfo_slope.pass &&
                      report.lmo_slope.evaluated && report.lmo_slope.pass;
    }
    return report;
}

}  // namespace cgkit
