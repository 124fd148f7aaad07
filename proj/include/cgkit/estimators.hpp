#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cgkit/counters.hpp"
#include "cgkit/feasible_set.hpp"
#include "cgkit/objective.hpp"
#include "cgkit/point.hpp"
#include "cgkit/rng.hpp"

namespace cgkit {

enum class OracleMode { FirstOrder, ZerothOrder };

struct GradientEstimate {
    Point vector;
    long batch_size = 0;
    OracleMode mode = OracleMode::FirstOrder;
    double nu = 0.0;  // 0 for first-order
};

// Minibatch gradient: average of b component gradients with indices sampled
// i.i.d. uniform with replacement. Costs b SFO calls.
inline GradientEstimate minibatch_gradient(const StochasticObjective& obj, const Point& x,
                                           long b, RngStream& rng,
                                           OracleCounters& counters) {
    if (b < 1) throw std::invalid_argument("minibatch_gradient: batch size must be >= 1");
    if (!all_finite(x)) throw std::invalid_argument("minibatch_gradient: non-finite x");
    const auto n = static_cast<std::uint64_t>(obj.num_components());
    Point g = Point::Zero(obj.dim());
    for (long j = 0; j < b; ++j) {
        int i = static_cast<int>(rng.uniform_index(n));
        g += obj.component_gradient(x, i);
    }
    g /= static_cast<double>(b);
    counters.sfo_calls += static_cast<std::uint64_t>(b);
    return {std::move(g), b, OracleMode::FirstOrder, 0.0};
}

// Numerical floor keeps F(x + nu*u) - F(x) above cancellation level when the
// schedule's nu shrinks with T.
inline double effective_nu(double nu, const Point& x) {
    return std::max(nu, 1e-7 * (1.0 + x.lpNorm<Eigen::Infinity>()));
}

// Gaussian-smoothing two-point gradient estimator
//   (1/b) sum_j [F(x + nu*u_j, xi_j) - F(x, xi_j)] / nu * u_j,
// u_j ~ N(0, I). Each sample draws a fresh (u_j, xi_j) pair and costs two
// function values, so the call costs 2b SZO queries.
inline GradientEstimate zo_gradient(const StochasticObjective& obj, const Point& x, long b,
                                    double nu, RngStream& rng, OracleCounters& counters) {
    if (b < 1) throw std::invalid_argument("zo_gradient: batch size must be >= 1");
    if (!(nu > 0.0)) throw std::invalid_argument("zo_gradient: nu must be positive");
    if (!all_finite(x)) throw std::invalid_argument("zo_gradient: non-finite x");
    const double nu_eff = effective_nu(nu, x);
    const auto n = static_cast<std::uint64_t>(obj.num_components());
    const int d = obj.dim();
    Point g = Point::Zero(d);
    for (long j = 0; j < b; ++j) {
        Point u = gaussian_direction(rng, d);
        int i = static_cast<int>(rng.uniform_index(n));
        double f_plus = obj.component_value(x + nu_eff * u, i);
        double f_base = obj.component_value(x, i);
        if (!std::isfinite(f_plus) || !std::isfinite(f_base)) {
            throw std::runtime_error("zo_gradient: non-finite function value at sample " +
                                     std::to_string(j) + " (component " +
                                     std::to_string(i) + ")");
        }
        g += ((f_plus - f_base) / nu_eff) * u;
    }
    g /= static_cast<double>(b);
    counters.szo_calls += 2 * static_cast<std::uint64_t>(b);
    return {std::move(g), b, OracleMode::ZerothOrder, nu_eff};
}

// Monte-Carlo estimate of E || G_nu - grad f(x) ||^2 over `trials` fresh
// batches. Requires a known f* because the consumers compare the value
// against the suboptimality-based bound.
inline double zo_mse_probe(const StochasticObjective& obj, const Point& x, long b,
                           double nu, long trials, RngStream& rng) {
    if (trials < 100) throw std::invalid_argument("zo_mse_probe: trials must be >= 100");
    if (!obj.f_star().has_value()) {
        throw std::invalid_argument("zo_mse_probe: objective must expose f_star");
    }
    OracleCounters scratch;
    Point grad = obj.gradient(x);
    double acc = 0.0;
    for (long t = 0; t < trials; ++t) {
        GradientEstimate est = zo_gradient(obj, x, b, nu, rng, scratch);
        acc += (est.vector - grad).squaredNorm();
    }
    return acc / static_cast<double>(trials);
}

// Empirical variance-based weak-growth constant: max over sampled feasible x
// of E_xi ||grad F(x, xi) - grad f(x)||^2 / (2 L (f(x) - f*)), with the
// expectation computed exactly over the finite sum. Points with suboptimality
// below 1e-12 are skipped.
inline double growth_probe(const StochasticObjective& obj, const FeasibleSet& set,
                           int num_points, RngStream& rng) {
    if (num_points < 10) throw std::invalid_argument("growth_probe: num_points must be >= 10");
    if (!obj.f_star().has_value()) {
        throw std::invalid_argument("growth_probe: objective must expose f_star");
    }
    const double fstar = *obj.f_star();
    const double L = obj.smoothness();
    const int n = obj.num_components();
    double rho_hat = 0.0;
    for (int p = 0; p < num_points; ++p) {
        Point x = set.random_point(rng);
        double gap = obj.value(x) - fstar;
        if (gap < 1e-12) continue;
        Point grad = obj.gradient(x);
        double var = 0.0;
        for (int i = 0; i < n; ++i) {
            var += (obj.component_gradient(x, i) - grad).squaredNorm();
        }
        var /= n;
        rho_hat = std::max(rho_hat, var / (2.0 * L * gap));
    }
    return rho_hat;
}

// Moment-based counterpart: max of E_xi ||grad F(x, xi)||^2 / (2 L (f(x) - f*)).
inline double moment_growth_probe(const StochasticObjective& obj, const FeasibleSet& set,
                                  int num_points, RngStream& rng) {
    if (num_points < 10) {
        throw std::invalid_argument("moment_growth_probe: num_points must be >= 10");
    }
    if (!obj.f_star().has_value()) {
        throw std::invalid_argument("moment_growth_probe: objective must expose f_star");
    }
    const double fstar = *obj.f_star();
    const double L = obj.smoothness();
    const int n = obj.num_components();
    double rho_hat = 0.0;
    for (int p = 0; p < num_points; ++p) {
        Point x = set.random_point(rng);
        double gap = obj.value(x) - fstar;
        if (gap < 1e-12) continue;
        double moment = 0.0;
        for (int i = 0; i < n; ++i) {
            moment += obj.component_gradient(x, i).squaredNorm();
        }
        moment /= n;
        rho_hat = std::max(rho_hat, moment / (2.0 * L * gap));
    }
    return rho_hat;
}

}  // namespace cgkit
