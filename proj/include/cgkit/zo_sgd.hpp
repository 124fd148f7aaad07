#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgkit/counters.hpp"
#include "cgkit/objective.hpp"
#include "cgkit/point.hpp"
#include "cgkit/rng.hpp"

namespace cgkit {

// Unconstrained non-convex zeroth-order SGD with randomized-iterate output.
// Defaults follow the constant-step analysis: eta = 1/(2 L (rho+1)(d+4)) and
// nu = scale / sqrt(d T) with a caller-supplied scale.
struct ZoSgdConfig {
    int T = 0;
    double eta = 0.0;
    double nu = 0.0;

    static ZoSgdConfig with_defaults(int T, double L, double rho, int d, double scale) {
        ZoSgdConfig c;
        c.T = T;
        c.eta = 1.0 / (2.0 * L * (rho + 1.0) * (d + 4));
        c.nu = scale / std::sqrt(static_cast<double>(d) * T);
        return c;
    }
};

struct ZoSgdResult {
    Point x_out;                      // x_R, R uniform on {0, ..., T-1}
    int R = 0;
    std::vector<double> grad_sq;      // exact ||grad f(x_t)||^2, t = 0..T-1
    OracleCounters counters;          // 2 SZO calls per iteration
};

inline ZoSgdResult zo_sgd_run(const StochasticObjective& obj, const Point& x0,
                              const ZoSgdConfig& config, RngStream& rng) {
    if (!(config.eta > 0.0) || !(config.nu > 0.0)) {
        throw std::invalid_argument("zo_sgd_run: eta and nu must be positive");
    }
    if (!all_finite(x0)) throw std::invalid_argument("zo_sgd_run: non-finite x0");

    const int d = obj.dim();
    const auto n = static_cast<std::uint64_t>(obj.num_components());
    ZoSgdResult result;
    result.R = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(config.T)));
    result.grad_sq.reserve(config.T);

    Point x = x0;
    for (int t = 0; t < config.T; ++t) {
        result.grad_sq.push_back(obj.gradient(x).squaredNorm());  // diagnostic, uncounted
        if (t == result.R) result.x_out = x;
        Point u = gaussian_direction(rng, d);
        int i = static_cast<int>(rng.uniform_index(n));
        double f_plus = obj.component_value(x + config.nu * u, i);
        double f_base = obj.component_value(x, i);
        result.counters.szo_calls += 2;
        x -= config.eta * ((f_plus - f_base) / config.nu) * u;
        if (!all_finite(x)) {
            throw std::runtime_error("zo_sgd_run: non-finite iterate at iteration " +
                                     std::to_string(t + 1));
        }
    }
    return result;
}

}  // namespace cgkit
