#pragma once

#include <optional>

#include "cgkit/point.hpp"

namespace cgkit {

// Finite-sum stochastic objective f(x) = (1/n) sum_i F(x, i).
// Exact value/gradient queries are diagnostics and never touch oracle
// counters; counted access goes through the estimators. Implementations
// must be safe for concurrent read-only use.
class StochasticObjective {
  public:
    virtual ~StochasticObjective() = default;

    virtual int num_components() const = 0;
    virtual int dim() const = 0;

    virtual double component_value(const Point& x, int i) const = 0;
    virtual Point component_gradient(const Point& x, int i) const = 0;

    // Exact finite-sum value and gradient.
    virtual double value(const Point& x) const {
        double s = 0.0;
        int n = num_components();
        for (int i = 0; i < n; ++i) s += component_value(x, i);
        return s / n;
    }
    virtual Point gradient(const Point& x) const {
        int n = num_components();
        Point g = component_gradient(x, 0);
        for (int i = 1; i < n; ++i) g += component_gradient(x, i);
        return g / n;
    }

    // Gradient-Lipschitz constant of f.
    virtual double smoothness() const = 0;
    // Largest gradient-Lipschitz constant over components F(., i).
    virtual double max_component_smoothness() const = 0;

    virtual std::optional<double> f_star() const { return std::nullopt; }

    // Exact line search: argmin over gamma in [0,1] of f(x + gamma * delta).
    // Default bisects the directional derivative (convex f); problem classes
    // override with closed forms.
    virtual double line_search(const Point& x, const Point& delta) const {
        double lo = 0.0, hi = 1.0;
        if (gradient(x).dot(delta) >= 0.0) return 0.0;
        if (gradient(x + delta).dot(delta) <= 0.0) return 1.0;
        for (int it = 0; it < 50; ++it) {
            double mid = 0.5 * (lo + hi);
            if (gradient(x + mid * delta).dot(delta) >= 0.0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return 0.5 * (lo + hi);
    }
};

}  // namespace cgkit
