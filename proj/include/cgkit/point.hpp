#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace cgkit {

// Dense d-dimensional iterate / gradient / direction vector.
using Point = Eigen::VectorXd;

inline void check_same_dim(const Point& a, const Point& b, const char* op) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
}

inline double dot(const Point& a, const Point& b) {
    check_same_dim(a, b, "dot");
    return a.dot(b);
}

// (1-gamma)*x + gamma*y, gamma in [0,1].
inline Point convex_combine(const Point& x, const Point& y, double gamma) {
    check_same_dim(x, y, "convex_combine");
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("convex_combine: gamma out of [0,1]: " +
                                    std::to_string(gamma));
    }
    return (1.0 - gamma) * x + gamma * y;
}

inline bool all_finite(const Point& x) { return x.allFinite(); }

}  // namespace cgkit
