#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cgkit {

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean_stderr: empty sample");
    double m = 0.0;
    for (double x : xs) m += x;
    m /= xs.size();
    if (xs.size() == 1) return {m, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    double var = ss / (xs.size() - 1);
    return {m, std::sqrt(var / xs.size())};
}

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_slope: need >= 2 matched points");
    }
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissa");
    return sxy / sxx;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    lx.reserve(x.size());
    ly.reserve(y.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    return fit_slope(lx, ly);
}

}  // namespace cgkit
