#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cgkit/objective.hpp"
#include "cgkit/point.hpp"
#include "cgkit/rng.hpp"
#include "cgkit/trace.hpp"

namespace cgkit {

namespace detail {

inline double lambda_max(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

inline double generalized_lambda_max(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b,
                                                                 Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

// Random orthogonal matrix from QR of a Gaussian matrix, signs fixed for
// determinism.
inline Eigen::MatrixXd random_orthogonal(int d, RngStream& rng) {
    Eigen::MatrixXd g(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) g(i, j) = rng.next_normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

}  // namespace detail

// Finite sum of quadratics F(x, i) = (1/2)(x - x*)' M_i (x - x*) sharing the
// minimizer x*, so every component gradient vanishes at x* and f* = 0.
// Growth constants are closed-form generalized eigenvalues.
class InterpolatingQuadratic final : public StochasticObjective {
  public:
    InterpolatingQuadratic(std::vector<Eigen::MatrixXd> components, Point x_star)
        : m_(std::move(components)), x_star_(std::move(x_star)) {
        if (m_.empty()) throw std::invalid_argument("InterpolatingQuadratic: no components");
        const int d = static_cast<int>(x_star_.size());
        h_ = Eigen::MatrixXd::Zero(d, d);
        for (const auto& m : m_) {
            if (m.rows() != d || m.cols() != d) {
                throw std::invalid_argument("InterpolatingQuadratic: shape mismatch");
            }
            h_ += m;
        }
        h_ /= static_cast<double>(m_.size());
        L_ = detail::lambda_max(h_);
        L_max_ = 0.0;
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
        for (const auto& m : m_) {
            L_max_ = std::max(L_max_, detail::lambda_max(m));
            Eigen::MatrixXd diff = m - h_;
            c += diff * diff;
            p += m * m;
        }
        c /= static_cast<double>(m_.size());
        p /= static_cast<double>(m_.size());
        if (m_.size() == 1) {
            rho_variance_ = 0.0;
        } else {
            rho_variance_ = detail::generalized_lambda_max(c, h_) / L_;
        }
        rho_moment_ = detail::generalized_lambda_max(p, h_) / L_;
        rho_sgc_ = detail::generalized_lambda_max(p, h_ * h_);
    }

    int num_components() const override { return static_cast<int>(m_.size()); }
    int dim() const override { return static_cast<int>(x_star_.size()); }

    double component_value(const Point& x, int i) const override {
        Point e = x - x_star_;
        return 0.5 * e.dot(m_[i] * e);
    }
    Point component_gradient(const Point& x, int i) const override {
        return m_[i] * (x - x_star_);
    }
    double value(const Point& x) const override {
        Point e = x - x_star_;
        return 0.5 * e.dot(h_ * e);
    }
    Point gradient(const Point& x) const override { return h_ * (x - x_star_); }

    double smoothness() const override { return L_; }
    double max_component_smoothness() const override { return L_max_; }
    std::optional<double> f_star() const override { return 0.0; }

    double line_search(const Point& x, const Point& delta) const override {
        Point e = x - x_star_;
        double curv = delta.dot(h_ * delta);
        if (curv <= 0.0) return 0.0;
        double g = std::clamp(-e.dot(h_ * delta) / curv, 0.0, 1.0);
        return g;
    }

    const Point& x_star() const { return x_star_; }
    // Variance-based weak-growth constant: sup_x Var / (2 L (f - f*)).
    double rho_variance() const { return rho_variance_; }
    // Moment-based weak-growth constant: sup_x E||grad F||^2 / (2 L (f - f*)).
    double rho_moment() const { return rho_moment_; }
    // Strong-growth constant: sup_x E||grad F||^2 / ||grad f||^2.
    double rho_sgc() const { return rho_sgc_; }
    double strong_convexity() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

  private:
    std::vector<Eigen::MatrixXd> m_;
    Eigen::MatrixXd h_;
    Point x_star_;
    double L_ = 0.0, L_max_ = 0.0;
    double rho_variance_ = 0.0, rho_moment_ = 0.0, rho_sgc_ = 0.0;
};

// Random components M_i = Q_i diag(s^2) Q_i' with singular values s uniform
// in [1/sqrt(condition), 1], all sharing the minimizer x_star.
inline InterpolatingQuadratic make_quadratic(int n, int d, double condition,
                                             Point x_star, RngStream& rng) {
    if (n < 1 || d < 1) throw std::invalid_argument("make_quadratic: n, d must be >= 1");
    if (condition < 1.0) throw std::invalid_argument("make_quadratic: condition must be >= 1");
    if (x_star.size() != d) throw std::invalid_argument("make_quadratic: x_star dimension");
    const double s_lo = 1.0 / std::sqrt(condition);
    std::vector<Eigen::MatrixXd> ms;
    ms.reserve(n);
    for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd q = detail::random_orthogonal(d, rng);
        Eigen::VectorXd s2(d);
        for (int j = 0; j < d; ++j) {
            double s = s_lo + (1.0 - s_lo) * rng.next_double();
            s2[j] = s * s;
        }
        ms.push_back(q * s2.asDiagonal() * q.transpose());
    }
    return InterpolatingQuadratic(std::move(ms), std::move(x_star));
}

// Squared-hinge classification: F(w, i) = max(0, 1 - y_i <w, x_i>)^2.
class HingeSquaredObjective final : public StochasticObjective {
  public:
    HingeSquaredObjective(Eigen::MatrixXd x, Eigen::VectorXd y,
                          std::optional<double> f_star = std::nullopt)
        : x_(std::move(x)), y_(std::move(y)), f_star_(f_star) {
        if (x_.rows() != y_.size() || x_.rows() < 1) {
            throw std::invalid_argument("HingeSquaredObjective: shape mismatch");
        }
        // Smooth-branch Hessian bound; the hinge kink does not increase the
        // Lipschitz constant of the (continuous, piecewise-smooth) gradient.
        Eigen::MatrixXd gram = x_.transpose() * x_ / static_cast<double>(x_.rows());
        L_ = 2.0 * detail::lambda_max(gram);
        L_max_ = 0.0;
        for (int i = 0; i < x_.rows(); ++i) {
            L_max_ = std::max(L_max_, 2.0 * x_.row(i).squaredNorm());
        }
    }

    int num_components() const override { return static_cast<int>(x_.rows()); }
    int dim() const override { return static_cast<int>(x_.cols()); }

    double component_value(const Point& w, int i) const override {
        double m = std::max(0.0, 1.0 - y_[i] * x_.row(i).dot(w));
        return m * m;
    }
    Point component_gradient(const Point& w, int i) const override {
        double m = std::max(0.0, 1.0 - y_[i] * x_.row(i).dot(w));
        return (-2.0 * m * y_[i]) * x_.row(i).transpose();
    }
    double value(const Point& w) const override {
        Eigen::VectorXd m =
            (Eigen::VectorXd::Ones(x_.rows()) - y_.cwiseProduct(x_ * w)).cwiseMax(0.0);
        return m.squaredNorm() / static_cast<double>(x_.rows());
    }
    Point gradient(const Point& w) const override {
        Eigen::VectorXd m =
            (Eigen::VectorXd::Ones(x_.rows()) - y_.cwiseProduct(x_ * w)).cwiseMax(0.0);
        return x_.transpose() * (-2.0 * m.cwiseProduct(y_)) / static_cast<double>(x_.rows());
    }

    double smoothness() const override { return L_; }
    double max_component_smoothness() const override { return L_max_; }
    std::optional<double> f_star() const override { return f_star_; }

    // phi(g) = (1/n) sum max(0, m_i - g s_i)^2 is convex piecewise quadratic;
    // bisect its monotone derivative using precomputed margins.
    double line_search(const Point& w, const Point& delta) const override {
        Eigen::VectorXd m = Eigen::VectorXd::Ones(x_.rows()) - y_.cwiseProduct(x_ * w);
        Eigen::VectorXd s = y_.cwiseProduct(x_ * delta);
        auto dphi = [&](double g) {
            double acc = 0.0;
            for (int i = 0; i < m.size(); ++i) {
                double active = m[i] - g * s[i];
                if (active > 0.0) acc -= 2.0 * s[i] * active;
            }
            return acc;
        };
        if (dphi(0.0) >= 0.0) return 0.0;
        if (dphi(1.0) <= 0.0) return 1.0;
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            (dphi(mid) >= 0.0 ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    }

    const Eigen::MatrixXd& data() const { return x_; }
    const Eigen::VectorXd& labels() const { return y_; }

  private:
    Eigen::MatrixXd x_;
    Eigen::VectorXd y_;
    std::optional<double> f_star_;
    double L_ = 0.0, L_max_ = 0.0;
};

// Two isotropic Gaussian blobs with class means at +-mean_shift * e_1.
struct BlobsConfig {
    int n = 0;
    int d = 0;
    double mean_shift = 2.0;
    double sigma = 1.0;
    bool separable = true;
    double margin_floor = 0.1;   // pre-scaling minimum margin of the e_1 separator
    double feature_scale = 1.0;  // extra multiplier on top of margin normalization
    std::uint64_t seed = 0;
};

struct BlobsData {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    // When separable: w0 with ||w0||_1 <= 1 and min_i y_i <w0, x_i> >= 1,
    // verified over all n, which certifies f* = 0 inside the unit L1 ball.
    std::optional<Point> certificate;
};

inline BlobsData generate_blobs(const BlobsConfig& config) {
    if (config.n < 2 || config.d < 2) {
        throw std::invalid_argument("generate_blobs: need n >= 2 and d >= 2");
    }
    RngStream rng(config.seed, 0x626c6f6273ULL);  // dedicated data stream
    // Per-point redraw budget. When the margin floor is readily attainable
    // (violation probability well below 1) a spurious failure across the whole
    // dataset is vanishingly unlikely; when mean_shift is too small relative to
    // the floor, some point exhausts its budget and we report the config error.
    const int max_resamples = 8;
    Eigen::MatrixXd x(config.n, config.d);
    Eigen::VectorXd y(config.n);
    for (int i = 0; i < config.n; ++i) {
        double label = i % 2 == 0 ? 1.0 : -1.0;  // balanced to within 1
        y[i] = label;
        for (int attempt = 0;; ++attempt) {
            for (int j = 0; j < config.d; ++j) {
                x(i, j) = config.sigma * rng.next_normal();
            }
            x(i, 0) += label * config.mean_shift;
            // Candidate separator e_1; the point's margin is its signed first
            // coordinate. No constraint in the inseparable case.
            if (!config.separable || label * x(i, 0) >= config.margin_floor) break;
            if (attempt + 1 >= max_resamples) {
                throw std::runtime_error(
                    "generate_blobs: could not reach a separable sample after " +
                    std::to_string(max_resamples) +
                    " resamples of point " + std::to_string(i) +
                    "; increase mean_shift or lower margin_floor");
            }
        }
    }
    if (!config.separable) {
        x *= config.feature_scale;
        return {std::move(x), std::move(y), std::nullopt};
    }
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < config.n; ++i) margin = std::min(margin, y[i] * x(i, 0));
    // The slight upward nudge keeps the tightest point's margin at >= 1 even
    // after the rounding in margin, the division, and the rescale.
    double scale = config.feature_scale / margin * (1.0 + 1e-12);
    x *= scale;
    Point w0 = Point::Zero(config.d);
    w0[0] = 1.0;
    for (int i = 0; i < config.n; ++i) {
        if (y[i] * x.row(i).dot(w0) < 1.0) {
            throw std::logic_error("generate_blobs: certificate verification failed");
        }
    }
    return {std::move(x), std::move(y), w0};
}

// Dataset CSV: header x_1,...,x_d,y, label column last, 17-significant-digit
// floats, LF line endings.
inline void write_dataset_csv(std::ostream& os, const Eigen::MatrixXd& x,
                              const Eigen::VectorXd& y) {
    for (int j = 0; j < x.cols(); ++j) os << 'x' << '_' << (j + 1) << ',';
    os << "y\n";
    for (int i = 0; i < x.rows(); ++i) {
        for (int j = 0; j < x.cols(); ++j) os << format_double(x(i, j)) << ',';
        os << format_double(y[i]) << '\n';
    }
}

inline std::pair<Eigen::MatrixXd, Eigen::VectorXd> read_dataset_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("dataset CSV: empty file");
    int d = static_cast<int>(std::count(line.begin(), line.end(), ','));
    if (d < 1) throw std::runtime_error("dataset CSV: malformed header");
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) != d + 1) {
            throw std::runtime_error("dataset CSV: row width mismatch");
        }
        rows.push_back(std::move(row));
    }
    Eigen::MatrixXd x(rows.size(), d);
    Eigen::VectorXd y(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < d; ++j) x(i, j) = rows[i][j];
        y[i] = rows[i][d];
    }
    return {std::move(x), std::move(y)};
}

}  // namespace cgkit
