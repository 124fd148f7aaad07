#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cgkit/counters.hpp"
#include "cgkit/point.hpp"
#include "cgkit/rng.hpp"

namespace cgkit {

enum class SetKind { L1Ball, L2Ball, Simplex, Box };

// Compact convex feasible set with an exact linear minimization oracle.
// Diameters are Euclidean. Argmin/argmax ties break toward the lowest index
// and a zero gradient returns the first canonical extreme point, so LMO
// output is deterministic.
class FeasibleSet {
  public:
    static FeasibleSet l1_ball(int d, double r) {
        require(d >= 1, "l1_ball: d must be >= 1");
        require(r > 0.0, "l1_ball: radius must be positive");
        FeasibleSet s(SetKind::L1Ball, d);
        s.scale_ = r;
        return s;
    }
    static FeasibleSet l2_ball(int d, double r) {
        require(d >= 1, "l2_ball: d must be >= 1");
        require(r > 0.0, "l2_ball: radius must be positive");
        FeasibleSet s(SetKind::L2Ball, d);
        s.scale_ = r;
        return s;
    }
    static FeasibleSet simplex(int d, double scale) {
        require(d >= 1, "simplex: d must be >= 1");
        require(scale > 0.0, "simplex: scale must be positive");
        FeasibleSet s(SetKind::Simplex, d);
        s.scale_ = scale;
        return s;
    }
    static FeasibleSet box(Point lower, Point upper) {
        check_same_dim(lower, upper, "box");
        for (int i = 0; i < lower.size(); ++i) {
            require(lower[i] < upper[i], "box: lower must be strictly below upper");
        }
        FeasibleSet s(SetKind::Box, static_cast<int>(lower.size()));
        s.lower_ = std::move(lower);
        s.upper_ = std::move(upper);
        return s;
    }

    SetKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double scale() const { return scale_; }
    const Point& lower() const { return lower_; }
    const Point& upper() const { return upper_; }

    double diameter() const {
        switch (kind_) {
            case SetKind::L1Ball: return 2.0 * scale_;
            case SetKind::L2Ball: return 2.0 * scale_;
            case SetKind::Simplex: return scale_ * std::sqrt(2.0);
            case SetKind::Box: return (upper_ - lower_).norm();
        }
        return 0.0;
    }

    // argmin over the set of <v, g>; always an extreme point.
    Point lmo(const Point& g, OracleCounters& counters) const {
        if (g.size() != dim_) throw std::invalid_argument("lmo: dimension mismatch");
        if (!all_finite(g)) throw std::invalid_argument("lmo: non-finite gradient");
        ++counters.lmo_calls;
        Point v = Point::Zero(dim_);
        switch (kind_) {
            case SetKind::L1Ball: {
                int best = 0;
                double best_abs = std::abs(g[0]);
                for (int i = 1; i < dim_; ++i) {
                    if (std::abs(g[i]) > best_abs) {
                        best_abs = std::abs(g[i]);
                        best = i;
                    }
                }
                if (best_abs == 0.0) {
                    v[0] = scale_;  // any extreme point is optimal for g = 0
                } else {
                    v[best] = g[best] > 0.0 ? -scale_ : scale_;
                }
                break;
            }
            case SetKind::L2Ball: {
                double n = g.norm();
                if (n == 0.0) {
                    v[0] = scale_;
                } else {
                    v = (-scale_ / n) * g;
                }
                break;
            }
            case SetKind::Simplex: {
                int best = 0;
                for (int i = 1; i < dim_; ++i) {
                    if (g[i] < g[best]) best = i;
                }
                v[best] = scale_;
                break;
            }
            case SetKind::Box: {
                for (int i = 0; i < dim_; ++i) {
                    v[i] = g[i] > 0.0 ? lower_[i] : upper_[i];
                }
                break;
            }
        }
        return v;
    }

    // Membership within tol in the set's natural norm.
    bool contains(const Point& x, double tol) const {
        if (x.size() != dim_) throw std::invalid_argument("contains: dimension mismatch");
        if (tol < 0.0) throw std::invalid_argument("contains: tol must be >= 0");
        switch (kind_) {
            case SetKind::L1Ball: return x.lpNorm<1>() <= scale_ + tol;
            case SetKind::L2Ball: return x.norm() <= scale_ + tol;
            case SetKind::Simplex: {
                if (std::abs(x.sum() - scale_) > tol) return false;
                for (int i = 0; i < dim_; ++i) {
                    if (x[i] < -tol) return false;
                }
                return true;
            }
            case SetKind::Box: {
                for (int i = 0; i < dim_; ++i) {
                    if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
                }
                return true;
            }
        }
        return false;
    }

    // Frank-Wolfe gap max_{y in set} <grad, x - y>; costs one LMO call.
    double fw_gap(const Point& x, const Point& grad, OracleCounters& counters) const {
        Point v = lmo(grad, counters);
        return dot(grad, x - v);
    }

    // Random feasible point: uniform convex combination of num_vertices
    // extreme points obtained from random Gaussian directions.
    Point random_point(RngStream& rng, int num_vertices = 3) const {
        OracleCounters scratch;  // sampling does not count against a run
        Point x = Point::Zero(dim_);
        std::vector<double> w(num_vertices);
        double wsum = 0.0;
        for (int k = 0; k < num_vertices; ++k) {
            w[k] = -std::log(rng.next_double_open());
            wsum += w[k];
        }
        for (int k = 0; k < num_vertices; ++k) {
            Point g = gaussian_direction(rng, dim_);
            x += (w[k] / wsum) * lmo(g, scratch);
        }
        return x;
    }

  private:
    FeasibleSet(SetKind kind, int d) : kind_(kind), dim_(d) {}
    static void require(bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(msg);
    }

    SetKind kind_;
    int dim_;
    double scale_ = 0.0;
    Point lower_, upper_;
};

}  // namespace cgkit
