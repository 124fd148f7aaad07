#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cgkit/feasible_set.hpp"
#include "cgkit/rng.hpp"
#include "reference.hpp"

using cgkit::FeasibleSet;
using cgkit::OracleCounters;
using cgkit::Point;
using cgkit::RngStream;

namespace {

std::vector<FeasibleSet> polytopes(int d, RngStream& rng) {
    Point lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        lo[i] = -1.0 - rng.next_double();
        hi[i] = 0.5 + rng.next_double();
    }
    return {FeasibleSet::l1_ball(d, 1.5), FeasibleSet::simplex(d, 2.0),
            FeasibleSet::box(lo, hi)};
}

}  // namespace

TEST_CASE("lmo: forced vertices") {
    OracleCounters c;
    Point g(3);
    g << 3, -1, 2;
    Point v = FeasibleSet::l1_ball(3, 1.0).lmo(g, c);
    CHECK(v[0] == -1.0);
    CHECK(v[1] == 0.0);
    CHECK(v[2] == 0.0);

    g << 0.5, -0.2, 0.1;
    v = FeasibleSet::simplex(3, 1.0).lmo(g, c);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 1.0);
    CHECK(v[2] == 0.0);
    CHECK(c.lmo_calls == 2);
}

TEST_CASE("lmo: L1 ball matches vertex enumeration on 1000 random gradients") {
    auto set = FeasibleSet::l1_ball(5, 2.0);
    RngStream rng(11, 0);
    OracleCounters c;
    for (int trial = 0; trial < 1000; ++trial) {
        Point g = cgkit::gaussian_direction(rng, 5);
        double got = ref::naive_dot(set.lmo(g, c), g);
        CHECK(std::abs(got - ref::brute_lmo_value(set, g)) <= 1e-12);
    }
}

TEST_CASE("lmo: optimality over extreme points for every kind, d <= 6") {
    RngStream rng(12, 0);
    OracleCounters c;
    for (int d = 2; d <= 6; ++d) {
        for (const auto& set : polytopes(d, rng)) {
            auto vs = ref::vertices(set);
            for (int trial = 0; trial < 50; ++trial) {
                Point g = cgkit::gaussian_direction(rng, d);
                double got = ref::naive_dot(set.lmo(g, c), g);
                for (const auto& v : vs) CHECK(got <= ref::naive_dot(v, g) + 1e-12);
            }
        }
        // L2 ball against random boundary points.
        auto ball = FeasibleSet::l2_ball(d, 1.3);
        for (int trial = 0; trial < 20; ++trial) {
            Point g = cgkit::gaussian_direction(rng, d);
            double got = ref::naive_dot(ball.lmo(g, c), g);
            for (int b = 0; b < 500; ++b) {
                Point p = cgkit::gaussian_direction(rng, d);
                p *= ball.scale() / p.norm();
                CHECK(got <= ref::naive_dot(p, g) + 1e-12);
            }
        }
    }
}

TEST_CASE("lmo: zero gradient gives the first canonical extreme point") {
    OracleCounters c;
    Point z = Point::Zero(4);
    CHECK(FeasibleSet::l1_ball(4, 2.0).lmo(z, c)[0] == 2.0);
    CHECK(FeasibleSet::l2_ball(4, 3.0).lmo(z, c)[0] == 3.0);
    CHECK(FeasibleSet::simplex(4, 1.0).lmo(z, c)[0] == 1.0);
}

TEST_CASE("lmo: ties break toward the lowest index") {
    OracleCounters c;
    Point g(3);
    g << -1, -1, -1;
    Point v = FeasibleSet::simplex(3, 1.0).lmo(g, c);
    CHECK(v[0] == 1.0);
    g << 2, -2, 2;
    v = FeasibleSet::l1_ball(3, 1.0).lmo(g, c);
    CHECK(v[0] == -1.0);
}

TEST_CASE("lmo: invariant under positive scaling of the gradient") {
    RngStream rng(13, 0);
    OracleCounters c;
    for (int trial = 0; trial < 200; ++trial) {
        Point g = cgkit::gaussian_direction(rng, 4);
        for (const auto& set : polytopes(4, rng)) {
            CHECK(set.lmo(g, c) == set.lmo(Point(10.0 * g), c));
        }
        auto ball = FeasibleSet::l2_ball(4, 1.0);
        CHECK((ball.lmo(g, c) - ball.lmo(Point(3.0 * g), c)).norm() <= 1e-12);
    }
}

TEST_CASE("lmo: rejects non-finite gradients") {
    OracleCounters c;
    Point g(2);
    g << 1.0, std::nan("");
    CHECK_THROWS_AS(FeasibleSet::l1_ball(2, 1.0).lmo(g, c), std::invalid_argument);
}

TEST_CASE("contains: natural-norm membership") {
    auto set = FeasibleSet::l1_ball(2, 1.0);
    Point x(2);
    x << 0.5, 0.5;
    CHECK(set.contains(x, 0.0));
    x << 0.6, 0.5;
    CHECK(!set.contains(x, 1e-9));
}

TEST_CASE("contains: lmo outputs are feasible") {
    RngStream rng(14, 0);
    OracleCounters c;
    for (int d = 2; d <= 5; ++d) {
        for (const auto& set : polytopes(d, rng)) {
            for (int trial = 0; trial < 100; ++trial) {
                Point g = cgkit::gaussian_direction(rng, d);
                CHECK(set.contains(set.lmo(g, c), 1e-12));
            }
        }
        auto ball = FeasibleSet::l2_ball(d, 0.7);
        for (int trial = 0; trial < 100; ++trial) {
            CHECK(ball.contains(ball.lmo(cgkit::gaussian_direction(rng, d), c), 1e-12));
        }
    }
}

TEST_CASE("fw_gap: direct cases and brute force") {
    OracleCounters c;
    auto set = FeasibleSet::l1_ball(2, 1.0);
    Point x = Point::Zero(2);
    CHECK(set.fw_gap(x, Point::Zero(2), c) == 0.0);
    Point g(2);
    g << 1, 0;
    CHECK(set.fw_gap(x, g, c) == doctest::Approx(1.0).epsilon(1e-15));

    RngStream rng(15, 0);
    for (int d = 2; d <= 5; ++d) {
        for (const auto& poly : polytopes(d, rng)) {
            for (int trial = 0; trial < 100; ++trial) {
                Point xr = poly.random_point(rng);
                Point gr = cgkit::gaussian_direction(rng, d);
                double expect = -std::numeric_limits<double>::infinity();
                for (const auto& v : ref::vertices(poly)) {
                    expect = std::max(expect, ref::naive_dot(gr, xr - v));
                }
                CHECK(std::abs(poly.fw_gap(xr, gr, c) - expect) <= 1e-12);
                CHECK(poly.fw_gap(xr, gr, c) >= -1e-12);
            }
        }
    }
}

TEST_CASE("diameter: dominates random pairs, attained by a vertex pair") {
    RngStream rng(16, 0);
    for (int d = 2; d <= 4; ++d) {
        std::vector<FeasibleSet> sets = polytopes(d, rng);
        sets.push_back(FeasibleSet::l2_ball(d, 1.1));
        for (const auto& set : sets) {
            for (int trial = 0; trial < 25000; ++trial) {
                Point a = set.random_point(rng), b = set.random_point(rng);
                CHECK((a - b).norm() <= set.diameter() + 1e-9);
            }
            if (set.kind() != cgkit::SetKind::L2Ball) {
                double best = 0.0;
                auto vs = ref::vertices(set);
                for (const auto& u : vs) {
                    for (const auto& v : vs) best = std::max(best, (u - v).norm());
                }
                CHECK(best == doctest::Approx(set.diameter()).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("diameter: closed forms") {
    CHECK(FeasibleSet::l1_ball(5, 2.0).diameter() == 4.0);
    CHECK(FeasibleSet::l2_ball(5, 2.0).diameter() == 4.0);
    CHECK(FeasibleSet::simplex(5, 3.0).diameter() ==
          doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-15));
    Point lo = Point::Zero(2), hi = Point::Ones(2);
    CHECK(FeasibleSet::box(lo, hi).diameter() ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(FeasibleSet::l1_ball(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FeasibleSet::l1_ball(3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(FeasibleSet::simplex(3, -1.0), std::invalid_argument);
    Point lo = Point::Ones(2), hi = Point::Ones(2);
    CHECK_THROWS_AS(FeasibleSet::box(lo, hi), std::invalid_argument);
}

TEST_CASE("random_point: feasible and does not touch counters") {
    RngStream rng(17, 0);
    for (int d = 2; d <= 5; ++d) {
        std::vector<FeasibleSet> sets = polytopes(d, rng);
        sets.push_back(FeasibleSet::l2_ball(d, 1.0));
        for (const auto& set : sets) {
            for (int trial = 0; trial < 200; ++trial) {
                CHECK(set.contains(set.random_point(rng), 1e-9));
            }
        }
    }
}
