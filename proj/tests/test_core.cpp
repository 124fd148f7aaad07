#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "cgkit/point.hpp"
#include "cgkit/rng.hpp"
#include "reference.hpp"

using cgkit::Point;
using cgkit::RngStream;

TEST_CASE("dot: direct evaluation") {
    Point a(3), b(3);
    a << 1, 2, 3;
    b << 4, 5, 6;
    CHECK(cgkit::dot(a, b) == doctest::Approx(32.0).epsilon(1e-15));
}

TEST_CASE("dot: zero vector annihilates") {
    RngStream rng(1, 0);
    for (int trial = 0; trial < 20; ++trial) {
        Point x = cgkit::gaussian_direction(rng, 6);
        CHECK(cgkit::dot(x, Point::Zero(6)) == 0.0);
    }
}

TEST_CASE("dot: matches naive loop on random pairs") {
    RngStream rng(2, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        int d = 1 + static_cast<int>(rng.uniform_index(8));
        Point a = cgkit::gaussian_direction(rng, d);
        Point b = cgkit::gaussian_direction(rng, d);
        double expect = ref::naive_dot(a, b);
        double tol = 1e-12 * std::max(1.0, std::abs(expect));
        CHECK(std::abs(cgkit::dot(a, b) - expect) <= tol);
    }
}

TEST_CASE("dot: dimension mismatch names both lengths") {
    Point a(3), b(5);
    a.setZero();
    b.setZero();
    try {
        cgkit::dot(a, b);
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        CHECK(msg.find('3') != std::string::npos);
        CHECK(msg.find('5') != std::string::npos);
    }
}

TEST_CASE("convex_combine: endpoints and interior") {
    Point x(2), y(2);
    x << 0, 0;
    y << 2, 4;
    CHECK(cgkit::convex_combine(x, y, 0.0) == x);
    CHECK(cgkit::convex_combine(x, y, 1.0) == y);
    Point m = cgkit::convex_combine(x, y, 0.25);
    CHECK(m[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("convex_combine: gamma outside [0,1] rejected") {
    Point x = Point::Zero(2), y = Point::Ones(2);
    CHECK_THROWS_AS(cgkit::convex_combine(x, y, -0.01), std::invalid_argument);
    CHECK_THROWS_AS(cgkit::convex_combine(x, y, 1.01), std::invalid_argument);
}

TEST_CASE("point ops stay finite at large magnitude") {
    Point x(3), y(3);
    x << 1e100, -1e100, 1e100;
    y << -1e100, 1e100, 0.5e100;
    CHECK(cgkit::all_finite(cgkit::convex_combine(x, y, 0.5)));
    CHECK(std::isfinite(cgkit::dot(x, Point::Constant(3, 1e-200))));
}

TEST_CASE("gaussian_direction: moments over 1e5 draws") {
    const int N = 100000, d = 5;
    RngStream rng(7, 3);
    Point mean = Point::Zero(d);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < N; ++i) {
        Point u = cgkit::gaussian_direction(rng, d);
        mean += u;
        cov += u * u.transpose();
    }
    mean /= N;
    cov /= N;
    double tol = 4.0 / std::sqrt(static_cast<double>(N));
    for (int i = 0; i < d; ++i) {
        CHECK(std::abs(mean[i]) <= tol);
        for (int j = 0; j < d; ++j) {
            double expect = i == j ? 1.0 : 0.0;
            CHECK(std::abs(cov(i, j) - expect) <= 0.05);
        }
    }
}

TEST_CASE("rng: identical (seed, stream) reproduces draws") {
    RngStream a(42, 9), b(42, 9);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    RngStream c(42, 9), e(42, 9);
    for (int i = 0; i < 100; ++i) {
        Point u = cgkit::gaussian_direction(c, 4);
        Point v = cgkit::gaussian_direction(e, 4);
        CHECK(u == v);
    }
}

TEST_CASE("rng: distinct stream ids diverge") {
    RngStream a(42, 0), b(42, 1);
    int same = 0;
    for (int i = 0; i < 64; ++i) {
        if (a.next_u64() == b.next_u64()) ++same;
    }
    CHECK(same == 0);
}

TEST_CASE("rng: uniform ranges") {
    RngStream rng(5, 5);
    for (int i = 0; i < 10000; ++i) {
        double u = rng.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        double v = rng.next_double_open();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        CHECK(rng.uniform_index(7) < 7);
    }
}

TEST_CASE("counters default to zero") {
    cgkit::OracleCounters c;
    CHECK(c.sfo_calls == 0);
    CHECK(c.szo_calls == 0);
    CHECK(c.lmo_calls == 0);
}
