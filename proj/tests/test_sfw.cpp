#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cgkit/problems.hpp"
#include "cgkit/sfw.hpp"
#include "reference.hpp"

using cgkit::FeasibleSet;
using cgkit::Point;
using cgkit::RngStream;
using cgkit::SfwSchedule;

namespace {

cgkit::InterpolatingQuadratic deterministic_quadratic(int d, std::uint64_t seed) {
    RngStream rng(seed, 200);
    Eigen::MatrixXd q = cgkit::detail::random_orthogonal(d, rng);
    Eigen::VectorXd s2(d);
    for (int i = 0; i < d; ++i) {
        double s = 0.5 + 0.5 * rng.next_double();
        s2[i] = s * s;
    }
    Eigen::MatrixXd m = q * s2.asDiagonal() * q.transpose();
    Point x_star = Point::Zero(d);
    x_star[0] = 0.3;
    std::vector<Eigen::MatrixXd> ms(4, m);  // identical components: zero variance
    return cgkit::InterpolatingQuadratic(std::move(ms), std::move(x_star));
}

}  // namespace

TEST_CASE("schedule: closed forms and monotonicity") {
    auto fo = SfwSchedule::first_order(100);
    CHECK(fo.gamma(1) == 1.0);
    CHECK(fo.batch(1, 20) == 2);  // ceil(4/2)
    CHECK(fo.batch(2, 20) == 3);  // ceil(5/2)
    long prev = 0;
    for (int t = 1; t <= 100; ++t) {
        CHECK(fo.gamma(t) > 0.0);
        CHECK(fo.gamma(t) <= 1.0);
        CHECK(fo.batch(t, 20) >= prev);
        CHECK(fo.batch(t, 20) >= 1);
        prev = fo.batch(t, 20);
    }
    auto zo = SfwSchedule::zeroth_order(100, 20, 2.0);
    CHECK(zo.batch(1, 20) == 4 * 24);
    CHECK(zo.nu == doctest::Approx(2.0 / (103 * std::pow(26.0, 1.5))).epsilon(1e-12));
}

TEST_CASE("sfw_run: T = 0 leaves only the initial state") {
    auto obj = deterministic_quadratic(4, 50);
    auto set = FeasibleSet::l1_ball(4, 1.0);
    RngStream rng(51, 0);
    auto trace = cgkit::sfw_run(obj, set, Point::Zero(4), SfwSchedule::first_order(0), rng);
    CHECK(trace.rows.size() == 1);
    CHECK(trace.counters.sfo_calls == 0);
    CHECK(trace.counters.lmo_calls == 0);
    CHECK(trace.final_x == Point::Zero(4));
}

TEST_CASE("sfw_run: zero-variance trajectory matches the reference FW") {
    const int d = 5, T = 50;
    auto obj = deterministic_quadratic(d, 52);
    auto set = FeasibleSet::l1_ball(d, 1.0);
    auto grad = [&](const Point& x) { return obj.gradient(x); };
    Point x0 = Point::Zero(d);
    auto expect = ref::fw_trajectory(grad, set, x0, T);
    // Iterate k reproduced by running the solver with horizon k; the sampled
    // indices are irrelevant because all components are identical.
    for (int k : {1, 2, 5, 10, 25, 50}) {
        RngStream rng(53, 0);
        auto trace = cgkit::sfw_run(obj, set, x0, SfwSchedule::first_order(k), rng);
        CHECK((trace.final_x - expect[k]).norm() <= 1e-12);
    }
}

TEST_CASE("sfw_run: exact counters, both modes") {
    const int d = 6, T = 40;
    auto obj = deterministic_quadratic(d, 54);
    auto set = FeasibleSet::l1_ball(d, 1.0);
    RngStream rng(55, 0);
    auto fo = cgkit::sfw_run(obj, set, Point::Zero(d), SfwSchedule::first_order(T), rng);
    std::uint64_t sfo = 0;
    for (int t = 1; t <= T; ++t) sfo += static_cast<std::uint64_t>((t + 3 + 1) / 2);
    CHECK(fo.counters.sfo_calls == sfo);
    CHECK(fo.counters.lmo_calls == static_cast<std::uint64_t>(T));
    CHECK(fo.counters.szo_calls == 0);
    CHECK(fo.rows.back().sfo == sfo);

    RngStream rng2(55, 0);
    auto zo = cgkit::sfw_run(obj, set, Point::Zero(d),
                             SfwSchedule::zeroth_order(T, d, set.diameter()), rng2);
    std::uint64_t szo = 0;
    for (int t = 1; t <= T; ++t) szo += 2ULL * (t + 3) * (d + 4);
    CHECK(zo.counters.szo_calls == szo);
    CHECK(zo.counters.sfo_calls == 0);
    CHECK(zo.counters.lmo_calls == static_cast<std::uint64_t>(T));
}

TEST_CASE("sfw_run: determinism and feasibility") {
    const int d = 5;
    RngStream prng(56, 300);
    Point x_star = Point::Zero(d);
    x_star[0] = 0.3;
    auto obj = cgkit::make_quadratic(6, d, 4.0, x_star, prng);
    auto set = FeasibleSet::l1_ball(d, 1.0);
    RngStream a(57, 4), b(57, 4);
    auto ta = cgkit::sfw_run(obj, set, Point::Zero(d), SfwSchedule::first_order(60), a);
    auto tb = cgkit::sfw_run(obj, set, Point::Zero(d), SfwSchedule::first_order(60), b);
    CHECK(ta.final_x == tb.final_x);
    for (size_t i = 0; i < ta.rows.size(); ++i) {
        CHECK(ta.rows[i].f == tb.rows[i].f);
    }
    CHECK(set.contains(ta.final_x, 1e-9));
}

TEST_CASE("sfw_run: rejects infeasible starts and wrong dimensions") {
    auto obj = deterministic_quadratic(4, 58);
    auto set = FeasibleSet::l1_ball(4, 1.0);
    RngStream rng(59, 0);
    CHECK_THROWS_AS(cgkit::sfw_run(obj, set, Point::Constant(4, 1.0),
                                   SfwSchedule::first_order(5), rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(cgkit::sfw_run(obj, FeasibleSet::l1_ball(3, 1.0), Point::Zero(3),
                                   SfwSchedule::first_order(5), rng),
                    std::invalid_argument);
}

TEST_CASE("sfw_rate_check: seed floor and f_star requirement") {
    const int d = 4;
    auto obj = deterministic_quadratic(d, 60);
    auto set = FeasibleSet::l1_ball(d, 1.0);
    std::vector<cgkit::RunTrace> traces;
    for (int k = 0; k < 5; ++k) {
        RngStream rng(61 + k, k);
        traces.push_back(
            cgkit::sfw_run(obj, set, set.random_point(rng), SfwSchedule::first_order(30), rng));
    }
    CHECK_THROWS_AS(cgkit::sfw_rate_check(traces, cgkit::OracleMode::FirstOrder, 0.0, 1.0,
                                          2.0, {10}, 10, 30),
                    std::invalid_argument);
}

TEST_CASE("sfw_rate_check: bound holds on a small deterministic ensemble") {
    const int d = 4, T = 200;
    auto obj = deterministic_quadratic(d, 62);
    auto set = FeasibleSet::l1_ball(d, 1.0);
    std::vector<cgkit::RunTrace> traces;
    for (int k = 0; k < 20; ++k) {
        RngStream rng(63, k);
        traces.push_back(
            cgkit::sfw_run(obj, set, set.random_point(rng), SfwSchedule::first_order(T), rng));
    }
    // Zero-variance problem: rho = 0 is exact.
    auto report = cgkit::sfw_rate_check(traces, cgkit::OracleMode::FirstOrder, 0.0,
                                        obj.smoothness(), set.diameter(), {1, 10, 100},
                                        20, T);
    for (const auto& cp : report.checkpoints) CHECK(cp.pass);
    // Bound sequence is strictly decreasing in t.
    for (size_t i = 1; i < report.checkpoints.size(); ++i) {
        CHECK(report.checkpoints[i].bound < report.checkpoints[i - 1].bound);
    }
}
