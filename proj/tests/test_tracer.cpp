#include <doctest.h>

#include <cmath>

#include "kdvtraj/error.hpp"
#include "kdvtraj/experiments.hpp"
#include "kdvtraj/tracer.hpp"

using namespace kdvtraj;

TEST_CASE("rk4 integrates a uniform flow exactly") {
    const FieldEvaluator uniform = [](double, double, double) { return VelocitySample{2.0, -0.5}; };
    const auto traj = trace_with(uniform, FieldKind::FirstOrder, {0.0, 3.0}, 0.25, {1.0, 4.0});
    REQUIRE(traj.times.size() == 13);
    CHECK(traj.states.back().x == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(traj.states.back().y == doctest::Approx(2.5).epsilon(1e-14));
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        CHECK(traj.times[i] - traj.times[i - 1] == doctest::Approx(0.25));
    }
}

TEST_CASE("rk4 is fourth order on a rotation") {
    const FieldEvaluator rotation = [](double x, double y, double) { return VelocitySample{-y, x}; };
    auto error = [&](double dt) {
        const auto traj = trace_with(rotation, FieldKind::FirstOrder, {0.0, 2.0}, dt, {1.0, 0.0});
        const auto& s = traj.states.back();
        return std::hypot(s.x - std::cos(2.0), s.y - std::sin(2.0));
    };
    const double order = std::log2(error(0.1) / error(0.05));
    CHECK(order == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("default step and automatic window") {
    const auto sys = experiment_c_system();
    CHECK(default_time_step(sys) == doctest::Approx(0.002 / (sys.beta_max() * sys.speed_max())));

    const auto w = auto_window(sys, 0.0);
    CHECK(w.t_start < 0.0);
    CHECK(w.t_end > 0.0);
    CHECK(eval_eta(sys, 0.0, w.t_start) <= 1e-6 * 5.46);

    // Tightening the window tolerance barely changes the displacement.
    TraceConfig loose, tight;
    tight.window_tol = 1e-8;
    const auto a = displacement_metrics(trace(sys, loose, {0.0, 30.0}));
    const auto b = displacement_metrics(trace(sys, tight, {0.0, 30.0}));
    CHECK(std::abs(a.x_total - b.x_total) <= 1e-3 * b.x_total);
    CHECK(std::abs(a.y_max - b.y_max) <= 1e-3 * b.y_max);
}

TEST_CASE("bed particle stays on the bed and moves forward") {
    const auto sys = build_system({1.0, 981.0}, {{0.12, 0.0}, {0.04, 60.0}});
    const auto traj = trace(sys, TraceConfig{}, {0.0, 0.0});
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        CHECK(std::abs(traj.states[i].y) <= 1e-12);
        CHECK(traj.velocities[i].u > 0.0);
        if (i == 0) continue;
        // Deep in the tails the step is below one ulp of X.
        if (eval_eta(sys, traj.states[i - 1].x, traj.times[i - 1]) >= 1e-10 * 0.12) {
            CHECK(traj.states[i].x > traj.states[i - 1].x);
        } else {
            CHECK(traj.states[i].x >= traj.states[i - 1].x);
        }
    }
}

TEST_CASE("trace validates the starting height") {
    const auto sys = experiment_c_system();
    CHECK_THROWS_AS(trace(sys, TraceConfig{}, {0.0, -1.0}), Error);
    CHECK_THROWS_AS(trace(sys, TraceConfig{}, {0.0, 40.0}), Error);
    CHECK_THROWS_AS(displacement_metrics(Trajectory{}), Error);
}

TEST_CASE("vertical velocity sign changes") {
    const auto single = experiment_c_system();
    const auto one = vertical_sign_changes(single, trace(single, TraceConfig{}, {0.0, 20.0}));
    REQUIRE(one.crossings.size() == 1);
    CHECK(one.crossings[0].direction == CrossingDirection::UpToDown);
    // The particle turns downward as the crest passes overhead.
    CHECK(one.crossings[0].x == doctest::Approx(asymptotic_crest(single, 0, one.crossings[0].time))
                                    .scale(0.1 / single.betas()[0]));

    const auto pair = build_system({1.0, 981.0}, {{0.12, 0.0}, {0.04, 60.0}});
    const auto two = vertical_sign_changes(pair, trace(pair, TraceConfig{}, {4000.0, 0.5}));
    CHECK(two.crossings.size() == 3);
    CHECK(two.alternating());

    SignChangeReport bad;
    bad.crossings = {{0.0, 0.0, CrossingDirection::UpToDown}, {1.0, 1.0, CrossingDirection::UpToDown}};
    CHECK_FALSE(bad.alternating());
}

TEST_CASE("surface overshoot for a first-order surface particle") {
    // Relative overshoot under the first-order field is eps / (2 - eps).
    for (double eps : {0.1, 0.2}) {
        const auto sys = build_system({1.0, 981.0}, {{eps, 0.0}});
        TraceConfig cfg;
        cfg.field = FieldKind::FirstOrder;
        const auto w = auto_window(sys, 0.0);
        const double y0 = 1.0 + eval_eta(sys, 0.0, w.t_start);
        const double over = surface_overshoot(sys, trace(sys, cfg, {0.0, y0}));
        CHECK(over / eps == doctest::Approx(eps / (2.0 - eps)).epsilon(1e-3));
    }
    // Halving the amplitude roughly halves the normalized overshoot.
    const double eps[] = {0.2, 0.1};
    const auto r = overshoot_scaling(1.0, eps);
    const double ratio = r.points[1].relative_overshoot / r.points[0].relative_overshoot;
    CHECK(ratio == doctest::Approx(0.5).epsilon(0.1));
}
