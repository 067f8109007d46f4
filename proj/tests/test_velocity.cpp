#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kdvtraj/error.hpp"
#include "kdvtraj/experiments.hpp"
#include "kdvtraj/velocity.hpp"

using namespace kdvtraj;

TEST_CASE("first-order field is depth independent and equals k eta") {
    const auto sys = experiment_c_system();
    const double k = std::sqrt(981.0 / 30.0);
    for (double y : {0.0, 10.0, 30.0}) {
        const auto s = first_order(sys, 0.0, y, 0.0);
        CHECK(s.u == doctest::Approx(31.22).epsilon(1e-3));
        CHECK(s.u == doctest::Approx(k * 5.46).epsilon(1e-14));
        CHECK(std::abs(s.v) <= 1e-9 * k * 5.46);  // eta_x vanishes at the crest
    }
    const auto off = first_order(sys, 40.0, 15.0, 0.0);
    CHECK(off.v * 40.0 > 0.0);  // rising face ahead of the crest
}

TEST_CASE("higher-order field: small-depth Taylor expansion") {
    // u = k (eta - y^2/2 eta_xx + ...), v = -k (y eta_x - y^3/6 eta_xxx + ...)
    const auto sys = experiment_c_system();
    const double k = sys.velocity_scale(), y = 1.0, h = 1e-2;
    // sup |d^n/dz^n sech^2| = 16, 272, 7936 for n = 4, 6, 8 bounds the tail of u
    const double by = y * sys.betas()[0];
    const double remainder = k * 5.46 *
                             (16.0 * std::pow(by, 4) / 24.0 + 272.0 * std::pow(by, 6) / 720.0 +
                              7936.0 * std::pow(by, 8) / 40320.0 + 1e-12);
    for (int i = -20; i <= 20; ++i) {
        const double x = 10.0 * i;
        const auto d = eval_eta_derivs(sys, x, 0.0, 2);
        const double eta_xxx =
            (eval_eta_derivs(sys, x + h, 0.0, 2).eta_xx - eval_eta_derivs(sys, x - h, 0.0, 2).eta_xx) / (2 * h);
        const auto s = higher_order(sys, x, y, 0.0);
        CHECK(std::abs(s.u - k * (d.eta - 0.5 * y * y * d.eta_xx)) <= remainder);
        CHECK(std::abs(s.v + k * (y * d.eta_x - y * y * y / 6.0 * eta_xxx)) <= 1e-9 * k * 5.46);
    }
}

TEST_CASE("trigonometric and complex routes agree") {
    const auto sys = build_system({1.0, 981.0}, {{0.3, 0.0}, {0.2, 4.0}, {0.1, 9.0}});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-15.0, 25.0), uy(0.0, 1.3);
    const double scale = sys.velocity_scale() * 0.3;
    for (int i = 0; i < 500; ++i) {
        const double x = ux(rng), y = uy(rng);
        const auto a = higher_order(sys, x, y, 0.0);
        const auto b = higher_order_trig(sys, x, y, 0.0);
        CHECK(std::abs(a.u - b.u) <= 1e-10 * scale);
        CHECK(std::abs(a.v - b.v) <= 1e-10 * scale);
    }
}

TEST_CASE("bottom second-order field against closed-form derivatives") {
    const double h0 = 2.0, a = 0.3;
    const auto sys = build_system({h0, 981.0}, {{a, 0.0}});
    const double beta = sys.betas()[0], k = std::sqrt(981.0 / h0);
    for (int i = -40; i <= 40; ++i) {
        const double x = 0.25 * i;
        const double s = 1.0 / std::pow(std::cosh(beta * x), 2);
        const double eta = a * s;
        const double eta_xx = a * beta * beta * (4.0 * s - 6.0 * s * s);
        const double ref = k * (eta - eta * eta / (4.0 * h0) + h0 * h0 / 3.0 * eta_xx);
        CHECK(bottom_second_order(sys, x, 0.0) == doctest::Approx(ref).scale(1e-13 * k * a));
    }
    const auto sample = evaluate_field(sys, FieldKind::BottomSecondOrder, 0.0, 0.5, 0.0);
    CHECK(sample.v == 0.0);
    CHECK(sample.kind == FieldKind::BottomSecondOrder);
}

TEST_CASE("out-of-strip points are flagged") {
    const auto sys = build_system({1.0, 981.0}, {{0.2, 0.0}});
    CHECK_FALSE(higher_order(sys, 0.0, 1.1, 0.0).out_of_strip);
    CHECK(higher_order(sys, 0.0, 1.5, 0.0).out_of_strip);
}

TEST_CASE("field kind names round-trip") {
    for (auto k : {FieldKind::FirstOrder, FieldKind::HigherOrder, FieldKind::HigherOrderTrig,
                   FieldKind::BottomSecondOrder}) {
        CHECK(parse_field_kind(to_string(k)) == k);
    }
    CHECK_FALSE(parse_field_kind("nope").has_value());
}

TEST_CASE("amplitude conditions") {
    const auto f5 = amplitude_conditions(figure5_system());
    const double b4 = std::sqrt(0.3), b3 = std::sqrt(0.225);
    CHECK(f5.hyp_margin == doctest::Approx(std::numbers::pi / 4 - 1.4 * (b4 + b3)));
    CHECK(f5.hyp2_margin == doctest::Approx(std::numbers::pi / 4 - 1.4 * b4));
    CHECK_FALSE(f5.hyp_holds);
    CHECK(f5.hyp2_holds);
    CHECK(f5.a == 0.4);

    const auto ec = amplitude_conditions(experiment_c_system());
    CHECK(ec.hyp_holds);
    CHECK(ec.hyp2_holds);
}

TEST_CASE("harmonic consistency converges at second order") {
    const auto sys = build_system({1.0, 981.0}, {{0.3, 0.0}, {0.2, 4.0}});
    const GridSpec grid{-6.0, 10.0, 17, 0.1, 1.2, 5, 0.0};
    const auto r = field_consistency_check(sys, FieldKind::HigherOrder, grid);
    CHECK(r.divergence_order >= 1.9);
    CHECK(r.curl_order >= 1.9);
    CHECK(r.max_divergence_half < r.max_divergence);

    // The first-order field is not irrotational, so curl does not vanish.
    const auto first = field_consistency_check(sys, FieldKind::FirstOrder, grid);
    CHECK(first.max_curl_half > 1e-3 * first.velocity_scale);
}
