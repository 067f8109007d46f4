#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "kdvtraj/error.hpp"
#include "kdvtraj/soliton.hpp"

using namespace kdvtraj;
// Far behind the group F''F - F'^2 cancels to ~1e-100 relative, hence 250 digits.
using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<250>>;

namespace {

// Unscaled extended-precision evaluation of K (F''F - F'^2) / F^2 straight from the
// subset sum, with its own beta, c and alpha.
double big_eta(const FluidParams& f, const std::vector<SolitonSpec>& sol, double x, double t) {
    const std::size_t n = sol.size();
    std::vector<Big> beta(n), theta(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Big a = sol[i].amplitude, h0 = f.h0;
        beta[i] = sqrt(Big(3) * a / (Big(4) * h0 * h0 * h0));
        const Big c = sqrt(Big(f.g) * h0) * (Big(1) + a / (Big(2) * h0));
        theta[i] = Big(-2) * beta[i] * (Big(x) - Big(sol[i].phase) - c * Big(t));
    }
    Big F = 0, F1 = 0, F2 = 0;
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        Big exponent = 0, slope = 0, coef = 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            exponent += theta[i];
            slope += Big(-2) * beta[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!(mask >> j & 1)) continue;
                const Big r = (sqrt(Big(sol[i].amplitude)) - sqrt(Big(sol[j].amplitude))) /
                              (sqrt(Big(sol[i].amplitude)) + sqrt(Big(sol[j].amplitude)));
                coef *= r * r;
            }
        }
        const Big term = coef * exp(exponent);
        F += term;
        F1 += slope * term;
        F2 += slope * slope * term;
    }
    const Big h0 = f.h0;
    return static_cast<double>(Big(4) * h0 * h0 * h0 / Big(3) * (F2 * F - F1 * F1) / (F * F));
}

}  // namespace

TEST_CASE("build_system computes beta and speed") {
    const auto unit = build_system({1.0, 1.0}, {{0.4, 0.0}});
    CHECK(unit.betas()[0] == doctest::Approx(std::sqrt(0.3)).epsilon(1e-15));
    CHECK(unit.speeds()[0] == doctest::Approx(1.2).epsilon(1e-15));

    const auto exp_c = build_system({30.0, 981.0}, {{5.46, 0.0}});
    CHECK(exp_c.betas()[0] == doctest::Approx(0.0123152).epsilon(1e-5));
    CHECK(exp_c.speeds()[0] == doctest::Approx(std::sqrt(981.0 * 30.0) * (1.0 + 5.46 / 60.0)).epsilon(1e-15));
    CHECK(exp_c.subsets().size() == 1);  // non-empty subsets only
}

TEST_CASE("build_system rejects invalid input") {
    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code([] { build_system({0.0, 1.0}, {{0.1, 0.0}}); }) == ErrorCode::NonPositiveFluidParam);
    CHECK(code([] { build_system({1.0, -1.0}, {{0.1, 0.0}}); }) == ErrorCode::NonPositiveFluidParam);
    CHECK(code([] { build_system({1.0, 1.0}, {{-0.1, 0.0}}); }) == ErrorCode::NonPositiveAmplitude);
    CHECK(code([] { build_system({1.0, 1.0}, {{0.2, 0.0}, {0.2, 5.0}}); }) == ErrorCode::EqualAmplitudes);
    CHECK(code([] { build_system({1.0, 1.0}, std::span<const SolitonSpec>{}); }) == ErrorCode::EmptySystem);
    std::vector<SolitonSpec> many;
    for (int i = 0; i < 21; ++i) many.push_back({0.01 * (i + 1), 0.0});
    CHECK(code([&] { build_system({1.0, 1.0}, many); }) == ErrorCode::TooManySolitons);
}

TEST_CASE("alpha_pair") {
    CHECK(alpha_pair(4.0, 1.0) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(alpha_pair(1.0, 4.0) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(alpha_pair(0.4, 0.3) == doctest::Approx(0.0051548).epsilon(1e-4));
}

TEST_CASE("single soliton is a sech^2 profile") {
    const auto sys = build_system({1.0, 1.0}, {{0.4, 2.0}});
    const double b = std::sqrt(0.3), c = 1.2;
    for (double t : {-3.0, 0.0, 1.7}) {
        for (int i = -300; i <= 300; ++i) {
            const double x = 2.0 + c * t + 0.1 * i;
            const double ref = 0.4 / std::pow(std::cosh(b * (x - 2.0 - c * t)), 2);
            CHECK(std::abs(eval_eta(sys, x, t) - ref) <= 1e-12 * 0.4);
        }
    }
}

TEST_CASE("agrees with an extended-precision oracle, including far field") {
    const FluidParams f{1.0, 981.0};
    const std::vector<SolitonSpec> sol{{0.3, 0.0}, {0.2, 4.0}, {0.1, 9.0}};
    const auto sys = build_system(f, sol);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-60.0, 70.0), ut(-0.3, 0.3);
    for (int i = 0; i < 300; ++i) {
        const double x = ux(rng), t = ut(rng);
        const double ref = big_eta(f, sol, x, t);
        CHECK(std::abs(eval_eta(sys, x, t) - ref) <= 1e-12 * 0.3 + 1e-10 * std::abs(ref));
    }
    // Far ahead and behind the group, F spans hundreds of decades.
    for (double x : {-400.0, 500.0}) {
        const double ref = big_eta(f, sol, x, 0.0);
        const double got = eval_eta(sys, x, 0.0);
        CHECK(std::isfinite(got));
        CHECK(std::abs(got - ref) <= 1e-10 * ref + 1e-300);
    }
}

TEST_CASE("x-derivatives match Richardson finite differences") {
    const auto sys = build_system({1.0, 981.0}, {{0.3, 0.0}, {0.15, 3.0}});
    auto richardson = [&](auto fn, double x, double h) {
        const double d1 = (fn(x + h) - fn(x - h)) / (2 * h);
        const double d2 = (fn(x + h / 2) - fn(x - h / 2)) / h;
        return (4 * d2 - d1) / 3;
    };
    for (int i = 0; i < 40; ++i) {
        const double x = -8.0 + 0.4 * i;
        const auto d = eval_eta_derivs(sys, x, 0.01, 2);
        const double ex = richardson([&](double s) { return eval_eta(sys, s, 0.01); }, x, 1e-2);
        const double exx = richardson([&](double s) { return eval_eta_derivs(sys, s, 0.01, 1).eta_x; }, x, 1e-2);
        CHECK(d.eta_x == doctest::Approx(ex).epsilon(1e-7).scale(0.3));
        CHECK(d.eta_xx == doctest::Approx(exx).epsilon(1e-7).scale(0.3));
    }
}

TEST_CASE("complex continuation") {
    const auto sys = build_system({1.0, 981.0}, {{0.3, 0.0}, {0.2, 4.0}});
    SUBCASE("real axis reduces to the real profile") {
        for (int i = 0; i < 50; ++i) {
            const double x = -10.0 + 0.5 * i;
            const auto c = eval_eta_complex(sys, x, 0.0, 0.0);
            CHECK(c.eta.real() == doctest::Approx(eval_eta(sys, x, 0.0)).epsilon(1e-13).scale(0.3));
            CHECK(std::abs(c.eta.imag()) <= 1e-15);
        }
    }
    SUBCASE("conjugate symmetry in y") {
        for (int i = 0; i < 50; ++i) {
            const double x = -10.0 + 0.5 * i, y = 0.6;
            const auto up = eval_eta_complex(sys, x, y, 0.0);
            const auto down = eval_eta_complex(sys, x, -y, 0.0);
            CHECK(std::abs(up.eta - std::conj(down.eta)) <= 1e-13 * 0.3);
        }
    }
    SUBCASE("far from the strip is rejected") {
        CHECK_THROWS_AS(eval_eta_complex(sys, 0.0, 100.0, 0.0), Error);
    }
}

TEST_CASE("phase shifts") {
    const auto sys = build_system({1.0, 981.0}, {{0.4, 0.0}, {0.3, 30.0}});
    // The slower soliton is shifted back by the faster one.
    CHECK(phase_shift(sys, 1) == doctest::Approx(std::log(alpha_pair(0.4, 0.3)) / (2 * sys.betas()[1])));
    CHECK(phase_shift(sys, 1) == doctest::Approx(-5.5528).epsilon(1e-4));
    CHECK(phase_shift(sys, 0) == 0.0);
    const std::size_t bad[] = {0, 0};
    CHECK_THROWS_AS(phase_shift(sys, 1, bad), Error);

    // Well after the interaction the crest of the slower wave lies on the shifted track.
    const double t = 60.0;
    const auto tracks = crest_tracks(sys, t);
    REQUIRE(tracks.size() == 2);
    for (const auto& tr : tracks) {
        if (tr.soliton != 1) continue;
        double best_x = tr.shifted, best = -1.0;
        for (int i = -2000; i <= 2000; ++i) {
            const double x = tr.shifted + 1e-3 * i;
            const double e = eval_eta(sys, x, t);
            if (e > best) best = e, best_x = x;
        }
        CHECK(std::abs(best_x - tr.shifted) <= 2e-3);
    }
}
