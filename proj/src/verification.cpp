#include "kdvtraj/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kdvtraj/experiments.hpp"
#include "kdvtraj/soliton.hpp"
#include "kdvtraj/tracer.hpp"
#include "kdvtraj/velocity.hpp"

namespace kdvtraj {

namespace {

CheckResult at_most(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, "<=", measured <= threshold};
}

CheckResult at_least(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, ">=", measured >= threshold};
}

CheckResult equals(std::string name, double measured, double expected) {
    return {std::move(name), measured, expected, "==", measured == expected};
}

// N = 2 system satisfying the sufficient positivity condition, with the
// faster soliton starting 60 cm behind the slower one.
SolitonSystem hyp_pair() { return build_system({1.0, 981.0}, {{0.12, 0.0}, {0.04, 60.0}}); }

SolitonSystem triple() { return build_system({1.0, 981.0}, {{0.3, 0.0}, {0.2, 4.0}, {0.1, 9.0}}); }

void closed_form(std::vector<CheckResult>& out) {
    const auto sys = build_system({1.0, 1.0}, {{0.4, 0.0}});
    const double a = 0.4, beta = sys.betas()[0], c = sys.speeds()[0];
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double t = -20.0 + 0.4 * i;
        for (int j = 0; j < 50; ++j) {
            const double x = c * t + (-40.0 + 1.6 * j) / beta;
            const double ref = a / std::pow(std::cosh(beta * (x - c * t)), 2);
            worst = std::max(worst, std::abs(eval_eta(sys, x, t) - ref) / a);
        }
    }
    out.push_back(at_most("single soliton equals a sech^2 (max err / a)", worst, 1e-12));
}

void symmetries(std::vector<CheckResult>& out) {
    const auto sys = triple();
    const double shift = 3.7;
    const auto moved = build_system({1.0, 981.0}, {{0.3, shift}, {0.2, 4.0 + shift}, {0.1, 9.0 + shift}});
    const auto permuted = build_system({1.0, 981.0}, {{0.1, 9.0}, {0.3, 0.0}, {0.2, 4.0}});
    double translation = 0.0, permutation = 0.0;
    for (int i = 0; i < 400; ++i) {
        const double x = -30.0 + 0.15 * i;
        for (double t : {-0.2, 0.0, 0.15}) {
            const double ref = eval_eta(sys, x, t);
            translation = std::max(translation, std::abs(eval_eta(moved, x + shift, t) - ref) / 0.3);
            permutation = std::max(permutation, std::abs(eval_eta(permuted, x, t) - ref) / 0.3);
        }
    }
    out.push_back(at_most("translation covariance (max err / a)", translation, 1e-12));
    out.push_back(at_most("permutation invariance (max err / a)", permutation, 1e-13));
}

void oracle_equivalence(std::vector<CheckResult>& out) {
    std::mt19937_64 rng(20260101);
    const SolitonSystem systems[] = {experiment_c_system(), figure5_system(), triple()};
    for (const auto& sys : systems) {
        const double width = 1.0 / sys.beta_min();
        const double top = sys.fluid().h0 + sys.max_amplitude();
        double s_min = 1e300, s_max = -1e300;
        for (const auto& s : sys.solitons()) {
            s_min = std::min(s_min, s.phase);
            s_max = std::max(s_max, s.phase);
        }
        std::uniform_real_distribution<double> ux(s_min - 8.0 * width, s_max + 8.0 * width);
        std::uniform_real_distribution<double> uy(0.0, top);
        std::uniform_real_distribution<double> ut(-4.0 * width / sys.speed_max(), 4.0 * width / sys.speed_max());
        const double scale = sys.velocity_scale() * sys.max_amplitude();
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double x = ux(rng), y = uy(rng), t = ut(rng) + x / sys.speed_max();
            const auto a = higher_order(sys, x, y, t);
            const auto b = higher_order_trig(sys, x, y, t);
            const double norm = std::max({std::abs(a.u), std::abs(a.v), scale});
            worst = std::max(worst, std::max(std::abs(a.u - b.u), std::abs(a.v - b.v)) / norm);
        }
        out.push_back(
            at_most("complex vs trigonometric higher-order field, N=" + std::to_string(sys.size()), worst, 1e-10));
    }
}

void bed_and_positivity(std::vector<CheckResult>& out) {
    const auto sys = hyp_pair();
    const double k = sys.velocity_scale(), a = sys.max_amplitude();
    double v_bed = 0.0, u_bed = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double t = 0.5 * i;
        for (int j = 0; j < 100; ++j) {
            const double x = 60.0 + sys.speeds()[1] * t + (j - 50) * 0.6;
            const auto s = higher_order(sys, x, 0.0, t);
            const double ref = k * eval_eta(sys, x, t);
            v_bed = std::max(v_bed, std::abs(s.v) / (k * a));
            u_bed = std::max(u_bed, std::abs(s.u - ref) / std::max(std::abs(ref), 1e-300));
        }
    }
    out.push_back(at_most("bed: |v(x,0,t)| / (k a)", v_bed, 1e-14));
    out.push_back(at_most("bed: u(x,0,t) vs k eta, relative", u_bed, 1e-12));

    // 200 x 50 grid over 20 widths of the strip, before and during interaction.
    const double width = 1.0 / sys.beta_min();
    const double top = sys.fluid().h0 + a;
    double min_u = 1e300;
    for (double t : {0.0, 48.0}) {
        const double centre = 0.5 * (sys.speeds()[0] * t + 60.0 + sys.speeds()[1] * t);
        for (int i = 0; i < 200; ++i) {
            const double x = centre - 10.0 * width + 20.0 * width * i / 199.0;
            if (!(eval_eta(sys, x, t) > 1e-10 * a)) continue;
            for (int j = 0; j < 50; ++j) {
                const double y = top * j / 49.0;
                min_u = std::min(min_u, higher_order(sys, x, y, t).u / (k * a));
            }
        }
    }
    out.push_back({"positive horizontal speed under hyp (min u / (k a))", min_u, 0.0, ">", min_u > 0.0});
}

void harmonic_consistency(std::vector<CheckResult>& out) {
    const auto sys = experiment_c_system();
    const double width = 1.0 / sys.betas()[0];
    GridSpec grid{-3.0 * width, 3.0 * width, 21, 3.0, 35.0, 6, 0.0};
    const auto r = field_consistency_check(sys, FieldKind::HigherOrder, grid);
    out.push_back(at_least("higher-order divergence convergence order", r.divergence_order, 1.9));
    out.push_back(at_least("higher-order curl convergence order", r.curl_order, 1.9));

    double worst = 0.0;
    const double scale = sys.velocity_scale() * sys.max_amplitude();
    for (double y : {5.0, 15.0, 30.0}) {
        for (int i = 1; i <= 60; ++i) {
            const double d = 0.1 * i * width;
            worst = std::max(worst,
                             std::abs(higher_order(sys, d, y, 0.0).v + higher_order(sys, -d, y, 0.0).v) / scale);
        }
    }
    out.push_back(at_most("single-soliton v antisymmetry about the crest", worst, 1e-12));
}

void table1(std::vector<CheckResult>& out) {
    const auto rows = reproduce_table1();
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.max_abs_error());
    out.push_back(at_most("Table 1 reproduction, max relative error", worst, 0.03));

    const auto sys = experiment_c_system();
    double x_spread = 0.0, ratio_spread = 0.0;
    const double x_ref = rows.front().first.x_total;
    const double ratio_ref = rows.front().first.y_max / rows.front().reference.b;
    for (const auto& r : rows) {
        x_spread = std::max(x_spread, std::abs(r.first.x_total - x_ref) / x_ref);
        ratio_spread = std::max(ratio_spread, std::abs(r.first.y_max / r.reference.b - ratio_ref) / ratio_ref);
    }
    out.push_back(at_most("first-order X independent of b (relative spread)", x_spread, 1e-12));
    out.push_back(at_most("first-order Y_max / b constant (relative spread)", ratio_spread, 1e-6));

    const double heights[] = {19.25, 22.75, 25.25, 30.0};
    const auto mono = monotonicity_report(sys, FieldKind::HigherOrder, heights);
    out.push_back(equals("higher-order X strictly increasing in b", mono.verdict ? 1.0 : 0.0, 1.0));
}

void conditions(std::vector<CheckResult>& out) {
    const auto f5 = amplitude_conditions(figure5_system());
    const auto ec = amplitude_conditions(experiment_c_system());
    out.push_back(equals("figure-5 preset: hyp false, hyp2 true", (!f5.hyp_holds && f5.hyp2_holds) ? 1.0 : 0.0, 1.0));
    out.push_back(equals("experiment (c): hyp and hyp2 true", (ec.hyp_holds && ec.hyp2_holds) ? 1.0 : 0.0, 1.0));
}

void rk4_order(std::vector<CheckResult>& out) {
    const auto sys = experiment_c_system();
    const auto w = auto_window(sys, 0.0);
    double x[3];
    for (int level = 0; level < 3; ++level) {
        TraceConfig cfg;
        cfg.field = FieldKind::HigherOrder;
        cfg.t_start = w.t_start;
        cfg.t_end = w.t_end;
        cfg.dt = (w.t_end - w.t_start) / double(200 << level);
        x[level] = trace(sys, cfg, {0.0, 30.0}).states.back().x;
    }
    const double order = std::log2(std::abs(x[0] - x[1]) / std::abs(x[1] - x[2]));
    out.push_back(at_most("RK4 observed order, |p - 4|", std::abs(order - 4.0), 0.2));
}

void sign_changes(std::vector<CheckResult>& out) {
    TraceConfig cfg;
    cfg.field = FieldKind::HigherOrder;
    const auto single = experiment_c_system();
    const auto one = vertical_sign_changes(single, trace(single, cfg, {0.0, 20.0}));
    out.push_back(equals("sign changes of v, N=1", double(one.crossings.size()), 1.0));

    const auto pair = hyp_pair();
    const auto two = vertical_sign_changes(pair, trace(pair, cfg, {4000.0, 0.5}));
    out.push_back(equals("sign changes of v, N=2", double(two.crossings.size()), 3.0));
    out.push_back(equals("sign changes alternate", two.alternating() ? 1.0 : 0.0, 1.0));

    const ParticleState particles[] = {{200.0, 0.5}, {4000.0, 0.5}, {4000.0, 1.0}};
    double worst = 0.0;
    for (const auto& c : phase_shift_trajectory_check(pair, particles)) {
        worst = std::max(worst, c.discrepancy * pair.betas()[c.soliton]);
    }
    out.push_back(at_most("down-crossings follow shifted crests (max beta |dX|)", worst, 0.1));
}

void overshoot(std::vector<CheckResult>& out) {
    const double eps[] = {0.05, 0.10, 0.15, 0.20};
    const auto r = overshoot_scaling(1.0, eps);
    out.push_back(at_least("overshoot / a linear in eps, R^2", r.r_squared, 0.99));
    out.push_back(equals("overshoot increasing in eps", r.strictly_increasing ? 1.0 : 0.0, 1.0));
}

}  // namespace

std::vector<CheckResult> run_invariant_suite() {
    std::vector<CheckResult> out;
    closed_form(out);
    symmetries(out);
    oracle_equivalence(out);
    bed_and_positivity(out);
    harmonic_consistency(out);
    table1(out);
    conditions(out);
    rk4_order(out);
    sign_changes(out);
    overshoot(out);
    return out;
}

}  // namespace kdvtraj
