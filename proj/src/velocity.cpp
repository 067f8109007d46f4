#include "kdvtraj/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "kdvtraj/error.hpp"

namespace kdvtraj {

namespace {

bool outside_strip(const SolitonSystem& sys, double y) {
    return y < 0.0 || y > sys.fluid().h0 + sys.max_amplitude();
}

// Real trigonometric sums of the renormalized F at x + i y,
// F = Fc - i Fs, together with the derivatives the closed forms need.
struct TrigSums {
    double c = 0, cx = 0, cxx = 0, cy = 0, cxy = 0;
    double s = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
};

TrigSums trig_sums(const SolitonSystem& sys, double x, double y, double t) {
    thread_local std::vector<detail::ScaledTerm> terms;
    detail::scaled_terms(sys, x, t, terms);
    TrigSums out;
    for (const auto& term : terms) {
        if (term.log_weight < -745.0) continue;
        const double w = std::exp(term.log_weight);
        const double slope = term.slope;
        // The renormalized term is w exp(slope (x + i y)); its angle in the
        // Fc - i Fs split is -slope y, i.e. 2 (beta sum) y before the shift.
        const double angle = -slope * y;
        const double wc = w * std::cos(angle);
        const double ws = w * std::sin(angle);
        out.c += wc;
        out.cx += slope * wc;
        out.cxx += slope * slope * wc;
        out.cy += slope * ws;
        out.cxy += slope * slope * ws;
        out.s += ws;
        out.sx += slope * ws;
        out.sxx += slope * slope * ws;
        out.sy -= slope * wc;
        out.sxy -= slope * slope * wc;
    }
    return out;
}

}  // namespace

std::string_view to_string(FieldKind kind) noexcept {
    switch (kind) {
        case FieldKind::FirstOrder: return "first";
        case FieldKind::HigherOrder: return "higher";
        case FieldKind::HigherOrderTrig: return "higher_trig";
        case FieldKind::BottomSecondOrder: return "bottom";
    }
    return "unknown";
}

std::optional<FieldKind> parse_field_kind(std::string_view name) noexcept {
    if (name == "first") return FieldKind::FirstOrder;
    if (name == "higher") return FieldKind::HigherOrder;
    if (name == "higher_trig") return FieldKind::HigherOrderTrig;
    if (name == "bottom") return FieldKind::BottomSecondOrder;
    return std::nullopt;
}

VelocitySample first_order(const SolitonSystem& sys, double x, double y, double t) {
    const auto d = eval_eta_derivs(sys, x, t, 1);
    const double k = sys.velocity_scale();
    return {k * d.eta, -y * k * d.eta_x, FieldKind::FirstOrder, outside_strip(sys, y)};
}

VelocitySample higher_order(const SolitonSystem& sys, double x, double y, double t) {
    const auto e = eval_eta_complex(sys, x, y, t, 0);
    const double k = sys.velocity_scale();
    return {k * e.eta.real(), -k * e.eta.imag(), FieldKind::HigherOrder, outside_strip(sys, y)};
}

VelocitySample higher_order_trig(const SolitonSystem& sys, double x, double y, double t) {
    const TrigSums f = trig_sums(sys, x, y, t);
    const double mod2 = f.c * f.c + f.s * f.s;
    if (std::sqrt(mod2) < kPoleThreshold) {
        std::ostringstream msg;
        msg << "(Fc^2 + Fs^2) vanishes at x=" << x << " y=" << y << " t=" << t;
        throw Error(ErrorCode::PoleProximity, msg.str());
    }
    const double denom = mod2 * mod2;
    const double pref = sys.hirota_prefactor() * sys.velocity_scale();

    const double p = f.c * f.cx + f.s * f.sx;
    const double u_num = (f.cx * f.cx + f.c * f.cxx + f.sx * f.sx + f.s * f.sxx) * mod2 - 2.0 * p * p;
    const double v_num = (f.c * f.cxy + f.s * f.sxy) * mod2 - 2.0 * p * (f.c * f.cy + f.s * f.sy);
    return {pref * u_num / denom, pref * v_num / denom, FieldKind::HigherOrderTrig, outside_strip(sys, y)};
}

double bottom_second_order(const SolitonSystem& sys, double x, double t) {
    const auto d = eval_eta_derivs(sys, x, t, 2);
    const double h0 = sys.fluid().h0;
    return sys.velocity_scale() * (d.eta - d.eta * d.eta / (4.0 * h0) + h0 * h0 / 3.0 * d.eta_xx);
}

VelocitySample evaluate_field(const SolitonSystem& sys, FieldKind kind, double x, double y, double t) {
    switch (kind) {
        case FieldKind::FirstOrder: return first_order(sys, x, y, t);
        case FieldKind::HigherOrder: return higher_order(sys, x, y, t);
        case FieldKind::HigherOrderTrig: return higher_order_trig(sys, x, y, t);
        case FieldKind::BottomSecondOrder:
            return {bottom_second_order(sys, x, t), 0.0, FieldKind::BottomSecondOrder, outside_strip(sys, y)};
    }
    throw Error(ErrorCode::InvalidArgument, "unknown field kind");
}

ConditionReport amplitude_conditions(const SolitonSystem& sys) {
    constexpr double quarter_pi = std::numbers::pi / 4.0;
    ConditionReport r;
    r.a = sys.max_amplitude();
    const double height = sys.fluid().h0 + r.a;
    double sum = 0.0;
    for (double b : sys.betas()) sum += b;
    r.hyp_margin = quarter_pi - height * sum;
    r.hyp_holds = r.hyp_margin >= 0.0;
    r.hyp2_margin = quarter_pi - height * sys.beta_max();
    r.hyp2_holds = r.hyp2_margin > 0.0;
    return r;
}

ConsistencyReport field_consistency_check(const SolitonSystem& sys, FieldKind kind, const GridSpec& grid,
                                          double fd_step) {
    if (grid.nx < 1 || grid.ny < 1) throw Error(ErrorCode::InvalidArgument, "grid counts must be >= 1");
    if (fd_step <= 0.0) fd_step = 1e-4 / sys.beta_max();

    auto residuals = [&](double h, double& div, double& curl) {
        div = 0.0;
        curl = 0.0;
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const double x = grid.nx == 1 ? grid.x_min
                                          : grid.x_min + (grid.x_max - grid.x_min) * double(i) / double(grid.nx - 1);
            for (std::size_t j = 0; j < grid.ny; ++j) {
                const double y = grid.ny == 1
                                     ? grid.y_min
                                     : grid.y_min + (grid.y_max - grid.y_min) * double(j) / double(grid.ny - 1);
                const auto xp = evaluate_field(sys, kind, x + h, y, grid.t);
                const auto xm = evaluate_field(sys, kind, x - h, y, grid.t);
                const auto yp = evaluate_field(sys, kind, x, y + h, grid.t);
                const auto ym = evaluate_field(sys, kind, x, y - h, grid.t);
                const double u_x = (xp.u - xm.u) / (2.0 * h);
                const double v_x = (xp.v - xm.v) / (2.0 * h);
                const double u_y = (yp.u - ym.u) / (2.0 * h);
                const double v_y = (yp.v - ym.v) / (2.0 * h);
                div = std::max(div, std::abs(u_x + v_y));
                curl = std::max(curl, std::abs(u_y - v_x));
            }
        }
    };

    ConsistencyReport r;
    r.fd_step = fd_step;
    r.velocity_scale = sys.velocity_scale() * sys.max_amplitude();
    residuals(fd_step, r.max_divergence, r.max_curl);
    residuals(fd_step / 2.0, r.max_divergence_half, r.max_curl_half);
    auto order = [](double coarse, double fine) {
        return (coarse > 0.0 && fine > 0.0) ? std::log2(coarse / fine) : 0.0;
    };
    r.divergence_order = order(r.max_divergence, r.max_divergence_half);
    r.curl_order = order(r.max_curl, r.max_curl_half);
    return r;
}

}  // namespace kdvtraj
