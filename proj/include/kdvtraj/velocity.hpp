#pragma once

#include <string_view>
#include <optional>

#include "kdvtraj/soliton.hpp"

namespace kdvtraj {

enum class FieldKind {
    FirstOrder,         ///< laminar: u = k eta, v = -y k eta_x
    HigherOrder,        ///< harmonic extension via complex eta
    HigherOrderTrig,    ///< same field from the real F^c / F^s sums
    BottomSecondOrder,  ///< second-order horizontal velocity on the bed
};

std::string_view to_string(FieldKind kind) noexcept;
std::optional<FieldKind> parse_field_kind(std::string_view name) noexcept;

struct VelocitySample {
    double u = 0.0;
    double v = 0.0;
    FieldKind kind = FieldKind::FirstOrder;
    /// set when y lies outside [0, h0 + max a]
    bool out_of_strip = false;
};

VelocitySample first_order(const SolitonSystem& sys, double x, double y, double t);

/// u = k Re eta(x + i y), v = -k Im eta(x + i y), k = sqrt(g / h0).
VelocitySample higher_order(const SolitonSystem& sys, double x, double y, double t);

/// The harmonic-extension field assembled from F^c, F^s and their
/// derivatives in real arithmetic.
VelocitySample higher_order_trig(const SolitonSystem& sys, double x, double y, double t);

/// k (eta - eta^2 / (4 h0) + h0^2 eta_xx / 3)
double bottom_second_order(const SolitonSystem& sys, double x, double t);

/// Dispatch on kind. BottomSecondOrder returns the bed value for u with v = 0
/// regardless of y.
VelocitySample evaluate_field(const SolitonSystem& sys, FieldKind kind, double x, double y, double t);

struct ConditionReport {
    bool hyp_holds = false;
    double hyp_margin = 0.0;   ///< pi/4 - (h0 + a) sum beta_i
    bool hyp2_holds = false;
    double hyp2_margin = 0.0;  ///< pi/4 - max_i beta_i (h0 + a)
    double a = 0.0;            ///< max amplitude
};

ConditionReport amplitude_conditions(const SolitonSystem& sys);

struct GridSpec {
    double x_min = 0.0, x_max = 0.0;
    std::size_t nx = 2;
    double y_min = 0.0, y_max = 0.0;
    std::size_t ny = 2;
    double t = 0.0;
};

struct ConsistencyReport {
    double fd_step = 0.0;
    double max_divergence = 0.0;       ///< max |u_x + v_y| at fd_step
    double max_curl = 0.0;             ///< max |u_y - v_x| at fd_step
    double max_divergence_half = 0.0;  ///< same at fd_step / 2
    double max_curl_half = 0.0;
    double divergence_order = 0.0;     ///< log2 of the residual ratio
    double curl_order = 0.0;
    double velocity_scale = 0.0;       ///< k max a, for normalizing residuals
};

/// Central-difference divergence and curl of a field over a grid, at fd_step
/// and fd_step / 2. fd_step <= 0 selects 1e-4 / beta_max.
ConsistencyReport field_consistency_check(const SolitonSystem& sys, FieldKind kind, const GridSpec& grid,
                                          double fd_step = 0.0);

}  // namespace kdvtraj
