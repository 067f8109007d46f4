#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kdvtraj/soliton.hpp"
#include "kdvtraj/velocity.hpp"

namespace kdvtraj {

struct ParticleState {
    double x = 0.0;
    double y = 0.0;
};

struct TimeWindow {
    double t_start = 0.0;
    double t_end = 0.0;
};

struct TraceConfig {
    FieldKind field = FieldKind::HigherOrder;
    std::optional<double> dt;        ///< default_time_step() when empty
    double window_tol = 1e-6;        ///< surface decay threshold for auto_window
    std::optional<double> t_start;   ///< explicit window; both or neither
    std::optional<double> t_end;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ParticleState> states;
    std::vector<VelocitySample> velocities;
    FieldKind field = FieldKind::HigherOrder;
    double dt = 0.0;
    TimeWindow window;
};

/// 0.002 / (beta_max c_max): about 500 steps per soliton width transit.
double default_time_step(const SolitonSystem& sys);

/// Time window over which a particle starting at x0 sees the whole wave
/// group pass: |eta(x0, t_start)| < tol a, and at t_end every crest track is
/// at least 20 / beta_min past x0 with the surface decayed below tol a at
/// the displaced particle position.
TimeWindow auto_window(const SolitonSystem& sys, double x0, double window_tol = 1e-6);

using FieldEvaluator = std::function<VelocitySample(double x, double y, double t)>;

ParticleState rk4_step(const FieldEvaluator& field, const ParticleState& state, double t, double dt);

Trajectory trace(const SolitonSystem& sys, const TraceConfig& config, const ParticleState& initial);

/// Same stepping loop driven by an arbitrary evaluator over an explicit window.
Trajectory trace_with(const FieldEvaluator& field, FieldKind kind, const TimeWindow& window, double dt,
                      const ParticleState& initial);

struct DisplacementMetrics {
    double x_total = 0.0;  ///< X(end) - X(start)
    double y_max = 0.0;    ///< max_t Y(t) - Y(start)
};

DisplacementMetrics displacement_metrics(const Trajectory& traj);

enum class CrossingDirection { UpToDown, DownToUp };

struct SignChange {
    double time = 0.0;
    double x = 0.0;
    CrossingDirection direction = CrossingDirection::UpToDown;
};

struct SignChangeReport {
    std::vector<SignChange> crossings;
    bool alternating() const noexcept;
};

/// Zero crossings of v along the path, ignoring excursions with |v| at or
/// below noise_floor. Crossing times and positions are linearly interpolated.
SignChangeReport vertical_sign_changes(const Trajectory& traj, double noise_floor);
SignChangeReport vertical_sign_changes(const SolitonSystem& sys, const Trajectory& traj);

/// max_t (Y(t) - h0 - eta(X(t), t)), clamped at zero from below.
double surface_overshoot(const SolitonSystem& sys, const Trajectory& traj);

}  // namespace kdvtraj
