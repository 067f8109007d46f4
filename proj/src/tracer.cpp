#include "kdvtraj/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kdvtraj/error.hpp"

namespace kdvtraj {

double default_time_step(const SolitonSystem& sys) {
    return 0.002 / (sys.beta_max() * sys.speed_max());
}

TimeWindow auto_window(const SolitonSystem& sys, double x0, double window_tol) {
    if (!(window_tol > 0.0 && window_tol < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "window_tol must lie in (0, 1)");
    }
    const std::size_t n = sys.size();
    const auto solitons = sys.solitons();
    const auto betas = sys.betas();
    const auto speeds = sys.speeds();
    const double a = sys.max_amplitude();
    const double threshold = window_tol * a;

    // Distance from a crest beyond which a sech^2 tail (<= 4 a_k e^{-2 beta D})
    // contributes less than threshold / N, plus the largest phase shift the
    // crest can carry in either direction.
    std::vector<double> reach(n), shifts(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double decay = std::log(4.0 * solitons[k].amplitude * double(n) / threshold) / (2.0 * betas[k]);
        double shift = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const double alpha = alpha_pair(solitons[i].amplitude, solitons[k].amplitude);
            shift += std::abs(std::log(alpha)) / (2.0 * betas[k]);
        }
        shifts[k] = shift;
        reach[k] = std::max(decay, 0.0) + shift;
    }

    TimeWindow w;
    w.t_start = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        w.t_start = std::min(w.t_start, (x0 - reach[k] - solitons[k].phase) / speeds[k]);
    }

    const double x_estimate = x0 + double(n) * (sys.fluid().h0 + a);
    const double passed = x0 + 20.0 / sys.beta_min();
    w.t_end = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double target = std::max(passed + shifts[k], x_estimate + reach[k]);
        w.t_end = std::max(w.t_end, (target - solitons[k].phase) / speeds[k]);
    }

    // The estimates above are asymptotic; confirm against the actual surface.
    const double nudge = 1.0 / (sys.beta_min() * sys.speed_max());
    for (int i = 0; i < 10000 && std::abs(eval_eta(sys, x0, w.t_start)) >= threshold; ++i) w.t_start -= nudge;
    for (int i = 0; i < 10000 && std::abs(eval_eta(sys, x_estimate, w.t_end)) >= threshold; ++i) w.t_end += nudge;
    if (w.t_end <= w.t_start) w.t_end = w.t_start + nudge;
    return w;
}

ParticleState rk4_step(const FieldEvaluator& field, const ParticleState& s, double t, double dt) {
    const double half = 0.5 * dt;
    const auto k1 = field(s.x, s.y, t);
    const auto k2 = field(s.x + half * k1.u, s.y + half * k1.v, t + half);
    const auto k3 = field(s.x + half * k2.u, s.y + half * k2.v, t + half);
    const auto k4 = field(s.x + dt * k3.u, s.y + dt * k3.v, t + dt);
    return {s.x + dt / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
            s.y + dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

Trajectory trace_with(const FieldEvaluator& field, FieldKind kind, const TimeWindow& window, double dt,
                      const ParticleState& initial) {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
    if (!(window.t_end > window.t_start)) throw Error(ErrorCode::InvalidArgument, "empty time window");
    // Whole number of steps covering the window; the last sample may land
    // slightly past t_end so that the spacing stays exactly dt.
    const double span = (window.t_end - window.t_start) / dt;
    const auto steps = static_cast<std::size_t>(std::ceil(span - 1e-9));

    Trajectory traj;
    traj.field = kind;
    traj.dt = dt;
    traj.window = window;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.velocities.reserve(steps + 1);

    ParticleState state = initial;
    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = window.t_start + double(i) * dt;
        traj.times.push_back(t);
        traj.states.push_back(state);
        traj.velocities.push_back(field(state.x, state.y, t));
        if (i < steps) state = rk4_step(field, state, t, dt);
    }
    return traj;
}

Trajectory trace(const SolitonSystem& sys, const TraceConfig& config, const ParticleState& initial) {
    const double top = sys.fluid().h0 + sys.max_amplitude();
    if (!(initial.y >= 0.0 && initial.y <= top * (1.0 + 1e-12))) {
        throw Error(ErrorCode::OutOfDomain, "initial Y must lie in [0, h0 + a]");
    }
    if (config.t_start.has_value() != config.t_end.has_value()) {
        throw Error(ErrorCode::InvalidArgument, "t_start and t_end must be given together");
    }
    const TimeWindow window = config.t_start ? TimeWindow{*config.t_start, *config.t_end}
                                             : auto_window(sys, initial.x, config.window_tol);
    const double dt = config.dt.value_or(default_time_step(sys));
    const FieldKind kind = config.field;
    FieldEvaluator field = [&sys, kind](double x, double y, double t) { return evaluate_field(sys, kind, x, y, t); };
    return trace_with(field, kind, window, dt, initial);
}

DisplacementMetrics displacement_metrics(const Trajectory& traj) {
    if (traj.states.empty()) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no samples");
    const auto& first = traj.states.front();
    DisplacementMetrics m;
    m.x_total = traj.states.back().x - first.x;
    double y_max = first.y;
    for (const auto& s : traj.states) y_max = std::max(y_max, s.y);
    m.y_max = y_max - first.y;
    return m;
}

bool SignChangeReport::alternating() const noexcept {
    for (std::size_t i = 1; i < crossings.size(); ++i) {
        if (crossings[i].direction == crossings[i - 1].direction) return false;
    }
    return true;
}

SignChangeReport vertical_sign_changes(const Trajectory& traj, double noise_floor) {
    if (noise_floor < 0.0) throw Error(ErrorCode::InvalidArgument, "noise_floor must be >= 0");
    SignChangeReport report;
    const auto& vel = traj.velocities;
    int last_sign = 0;
    std::size_t last_index = 0;
    for (std::size_t i = 0; i < vel.size(); ++i) {
        const double v = vel[i].v;
        if (!(std::abs(v) > noise_floor)) continue;
        const int sign = v > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) {
            // Last sample still carrying the old sign; the zero lies after it.
            std::size_t j = i - 1;
            while (j > last_index && !(vel[j].v * last_sign > 0.0)) --j;
            const double v0 = vel[j].v;
            const double v1 = vel[j + 1].v;
            const double frac = v0 / (v0 - v1);
            SignChange c;
            c.time = traj.times[j] + frac * (traj.times[j + 1] - traj.times[j]);
            c.x = traj.states[j].x + frac * (traj.states[j + 1].x - traj.states[j].x);
            c.direction = last_sign > 0 ? CrossingDirection::UpToDown : CrossingDirection::DownToUp;
            report.crossings.push_back(c);
        }
        last_sign = sign;
        last_index = i;
    }
    return report;
}

SignChangeReport vertical_sign_changes(const SolitonSystem& sys, const Trajectory& traj) {
    return vertical_sign_changes(traj, 1e-10 * sys.velocity_scale() * sys.max_amplitude());
}

double surface_overshoot(const SolitonSystem& sys, const Trajectory& traj) {
    const double h0 = sys.fluid().h0;
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto& s = traj.states[i];
        worst = std::max(worst, s.y - h0 - eval_eta(sys, s.x, traj.times[i]));
    }
    return worst;
}

}  // namespace kdvtraj
