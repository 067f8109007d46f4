#pragma once

// Run configuration: flat "key = value" text, one entry per line, '#'
// comments, list values in brackets.
//
//   preset      = experiment_c | figure5        (expanded first)
//   h0, g       = numbers
//   amplitudes  = [a_1, ..., a_N]
//   phases      = [s_1, ..., s_N]               (default all 0)
//   field       = first | higher | higher_trig | bottom
//   x_range     = [min, max]     x_count = n    (>= 2)
//   y_range     = [min, max]     y_count = n    (>= 2)
//   t_range     = [min, max]     t_count = n    (>= 1)
//   particles_x = [...]          particles_y = [...]
//   dt, window_tol, t_start, t_end, out

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kdvtraj/soliton.hpp"
#include "kdvtraj/tracer.hpp"
#include "kdvtraj/velocity.hpp"

namespace kdvtraj {

struct AxisRange {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 2;

    double at(std::size_t i) const noexcept {
        return count <= 1 ? min : min + (max - min) * double(i) / double(count - 1);
    }
    bool operator==(const AxisRange&) const = default;
};

struct RunConfig {
    std::optional<std::string> preset;
    FluidParams fluid;
    std::vector<SolitonSpec> solitons;
    FieldKind field = FieldKind::HigherOrder;
    AxisRange x;
    AxisRange y;
    AxisRange t;
    std::vector<ParticleState> particles;
    double dt = 0.0;
    double window_tol = 1e-6;
    std::optional<double> t_start;
    std::optional<double> t_end;
    std::string out = "kdvtraj";

    SolitonSystem system() const;
    TraceConfig trace_config() const;
};

bool operator==(const RunConfig& a, const RunConfig& b);

class ConfigError : public std::runtime_error {
public:
    enum class Kind { Parse, Validation };

    ConfigError(Kind kind, std::size_t line, std::string key, const std::string& message);

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }  ///< 0 when not tied to a line
    const std::string& key() const noexcept { return key_; }

private:
    Kind kind_;
    std::size_t line_;
    std::string key_;
};

/// Parses and validates a configuration. Each override is a "key=value"
/// string that replaces (or adds) the key after the text is read.
RunConfig parse_config(std::string_view text, std::span<const std::string> overrides = {});

/// Canonical text form: parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

}  // namespace kdvtraj
