#include "kdvtraj/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "kdvtraj/error.hpp"
#include "kdvtraj/experiments.hpp"

namespace kdvtraj {

namespace {

using Kind = ConfigError::Kind;

struct Entry {
    std::string value;
    std::size_t line = 0;
};

constexpr std::string_view kKeys[] = {
    "preset",  "h0",          "g",           "amplitudes", "phases",     "field",   "x_range",
    "x_count", "y_range",     "y_count",     "t_range",    "t_count",    "particles_x",
    "particles_y", "dt",      "window_tol",  "t_start",    "t_end",      "out",
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool known_key(std::string_view key) {
    return std::find(std::begin(kKeys), std::end(kKeys), key) != std::end(kKeys);
}

void read_line(std::string_view raw, std::size_t line_no, std::map<std::string, Entry>& entries, bool replace) {
    const auto hash = raw.find('#');
    const std::string_view line = trim(raw.substr(0, hash));
    if (line.empty()) return;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError(Kind::Parse, line_no, "", "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(Kind::Parse, line_no, "", "missing key");
    if (!known_key(key)) throw ConfigError(Kind::Parse, line_no, key, "unknown key");
    if (value.empty()) throw ConfigError(Kind::Parse, line_no, key, "missing value");
    if (!replace && entries.count(key)) throw ConfigError(Kind::Parse, line_no, key, "duplicate key");
    entries[key] = {value, line_no};
}

double to_number(std::string_view text, const std::string& key, std::size_t line) {
    text = trim(text);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ConfigError(Kind::Parse, line, key, "not a number: '" + std::string(text) + "'");
    }
    if (!std::isfinite(value)) throw ConfigError(Kind::Parse, line, key, "value must be finite");
    return value;
}

std::vector<double> to_list(std::string_view text, const std::string& key, std::size_t line) {
    text = trim(text);
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        throw ConfigError(Kind::Parse, line, key, "expected a bracketed list");
    }
    text = trim(text.substr(1, text.size() - 2));
    std::vector<double> out;
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = text.find(',', pos);
        out.push_back(to_number(text.substr(pos, comma - pos), key, line));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::size_t to_count(std::string_view text, const std::string& key, std::size_t line) {
    const double v = to_number(text, key, line);
    if (v < 0.0 || v != std::floor(v) || v > 1e9) {
        throw ConfigError(Kind::Parse, line, key, "expected a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& values) {
    std::string s = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ", ";
        s += fmt(values[i]);
    }
    return s + "]";
}

// Preset values sit underneath whatever the document sets explicitly.
void apply_preset(const std::string& name, std::size_t line, std::map<std::string, Entry>& entries) {
    std::vector<std::pair<std::string, std::string>> values;
    if (name == "experiment_c") {
        std::vector<double> xs, ys;
        for (double b : ExperimentC::heights) {
            xs.push_back(0.0);
            ys.push_back(b);
        }
        values = {{"h0", fmt(ExperimentC::h0)},
                  {"g", fmt(ExperimentC::g)},
                  {"amplitudes", fmt_list({ExperimentC::a})},
                  {"phases", "[0]"},
                  {"particles_x", fmt_list(xs)},
                  {"particles_y", fmt_list(ys)}};
    } else if (name == "figure5") {
        values = {{"h0", "1"}, {"g", "981"}, {"amplitudes", "[0.4, 0.3]"}, {"phases", "[0, 30]"}};
    } else {
        throw ConfigError(Kind::Parse, line, "preset", "unknown preset '" + name + "'");
    }
    for (auto& [key, value] : values) {
        if (!entries.count(key)) entries[key] = {value, line};
    }
}

}  // namespace

ConfigError::ConfigError(Kind kind, std::size_t line, std::string key, const std::string& message)
    : std::runtime_error((kind == Kind::Parse ? "ParseError" : "ValidationError") +
                         (line ? " at line " + std::to_string(line) : std::string()) +
                         (key.empty() ? std::string() : " [" + key + "]") + ": " + message),
      kind_(kind),
      line_(line),
      key_(std::move(key)) {}

SolitonSystem RunConfig::system() const { return build_system(fluid, solitons); }

TraceConfig RunConfig::trace_config() const {
    TraceConfig c;
    c.field = field;
    c.dt = dt;
    c.window_tol = window_tol;
    c.t_start = t_start;
    c.t_end = t_end;
    return c;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    auto same_solitons = std::equal(a.solitons.begin(), a.solitons.end(), b.solitons.begin(), b.solitons.end(),
                                    [](const SolitonSpec& l, const SolitonSpec& r) {
                                        return l.amplitude == r.amplitude && l.phase == r.phase;
                                    });
    auto same_particles = std::equal(a.particles.begin(), a.particles.end(), b.particles.begin(), b.particles.end(),
                                     [](const ParticleState& l, const ParticleState& r) {
                                         return l.x == r.x && l.y == r.y;
                                     });
    return a.preset == b.preset && a.fluid.h0 == b.fluid.h0 && a.fluid.g == b.fluid.g && same_solitons &&
           a.field == b.field && a.x == b.x && a.y == b.y && a.t == b.t && same_particles && a.dt == b.dt &&
           a.window_tol == b.window_tol && a.t_start == b.t_start && a.t_end == b.t_end && a.out == b.out;
}

RunConfig parse_config(std::string_view text, std::span<const std::string> overrides) {
    std::map<std::string, Entry> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        read_line(line, ++line_no, entries, false);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    for (const auto& ov : overrides) read_line(ov, 0, entries, true);

    RunConfig cfg;
    if (auto it = entries.find("preset"); it != entries.end()) {
        cfg.preset = it->second.value;
        apply_preset(it->second.value, it->second.line, entries);
    }

    auto number = [&](const std::string& key) -> std::optional<double> {
        auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        return to_number(it->second.value, key, it->second.line);
    };
    auto list = [&](const std::string& key) -> std::optional<std::vector<double>> {
        auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        return to_list(it->second.value, key, it->second.line);
    };
    auto count = [&](const std::string& key, std::size_t fallback) {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : to_count(it->second.value, key, it->second.line);
    };
    auto line_of = [&](const std::string& key) {
        auto it = entries.find(key);
        return it == entries.end() ? std::size_t{0} : it->second.line;
    };
    auto invalid = [&](const std::string& key, const std::string& message) {
        return ConfigError(Kind::Validation, line_of(key), key, message);
    };

    const auto h0 = number("h0");
    const auto g = number("g");
    const auto amplitudes = list("amplitudes");
    if (!h0) throw invalid("h0", "h0 is required");
    if (!g) throw invalid("g", "g is required");
    if (!amplitudes || amplitudes->empty()) throw invalid("amplitudes", "at least one amplitude is required");
    cfg.fluid = {*h0, *g};
    const auto phases = list("phases").value_or(std::vector<double>(amplitudes->size(), 0.0));
    if (phases.size() != amplitudes->size()) throw invalid("phases", "phases and amplitudes differ in length");
    for (std::size_t i = 0; i < amplitudes->size(); ++i) cfg.solitons.push_back({(*amplitudes)[i], phases[i]});

    if (auto it = entries.find("field"); it != entries.end()) {
        const auto kind = parse_field_kind(it->second.value);
        if (!kind) throw ConfigError(Kind::Parse, it->second.line, "field", "unknown field '" + it->second.value + "'");
        cfg.field = *kind;
    }

    std::optional<SolitonSystem> sys;
    try {
        sys.emplace(cfg.system());
    } catch (const Error& e) {
        const std::string key = e.code() == ErrorCode::NonPositiveFluidParam ? "h0" : "amplitudes";
        throw invalid(key, e.what());
    }

    // Grid defaults: 10 widths either side of the wave group, full strip.
    double s_min = cfg.solitons.front().phase, s_max = s_min;
    for (const auto& s : cfg.solitons) {
        s_min = std::min(s_min, s.phase);
        s_max = std::max(s_max, s.phase);
    }
    const double width = 1.0 / sys->beta_min();
    const double top = cfg.fluid.h0 + sys->max_amplitude();
    auto axis = [&](const std::string& name, double lo, double hi, std::size_t n, std::size_t min_count) {
        AxisRange r{lo, hi, count(name + "_count", n)};
        if (auto l = list(name + "_range")) {
            if (l->size() != 2) throw invalid(name + "_range", "expected [min, max]");
            r.min = (*l)[0];
            r.max = (*l)[1];
        }
        if (r.count < min_count) {
            throw invalid(name + "_count", "grid count must be >= " + std::to_string(min_count));
        }
        if (r.count > 1 && !(r.max > r.min)) throw invalid(name + "_range", "max must exceed min");
        return r;
    };
    cfg.x = axis("x", s_min - 10.0 * width, s_max + 10.0 * width, 201, 2);
    cfg.y = axis("y", 0.0, top, 11, 2);
    cfg.t = axis("t", 0.0, 0.0, 1, 1);

    const auto px = list("particles_x");
    const auto py = list("particles_y");
    if (px.has_value() != py.has_value()) {
        throw invalid(px ? "particles_y" : "particles_x", "particles_x and particles_y must be given together");
    }
    if (px) {
        if (px->size() != py->size()) throw invalid("particles_y", "particles_x and particles_y differ in length");
        for (std::size_t i = 0; i < px->size(); ++i) {
            if ((*py)[i] < 0.0 || (*py)[i] > top) {
                throw invalid("particles_y", "particle heights must lie in [0, h0 + a]");
            }
            cfg.particles.push_back({(*px)[i], (*py)[i]});
        }
    } else {
        cfg.particles.push_back({s_max + 10.0 * width, cfg.fluid.h0});
    }

    cfg.dt = number("dt").value_or(default_time_step(*sys));
    if (!(cfg.dt > 0.0)) throw invalid("dt", "dt must be positive");
    cfg.window_tol = number("window_tol").value_or(1e-6);
    if (!(cfg.window_tol > 0.0 && cfg.window_tol < 1.0)) throw invalid("window_tol", "window_tol must lie in (0, 1)");
    cfg.t_start = number("t_start");
    cfg.t_end = number("t_end");
    if (cfg.t_start.has_value() != cfg.t_end.has_value()) {
        throw invalid(cfg.t_start ? "t_end" : "t_start", "t_start and t_end must be given together");
    }
    if (cfg.t_start && !(*cfg.t_end > *cfg.t_start)) throw invalid("t_end", "t_end must exceed t_start");
    if (auto it = entries.find("out"); it != entries.end()) cfg.out = it->second.value;
    return cfg;
}

std::string render_config(const RunConfig& c) {
    std::ostringstream os;
    if (c.preset) os << "preset = " << *c.preset << '\n';
    std::vector<double> amps, phases, xs, ys;
    for (const auto& s : c.solitons) {
        amps.push_back(s.amplitude);
        phases.push_back(s.phase);
    }
    for (const auto& p : c.particles) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    os << "h0 = " << fmt(c.fluid.h0) << '\n'
       << "g = " << fmt(c.fluid.g) << '\n'
       << "amplitudes = " << fmt_list(amps) << '\n'
       << "phases = " << fmt_list(phases) << '\n'
       << "field = " << to_string(c.field) << '\n'
       << "x_range = " << fmt_list({c.x.min, c.x.max}) << '\n'
       << "x_count = " << c.x.count << '\n'
       << "y_range = " << fmt_list({c.y.min, c.y.max}) << '\n'
       << "y_count = " << c.y.count << '\n'
       << "t_range = " << fmt_list({c.t.min, c.t.max}) << '\n'
       << "t_count = " << c.t.count << '\n'
       << "particles_x = " << fmt_list(xs) << '\n'
       << "particles_y = " << fmt_list(ys) << '\n'
       << "dt = " << fmt(c.dt) << '\n'
       << "window_tol = " << fmt(c.window_tol) << '\n';
    if (c.t_start) os << "t_start = " << fmt(*c.t_start) << '\n';
    if (c.t_end) os << "t_end = " << fmt(*c.t_end) << '\n';
    os << "out = " << c.out << '\n';
    return os.str();
}

}  // namespace kdvtraj
