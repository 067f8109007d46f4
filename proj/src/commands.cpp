#include "kdvtraj/commands.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kdvtraj/error.hpp"
#include "kdvtraj/version.hpp"

namespace kdvtraj {

namespace {

std::string csv_row(std::initializer_list<double> values) {
    std::string line;
    bool first = true;
    for (double v : values) {
        if (!first) line += ',';
        line += format_number(v);
        first = false;
    }
    return line + '\n';
}

std::string manifest(Subcommand cmd, const std::optional<RunConfig>& config, const std::string& data_path) {
    nlohmann::ordered_json m;
    m["tool"] = "kdvtraj";
    m["version"] = kVersion;
    m["subcommand"] = std::string(to_string(cmd));
    m["output"] = data_path;
    if (config) {
        m["config"] = render_config(*config);
    } else {
        m["config"] = nullptr;
    }
    return m.dump(2) + '\n';
}

const RunConfig& require(const std::optional<RunConfig>& config, Subcommand cmd) {
    if (!config) {
        throw ConfigError(ConfigError::Kind::Validation, 0, "",
                          std::string(to_string(cmd)) + " needs a configuration (--config or --override preset=...)");
    }
    return *config;
}

}  // namespace

std::optional<Subcommand> parse_subcommand(std::string_view name) noexcept {
    if (name == "surface") return Subcommand::Surface;
    if (name == "field") return Subcommand::Field;
    if (name == "trace") return Subcommand::Trace;
    if (name == "conditions") return Subcommand::Conditions;
    if (name == "table1") return Subcommand::Table1;
    if (name == "verify") return Subcommand::Verify;
    return std::nullopt;
}

std::string_view to_string(Subcommand cmd) noexcept {
    switch (cmd) {
        case Subcommand::Surface: return "surface";
        case Subcommand::Field: return "field";
        case Subcommand::Trace: return "trace";
        case Subcommand::Conditions: return "conditions";
        case Subcommand::Table1: return "table1";
        case Subcommand::Verify: return "verify";
    }
    return "unknown";
}

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string surface_csv(const RunConfig& c) {
    const auto sys = c.system();
    std::string out = "x,t,eta\n";
    for (std::size_t it = 0; it < c.t.count; ++it) {
        const double t = c.t.at(it);
        for (std::size_t ix = 0; ix < c.x.count; ++ix) {
            const double x = c.x.at(ix);
            out += csv_row({x, t, eval_eta(sys, x, t)});
        }
    }
    return out;
}

std::string field_csv(const RunConfig& c) {
    const auto sys = c.system();
    std::string out = "x,y,t,u,v\n";
    for (std::size_t it = 0; it < c.t.count; ++it) {
        const double t = c.t.at(it);
        for (std::size_t iy = 0; iy < c.y.count; ++iy) {
            const double y = c.y.at(iy);
            for (std::size_t ix = 0; ix < c.x.count; ++ix) {
                const double x = c.x.at(ix);
                const auto s = evaluate_field(sys, c.field, x, y, t);
                out += csv_row({x, y, t, s.u, s.v});
            }
        }
    }
    return out;
}

std::string trace_csv(const RunConfig& c) {
    const auto sys = c.system();
    const auto cfg = c.trace_config();
    std::string out = "particle_id,t,X,Y,u,v\n";
    for (std::size_t p = 0; p < c.particles.size(); ++p) {
        const auto traj = trace(sys, cfg, c.particles[p]);
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            out += std::to_string(p) + ',' +
                   csv_row({traj.times[i], traj.states[i].x, traj.states[i].y, traj.velocities[i].u,
                            traj.velocities[i].v});
        }
    }
    return out;
}

std::string conditions_csv(const ConditionReport& r) {
    return "hyp_holds,hyp_margin,hyp2_holds,hyp2_margin,a\n" + std::string(r.hyp_holds ? "true" : "false") + ',' +
           format_number(r.hyp_margin) + ',' + (r.hyp2_holds ? "true" : "false") + ',' + format_number(r.hyp2_margin) +
           ',' + format_number(r.a) + '\n';
}

std::string table1_csv(const std::vector<Table1Row>& rows) {
    std::string out =
        "b,X_first,Y_first,X_higher,Y_higher,X_exp,Y_exp,err_X_first,err_Y_first,err_X_higher,err_Y_higher\n";
    for (const auto& r : rows) {
        out += csv_row({r.reference.b, r.first.x_total, r.first.y_max, r.higher.x_total, r.higher.y_max,
                        r.reference.x_exp, r.reference.y_exp, r.err_x_first, r.err_y_first, r.err_x_higher,
                        r.err_y_higher});
    }
    return out;
}

std::string verify_csv(const std::vector<CheckResult>& checks) {
    std::string out = "check,measured,comparison,threshold,passed\n";
    for (const auto& c : checks) {
        out += '"' + c.name + "\"," + format_number(c.measured) + ',' + c.comparison + ',' +
               format_number(c.threshold) + ',' + (c.passed ? "true" : "false") + '\n';
    }
    return out;
}

CommandResult execute(Subcommand cmd, const std::optional<RunConfig>& config, const std::string& out_prefix) {
    CommandResult result;
    std::ostringstream summary;
    auto add = [&](const std::string& suffix, std::string contents) {
        const std::string path = out_prefix + "_" + suffix;
        result.files.push_back({path, std::move(contents)});
        result.files.push_back({path + ".manifest.json", manifest(cmd, config, path)});
        summary << "wrote " << path << '\n';
    };

    switch (cmd) {
        case Subcommand::Surface: add("surface.csv", surface_csv(require(config, cmd))); break;
        case Subcommand::Field: add("field.csv", field_csv(require(config, cmd))); break;
        case Subcommand::Trace: add("trace.csv", trace_csv(require(config, cmd))); break;
        case Subcommand::Conditions: {
            const auto report = amplitude_conditions(require(config, cmd).system());
            summary << "hyp  (h0 + a) sum beta <= pi/4 : " << (report.hyp_holds ? "true" : "false")
                    << "  margin " << format_number(report.hyp_margin) << '\n'
                    << "hyp2 beta_i (h0 + a) < pi/4     : " << (report.hyp2_holds ? "true" : "false")
                    << "  margin " << format_number(report.hyp2_margin) << '\n';
            add("conditions.csv", conditions_csv(report));
            break;
        }
        case Subcommand::Table1: {
            Table1Options opts;
            if (config) {
                opts.dt = config->dt;
                opts.window_tol = config->window_tol;
                opts.g = config->fluid.g;
            }
            const auto rows = reproduce_table1(opts);
            double worst = 0.0;
            for (const auto& r : rows) worst = std::max(worst, r.max_abs_error());
            summary << "max relative error vs reference: " << format_number(worst) << '\n';
            add("table1.csv", table1_csv(rows));
            if (worst > 0.03) result.exit_code = 1;
            break;
        }
        case Subcommand::Verify: {
            const auto checks = run_invariant_suite();
            for (const auto& c : checks) {
                summary << (c.passed ? "PASS  " : "FAIL  ") << c.name << ": " << format_number(c.measured) << ' '
                        << c.comparison << ' ' << format_number(c.threshold) << '\n';
                if (!c.passed) result.exit_code = 1;
            }
            add("verify.csv", verify_csv(checks));
            break;
        }
    }
    result.summary = summary.str();
    return result;
}

void write_outputs(const CommandResult& result) {
    for (const auto& f : result.files) {
        std::ofstream os(f.path, std::ios::binary);
        if (!os) throw Error(ErrorCode::InvalidArgument, "cannot open " + f.path + " for writing");
        os << f.contents;
    }
}

}  // namespace kdvtraj
