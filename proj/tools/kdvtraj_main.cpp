// kdvtraj: evaluate KdV N-soliton surfaces and velocity fields, trace fluid
// particles, and run the packaged experiments.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kdvtraj/commands.hpp"
#include "kdvtraj/error.hpp"
#include "kdvtraj/version.hpp"

int main(int argc, char** argv) {
    using namespace kdvtraj;

    CLI::App app{"KdV N-soliton particle trajectories"};
    app.set_version_flag("--version", std::string(kVersion));
    std::string subcommand;
    std::string config_path;
    std::string out_prefix;
    std::vector<std::string> overrides;
    app.add_option("subcommand", subcommand, "surface | field | trace | conditions | table1 | verify")
        ->required()
        ->check(CLI::IsMember({"surface", "field", "trace", "conditions", "table1", "verify"}));
    app.add_option("--config", config_path, "run configuration file");
    app.add_option("--out", out_prefix, "output path prefix (default: config 'out' key)");
    app.add_option("--override", overrides, "key=value applied after the config file")->take_all();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto cmd = *parse_subcommand(subcommand);
    std::optional<RunConfig> config;
    try {
        std::string text;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot read config file " << config_path << '\n';
                return 2;
            }
            std::ostringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        }
        if (!config_path.empty() || !overrides.empty()) config = parse_config(text, overrides);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    if (out_prefix.empty()) out_prefix = config ? config->out : "kdvtraj";

    try {
        const auto result = execute(cmd, config, out_prefix);
        write_outputs(result);
        std::cout << result.summary;
        return result.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
