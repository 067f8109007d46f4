#pragma once

// Subcommand execution for the kdvtraj tool. Every command renders its
// outputs to memory first; write_outputs() then writes them in one pass.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kdvtraj/config.hpp"
#include "kdvtraj/experiments.hpp"
#include "kdvtraj/verification.hpp"

namespace kdvtraj {

enum class Subcommand { Surface, Field, Trace, Conditions, Table1, Verify };

std::optional<Subcommand> parse_subcommand(std::string_view name) noexcept;
std::string_view to_string(Subcommand cmd) noexcept;

/// Fixed 12-significant-digit rendering used by every CSV writer.
std::string format_number(double value);

std::string surface_csv(const RunConfig& config);
std::string field_csv(const RunConfig& config);
std::string trace_csv(const RunConfig& config);
std::string conditions_csv(const ConditionReport& report);
std::string table1_csv(const std::vector<Table1Row>& rows);
std::string verify_csv(const std::vector<CheckResult>& checks);

struct OutputFile {
    std::string path;
    std::string contents;
};

struct CommandResult {
    int exit_code = 0;
    std::string summary;  ///< human-readable report for stdout
    std::vector<OutputFile> files;
};

/// Runs one subcommand. `config` may be empty for table1 and verify; the
/// others need solitons. Each data file is paired with a JSON manifest.
CommandResult execute(Subcommand cmd, const std::optional<RunConfig>& config, const std::string& out_prefix);

void write_outputs(const CommandResult& result);

}  // namespace kdvtraj
