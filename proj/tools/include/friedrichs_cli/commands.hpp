// Subcommands of the friedrichs runner. Each writes its artifacts into the
// output directory and returns an exit code; library errors propagate as
// friedrichs::Error and are mapped by exit_code_for().

#pragma once

#include "friedrichs_cli/config.hpp"

#include <friedrichs/errors.hpp>

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace friedrichs::cli {

enum ExitCode : int {
    kOk = 0,
    kConfig = 2,
    kSolver = 3,
    kDualMethod = 4,
    kDensityInvariant = 5,
    kOrdering = 6,
};

/// A post-run consistency check that failed after the artifacts were written.
class CheckFailed : public std::runtime_error {
public:
    CheckFailed(int code, std::string kind, const std::string& message, double value)
        : std::runtime_error(message), code_(code), kind_(std::move(kind)), value_(value) {}
    int code() const noexcept { return code_; }
    const std::string& kind() const noexcept { return kind_; }
    double value() const noexcept { return value_; }

private:
    int code_;
    std::string kind_;
    double value_;
};

int exit_code_for(ErrorKind kind) noexcept;

using OutDir = std::filesystem::path;

void cmd_pole(const RunConfig& cfg, const OutDir& out);
void cmd_survival(const RunConfig& cfg, const OutDir& out);
void cmd_density(const RunConfig& cfg, const OutDir& out);
void cmd_oracle(const RunConfig& cfg, const OutDir& out);
void cmd_sweep(const RunConfig& cfg, const OutDir& out);

/// Full command line (argv[0] excluded). Errors go to `err` as one JSON object.
int run(const std::vector<std::string>& args, std::ostream& err);

} // namespace friedrichs::cli
