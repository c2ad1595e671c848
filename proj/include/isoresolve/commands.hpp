#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "isoresolve/error.hpp"
#include "isoresolve/oracle.hpp"
#include "isoresolve/solvers.hpp"

namespace isoresolve {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,           // usage, I/O and parse errors
    kExitGate = 2,            // exponent or coercivity gate refused
    kExitNonConvergence = 3,  // solver stalled, or no bracketing interval
    kExitNodalCollapse = 4,
    kExitCheckFailure = 5,
};

int exit_code_for(ErrorKind kind);

struct CommandOptions {
    std::filesystem::path config;
    std::filesystem::path out = "runs";
    std::optional<int> level;
    std::optional<double> phi0;
    std::optional<std::pair<double, double>> bracket;
    std::string parity = "even";
    int workers = 1;
    std::optional<int> mesh_n;
    std::filesystem::path run_dir;  // verify only
};

struct CommandResult {
    int exit_code = kExitOk;
    std::filesystem::path run_dir;  // empty when nothing was written
};

/// ISORESOLVE_OUT when set, otherwise options.out.
std::filesystem::path output_root(const CommandOptions& options);

/// Record checks plus the strong-form residual oracle, as a report.
VerificationReport verify_record(const SolutionRecord& record, const ProblemSpec& spec);

CommandResult cmd_solve_ground(const CommandOptions& options, std::ostream& out, std::ostream& err);
CommandResult cmd_solve_nodal(const CommandOptions& options, std::ostream& out, std::ostream& err);
CommandResult cmd_shoot(const CommandOptions& options, std::ostream& out, std::ostream& err);
CommandResult cmd_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err);
/// Re-derives every reported number of a run directory from its persisted
/// artifacts and compares.
CommandResult cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace isoresolve
