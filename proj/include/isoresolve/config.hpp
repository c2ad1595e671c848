#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoresolve/oracle.hpp"
#include "isoresolve/problem.hpp"
#include "isoresolve/solvers.hpp"

namespace isoresolve {

/// Flat `key = value` run configuration. Values are numbers, strings
/// (optionally quoted) or bracketed number lists; `#` starts a comment and
/// `[section]` prefixes the keys that follow it.
struct RunConfig {
    std::string text;
    std::filesystem::path base_dir;  // table paths resolve against this

    std::string profile_kind = "sphere_tube";  // sphere_tube | table
    int n = 4;
    int d0 = 0;
    std::optional<int> d1;  // sphere_tube: n - d0 - 1
    std::string profile_table;

    double q = 3.0;
    double s = 0.5;

    std::string potential_kind = "constant";  // constant | table
    double potential_value = 1.0;
    std::string potential_table;

    SolverConfig solver;
    std::optional<std::pair<double, double>> bracket;

    std::vector<double> sweep_k;
    std::vector<double> sweep_q;

    BatterySettings battery;
};

/// Throws Error(Parse) on unknown keys or malformed values.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
/// Throws Error(Io) when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

IsoparametricProfile build_profile(const RunConfig& cfg);
/// Applies the exponent gate through make_problem.
ProblemSpec build_problem(const RunConfig& cfg);

}  // namespace isoresolve
