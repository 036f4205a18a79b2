// cli.hpp: batch front end shared by the command-line tool and the tests.

#pragma once

#include "subprod/io.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace subprod {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
    std::string command = "report";  // check | classify | poisson | wold | dilate | vn | gram | report
    std::string input_path;
    std::string output_path;         // empty: standard output
    std::optional<int> truncation;
    double tol_proj = 1e-9;
    double tol = 1e-8;
    double tol_limit = 1e-7;
    int n_cap = 64;
    std::uint64_t seed = 0;
    std::int64_t capacity = std::int64_t{1} << 20;
    bool dump_matrices = false;
    bool quiet = false;
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdict = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCapacity = 3;

struct CommandResult {
    int exit_code = kExitOk;
    json report;
};

// Runs a command on an already parsed input document.
CommandResult run_on_document(const RunConfig& config, const json& document);

// Reads config.input_path and runs the command; parse failures give exit 2.
CommandResult run_command(const RunConfig& config);

json config_to_json(const RunConfig& config);

}  // namespace subprod
