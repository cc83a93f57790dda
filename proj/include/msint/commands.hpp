#pragma once

#include <string>

#include "msint/config.hpp"

namespace msint {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitStepFailure = 2;
inline constexpr int kExitConfigError = 3;

// Builds the initial (eta, u) state described by the initial block.
StateField make_initial_state(const RunConfig& c);

// Each command writes into out_dir (created if missing) and returns the
// process exit code. Errors other than step failures propagate.
int command_run(const RunConfig& c, const std::string& out_dir);
int command_dispersion(const RunConfig& c, const std::string& out_dir);
int command_solitary(const RunConfig& c, const std::string& out_dir);
int command_check(const RunConfig& c, const std::string& out_dir);
int command_convergence(const RunConfig& c, const std::string& out_dir);

// Runs the named command and maps exceptions to exit codes, printing the
// message to stderr.
int dispatch(const std::string& command, const std::string& config_path,
             const std::string& out_override);

}  // namespace msint
