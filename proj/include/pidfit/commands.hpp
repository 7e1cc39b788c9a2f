#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pidfit/config.hpp"

namespace pidfit {

// Process exit codes; nothing else is ever returned.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnstable = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitNumeric = 4;

int cmd_tune(const RunConfig& config, const std::string& out_dir);

int cmd_evaluate(const RunConfig& config, const PidGains& gains, const std::string& out_dir);

/// methods: srcf, zn-reaction, zn-ultimate, lambda, pole-placement.
int cmd_compare(const RunConfig& config, const std::vector<std::string>& methods,
                const std::string& out_dir);

int cmd_simulate(const RunConfig& config, const std::optional<PidGains>& gains,
                 const std::string& out_dir);

}  // namespace pidfit
