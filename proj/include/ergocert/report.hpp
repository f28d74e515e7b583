/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergocert/chain.hpp"
#include "ergocert/conditions.hpp"
#include "ergocert/core.hpp"
#include "ergocert/zoo.hpp"

namespace ergocert {

// CLI-facing run configuration; validate() throws BadParameters.
struct RunConfig {
  long n_max = 256;
  std::vector<long> j_set = {1, 2, 3, 5};
  std::vector<double> p_set = {1.5, 2, 4};
  double rate_tol = 1e-3;
  std::string conditions = "all";  // "all" or comma-separated roman numerals
  std::uint64_t seed = 12345;

  void validate() const;
  ConditionConfig condition_config() const;
};

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitViolations = 2;

// Chain files: JSON {"states": [...], "P": [[...]], "pi": optional} or CSV
// (N rows of N comma-separated decimals; extension-based detection, ".json"
// means JSON, anything else is parsed as CSV).
ChainSpec load_chain(const std::string& path);
void save_chain_json(const ChainSpec& chain, const std::string& path);
nlohmann::ordered_json chain_to_json(const ChainSpec& chain);

// The full analysis document ("schema": 1): structure, stationary
// distribution, per-condition verdicts with certificates, implication-edge
// results, and the rate summary.  Deterministic: doubles are rounded to 12
// significant digits before insertion, key order is fixed.
nlohmann::ordered_json analysis_report(const ChainSpec& chain,
                                       const RunConfig& config);

int exit_code_for(const ConsistencyReport& report);

// Subcommand drivers (shared by the CLI binary and the tests).  All write
// through a temp-then-rename so failures leave no partial files; input and
// validation errors are reported on stderr with exit code 1.
int run_analyze(const std::string& chain_path, const RunConfig& config,
                const std::string& out_path);
int run_decay(const std::string& chain_path, const RunConfig& config,
              const std::string& out_csv);
int run_zoo(const ZooRecipe& recipe, const std::string& out_path);
int run_crossval(const std::string& chain_path, const RunConfig& config);

// Full argument-vector entry point (argv[0] is the program name).
int cli_main(int argc, const char* const* argv);

}  // namespace ergocert
