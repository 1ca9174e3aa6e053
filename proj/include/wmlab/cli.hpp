#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "wmlab/parallel.hpp"
#include "wmlab/theoremlab.hpp"

namespace wmlab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitClaimFailure = 1;
inline constexpr int kExitUsage = 2;

// Directory that relative --out paths resolve against when set.
inline constexpr const char* kOutDirEnv = "WMLAB_OUT_DIR";

// Parse errors carry "origin:line:column" diagnostics.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);
nlohmann::json load_json_file(const std::string& path);

std::vector<std::string> claim_names();

// Rejects unknown fields and mistyped values; `sweep` additionally allows "grid".
void validate_experiment_config(const nlohmann::json& cfg, bool sweep);

// Runs one claim with parameters drawn from an experiment config object.
VerificationReport run_claim(const std::string& claim, const nlohmann::json& params, ExecPolicy policy);

// Column names of the sweep CSV for a claim (grid keys come first).
std::vector<std::string> sweep_columns(const std::string& claim, const std::vector<std::string>& grid_keys);
std::string run_sweep(const nlohmann::json& cfg, ExecPolicy policy);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wmlab::cli
