#include <map>
#include <sstream>

#include "wmlab/cli.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/seeding.hpp"

namespace wmlab::cli {

using nlohmann::json;

namespace {

struct Column {
  const char* name;
  const char* pointer;  // into the report's "measured" object
};

const std::vector<Column>& measured_columns(const std::string& claim) {
  static const std::map<std::string, std::vector<Column>> table{
      {"single-task",
       {{"tasks", "/tasks"}, {"comparisons", "/comparisons"}, {"violations", "/violations"}, {"min_slack", "/min_slack"}}},
      {"multi-task",
       {{"phi_star_degree", "/phi_star_degree"},
        {"violations", "/violations"},
        {"min_slack", "/per_n/0/min_slack"},
        {"identification_gap", "/per_n/0/mean_gap"},
        {"min_gap", "/per_n/0/min_gap"},
        {"max_gap", "/per_n/0/max_gap"},
        {"mean_sum_conditional_degree", "/per_n/0/mean_sum_conditional_degree"},
        {"hierarchical_preferred_fraction", "/per_n/0/hierarchical_preferred_fraction"}}},
      {"no-free-lunch",
       {{"transforms", "/transforms"}, {"distinct_values", "/distinct_values"}, {"constant", "/constant/exact"}}},
      {"world-model",
       {{"transforms", "/transforms"},
        {"argmin_size", "/argmin_size"},
        {"min_value", "/min_value/exact"},
        {"degree_one_in_argmin", "/degree_one_in_argmin"},
        {"non_degree_one_in_argmin", "/non_degree_one_in_argmin"}}},
      {"example-counterexample",
       {{"bijective_candidates", "/bijective_candidates"}, {"satisfying_candidates", "/satisfying_candidates"}}},
      {"ood-benefit",
       {{"q", "/q"},
        {"k", "/k"},
        {"latent_degree", "/latent_degree"},
        {"conditional_degree", "/conditional_degree"},
        {"preconditions_met", "/preconditions_met"},
        {"flat_mse", "/flat_mse"},
        {"world_mse", "/world_mse"}}},
      {"ood-search",
       {{"configurations", "/configurations"},
        {"instances_meeting_preconditions", "/instances_meeting_preconditions"},
        {"min_flat_mse", "/min_flat_mse"}}},
      {"basis-impact",
       {{"swap_argmin_size", "/swap/argmin_size"},
        {"swap_min_value", "/swap/min_value/exact"},
        {"min_over_argmin_of_max_inverse_degree", "/swap/min_over_argmin_of_max_inverse_degree"}}},
      {"degree-composition",
       {{"transforms", "/transforms"}, {"cases", "/cases"}, {"violations", "/violations"}, {"equality_at_k1", "/equality_at_k1"}}},
      {"corollary",
       {{"samples", "/samples"}, {"positive_conditional_degree", "/positive_conditional_degree"}, {"failures", "/failures"}}},
  };
  const auto it = table.find(claim);
  if (it == table.end()) throw ValidationError("unknown claim '" + claim + "'");
  return it->second;
}

std::string csv_field(const json& v) {
  std::string s;
  if (v.is_null()) s = "";
  else if (v.is_string()) s = v.get<std::string>();
  else s = v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::vector<std::string> sweep_columns(const std::string& claim, const std::vector<std::string>& grid_keys) {
  std::vector<std::string> cols{"cell"};
  cols.insert(cols.end(), grid_keys.begin(), grid_keys.end());
  cols.push_back("seed");
  for (const auto& c : measured_columns(claim)) cols.push_back(c.name);
  cols.push_back("status");
  cols.push_back("error");
  return cols;
}

std::string run_sweep(const json& cfg, ExecPolicy policy) {
  validate_experiment_config(cfg, true);
  if (!cfg.contains("claim")) throw ValidationError("sweep config needs a 'claim'");
  const auto claim = cfg["claim"].get<std::string>();
  if (!cfg.contains("seed") || !cfg["seed"].is_number_integer() || cfg["seed"].get<long long>() < 0)
    throw ValidationError("sweep config needs a non-negative integer 'seed' (per-cell seeds derive from it)");
  const auto seed = cfg["seed"].get<std::uint64_t>();

  json base = json::object();
  for (const auto& [key, value] : cfg.items())
    if (key != "grid" && key != "claim" && key != "out" && key != "format" && key != "threads") base[key] = value;

  std::vector<std::string> keys;
  std::vector<std::vector<json>> values;
  std::size_t cells = 0;
  if (cfg.contains("grid") && !cfg["grid"].empty()) {
    cells = 1;
    for (const auto& [key, list] : cfg["grid"].items()) {
      keys.push_back(key);
      values.emplace_back(list.begin(), list.end());
      cells *= list.size();
    }
  }

  std::ostringstream out;
  const auto cols = sweep_columns(claim, keys);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";

  for (std::size_t cell = 0; cell < cells; ++cell) {
    json params = base;
    std::vector<json> row{json(cell)};
    std::size_t rest = cell;
    std::vector<std::size_t> pick(keys.size());
    for (std::size_t i = keys.size(); i-- > 0;) {
      pick[i] = rest % values[i].size();
      rest /= values[i].size();
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
      params[keys[i]] = values[i][pick[i]];
      row.push_back(values[i][pick[i]]);
    }
    const std::uint64_t cell_seed = derive_seed(seed, cell);
    params["seed"] = cell_seed;
    row.push_back(cell_seed);

    std::string status, error;
    json measured;
    try {
      const auto rep = run_claim(claim, params, policy);
      measured = rep.measured;
      status = rep.status();
    } catch (const std::exception& e) {
      status = "error";
      error = e.what();
    }
    for (const auto& c : measured_columns(claim)) {
      const json::json_pointer ptr(c.pointer);
      row.push_back(!measured.is_null() && measured.contains(ptr) ? measured.at(ptr) : json());
    }
    row.push_back(status);
    row.push_back(error);
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << "\n";
  }
  return out.str();
}

}  // namespace wmlab::cli
