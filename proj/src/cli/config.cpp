#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "wmlab/cli.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/json_io.hpp"

namespace wmlab::cli {

using nlohmann::json;

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (const auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw ValidationError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

namespace {

const std::set<std::string>& param_keys() {
  static const std::set<std::string> keys{"model", "d", "r", "k", "k_swap", "mixture", "mode", "samples",
                                          "trials", "n_tasks", "batches", "family", "task", "seed", "dims",
                                          "models_per_dim", "phi_samples"};
  return keys;
}

bool is_count(const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); }

bool is_count_list(const json& v) {
  return is_count(v) || (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return is_count(e); }));
}

// Shape check for one parameter value; range checks happen when the claim runs.
void check_param_type(const std::string& key, const json& v) {
  bool ok = true;
  if (key == "mixture") ok = v.is_string() || (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) {
                                return e.is_number() || e.is_string();
                              }));
  else if (key == "mode" || key == "family") ok = v.is_string();
  else if (key == "model" || key == "task") ok = v.is_string() || v.is_object();
  else if (key == "n_tasks" || key == "dims") ok = is_count_list(v);
  else ok = is_count(v);
  if (!ok) throw ValidationError("config field '" + key + "': unexpected type or value " + v.dump());
}

// Typed, field-named access to a config object.
class Params {
 public:
  explicit Params(const json& j) : j_(j) {}

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  template <class T>
  T get(const std::string& key, T fallback) const {
    if (!has(key)) return fallback;
    return as<T>(key);
  }

  template <class T>
  T as(const std::string& key) const {
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ValidationError("config field '" + key + "': unexpected type or value " + j_.at(key).dump());
    }
  }

  int get_int(const std::string& key, int fallback, int lo, int hi) const {
    const int v = get<int>(key, fallback);
    if (v < lo || v > hi)
      throw ValidationError("config field '" + key + "' must lie in [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "], got " + std::to_string(v));
    return v;
  }

  std::size_t get_count(const std::string& key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_number_integer() || j_.at(key).get<long long>() < 0)
      throw ValidationError("config field '" + key + "' must be a non-negative integer");
    return j_.at(key).get<std::size_t>();
  }

  std::uint64_t seed(const std::string& why) const {
    if (!has("seed")) throw ValidationError("a seed is required: " + why + " (pass --seed or \"seed\")");
    if (!j_.at("seed").is_number_unsigned() && !(j_.at("seed").is_number_integer() && j_.at("seed").get<long long>() >= 0))
      throw ValidationError("config field 'seed' must be a non-negative integer");
    return j_.at("seed").get<std::uint64_t>();
  }

  std::uint64_t seed_or_zero() const { return has("seed") ? seed("") : 0; }

  bool exhaustive_mode(int d) const {
    const auto mode = get<std::string>("mode", d <= 3 ? "exact" : "sampled");
    if (mode != "exact" && mode != "sampled") throw ValidationError("config field 'mode' must be 'exact' or 'sampled'");
    return mode == "exact";
  }

  DegreeMixture mixture(int d) const {
    if (!has("mixture")) return DegreeMixture::uniform(d);
    const auto& m = j_.at("mixture");
    try {
      if (m.is_string()) return DegreeMixture::parse(m.get<std::string>());
      if (m.is_array()) {
        std::vector<Rational> q;
        for (const auto& v : m) q.push_back(v.is_string() ? parse_rational(v.get<std::string>()) : decimal_rational(v.get<double>()));
        return DegreeMixture::from_exact(std::move(q));
      }
    } catch (const json::exception&) {
    }
    throw ValidationError("config field 'mixture' must be a list of weights or a comma-separated string");
  }

  ModelPtr model(const std::string& fallback) const {
    const json ref = has("model") ? j_.at("model") : json(fallback);
    return std::make_shared<const GenerationModel>(model_from_json(ref));
  }

  const json& raw(const std::string& key) const { return j_.at(key); }

 private:
  const json& j_;
};

// "x1x4x5", "-z1z5", "+x2", "1": single signed monomial over x or z.
std::pair<TruthTable, char> parse_monomial(const std::string& text, int m, int d) {
  std::size_t i = 0;
  int sign = 1;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) sign = text[i++] == '-' ? -1 : 1;
  if (text.substr(i) == "1") return {TruthTable::constant(m, sign), 'x'};
  if (i >= text.size() || (text[i] != 'x' && text[i] != 'z'))
    throw ValidationError("task '" + text + "': expected a monomial like x1x4x5 or z1z5");
  const char var = text[i];
  const int n = var == 'x' ? m : d;
  std::vector<int> coords;
  while (i < text.size()) {
    if (text[i] != var) throw ValidationError("task '" + text + "': mixes variables or has stray characters");
    ++i;
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) throw ValidationError("task '" + text + "': missing coordinate index");
    coords.push_back(std::stoi(text.substr(start, i - start)));
  }
  return {TruthTable::parity(n, coords_to_mask(coords, n), sign), var};
}

// Task over the data cube for claims that need h as a function of x.
std::pair<TruthTable, std::string> data_task(const Params& p, const GenerationModel& model, const std::string& fallback) {
  if (!p.has("task")) return {parse_monomial(fallback, model.m(), model.d()).first, fallback};
  const auto& t = p.raw("task");
  if (t.is_string()) {
    const auto [table, var] = parse_monomial(t.get<std::string>(), model.m(), model.d());
    if (var != 'x') throw ValidationError("config field 'task' must be a function of x here");
    return {table, t.get<std::string>()};
  }
  require_keys_subset(t, {"over", "expr"}, "task");
  if (t.contains("over") && t["over"] != "x") throw ValidationError("config field 'task' must be over x here");
  if (!t.contains("expr")) throw ValidationError("task: missing field 'expr'");
  return {expr_table(t["expr"], model.m()), t["expr"].dump()};
}

std::vector<std::size_t> n_tasks_list(const Params& p) {
  if (!p.has("n_tasks")) return {1, 64, 1000};
  const auto& v = p.raw("n_tasks");
  std::vector<std::size_t> out;
  if (v.is_number_integer()) out.push_back(p.get_count("n_tasks", 0));
  else if (v.is_array())
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<long long>() < 1) throw ValidationError("config field 'n_tasks' entries must be positive integers");
      out.push_back(e.get<std::size_t>());
    }
  else
    throw ValidationError("config field 'n_tasks' must be an integer or a list of integers");
  return out;
}

}  // namespace

std::vector<std::string> claim_names() {
  return {"single-task", "multi-task", "no-free-lunch", "world-model", "example-counterexample",
          "ood-benefit", "ood-search", "basis-impact", "degree-composition", "corollary"};
}

void validate_experiment_config(const json& cfg, bool sweep) {
  if (!cfg.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    if (param_keys().count(key)) {
      check_param_type(key, value);
      continue;
    }
    if (key == "claim" || key == "threads" || key == "out" || key == "format") continue;
    if (sweep && key == "grid") continue;
    throw ValidationError("config: unknown field '" + key + "'");
  }
  if (cfg.contains("claim")) {
    if (!cfg["claim"].is_string()) throw ValidationError("config field 'claim' must be a string");
    const auto names = claim_names();
    if (std::find(names.begin(), names.end(), cfg["claim"].get<std::string>()) == names.end())
      throw ValidationError("config: unknown claim '" + cfg["claim"].get<std::string>() + "'");
  }
  if (cfg.contains("grid")) {
    if (!cfg["grid"].is_object()) throw ValidationError("config field 'grid' must be an object of value lists");
    for (const auto& [key, values] : cfg["grid"].items()) {
      if (!param_keys().count(key) || key == "seed")
        throw ValidationError("config: grid field '" + key + "' is not a sweepable parameter");
      if (!values.is_array()) throw ValidationError("config: grid field '" + key + "' must be a list");
      for (const auto& v : values) check_param_type(key, v);
    }
  }
  if (cfg.contains("threads") && (!cfg["threads"].is_number_integer() || cfg["threads"].get<long long>() < 1))
    throw ValidationError("config field 'threads' must be a positive integer");
  if (cfg.contains("format") && cfg["format"] != "json" && cfg["format"] != "csv")
    throw ValidationError("config field 'format' must be 'json' or 'csv'");
  if (cfg.contains("out") && !cfg["out"].is_string()) throw ValidationError("config field 'out' must be a string");
}

VerificationReport run_claim(const std::string& claim, const json& params, ExecPolicy policy) {
  const Params p(params);

  if (claim == "single-task") {
    const int d = p.get_int("d", 2, 1, 6);
    SingleTaskOptions opt;
    opt.model = p.model(d == 2 ? "triple-parity" : d == 3 ? "example-c" : "table1");
    if (p.has("d") && opt.model->d() != d) throw ValidationError("config field 'd' disagrees with the model's latent dimension");
    opt.trials = p.get_count("trials", 0);
    if (opt.trials > 0 || opt.model->d() > 3) opt.seed = p.seed("single-task with random tasks or sampled Phi");
    opt.phi_samples = p.get_count("phi_samples", opt.phi_samples);
    return verify_single_task(opt, policy);
  }
  if (claim == "multi-task") {
    MultiTaskOptions opt;
    opt.model = p.model("table1");
    opt.n_tasks = n_tasks_list(p);
    opt.batches = p.get_count("batches", 100);
    opt.k = p.get_int("k", std::min(2, opt.model->d()), 0, opt.model->d());
    if (p.has("family")) {
      const auto fam = p.as<std::string>("family");
      if (fam != "parity" && fam != "poly") throw ValidationError("config field 'family' must be 'parity' or 'poly'");
      opt.kind = fam == "parity" ? FamilyKind::Parity : FamilyKind::RandomPolynomial;
    }
    opt.seed = p.seed("multi-task batches are sampled");
    return verify_multi_task_bound(opt, policy);
  }
  if (claim == "no-free-lunch") {
    return verify_no_free_lunch(p.get_int("d", 3, 1, 3), policy);
  }
  if (claim == "world-model") {
    WorldModelOptions opt;
    opt.d = p.get_int("d", 3, 1, 5);
    opt.mixture = p.mixture(opt.d);
    opt.exhaustive = p.exhaustive_mode(opt.d);
    opt.samples = p.get_count("samples", opt.samples);
    if (!opt.exhaustive) opt.seed = p.seed("sampled mode draws random bijections");
    return verify_world_model(opt, policy);
  }
  if (claim == "example-counterexample") {
    return verify_example_counterexample(policy);
  }
  if (claim == "ood-benefit") {
    const auto model = p.model("table1");
    const int r = p.get_int("r", std::min(2, model->d() - 1), 0, model->d());
    const auto [h, label] = data_task(p, *model, "x1x4x5");
    return verify_ood_benefit(model, r, h, label);
  }
  if (claim == "ood-search") {
    OodSearchOptions opt;
    if (p.has("dims")) opt.dims = p.as<std::vector<int>>("dims");
    opt.models_per_dim = p.get_count("models_per_dim", opt.models_per_dim);
    opt.seed = p.seed("the search draws random models");
    return ood_config_search(opt, policy);
  }
  if (claim == "basis-impact") {
    BasisImpactOptions opt;
    opt.d = p.get_int("d", 3, 1, 3);
    opt.mixture = p.mixture(opt.d);
    opt.k_swap = p.get_int("k_swap", 2, 1, opt.d);
    return verify_basis_impact(opt, policy);
  }
  if (claim == "degree-composition") {
    DegreeCompositionOptions opt;
    opt.d = p.get_int("d", 3, 1, 5);
    opt.exhaustive = p.exhaustive_mode(opt.d);
    opt.samples = p.get_count("samples", opt.samples);
    opt.seed = opt.exhaustive ? p.seed_or_zero() : p.seed("sampled mode draws random bijections");
    return verify_degree_composition(opt, policy);
  }
  if (claim == "corollary") {
    CorollaryOptions opt;
    opt.model = p.model("table1");
    opt.samples = p.get_count("samples", 100);
    opt.k = p.get_int("k", opt.model->d(), 0, opt.model->d());
    opt.seed = p.seed("tasks are sampled");
    return verify_corollary(opt, policy);
  }
  throw ValidationError("unknown claim '" + claim + "'");
}

}  // namespace wmlab::cli
