#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "wmlab/cli.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/json_io.hpp"
#include "wmlab/seeding.hpp"

namespace wmlab::cli {

using nlohmann::json;

namespace {

struct Common {
  int threads = default_thread_count();
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c, bool with_seed) {
  c.threads_opt = sub->add_option("--threads", c.threads, "Worker threads (default: available cores)")
                      ->check(CLI::PositiveNumber);
  c.out_opt = sub->add_option("--out", c.out, "Write output to this file instead of stdout");
  c.format_opt = sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  if (with_seed) c.seed_opt = sub->add_option("--seed", c.seed, "Random seed");
}

std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutDirEnv); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  return p;
}

void emit(const std::string& text, const std::string& out, std::ostream& stdout_stream) {
  if (out.empty()) {
    stdout_stream << text;
    return;
  }
  const auto path = resolve_out(out);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path.string() + "'");
  f << text;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string leaf_text(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

// One header line and one row with every leaf of `j` (JSON-pointer column names).
std::string flat_csv(const json& j) {
  const json flat = j.flatten();
  std::string head, row;
  bool first = true;
  for (const auto& [key, value] : flat.items()) {
    head += (first ? "" : ",") + csv_escape(key);
    row += (first ? "" : ",") + csv_escape(leaf_text(value));
    first = false;
  }
  return head + "\n" + row + "\n";
}

std::string spectrum_csv(const FourierSpectrum& s) {
  std::string out = "subset,coeff\n";
  for (Mask m : masks_up_to_degree(s.n(), s.n())) out += csv_escape(format_subset(m)) + "," + json(s[m]).dump() + "\n";
  return out;
}

std::string render(const json& j, const Common& c) { return c.format == "csv" ? flat_csv(j) : j.dump(2) + "\n"; }

json model_ref_json(const std::string& value) {
  if (builtin_model_spec(value)) return value;
  return load_json_file(value);
}

ModelPtr load_model(const std::string& value) {
  return std::make_shared<const GenerationModel>(model_from_json(model_ref_json(value)));
}

json eval_json(const ObjectiveEvaluation& ev) {
  json per = json::array();
  for (const auto& b : ev.per_degree)
    per.push_back({{"k", b.k},
                   {"weight", to_string(b.weight)},
                   {"degree_sum", b.degree_sum},
                   {(ev.exact ? "family_size" : "draws"), b.count},
                   {"average", to_string(b.average)}});
  json j{{"transform", ev.transform}, {"mode", ev.exact ? "exact" : "sampled"}, {"per_degree", per}};
  j["value"] = {{"exact", to_string(ev.value)}, {"value", ev.value_double}};
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boolean-cube world-model verification lab"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // wht
  Common wht_c;
  std::string wht_table;
  bool wht_inverse = false;
  auto* wht_cmd = app.add_subcommand("wht", "Walsh-Hadamard transform of a truth table");
  wht_cmd->add_option("--table", wht_table, "Truth table JSON (or spectrum JSON with --inverse)")->required();
  wht_cmd->add_flag("--inverse", wht_inverse, "Input is a spectrum; output its truth table");
  add_common(wht_cmd, wht_c, false);

  // degree
  Common deg_c;
  std::string deg_table, deg_spectrum;
  double deg_eps = DegreeTolerance::kDefaultEps;
  auto* deg_cmd = app.add_subcommand("degree", "Fourier degree of a function");
  auto* deg_t = deg_cmd->add_option("--table", deg_table, "Truth table JSON");
  auto* deg_s = deg_cmd->add_option("--spectrum", deg_spectrum, "Spectrum JSON");
  deg_t->excludes(deg_s);
  deg_cmd->add_option("--eps", deg_eps, "Relative zero tolerance")->check(CLI::NonNegativeNumber);
  add_common(deg_cmd, deg_c, false);

  // influence
  Common inf_c;
  std::string inf_table;
  int inf_coord = 1;
  auto* inf_cmd = app.add_subcommand("influence", "Influence of one coordinate");
  inf_cmd->add_option("--table", inf_table, "Truth table JSON")->required();
  inf_cmd->add_option("--coord", inf_coord, "Coordinate (1-based)")->required();
  add_common(inf_cmd, inf_c, false);

  // minsolve
  Common ms_c;
  std::string ms_task;
  auto* ms_cmd = app.add_subcommand("minsolve", "Minimum-degree interpolation of a task on its support");
  ms_cmd->add_option("--task", ms_task, "Task JSON")->required();
  add_common(ms_cmd, ms_c, false);

  // model-validate
  Common mv_c;
  std::string mv_model = "table1";
  auto* mv_cmd = app.add_subcommand("model-validate", "Check injectivity and component degrees of a model");
  mv_cmd->add_option("--model", mv_model, "Built-in model name or model JSON file");
  add_common(mv_cmd, mv_c, false);

  // sample-tasks
  Common st_c;
  std::string st_model = "table1", st_family = "parity", st_law = "uniform", st_mixture;
  int st_k = 1;
  std::size_t st_count = 1;
  auto* st_cmd = app.add_subcommand("sample-tasks", "Draw tasks from a k-degree family or a degree mixture");
  st_cmd->add_option("--model", st_model, "Built-in model name or model JSON file");
  st_cmd->add_option("--family", st_family, "Family kind")->check(CLI::IsMember({"parity", "poly"}));
  st_cmd->add_option("--coeff-law", st_law, "Coefficient law for poly")->check(CLI::IsMember({"uniform", "gaussian"}));
  st_cmd->add_option("--k", st_k, "Family degree");
  st_cmd->add_option("--mixture", st_mixture, "Degree mixture p_1,...,p_d (overrides --k)");
  st_cmd->add_option("--count", st_count, "Number of tasks");
  add_common(st_cmd, st_c, true);

  // objective
  Common ob_c;
  int ob_d = 3;
  std::string ob_transform = "identity", ob_mixture, ob_class = "parity", ob_mode = "exact", ob_basis;
  std::size_t ob_samples = 10000;
  auto* ob_cmd = app.add_subcommand("objective", "Expected latent degree E deg(h' o T^-1) for a transform");
  ob_cmd->add_option("--d", ob_d, "Latent dimension");
  ob_cmd->add_option("--transform", ob_transform, "identity, example-c, or a transform JSON file");
  ob_cmd->add_option("--mixture", ob_mixture, "Degree mixture p_1,...,p_d (default uniform)");
  ob_cmd->add_option("--family-class", ob_class, "Family class")->check(CLI::IsMember({"parity", "boolean"}));
  ob_cmd->add_option("--mode", ob_mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  ob_cmd->add_option("--samples", ob_samples, "Draws in sampled mode");
  ob_cmd->add_option("--basis", ob_basis, "Basis transform JSON (degree measured as deg_U)");
  add_common(ob_cmd, ob_c, true);

  // verify
  Common vf_c;
  std::string vf_claim, vf_config;
  json vf_flags = json::object();
  auto* vf_cmd = app.add_subcommand("verify", "Run a verifier and emit its report");
  vf_cmd->add_option("claim", vf_claim, "Claim id")->check(CLI::IsMember(claim_names()));
  vf_cmd->add_option("--config", vf_config, "Experiment config JSON");
  bool vf_timing = false;
  vf_cmd->add_flag("--timing", vf_timing, "Print wall-clock runtime to stderr");
  struct FlagSpec {
    const char* flag;
    const char* key;
    const char* help;
    bool integer;
  };
  const std::vector<FlagSpec> verify_flags{
      {"--d", "d", "Latent dimension", true},
      {"--r", "r", "Hamming radius", true},
      {"--k", "k", "Task family degree", true},
      {"--k-swap", "k_swap", "Degree of the swapped parities", true},
      {"--samples", "samples", "Sample count", true},
      {"--trials", "trials", "Random task count", true},
      {"--batches", "batches", "Batches per n", true},
      {"--phi-samples", "phi_samples", "Sampled Phi count at d >= 4", true},
      {"--models-per-dim", "models_per_dim", "Random models per dimension in the search", true},
      {"--mixture", "mixture", "Degree mixture p_1,...,p_d", false},
      {"--mode", "mode", "exact or sampled", false},
      {"--family", "family", "parity or poly", false},
      {"--n-tasks", "n_tasks", "Comma-separated task counts", false},
      {"--dims", "dims", "Comma-separated dimensions for the search", false},
      {"--model", "model", "Built-in model name or model JSON file", false},
      {"--task", "task", "Monomial like x1x4x5 or a task-expression JSON file", false},
  };
  std::map<std::string, std::string> vf_values;
  for (const auto& f : verify_flags) vf_cmd->add_option(f.flag, vf_values[f.key], f.help);
  add_common(vf_cmd, vf_c, true);

  // sweep
  Common sw_c;
  std::string sw_config;
  auto* sw_cmd = app.add_subcommand("sweep", "Run a claim over a parameter grid and emit CSV");
  sw_cmd->add_option("--config", sw_config, "Sweep config JSON")->required();
  add_common(sw_cmd, sw_c, true);

  std::vector<const char*> argv{"wmlab"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
      out << app.help();
      return kExitPass;
    } catch (const CLI::CallForAllHelp& e) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitPass;
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kExitPass;
      }
      err << "usage error: " << e.what() << "\n";
      return kExitUsage;
    }

    if (wht_cmd->parsed()) {
      const auto j = load_json_file(wht_table);
      if (wht_inverse) {
        const auto t = inverse_wht(spectrum_from_json(j));
        emit(wht_c.format == "csv" ? flat_csv(to_json(t)) : to_json(t).dump(2) + "\n", wht_c.out, out);
      } else {
        const auto s = wht(truth_table_from_json(j));
        emit(wht_c.format == "csv" ? spectrum_csv(s) : to_json(s).dump(2) + "\n", wht_c.out, out);
      }
      return kExitPass;
    }
    if (deg_cmd->parsed()) {
      if (deg_table.empty() == deg_spectrum.empty()) throw ValidationError("give exactly one of --table or --spectrum");
      const auto spec = deg_table.empty() ? spectrum_from_json(load_json_file(deg_spectrum))
                                          : wht(truth_table_from_json(load_json_file(deg_table)));
      const json j{{"n", spec.n()}, {"degree", degree(spec, {deg_eps})}, {"eps", deg_eps}};
      emit(render(j, deg_c), deg_c.out, out);
      return kExitPass;
    }
    if (inf_cmd->parsed()) {
      const auto t = truth_table_from_json(load_json_file(inf_table));
      json j{{"coordinate", inf_coord}, {"influence", influence(t, inf_coord)}};
      j["flip_probability"] = t.is_boolean() ? json(flip_influence(t, inf_coord)) : json();
      emit(render(j, inf_c), inf_c.out, out);
      return kExitPass;
    }
    if (ms_cmd->parsed()) {
      const auto task = task_from_json(load_json_file(ms_task));
      const auto sol = min_degree_solve(task);
      if (ms_c.format == "csv") {
        emit(spectrum_csv(sol.spectrum), ms_c.out, out);
      } else {
        json j{{"model_ref", model_reference(task.model->spec())},
               {"support_size", task.labels.size()},
               {"solution", solution_to_json(sol)}};
        emit(j.dump(2) + "\n", ms_c.out, out);
      }
      return kExitPass;
    }
    if (mv_cmd->parsed()) {
      const auto spec = model_from_json(model_ref_json(mv_model));
      const auto rep = validate(spec);
      json j{{"model_ref", model_reference(spec)},
             {"injective", rep.ok},
             {"support_size", rep.support_size},
             {"image_size", rep.image_size},
             {"component_degrees", rep.component_degrees},
             {"problems", rep.problems}};
      j["collision"] = rep.collision ? json{rep.collision->first, rep.collision->second} : json();
      emit(render(j, mv_c), mv_c.out, out);
      return rep.ok ? kExitPass : kExitClaimFailure;
    }
    if (st_cmd->parsed()) {
      if (!st_c.seed_opt->count()) throw ValidationError("sample-tasks needs --seed");
      const auto model = load_model(st_model);
      std::mt19937_64 rng(st_c.seed);
      json tasks = json::array();
      const auto kind = st_family == "parity" ? FamilyKind::Parity : FamilyKind::RandomPolynomial;
      const auto law = st_law == "uniform" ? CoeffLaw::Uniform : CoeffLaw::Gaussian;
      if (!st_mixture.empty()) {
        const auto mix = DegreeMixture::parse(st_mixture);
        if (mix.d() != model->d()) throw ValidationError("mixture needs one weight per latent degree 1..d");
        std::vector<TaskFamily> fams;
        for (int k = 1; k <= model->d(); ++k) fams.push_back({kind, k, law, model});
        for (std::size_t i = 0; i < st_count; ++i) {
          auto draw = sample_mixture_task(mix, fams, rng);
          auto tj = task_to_json(draw.task);
          tj["k"] = draw.k;
          tasks.push_back(std::move(tj));
        }
      } else {
        const TaskFamily fam{kind, st_k, law, model};
        if (st_k < 0 || st_k > model->d()) throw ValidationError("--k must satisfy 0 <= k <= d");
        for (std::size_t i = 0; i < st_count; ++i) tasks.push_back(task_to_json(sample_task(fam, rng)));
      }
      const json j{{"seed", st_c.seed}, {"family", st_family}, {"tasks", tasks}};
      emit(j.dump(2) + "\n", st_c.out, out);
      return kExitPass;
    }
    if (ob_cmd->parsed()) {
      const auto mix = ob_mixture.empty() ? DegreeMixture::uniform(ob_d) : DegreeMixture::parse(ob_mixture);
      CubeBijection t = ob_transform == "identity"    ? CubeBijection::identity(ob_d)
                        : ob_transform == "example-c" ? example_c_bijection()
                                                      : bijection_from_json(load_json_file(ob_transform));
      if (t.d() != ob_d) throw ValidationError("transform dimension differs from --d");
      std::optional<BasisTransform> basis;
      if (!ob_basis.empty()) basis = basis_from_json(load_json_file(ob_basis), ob_d);
      const ObjectiveEvaluator eval(ob_d, mix,
                                    ob_class == "parity" ? ObjectiveFamily::SignedParity : ObjectiveFamily::AllBoolean,
                                    basis);
      ObjectiveEvaluation ev;
      if (ob_mode == "exact") {
        ev = eval.evaluate(t);
      } else {
        if (!ob_c.seed_opt->count()) throw ValidationError("sampled objective needs --seed");
        ev = eval.evaluate_sampled(t, ob_samples, ob_c.seed);
      }
      emit(render(eval_json(ev), ob_c), ob_c.out, out);
      return kExitPass;
    }
    if (vf_cmd->parsed()) {
      json params = json::object();
      if (!vf_config.empty()) {
        params = load_json_file(vf_config);
        validate_experiment_config(params, false);
      }
      for (const auto& f : verify_flags) {
        const auto& v = vf_values[f.key];
        if (vf_cmd->get_option(f.flag)->count() == 0) continue;
        const std::string key = f.key;
        if (f.integer) {
          try {
            std::size_t used = 0;
            const long long n = std::stoll(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            params[key] = n;
          } catch (const std::exception&) {
            throw ValidationError(std::string(f.flag) + " expects an integer, got '" + v + "'");
          }
        } else if (key == "n_tasks" || key == "dims") {
          json list = json::array();
          std::stringstream ss(v);
          for (std::string item; std::getline(ss, item, ',');) {
            try {
              list.push_back(std::stoll(item));
            } catch (const std::exception&) {
              throw ValidationError(std::string(f.flag) + " expects comma-separated integers");
            }
          }
          params[key] = list;
        } else if (key == "model") {
          params[key] = model_ref_json(v);
        } else if (key == "task" && v.size() > 5 && v.substr(v.size() - 5) == ".json") {
          params[key] = load_json_file(v);
        } else {
          params[key] = v;
        }
      }
      if (vf_c.seed_opt->count()) params["seed"] = vf_c.seed;
      std::string claim = vf_claim;
      if (claim.empty() && params.contains("claim")) claim = params["claim"].get<std::string>();
      if (claim.empty()) throw ValidationError("verify needs a claim (positional or \"claim\" in --config)");
      if (!vf_claim.empty() && params.contains("claim") && params["claim"] != vf_claim)
        throw ValidationError("claim on the command line differs from the config's claim");
      ExecPolicy policy{vf_c.threads};
      if (!vf_c.threads_opt->count() && params.contains("threads")) policy.threads = params["threads"].get<int>();
      std::string out_path = vf_c.out;
      if (out_path.empty() && params.contains("out")) out_path = params["out"].get<std::string>();
      Common fmt = vf_c;
      if (!vf_c.format_opt->count() && params.contains("format")) fmt.format = params["format"].get<std::string>();
      for (const char* k : {"claim", "threads", "out", "format"}) params.erase(k);

      const auto start = std::chrono::steady_clock::now();
      const auto rep = run_claim(claim, params, policy);
      if (vf_timing) {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        err << "runtime_ms " << ms.count() << "\n";
      }
      emit(render(rep.to_json(), fmt), out_path, out);
      return rep.passed() ? kExitPass : kExitClaimFailure;
    }
    if (sw_cmd->parsed()) {
      json cfg = load_json_file(sw_config);
      if (sw_c.seed_opt->count()) cfg["seed"] = sw_c.seed;
      if (sw_c.format_opt->count() && sw_c.format != "csv") throw ValidationError("sweep emits CSV only");
      ExecPolicy policy{sw_c.threads};
      if (!sw_c.threads_opt->count() && cfg.contains("threads") && cfg["threads"].is_number_integer())
        policy.threads = cfg["threads"].get<int>();
      std::string out_path = sw_c.out;
      if (out_path.empty() && cfg.contains("out") && cfg["out"].is_string()) out_path = cfg["out"].get<std::string>();
      emit(run_sweep(cfg, policy), out_path, out);
      return kExitPass;
    }
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitClaimFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace wmlab::cli
