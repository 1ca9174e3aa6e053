#include "wmlab/json_io.hpp"

#include <cmath>
#include <cstdio>

#include "wmlab/errors.hpp"

namespace wmlab {

void require_keys_subset(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(where + ": unknown field '" + key + "'");
  }
}

static const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
  return j.at(key);
}

json to_json(const TruthTable& t) { return {{"n", t.n()}, {"values", t.values()}}; }

TruthTable truth_table_from_json(const json& j) {
  require_keys_subset(j, {"n", "values"}, "truth table");
  return TruthTable(need(j, "n", "truth table").get<int>(), need(j, "values", "truth table").get<std::vector<double>>());
}

json to_json(const FourierSpectrum& s) { return {{"n", s.n()}, {"coeffs", s.coeffs()}}; }

FourierSpectrum spectrum_from_json(const json& j) {
  require_keys_subset(j, {"n", "coeffs"}, "spectrum");
  return FourierSpectrum(need(j, "n", "spectrum").get<int>(), need(j, "coeffs", "spectrum").get<std::vector<double>>());
}

json subset_json(Mask s) { return mask_to_coords(s); }

Mask subset_from_json(const json& j, int n) {
  if (!j.is_array()) throw ValidationError("subset must be a list of coordinates");
  return coords_to_mask(j.get<std::vector<int>>(), n);
}

json model_to_json(const ModelSpec& m) {
  json j;
  j["d"] = m.d;
  j["m"] = m.m;
  if (!m.name.empty()) j["name"] = m.name;
  if (!m.parities.empty()) {
    j["components"] = json::array();
    for (const auto& c : m.parities) j["components"].push_back({{"subset", subset_json(c.subset)}, {"sign", c.sign}});
  } else {
    j["tables"] = json::array();
    for (const auto& t : m.tables) j["tables"].push_back(t.values());
  }
  if (m.support.is_full()) j["support"] = {{"kind", "full"}};
  else j["support"] = {{"kind", "hamming"}, {"r", m.support.r}};
  return j;
}

ModelSpec model_from_json(const json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (auto spec = builtin_model_spec(name)) return *spec;
    std::string known;
    for (const auto& n : builtin_model_names()) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("unknown built-in model '" + name + "' (known: " + known + ")");
  }
  const std::string where = "model";
  require_keys_subset(j, {"name", "d", "m", "components", "tables", "support"}, where);
  ModelSpec m;
  if (j.contains("name")) m.name = j["name"].get<std::string>();
  m.d = need(j, "d", where).get<int>();
  m.m = need(j, "m", where).get<int>();
  if (m.d < 1 || m.d > kMaxCubeDim) throw ValidationError("model: d out of range");
  if (j.contains("components")) {
    for (const auto& c : j["components"]) {
      require_keys_subset(c, {"subset", "sign"}, "model component");
      const int sign = c.contains("sign") ? c["sign"].get<int>() : 1;
      m.parities.push_back({subset_from_json(need(c, "subset", "model component"), m.d), sign});
    }
  }
  if (j.contains("tables"))
    for (const auto& t : j["tables"]) m.tables.emplace_back(m.d, t.get<std::vector<double>>());
  if (j.contains("support")) {
    const auto& s = j["support"];
    require_keys_subset(s, {"kind", "r"}, "model support");
    const auto kind = need(s, "kind", "model support").get<std::string>();
    if (kind == "full") m.support = SupportSpec::full();
    else if (kind == "hamming") m.support = SupportSpec::hamming(need(s, "r", "model support").get<int>());
    else throw ValidationError("model support: kind must be 'full' or 'hamming'");
  }
  return m;
}

std::string model_hash(const ModelSpec& m) {
  ModelSpec anon = m;
  anon.name.clear();
  const std::string text = model_to_json(anon).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string model_reference(const ModelSpec& m) {
  if (auto builtin = builtin_model_spec(m.name)) {
    if (model_hash(*builtin) == model_hash(m)) return m.name;
  }
  return "fnv1a:" + model_hash(m);
}

TruthTable expr_table(const json& expr, int n) {
  if (!expr.is_array()) throw ValidationError("expr must be a list of terms");
  std::vector<double> coeffs(std::size_t{1} << n, 0.0);
  for (const auto& term : expr) {
    require_keys_subset(term, {"subset", "sign", "coeff"}, "expr term");
    if (term.contains("sign") && term.contains("coeff")) throw ValidationError("expr term: give sign or coeff, not both");
    double c = 1.0;
    if (term.contains("sign")) {
      const int s = term["sign"].get<int>();
      if (s != 1 && s != -1) throw ValidationError("expr term: sign must be +-1");
      c = s;
    }
    if (term.contains("coeff")) c = term["coeff"].get<double>();
    coeffs[subset_from_json(need(term, "subset", "expr term"), n)] += c;
  }
  return inverse_wht(FourierSpectrum(n, std::move(coeffs)));
}

SupportedTask task_from_json(const json& j) {
  const std::string where = "task";
  require_keys_subset(j, {"model", "labels", "expr", "over", "provenance"}, where);
  auto model = std::make_shared<const GenerationModel>(model_from_json(need(j, "model", where)));
  const std::string prov = j.contains("provenance") ? j["provenance"].get<std::string>() : "";
  if (j.contains("labels") == j.contains("expr")) throw ValidationError("task: give exactly one of 'labels' or 'expr'");
  if (j.contains("labels")) {
    if (j.contains("over")) throw ValidationError("task: 'over' only applies to 'expr'");
    return SupportedTask::from_labels(model, j["labels"].get<std::vector<double>>(), prov);
  }
  const std::string over = j.contains("over") ? j["over"].get<std::string>() : "x";
  if (over == "x") return SupportedTask::from_data_function(model, expr_table(j["expr"], model->m()), prov);
  if (over == "z") return SupportedTask::from_latent_function(model, expr_table(j["expr"], model->d()), prov);
  throw ValidationError("task: 'over' must be 'x' or 'z'");
}

json task_to_json(const SupportedTask& t) {
  const auto& spec = t.model->spec();
  json j;
  j["model"] = builtin_model_spec(spec.name) && model_reference(spec) == spec.name ? json(spec.name) : model_to_json(spec);
  j["model_ref"] = model_reference(spec);
  j["labels"] = t.labels;
  if (!t.provenance.empty()) j["provenance"] = t.provenance;
  return j;
}

json solution_to_json(const MinDegreeSolution& s) {
  json j;
  j["degree"] = s.degree;
  j["spectrum"] = to_json(s.spectrum);
  j["monomials"] = monomial_listing(s.spectrum);
  j["residual"] = s.residual;
  if (s.certificate)
    j["certificate"] = {{"tested_degree", s.certificate->tested_degree},
                        {"columns", s.certificate->columns},
                        {"rank", s.certificate->rank},
                        {"residual", s.certificate->residual}};
  else
    j["certificate"] = nullptr;
  return j;
}

json bijection_to_json(const CubeBijection& t) { return {{"d", t.d()}, {"perm", t.perm()}}; }

json to_json(const SignedPermutation& p) { return {{"perm", p.perm}, {"signs", p.signs}}; }

CubeBijection bijection_from_json(const json& j) {
  if (j.is_array()) {
    const auto perm = j.get<std::vector<Mask>>();
    int d = 0;
    while ((std::size_t{1} << d) < perm.size()) ++d;
    return CubeBijection(d, perm);
  }
  const std::string where = "transform";
  require_keys_subset(j, {"d", "perm", "signs", "components"}, where);
  if (j.contains("components")) {
    const auto& comps = j["components"];
    const int d = j.contains("d") ? j["d"].get<int>() : static_cast<int>(comps.size());
    std::vector<TruthTable> tables;
    for (const auto& c : comps) {
      require_keys_subset(c, {"subset", "sign"}, "transform component");
      const int sign = c.contains("sign") ? c["sign"].get<int>() : 1;
      tables.push_back(TruthTable::parity(d, subset_from_json(need(c, "subset", "transform component"), d), sign));
    }
    return CubeBijection::from_components(tables);
  }
  if (j.contains("signs"))
    return SignedPermutation(need(j, "perm", where).get<std::vector<int>>(), j["signs"].get<std::vector<int>>())
        .to_bijection();
  return CubeBijection(need(j, "d", where).get<int>(), need(j, "perm", where).get<std::vector<Mask>>());
}

BasisTransform basis_from_json(const json& j, int m) {
  const std::string where = "basis";
  require_keys_subset(j, {"kind", "sigma", "entries"}, where);
  const auto kind = need(j, "kind", where).get<std::string>();
  if (kind == "identity") return BasisTransform::identity(m);
  if (kind == "parity_perm") return BasisTransform::parity_permutation(m, need(j, "sigma", where).get<std::vector<Mask>>());
  if (kind == "matrix") return BasisTransform::matrix(m, need(j, "entries", where).get<std::vector<double>>());
  throw ValidationError("basis: kind must be 'identity', 'parity_perm' or 'matrix'");
}

TaskFamily family_from_json(const json& j, ModelPtr model) {
  const std::string where = "family";
  require_keys_subset(j, {"kind", "k", "coeff_law"}, where);
  TaskFamily f;
  f.model = std::move(model);
  const auto kind = j.contains("kind") ? j["kind"].get<std::string>() : "parity";
  if (kind == "parity") f.kind = FamilyKind::Parity;
  else if (kind == "poly") f.kind = FamilyKind::RandomPolynomial;
  else throw ValidationError("family: kind must be 'parity' or 'poly'");
  f.k = need(j, "k", where).get<int>();
  const auto law = j.contains("coeff_law") ? j["coeff_law"].get<std::string>() : "uniform";
  if (law == "uniform") f.law = CoeffLaw::Uniform;
  else if (law == "gaussian") f.law = CoeffLaw::Gaussian;
  else throw ValidationError("family: coeff_law must be 'uniform' or 'gaussian'");
  if (f.model && (f.k < 0 || f.k > f.model->d())) throw ValidationError("family: k must satisfy 0 <= k <= d");
  return f;
}

}  // namespace wmlab
