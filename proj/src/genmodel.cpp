#include "wmlab/genmodel.hpp"

#include <algorithm>
#include <limits>

#include "wmlab/errors.hpp"

namespace wmlab {

namespace {

constexpr Mask kNotInImage = std::numeric_limits<Mask>::max();

// Evaluates every component at every latent point; assumes structural checks passed.
std::vector<Mask> forward_map(const ModelSpec& spec) {
  std::vector<Mask> fwd(std::size_t{1} << spec.d, 0);
  for (Mask z = 0; z < fwd.size(); ++z) {
    Mask x = 0;
    for (int i = 0; i < spec.m; ++i) {
      int v;
      if (!spec.parities.empty())
        v = spec.parities[i].sign * parity_sign(spec.parities[i].subset, z);
      else
        v = spec.tables[i][z] < 0 ? -1 : 1;
      if (v < 0) x |= Mask{1} << i;
    }
    fwd[z] = x;
  }
  return fwd;
}

void structural_checks(const ModelSpec& s, std::vector<std::string>& problems) {
  if (s.d < 1) problems.push_back("d must be at least 1");
  if (s.d > kMaxCubeDim) problems.push_back("d exceeds " + std::to_string(kMaxCubeDim));
  if (s.m < s.d) problems.push_back("m must be >= d");
  if (s.m > kMaxCubeDim) problems.push_back("m exceeds " + std::to_string(kMaxCubeDim));
  if (!problems.empty()) return;

  const bool by_parity = !s.parities.empty();
  if (by_parity == !s.tables.empty()) {
    problems.push_back("model needs either signed-parity components or component tables");
    return;
  }
  const std::size_t count = by_parity ? s.parities.size() : s.tables.size();
  if (count != static_cast<std::size_t>(s.m))
    problems.push_back("expected " + std::to_string(s.m) + " components, got " + std::to_string(count));
  for (std::size_t i = 0; i < s.parities.size(); ++i) {
    const auto& c = s.parities[i];
    if (c.subset >> s.d) problems.push_back("component " + std::to_string(i + 1) + " uses a coordinate > d");
    if (c.sign != 1 && c.sign != -1) problems.push_back("component " + std::to_string(i + 1) + " sign must be +-1");
  }
  for (std::size_t i = 0; i < s.tables.size(); ++i) {
    if (s.tables[i].n() != s.d) problems.push_back("component table " + std::to_string(i + 1) + " is not over d");
    else if (!s.tables[i].is_boolean()) problems.push_back("component table " + std::to_string(i + 1) + " is not +-1 valued");
  }
  if (s.support.kind == SupportSpec::Kind::HammingBall && (s.support.r < 0 || s.support.r >= s.d))
    problems.push_back("hamming radius must satisfy 0 <= r < d");
}

}  // namespace

ModelValidation validate(const ModelSpec& spec) {
  ModelValidation rep;
  structural_checks(spec, rep.problems);
  if (!rep.problems.empty()) return rep;

  const auto fwd = forward_map(spec);
  std::vector<Mask> owner(std::size_t{1} << spec.m, kNotInImage);
  for (Mask z = 0; z < fwd.size(); ++z) {
    if (!spec.support.contains(z)) continue;
    ++rep.support_size;
    Mask& o = owner[fwd[z]];
    if (o == kNotInImage) {
      o = z;
      ++rep.image_size;
    } else if (!rep.collision) {
      rep.collision = std::make_pair(o, z);
    }
  }
  if (rep.support_size != ball_size(spec.d, spec.support.is_full() ? spec.d : spec.support.r))
    throw InternalError("support enumeration disagrees with the ball-size formula");

  if (!spec.parities.empty()) {
    for (const auto& c : spec.parities) rep.component_degrees.push_back(popcount(c.subset));
  } else {
    for (const auto& t : spec.tables) rep.component_degrees.push_back(degree(t));
  }
  if (rep.collision)
    rep.problems.push_back("psi is not injective on the support: latent points " +
                           std::to_string(rep.collision->first) + " and " +
                           std::to_string(rep.collision->second) + " share an image");
  rep.ok = rep.problems.empty();
  return rep;
}

GenerationModel::GenerationModel(ModelSpec spec) : spec_(std::move(spec)) {
  const auto rep = validate(spec_);
  if (!rep.ok) {
    std::string msg = "invalid model";
    if (!spec_.name.empty()) msg += " '" + spec_.name + "'";
    for (const auto& p : rep.problems) msg += "; " + p;
    throw ValidationError(msg);
  }
  forward_ = forward_map(spec_);
  inverse_.assign(std::size_t{1} << spec_.m, kNotInImage);
  for (Mask z = 0; z < forward_.size(); ++z) {
    if (!spec_.support.contains(z)) continue;
    inverse_[forward_[z]] = z;
    points_.push_back({z, forward_[z]});
  }
}

std::vector<int> GenerationModel::apply(std::span<const int> z_signs) const {
  if (z_signs.size() != static_cast<std::size_t>(d())) throw DimensionError("latent point has wrong length");
  return signs_from_index(apply(index_from_signs(z_signs)), m());
}

std::optional<Mask> GenerationModel::invert(Mask x) const {
  if (x >= inverse_.size() || inverse_[x] == kNotInImage) return std::nullopt;
  return inverse_[x];
}

std::vector<TruthTable> GenerationModel::component_tables() const {
  std::vector<TruthTable> out;
  for (int i = 0; i < m(); ++i)
    out.push_back(TruthTable::from_function(d(), [&](Mask z) { return coordinate_value(apply(z), i + 1); }));
  return out;
}

GenerationModel GenerationModel::with_support(SupportSpec s) const {
  ModelSpec copy = spec_;
  copy.support = s;
  return GenerationModel(std::move(copy));
}

namespace {

ModelSpec parity_model(std::string name, int d, std::vector<std::vector<int>> subsets) {
  ModelSpec s;
  s.name = std::move(name);
  s.d = d;
  s.m = static_cast<int>(subsets.size());
  for (const auto& sub : subsets) s.parities.push_back({coords_to_mask(sub, d), 1});
  return s;
}

}  // namespace

ModelSpec table1_spec() {
  return parity_model("table1", 10,
                      {{1}, {1, 2}, {1, 2, 3}, {1, 2, 3, 4}, {1, 2, 3, 4, 5},
                       {2, 3, 4, 5, 6}, {3, 4, 5, 6, 7}, {4, 5, 6, 7, 8},
                       {5, 6, 7, 8, 9}, {6, 7, 8, 9, 10}});
}

ModelSpec triple_parity_spec() { return parity_model("triple-parity", 2, {{1}, {2}, {1, 2}}); }

ModelSpec example_c_spec() { return parity_model("example-c", 3, {{1}, {1, 2}, {1, 3}}); }

std::vector<std::string> builtin_model_names() { return {"table1", "triple-parity", "example-c"}; }

std::optional<ModelSpec> builtin_model_spec(const std::string& name) {
  if (name == "table1") return table1_spec();
  if (name == "triple-parity") return triple_parity_spec();
  if (name == "example-c") return example_c_spec();
  return std::nullopt;
}

Mask index_from_signs(std::span<const int> signs) {
  if (signs.size() > static_cast<std::size_t>(kMaxCubeDim)) throw CapacityError("point has too many coordinates");
  Mask idx = 0;
  for (std::size_t j = 0; j < signs.size(); ++j) {
    if (signs[j] == -1) idx |= Mask{1} << j;
    else if (signs[j] != 1) throw ValidationError("cube coordinates must be +1 or -1");
  }
  return idx;
}

std::vector<int> signs_from_index(Mask idx, int n) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[j] = coordinate_value(idx, j + 1);
  return out;
}

}  // namespace wmlab
