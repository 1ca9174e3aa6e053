#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmlab/boolfn.hpp"

namespace wmlab {

struct SupportSpec {
  enum class Kind { FullCube, HammingBall };
  Kind kind = Kind::FullCube;
  int r = 0;  // HammingBall: at most r coordinates equal to -1

  static SupportSpec full() { return {}; }
  static SupportSpec hamming(int r) { return {Kind::HammingBall, r}; }
  bool contains(Mask z) const { return kind == Kind::FullCube || popcount(z) <= r; }
  bool is_full() const { return kind == Kind::FullCube; }
};

struct SignedParity {
  Mask subset = 0;
  int sign = 1;
};

// Raw, unvalidated description of psi. Exactly one of `parities` / `tables`
// is populated.
struct ModelSpec {
  std::string name;
  int d = 0;
  int m = 0;
  std::vector<SignedParity> parities;
  std::vector<TruthTable> tables;
  SupportSpec support;
};

struct ModelValidation {
  bool ok = false;
  std::size_t support_size = 0;
  std::size_t image_size = 0;
  std::vector<int> component_degrees;
  // First pair of distinct support points with the same image, if any.
  std::optional<std::pair<Mask, Mask>> collision;
  std::vector<std::string> problems;
};

ModelValidation validate(const ModelSpec& spec);

struct SupportPoint {
  Mask z;
  Mask x;
};

class GenerationModel {
 public:
  // Throws ValidationError when validate(spec) fails.
  explicit GenerationModel(ModelSpec spec);

  int d() const { return spec_.d; }
  int m() const { return spec_.m; }
  const std::string& name() const { return spec_.name; }
  const SupportSpec& support() const { return spec_.support; }
  const ModelSpec& spec() const { return spec_; }

  // psi(z) for any z in the latent cube (support membership is not required).
  Mask apply(Mask z) const { return forward_[z]; }
  std::vector<int> apply(std::span<const int> z_signs) const;

  // Preimage of x within the support, or nullopt when x is not in the image.
  std::optional<Mask> invert(Mask x) const;

  // Support points ordered by latent index.
  const std::vector<SupportPoint>& support_points() const { return points_; }

  std::vector<TruthTable> component_tables() const;

  // True when psi(support) is all of {+-1}^m.
  bool image_is_full_cube() const { return points_.size() == (std::size_t{1} << spec_.m); }

  GenerationModel with_support(SupportSpec s) const;

 private:
  ModelSpec spec_;
  std::vector<Mask> forward_;
  std::vector<Mask> inverse_;  // dense over {+-1}^m, kNotInImage outside the image
  std::vector<SupportPoint> points_;
};

using ModelPtr = std::shared_ptr<const GenerationModel>;

// Built-ins: "table1" (d=m=10), "triple-parity" (z1, z2, z1z2),
// "example-c" (z1, z1z2, z1z3).
ModelSpec table1_spec();
ModelSpec triple_parity_spec();
ModelSpec example_c_spec();
std::optional<ModelSpec> builtin_model_spec(const std::string& name);
std::vector<std::string> builtin_model_names();

Mask index_from_signs(std::span<const int> signs);
std::vector<int> signs_from_index(Mask idx, int n);

}  // namespace wmlab
