#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wmlab/genmodel.hpp"
#include "wmlab/minsolve.hpp"
#include "wmlab/parallel.hpp"
#include "wmlab/tasks.hpp"
#include "wmlab/transforms.hpp"

namespace wmlab {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::string claim;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json measured = nlohmann::json::object();
  std::vector<Check> checks;
  std::vector<std::string> notes;
  bool conditions_met = true;

  void check(std::string name, bool ok, std::string detail = {});
  bool passed() const;
  std::string status() const;  // "pass", "fail" or "conditions not met"
  nlohmann::json to_json() const;
};

// ------------------------------------------------------------ objective

// Which functions h' make up family k in the objective.
//   SignedParity: +-chi_S with |S| <= k.
//   AllBoolean:   every +-1 valued function of degree <= k (d <= 4).
enum class ObjectiveFamily { SignedParity, AllBoolean };

struct DegreeBreakdown {
  int k = 0;
  Rational weight;
  std::int64_t degree_sum = 0;
  std::int64_t count = 0;
  Rational average;
};

struct ObjectiveEvaluation {
  std::vector<Mask> transform;  // T as a point permutation
  Rational value;               // exact mode only
  double value_double = 0.0;
  bool exact = true;
  std::vector<DegreeBreakdown> per_degree;
};

// E_k~p E_{h' in family_k} deg(h' o T^{-1}), optionally with deg replaced by deg_U.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(int d, DegreeMixture mixture, ObjectiveFamily family,
                     std::optional<BasisTransform> basis = std::nullopt);

  int d() const { return d_; }
  const DegreeMixture& mixture() const { return mixture_; }

  // Integer degree sums per family k = 1..d (index k-1) for the transform T.
  std::vector<std::int64_t> degree_sums(const CubeBijection& t) const;
  std::int64_t family_size(int k) const { return sizes_[static_cast<std::size_t>(k - 1)]; }
  Rational value_from_sums(const std::vector<std::int64_t>& sums) const;

  ObjectiveEvaluation evaluate(const CubeBijection& t) const;
  // Monte Carlo estimate from n sampled (k, h') pairs.
  ObjectiveEvaluation evaluate_sampled(const CubeBijection& t, std::size_t n, std::uint64_t seed) const;

 private:
  int family_degree(const std::vector<int>& values) const;

  int d_;
  DegreeMixture mixture_;
  ObjectiveFamily family_;
  std::optional<std::vector<int>> pre_degrees_;  // deg(U^{-1} chi_S)
  std::vector<std::int64_t> sizes_;
  std::vector<std::vector<int>> members_;  // family tables (latent index order)
  std::vector<int> member_degree_;         // deg(h') for membership in family_k
};

struct ArgminSummary {
  std::size_t total = 0;
  Rational min_value;
  std::vector<std::size_t> argmin;  // stream indices, ascending
  std::vector<bool> argmin_degree_one;
  std::size_t degree_one_total = 0;
  std::size_t degree_one_in_argmin = 0;
  std::map<std::string, std::size_t> value_histogram;  // rational -> count
};

ArgminSummary objective_argmin(const BijectionStream& stream, const ObjectiveEvaluator& eval, ExecPolicy policy);

// example-c transform (z1, z1z2, z1z3).
CubeBijection example_c_bijection();

// ------------------------------------------------------------ verifiers

struct SingleTaskOptions {
  ModelPtr model;
  std::size_t trials = 0;  // 0: every signed parity of x as a task
  std::uint64_t seed = 0;
  std::size_t phi_samples = 2000;  // d >= 4 only
};
VerificationReport verify_single_task(const SingleTaskOptions& opt, ExecPolicy policy);

struct MultiTaskOptions {
  ModelPtr model;
  std::vector<std::size_t> n_tasks{1, 64, 1000};
  std::size_t batches = 100;
  int k = 2;
  FamilyKind kind = FamilyKind::Parity;
  std::uint64_t seed = 0;
};
VerificationReport verify_multi_task_bound(const MultiTaskOptions& opt, ExecPolicy policy);

VerificationReport verify_no_free_lunch(int d, ExecPolicy policy);

struct WorldModelOptions {
  int d = 3;
  DegreeMixture mixture = DegreeMixture::uniform(3);
  bool exhaustive = true;
  std::size_t samples = BijectionStream::kDefaultSamples;
  std::uint64_t seed = 0;
};
VerificationReport verify_world_model(const WorldModelOptions& opt, ExecPolicy policy);

VerificationReport verify_example_counterexample(ExecPolicy policy);

struct OodMeasurement {
  int d = 0, m = 0, r = 0;
  std::size_t ball = 0;
  int q = 0;                 // deg(h) over the data cube
  int k = 0;                 // ceil(log2 |B_r|)
  int latent_degree = 0;     // deg(h o psi)
  bool latent_parity = false;
  int conditional = 0;       // deg(h | psi^{-1}) on the full support
  bool preconditions = false;
  int flat_degree = 0;       // deg(h*) fitted on psi(B_r)
  double flat_mse = 0.0;
  int world_degree = 0;      // deg(g*) fitted on B_r
  double world_mse = 0.0;
  nlohmann::json to_json() const;
};
OodMeasurement measure_ood(const ModelPtr& model, int r, const TruthTable& h);
VerificationReport verify_ood_benefit(const ModelPtr& model, int r, const TruthTable& h, const std::string& task_label);

struct OodSearchOptions {
  std::vector<int> dims{3, 4};
  std::size_t models_per_dim = 40;
  std::uint64_t seed = 0;
  std::size_t listed = 10;
};
VerificationReport ood_config_search(const OodSearchOptions& opt, ExecPolicy policy);

struct BasisImpactOptions {
  int d = 3;
  DegreeMixture mixture = DegreeMixture::uniform(3);
  int k_swap = 2;
};
// sigma({i}) for the swap construction.
std::vector<Mask> swap_partners(int d, int k_swap);
BasisTransform swap_basis(int d, int k_swap);
BasisTransform compatible_nontrivial_basis(int d);
VerificationReport verify_basis_impact(const BasisImpactOptions& opt, ExecPolicy policy);

struct DegreeCompositionOptions {
  int d = 3;
  bool exhaustive = true;
  std::size_t samples = 20000;
  std::uint64_t seed = 0;
};
VerificationReport verify_degree_composition(const DegreeCompositionOptions& opt, ExecPolicy policy);

struct CorollaryOptions {
  ModelPtr model;
  std::size_t samples = 100;
  int k = 10;
  std::uint64_t seed = 0;
};
VerificationReport verify_corollary(const CorollaryOptions& opt, ExecPolicy policy);

}  // namespace wmlab
