#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmlab/boolfn.hpp"
#include "wmlab/genmodel.hpp"

namespace wmlab {

inline constexpr int kMaxSolveDim = 16;

struct SupportedTask {
  ModelPtr model;
  std::vector<double> labels;  // aligned with model->support_points()
  std::string provenance;

  static SupportedTask from_labels(ModelPtr model, std::vector<double> labels, std::string provenance = {});
  // h given on the whole data cube {+-1}^m; only its values on the image are kept.
  static SupportedTask from_data_function(ModelPtr model, const TruthTable& h, std::string provenance = {});
  // Task whose latent solution is g, i.e. labels g(z) at support points.
  static SupportedTask from_latent_function(ModelPtr model, const TruthTable& g, std::string provenance = {});

  // h o psi as a table over the latent cube; requires full support.
  TruthTable latent_table() const;
};

// Evidence that no fit of degree k-1 exists.
struct Certificate {
  int tested_degree = 0;
  std::size_t columns = 0;
  std::size_t rank = 0;
  double residual = 0.0;
};

struct MinDegreeSolution {
  FourierSpectrum spectrum;  // over {+-1}^m
  int degree = 0;
  std::optional<Certificate> certificate;  // absent when degree == 0
  double residual = 0.0;                   // of the returned fit on the support
};

inline constexpr double kConsistencyRelTol = 1e-8;
inline constexpr double kCertificateMinResidual = 1e-6;

// Degree-ascending consistency search over a fixed point set. Factorizations
// are built lazily per degree and shared by all label vectors, so one solver
// serves many tasks; solve() is safe to call concurrently.
class MinDegreeSolver {
 public:
  // points: distinct data-cube indices.
  MinDegreeSolver(int m, std::vector<Mask> points);
  ~MinDegreeSolver();
  MinDegreeSolver(MinDegreeSolver&&) noexcept;
  MinDegreeSolver& operator=(MinDegreeSolver&&) noexcept;

  int m() const;
  std::size_t size() const;
  MinDegreeSolution solve(std::span<const double> labels) const;

  // Which route solve() takes: orthogonal design (points = whole cube) or
  // the general rank-revealing route. Tests flip this to compare both.
  bool uses_orthogonal_route() const;
  void force_general_route();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Merges duplicate points; throws ValidationError when a duplicate carries a
// different label.
MinDegreeSolution min_degree_solve(int m, std::span<const Mask> points, std::span<const double> labels);
MinDegreeSolution min_degree_solve(const SupportedTask& task);

// Shared solver for a model's support (memoized per model instance).
const MinDegreeSolver& solver_for(const ModelPtr& model);

// Unique degree <= r function on {+-1}^d matching labels on B_r (labels in
// latent index order restricted to B_r).
FourierSpectrum hamming_extension(int d, int r, std::span<const double> labels);

struct Layer {
  int in_dim = 0;
  std::vector<TruthTable> outputs;  // each over {+-1}^in_dim
};

// Layers stored outermost first: layers[0] o layers[1] o ... o layers[q-1].
class Realization {
 public:
  explicit Realization(std::vector<Layer> layers);

  const std::vector<Layer>& layers() const { return layers_; }
  int input_dim() const { return layers_.back().in_dim; }
  int output_dim() const { return static_cast<int>(layers_.front().outputs.size()); }

  // Intermediate values must be +-1 (within 1e-6) to index the next layer.
  std::vector<double> evaluate(Mask x) const;
  bool reproduces(const SupportedTask& task, double tol = 1e-8) const;

 private:
  std::vector<Layer> layers_;
};

int realization_degree(const Realization& r, DegreeTolerance tol = {});

struct ConditionalDegree {
  int task_degree = 0;    // deg(h*)
  int latent_degree = 0;  // deg(h o psi o T^{-1})
  int value() const { return task_degree - latent_degree; }
};

// Phi: d tables over {+-1}^m. Refuses restricted supports and Phi o psi that
// is not a bijection of the latent cube.
ConditionalDegree conditional_degree_parts(const SupportedTask& task, std::span<const TruthTable> phi);
int conditional_degree(const SupportedTask& task, std::span<const TruthTable> phi);

// Phi* with each coordinate z_j min-degree solved on the model's support.
struct InverseRepresentation {
  std::vector<MinDegreeSolution> coords;
  std::vector<TruthTable> tables;  // over {+-1}^m
  int total_degree = 0;
};
InverseRepresentation min_degree_inverse(const ModelPtr& model);

// cond(h | psi^{-1}) > 0 implies deg(h o psi) <= d - 1.
bool corollary_membership_check(const SupportedTask& task);

}  // namespace wmlab
