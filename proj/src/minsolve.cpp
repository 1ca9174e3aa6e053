#include "wmlab/minsolve.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>

#include "wmlab/errors.hpp"

namespace wmlab {

// ---------------------------------------------------------------- tasks

SupportedTask SupportedTask::from_labels(ModelPtr model, std::vector<double> labels, std::string provenance) {
  if (!model) throw ValidationError("task has no model");
  if (labels.size() != model->support_points().size())
    throw DimensionError("task needs " + std::to_string(model->support_points().size()) +
                         " labels (one per support point), got " + std::to_string(labels.size()));
  for (double v : labels)
    if (!std::isfinite(v)) throw ValidationError("task label is not finite");
  return SupportedTask{std::move(model), std::move(labels), std::move(provenance)};
}

SupportedTask SupportedTask::from_data_function(ModelPtr model, const TruthTable& h, std::string provenance) {
  if (!model) throw ValidationError("task has no model");
  if (h.n() != model->m()) throw DimensionError("data-space function must be over m coordinates");
  std::vector<double> y;
  for (const auto& p : model->support_points()) y.push_back(h[p.x]);
  return from_labels(std::move(model), std::move(y), std::move(provenance));
}

SupportedTask SupportedTask::from_latent_function(ModelPtr model, const TruthTable& g, std::string provenance) {
  if (!model) throw ValidationError("task has no model");
  if (g.n() != model->d()) throw DimensionError("latent function must be over d coordinates");
  std::vector<double> y;
  for (const auto& p : model->support_points()) y.push_back(g[p.z]);
  return from_labels(std::move(model), std::move(y), std::move(provenance));
}

TruthTable SupportedTask::latent_table() const {
  if (!model->support().is_full()) throw RefusalError("latent table needs the full latent support");
  return TruthTable(model->d(), labels);
}

// ---------------------------------------------------------------- solver

struct MinDegreeSolver::Impl {
  struct Level {
    std::vector<Mask> masks;
    Eigen::MatrixXd a;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  };

  int m = 0;
  std::vector<Mask> points;
  bool orthogonal = false;
  mutable std::vector<std::unique_ptr<Level>> levels;
  std::unique_ptr<std::once_flag[]> built;

  const Level& level(int k) const {
    std::call_once(built[k], [&] {
      auto lvl = std::make_unique<Level>();
      lvl->masks = masks_up_to_degree(m, k);
      const std::size_t rows = points.size(), cols = lvl->masks.size();
      if (rows * cols > (std::size_t{1} << 26))
        throw CapacityError("min-degree system " + std::to_string(rows) + "x" + std::to_string(cols) +
                            " is too large");
      lvl->a.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
          lvl->a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parity_sign(lvl->masks[j], points[i]);
      lvl->cod.compute(lvl->a);
      levels[k] = std::move(lvl);
    });
    return *levels[k];
  }

  MinDegreeSolution solve_orthogonal(std::span<const double> y) const;
  MinDegreeSolution solve_general(std::span<const double> y) const;
};

MinDegreeSolver::MinDegreeSolver(int m, std::vector<Mask> points) : impl_(std::make_unique<Impl>()) {
  if (m < 0) throw DimensionError("negative data dimension");
  if (m > kMaxSolveDim)
    throw CapacityError("min-degree solving supports m <= " + std::to_string(kMaxSolveDim) + ", got " +
                        std::to_string(m));
  std::vector<bool> seen(std::size_t{1} << m, false);
  for (Mask p : points) {
    if (p >> m) throw DimensionError("support point outside {+-1}^m");
    if (seen[p]) throw ValidationError("duplicate support point " + std::to_string(p));
    seen[p] = true;
  }
  impl_->m = m;
  impl_->points = std::move(points);
  impl_->orthogonal = impl_->points.size() == (std::size_t{1} << m);
  impl_->levels.resize(static_cast<std::size_t>(m) + 1);
  impl_->built = std::make_unique<std::once_flag[]>(static_cast<std::size_t>(m) + 1);
}

MinDegreeSolver::~MinDegreeSolver() = default;
MinDegreeSolver::MinDegreeSolver(MinDegreeSolver&&) noexcept = default;
MinDegreeSolver& MinDegreeSolver::operator=(MinDegreeSolver&&) noexcept = default;

int MinDegreeSolver::m() const { return impl_->m; }
std::size_t MinDegreeSolver::size() const { return impl_->points.size(); }
bool MinDegreeSolver::uses_orthogonal_route() const { return impl_->orthogonal; }
void MinDegreeSolver::force_general_route() { impl_->orthogonal = false; }

static double label_norm(std::span<const double> y) {
  double s = 0;
  for (double v : y) s += v * v;
  return std::sqrt(s);
}

// Points cover the whole cube, so the parity columns are orthogonal: the
// interpolant is unique and the degree-k least-squares residual is the
// spectral tail above k (Parseval).
MinDegreeSolution MinDegreeSolver::Impl::solve_orthogonal(std::span<const double> y) const {
  std::vector<double> table(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) table[points[i]] = y[i];
  auto spec = wht(TruthTable(m, std::move(table)));

  std::vector<double> energy(static_cast<std::size_t>(m) + 2, 0.0);
  for (Mask s = 0; s < spec.size(); ++s) energy[popcount(s)] += spec[s] * spec[s];
  std::vector<double> tail(static_cast<std::size_t>(m) + 2, 0.0);  // tail[k] = sum_{|S|>k}
  for (int k = m - 1; k >= 0; --k) tail[k] = tail[k + 1] + energy[k + 1];

  const double scale = std::ldexp(1.0, m);
  const double thr = kConsistencyRelTol * (1.0 + label_norm(y));
  auto residual = [&](int k) { return std::sqrt(scale * tail[k]); };
  int k = 0;
  while (k < m && residual(k) > thr) ++k;

  std::vector<double> c = spec.coeffs();
  for (Mask s = 0; s < c.size(); ++s)
    if (popcount(s) > k) c[s] = 0.0;

  MinDegreeSolution sol{FourierSpectrum(m, std::move(c)), k, std::nullopt, residual(k)};
  if (k > 0) {
    std::size_t cols = 0;
    for (Mask s = 0; s < spec.size(); ++s) cols += popcount(s) <= k - 1;
    sol.certificate = Certificate{k - 1, cols, cols, residual(k - 1)};
  }
  return sol;
}

MinDegreeSolution MinDegreeSolver::Impl::solve_general(std::span<const double> y) const {
  Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  const double thr = kConsistencyRelTol * (1.0 + yv.norm());
  std::optional<Certificate> prev;
  for (int k = 0; k <= m; ++k) {
    const Level& lvl = level(k);
    const Eigen::VectorXd c = lvl.cod.solve(yv);
    const double res = (lvl.a * c - yv).norm();
    if (res <= thr) {
      std::vector<double> coeffs(std::size_t{1} << m, 0.0);
      for (std::size_t j = 0; j < lvl.masks.size(); ++j) coeffs[lvl.masks[j]] = c(static_cast<Eigen::Index>(j));
      return MinDegreeSolution{FourierSpectrum(m, std::move(coeffs)), k, prev, res};
    }
    prev = Certificate{k, lvl.masks.size(), static_cast<std::size_t>(lvl.cod.rank()), res};
  }
  // All 2^m parities span every function on the cube.
  throw InternalError("min-degree search found no consistent degree");
}

MinDegreeSolution MinDegreeSolver::solve(std::span<const double> labels) const {
  if (labels.size() != impl_->points.size()) throw DimensionError("label count does not match support size");
  for (double v : labels)
    if (!std::isfinite(v)) throw ValidationError("label is not finite");
  return impl_->orthogonal ? impl_->solve_orthogonal(labels) : impl_->solve_general(labels);
}

MinDegreeSolution min_degree_solve(int m, std::span<const Mask> points, std::span<const double> labels) {
  if (points.size() != labels.size()) throw DimensionError("points and labels differ in length");
  std::map<Mask, double> merged;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto [it, fresh] = merged.emplace(points[i], labels[i]);
    if (!fresh && it->second != labels[i])
      throw ValidationError("support point " + std::to_string(points[i]) + " carries conflicting labels");
  }
  std::vector<Mask> pts;
  std::vector<double> y;
  for (const auto& [p, v] : merged) {
    pts.push_back(p);
    y.push_back(v);
  }
  return MinDegreeSolver(m, std::move(pts)).solve(y);
}

const MinDegreeSolver& solver_for(const ModelPtr& model) {
  static std::mutex mu;
  static std::map<const GenerationModel*, std::pair<ModelPtr, std::shared_ptr<MinDegreeSolver>>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(model.get());
  if (it == cache.end()) {
    std::vector<Mask> pts;
    for (const auto& p : model->support_points()) pts.push_back(p.x);
    auto solver = std::make_shared<MinDegreeSolver>(model->m(), std::move(pts));
    it = cache.emplace(model.get(), std::make_pair(model, std::move(solver))).first;
  }
  return *it->second.second;
}

MinDegreeSolution min_degree_solve(const SupportedTask& task) {
  if (!task.model) throw ValidationError("task has no model");
  return solver_for(task.model).solve(task.labels);
}

// ---------------------------------------------------------------- hamming

FourierSpectrum hamming_extension(int d, int r, std::span<const double> labels) {
  TruthTable::check_dim(d);
  if (r < 0 || r > d) throw DimensionError("hamming radius out of range");
  const std::size_t n = ball_size(d, r);
  if (n > 4096) throw CapacityError("hamming system too large");
  if (labels.size() != n)
    throw DimensionError("hamming extension needs " + std::to_string(n) + " labels, got " +
                         std::to_string(labels.size()));

  std::vector<Mask> rows;
  for (Mask z = 0; z < (Mask{1} << d); ++z)
    if (popcount(z) <= r) rows.push_back(z);
  const auto cols = masks_up_to_degree(d, r);

  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parity_sign(cols[j], rows[i]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible())
    throw InternalError("hamming system for d=" + std::to_string(d) + ", r=" + std::to_string(r) + " is singular");
  Eigen::Map<const Eigen::VectorXd> y(labels.data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXd c = lu.solve(y);

  std::vector<double> coeffs(std::size_t{1} << d, 0.0);
  for (std::size_t j = 0; j < n; ++j) coeffs[cols[j]] = c(static_cast<Eigen::Index>(j));
  return FourierSpectrum(d, std::move(coeffs));
}

// ---------------------------------------------------------------- realizations

Realization::Realization(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw DimensionError("realization needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.outputs.empty()) throw DimensionError("layer " + std::to_string(i + 1) + " has no outputs");
    for (const auto& t : l.outputs)
      if (t.n() != l.in_dim) throw DimensionError("layer " + std::to_string(i + 1) + " output has wrong arity");
    if (i + 1 < layers_.size() && static_cast<std::size_t>(l.in_dim) != layers_[i + 1].outputs.size())
      throw DimensionError("layer " + std::to_string(i + 1) + " expects " + std::to_string(l.in_dim) +
                           " inputs but layer " + std::to_string(i + 2) + " produces " +
                           std::to_string(layers_[i + 1].outputs.size()));
  }
}

std::vector<double> Realization::evaluate(Mask x) const {
  Mask cur = x;
  std::vector<double> vals;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    vals.clear();
    for (const auto& t : layers_[li].outputs) vals.push_back(t[cur]);
    if (li == 0) break;
    cur = 0;
    for (std::size_t j = 0; j < vals.size(); ++j) {
      if (std::abs(vals[j] + 1.0) <= 1e-6) cur |= Mask{1} << j;
      else if (std::abs(vals[j] - 1.0) > 1e-6)
        throw ValidationError("intermediate layer value is not +-1");
    }
  }
  return vals;
}

bool Realization::reproduces(const SupportedTask& task, double tol) const {
  if (input_dim() != task.model->m() || output_dim() != 1) return false;
  const auto& pts = task.model->support_points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (std::abs(evaluate(pts[i].x)[0] - task.labels[i]) > tol) return false;
  return true;
}

int realization_degree(const Realization& r, DegreeTolerance tol) {
  int total = 0;
  for (const auto& l : r.layers()) total += multi_degree(l.outputs, tol);
  return total;
}

// ---------------------------------------------------------------- conditional degree

ConditionalDegree conditional_degree_parts(const SupportedTask& task, std::span<const TruthTable> phi) {
  const auto& model = *task.model;
  if (!model.support().is_full())
    throw RefusalError("conditional degree is only defined here for the full latent support");
  if (phi.size() != static_cast<std::size_t>(model.d()))
    throw DimensionError("Phi must have d = " + std::to_string(model.d()) + " outputs");
  for (const auto& t : phi)
    if (t.n() != model.m()) throw DimensionError("Phi components must be over m coordinates");

  const std::size_t cube = std::size_t{1} << model.d();
  std::vector<double> g(cube, 0.0);
  std::vector<bool> hit(cube, false);
  const auto& pts = model.support_points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Mask t = 0;
    for (std::size_t j = 0; j < phi.size(); ++j) {
      const double v = phi[j][pts[i].x];
      if (std::abs(v + 1.0) <= 1e-6) t |= Mask{1} << j;
      else if (std::abs(v - 1.0) > 1e-6) throw RefusalError("Phi o psi does not map into the latent cube");
    }
    if (hit[t]) throw RefusalError("Phi o psi is not a bijection of the latent cube");
    hit[t] = true;
    g[t] = task.labels[i];
  }
  return ConditionalDegree{min_degree_solve(task).degree, degree(TruthTable(model.d(), std::move(g)))};
}

int conditional_degree(const SupportedTask& task, std::span<const TruthTable> phi) {
  return conditional_degree_parts(task, phi).value();
}

InverseRepresentation min_degree_inverse(const ModelPtr& model) {
  InverseRepresentation inv;
  const auto& solver = solver_for(model);
  for (int j = 1; j <= model->d(); ++j) {
    std::vector<double> y;
    for (const auto& p : model->support_points()) y.push_back(coordinate_value(p.z, j));
    auto sol = solver.solve(y);
    inv.total_degree += sol.degree;
    inv.tables.push_back(inverse_wht(sol.spectrum));
    inv.coords.push_back(std::move(sol));
  }
  return inv;
}

bool corollary_membership_check(const SupportedTask& task) {
  if (!task.model->support().is_full()) throw RefusalError("corollary check needs the full latent support");
  const auto inv = min_degree_inverse(task.model);
  const auto parts = conditional_degree_parts(task, inv.tables);
  return parts.value() <= 0 || parts.latent_degree <= task.model->d() - 1;
}

}  // namespace wmlab
