#include "wmlab/transforms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <random>

#include "wmlab/errors.hpp"
#include "wmlab/seeding.hpp"

namespace wmlab {

// ---------------------------------------------------------------- bijections

CubeBijection::CubeBijection(int d, std::vector<Mask> perm) : d_(d), perm_(std::move(perm)) {
  TruthTable::check_dim(d);
  const std::size_t n = std::size_t{1} << d;
  if (perm_.size() != n) throw DimensionError("bijection needs " + std::to_string(n) + " entries");
  std::vector<bool> seen(n, false);
  for (Mask v : perm_) {
    if (v >= n || seen[v]) throw ValidationError("bijection table is not a permutation of point indices");
    seen[v] = true;
  }
}

CubeBijection CubeBijection::identity(int d) {
  TruthTable::check_dim(d);
  std::vector<Mask> p(std::size_t{1} << d);
  std::iota(p.begin(), p.end(), Mask{0});
  return CubeBijection(d, std::move(p));
}

CubeBijection CubeBijection::from_components(std::span<const TruthTable> comps) {
  const int d = static_cast<int>(comps.size());
  TruthTable::check_dim(d);
  std::vector<Mask> p(std::size_t{1} << d, 0);
  for (int i = 0; i < d; ++i) {
    if (comps[i].n() != d) throw DimensionError("bijection component is not over d coordinates");
    if (!comps[i].is_boolean()) throw ValidationError("bijection component is not +-1 valued");
    for (Mask z = 0; z < p.size(); ++z)
      if (comps[i][z] < 0) p[z] |= Mask{1} << i;
  }
  return CubeBijection(d, std::move(p));
}

CubeBijection CubeBijection::inverse() const {
  std::vector<Mask> inv(perm_.size());
  for (Mask z = 0; z < perm_.size(); ++z) inv[perm_[z]] = z;
  return CubeBijection(d_, std::move(inv));
}

CubeBijection CubeBijection::compose(const CubeBijection& inner) const {
  if (inner.d_ != d_) throw DimensionError("composing bijections of different dimension");
  std::vector<Mask> p(perm_.size());
  for (Mask z = 0; z < p.size(); ++z) p[z] = perm_[inner.perm_[z]];
  return CubeBijection(d_, std::move(p));
}

TruthTable CubeBijection::component(int i) const {
  if (i < 1 || i > d_) throw DimensionError("component index out of range");
  return TruthTable::from_function(d_, [&](Mask z) { return double(coordinate_value(perm_[z], i)); });
}

std::vector<TruthTable> CubeBijection::components() const {
  std::vector<TruthTable> out;
  for (int i = 1; i <= d_; ++i) out.push_back(component(i));
  return out;
}

SignedPermutation::SignedPermutation(std::vector<int> p, std::vector<int> s) : perm(std::move(p)), signs(std::move(s)) {
  if (perm.size() != signs.size()) throw DimensionError("signed permutation: perm and signs differ in length");
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i) + 1) throw ValidationError("signed permutation: perm is not a permutation of 1..d");
  for (int v : signs)
    if (v != 1 && v != -1) throw ValidationError("signed permutation: signs must be +-1");
}

CubeBijection SignedPermutation::to_bijection() const {
  const int n = d();
  std::vector<Mask> p(std::size_t{1} << n);
  for (Mask z = 0; z < p.size(); ++z) {
    Mask out = 0;
    for (int i = 0; i < n; ++i)
      if (signs[i] * coordinate_value(z, perm[i]) < 0) out |= Mask{1} << i;
    p[z] = out;
  }
  return CubeBijection(n, std::move(p));
}

std::vector<SignedPermutation> enumerate_signed_permutations(int d) {
  if (d < 1 || d > 8) throw CapacityError("signed permutation enumeration supports 1 <= d <= 8");
  std::vector<SignedPermutation> out;
  std::vector<int> p(static_cast<std::size_t>(d));
  std::iota(p.begin(), p.end(), 1);
  do {
    for (Mask s = 0; s < (Mask{1} << d); ++s) {
      std::vector<int> signs(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) signs[i] = coordinate_value(s, i + 1);
      out.emplace_back(p, std::move(signs));
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

TruthTable compose_with(const TruthTable& h, const CubeBijection& t) {
  if (h.n() != t.d()) throw DimensionError("compose_with: dimension mismatch");
  return TruthTable::from_function(h.n(), [&](Mask z) { return h[t(z)]; });
}

// ---------------------------------------------------------------- degree tests

int integer_degree(std::span<const int> values, int n) {
  if (n <= kSmallDim) return small_degree(values, n);
  std::vector<double> v(values.begin(), values.end());
  return degree(TruthTable(n, std::move(v)));
}

std::vector<int> parity_composition_degrees(const CubeBijection& t) {
  const std::size_t n = std::size_t{1} << t.d();
  std::vector<int> out(n), vals(n);
  for (Mask s = 0; s < n; ++s) {
    for (Mask z = 0; z < n; ++z) vals[z] = parity_sign(s, t(z));
    out[s] = integer_degree(vals, t.d());
  }
  return out;
}

bool is_degree_one(const CubeBijection& t) {
  const std::size_t n = std::size_t{1} << t.d();
  std::vector<int> vals(n);
  for (int i = 1; i <= t.d(); ++i) {
    for (Mask z = 0; z < n; ++z) vals[z] = coordinate_value(t(z), i);
    if (integer_degree(vals, t.d()) != 1) return false;
  }
  return true;
}

bool is_degree_one_by_influence(const CubeBijection& t, int k) {
  const int d = t.d();
  if (k < 1 || k > std::max(1, d - 1)) throw DimensionError("influence criterion needs 1 <= k <= max(1, d-1)");
  // influenced[i] = bitmask of outputs j with Inf_i(T_j) > 0
  std::vector<Mask> influenced(static_cast<std::size_t>(d), 0);
  const auto comps = t.components();
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      if (flip_influence(comps[j], i + 1) > 0) influenced[i] |= Mask{1} << j;
  for (Mask s = 0; s < (Mask{1} << d); ++s) {
    if (popcount(s) != k) continue;
    Mask reach = 0;
    for (int i = 0; i < d; ++i)
      if ((s >> i) & 1u) reach |= influenced[i];
    if (popcount(reach) != k) return false;
  }
  return true;
}

bool preserves_Fk(const CubeBijection& t, int k) {
  if (k < 1 || k > t.d()) throw DimensionError("preserves_Fk needs 1 <= k <= d");
  const auto degs = parity_composition_degrees(t);
  for (Mask s = 0; s < degs.size(); ++s)
    if (popcount(s) <= k && degs[s] > k) return false;
  return true;
}

// ---------------------------------------------------------------- basis transforms

BasisTransform BasisTransform::identity(int m) {
  TruthTable::check_dim(m);
  std::vector<Mask> sigma(std::size_t{1} << m);
  std::iota(sigma.begin(), sigma.end(), Mask{0});
  return parity_permutation(m, std::move(sigma));
}

BasisTransform BasisTransform::parity_permutation(int m, std::vector<Mask> sigma) {
  TruthTable::check_dim(m);
  const std::size_t n = std::size_t{1} << m;
  if (sigma.size() != n) throw DimensionError("parity permutation needs 2^m entries");
  BasisTransform u;
  u.m_ = m;
  u.form_ = Form::ParityPermutation;
  u.sigma_inv_.assign(n, 0);
  std::vector<bool> seen(n, false);
  for (Mask s = 0; s < n; ++s) {
    if (sigma[s] >= n || seen[sigma[s]]) throw ValidationError("sigma is not a permutation of subset masks");
    seen[sigma[s]] = true;
    u.sigma_inv_[sigma[s]] = s;
  }
  u.sigma_ = std::move(sigma);
  return u;
}

BasisTransform BasisTransform::matrix(int m, std::vector<double> row_major) {
  if (m > 12) throw CapacityError("dense basis transforms support m <= 12");
  TruthTable::check_dim(m);
  const auto n = static_cast<Eigen::Index>(1) << m;
  if (row_major.size() != static_cast<std::size_t>(n * n)) throw DimensionError("basis matrix needs 4^m entries");
  Eigen::MatrixXd a = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      row_major.data(), n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw ValidationError("basis transform matrix is singular");
  Eigen::MatrixXd inv = lu.inverse();

  BasisTransform u;
  u.m_ = m;
  u.form_ = Form::GeneralLinear;
  u.condition_ = a.lpNorm<1>() * inv.lpNorm<1>();
  u.fwd_.assign(a.data(), a.data() + n * n);
  u.inv_.assign(inv.data(), inv.data() + n * n);
  return u;
}

FourierSpectrum BasisTransform::apply(const FourierSpectrum& f) const {
  if (f.n() != m_) throw DimensionError("basis transform dimension mismatch");
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (form_ == Form::ParityPermutation) {
    for (Mask s = 0; s < n; ++s) out[sigma_[s]] = f[s];
  } else {
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) out[r] += fwd_[c * n + r] * f[static_cast<Mask>(c)];
  }
  return FourierSpectrum(m_, std::move(out));
}

FourierSpectrum BasisTransform::image_of_parity(Mask s) const {
  const std::size_t n = std::size_t{1} << m_;
  std::vector<double> out(n, 0.0);
  if (form_ == Form::ParityPermutation) out[sigma_[s]] = 1.0;
  else std::copy_n(fwd_.begin() + static_cast<std::ptrdiff_t>(s * n), n, out.begin());
  return FourierSpectrum(m_, std::move(out));
}

FourierSpectrum BasisTransform::preimage_of_parity(Mask s) const {
  const std::size_t n = std::size_t{1} << m_;
  std::vector<double> out(n, 0.0);
  if (form_ == Form::ParityPermutation) out[sigma_inv_[s]] = 1.0;
  else std::copy_n(inv_.begin() + static_cast<std::ptrdiff_t>(s * n), n, out.begin());
  return FourierSpectrum(m_, std::move(out));
}

std::vector<int> preimage_degrees(const BasisTransform& u, DegreeTolerance tol) {
  std::vector<int> out(std::size_t{1} << u.m());
  for (Mask s = 0; s < out.size(); ++s) {
    if (u.form() == BasisTransform::Form::ParityPermutation) {
      out[s] = popcount(u.sigma_inverse()[s]);
    } else {
      out[s] = degree(u.preimage_of_parity(s), tol);
    }
  }
  return out;
}

int deg_under_basis(const TruthTable& f, const BasisTransform& u, DegreeTolerance tol) {
  if (f.n() != u.m()) throw DimensionError("deg_under_basis: dimension mismatch");
  const auto spec = wht(f);
  const double thr = tol.threshold(spec.coeffs());
  const auto pre = preimage_degrees(u, tol);
  int deg = 0;
  for (Mask s = 0; s < spec.size(); ++s)
    if (std::abs(spec[s]) > thr) deg = std::max(deg, pre[s]);
  return deg;
}

bool is_compatible(const BasisTransform& u, DegreeTolerance tol) {
  for (Mask s = 0; s < (Mask{1} << u.m()); ++s)
    if (degree(u.image_of_parity(s), tol) != popcount(s)) return false;
  return true;
}

// ---------------------------------------------------------------- enumeration

BijectionStream BijectionStream::full(int d) {
  if (d < 1) throw DimensionError("bijection enumeration needs d >= 1");
  if (d > 3)
    throw CapacityError("full bijection enumeration is limited to d <= 3 ((2^d)! items); use sampled mode");
  BijectionStream s;
  s.d_ = d;
  s.exhaustive_ = true;
  std::size_t f = 1;
  for (std::size_t i = 2; i <= (std::size_t{1} << d); ++i) f *= i;
  s.size_ = f;
  return s;
}

BijectionStream BijectionStream::sampled(int d, std::size_t samples, std::uint64_t seed) {
  if (d < 1) throw DimensionError("bijection enumeration needs d >= 1");
  BijectionStream s;
  s.d_ = d;
  s.exhaustive_ = false;
  s.seed_ = seed;
  s.signed_ = enumerate_signed_permutations(d);
  s.size_ = s.signed_.size() + samples;
  return s;
}

CubeBijection BijectionStream::at(std::size_t i) const {
  if (i >= size_) throw DimensionError("bijection stream index out of range");
  const std::size_t n = std::size_t{1} << d_;
  if (exhaustive_) {
    // Lehmer-code unranking in lexicographic order.
    std::vector<Mask> pool(n);
    std::iota(pool.begin(), pool.end(), Mask{0});
    std::vector<std::size_t> fact(n, 1);
    for (std::size_t j = 1; j < n; ++j) fact[j] = fact[j - 1] * j;
    std::vector<Mask> p;
    std::size_t rest = i;
    for (std::size_t j = n; j-- > 0;) {
      const std::size_t q = rest / fact[j];
      rest %= fact[j];
      p.push_back(pool[q]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(q));
    }
    return CubeBijection(d_, std::move(p));
  }
  if (i < signed_.size()) return signed_[i].to_bijection();
  std::vector<Mask> p(n);
  std::iota(p.begin(), p.end(), Mask{0});
  std::mt19937_64 rng(derive_seed(seed_, i));
  std::shuffle(p.begin(), p.end(), rng);
  return CubeBijection(d_, std::move(p));
}

void BijectionStream::advance(std::vector<Mask>& p) { std::next_permutation(p.begin(), p.end()); }

BijectionStream enumerate_bijections(int d, bool full, std::size_t samples, std::uint64_t seed) {
  return full ? BijectionStream::full(d) : BijectionStream::sampled(d, samples, seed);
}

}  // namespace wmlab
