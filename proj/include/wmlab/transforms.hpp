#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wmlab/boolfn.hpp"

namespace wmlab {

// Bijection of {+-1}^d as a permutation of point indices: T(z) = perm[z].
class CubeBijection {
 public:
  CubeBijection(int d, std::vector<Mask> perm);
  static CubeBijection identity(int d);
  // T_i given as d tables over {+-1}^d.
  static CubeBijection from_components(std::span<const TruthTable> comps);

  int d() const { return d_; }
  Mask operator()(Mask z) const { return perm_[z]; }
  const std::vector<Mask>& perm() const { return perm_; }

  CubeBijection inverse() const;
  // (this o inner)(z) = this(inner(z))
  CubeBijection compose(const CubeBijection& inner) const;

  TruthTable component(int i) const;  // 1-based
  std::vector<TruthTable> components() const;

  bool operator==(const CubeBijection&) const = default;

 private:
  int d_ = 0;
  std::vector<Mask> perm_;
};

// T(z)_i = signs[i] * z_{perm[i]}, perm is a 1-based permutation of [d].
struct SignedPermutation {
  std::vector<int> perm;
  std::vector<int> signs;

  SignedPermutation(std::vector<int> perm, std::vector<int> signs);
  int d() const { return static_cast<int>(perm.size()); }
  CubeBijection to_bijection() const;
};

// All 2^d * d! signed permutations: coordinate permutations in lexicographic
// order, sign patterns in binary order within each.
std::vector<SignedPermutation> enumerate_signed_permutations(int d);

// (h o T)(z) = h(T(z))
TruthTable compose_with(const TruthTable& h, const CubeBijection& t);

// Degree of a small integer-valued table (exact for d <= kSmallDim).
int integer_degree(std::span<const int> values, int n);

// deg(chi_S o T) for every mask S.
std::vector<int> parity_composition_degrees(const CubeBijection& t);

bool is_degree_one(const CubeBijection& t);
// Influence-pattern criterion: for every |S| = k, the outputs influenced by
// some i in S number exactly k. Uses flip influences, not the spectrum.
bool is_degree_one_by_influence(const CubeBijection& t, int k = 1);

bool preserves_Fk(const CubeBijection& t, int k);

class BasisTransform {
 public:
  enum class Form { ParityPermutation, GeneralLinear };

  static BasisTransform identity(int m);
  // U(chi_S) = chi_{sigma[S]}
  static BasisTransform parity_permutation(int m, std::vector<Mask> sigma);
  // Column S of `columns` (row-major 2^m x 2^m) is the spectrum of U(chi_S).
  static BasisTransform matrix(int m, std::vector<double> row_major);

  int m() const { return m_; }
  Form form() const { return form_; }
  const std::vector<Mask>& sigma() const { return sigma_; }
  const std::vector<Mask>& sigma_inverse() const { return sigma_inv_; }

  FourierSpectrum apply(const FourierSpectrum& f) const;
  FourierSpectrum image_of_parity(Mask s) const;     // U(chi_S)
  FourierSpectrum preimage_of_parity(Mask s) const;  // U^{-1}(chi_S)

  double condition_estimate() const { return condition_; }
  bool ill_conditioned() const { return condition_ > 1e12; }

 private:
  int m_ = 0;
  Form form_ = Form::ParityPermutation;
  std::vector<Mask> sigma_, sigma_inv_;
  std::vector<double> fwd_, inv_;  // column-major 2^m x 2^m
  double condition_ = 1.0;
};

// deg(U^{-1}(chi_S)) for every S.
std::vector<int> preimage_degrees(const BasisTransform& u, DegreeTolerance tol = {});
int deg_under_basis(const TruthTable& f, const BasisTransform& u, DegreeTolerance tol = {});
bool is_compatible(const BasisTransform& u, DegreeTolerance tol = {});

// Partitionable, index-addressable stream of bijections.
//   full:    all (2^d)! permutations in lexicographic order, d <= 3 only.
//   sampled: the signed-permutation subgroup first, then `samples` uniform
//            shuffles, sample i seeded by derive_seed(seed, i).
class BijectionStream {
 public:
  static inline constexpr std::size_t kDefaultSamples = 100000;

  static BijectionStream full(int d);
  static BijectionStream sampled(int d, std::size_t samples, std::uint64_t seed);

  int d() const { return d_; }
  bool exhaustive() const { return exhaustive_; }
  std::size_t size() const { return size_; }
  std::size_t signed_prefix() const { return signed_.size(); }
  std::uint64_t seed() const { return seed_; }

  CubeBijection at(std::size_t i) const;

  // Visits indices [begin, end) in order; cheaper than repeated at() in full mode.
  template <class F>
  void for_range(std::size_t begin, std::size_t end, F&& f) const {
    if (begin >= end) return;
    if (!exhaustive_) {
      for (std::size_t i = begin; i < end; ++i) f(i, at(i));
      return;
    }
    std::vector<Mask> p = at(begin).perm();
    for (std::size_t i = begin; i < end; ++i) {
      f(i, CubeBijection(d_, p));
      advance(p);
    }
  }

 private:
  static void advance(std::vector<Mask>& p);

  int d_ = 0;
  bool exhaustive_ = true;
  std::size_t size_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<SignedPermutation> signed_;
};

// Full stream for d <= 3 unless `force_sampled`; sampled stream otherwise.
// Asking for a full stream at d >= 4 is a capacity error.
BijectionStream enumerate_bijections(int d, bool full, std::size_t samples = BijectionStream::kDefaultSamples,
                                     std::uint64_t seed = 0);

}  // namespace wmlab
