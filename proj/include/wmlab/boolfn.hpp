#pragma once

// Real-valued functions on the cube {+1,-1}^n and their Walsh spectra.
//
// Point index convention: bit j of the index is 0 when x_{j+1} = +1 and 1 when
// x_{j+1} = -1. Subset masks use the same bit positions (bit j <=> j+1 in S),
// so chi_S(x) = (-1)^popcount(S & x).

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wmlab {

inline constexpr int kMaxCubeDim = 20;

using Mask = std::uint32_t;

inline int popcount(Mask s) { return std::popcount(s); }

// chi_S evaluated at the point with index x.
inline int parity_sign(Mask s, Mask x) { return (std::popcount(s & x) & 1) ? -1 : 1; }

// x_{coord} at point index x, coord is 1-based.
inline int coordinate_value(Mask x, int coord) { return ((x >> (coord - 1)) & 1u) ? -1 : 1; }

class TruthTable {
 public:
  TruthTable() = default;
  TruthTable(int n, std::vector<double> values);

  static TruthTable constant(int n, double c);
  static TruthTable parity(int n, Mask s, double scale = 1.0);

  template <class F>
  static TruthTable from_function(int n, F&& f) {
    check_dim(n);
    std::vector<double> v(std::size_t{1} << n);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(static_cast<Mask>(i));
    return TruthTable(n, std::move(v));
  }

  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  // True when every entry is exactly +1 or -1.
  bool is_boolean() const;

  static void check_dim(int n);

 private:
  int n_ = 0;
  std::vector<double> values_;
};

class FourierSpectrum {
 public:
  FourierSpectrum() = default;
  FourierSpectrum(int n, std::vector<double> coeffs);

  int n() const { return n_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](Mask s) const { return coeffs_[s]; }
  const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  int n_ = 0;
  std::vector<double> coeffs_;
};

// A coefficient c counts as zero iff |c| <= eps * max(1, max_S |f^(S)|).
struct DegreeTolerance {
  static constexpr double kDefaultEps = 1e-9;
  double eps = kDefaultEps;

  double threshold(std::span<const double> coeffs) const;
};

FourierSpectrum wht(const TruthTable& table);
TruthTable inverse_wht(const FourierSpectrum& spec);

// In-place unnormalized butterfly; exposed for hot loops that reuse a buffer.
void wht_inplace(std::span<double> data);

// Degree of the zero function is 0 by convention.
int degree(const FourierSpectrum& spec, DegreeTolerance tol = {});
int degree(const TruthTable& table, DegreeTolerance tol = {});
int multi_degree(std::span<const TruthTable> tables, DegreeTolerance tol = {});

// Degree of the function whose values fill `buf` (length 2^n); the buffer is
// overwritten with its unnormalized spectrum.
int degree_inplace(std::span<double> buf, DegreeTolerance tol = {});

// Exact degree of a +-1 or small-integer valued table of size <= 2^kSmallDim,
// computed in integer arithmetic. Used by the exhaustive searches.
inline constexpr int kSmallDim = 5;
int small_degree(std::span<const int> values, int n);

double influence(const TruthTable& table, int coord);
// Pr_x[f(x) != f(x with coord flipped)]; requires a +-1 valued table.
double flip_influence(const TruthTable& table, int coord);

double inner_product(const TruthTable& f, const TruthTable& g);

// "{1,2}" style rendering of a subset mask.
std::string format_subset(Mask s);
std::vector<int> mask_to_coords(Mask s);
Mask coords_to_mask(std::span<const int> coords, int n);

// Nonzero terms as "coeff*x1x2" strings, ordered by (|S|, mask).
std::vector<std::string> monomial_listing(const FourierSpectrum& spec, char var = 'x',
                                          DegreeTolerance tol = {});

// All masks over n coordinates with |S| <= k ordered by (|S|, mask).
std::vector<Mask> masks_up_to_degree(int n, int k);

// sum_{i<=r} C(n, i)
std::size_t ball_size(int n, int r);

}  // namespace wmlab
