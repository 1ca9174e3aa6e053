#include "wmlab/boolfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "wmlab/errors.hpp"

namespace wmlab {

void TruthTable::check_dim(int n) {
  if (n < 0) throw DimensionError("cube dimension must be non-negative");
  if (n > kMaxCubeDim)
    throw CapacityError("cube dimension " + std::to_string(n) + " exceeds limit " +
                        std::to_string(kMaxCubeDim));
}

TruthTable::TruthTable(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  check_dim(n);
  if (values_.size() != (std::size_t{1} << n))
    throw DimensionError("truth table for n=" + std::to_string(n) + " needs " +
                         std::to_string(std::size_t{1} << n) + " values, got " +
                         std::to_string(values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw ValidationError("truth table entry " + std::to_string(i) + " is not finite");
}

TruthTable TruthTable::constant(int n, double c) {
  check_dim(n);
  return TruthTable(n, std::vector<double>(std::size_t{1} << n, c));
}

TruthTable TruthTable::parity(int n, Mask s, double scale) {
  return from_function(n, [&](Mask x) { return scale * parity_sign(s, x); });
}

bool TruthTable::is_boolean() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 1.0 || v == -1.0; });
}

FourierSpectrum::FourierSpectrum(int n, std::vector<double> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  TruthTable::check_dim(n);
  if (coeffs_.size() != (std::size_t{1} << n))
    throw DimensionError("spectrum for n=" + std::to_string(n) + " needs " +
                         std::to_string(std::size_t{1} << n) + " coefficients");
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw ValidationError("spectrum coefficient is not finite");
}

double DegreeTolerance::threshold(std::span<const double> coeffs) const {
  if (!(eps >= 0)) throw ValidationError("degree tolerance must be non-negative");
  double mx = 1.0;
  for (double c : coeffs) mx = std::max(mx, std::abs(c));
  return eps * mx;
}

void wht_inplace(std::span<double> data) {
  const std::size_t len = data.size();
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t i = 0; i < len; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = data[j];
        const double b = data[j + h];
        data[j] = a + b;
        data[j + h] = a - b;
      }
    }
  }
}

FourierSpectrum wht(const TruthTable& table) {
  std::vector<double> c = table.values();
  wht_inplace(c);
  const double scale = std::ldexp(1.0, -table.n());
  for (double& v : c) v *= scale;
  return FourierSpectrum(table.n(), std::move(c));
}

TruthTable inverse_wht(const FourierSpectrum& spec) {
  // The butterfly is its own inverse up to the 2^n factor, which the forward
  // direction already absorbed.
  std::vector<double> v = spec.coeffs();
  wht_inplace(v);
  return TruthTable(spec.n(), std::move(v));
}

int degree(const FourierSpectrum& spec, DegreeTolerance tol) {
  const double thr = tol.threshold(spec.coeffs());
  int deg = 0;
  for (std::size_t s = 0; s < spec.size(); ++s)
    if (std::abs(spec.coeffs()[s]) > thr) deg = std::max(deg, popcount(static_cast<Mask>(s)));
  return deg;
}

int degree(const TruthTable& table, DegreeTolerance tol) { return degree(wht(table), tol); }

int degree_inplace(std::span<double> buf, DegreeTolerance tol) {
  wht_inplace(buf);
  const double scale = 1.0 / static_cast<double>(buf.size());
  double mx = 1.0;
  for (double c : buf) mx = std::max(mx, std::abs(c) * scale);
  const double thr = tol.eps * mx;
  int deg = 0;
  for (std::size_t s = 0; s < buf.size(); ++s)
    if (std::abs(buf[s]) * scale > thr) deg = std::max(deg, popcount(static_cast<Mask>(s)));
  return deg;
}

int multi_degree(std::span<const TruthTable> tables, DegreeTolerance tol) {
  int total = 0;
  for (const auto& t : tables) {
    if (t.n() != tables.front().n()) throw DimensionError("multi_degree: tables have different n");
    total += degree(t, tol);
  }
  return total;
}

int small_degree(std::span<const int> values, int n) {
  if (n > kSmallDim || values.size() != (std::size_t{1} << n))
    throw DimensionError("small_degree: bad table size");
  std::array<int, std::size_t{1} << kSmallDim> c{};
  std::copy(values.begin(), values.end(), c.begin());
  const std::size_t len = values.size();
  for (std::size_t h = 1; h < len; h <<= 1)
    for (std::size_t i = 0; i < len; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const int a = c[j], b = c[j + h];
        c[j] = a + b;
        c[j + h] = a - b;
      }
  int deg = 0;
  for (std::size_t s = 0; s < len; ++s)
    if (c[s] != 0) deg = std::max(deg, popcount(static_cast<Mask>(s)));
  return deg;
}

static void check_coord(int n, int coord) {
  if (coord < 1 || coord > n)
    throw DimensionError("coordinate " + std::to_string(coord) + " out of range 1.." + std::to_string(n));
}

double influence(const TruthTable& table, int coord) {
  check_coord(table.n(), coord);
  const auto spec = wht(table);
  const Mask bit = Mask{1} << (coord - 1);
  double acc = 0.0;
  for (std::size_t s = 0; s < spec.size(); ++s)
    if (s & bit) acc += spec.coeffs()[s] * spec.coeffs()[s];
  return acc;
}

double flip_influence(const TruthTable& table, int coord) {
  check_coord(table.n(), coord);
  if (!table.is_boolean()) throw ValidationError("flip influence needs a +-1 valued table");
  const Mask bit = Mask{1} << (coord - 1);
  std::size_t changed = 0;
  for (std::size_t x = 0; x < table.size(); ++x)
    if (table[x] != table[x ^ bit]) ++changed;
  return static_cast<double>(changed) / static_cast<double>(table.size());
}

double inner_product(const TruthTable& f, const TruthTable& g) {
  if (f.n() != g.n()) throw DimensionError("inner_product: dimension mismatch");
  double acc = std::transform_reduce(f.values().begin(), f.values().end(), g.values().begin(), 0.0);
  return std::ldexp(acc, -f.n());
}

std::vector<int> mask_to_coords(Mask s) {
  std::vector<int> out;
  for (int j = 0; s >> j; ++j)
    if ((s >> j) & 1u) out.push_back(j + 1);
  return out;
}

Mask coords_to_mask(std::span<const int> coords, int n) {
  Mask s = 0;
  for (int c : coords) {
    check_coord(n, c);
    const Mask bit = Mask{1} << (c - 1);
    if (s & bit) throw ValidationError("subset lists coordinate " + std::to_string(c) + " twice");
    s |= bit;
  }
  return s;
}

std::string format_subset(Mask s) {
  std::string out = "{";
  bool first = true;
  for (int c : mask_to_coords(s)) {
    if (!first) out += ",";
    out += std::to_string(c);
    first = false;
  }
  return out + "}";
}

std::vector<Mask> masks_up_to_degree(int n, int k) {
  TruthTable::check_dim(n);
  std::vector<Mask> out;
  for (Mask s = 0; s < (Mask{1} << n); ++s)
    if (popcount(s) <= k) out.push_back(s);
  std::stable_sort(out.begin(), out.end(), [](Mask a, Mask b) { return popcount(a) < popcount(b); });
  return out;
}

std::size_t ball_size(int n, int r) {
  std::size_t total = 0, binom = 1;
  for (int i = 0; i <= std::min(r, n); ++i) {
    total += binom;
    binom = binom * static_cast<std::size_t>(n - i) / static_cast<std::size_t>(i + 1);
  }
  return total;
}

std::vector<std::string> monomial_listing(const FourierSpectrum& spec, char var, DegreeTolerance tol) {
  const double thr = tol.threshold(spec.coeffs());
  std::vector<std::string> out;
  for (Mask s : masks_up_to_degree(spec.n(), spec.n())) {
    const double c = spec[s];
    if (std::abs(c) <= thr) continue;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", c);
    std::string term = buf;
    if (s != 0) {
      term += "*";
      for (int j : mask_to_coords(s)) term += var + std::to_string(j);
    }
    out.push_back(std::move(term));
  }
  return out;
}

}  // namespace wmlab
