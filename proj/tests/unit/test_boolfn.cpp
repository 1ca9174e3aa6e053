#include <cmath>
#include <random>

#include "doctest.h"
#include "wmlab/boolfn.hpp"
#include "wmlab/errors.hpp"

using namespace wmlab;

namespace {

// Direct definition: f^(S) = 2^-n sum_x f(x) chi_S(x).
std::vector<double> naive_wht(const TruthTable& f) {
  std::vector<double> c(f.size(), 0.0);
  for (std::size_t s = 0; s < f.size(); ++s) {
    for (std::size_t x = 0; x < f.size(); ++x) c[s] += f[x] * parity_sign(Mask(s), Mask(x));
    c[s] /= static_cast<double>(f.size());
  }
  return c;
}

TruthTable random_table(int n, std::mt19937_64& rng, bool boolean) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  return TruthTable::from_function(n, [&](Mask) { return boolean ? (coin(rng) ? 1.0 : -1.0) : u(rng); });
}

}  // namespace

TEST_CASE("max2 spectrum is (1/2, 1/2, 1/2, -1/2)") {
  // max(x1, x2) with +1 as the larger value: only x = (-1,-1) gives -1.
  const TruthTable max2(2, {1, 1, 1, -1});
  const auto s = wht(max2);
  CHECK(s[0b00] == 0.5);
  CHECK(s[0b01] == 0.5);
  CHECK(s[0b10] == 0.5);
  CHECK(s[0b11] == -0.5);
  CHECK(degree(s) == 2);
}

TEST_CASE("fast transform matches the defining sum") {
  std::mt19937_64 rng(1);
  for (int n = 0; n <= 7; ++n) {
    const auto f = random_table(n, rng, false);
    const auto fast = wht(f);
    const auto slow = naive_wht(f);
    for (std::size_t s = 0; s < f.size(); ++s) CHECK(fast[Mask(s)] == doctest::Approx(slow[s]).epsilon(1e-12));
  }
}

TEST_CASE("round trip and Parseval on random functions") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 12;
    const auto f = random_table(n, rng, false);
    const auto s = wht(f);
    const auto back = inverse_wht(s);
    double err = 0, energy_x = 0, energy_s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      err = std::max(err, std::abs(back[i] - f[i]));
      energy_x += f[i] * f[i];
      energy_s += s[Mask(i)] * s[Mask(i)];
    }
    CHECK(err < 1e-12);
    CHECK(std::abs(energy_x / static_cast<double>(f.size()) - energy_s) < 1e-9);
  }
}

TEST_CASE("degree of parities, constants and zero") {
  CHECK(degree(TruthTable::parity(5, 0b10110)) == 3);
  CHECK(degree(TruthTable::constant(4, 3.0)) == 0);
  CHECK(degree(TruthTable::constant(4, 0.0)) == 0);
  // A coefficient below the relative tolerance does not count.
  auto v = TruthTable::parity(3, 0b001).values();
  const auto tiny = TruthTable::parity(3, 0b111, 1e-12).values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += tiny[i];
  CHECK(degree(TruthTable(3, v)) == 1);
  CHECK(degree(TruthTable(3, v), DegreeTolerance{0.0}) == 3);
}

TEST_CASE("integer degree agrees with the floating-point degree") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= kSmallDim; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto f = random_table(n, rng, true);
      std::vector<int> iv(f.values().begin(), f.values().end());
      CHECK(small_degree(iv, n) == degree(f));
    }
  }
}

TEST_CASE("influence: Fourier formula equals flip probability") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 10;
    const auto f = random_table(n, rng, true);
    for (int i = 1; i <= n; ++i) {
      // brute force: count x with f(x) != f(x ^ e_i)
      std::size_t flips = 0;
      for (std::size_t x = 0; x < f.size(); ++x) flips += f[x] != f[x ^ (std::size_t{1} << (i - 1))];
      const double brute = static_cast<double>(flips) / static_cast<double>(f.size());
      CHECK(std::abs(influence(f, i) - brute) < 1e-9);
      CHECK(std::abs(flip_influence(f, i) - brute) < 1e-12);
    }
  }
}

TEST_CASE("majority of three has influence 1/2 per coordinate") {
  const auto maj = TruthTable::from_function(3, [](Mask x) {
    const int s = coordinate_value(x, 1) + coordinate_value(x, 2) + coordinate_value(x, 3);
    return s > 0 ? 1.0 : -1.0;
  });
  for (int i = 1; i <= 3; ++i) CHECK(influence(maj, i) == doctest::Approx(0.5));
  CHECK(degree(maj) == 3);
}

TEST_CASE("flip influence requires a +-1 table") {
  CHECK_THROWS_AS(flip_influence(TruthTable::constant(2, 0.5), 1), ValidationError);
  CHECK_THROWS_AS(influence(TruthTable::constant(2, 1.0), 3), DimensionError);
}

TEST_CASE("subset helpers") {
  CHECK(format_subset(0) == "{}");
  CHECK(format_subset(0b1011) == "{1,2,4}");
  CHECK(mask_to_coords(0b1011) == std::vector<int>{1, 2, 4});
  const std::vector<int> coords{4, 1};
  CHECK(coords_to_mask(coords, 4) == 0b1001);
  const std::vector<int> dup{2, 2};
  CHECK_THROWS_AS(coords_to_mask(dup, 4), ValidationError);
  const std::vector<int> out_of_range{5};
  CHECK_THROWS_AS(coords_to_mask(out_of_range, 4), DimensionError);

  const auto masks = masks_up_to_degree(3, 2);
  CHECK(masks == std::vector<Mask>{0, 1, 2, 4, 3, 5, 6});
  CHECK(ball_size(5, 2) == 16);
  CHECK(ball_size(10, 2) == 56);
  CHECK(ball_size(4, 9) == 16);
}

TEST_CASE("monomial listing of max2") {
  const auto terms = monomial_listing(wht(TruthTable(2, {1, 1, 1, -1})));
  CHECK(terms == std::vector<std::string>{"0.5", "0.5*x1", "0.5*x2", "-0.5*x1x2"});
}

TEST_CASE("table construction is validated") {
  CHECK_THROWS(TruthTable(2, {1, 1, 1}));
  CHECK_THROWS_AS(TruthTable::constant(kMaxCubeDim + 1, 1.0), CapacityError);
}
