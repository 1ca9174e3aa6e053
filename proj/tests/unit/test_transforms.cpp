#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "wmlab/errors.hpp"
#include "wmlab/theoremlab.hpp"
#include "wmlab/transforms.hpp"

using namespace wmlab;

namespace {

bool is_signed_permutation_by_hand(const CubeBijection& t) {
  // Every output coordinate equals +-z_j for one j, and the j are distinct.
  const int d = t.d();
  std::set<int> used;
  for (int i = 1; i <= d; ++i) {
    int found = 0;
    for (int j = 1; j <= d; ++j) {
      bool plus = true, minus = true;
      for (Mask z = 0; z < (Mask{1} << d); ++z) {
        plus &= coordinate_value(t(z), i) == coordinate_value(z, j);
        minus &= coordinate_value(t(z), i) == -coordinate_value(z, j);
      }
      if (plus || minus) found = j;
    }
    if (!found || !used.insert(found).second) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("signed permutation counts") {
  CHECK(enumerate_signed_permutations(2).size() == 8);
  CHECK(enumerate_signed_permutations(3).size() == 48);
  CHECK(enumerate_signed_permutations(4).size() == 384);
  std::set<std::vector<Mask>> distinct;
  for (const auto& p : enumerate_signed_permutations(4)) distinct.insert(p.to_bijection().perm());
  CHECK(distinct.size() == 384);
}

TEST_CASE("full enumeration sizes and lexicographic order") {
  CHECK(BijectionStream::full(2).size() == 24);
  const auto s3 = BijectionStream::full(3);
  CHECK(s3.size() == 40320);
  CHECK_THROWS_AS(BijectionStream::full(4), CapacityError);

  std::vector<Mask> p(8);
  std::iota(p.begin(), p.end(), 0);
  std::size_t i = 0;
  bool all_match = true;
  do {
    all_match &= s3.at(i).perm() == p;
    ++i;
  } while (std::next_permutation(p.begin(), p.end()));
  CHECK(all_match);
  CHECK(i == 40320);
}

TEST_CASE("for_range visits the same bijections as at()") {
  const auto s = BijectionStream::full(3);
  bool same = true;
  s.for_range(1000, 1400, [&](std::size_t i, const CubeBijection& t) { same &= t == s.at(i); });
  CHECK(same);
}

TEST_CASE("sampled stream: signed prefix then seeded shuffles") {
  const auto a = BijectionStream::sampled(4, 50, 7);
  const auto b = BijectionStream::sampled(4, 50, 7);
  const auto c = BijectionStream::sampled(4, 50, 8);
  CHECK(a.size() == 384 + 50);
  CHECK(a.signed_prefix() == 384);
  for (std::size_t i = 0; i < 384; i += 37) CHECK(is_degree_one(a.at(i)));
  CHECK(a.at(400) == b.at(400));
  CHECK_FALSE(a.at(400) == c.at(400));
}

TEST_CASE("degree-one bijections at d=3 are exactly the signed permutations") {
  const auto s = BijectionStream::full(3);
  std::size_t spectral = 0, agree = 0;
  s.for_range(0, s.size(), [&](std::size_t, const CubeBijection& t) {
    const bool one = is_degree_one(t);
    spectral += one;
    agree += one == is_signed_permutation_by_hand(t) && one == is_degree_one_by_influence(t, 1) &&
             one == is_degree_one_by_influence(t, 2);
  });
  CHECK(spectral == 48);
  CHECK(agree == 40320);
}

TEST_CASE("composition, inverse and compose_with") {
  std::mt19937_64 rng(30);
  const auto s = BijectionStream::sampled(3, 20, 1);
  for (std::size_t i = 40; i < 60; ++i) {
    const auto t = s.at(i);
    const auto u = s.at(i - 30);
    CHECK(t.compose(t.inverse()) == CubeBijection::identity(3));
    for (Mask z = 0; z < 8; ++z) CHECK(t.compose(u)(z) == t(u(z)));
    const auto h = TruthTable::from_function(3, [&](Mask z) { return static_cast<double>(z * z) - 3.0; });
    const auto hc = compose_with(h, t);
    for (Mask z = 0; z < 8; ++z) CHECK(hc[z] == h[t(z)]);
    // components reproduce the permutation
    CHECK(CubeBijection::from_components(t.components()) == t);
  }
  CHECK_THROWS(CubeBijection(2, {0, 1, 1, 3}));
}

TEST_CASE("signed permutation semantics") {
  // T(z) = (-z3, z1, z2)
  const SignedPermutation sp({3, 1, 2}, {-1, 1, 1});
  const auto t = sp.to_bijection();
  for (Mask z = 0; z < 8; ++z) {
    CHECK(coordinate_value(t(z), 1) == -coordinate_value(z, 3));
    CHECK(coordinate_value(t(z), 2) == coordinate_value(z, 1));
    CHECK(coordinate_value(t(z), 3) == coordinate_value(z, 2));
  }
  CHECK_THROWS(SignedPermutation({1, 1}, {1, 1}));
}

TEST_CASE("parity composition degrees of example-c") {
  const auto t = example_c_bijection();
  const auto deg = parity_composition_degrees(t);
  // chi_S o T for T = (z1, z1z2, z1z3)
  CHECK(deg[0b001] == 1);
  CHECK(deg[0b010] == 2);
  CHECK(deg[0b100] == 2);
  CHECK(deg[0b011] == 1);  // z1 * z1z2 = z2
  CHECK(deg[0b101] == 1);
  CHECK(deg[0b110] == 2);  // z2 z3
  CHECK(deg[0b111] == 3);  // z1 z2 z3
  CHECK(preserves_Fk(t, 2));
  CHECK(preserves_Fk(t, 3));
  CHECK_FALSE(preserves_Fk(t, 1));
}

TEST_CASE("degree under a parity-permutation basis") {
  const auto u = swap_basis(3, 2);
  CHECK(u.sigma()[0b001] == 0b110);
  CHECK(u.sigma()[0b110] == 0b001);
  CHECK_FALSE(is_compatible(u));
  CHECK(is_compatible(compatible_nontrivial_basis(3)));
  CHECK(is_compatible(BasisTransform::identity(3)));

  // f = chi_{1} + chi_{123}: U^{-1} sends chi_1 to chi_23 and leaves chi_123 alone.
  const auto f = TruthTable::from_function(3, [](Mask z) { return parity_sign(0b001, z) + parity_sign(0b111, z); });
  CHECK(deg_under_basis(f, u) == 3);
  CHECK(deg_under_basis(TruthTable::parity(3, 0b001), u) == 2);
  CHECK(deg_under_basis(TruthTable::parity(3, 0b110), u) == 1);
  CHECK(deg_under_basis(f, BasisTransform::identity(3)) == 3);
}

TEST_CASE("general-matrix basis inverts and reports conditioning") {
  // U scales every parity by 2 and mixes chi_1 into chi_12.
  std::vector<double> a(16, 0.0);
  for (int i = 0; i < 4; ++i) a[i * 4 + i] = 2.0;
  a[0b01 * 4 + 0b11] = 1.0;  // row {1}, column {1,2}: U(chi_12) = 2 chi_12 + chi_1
  const auto u = BasisTransform::matrix(2, a);
  const auto img = u.image_of_parity(0b11);
  CHECK(img[0b11] == doctest::Approx(2.0));
  CHECK(img[0b01] == doctest::Approx(1.0));
  const auto back = u.apply(u.preimage_of_parity(0b11));
  for (Mask s = 0; s < 4; ++s) CHECK(back[s] == doctest::Approx(s == 0b11 ? 1.0 : 0.0));
  CHECK_FALSE(u.ill_conditioned());
  CHECK(is_compatible(u));

  std::vector<double> singular(16, 0.0);
  singular[0] = 1.0;
  CHECK_THROWS(BasisTransform::matrix(2, singular));
}
