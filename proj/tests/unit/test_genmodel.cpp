#include <random>

#include "doctest.h"
#include "wmlab/errors.hpp"
#include "wmlab/genmodel.hpp"

using namespace wmlab;

namespace {

// psi straight from the signed-parity definition, one coordinate at a time.
std::vector<int> apply_by_hand(const ModelSpec& spec, const std::vector<int>& z) {
  std::vector<int> x;
  for (const auto& p : spec.parities) {
    int v = p.sign;
    for (int j = 0; j < spec.d; ++j)
      if (p.subset >> j & 1u) v *= z[j];
    x.push_back(v);
  }
  return x;
}

ModelSpec two_coordinate_model(std::vector<SignedParity> parities, int d, SupportSpec support = {}) {
  ModelSpec s;
  s.name = "t";
  s.d = d;
  s.m = static_cast<int>(parities.size());
  s.parities = std::move(parities);
  s.support = support;
  return s;
}

}  // namespace

TEST_CASE("table1 model is a bijection with the listed component degrees") {
  const auto v = validate(table1_spec());
  CHECK(v.ok);
  CHECK(v.support_size == 1024);
  CHECK(v.image_size == 1024);
  CHECK(v.component_degrees == std::vector<int>{1, 2, 3, 4, 5, 5, 5, 5, 5, 5});
}

TEST_CASE("table1 forward map matches the parity definition") {
  const auto spec = table1_spec();
  const GenerationModel model(spec);
  std::mt19937_64 rng(10);
  for (int t = 0; t < 200; ++t) {
    const Mask z = static_cast<Mask>(rng() & 1023u);
    const auto zs = signs_from_index(z, 10);
    const auto expect = apply_by_hand(spec, zs);
    CHECK(model.apply(zs) == expect);
    CHECK(model.apply(z) == index_from_signs(expect));
    CHECK(model.invert(model.apply(z)) == z);
  }
}

TEST_CASE("table1 preimage of the all -1 point") {
  const GenerationModel model(table1_spec());
  // Solved by hand: z1 = -1 and z6 = -1, every other coordinate +1.
  const auto z = model.invert(1023);
  REQUIRE(z.has_value());
  CHECK(*z == 33u);
  CHECK(signs_from_index(*z, 10) == std::vector<int>{-1, 1, 1, 1, 1, -1, 1, 1, 1, 1});
}

TEST_CASE("non-injective models are rejected with a collision") {
  const auto spec = two_coordinate_model({{0b01, 1}, {0b01, -1}}, 2);
  const auto v = validate(spec);
  CHECK_FALSE(v.ok);
  REQUIRE(v.collision.has_value());
  CHECK(v.collision->first != v.collision->second);
  CHECK_THROWS_AS(GenerationModel{spec}, ValidationError);
}

TEST_CASE("restricted support can make a map injective") {
  // x1 = z1 z2 collides on the full cube but B_1 in d=2 has 3 points.
  auto spec = two_coordinate_model({{0b11, 1}, {0b01, 1}}, 2, SupportSpec::hamming(1));
  CHECK(validate(spec).ok);
  const GenerationModel model(spec);
  CHECK(model.support_points().size() == 3);
  CHECK_FALSE(model.image_is_full_cube());
  // x = (-1,-1) comes from z = (-1,+1).
  CHECK(model.invert(0b11) == Mask{0b01});
  CHECK_FALSE(model.invert(0b10).has_value());
  spec.parities = {{0b11, 1}};
  spec.m = 1;
  CHECK_FALSE(validate(spec).ok);
}

TEST_CASE("support points are ordered by latent index") {
  const GenerationModel model(two_coordinate_model({{1, 1}, {2, 1}, {4, 1}}, 3, SupportSpec::hamming(2)));
  const auto& pts = model.support_points();
  CHECK(pts.size() == 7);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i - 1].z < pts[i].z);
  for (const auto& p : pts) CHECK(p.x == p.z);
}

TEST_CASE("table-specified components equal the parity form") {
  const auto par = example_c_spec();
  const GenerationModel a(par);
  ModelSpec tab;
  tab.name = "tables";
  tab.d = tab.m = 3;
  tab.tables = a.component_tables();
  const GenerationModel b(tab);
  for (Mask z = 0; z < 8; ++z) CHECK(a.apply(z) == b.apply(z));
  CHECK(validate(tab).component_degrees == std::vector<int>{1, 2, 2});
}

TEST_CASE("built-in names") {
  for (const auto& n : builtin_model_names()) CHECK(builtin_model_spec(n).has_value());
  CHECK_FALSE(builtin_model_spec("nope").has_value());
  const auto tp = validate(triple_parity_spec());
  CHECK(tp.ok);
  CHECK(tp.image_size == 4);
}

TEST_CASE("sign vectors") {
  const std::vector<int> bad{1, 0};
  CHECK_THROWS_AS(index_from_signs(bad), ValidationError);
  const std::vector<int> s{-1, 1, -1};
  CHECK(index_from_signs(s) == 0b101u);
}
