#include <random>

#include "doctest.h"
#include "wmlab/errors.hpp"
#include "wmlab/theoremlab.hpp"

using namespace wmlab;

namespace {

ModelPtr make(ModelSpec s) { return std::make_shared<const GenerationModel>(std::move(s)); }

// Objective straight from the definition with floating-point degrees.
double objective_by_hand(const CubeBijection& t, const std::vector<double>& p) {
  const int d = t.d();
  const auto tinv = t.inverse();
  double total = 0;
  for (int k = 1; k <= d; ++k) {
    double sum = 0;
    int count = 0;
    for (Mask s : masks_up_to_degree(d, k)) {
      for (int sign : {1, -1}) {
        sum += degree(compose_with(TruthTable::parity(d, s, sign), tinv));
        ++count;
      }
    }
    total += p[k - 1] * sum / count;
  }
  return total;
}

ExecPolicy threads(int n) { return ExecPolicy{n}; }

}  // namespace

TEST_CASE("exact objective matches the definition") {
  const std::vector<double> p{0.2, 0.3, 0.5};
  const ObjectiveEvaluator eval(3, DegreeMixture::parse("0.2,0.3,0.5"), ObjectiveFamily::SignedParity);
  const auto s = BijectionStream::full(3);
  for (std::size_t i = 0; i < s.size(); i += 997) {
    const auto t = s.at(i);
    CHECK(eval.evaluate(t).value.convert_to<double>() == doctest::Approx(objective_by_hand(t, p)));
  }
}

TEST_CASE("frozen objective values at d=3") {
  const ObjectiveEvaluator zero_p1(3, DegreeMixture::parse("0,0.5,0.5"), ObjectiveFamily::SignedParity);
  CHECK(zero_p1.evaluate(CubeBijection::identity(3)).value == Rational(39, 28));
  CHECK(zero_p1.evaluate(example_c_bijection()).value == Rational(39, 28));
  const ObjectiveEvaluator k1(3, DegreeMixture::parse("1,0,0"), ObjectiveFamily::SignedParity);
  // constants have degree 0, the six +-z_i degree 1
  CHECK(k1.evaluate(CubeBijection::identity(3)).value == Rational(3, 4));
  CHECK(k1.evaluate(example_c_bijection()).value == Rational(5, 4));
}

TEST_CASE("argmin is the signed-permutation group when p_1 > 0") {
  const auto s2 = BijectionStream::full(2);
  const ObjectiveEvaluator e2(2, DegreeMixture::parse("0.6,0.4"), ObjectiveFamily::SignedParity);
  const auto a2 = objective_argmin(s2, e2, threads(2));
  CHECK(a2.total == 24);
  CHECK(a2.argmin.size() == 8);
  CHECK(a2.degree_one_in_argmin == 8);

  const auto s3 = BijectionStream::full(3);
  const ObjectiveEvaluator e3(3, DegreeMixture::parse("0.2,0.3,0.5"), ObjectiveFamily::SignedParity);
  const auto a3 = objective_argmin(s3, e3, threads(2));
  CHECK(a3.argmin.size() == 48);
  CHECK(a3.degree_one_total == 48);
  CHECK(a3.degree_one_in_argmin == 48);
}

TEST_CASE("with p_1 = 0 the argmin grows and contains example-c") {
  const auto s3 = BijectionStream::full(3);
  const ObjectiveEvaluator e(3, DegreeMixture::parse("0,0.5,0.5"), ObjectiveFamily::SignedParity);
  const auto a = objective_argmin(s3, e, threads(2));
  CHECK(a.argmin.size() == 192);
  CHECK(a.min_value == Rational(39, 28));
  bool has_c = false;
  for (std::size_t i : a.argmin) has_c |= s3.at(i) == example_c_bijection();
  CHECK(has_c);

  const auto rep = verify_world_model({3, DegreeMixture::parse("0,0.5,0.5"), true, 0, 0}, threads(2));
  CHECK_FALSE(rep.passed());
  CHECK(rep.status() == "fail");
}

TEST_CASE("swap basis objective and argmin") {
  const auto s3 = BijectionStream::full(3);
  const auto u = swap_basis(3, 2);
  const ObjectiveEvaluator e(3, DegreeMixture::parse("0.2,0.3,0.5"), ObjectiveFamily::SignedParity, u);
  CHECK(e.evaluate(CubeBijection::identity(3)).value == Rational(201, 140));
  const auto a = objective_argmin(s3, e, threads(2));
  CHECK(a.argmin.size() == 144);
  CHECK(a.min_value == Rational(187, 140));
  int min_worst = 99;
  for (std::size_t i : a.argmin) {
    int worst = 0;
    for (const auto& c : s3.at(i).inverse().components()) worst = std::max(worst, degree(c));
    min_worst = std::min(min_worst, worst);
  }
  CHECK(min_worst == 2);

  const auto rep = verify_basis_impact({3, DegreeMixture::parse("0.2,0.3,0.5"), 2}, threads(2));
  CHECK(rep.passed());
}

TEST_CASE("no free lunch over all +-1 functions") {
  for (int d : {2, 3}) {
    const auto rep = verify_no_free_lunch(d, threads(2));
    CHECK(rep.passed());
  }
  // The signed-parity family alone is not closed under composition, so its average moves.
  const ObjectiveEvaluator top(3, DegreeMixture::top_only(3), ObjectiveFamily::SignedParity);
  const auto spread = objective_argmin(BijectionStream::full(3), top, threads(2));
  CHECK(spread.argmin.size() < spread.total);
  const ObjectiveEvaluator all(3, DegreeMixture::top_only(3), ObjectiveFamily::AllBoolean);
  CHECK(all.evaluate(CubeBijection::identity(3)).value == all.evaluate(example_c_bijection()).value);
}

TEST_CASE("degree composition and the example-c extension search") {
  CHECK(verify_degree_composition({3, true, 0, 0}, threads(2)).passed());
  CHECK(verify_degree_composition({2, true, 0, 0}, threads(2)).passed());
  const auto ex = verify_example_counterexample(threads(2));
  CHECK(ex.passed());
  CHECK(ex.measured["bijective_candidates"] == 256);
}

TEST_CASE("single-task and multi-task inequalities") {
  SingleTaskOptions st;
  st.model = make(triple_parity_spec());
  CHECK(verify_single_task(st, threads(2)).passed());
  st.model = make(example_c_spec());
  st.trials = 50;
  st.seed = 3;
  CHECK(verify_single_task(st, threads(2)).passed());

  MultiTaskOptions mt;
  mt.model = make(table1_spec());
  mt.batches = 10;
  mt.seed = 4;
  CHECK(verify_multi_task_bound(mt, threads(2)).passed());

  CorollaryOptions co;
  co.model = make(table1_spec());
  co.samples = 30;
  co.seed = 2;
  CHECK(verify_corollary(co, threads(2)).passed());
}

TEST_CASE("table1 out-of-distribution example") {
  const auto model = make(table1_spec());
  const auto m = measure_ood(model, 2, TruthTable::parity(10, 0b11001));
  CHECK(m.ball == 56);
  CHECK(m.k == 6);
  CHECK(m.q == 3);
  CHECK(m.latent_degree == 2);
  CHECK(m.flat_degree == 2);
  CHECK(m.flat_mse == doctest::Approx(8.0));
  CHECK(m.world_mse < 1e-9);
  CHECK_FALSE(m.preconditions);
}

TEST_CASE("a d=4 instance that meets every precondition") {
  ModelSpec s;
  s.name = "d4";
  s.d = s.m = 4;
  s.parities = {{0b0010, 1}, {0b0100, 1}, {0b1000, 1}, {0b1111, 1}};
  const auto m = measure_ood(make(s), 1, TruthTable::parity(4, 0b1111));
  CHECK(m.preconditions);
  CHECK(m.flat_mse > 1.0);
  CHECK(m.flat_mse == doctest::Approx(14.0));
  CHECK(m.world_mse < 1e-9);
}

TEST_CASE("reports are identical across thread counts") {
  const auto a = verify_world_model({4, DegreeMixture::uniform(4), false, 500, 9}, threads(1)).to_json();
  const auto b = verify_world_model({4, DegreeMixture::uniform(4), false, 500, 9}, threads(8)).to_json();
  CHECK(a.dump() == b.dump());
  OodSearchOptions o;
  o.dims = {3};
  o.models_per_dim = 10;
  o.seed = 1;
  CHECK(ood_config_search(o, threads(1)).to_json().dump() == ood_config_search(o, threads(8)).to_json().dump());
}

TEST_CASE("report status") {
  VerificationReport r;
  r.check("a", true);
  CHECK(r.status() == "pass");
  r.conditions_met = false;
  CHECK(r.status() == "conditions not met");
  r.check("b", false);
  CHECK(r.status() == "fail");
  CHECK(r.to_json()["checks"].size() == 2);
}
