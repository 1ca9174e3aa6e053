#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "wmlab/errors.hpp"
#include "wmlab/minsolve.hpp"

using namespace wmlab;

namespace {

ModelPtr make(ModelSpec s) { return std::make_shared<const GenerationModel>(std::move(s)); }

ModelSpec random_parity_model(int d, std::mt19937_64& rng, SupportSpec support) {
  std::uniform_int_distribution<Mask> pick(1, (Mask{1} << d) - 1);
  for (;;) {
    ModelSpec s;
    s.name = "rand";
    s.d = s.m = d;
    s.support = support;
    for (int i = 0; i < d; ++i) s.parities.push_back({pick(rng), 1});
    if (validate(s).ok) return s;
  }
}

// Smallest k with labels in the span of {chi_S : |S| <= k} restricted to the points,
// decided by a Householder QR instead of the solver's factorization.
int oracle_min_degree(int m, const std::vector<Mask>& pts, const std::vector<double>& y) {
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  for (int k = 0; k <= m; ++k) {
    const auto masks = masks_up_to_degree(m, k);
    Eigen::MatrixXd a(pts.size(), masks.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < masks.size(); ++j) a(i, j) = parity_sign(masks[j], pts[i]);
    const Eigen::VectorXd c = a.fullPivHouseholderQr().solve(b);
    if ((a * c - b).norm() <= 1e-8 * (1 + b.norm())) return k;
  }
  return -1;
}

double eval(const FourierSpectrum& s, Mask x) {
  double v = 0;
  for (std::size_t t = 0; t < s.size(); ++t) v += s[Mask(t)] * parity_sign(Mask(t), x);
  return v;
}

}  // namespace

TEST_CASE("Hamming extension in d=2, r=1 matches the hand solution") {
  // f = c0 + c1 z1 + c2 z2 on (+,+), (-,+), (+,-): c1 = (a-b)/2, c2 = (a-c)/2, c0 = (b+c)/2.
  const std::vector<double> y{0.7, -0.3, 1.9};
  const auto s = hamming_extension(2, 1, y);
  CHECK(s[0b00] == doctest::Approx((y[1] + y[2]) / 2));
  CHECK(s[0b01] == doctest::Approx((y[0] - y[1]) / 2));
  CHECK(s[0b10] == doctest::Approx((y[0] - y[2]) / 2));
  CHECK(s[0b11] == doctest::Approx(0.0));
}

TEST_CASE("chi_12 restricted to B_1 in d=3 extends to -1 + z1 + z2") {
  std::vector<double> y;
  for (Mask z = 0; z < 8; ++z)
    if (popcount(z) <= 1) y.push_back(parity_sign(0b011, z));
  const auto s = hamming_extension(3, 1, y);
  CHECK(s[0b000] == doctest::Approx(-1.0));
  CHECK(s[0b001] == doctest::Approx(1.0));
  CHECK(s[0b010] == doctest::Approx(1.0));
  for (Mask t : {0b100u, 0b011u, 0b101u, 0b110u, 0b111u}) CHECK(s[t] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Hamming extension systems are invertible for d <= 8, r <= 3") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int d = 1; d <= 8; ++d) {
    for (int r = 0; r <= std::min(3, d); ++r) {
      std::vector<Mask> pts;
      for (Mask z = 0; z < (Mask{1} << d); ++z)
        if (popcount(z) <= r) pts.push_back(z);
      std::vector<double> y(pts.size());
      for (auto& v : y) v = g(rng);
      FourierSpectrum s;
      REQUIRE_NOTHROW(s = hamming_extension(d, r, y));
      CHECK(degree(s) <= r);
      double err = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) err = std::max(err, std::abs(eval(s, pts[i]) - y[i]));
      CHECK(err < 1e-9);
    }
  }
}

TEST_CASE("full-support solve is the data-cube spectrum") {
  const auto model = make(table1_spec());
  const auto h = TruthTable::parity(10, 0b11001);  // x1 x4 x5
  const auto sol = min_degree_solve(SupportedTask::from_data_function(model, h));
  CHECK(sol.degree == 3);
  CHECK(sol.spectrum[0b11001] == doctest::Approx(1.0));
  REQUIRE(sol.certificate.has_value());
  CHECK(sol.certificate->tested_degree == 2);
  CHECK(sol.certificate->residual > kCertificateMinResidual);
}

TEST_CASE("min degree never exceeds d on the table1 model") {
  const auto model = make(table1_spec());
  std::mt19937_64 rng(22);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> y(1024);
    for (auto& v : y) v = coin(rng) ? 1.0 : -1.0;
    CHECK(min_degree_solve(SupportedTask::from_labels(model, y)).degree <= 10);
  }
}

TEST_CASE("min degree on B_2 in d=5 stays within ceil(log2 16) = 4") {
  std::mt19937_64 rng(23);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 50; ++t) {
    const auto model = make(random_parity_model(5, rng, SupportSpec::hamming(2)));
    std::vector<double> y(model->support_points().size());
    for (auto& v : y) v = coin(rng) ? 1.0 : -1.0;
    CHECK(y.size() == 16);
    CHECK(min_degree_solve(SupportedTask::from_labels(model, y)).degree <= 4);
  }
}

TEST_CASE("solver degree agrees with a QR oracle on random point sets") {
  std::mt19937_64 rng(24);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> g;
  for (int t = 0; t < 120; ++t) {
    const int m = 2 + t % 5;
    std::vector<Mask> pts;
    for (Mask x = 0; x < (Mask{1} << m); ++x)
      if (coin(rng)) pts.push_back(x);
    if (pts.empty()) pts.push_back(0);
    std::vector<double> y(pts.size());
    for (auto& v : y) v = (t % 2) ? g(rng) : (coin(rng) ? 1.0 : -1.0);
    const auto sol = min_degree_solve(m, pts, y);
    CHECK(sol.degree == oracle_min_degree(m, pts, y));
    double err = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) err = std::max(err, std::abs(eval(sol.spectrum, pts[i]) - y[i]));
    CHECK(err < 1e-8);
    CHECK(degree(sol.spectrum) == sol.degree);
  }
}

TEST_CASE("orthogonal and general routes agree") {
  std::mt19937_64 rng(25);
  std::normal_distribution<double> g;
  const auto model = make(random_parity_model(6, rng, SupportSpec::full()));
  std::vector<Mask> pts;
  for (const auto& p : model->support_points()) pts.push_back(p.x);
  MinDegreeSolver fast(6, pts);
  MinDegreeSolver general(6, pts);
  general.force_general_route();
  CHECK(fast.uses_orthogonal_route());
  CHECK_FALSE(general.uses_orthogonal_route());
  for (int t = 0; t < 30; ++t) {
    std::vector<double> y(pts.size());
    // low-degree latent function plus noise on a few tasks
    const Mask s = static_cast<Mask>(rng() & 63u);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = parity_sign(s, pts[i]) + (t % 3 == 0 ? 0.1 * g(rng) : 0.0);
    const auto a = fast.solve(y);
    const auto b = general.solve(y);
    CHECK(a.degree == b.degree);
    for (std::size_t k = 0; k < 64; ++k) CHECK(a.spectrum[Mask(k)] == doctest::Approx(b.spectrum[Mask(k)]).epsilon(1e-8));
  }
}

TEST_CASE("duplicate points merge, conflicting duplicates are rejected") {
  const std::vector<Mask> pts{0, 1, 1};
  const std::vector<double> same{1, -1, -1};
  CHECK(min_degree_solve(1, pts, same).degree == 1);
  const std::vector<double> clash{1, -1, 1};
  CHECK_THROWS_AS(min_degree_solve(1, pts, clash), ValidationError);
  const std::vector<double> short_labels{1};
  CHECK_THROWS(min_degree_solve(1, pts, short_labels));
}

TEST_CASE("table1 realization degrees") {
  const auto model = make(table1_spec());
  const auto task = SupportedTask::from_data_function(model, TruthTable::parity(10, 0b11001));
  // h o psi = z1 z5
  CHECK(degree(task.latent_table()) == 2);
  const Layer g{10, {task.latent_table()}};

  const auto inv = min_degree_inverse(model);
  std::vector<int> inv_deg;
  for (const auto& c : inv.coords) inv_deg.push_back(c.degree);
  CHECK(inv_deg == std::vector<int>{1, 2, 2, 2, 2, 3, 4, 4, 4, 4});
  CHECK(inv.total_degree == 28);

  const Realization world({g, Layer{10, inv.tables}});
  CHECK(world.reproduces(task));
  CHECK(realization_degree(world) == 30);

  // Summing the forward components instead gives the 40 + 2 bookkeeping.
  const Realization forward({g, Layer{10, model->component_tables()}});
  CHECK(realization_degree(forward) == 42);
  CHECK_FALSE(forward.reproduces(task));
}

TEST_CASE("conditional degree") {
  const auto model = make(table1_spec());
  const auto task = SupportedTask::from_data_function(model, TruthTable::parity(10, 0b11001));
  const auto inv = min_degree_inverse(model);
  const auto parts = conditional_degree_parts(task, inv.tables);
  CHECK(parts.task_degree == 3);
  CHECK(parts.latent_degree == 2);
  CHECK(parts.value() == 1);

  // Phi = identity on x: T = psi and h o psi o psi^{-1} = h.
  std::vector<TruthTable> id;
  for (int j = 0; j < 10; ++j) id.push_back(TruthTable::parity(10, Mask{1} << j));
  CHECK(conditional_degree(task, id) == 0);

  std::vector<TruthTable> collapsed(10, TruthTable::parity(10, 1));
  CHECK_THROWS_AS(conditional_degree(task, collapsed), RefusalError);

  const auto ball = make(model->with_support(SupportSpec::hamming(2)).spec());
  const auto ball_task = SupportedTask::from_data_function(ball, TruthTable::parity(10, 0b11001));
  CHECK_THROWS_AS(conditional_degree(ball_task, inv.tables), RefusalError);
}

TEST_CASE("corollary: positive conditional degree forces deg(h o psi) <= d - 1") {
  const auto model = make(table1_spec());
  std::mt19937_64 rng(26);
  for (int t = 0; t < 20; ++t) {
    const Mask s = static_cast<Mask>(rng() & 1023u);
    CHECK(corollary_membership_check(SupportedTask::from_data_function(model, TruthTable::parity(10, s))));
  }
}

TEST_CASE("solver capacity guard") {
  std::vector<Mask> pts{0};
  CHECK_THROWS_AS(MinDegreeSolver(kMaxSolveDim + 1, pts), CapacityError);
}
