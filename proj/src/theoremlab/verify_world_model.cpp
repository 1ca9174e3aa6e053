#include <algorithm>
#include <limits>
#include <random>

#include "wmlab/errors.hpp"
#include "wmlab/seeding.hpp"
#include "wmlab/theoremlab.hpp"

namespace wmlab {

namespace {

std::size_t signed_group_size(int d) {
  std::size_t n = std::size_t{1} << d;
  for (int i = 2; i <= d; ++i) n *= static_cast<std::size_t>(i);
  return n;
}

nlohmann::json histogram_json(const std::map<std::string, std::size_t>& h) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : h) j[k] = v;
  return j;
}

nlohmann::json rational_json(const Rational& q) { return {{"exact", to_string(q)}, {"value", static_cast<double>(q)}}; }

void check_mixture(const DegreeMixture& mix, int d) {
  if (mix.d() != d)
    throw ValidationError("mixture has " + std::to_string(mix.d()) + " weights but d = " + std::to_string(d));
}

// Argmin membership checks shared by the world-model and basis verifiers.
void check_argmin_is_signed_group(VerificationReport& rep, const std::string& label, const ArgminSummary& s,
                                  const BijectionStream& stream) {
  const std::size_t group = signed_group_size(stream.d());
  const std::size_t non_deg_one = s.argmin.size() - s.degree_one_in_argmin;
  if (stream.exhaustive()) {
    rep.check(label + ": argmin contains only signed permutations", non_deg_one == 0,
              std::to_string(non_deg_one) + " non-degree-1 transforms attain the minimum");
    rep.check(label + ": every signed permutation attains the minimum",
              s.degree_one_in_argmin == group && s.degree_one_total == group,
              std::to_string(s.degree_one_in_argmin) + " of " + std::to_string(group));
  } else {
    std::size_t prefix_hits = 0;
    for (std::size_t i : s.argmin) prefix_hits += i < stream.signed_prefix();
    rep.check(label + ": every signed permutation attains the minimum", prefix_hits == stream.signed_prefix(),
              std::to_string(prefix_hits) + " of " + std::to_string(stream.signed_prefix()));
    rep.check(label + ": no sampled non-degree-1 bijection attains the minimum", non_deg_one == 0,
              std::to_string(non_deg_one) + " found");
  }
}

int max_inverse_component_degree(const CubeBijection& t) {
  const auto inv = t.inverse();
  const std::size_t cube = std::size_t{1} << t.d();
  std::vector<int> vals(cube);
  int worst = 0;
  for (int i = 1; i <= t.d(); ++i) {
    for (Mask z = 0; z < cube; ++z) vals[z] = coordinate_value(inv(z), i);
    worst = std::max(worst, integer_degree(vals, t.d()));
  }
  return worst;
}

}  // namespace

// ------------------------------------------------------------ no free lunch

VerificationReport verify_no_free_lunch(int d, ExecPolicy policy) {
  if (d < 1 || d > 3) throw ValidationError("no-free-lunch verification is exhaustive and needs 1 <= d <= 3");
  VerificationReport rep;
  rep.claim = "no-free-lunch";
  rep.parameters = {{"d", d}, {"family", "all +-1 valued functions (degree <= d)"}, {"weights", "all mass on k = d"}};

  const auto stream = BijectionStream::full(d);
  const ObjectiveEvaluator eval(d, DegreeMixture::top_only(d), ObjectiveFamily::AllBoolean);
  const auto s = objective_argmin(stream, eval, policy);
  const Rational identity = eval.evaluate(CubeBijection::identity(d)).value;

  // Closed form: average degree over the class itself, computed directly.
  const std::size_t cube = std::size_t{1} << d;
  std::int64_t deg_total = 0, count = 0;
  std::vector<int> vals(cube);
  for (std::size_t f = 0; f < (std::size_t{1} << cube); ++f, ++count) {
    for (std::size_t z = 0; z < cube; ++z) vals[z] = ((f >> z) & 1u) ? -1 : 1;
    deg_total += small_degree(vals, d);
  }
  const Rational closed(deg_total, count);

  const ObjectiveEvaluator surrogate(d, DegreeMixture::top_only(d), ObjectiveFamily::SignedParity);
  const auto ps = objective_argmin(stream, surrogate, policy);

  rep.measured = {{"transforms", s.total},
                  {"constant", rational_json(s.min_value)},
                  {"distinct_values", s.value_histogram.size()},
                  {"identity_value", rational_json(identity)},
                  {"class_average_degree", rational_json(closed)},
                  {"parity_surrogate_values", histogram_json(ps.value_histogram)}};
  rep.check("objective identical for every bijection", s.argmin.size() == s.total,
            std::to_string(s.value_histogram.size()) + " distinct values");
  rep.check("constant equals the identity objective", s.min_value == identity);
  rep.check("constant equals the class average degree", s.min_value == closed);
  rep.notes.push_back(
      "exact averages use every +-1 valued function, a class closed under composition with bijections; "
      "the signed-parity surrogate is not closed and its per-transform values are listed for reference only");
  return rep;
}

// ------------------------------------------------------------ world model

VerificationReport verify_world_model(const WorldModelOptions& opt, ExecPolicy policy) {
  check_mixture(opt.mixture, opt.d);
  VerificationReport rep;
  rep.claim = "world-model";
  rep.parameters = {{"d", opt.d},
                    {"mixture", opt.mixture.describe()},
                    {"mode", opt.exhaustive ? "exact" : "sampled"},
                    {"family", "signed parities"}};
  if (!opt.exhaustive) {
    rep.parameters["samples"] = opt.samples;
    rep.parameters["seed"] = opt.seed;
  }
  const auto stream = opt.exhaustive ? BijectionStream::full(opt.d)
                                     : BijectionStream::sampled(opt.d, opt.samples, opt.seed);
  const ObjectiveEvaluator eval(opt.d, opt.mixture, ObjectiveFamily::SignedParity);
  const auto s = objective_argmin(stream, eval, policy);

  rep.measured = {{"transforms", s.total},
                  {"argmin_size", s.argmin.size()},
                  {"min_value", rational_json(s.min_value)},
                  {"degree_one_total", s.degree_one_total},
                  {"degree_one_in_argmin", s.degree_one_in_argmin},
                  {"non_degree_one_in_argmin", s.argmin.size() - s.degree_one_in_argmin},
                  {"identity_value", rational_json(eval.evaluate(CubeBijection::identity(opt.d)).value)}};
  if (!s.value_histogram.empty()) rep.measured["value_histogram"] = histogram_json(s.value_histogram);
  if (opt.d == 3) {
    const auto ex = eval.evaluate(example_c_bijection());
    rep.measured["example_c_value"] = rational_json(ex.value);
    rep.measured["example_c_attains_min"] = ex.value == s.min_value;
  }
  rep.check("precondition p_1 > 0", opt.mixture.exact(1) > 0, "p_1 = " + to_string(opt.mixture.exact(1)));
  check_argmin_is_signed_group(rep, "degree objective", s, stream);
  return rep;
}

// ------------------------------------------------------------ basis impact

std::vector<Mask> swap_partners(int d, int k_swap) {
  if (k_swap < 2 || k_swap > d - 1)
    throw ValidationError("k_swap must satisfy 2 <= k_swap <= d-1 so each singleton gets a distinct partner");
  std::vector<Mask> out;
  const Mask all = (Mask{1} << d) - 1;
  if (k_swap == d - 1) {
    for (int i = 0; i < d; ++i) out.push_back(all ^ (Mask{1} << i));
    return out;
  }
  for (Mask s = 0; s <= all && out.size() < static_cast<std::size_t>(d); ++s)
    if (popcount(s) == k_swap) out.push_back(s);
  if (out.size() < static_cast<std::size_t>(d)) throw ValidationError("not enough degree-k_swap parities to swap");
  return out;
}

BasisTransform swap_basis(int d, int k_swap) {
  std::vector<Mask> sigma(std::size_t{1} << d);
  for (Mask s = 0; s < sigma.size(); ++s) sigma[s] = s;
  const auto partners = swap_partners(d, k_swap);
  for (int i = 0; i < d; ++i) {
    sigma[Mask{1} << i] = partners[i];
    sigma[partners[i]] = Mask{1} << i;
  }
  return BasisTransform::parity_permutation(d, std::move(sigma));
}

BasisTransform compatible_nontrivial_basis(int d) {
  std::vector<Mask> sigma(std::size_t{1} << d);
  for (Mask s = 0; s < sigma.size(); ++s) sigma[s] = s;
  if (d == 2) std::swap(sigma[0b01], sigma[0b10]);
  if (d >= 3) std::swap(sigma[0b011], sigma[0b101]);
  return BasisTransform::parity_permutation(d, std::move(sigma));
}

VerificationReport verify_basis_impact(const BasisImpactOptions& opt, ExecPolicy policy) {
  if (opt.d < 1 || opt.d > 3) throw ValidationError("basis-impact verification is exhaustive and needs d <= 3");
  check_mixture(opt.mixture, opt.d);
  VerificationReport rep;
  rep.claim = "basis-impact";
  rep.parameters = {{"d", opt.d}, {"mixture", opt.mixture.describe()}, {"k_swap", opt.k_swap}};
  rep.check("precondition p_1 > 0", opt.mixture.exact(1) > 0, "p_1 = " + to_string(opt.mixture.exact(1)));

  const auto stream = BijectionStream::full(opt.d);
  nlohmann::json compat = nlohmann::json::array();
  const std::vector<std::pair<std::string, BasisTransform>> compatible{
      {"identity", BasisTransform::identity(opt.d)}, {"degree-preserving permutation", compatible_nontrivial_basis(opt.d)}};
  for (const auto& [label, u] : compatible) {
    const ObjectiveEvaluator eval(opt.d, opt.mixture, ObjectiveFamily::SignedParity, u);
    const auto s = objective_argmin(stream, eval, policy);
    rep.check(label + " basis is compatible", is_compatible(u));
    check_argmin_is_signed_group(rep, label + " basis", s, stream);
    compat.push_back({{"basis", label}, {"argmin_size", s.argmin.size()}, {"min_value", rational_json(s.min_value)}});
  }

  const auto partners = swap_partners(opt.d, opt.k_swap);
  const auto u = swap_basis(opt.d, opt.k_swap);
  const ObjectiveEvaluator eval(opt.d, opt.mixture, ObjectiveFamily::SignedParity, u);
  const auto s = objective_argmin(stream, eval, policy);
  int min_worst = std::numeric_limits<int>::max();
  std::size_t below = 0;
  for (std::size_t i : s.argmin) {
    const int worst = max_inverse_component_degree(stream.at(i));
    min_worst = std::min(min_worst, worst);
    below += worst < opt.k_swap;
  }
  nlohmann::json pj = nlohmann::json::array();
  for (int i = 0; i < opt.d; ++i)
    pj.push_back({{"singleton", format_subset(Mask{1} << i)}, {"partner", format_subset(partners[i])}});
  rep.measured = {{"transforms", s.total},
                  {"compatible", compat},
                  {"swap",
                   {{"pairs", pj},
                    {"compatible", is_compatible(u)},
                    {"argmin_size", s.argmin.size()},
                    {"min_value", rational_json(s.min_value)},
                    {"degree_one_in_argmin", s.degree_one_in_argmin},
                    {"min_over_argmin_of_max_inverse_degree", s.argmin.empty() ? 0 : min_worst}}}};
  rep.check("swap basis is incompatible", !is_compatible(u));
  rep.check("every swap-basis argmin has an inverse component of degree >= k_swap", below == 0,
            std::to_string(below) + " argmin transforms fall short");
  return rep;
}

// ------------------------------------------------------------ degree composition

VerificationReport verify_degree_composition(const DegreeCompositionOptions& opt, ExecPolicy policy) {
  const int d = opt.d;
  VerificationReport rep;
  rep.claim = "degree-composition";
  rep.parameters = {{"d", d}, {"mode", opt.exhaustive ? "exact" : "sampled"}};
  if (!opt.exhaustive) {
    rep.parameters["samples"] = opt.samples;
  }
  rep.parameters["seed"] = opt.seed;
  const auto stream = opt.exhaustive ? BijectionStream::full(d) : BijectionStream::sampled(d, opt.samples, opt.seed);

  std::vector<std::int64_t> base(static_cast<std::size_t>(d) + 1, 0);
  for (Mask s = 0; s < (Mask{1} << d); ++s)
    for (int k = std::max(1, popcount(s)); k <= d; ++k) base[k] += popcount(s);

  struct Acc {
    std::size_t cases = 0, violations = 0, equal_k1 = 0, iff_mismatch = 0, influence_mismatch = 0;
    std::size_t spot_checks = 0, spot_mismatch = 0;
    std::vector<std::size_t> strict_by_k;
  };
  std::vector<Acc> acc(chunk_count(stream.size()));
  constexpr std::size_t kSpotEvery = 997;

  parallel_chunks(stream.size(), policy, [&](std::size_t c, std::size_t b, std::size_t e) {
    Acc& a = acc[c];
    a.strict_by_k.assign(static_cast<std::size_t>(d) + 1, 0);
    stream.for_range(b, e, [&](std::size_t ti, const CubeBijection& t) {
      const auto degs = parity_composition_degrees(t);
      std::vector<std::int64_t> sum(static_cast<std::size_t>(d) + 1, 0);
      for (Mask s = 0; s < degs.size(); ++s)
        for (int k = std::max(1, popcount(s)); k <= d; ++k) sum[k] += degs[s];
      for (int k = 1; k <= d; ++k) {
        ++a.cases;
        if (sum[k] < base[k]) ++a.violations;
        if (sum[k] > base[k]) ++a.strict_by_k[k];
      }
      const bool eq1 = sum[1] == base[1];
      const bool deg_one = is_degree_one(t);
      a.equal_k1 += eq1;
      a.iff_mismatch += eq1 != deg_one;
      for (int k = 1; k <= std::max(1, d - 1); ++k)
        a.influence_mismatch += is_degree_one_by_influence(t, k) != deg_one;

      if (ti % kSpotEvery == 0) {
        // Generic real combination: its degree after composition should be
        // the largest parity degree involved.
        std::mt19937_64 rng(derive_seed(opt.seed, ti));
        std::uniform_int_distribution<int> pick_k(1, d);
        std::uniform_real_distribution<double> coeff(-1.0, 1.0);
        const int k = pick_k(rng);
        std::vector<double> spec(std::size_t{1} << d, 0.0);
        int expect = 0;
        for (Mask s : masks_up_to_degree(d, k)) {
          spec[s] = coeff(rng);
          expect = std::max(expect, degs[s]);
        }
        const auto f = inverse_wht(FourierSpectrum(d, std::move(spec)));
        ++a.spot_checks;
        a.spot_mismatch += degree(compose_with(f, t)) != expect;
      }
    });
  });

  Acc total;
  total.strict_by_k.assign(static_cast<std::size_t>(d) + 1, 0);
  for (const auto& a : acc) {
    total.cases += a.cases;
    total.violations += a.violations;
    total.equal_k1 += a.equal_k1;
    total.iff_mismatch += a.iff_mismatch;
    total.influence_mismatch += a.influence_mismatch;
    total.spot_checks += a.spot_checks;
    total.spot_mismatch += a.spot_mismatch;
    for (int k = 1; k <= d; ++k) total.strict_by_k[k] += a.strict_by_k[k];
  }
  nlohmann::json strict = nlohmann::json::object();
  for (int k = 1; k <= d; ++k) strict[std::to_string(k)] = total.strict_by_k[k];
  rep.measured = {{"transforms", stream.size()},
                  {"cases", total.cases},
                  {"violations", total.violations},
                  {"equality_at_k1", total.equal_k1},
                  {"strict_by_k", strict},
                  {"spot_checks", total.spot_checks},
                  {"spot_mismatches", total.spot_mismatch}};
  rep.check("parity-family degree sum never drops below the identity's", total.violations == 0);
  rep.check("equality at k=1 exactly for degree-1 bijections", total.iff_mismatch == 0);
  rep.check("influence criterion agrees with the spectral degree test", total.influence_mismatch == 0);
  rep.check("generic combinations keep the maximal composed degree", total.spot_mismatch == 0);
  if (stream.exhaustive())
    rep.check("k=1 equality set has 2^d * d! members", total.equal_k1 == signed_group_size(d),
              std::to_string(total.equal_k1));
  else
    rep.check("all signed permutations attain equality at k=1", total.equal_k1 >= stream.signed_prefix());
  return rep;
}

// ------------------------------------------------------------ example and remark

VerificationReport verify_example_counterexample(ExecPolicy policy) {
  VerificationReport rep;
  rep.claim = "example-counterexample";
  rep.parameters = {{"transform", "(z1, z1z2, z1z3)"}, {"lifted_d", 4}, {"candidates", 65536}};

  const auto t = example_c_bijection();
  const bool k1 = preserves_Fk(t, 1), k2 = preserves_Fk(t, 2), k3 = preserves_Fk(t, 3);
  rep.check("example preserves F_2", k2);
  rep.check("example preserves F_3", k3);
  rep.check("example does not preserve F_1", !k1);

  // First three output coordinates of the lift ignore z4.
  std::vector<Mask> base(16);
  for (Mask z = 0; z < 16; ++z) {
    Mask out = 0;
    if (parity_sign(0b0001, z) < 0) out |= 1u;
    if (parity_sign(0b0011, z) < 0) out |= 2u;
    if (parity_sign(0b0101, z) < 0) out |= 4u;
    base[z] = out;
  }
  constexpr std::size_t kCandidates = std::size_t{1} << 16;
  struct Acc {
    std::size_t bijective = 0, satisfying = 0;
  };
  std::vector<Acc> acc(chunk_count(kCandidates));
  parallel_chunks(kCandidates, policy, [&](std::size_t c, std::size_t b, std::size_t e) {
    for (std::size_t cand = b; cand < e; ++cand) {
      std::vector<Mask> perm(16);
      std::uint32_t seen = 0;
      for (Mask z = 0; z < 16; ++z) {
        perm[z] = base[z] | (((cand >> z) & 1u) << 3);
        seen |= 1u << perm[z];
      }
      if (seen != 0xFFFFu) continue;
      ++acc[c].bijective;
      const CubeBijection lifted(4, std::move(perm));
      if (preserves_Fk(lifted, 2) && preserves_Fk(lifted, 3)) ++acc[c].satisfying;
    }
  });
  Acc total;
  for (const auto& a : acc) {
    total.bijective += a.bijective;
    total.satisfying += a.satisfying;
  }
  rep.measured = {{"preserves_F1", k1},
                  {"preserves_F2", k2},
                  {"preserves_F3", k3},
                  {"candidates", kCandidates},
                  {"bijective_candidates", total.bijective},
                  {"satisfying_candidates", total.satisfying}};
  rep.check("bijective candidates = 2^8 (T4 must split every fibre)", total.bijective == 256,
            std::to_string(total.bijective));
  rep.check("no bijective extension preserves F_2 and F_3", total.satisfying == 0,
            std::to_string(total.satisfying) + " found");
  return rep;
}

}  // namespace wmlab
