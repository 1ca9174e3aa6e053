#include <random>

#include "wmlab/errors.hpp"
#include "wmlab/theoremlab.hpp"

namespace wmlab {

namespace {

// Unnormalized integer Walsh transform; values are small integers.
void int_wht(std::vector<int>& c) {
  const std::size_t len = c.size();
  for (std::size_t h = 1; h < len; h <<= 1)
    for (std::size_t i = 0; i < len; i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const int a = c[j], b = c[j + h];
        c[j] = a + b;
        c[j + h] = a - b;
      }
}

}  // namespace

ObjectiveEvaluator::ObjectiveEvaluator(int d, DegreeMixture mixture, ObjectiveFamily family,
                                       std::optional<BasisTransform> basis)
    : d_(d), mixture_(std::move(mixture)), family_(family) {
  if (d < 1 || d > 10) throw CapacityError("objective evaluation supports 1 <= d <= 10");
  if (mixture_.d() != d)
    throw ValidationError("mixture has " + std::to_string(mixture_.d()) + " weights but d = " + std::to_string(d));
  if (basis) {
    if (basis->m() != d) throw DimensionError("basis transform dimension differs from d");
    pre_degrees_ = preimage_degrees(*basis);
  }
  sizes_.assign(static_cast<std::size_t>(d), 0);
  const std::size_t cube = std::size_t{1} << d;
  if (family_ == ObjectiveFamily::SignedParity) {
    for (Mask s = 0; s < cube; ++s)
      for (int k = std::max(1, popcount(s)); k <= d; ++k) sizes_[k - 1] += 2;
    return;
  }
  if (d > 4) throw CapacityError("the all-Boolean family is enumerable only for d <= 4");
  const std::size_t count = std::size_t{1} << cube;
  for (std::size_t f = 0; f < count; ++f) {
    std::vector<int> vals(cube);
    for (std::size_t z = 0; z < cube; ++z) vals[z] = ((f >> z) & 1u) ? -1 : 1;
    const int deg = small_degree(vals, d);
    for (int k = std::max(1, deg); k <= d; ++k) ++sizes_[k - 1];
    members_.push_back(std::move(vals));
    member_degree_.push_back(deg);
  }
}

int ObjectiveEvaluator::family_degree(const std::vector<int>& values) const {
  std::vector<int> c = values;
  int_wht(c);
  int deg = 0;
  for (std::size_t s = 0; s < c.size(); ++s) {
    if (c[s] == 0) continue;
    deg = std::max(deg, pre_degrees_ ? (*pre_degrees_)[s] : popcount(static_cast<Mask>(s)));
  }
  return deg;
}

std::vector<std::int64_t> ObjectiveEvaluator::degree_sums(const CubeBijection& t) const {
  if (t.d() != d_) throw DimensionError("transform dimension differs from objective dimension");
  const auto inv = t.inverse();
  const std::size_t cube = std::size_t{1} << d_;
  std::vector<std::int64_t> sums(static_cast<std::size_t>(d_), 0);
  std::vector<int> vals(cube);
  if (family_ == ObjectiveFamily::SignedParity) {
    for (Mask s = 0; s < cube; ++s) {
      for (Mask z = 0; z < cube; ++z) vals[z] = parity_sign(s, inv(z));
      const int deg = family_degree(vals);  // -chi_S has the same degree
      for (int k = std::max(1, popcount(s)); k <= d_; ++k) sums[k - 1] += 2 * deg;
    }
  } else {
    for (std::size_t f = 0; f < members_.size(); ++f) {
      for (Mask z = 0; z < cube; ++z) vals[z] = members_[f][inv(z)];
      const int deg = family_degree(vals);
      for (int k = std::max(1, member_degree_[f]); k <= d_; ++k) sums[k - 1] += deg;
    }
  }
  return sums;
}

Rational ObjectiveEvaluator::value_from_sums(const std::vector<std::int64_t>& sums) const {
  Rational v = 0;
  for (int k = 1; k <= d_; ++k) {
    const Rational& p = mixture_.exact(k);
    if (p == 0) continue;
    v += p * Rational(sums[k - 1], sizes_[k - 1]);
  }
  return v;
}

ObjectiveEvaluation ObjectiveEvaluator::evaluate(const CubeBijection& t) const {
  const auto sums = degree_sums(t);
  ObjectiveEvaluation ev;
  ev.transform = t.perm();
  ev.value = value_from_sums(sums);
  ev.value_double = static_cast<double>(ev.value);
  for (int k = 1; k <= d_; ++k)
    ev.per_degree.push_back({k, mixture_.exact(k), sums[k - 1], sizes_[k - 1], Rational(sums[k - 1], sizes_[k - 1])});
  return ev;
}

ObjectiveEvaluation ObjectiveEvaluator::evaluate_sampled(const CubeBijection& t, std::size_t n,
                                                         std::uint64_t seed) const {
  if (n == 0) throw ValidationError("sampled objective needs at least one draw");
  const auto inv = t.inverse();
  const std::size_t cube = std::size_t{1} << d_;
  std::vector<std::vector<std::size_t>> by_k(static_cast<std::size_t>(d_));
  if (family_ == ObjectiveFamily::AllBoolean)
    for (std::size_t f = 0; f < members_.size(); ++f)
      for (int k = std::max(1, member_degree_[f]); k <= d_; ++k) by_k[k - 1].push_back(f);

  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> deg_sum(static_cast<std::size_t>(d_), 0), draws(static_cast<std::size_t>(d_), 0);
  std::vector<int> vals(cube);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = sample_degree(mixture_, rng);
    if (family_ == ObjectiveFamily::SignedParity) {
      const auto masks = masks_up_to_degree(d_, k);
      std::uniform_int_distribution<std::size_t> pick(0, 2 * masks.size() - 1);
      const Mask s = masks[pick(rng) / 2];
      for (Mask z = 0; z < cube; ++z) vals[z] = parity_sign(s, inv(z));
    } else {
      const auto& pool = by_k[k - 1];
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      const auto& f = members_[pool[pick(rng)]];
      for (Mask z = 0; z < cube; ++z) vals[z] = f[inv(z)];
    }
    deg_sum[k - 1] += family_degree(vals);
    ++draws[k - 1];
  }
  ObjectiveEvaluation ev;
  ev.transform = t.perm();
  ev.exact = false;
  std::int64_t total = 0;
  for (int k = 1; k <= d_; ++k) {
    total += deg_sum[k - 1];
    ev.per_degree.push_back({k, mixture_.exact(k), deg_sum[k - 1], draws[k - 1],
                             draws[k - 1] ? Rational(deg_sum[k - 1], draws[k - 1]) : Rational(0)});
  }
  ev.value = Rational(total, static_cast<std::int64_t>(n));
  ev.value_double = static_cast<double>(ev.value);
  return ev;
}

ArgminSummary objective_argmin(const BijectionStream& stream, const ObjectiveEvaluator& eval, ExecPolicy policy) {
  const std::size_t n = stream.size();
  std::vector<std::vector<std::int64_t>> sums(n);
  std::vector<char> deg_one(n, 0);
  parallel_chunks(n, policy, [&](std::size_t, std::size_t b, std::size_t e) {
    stream.for_range(b, e, [&](std::size_t i, const CubeBijection& t) {
      sums[i] = eval.degree_sums(t);
      deg_one[i] = is_degree_one(t) ? 1 : 0;
    });
  });

  std::map<std::vector<std::int64_t>, Rational> memo;
  std::vector<const Rational*> value(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = memo.find(sums[i]);
    if (it == memo.end()) it = memo.emplace(sums[i], eval.value_from_sums(sums[i])).first;
    value[i] = &it->second;
  }

  ArgminSummary out;
  out.total = n;
  if (n == 0) return out;
  out.min_value = *value[0];
  for (std::size_t i = 1; i < n; ++i)
    if (*value[i] < out.min_value) out.min_value = *value[i];
  std::map<Rational, std::size_t> hist;
  for (std::size_t i = 0; i < n; ++i) {
    ++hist[*value[i]];
    out.degree_one_total += deg_one[i];
    if (*value[i] == out.min_value) {
      out.argmin.push_back(i);
      out.argmin_degree_one.push_back(deg_one[i] != 0);
      out.degree_one_in_argmin += deg_one[i];
    }
  }
  if (hist.size() <= 64)
    for (const auto& [v, c] : hist) out.value_histogram[to_string(v)] = c;
  return out;
}

}  // namespace wmlab
