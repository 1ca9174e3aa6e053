#include <algorithm>
#include <limits>
#include <random>

#include "wmlab/errors.hpp"
#include "wmlab/seeding.hpp"
#include "wmlab/theoremlab.hpp"

namespace wmlab {

namespace {

nlohmann::json model_params(const GenerationModel& m) {
  return {{"name", m.name().empty() ? "inline" : m.name()}, {"d", m.d()}, {"m", m.m()}};
}

void require_full(const GenerationModel& m, const char* what) {
  if (!m.support().is_full()) throw RefusalError(std::string(what) + " needs a model with full latent support");
}

}  // namespace

// ------------------------------------------------------------ single task

VerificationReport verify_single_task(const SingleTaskOptions& opt, ExecPolicy policy) {
  const auto& model = *opt.model;
  require_full(model, "single-task verification");
  const int d = model.d(), m = model.m();

  VerificationReport rep;
  rep.claim = "single-task";
  rep.parameters = {{"model", model_params(model)}, {"trials", opt.trials}, {"seed", opt.seed}};

  std::vector<SupportedTask> tasks;
  if (opt.trials == 0) {
    if (m > 12) throw CapacityError("exhaustive parity tasks need m <= 12");
    for (Mask a = 0; a < (Mask{1} << m); ++a)
      for (int sign : {1, -1})
        tasks.push_back(SupportedTask::from_data_function(opt.model, TruthTable::parity(m, a, sign),
                                                          (sign > 0 ? "+chi" : "-chi") + format_subset(a) + "(x)"));
    rep.parameters["task_source"] = "all signed parities of x";
  } else {
    for (std::size_t t = 0; t < opt.trials; ++t) {
      std::mt19937_64 rng(derive_seed(opt.seed, t));
      std::bernoulli_distribution coin(0.5);
      std::vector<double> y;
      for (std::size_t i = 0; i < model.support_points().size(); ++i) y.push_back(coin(rng) ? -1.0 : 1.0);
      tasks.push_back(SupportedTask::from_labels(opt.model, std::move(y), "random labels"));
    }
    rep.parameters["task_source"] = "uniform random +-1 labels";
  }

  const auto hstar = parallel_map<int>(tasks.size(), policy, [&](std::size_t i) { return min_degree_solve(tasks[i]).degree; });

  const auto stream = d <= 3 ? BijectionStream::full(d) : BijectionStream::sampled(d, opt.phi_samples, opt.seed);
  rep.parameters["phi_enumeration"] = stream.exhaustive() ? "all bijections" : "signed permutations + sampled";
  rep.parameters["transforms"] = stream.size();

  struct Acc {
    std::size_t comparisons = 0, violations = 0, equalities = 0;
    int min_slack = std::numeric_limits<int>::max();
    int phi_min = std::numeric_limits<int>::max(), phi_max = 0;
    std::string first_violation;
  };
  std::vector<Acc> acc(chunk_count(stream.size()));
  const auto& solver = solver_for(opt.model);
  const auto& pts = model.support_points();
  const std::size_t cube = std::size_t{1} << d;

  parallel_chunks(stream.size(), policy, [&](std::size_t c, std::size_t b, std::size_t e) {
    Acc& a = acc[c];
    std::vector<double> coord(pts.size()), buf(cube);
    stream.for_range(b, e, [&](std::size_t ti, const CubeBijection& t) {
      // Phi = T o psi^{-1} on the image, each coordinate min-degree solved.
      int phi_deg = 0;
      for (int j = 1; j <= d; ++j) {
        for (std::size_t i = 0; i < pts.size(); ++i) coord[i] = coordinate_value(t(pts[i].z), j);
        phi_deg += solver.solve(coord).degree;
      }
      a.phi_min = std::min(a.phi_min, phi_deg);
      a.phi_max = std::max(a.phi_max, phi_deg);
      for (std::size_t k = 0; k < tasks.size(); ++k) {
        for (std::size_t i = 0; i < pts.size(); ++i) buf[t(pts[i].z)] = tasks[k].labels[i];
        const int g_deg = degree_inplace(buf);
        const int slack = g_deg + phi_deg - hstar[k];
        ++a.comparisons;
        a.min_slack = std::min(a.min_slack, slack);
        if (slack == 0) ++a.equalities;
        if (slack < 0) {
          if (a.violations++ == 0)
            a.first_violation = "transform #" + std::to_string(ti) + ", task " + tasks[k].provenance;
        }
      }
    });
  });

  Acc total;
  for (const auto& a : acc) {
    total.comparisons += a.comparisons;
    total.violations += a.violations;
    total.equalities += a.equalities;
    total.min_slack = std::min(total.min_slack, a.min_slack);
    total.phi_min = std::min(total.phi_min, a.phi_min);
    total.phi_max = std::max(total.phi_max, a.phi_max);
    if (total.first_violation.empty()) total.first_violation = a.first_violation;
  }
  std::map<int, std::size_t> hist;
  for (int h : hstar) ++hist[h];
  nlohmann::json hj = nlohmann::json::object();
  for (auto [k, v] : hist) hj[std::to_string(k)] = v;

  rep.measured = {{"tasks", tasks.size()},
                  {"comparisons", total.comparisons},
                  {"violations", total.violations},
                  {"equalities", total.equalities},
                  {"min_slack", total.min_slack},
                  {"phi_degree_min", total.phi_min},
                  {"phi_degree_max", total.phi_max},
                  {"flat_degree_histogram", hj}};
  rep.check("flat degree <= hierarchical degree for every (task, Phi)", total.violations == 0,
            total.violations ? "first violation at " + total.first_violation : "");
  return rep;
}

// ------------------------------------------------------------ multi task

VerificationReport verify_multi_task_bound(const MultiTaskOptions& opt, ExecPolicy policy) {
  const auto& model = *opt.model;
  require_full(model, "multi-task verification");
  const int d = model.d();
  if (opt.k < 0 || opt.k > d) throw ValidationError("family degree k must satisfy 0 <= k <= d");

  VerificationReport rep;
  rep.claim = "multi-task";
  rep.parameters = {{"model", model_params(model)},
                    {"n_tasks", opt.n_tasks},
                    {"batches", opt.batches},
                    {"k", opt.k},
                    {"family", opt.kind == FamilyKind::Parity ? "parity" : "poly"},
                    {"seed", opt.seed}};

  const auto inv = min_degree_inverse(opt.model);
  std::vector<int> inv_degrees;
  for (const auto& c : inv.coords) inv_degrees.push_back(c.degree);

  struct TaskDegrees {
    int hstar = 0, latent = 0;
  };
  const auto members = parity_family_members(d, opt.k);
  std::vector<TaskDegrees> member_deg;
  if (opt.kind == FamilyKind::Parity) {
    member_deg = parallel_map<TaskDegrees>(members.size(), policy, [&](std::size_t i) {
      const auto p = conditional_degree_parts(parity_task(opt.model, members[i]), inv.tables);
      return TaskDegrees{p.task_degree, p.latent_degree};
    });
  }

  struct Batch {
    std::int64_t sum_hstar = 0, sum_latent = 0;
  };
  std::vector<std::pair<std::size_t, std::size_t>> cells;  // (n index, batch)
  for (std::size_t ni = 0; ni < opt.n_tasks.size(); ++ni)
    for (std::size_t b = 0; b < opt.batches; ++b) cells.emplace_back(ni, b);

  const TaskFamily family{opt.kind, opt.k, CoeffLaw::Uniform, opt.model};
  const auto batches = parallel_map<Batch>(cells.size(), policy, [&](std::size_t c) {
    const auto [ni, b] = cells[c];
    const std::size_t n = opt.n_tasks[ni];
    std::mt19937_64 rng(derive_seed(derive_seed(opt.seed, n), b));
    Batch out;
    for (std::size_t i = 0; i < n; ++i) {
      if (opt.kind == FamilyKind::Parity) {
        std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
        const auto& td = member_deg[pick(rng)];
        out.sum_hstar += td.hstar;
        out.sum_latent += td.latent;
      } else {
        const auto p = conditional_degree_parts(sample_task(family, rng), inv.tables);
        out.sum_hstar += p.task_degree;
        out.sum_latent += p.latent_degree;
      }
    }
    return out;
  });

  std::size_t violations = 0;
  nlohmann::json per_n = nlohmann::json::array();
  const std::int64_t d2 = static_cast<std::int64_t>(d) * d;
  for (std::size_t ni = 0; ni < opt.n_tasks.size(); ++ni) {
    std::size_t bad = 0, preferred = 0;
    std::int64_t min_slack = std::numeric_limits<std::int64_t>::max();
    std::int64_t min_gap = std::numeric_limits<std::int64_t>::max(), max_gap = std::numeric_limits<std::int64_t>::min();
    double gap_total = 0, cond_total = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].first != ni) continue;
      const auto& bt = batches[c];
      // deg-hat(h*) - deg-hat(g o Phi*)  vs  sum_i cond_i - d^2
      const std::int64_t gap = bt.sum_hstar - (bt.sum_latent + inv.total_degree);
      const std::int64_t sum_cond = bt.sum_hstar - bt.sum_latent;
      const std::int64_t slack = gap - (sum_cond - d2);
      min_slack = std::min(min_slack, slack);
      min_gap = std::min(min_gap, gap);
      max_gap = std::max(max_gap, gap);
      gap_total += static_cast<double>(gap);
      cond_total += static_cast<double>(sum_cond);
      if (slack < 0) ++bad;
      if (gap > 0) ++preferred;
    }
    violations += bad;
    const double nb = static_cast<double>(std::max<std::size_t>(1, opt.batches));
    per_n.push_back({{"n", opt.n_tasks[ni]},
                     {"batches", opt.batches},
                     {"violations", bad},
                     {"min_slack", opt.batches ? min_slack : 0},
                     {"mean_gap", gap_total / nb},
                     {"min_gap", opt.batches ? min_gap : 0},
                     {"max_gap", opt.batches ? max_gap : 0},
                     {"mean_sum_conditional_degree", cond_total / nb},
                     {"hierarchical_preferred_fraction", static_cast<double>(preferred) / nb}});
  }
  rep.measured = {{"phi_star_degree", inv.total_degree},
                  {"phi_star_coordinate_degrees", inv_degrees},
                  {"d_squared", d2},
                  {"per_n", per_n},
                  {"violations", violations}};
  rep.check("multi-task inequality holds in every batch", violations == 0);
  return rep;
}

// ------------------------------------------------------------ corollary

VerificationReport verify_corollary(const CorollaryOptions& opt, ExecPolicy policy) {
  const auto& model = *opt.model;
  require_full(model, "corollary verification");
  VerificationReport rep;
  rep.claim = "corollary";
  rep.parameters = {{"model", model_params(model)}, {"samples", opt.samples}, {"k", opt.k}, {"seed", opt.seed}};
  const TaskFamily family{FamilyKind::Parity, std::min(opt.k, model.d()), CoeffLaw::Uniform, opt.model};
  const auto inv = min_degree_inverse(opt.model);
  struct Row {
    bool holds = true;
    bool positive = false;
  };
  const auto rows = parallel_map<Row>(opt.samples, policy, [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(opt.seed, i));
    const auto p = conditional_degree_parts(sample_task(family, rng), inv.tables);
    return Row{p.value() <= 0 || p.latent_degree <= model.d() - 1, p.value() > 0};
  });
  std::size_t failures = 0, positive = 0;
  for (const auto& r : rows) {
    failures += !r.holds;
    positive += r.positive;
  }
  rep.measured = {{"samples", opt.samples}, {"positive_conditional_degree", positive}, {"failures", failures}};
  rep.check("cond > 0 implies deg(h o psi) <= d-1 for every sample", failures == 0);
  return rep;
}

}  // namespace wmlab
