#include "levytree/marginals.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "levytree/codings.hpp"
#include "levytree/gw.hpp"
#include "levytree/offspring.hpp"
#include "levytree/stats.hpp"

namespace levytree {

nlohmann::json MarkedTree::to_json() const {
  return {{"skeleton", skeleton.to_string()}, {"lifetimes", lifetimes}};
}

namespace {

void build_marginal(std::span<const double> leaf, std::span<const double> gap, std::size_t a,
                    std::size_t b, double base, std::vector<std::uint32_t>& counts,
                    std::vector<double>& lifetimes) {
  if (a == b) {
    counts.push_back(0);
    lifetimes.push_back(leaf[a] - base);
    return;
  }
  const double mn = *std::min_element(gap.begin() + static_cast<std::ptrdiff_t>(a),
                                      gap.begin() + static_cast<std::ptrdiff_t>(b));
  std::vector<std::size_t> cuts;
  for (std::size_t i = a; i < b; ++i) {
    if (gap[i] == mn) cuts.push_back(i);
  }
  counts.push_back(static_cast<std::uint32_t>(cuts.size() + 1));
  lifetimes.push_back(mn - base);
  std::size_t lo = a;
  for (auto c : cuts) {
    build_marginal(leaf, gap, lo, c, mn, counts, lifetimes);
    lo = c + 1;
  }
  build_marginal(leaf, gap, lo, b, mn, counts, lifetimes);
}

}  // namespace

MarkedTree extract_marginal_tree(std::span<const double> e, std::span<const std::size_t> times) {
  if (times.empty()) throw std::invalid_argument("extract_marginal_tree: need at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= e.size()) throw std::out_of_range("extract_marginal_tree: time outside the excursion");
    if (i > 0 && times[i] < times[i - 1]) throw std::invalid_argument("extract_marginal_tree: times must be sorted");
  }
  std::vector<double> leaf(times.size()), gap(times.size() - 1);
  for (std::size_t i = 0; i < times.size(); ++i) leaf[i] = e[times[i]];
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    gap[i] = *std::min_element(e.begin() + static_cast<std::ptrdiff_t>(times[i]),
                               e.begin() + static_cast<std::ptrdiff_t>(times[i + 1]) + 1);
  }
  std::vector<std::uint32_t> counts;
  MarkedTree out;
  build_marginal(leaf, gap, 0, times.size() - 1, 0.0, counts, out.lifetimes);
  out.skeleton = OrderedTree::from_child_counts(std::move(counts));
  return out;
}

SeriesPmf poisson_offspring_pmf(const BranchingMechanism& m, double lam) {
  if (!(lam > 0.0)) throw std::domain_error("poisson_offspring_pmf: lambda must be positive");
  const double x = m.psi_inverse(lam);
  const double slope = m.psi_prime(x);
  return derivative_series_pmf(m, x, slope, lam / (x * slope));
}

double poisson_offspring_gf(const BranchingMechanism& m, double lam, double r) {
  const double x = m.psi_inverse(lam);
  return r + m.psi((1.0 - r) * x) / (x * m.psi_prime(x));
}

double poisson_lifetime_rate(const BranchingMechanism& m, double lam) {
  return m.psi_prime(m.psi_inverse(lam));
}

MarkedTree poisson_tree_sample(const BranchingMechanism& m, double lam, std::mt19937_64& rng,
                               std::int64_t budget) {
  return poisson_tree_sample(poisson_offspring_pmf(m, lam), poisson_lifetime_rate(m, lam), rng, budget);
}

MarkedTree poisson_tree_sample(const SeriesPmf& law, double rate, std::mt19937_64& rng,
                               std::int64_t budget) {
  std::exponential_distribution<double> life(rate);
  std::vector<std::uint32_t> counts;
  MarkedTree out;
  std::int64_t pending = 1;
  while (pending > 0) {
    if (static_cast<std::int64_t>(counts.size()) >= budget) throw NodeBudgetExceeded(budget);
    const auto k = law.sample(rng);
    counts.push_back(static_cast<std::uint32_t>(k));
    out.lifetimes.push_back(life(rng));
    pending += k - 1;
  }
  out.skeleton = OrderedTree::from_child_counts(std::move(counts));
  return out;
}

namespace {

// Child-count sequences (lexicographic) of all trees in T*_p.
const std::vector<std::vector<std::uint32_t>>& tstar_counts(int p,
                                                           std::map<int, std::vector<std::vector<std::uint32_t>>>& memo) {
  auto it = memo.find(p);
  if (it != memo.end()) return it->second;
  std::vector<std::vector<std::uint32_t>> out;
  if (p == 1) {
    out.push_back({0});
  } else {
    // Root with k >= 2 children holding an ordered composition of p.
    std::vector<int> parts;
    std::function<void(int)> compose = [&](int remaining) {
      if (remaining == 0) {
        if (parts.size() < 2) return;
        std::vector<std::vector<std::uint32_t>> partial{{static_cast<std::uint32_t>(parts.size())}};
        for (int part : parts) {
          const auto& subs = tstar_counts(part, memo);
          std::vector<std::vector<std::uint32_t>> next;
          for (const auto& prefix : partial) {
            for (const auto& s : subs) {
              auto joined = prefix;
              joined.insert(joined.end(), s.begin(), s.end());
              next.push_back(std::move(joined));
            }
          }
          partial = std::move(next);
        }
        out.insert(out.end(), partial.begin(), partial.end());
        return;
      }
      for (int part = 1; part <= remaining; ++part) {
        if (part == p) continue;
        parts.push_back(part);
        compose(remaining - part);
        parts.pop_back();
      }
    };
    compose(p);
  }
  return memo[p] = std::move(out);
}

}  // namespace

std::vector<OrderedTree> enumerate_Tstar(int p) {
  if (p < 1) throw std::domain_error("enumerate_Tstar: p must be >= 1");
  std::map<int, std::vector<std::vector<std::uint32_t>>> memo;
  std::vector<OrderedTree> out;
  for (const auto& c : tstar_counts(p, memo)) out.push_back(OrderedTree::from_child_counts(c));
  return out;
}

double stable_skeleton_pmf(double gamma, const OrderedTree& skeleton) {
  if (!(gamma > 1.0 && gamma <= 2.0)) throw std::domain_error("stable_skeleton_pmf: index must lie in (1,2]");
  const auto p = static_cast<int>(skeleton.leaf_count());
  double value = std::tgamma(p + 1.0);
  for (auto k : skeleton.child_counts()) {
    if (k == 1) throw std::domain_error("stable_skeleton_pmf: skeleton has a vertex with one child");
    if (k == 0) continue;
    value /= std::tgamma(k + 1.0);
    for (std::uint32_t i = 1; i < k; ++i) value *= std::abs(gamma - i);
  }
  for (int j = 1; j < p; ++j) value /= j * gamma - 1.0;
  return value;
}

double quadratic_lifetime_density(const OrderedTree& skeleton, std::span<const double> lifetimes) {
  const auto p = skeleton.leaf_count();
  if (skeleton.size() != 2 * p - 1) throw std::domain_error("quadratic_lifetime_density: skeleton is not binary");
  for (auto k : skeleton.child_counts()) {
    if (k != 0 && k != 2) throw std::domain_error("quadratic_lifetime_density: skeleton is not binary");
  }
  if (lifetimes.size() != skeleton.size()) throw std::invalid_argument("quadratic_lifetime_density: one lifetime per vertex");
  double s = 0.0;
  for (double h : lifetimes) {
    if (h < 0.0) return 0.0;
    s += h;
  }
  double c = std::ldexp(1.0, static_cast<int>(p));
  for (std::size_t j = 1; j + 1 < p; ++j) c *= static_cast<double>(2 * j + 1);
  return c * s * std::exp(-s * s);
}

ExperimentReport stable_marginal_crosscheck(std::int64_t n_vertices, std::int64_t reps,
                                            const RunContext& ctx, double significance) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.name = "stable-marginals";
  r.anchor = "3-point skeleton of the Brownian tree: each binary shape with probability 1/2";
  r.seed = ctx.seed;
  r.workers = ctx.workers;
  const auto d = OffspringDistribution::geometric_half();
  struct Tally {
    std::int64_t left = 0, right = 0, ternary = 0, other = 0;
  };
  const auto chunks = run_chunked<Tally>(reps, 500, ctx.seed, ctx.workers,
                                         [&](std::int64_t b, std::int64_t e, std::mt19937_64& rng) {
    Tally t;
    for (auto i = b; i < e; ++i) {
      const auto tree = sample_conditioned_size(d, n_vertices, rng).tree;
      const auto c = contour_of(tree);
      const std::vector<double> ex(c.begin(), c.end());
      std::uniform_int_distribution<std::size_t> pick(0, ex.size() - 1);
      std::array<std::size_t, 3> times{pick(rng), pick(rng), pick(rng)};
      std::sort(times.begin(), times.end());
      const auto shape = extract_marginal_tree(ex, times).skeleton.to_string();
      if (shape == "2,2,0,0,0") {
        ++t.left;
      } else if (shape == "2,0,2,0,0") {
        ++t.right;
      } else if (shape == "3,0,0,0") {
        ++t.ternary;
      } else {
        ++t.other;
      }
    }
    return t;
  });
  Tally total;
  for (const auto& c : chunks) {
    total.left += c.left;
    total.right += c.right;
    total.ternary += c.ternary;
    total.other += c.other;
  }
  const double binary = static_cast<double>(total.left + total.right);
  const std::array<double, 2> observed{static_cast<double>(total.left), static_cast<double>(total.right)};
  const std::array<double, 2> expected{0.5 * binary, 0.5 * binary};
  const auto chi = chi_square(observed, expected);
  r.parameters = {{"offspring", d.spec()}, {"vertices", n_vertices}, {"points", 3}, {"reps", reps}};
  r.statistics = {{"left_binary", total.left}, {"right_binary", total.right},
                  {"ternary", total.ternary}, {"other", total.other},
                  {"chi_square", chi.stat}, {"dof", chi.dof}, {"p_value", chi.p_value}};
  r.statistic = chi.p_value;
  r.tolerance = significance;
  r.pass = chi.p_value >= significance;
  r.notes = "statistic is the chi-square p-value; pass when it is at least the significance level";
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ExperimentReport stable_skeleton_normalization(const std::vector<double>& gammas, int p_max,
                                               double tolerance) {
  ExperimentReport r;
  r.name = "stable-skeleton-normalization";
  r.anchor = "skeleton law of the p-point stable marginal sums to one";
  double worst = 0.0;
  auto table = nlohmann::json::array();
  for (double g : gammas) {
    for (int p = 1; p <= p_max; ++p) {
      double sum = 0.0;
      const auto trees = enumerate_Tstar(p);
      for (const auto& t : trees) sum += stable_skeleton_pmf(g, t);
      worst = std::max(worst, std::abs(sum - 1.0));
      table.push_back({{"gamma", g}, {"p", p}, {"skeletons", trees.size()}, {"sum", sum}});
    }
  }
  r.parameters = {{"gammas", gammas}, {"p_max", p_max}};
  r.statistics = {{"table", table}, {"max_defect", worst}};
  r.statistic = worst;
  r.tolerance = tolerance;
  r.pass = worst <= tolerance;
  return r;
}

ExperimentReport poisson_tree_experiment(const BranchingMechanism& m, double lam,
                                         std::int64_t n_trees, const RunContext& ctx,
                                         double significance) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.name = "poisson-tree";
  r.anchor = "tree spanned by Poisson marks is a continuous-time Galton-Watson tree";
  r.seed = ctx.seed;
  r.workers = ctx.workers;
  const auto law = poisson_offspring_pmf(m, lam);
  const double rate = poisson_lifetime_rate(m, lam);
  const std::int64_t bins = 16;
  struct Tally {
    std::vector<double> counts = std::vector<double>(bins + 1, 0.0);
    Moments life;
    std::int64_t budget_hits = 0;
  };
  const auto chunks = run_chunked<Tally>(n_trees, 1000, ctx.seed, ctx.workers,
                                         [&](std::int64_t b, std::int64_t e, std::mt19937_64& rng) {
    Tally t;
    for (auto i = b; i < e; ++i) {
      try {
        const auto tree = poisson_tree_sample(law, rate, rng, 1'000'000);
        // Only the root count is an independent draw; pooling all vertices
        // over-weights leaves by one per tree.
        t.counts[std::min<std::size_t>(tree.skeleton.child_counts().front(), bins)] += 1.0;
        for (double h : tree.lifetimes) t.life.add(h);
      } catch (const NodeBudgetExceeded&) {
        ++t.budget_hits;
      }
    }
    return t;
  });
  Tally total;
  for (const auto& c : chunks) {
    for (std::size_t k = 0; k < total.counts.size(); ++k) total.counts[k] += c.counts[k];
    total.life.merge(c.life);
    total.budget_hits += c.budget_hits;
  }
  double vertices = 0.0;  // roots actually counted
  for (double c : total.counts) vertices += c;
  std::vector<double> expected(total.counts.size());
  double head = 0.0;
  for (std::int64_t k = 0; k < bins; ++k) {
    expected[static_cast<std::size_t>(k)] = vertices * law.pmf(k);
    head += law.pmf(k);
  }
  expected[bins] = vertices * std::max(0.0, 1.0 - head);
  // Merge sparse upper bins into the last populated one.
  std::vector<double> obs_m, exp_m;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    if (expected[k] == 0.0 && total.counts[k] == 0.0) continue;
    if (!exp_m.empty() && exp_m.back() < 5.0) {
      obs_m.back() += total.counts[k];
      exp_m.back() += expected[k];
    } else {
      obs_m.push_back(total.counts[k]);
      exp_m.push_back(expected[k]);
    }
  }
  if (exp_m.size() > 1 && exp_m.back() < 5.0) {
    obs_m[obs_m.size() - 2] += obs_m.back();
    exp_m[exp_m.size() - 2] += exp_m.back();
    obs_m.pop_back();
    exp_m.pop_back();
  }
  const auto chi = chi_square(obs_m, exp_m);
  const double normalization = std::abs(law.dense_mass() + law.tail_mass() - 1.0);
  const double life_z = std::abs(total.life.mean() - 1.0 / rate) / std::max(total.life.standard_error(), 1e-300);
  r.parameters = {{"mechanism", m.describe()}, {"lambda", lam}, {"trees", n_trees}};
  r.statistics = {{"pmf_normalization_defect", normalization},
                  {"p0", law.pmf(0)}, {"p1", law.pmf(1)}, {"p2", law.pmf(2)},
                  {"mean_offspring", law.mean()},
                  {"chi_square", chi.stat}, {"dof", chi.dof}, {"p_value", chi.p_value},
                  {"lifetime_mean", total.life.mean()}, {"lifetime_reference", 1.0 / rate},
                  {"lifetime_z", life_z}, {"budget_hits", total.budget_hits}};
  r.statistic = chi.p_value;
  r.tolerance = significance;
  r.pass = normalization <= 1e-10 && chi.p_value >= significance && life_z <= 4.0;
  r.notes = "chi-square on root offspring counts; pass requires pmf normalization within 1e-10, "
            "p-value >= significance, lifetime mean within 4 SE. Trees over budget are dropped and counted";
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace levytree
