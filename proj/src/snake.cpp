#include "levytree/snake.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "levytree/csbp.hpp"
#include "levytree/gw.hpp"
#include "levytree/solvers.hpp"
#include "levytree/stats.hpp"

namespace levytree {

SpatialKernel SpatialKernel::gaussian() { return SpatialKernel(Kind::gaussian, "gaussian"); }
SpatialKernel SpatialKernel::lattice() { return SpatialKernel(Kind::lattice, "lattice"); }

SpatialKernel SpatialKernel::custom(std::string name, Sampler sampler) {
  if (!sampler) throw std::invalid_argument("SpatialKernel::custom: empty sampler");
  return SpatialKernel(Kind::custom, std::move(name), std::move(sampler));
}

SpatialKernel SpatialKernel::from_name(const std::string& name) {
  if (name == "gaussian") return gaussian();
  if (name == "lattice") return lattice();
  throw std::invalid_argument("unknown spatial kernel '" + name + "'");
}

double SpatialKernel::step(double x, double h, std::mt19937_64& rng) const {
  switch (kind_) {
    case Kind::gaussian:
      return x + std::sqrt(h) * std::normal_distribution<double>()(rng);
    case Kind::lattice:
      return x + ((rng() >> 63) ? std::sqrt(h) : -std::sqrt(h));
    case Kind::custom:
      return sampler_(x, h, rng);
  }
  return x;
}

std::vector<MeasureSample> branching_walk(const OffspringDistribution& d, std::int64_t p,
                                          const SpatialKernel& kernel, double x, double t,
                                          std::mt19937_64& rng, bool keep_history,
                                          std::int64_t budget) {
  if (t < 0.0) throw std::domain_error("branching_walk: horizon must be >= 0");
  const auto plan = rescaling_plan(d, p);
  const auto generations = static_cast<std::int64_t>(std::floor(static_cast<double>(plan.gamma_p) * t));
  const double h = 1.0 / static_cast<double>(plan.gamma_p);
  const double weight = 1.0 / static_cast<double>(p);
  std::vector<MeasureSample> out;
  MeasureSample cur{0, 0.0, weight, std::vector<double>(static_cast<std::size_t>(p), x)};
  std::int64_t used = p;
  for (std::int64_t g = 0; g < generations; ++g) {
    MeasureSample next{g + 1, static_cast<double>(g + 1) * h, weight, {}};
    next.positions.reserve(cur.positions.size() + 16);
    for (double y : cur.positions) {
      for (auto k = d.sample(rng); k > 0; --k) next.positions.push_back(kernel.step(y, h, rng));
    }
    used += static_cast<std::int64_t>(next.positions.size());
    if (used > budget) throw NodeBudgetExceeded(budget);
    if (keep_history) out.push_back(std::move(cur));
    cur = std::move(next);
  }
  out.push_back(std::move(cur));
  return out;
}

double laplace_functional(const MeasureSample& z, const std::function<double(double)>& f) {
  double s = 0.0;
  for (double y : z.positions) s += f(y);
  return std::exp(-z.weight * s);
}

double ExitMeasure::laplace(const std::function<double(double)>& g) const {
  double s = 0.0;
  for (double y : positions) s += g(y);
  return std::exp(-weight * s);
}

ExitMeasure exit_measure(const OffspringDistribution& d, std::int64_t p, const SpatialKernel& kernel,
                         double R, double x, std::mt19937_64& rng, std::int64_t budget) {
  if (!(x > -R && x < R)) throw std::domain_error("exit_measure: start must lie inside (-R, R)");
  const auto plan = rescaling_plan(d, p);
  const double h = 1.0 / static_cast<double>(plan.gamma_p);
  ExitMeasure out;
  out.R = R;
  out.weight = 1.0 / static_cast<double>(p);
  std::vector<double> cur(static_cast<std::size_t>(p), x), next;
  std::int64_t used = p;
  // A small tolerance keeps lattice positions that land on +-R numerically
  // on the boundary.
  const double edge = R - 1e-9 * std::max(1.0, R);
  while (!cur.empty()) {
    next.clear();
    for (double y : cur) {
      for (auto k = d.sample(rng); k > 0; --k) {
        const double z = kernel.step(y, h, rng);
        if (std::abs(z) >= edge) {
          out.positions.push_back(z);
        } else {
          next.push_back(z);
        }
      }
    }
    used += static_cast<std::int64_t>(next.size());
    if (used > budget) throw NodeBudgetExceeded(budget);
    cur.swap(next);
    ++out.generations;
  }
  return out;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ExperimentReport snake_report(const char* name, const char* anchor, const RunContext& ctx) {
  ExperimentReport r;
  r.name = name;
  r.anchor = anchor;
  r.seed = ctx.seed;
  r.workers = ctx.workers;
  r.notes = "convergence rate of the branching-walk approximation is not known; bias budgets are empirical";
  return r;
}

}  // namespace

ExperimentReport snake_homogeneous(const OffspringDistribution& d, std::int64_t p, double t, double lam,
                                   std::int64_t reps, const RunContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  auto r = snake_report("snake-homogeneous", "total mass of the superprocess is a psi-CSBP", ctx);
  const auto kernel = SpatialKernel::gaussian();
  const auto chunks = run_chunked<Moments>(reps, 100, ctx.seed, ctx.workers,
                                           [&](std::int64_t b, std::int64_t e, std::mt19937_64& rng) {
    Moments m;
    for (auto i = b; i < e; ++i) {
      const auto z = branching_walk(d, p, kernel, 0.0, t, rng).back();
      m.add(laplace_functional(z, [lam](double) { return lam; }));
    }
    return m;
  });
  Moments m;
  for (const auto& c : chunks) m.merge(c);
  const CsbpKernel k(limit_mechanism(d));
  const double target = std::exp(-k.u(t, lam));
  const double gap = std::abs(m.mean() - target);
  r.parameters = {{"offspring", d.spec()}, {"p", p}, {"t", t}, {"lambda", lam}, {"reps", reps},
                  {"kernel", kernel.name()}};
  r.statistics = {{"estimate", m.mean()}, {"se", m.standard_error()}, {"target", target}, {"gap", gap}};
  r.statistic = gap;
  r.tolerance = 3.0 * m.standard_error();
  r.pass = gap <= r.tolerance;
  r.wall_time_s = seconds_since(start);
  return r;
}

ExperimentReport snake_laplace(const OffspringDistribution& d, std::int64_t p, double t, double lam,
                               double a, double x, std::int64_t reps, const RunContext& ctx,
                               double bias) {
  const auto start = std::chrono::steady_clock::now();
  auto r = snake_report("snake-laplace", "Laplace functional of the superprocess solves the mild reaction-diffusion equation", ctx);
  const auto kernel = SpatialKernel::gaussian();
  auto f = [lam, a](double y) { return std::abs(y) <= a ? lam : 0.0; };
  const auto chunks = run_chunked<Moments>(reps, 10, ctx.seed, ctx.workers,
                                           [&](std::int64_t b, std::int64_t e, std::mt19937_64& rng) {
    Moments m;
    for (auto i = b; i < e; ++i) m.add(laplace_functional(branching_walk(d, p, kernel, x, t, rng).back(), f));
    return m;
  });
  Moments m;
  for (const auto& c : chunks) m.merge(c);
  const auto mech = limit_mechanism(d);
  Super2Options opt;
  opt.half_width = std::max(6.0, a + 6.0 + std::abs(x));
  opt.initial_cells = static_cast<int>(std::ceil(opt.half_width * 20.0));
  opt.probes = {x};
  const auto sol = solve_super2(mech, f, t, opt);
  const double target = std::exp(-sol.u.at(x));
  const double gap = std::abs(m.mean() - target);
  r.parameters = {{"offspring", d.spec()}, {"mechanism", mech.describe()}, {"p", p}, {"t", t},
                  {"lambda", lam}, {"support_half_width", a}, {"x", x}, {"reps", reps},
                  {"kernel", kernel.name()}};
  r.statistics = {{"estimate", m.mean()}, {"se", m.standard_error()}, {"target", target},
                  {"u_reference", sol.u.at(x)}, {"solver_levels", sol.levels},
                  {"solver_last_change", sol.last_change}, {"solver_converged", sol.converged},
                  {"gap", gap}};
  r.statistic = gap;
  r.tolerance = 3.0 * m.standard_error() + bias;
  r.pass = gap <= r.tolerance && sol.converged;
  r.wall_time_s = seconds_since(start);
  return r;
}

ExperimentReport snake_exit(const OffspringDistribution& d, std::int64_t p, const SpatialKernel& kernel,
                            double R, double g, double x, std::int64_t reps, const RunContext& ctx,
                            double bias, double solver_tolerance) {
  const auto start = std::chrono::steady_clock::now();
  auto r = snake_report("snake-exit", "exit measure Laplace functional solves (1/2) u'' = psi(u) with boundary data g", ctx);
  auto gf = [g](double) { return g; };
  struct Chunk {
    Moments laplace;
    Moments mass;
    ExitMeasure first;
  };
  const auto chunks = run_chunked<Chunk>(reps, 10, ctx.seed, ctx.workers,
                                         [&](std::int64_t b, std::int64_t e, std::mt19937_64& rng) {
    Chunk c;
    for (auto i = b; i < e; ++i) {
      auto z = exit_measure(d, p, kernel, R, x, rng);
      c.laplace.add(z.laplace(gf));
      c.mass.add(z.total_mass());
      if (i == b) c.first = std::move(z);
    }
    return c;
  });
  Chunk total;
  for (const auto& c : chunks) {
    total.laplace.merge(c.laplace);
    total.mass.merge(c.mass);
  }
  const auto mech = limit_mechanism(d);
  const auto shooting = solve_exit_shooting(mech, R, g, g);
  const auto colloc = solve_exit_collocation(mech, R, g, g);
  double solver_gap = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double y = -R + 2.0 * R * i / 40.0;
    solver_gap = std::max(solver_gap, std::abs(shooting.at(y) - colloc.at(y)));
  }
  const double target = std::exp(-shooting.at(x));
  const double gap = std::abs(total.laplace.mean() - target);
  r.parameters = {{"offspring", d.spec()}, {"mechanism", mech.describe()}, {"p", p},
                  {"kernel", kernel.name()}, {"R", R}, {"g", g}, {"x", x}, {"reps", reps}};
  r.statistics = {{"estimate", total.laplace.mean()}, {"se", total.laplace.standard_error()},
                  {"target", target}, {"u_shooting", shooting.at(x)}, {"u_collocation", colloc.at(x)},
                  {"solver_gap", solver_gap}, {"mean_exit_mass", total.mass.mean()}, {"gap", gap}};
  r.statistic = gap;
  r.tolerance = 3.0 * total.laplace.standard_error() + bias;
  r.raw_header = {"position", "weight"};
  if (!chunks.empty()) {
    for (double y : chunks.front().first.positions) r.raw_rows.push_back({y, chunks.front().first.weight});
  }
  r.pass = gap <= r.tolerance && solver_gap <= solver_tolerance;
  r.wall_time_s = seconds_since(start);
  return r;
}

}  // namespace levytree
