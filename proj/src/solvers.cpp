#include "levytree/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "levytree/csbp.hpp"

namespace levytree {

double GridFunction::at(double x) const {
  if (values.empty()) throw std::logic_error("GridFunction::at: empty grid");
  const double s = (x - x0) / dx;
  if (s <= 0.0) return values.front();
  const auto last = static_cast<double>(values.size() - 1);
  if (s >= last) return values.back();
  const auto i = static_cast<std::size_t>(s);
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

namespace {

// Solves (1 + 2c) y_i - c y_{i-1} - c y_{i+1} = rhs_i with reflecting ends
// (the missing neighbour is replaced by the mirrored one).
void implicit_diffusion(std::vector<double>& y, double c, std::vector<double>& scratch_c,
                        std::vector<double>& scratch_d) {
  const std::size_t n = y.size();
  scratch_c.assign(n, 0.0);
  scratch_d.assign(n, 0.0);
  const double diag = 1.0 + 2.0 * c;
  // Row 0: diag y0 - 2c y1; row n-1: -2c y_{n-2} + diag y_{n-1}.
  double upper = -2.0 * c;
  scratch_c[0] = upper / diag;
  scratch_d[0] = y[0] / diag;
  for (std::size_t i = 1; i < n; ++i) {
    const double lower = (i == n - 1) ? -2.0 * c : -c;
    upper = -c;
    const double denom = diag - lower * scratch_c[i - 1];
    scratch_c[i] = upper / denom;
    scratch_d[i] = (y[i] - lower * scratch_d[i - 1]) / denom;
  }
  y[n - 1] = scratch_d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) y[i] = scratch_d[i] - scratch_c[i] * y[i + 1];
}

// y <- (1 - 2c) y_i + c (y_{i-1} + y_{i+1}) with reflecting ends.
void explicit_diffusion(std::vector<double>& y, double c, std::vector<double>& out) {
  const std::size_t n = y.size();
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? y[1] : y[i - 1];
    const double right = i == n - 1 ? y[n - 2] : y[i + 1];
    out[i] = (1.0 - 2.0 * c) * y[i] + c * (left + right);
  }
  y.swap(out);
}

}  // namespace

GridFunction solve_super2_fixed(const BranchingMechanism& m, const std::function<double(double)>& f,
                                double t, double half_width, int cells, int steps) {
  if (cells < 2 || steps < 1) throw std::invalid_argument("solve_super2: need cells >= 2 and steps >= 1");
  if (t < 0.0) throw std::domain_error("solve_super2: t must be >= 0");
  const CsbpKernel kernel(m);
  GridFunction g;
  g.x0 = -half_width;
  g.dx = 2.0 * half_width / cells;
  g.values.resize(static_cast<std::size_t>(cells) + 1);
  // Cell averages of f; a jump on a node is resolved as its midpoint value.
  constexpr int sub = 16;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double xi = g.x0 + g.dx * static_cast<double>(i);
    double acc = 0.0;
    for (int k = 0; k < sub; ++k) acc += f(xi + g.dx * ((k + 0.5) / sub - 0.5));
    const double v = acc / sub;
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("solve_super2: f must be finite and nonnegative");
    g.values[i] = v;
  }
  if (t == 0.0) return g;

  std::vector<double> sc, sd, tmp;
  auto react = [&](double tau) {
    for (auto& v : g.values) v = kernel.u(tau, std::max(v, 0.0));
  };
  const double dt = t / steps;
  for (int n = 0; n < steps; ++n) {
    if (n < 2) {
      // Two backward Euler half steps damp the high modes of rough data.
      for (int half = 0; half < 2; ++half) {
        const double h = 0.5 * dt;
        react(0.5 * h);
        implicit_diffusion(g.values, 0.5 * h / (g.dx * g.dx), sc, sd);
        react(0.5 * h);
      }
      continue;
    }
    const double c = 0.25 * dt / (g.dx * g.dx);  // (dt/2) * (1/2) / dx^2
    react(0.5 * dt);
    explicit_diffusion(g.values, c, tmp);
    implicit_diffusion(g.values, c, sc, sd);
    react(0.5 * dt);
  }
  return g;
}

Super2Result solve_super2(const BranchingMechanism& m, const std::function<double(double)>& f,
                          double t, const Super2Options& opt) {
  Super2Result out;
  std::vector<double> previous;
  for (int level = 0; level < opt.max_levels; ++level) {
    const int cells = opt.initial_cells << level;
    const int steps = opt.initial_steps << level;
    out.u = solve_super2_fixed(m, f, t, opt.half_width, cells, steps);
    out.levels = level + 1;
    std::vector<double> probe;
    for (double x : opt.probes) probe.push_back(out.u.at(x));
    if (!previous.empty()) {
      out.last_change = 0.0;
      for (std::size_t i = 0; i < probe.size(); ++i) {
        out.last_change = std::max(out.last_change, std::abs(probe[i] - previous[i]));
      }
      if (out.last_change < opt.tolerance) {
        out.converged = true;
        return out;
      }
    }
    previous = std::move(probe);
  }
  return out;
}

double ExitSolution::at(double y) const {
  if (x.empty()) throw std::logic_error("ExitSolution::at: empty solution");
  if (y < -R || y > R) throw std::domain_error("ExitSolution::at: point outside the domain");
  if (kind == Kind::collocation) {
    // Barycentric interpolation on Chebyshev points of the second kind.
    const std::size_t n = x.size() - 1;
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      if (y == x[j]) return u[j];
      double w = (j % 2 == 0) ? 1.0 : -1.0;
      if (j == 0 || j == n) w *= 0.5;
      w /= (y - x[j]);
      num += w * u[j];
      den += w;
    }
    return num / den;
  }
  // Cubic Hermite on the uniform shooting grid.
  const double h = x[1] - x[0];
  const double s = std::clamp((y - x.front()) / h, 0.0, static_cast<double>(x.size() - 1));
  auto i = static_cast<std::size_t>(s);
  if (i >= x.size() - 1) i = x.size() - 2;
  const double w = s - static_cast<double>(i);
  const double h00 = (1 + 2 * w) * (1 - w) * (1 - w), h10 = w * (1 - w) * (1 - w);
  const double h01 = w * w * (3 - 2 * w), h11 = w * w * (w - 1);
  return h00 * u[i] + h10 * h * du[i] + h01 * u[i + 1] + h11 * h * du[i + 1];
}

namespace {

enum class Shot { under, over, landed };

struct ShotResult {
  Shot status;
  double end;  // u(R) when landed
};

ShotResult shoot(const BranchingMechanism& m, double R, double g_left, double slope, int steps,
                 std::vector<double>* xs = nullptr, std::vector<double>* us = nullptr,
                 std::vector<double>* dus = nullptr) {
  const double h = 2.0 * R / steps;
  double u = g_left, w = slope;
  auto acc = [&](double v) { return 2.0 * m.psi(std::max(v, 0.0)); };
  if (xs) {
    xs->assign(1, -R);
    us->assign(1, u);
    dus->assign(1, w);
  }
  for (int i = 0; i < steps; ++i) {
    const double k1u = w, k1w = acc(u);
    const double k2u = w + 0.5 * h * k1w, k2w = acc(u + 0.5 * h * k1u);
    const double k3u = w + 0.5 * h * k2w, k3w = acc(u + 0.5 * h * k2u);
    const double k4u = w + h * k3w, k4w = acc(u + h * k3u);
    u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    w += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
    if (u < 0.0) return {Shot::under, 0.0};
    if (!std::isfinite(u) || u > 1e12) return {Shot::over, 0.0};
    if (xs) {
      xs->push_back(-R + h * (i + 1));
      us->push_back(u);
      dus->push_back(w);
    }
  }
  return {Shot::landed, u};
}

// Signed miss: negative when the trajectory ends below g_right.
double miss(const BranchingMechanism& m, double R, double g_left, double g_right, double slope, int steps) {
  const auto r = shoot(m, R, g_left, slope, steps);
  if (r.status == Shot::under) return -std::numeric_limits<double>::infinity();
  if (r.status == Shot::over) return std::numeric_limits<double>::infinity();
  return r.end - g_right;
}

}  // namespace

ExitSolution solve_exit_shooting(const BranchingMechanism& m, double R, double g_left,
                                 double g_right, int steps) {
  if (!(R > 0.0)) throw std::domain_error("solve_exit_shooting: R must be positive");
  if (g_left < 0.0 || g_right < 0.0) throw std::domain_error("solve_exit_shooting: boundary data must be >= 0");
  auto F = [&](double s) { return miss(m, R, g_left, g_right, s, steps); };
  double lo = -1.0, hi = 1.0;
  for (int i = 0; F(lo) >= 0.0; ++i) {
    if (i > 200) throw std::runtime_error("solve_exit_shooting: cannot bracket from below");
    lo *= 2.0;
  }
  for (int i = 0; F(hi) <= 0.0; ++i) {
    if (i > 200) throw std::runtime_error("solve_exit_shooting: cannot bracket from above");
    hi *= 2.0;
  }
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = F(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    (fm < 0.0 ? lo : hi) = mid;
  }
  ExitSolution sol;
  sol.kind = ExitSolution::Kind::shooting;
  sol.R = R;
  sol.slope = 0.5 * (lo + hi);
  const auto r = shoot(m, R, g_left, sol.slope, steps, &sol.x, &sol.u, &sol.du);
  if (r.status != Shot::landed) {
    // The midpoint can fall on the wrong side at the last bit; take the landed end.
    sol.slope = lo;
    if (shoot(m, R, g_left, lo, steps, &sol.x, &sol.u, &sol.du).status != Shot::landed) {
      throw std::runtime_error("solve_exit_shooting: final trajectory failed to land");
    }
  }
  return sol;
}

ExitSolution solve_exit_collocation(const BranchingMechanism& m, double R, double g_left,
                                    double g_right, int nodes) {
  if (!(R > 0.0)) throw std::domain_error("solve_exit_collocation: R must be positive");
  if (nodes < 4) throw std::invalid_argument("solve_exit_collocation: need at least 4 nodes");
  const int N = nodes;
  Eigen::VectorXd x(N + 1);
  for (int j = 0; j <= N; ++j) x(j) = std::cos(std::numbers::pi * j / N);
  Eigen::VectorXd c(N + 1);
  for (int j = 0; j <= N; ++j) c(j) = ((j == 0 || j == N) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      if (i != j) D(i, j) = (c(i) / c(j)) / (x(i) - x(j));
    }
  }
  for (int i = 0; i <= N; ++i) D(i, i) = -D.row(i).sum();
  D /= R;
  x *= R;
  const Eigen::MatrixXd D2 = D * D;

  // Start above the solution: the constant max(g) is a supersolution.
  Eigen::VectorXd u = Eigen::VectorXd::Constant(N + 1, std::max(g_left, g_right));
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd res = 0.5 * D2 * u;
    Eigen::MatrixXd J = 0.5 * D2;
    for (int j = 1; j < N; ++j) {
      const double v = std::max(u(j), 0.0);
      res(j) -= m.psi(v);
      J(j, j) -= m.psi_prime(v);
    }
    res(0) = u(0) - g_right;
    res(N) = u(N) - g_left;
    J.row(0).setZero();
    J.row(N).setZero();
    J(0, 0) = 1.0;
    J(N, N) = 1.0;
    const Eigen::VectorXd step = J.partialPivLu().solve(res);
    u -= step;
    if (step.lpNorm<Eigen::Infinity>() < 1e-14 * std::max(1.0, u.lpNorm<Eigen::Infinity>())) break;
  }
  ExitSolution sol;
  sol.kind = ExitSolution::Kind::collocation;
  sol.R = R;
  const Eigen::VectorXd du = D * u;
  sol.x.assign(x.data(), x.data() + x.size());
  sol.u.assign(u.data(), u.data() + u.size());
  sol.du.assign(du.data(), du.data() + du.size());
  sol.slope = du(N);
  return sol;
}

}  // namespace levytree
