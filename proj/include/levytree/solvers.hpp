#pragma once

#include <functional>
#include <vector>

#include "levytree/mechanism.hpp"

namespace levytree {

/// Values on a uniform grid x_i = x0 + i dx.
struct GridFunction {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> values;

  /// Linear interpolation; clamps outside the grid.
  double at(double x) const;
};

struct Super2Options {
  double half_width = 8.0;   // computational domain [-L, L], Neumann ends
  int initial_cells = 400;   // cells at the coarsest level
  int initial_steps = 50;    // time steps at the coarsest level
  double tolerance = 1e-6;   // stop when successive levels differ by less at the probe points
  int max_levels = 10;
  std::vector<double> probes{0.0};
};

struct Super2Result {
  GridFunction u;
  int levels = 0;
  double last_change = 0.0;
  bool converged = false;
};

/// u_t for du/dt = (1/2) u'' - psi(u), u_0 = f: the Laplace exponent of the
/// superprocess with Brownian motion, E exp(-<Z_t, f>) = exp(-u_t(x)).
/// Strang splitting with the exact CSBP flow for the reaction and
/// Crank-Nicolson diffusion (two backward Euler start-up steps); space and
/// time are refined together until successive levels agree at the probes.
Super2Result solve_super2(const BranchingMechanism& m, const std::function<double(double)>& f,
                          double t, const Super2Options& opt = {});

/// One fixed-resolution solve (cells, steps); exposed for convergence tests.
GridFunction solve_super2_fixed(const BranchingMechanism& m, const std::function<double(double)>& f,
                                double t, double half_width, int cells, int steps);

/// Solution of (1/2) u'' = psi(u) on (-R, R) with u(-R) = g_left, u(R) = g_right.
struct ExitSolution {
  enum class Kind { shooting, collocation };
  Kind kind = Kind::shooting;
  double R = 1.0;
  std::vector<double> x, u, du;
  double slope = 0.0;  // u'(-R)

  double at(double y) const;
};

/// RK4 shooting with bisection on u'(-R). Trajectories that become negative
/// count as undershooting and blow-ups as overshooting.
ExitSolution solve_exit_shooting(const BranchingMechanism& m, double R, double g_left,
                                 double g_right, int steps = 4000);

/// Chebyshev collocation with Newton iterations.
ExitSolution solve_exit_collocation(const BranchingMechanism& m, double R, double g_left,
                                    double g_right, int nodes = 64);

}  // namespace levytree
