#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "levytree/offspring.hpp"
#include "levytree/parallel.hpp"
#include "levytree/report.hpp"

namespace levytree {

/// Displacement law of one generation of the spatial motion, with time step h.
class SpatialKernel {
 public:
  using Sampler = std::function<double(double x, double h, std::mt19937_64& rng)>;

  /// N(0, h) steps.
  static SpatialKernel gaussian();
  /// +-sqrt(h) with probability 1/2 each.
  static SpatialKernel lattice();
  static SpatialKernel custom(std::string name, Sampler sampler);
  /// "gaussian" or "lattice".
  static SpatialKernel from_name(const std::string& name);

  const std::string& name() const { return name_; }
  double step(double x, double h, std::mt19937_64& rng) const;

 private:
  enum class Kind { gaussian, lattice, custom };
  SpatialKernel(Kind kind, std::string name, Sampler sampler = {})
      : kind_(kind), name_(std::move(name)), sampler_(std::move(sampler)) {}

  Kind kind_;
  std::string name_;
  Sampler sampler_;
};

/// Particles of one generation, each carrying mass `weight`.
struct MeasureSample {
  std::int64_t generation = 0;
  double level = 0.0;  // generation / gamma_p
  double weight = 0.0;
  std::vector<double> positions;

  double total_mass() const { return weight * static_cast<double>(positions.size()); }
};

/// p independent Galton-Watson trees rooted at x whose vertices move by one
/// kernel step (h = 1/gamma_p) per generation; masses 1/p. Returns the
/// generations 0..[gamma_p t] when `keep_history` is set and only the last
/// one otherwise.
std::vector<MeasureSample> branching_walk(const OffspringDistribution& d, std::int64_t p,
                                          const SpatialKernel& kernel, double x, double t,
                                          std::mt19937_64& rng, bool keep_history = false,
                                          std::int64_t budget = 100'000'000);

/// exp(-<Z, f>).
double laplace_functional(const MeasureSample& z, const std::function<double(double)>& f);

/// First positions outside (-R, R) along the branching walk, mass 1/p each.
struct ExitMeasure {
  double R = 1.0;
  double weight = 0.0;
  std::vector<double> positions;
  std::int64_t generations = 0;

  double total_mass() const { return weight * static_cast<double>(positions.size()); }
  /// exp(-sum of weight * g(position)).
  double laplace(const std::function<double(double)>& g) const;
};

ExitMeasure exit_measure(const OffspringDistribution& d, std::int64_t p, const SpatialKernel& kernel,
                         double R, double x, std::mt19937_64& rng,
                         std::int64_t budget = 100'000'000);

/// Constant test function: E exp(-lam <Z_t, 1>) against exp(-u_t(lam)).
ExperimentReport snake_homogeneous(const OffspringDistribution& d, std::int64_t p, double t, double lam,
                                   std::int64_t reps, const RunContext& ctx);

/// f = lam 1_[-a, a]: Monte Carlo E exp(-<Z_t, f>) at x against the
/// reaction-diffusion reference exp(-u_t(x)); within 3 SE + bias.
ExperimentReport snake_laplace(const OffspringDistribution& d, std::int64_t p, double t, double lam,
                               double a, double x, std::int64_t reps, const RunContext& ctx,
                               double bias = 0.02);

/// Constant boundary value g on both sides of (-R, R): Monte Carlo
/// E exp(-<Z^D, g>) against exp(-u(x)) from the shooting solution of
/// (1/2) u'' = psi(u); also checks shooting against collocation.
ExperimentReport snake_exit(const OffspringDistribution& d, std::int64_t p, const SpatialKernel& kernel,
                            double R, double g, double x, std::int64_t reps, const RunContext& ctx,
                            double bias = 0.03, double solver_tolerance = 1e-6);

}  // namespace levytree
