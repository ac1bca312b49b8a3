#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "levytree/mechanism.hpp"
#include "levytree/series_pmf.hpp"

namespace levytree {

/// Offspring law mu of a (sub)critical Galton-Watson tree.
class OffspringDistribution {
 public:
  enum class Kind { geometric, stable, custom };

  /// mu(k) = 2^{-(k+1)}: critical, variance 2.
  static OffspringDistribution geometric_half();
  /// Generating function g(r) = r + (1-r)^gamma / gamma, 1 < gamma <= 2.
  static OffspringDistribution stable(double gamma);
  /// Arbitrary finite pmf; must sum to 1, have mean <= 1 and mu(1) != 1.
  static OffspringDistribution custom(std::vector<double> pmf);
  /// Parses "geometric", "stable:<gamma>" or "custom:<path to CSV>".
  static OffspringDistribution from_spec(const std::string& spec);

  Kind kind() const { return kind_; }
  double stable_index() const { return gamma_; }
  std::string spec() const;

  double pmf(std::int64_t k) const;
  const SeriesPmf& law() const { return law_; }
  double mean() const;
  /// Offspring variance; infinite for the stable family with gamma < 2.
  double variance() const;

  std::int64_t sample(std::mt19937_64& rng) const;

  /// g(r) = sum mu(k) r^k on [0,1].
  double gf(double r) const;
  /// n-fold composition; g_0(r) = r.
  double gf_iterate(std::int64_t n, double r) const;

 private:
  OffspringDistribution(Kind kind, double gamma, SeriesPmf law, std::string source);

  Kind kind_;
  double gamma_ = 2.0;
  SeriesPmf law_;
  std::string source_;
};

/// Population scale p and time scale gamma_p.
struct RescalingPlan {
  std::int64_t p = 1;
  std::int64_t gamma_p = 1;
};

/// gamma_p = p for finite-variance laws, ceil(p^{gamma-1}) for the stable family.
RescalingPlan rescaling_plan(const OffspringDistribution& d, std::int64_t p);

/// Numerical estimate of the constant c in psi(u) = c u^gamma obtained as the
/// limit of p*gamma_p*log E[exp(-lam (xi-1)/p)] / lam^gamma with gamma_p = p^{gamma-1}.
double calibrate_limit_constant(const OffspringDistribution& d, double p = 1e10, double lam = 1.0);

/// Limiting branching mechanism of the rescaled Galton-Watson processes.
BranchingMechanism limit_mechanism(const OffspringDistribution& d);

}  // namespace levytree
