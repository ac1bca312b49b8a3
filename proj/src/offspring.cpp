#include "levytree/offspring.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace levytree {

OffspringDistribution::OffspringDistribution(Kind kind, double gamma, SeriesPmf law,
                                             std::string source)
    : kind_(kind), gamma_(gamma), law_(std::move(law)), source_(std::move(source)) {}

OffspringDistribution OffspringDistribution::geometric_half() {
  std::vector<double> dense(64);
  for (std::size_t k = 0; k < dense.size(); ++k) dense[k] = std::ldexp(1.0, -static_cast<int>(k) - 1);
  return OffspringDistribution(Kind::geometric, 2.0, SeriesPmf(std::move(dense), {}, {}), "geometric");
}

OffspringDistribution OffspringDistribution::stable(double gamma) {
  if (!(gamma > 1.0 && gamma <= 2.0)) {
    throw std::invalid_argument("stable offspring: index must lie in (1,2]");
  }
  const StableSeries series{gamma, 1.0 / gamma};
  const std::int64_t cutoff = gamma == 2.0 ? 2 : 4096;
  std::vector<double> dense(static_cast<std::size_t>(cutoff) + 1, 0.0);
  dense[0] = 1.0 / gamma;
  for (std::int64_t k = 2; k <= cutoff; ++k) dense[static_cast<std::size_t>(k)] = series.coefficient(k);
  std::ostringstream name;
  name << "stable:" << gamma;
  return OffspringDistribution(Kind::stable, gamma, SeriesPmf(std::move(dense), {series}, {}),
                               name.str());
}

OffspringDistribution OffspringDistribution::custom(std::vector<double> pmf) {
  if (pmf.empty()) throw std::invalid_argument("custom offspring: empty pmf");
  double total = 0.0, mean = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (!(pmf[k] >= 0.0)) throw std::invalid_argument("custom offspring: negative probability");
    total += pmf[k];
    mean += static_cast<double>(k) * pmf[k];
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("custom offspring: pmf must sum to 1");
  for (auto& p : pmf) p /= total;
  mean /= total;
  if (mean > 1.0 + 1e-12) throw std::invalid_argument("custom offspring: supercritical (mean > 1)");
  if (pmf.size() > 1 && pmf[1] == 1.0) throw std::invalid_argument("custom offspring: mu(1) = 1 is degenerate");
  if (pmf.size() < 2) pmf.resize(2, 0.0);
  return OffspringDistribution(Kind::custom, 2.0, SeriesPmf(std::move(pmf), {}, {}), "custom");
}

OffspringDistribution OffspringDistribution::from_spec(const std::string& spec) {
  if (spec == "geometric") return geometric_half();
  if (spec.rfind("stable:", 0) == 0) {
    std::size_t used = 0;
    const auto text = spec.substr(7);
    const double g = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("offspring: bad stable index in '" + spec + "'");
    return stable(g);
  }
  if (spec.rfind("custom:", 0) == 0) {
    const auto path = spec.substr(7);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("offspring: cannot open pmf file '" + path + "'");
    std::vector<double> pmf;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      // Either "p" or "k,p" per line.
      const auto comma = line.find(',');
      const auto field = comma == std::string::npos ? line : line.substr(comma + 1);
      try {
        pmf.push_back(std::stod(field));
      } catch (const std::exception&) {
        if (pmf.empty()) continue;  // header
        throw std::invalid_argument("offspring: bad pmf line '" + line + "'");
      }
    }
    auto d = custom(std::move(pmf));
    d.source_ = spec;
    return d;
  }
  throw std::invalid_argument("offspring: unknown spec '" + spec + "'");
}

std::string OffspringDistribution::spec() const { return source_; }

double OffspringDistribution::pmf(std::int64_t k) const {
  if (kind_ == Kind::geometric) return k < 0 ? 0.0 : std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(k, 2000)) - 1);
  return law_.pmf(k);
}

double OffspringDistribution::mean() const {
  if (kind_ != Kind::custom) return 1.0;
  return law_.mean();
}

double OffspringDistribution::variance() const {
  switch (kind_) {
    case Kind::geometric:
      return 2.0;
    case Kind::stable:
      return gamma_ == 2.0 ? 1.0 : INFINITY;
    case Kind::custom: {
      double m1 = 0.0, m2 = 0.0;
      const auto& d = law_.dense();
      for (std::size_t k = 0; k < d.size(); ++k) {
        m1 += static_cast<double>(k) * d[k];
        m2 += static_cast<double>(k * k) * d[k];
      }
      return m2 - m1 * m1;
    }
  }
  return 0.0;
}

std::int64_t OffspringDistribution::sample(std::mt19937_64& rng) const {
  if (kind_ == Kind::geometric) {
    // Trailing zeros of a uniform word are Geometric(1/2) on {0,1,...}.
    std::int64_t k = 0;
    for (;;) {
      const auto word = rng();
      if (word != 0) return k + std::countr_zero(word);
      k += 64;
    }
  }
  return law_.sample(rng);
}

double OffspringDistribution::gf(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("gf: argument must lie in [0,1]");
  switch (kind_) {
    case Kind::geometric:
      return 1.0 / (2.0 - r);
    case Kind::stable:
      return r + std::pow(1.0 - r, gamma_) / gamma_;
    case Kind::custom: {
      const auto& d = law_.dense();
      double out = 0.0;
      for (std::size_t k = d.size(); k-- > 0;) out = out * r + d[k];
      return out;
    }
  }
  return 0.0;
}

double OffspringDistribution::gf_iterate(std::int64_t n, double r) const {
  if (n < 0) throw std::domain_error("gf_iterate: n must be >= 0");
  if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("gf_iterate: argument must lie in [0,1]");
  for (std::int64_t i = 0; i < n; ++i) r = gf(r);
  return r;
}

RescalingPlan rescaling_plan(const OffspringDistribution& d, std::int64_t p) {
  if (p < 1) throw std::invalid_argument("rescaling_plan: p must be >= 1");
  if (d.kind() == OffspringDistribution::Kind::stable && d.stable_index() < 2.0) {
    const double g = d.stable_index();
    return {p, static_cast<std::int64_t>(std::ceil(std::pow(static_cast<double>(p), g - 1.0) - 1e-9))};
  }
  return {p, p};
}

double calibrate_limit_constant(const OffspringDistribution& d, double p, double lam) {
  const double s = lam / p;
  // excess = E[exp(-s (xi - 1))] - 1
  double excess;
  double gamma = 2.0;
  switch (d.kind()) {
    case OffspringDistribution::Kind::geometric: {
      const double sh = std::sinh(0.5 * s);
      excess = 4.0 * sh * sh / (2.0 - std::exp(-s));
      break;
    }
    case OffspringDistribution::Kind::stable:
      gamma = d.stable_index();
      excess = std::exp(s) * std::pow(-std::expm1(-s), gamma) / gamma;
      break;
    case OffspringDistribution::Kind::custom:
    default: {
      const auto& pmf = d.law().dense();
      excess = 0.0;
      for (std::size_t k = 0; k < pmf.size(); ++k) {
        excess += pmf[k] * std::expm1(-s * (static_cast<double>(k) - 1.0));
      }
      break;
    }
  }
  // p * gamma_p = p^gamma steps of the walk per unit of rescaled time.
  return std::pow(p, gamma) * std::log1p(excess) / std::pow(lam, gamma);
}

BranchingMechanism limit_mechanism(const OffspringDistribution& d) {
  if (d.kind() == OffspringDistribution::Kind::stable && d.stable_index() < 2.0) {
    return BranchingMechanism::stable(calibrate_limit_constant(d), d.stable_index());
  }
  // Finite variance: psi(u) = (sigma^2 / 2) u^2.
  return BranchingMechanism::quadratic(0.5 * d.variance());
}

}  // namespace levytree
