#include "levytree/series_pmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace levytree {

namespace {

// |binom(a, k)| for real a and integer k >= 0.
double abs_binomial(double a, std::int64_t k) {
  if (k == 0) return 1.0;
  const double last = a - static_cast<double>(k) + 1.0;
  if (a >= 0 && a == std::floor(a) && static_cast<double>(k) > a) return 0.0;
  if (last <= 0 && last == std::floor(last) && !(a < 0)) return 0.0;
  const double kd = static_cast<double>(k);
  if (k < 64) {
    double out = 1.0;
    for (std::int64_t i = 0; i < k; ++i) out *= (a - static_cast<double>(i)) / static_cast<double>(i + 1);
    return std::abs(out);
  }
  return std::exp(std::lgamma(a + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(last));
}

constexpr std::int64_t kSampleCap = std::int64_t{1} << 62;

}  // namespace

double StableSeries::coefficient(std::int64_t k) const {
  if (k < 2) return 0.0;
  return scale * abs_binomial(index, k);
}

double StableSeries::tail_beyond(std::int64_t cutoff) const {
  if (cutoff < 1) throw std::domain_error("StableSeries::tail_beyond: cutoff must be >= 1");
  return scale * abs_binomial(index - 1.0, cutoff);
}

std::int64_t StableSeries::sample_beyond(std::int64_t cutoff, std::mt19937_64& rng) const {
  const double base = tail_beyond(cutoff);
  const double target = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * base;
  // Smallest k > cutoff with tail_beyond(k) <= target.
  std::int64_t lo = cutoff;  // tail(lo) > target
  std::int64_t hi = cutoff + 1;
  while (tail_beyond(hi) > target) {
    lo = hi;
    if (hi >= kSampleCap / 2) return kSampleCap;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (tail_beyond(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double PoissonSeries::coefficient(std::int64_t k) const {
  if (k < 2) return 0.0;
  const double kd = static_cast<double>(k);
  return scale * std::exp(-mean + kd * std::log(mean) - std::lgamma(kd + 1.0));
}

double PoissonSeries::tail_beyond(std::int64_t cutoff) const {
  if (cutoff < 1) throw std::domain_error("PoissonSeries::tail_beyond: cutoff must be >= 1");
  return scale * boost::math::gamma_p(static_cast<double>(cutoff + 1), mean);
}

std::int64_t PoissonSeries::sample_beyond(std::int64_t cutoff, std::mt19937_64& rng) const {
  const double base = tail_beyond(cutoff);
  double target = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * base;
  std::int64_t k = cutoff + 1;
  double term = coefficient(k);
  while (target > term && term > 0.0) {
    target -= term;
    term *= mean / static_cast<double>(k + 1);
    ++k;
  }
  return k;
}

SeriesPmf::SeriesPmf(std::vector<double> dense, std::vector<StableSeries> stable_tails,
                     std::vector<PoissonSeries> poisson_tails)
    : dense_(std::move(dense)), stable_(std::move(stable_tails)), poisson_(std::move(poisson_tails)) {
  if (dense_.empty()) throw std::invalid_argument("SeriesPmf: empty dense prefix");
  for (double p : dense_) {
    if (!(p >= 0.0)) throw std::invalid_argument("SeriesPmf: negative probability");
  }
  const std::int64_t k = cutoff();
  if ((!stable_.empty() || !poisson_.empty()) && k < 1) {
    throw std::invalid_argument("SeriesPmf: analytic tails need cutoff >= 1");
  }
  for (const auto& s : stable_) tail_weights_.push_back(s.tail_beyond(k));
  for (const auto& p : poisson_) tail_weights_.push_back(p.tail_beyond(k));
  tail_total_ = std::accumulate(tail_weights_.begin(), tail_weights_.end(), 0.0);
  dense_total_ = sum_dense();
  build_alias();
}

double SeriesPmf::pmf(std::int64_t k) const {
  if (k < 0) return 0.0;
  if (k <= cutoff()) return dense_[static_cast<std::size_t>(k)];
  double out = 0.0;
  for (const auto& s : stable_) out += s.coefficient(k);
  for (const auto& p : poisson_) out += p.coefficient(k);
  return out;
}

double SeriesPmf::dense_mass() const { return dense_total_; }

double SeriesPmf::sum_dense() const {
  // Reverse accumulation keeps the small tail terms intact.
  double out = 0.0;
  for (auto it = dense_.rbegin(); it != dense_.rend(); ++it) out += *it;
  return out;
}

double SeriesPmf::tail_mass() const { return tail_total_; }

double SeriesPmf::mean() const {
  double out = 0.0;
  for (std::size_t k = dense_.size(); k-- > 0;) out += static_cast<double>(k) * dense_[k];
  const std::int64_t k = cutoff();
  for (const auto& s : stable_) {
    // sum_{j>K} j |binom(g,j)| = g * |binom(g-2, K-1)|
    out += s.scale * s.index * abs_binomial(s.index - 2.0, k - 1);
  }
  for (const auto& p : poisson_) {
    out += p.scale * p.mean * boost::math::gamma_p(static_cast<double>(k), p.mean);
  }
  return out;
}

void SeriesPmf::build_alias() {
  const std::size_t n = dense_.size();
  const double total = dense_mass();
  alias_prob_.assign(n, 0.0);
  alias_index_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = dense_[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    alias_prob_[s] = scaled[s];
    alias_index_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) alias_prob_[i] = 1.0;
  for (auto i : small) alias_prob_[i] = 1.0;
}

std::int64_t SeriesPmf::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (tail_total_ > 0.0) {
    const double u = unif(rng) * (dense_mass() + tail_total_);
    if (u < tail_total_) {
      double acc = 0.0;
      const std::size_t ns = stable_.size();
      for (std::size_t i = 0; i < tail_weights_.size(); ++i) {
        acc += tail_weights_[i];
        if (u < acc || i + 1 == tail_weights_.size()) {
          return i < ns ? stable_[i].sample_beyond(cutoff(), rng)
                        : poisson_[i - ns].sample_beyond(cutoff(), rng);
        }
      }
    }
  }
  const double x = unif(rng) * static_cast<double>(dense_.size());
  const auto i = std::min(static_cast<std::size_t>(x), dense_.size() - 1);
  return (x - static_cast<double>(i) < alias_prob_[i]) ? static_cast<std::int64_t>(i)
                                                         : static_cast<std::int64_t>(alias_index_[i]);
}

SeriesPmf derivative_series_pmf(const BranchingMechanism& m, double x, double denominator,
                                double mass_at_zero, double tail_target, std::int64_t max_cutoff) {
  if (!(x > 0.0)) throw std::domain_error("derivative_series_pmf: expansion point must be > 0");
  if (!(denominator > 0.0)) {
    throw std::domain_error("derivative_series_pmf: degenerate denominator (theta or psi' vanishes)");
  }
  std::vector<StableSeries> stable;
  std::vector<PoissonSeries> poisson;
  if (const auto& st = m.stable_tail()) {
    stable.push_back({st->index, st->scale * std::pow(x, st->index - 1.0) / denominator});
  }
  for (const auto& a : m.atoms()) poisson.push_back({x * a.position, a.weight / (x * denominator)});
  const double quadratic_term = m.beta() * x / denominator;

  auto tail_at = [&](std::int64_t k) {
    double t = 0.0;
    for (const auto& s : stable) t += s.tail_beyond(k);
    for (const auto& p : poisson) t += p.tail_beyond(k);
    return t;
  };
  std::int64_t cutoff = 2;
  while (cutoff < max_cutoff && tail_at(cutoff) > tail_target) cutoff *= 2;
  cutoff = std::min(cutoff, max_cutoff);

  std::vector<double> dense(static_cast<std::size_t>(cutoff) + 1, 0.0);
  dense[0] = mass_at_zero;
  dense[2] = quadratic_term;
  for (std::int64_t k = 2; k <= cutoff; ++k) {
    auto& slot = dense[static_cast<std::size_t>(k)];
    for (const auto& s : stable) slot += s.coefficient(k);
    for (const auto& p : poisson) slot += p.coefficient(k);
  }
  return SeriesPmf(std::move(dense), std::move(stable), std::move(poisson));
}

}  // namespace levytree
