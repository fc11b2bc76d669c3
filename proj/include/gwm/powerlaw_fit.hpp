#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "gwm/key_values.hpp"
#include "gwm/parallel.hpp"
#include "gwm/rng.hpp"

namespace gwm {

class FitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Continuous MLE: gamma = 1 + k / sum ln(x_i / x_min) over samples >= x_min.
inline double fit_gamma(std::span<const double> samples, double x_min) {
  if (!(x_min > 0.0)) throw FitError("x_min must be positive");
  std::size_t k = 0;
  double log_sum = 0.0;
  for (double x : samples)
    if (x >= x_min) {
      ++k;
      log_sum += std::log(x / x_min);
    }
  if (k < 2) throw FitError("need at least two samples >= x_min");
  if (log_sum <= 0.0) throw FitError("degenerate data: every tail sample equals x_min");
  return 1.0 + static_cast<double>(k) / log_sum;
}

/// Hurwitz zeta(s, q) = sum_{k>=0} (q + k)^-s for s > 1, q > 0, by Euler-Maclaurin.
inline double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) throw FitError("hurwitz_zeta needs s > 1 and q > 0");
  constexpr double kShift = 12.0;
  double sum = 0.0;
  double a = q;
  while (a < kShift) {
    sum += std::pow(a, -s);
    a += 1.0;
  }
  // B_{2j} / (2j)!
  static constexpr double kCoef[] = {1.0 / 12.0,          -1.0 / 720.0,        1.0 / 30240.0,
                                     -1.0 / 1209600.0,    1.0 / 47900160.0,    -691.0 / 1307674368000.0};
  const double a_s = std::pow(a, -s);
  sum += a * a_s / (s - 1.0) + 0.5 * a_s;
  double rising = s;          // s (s+1) ... (s + 2j - 2)
  double power = a_s / a;     // a^(-s - 2j + 1)
  for (std::size_t j = 0; j < std::size(kCoef); ++j) {
    sum += kCoef[j] * rising * power;
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    power /= a * a;
  }
  return sum;
}

enum class TailModel { continuous, discrete };

inline const char* to_string(TailModel m) {
  return m == TailModel::continuous ? "continuous" : "discrete";
}

/// Discrete MLE: maximizes -k ln zeta(gamma, x_min) - gamma sum ln x_i.
inline double fit_gamma_discrete(std::span<const double> samples, double x_min) {
  if (!(x_min >= 1.0)) throw FitError("discrete x_min must be >= 1");
  std::size_t k = 0;
  double log_sum = 0.0;
  bool varied = false;
  for (double x : samples)
    if (x >= x_min) {
      ++k;
      log_sum += std::log(x);
      varied = varied || x != x_min;
    }
  if (k < 2) throw FitError("need at least two samples >= x_min");
  if (!varied) throw FitError("degenerate data: every tail sample equals x_min");
  const double kk = static_cast<double>(k);
  auto nll = [&](double g) { return kk * std::log(hurwitz_zeta(g, x_min)) + g * log_sum; };
  auto [g, f] = boost::math::tools::brent_find_minima(nll, 1.0 + 1e-6, 20.0, 50);
  return g;
}

inline double fit_gamma(std::span<const double> samples, double x_min, TailModel model) {
  return model == TailModel::continuous ? fit_gamma(samples, x_min)
                                        : fit_gamma_discrete(samples, x_min);
}

namespace detail {

// Model CDF evaluator for a fitted tail; discrete evaluation reuses partial sums
// between nearby integers.
class TailCdf {
 public:
  TailCdf(TailModel model, double gamma, double x_min)
      : model_(model), gamma_(gamma), x_min_(x_min) {
    if (model_ == TailModel::discrete) norm_ = hurwitz_zeta(gamma, x_min);
  }

  /// P(X <= x); for the discrete model x is an integer >= x_min.
  double operator()(double x) {
    if (model_ == TailModel::continuous) return 1.0 - std::pow(x / x_min_, 1.0 - gamma_);
    // tail_ holds zeta(gamma, at_) for the last evaluated point
    const double target = x + 1.0;
    if (at_ > 0.0 && target >= at_ && target - at_ <= 32.0) {
      for (double k = at_; k < target; k += 1.0) tail_ -= std::pow(k, -gamma_);
    } else {
      tail_ = hurwitz_zeta(gamma_, target);
    }
    at_ = target;
    return 1.0 - tail_ / norm_;
  }

 private:
  TailModel model_;
  double gamma_;
  double x_min_;
  double norm_ = 1.0;
  double at_ = 0.0;
  double tail_ = 0.0;
};

}  // namespace detail

/// KS distance between the empirical CDF of the sorted tail and the fitted law.
inline double ks_statistic(std::span<const double> sorted_tail, double gamma, double x_min,
                           TailModel model) {
  const double k = static_cast<double>(sorted_tail.size());
  if (sorted_tail.empty()) return 0.0;
  detail::TailCdf cdf(model, gamma, x_min);
  double d = 0.0;
  double below = 0.0;  // empirical CDF just below the current value
  double prev = 0.0;
  std::size_t i = 0;
  while (i < sorted_tail.size()) {
    const double v = sorted_tail[i];
    std::size_t j = i;
    while (j < sorted_tail.size() && sorted_tail[j] == v) ++j;
    const double at = static_cast<double>(j) / k;
    if (model == TailModel::discrete) {
      // empirical CDF is flat on [prev, v - 1]; the model is largest at v - 1
      if (i > 0 && v - 1.0 > prev) d = std::max(d, std::abs(cdf(v - 1.0) - below));
      d = std::max(d, std::abs(cdf(v) - at));
    } else {
      const double f = cdf(v);
      d = std::max({d, std::abs(f - at), std::abs(f - below)});
    }
    below = at;
    prev = v;
    i = j;
  }
  return d;
}

struct PowerLawFit {
  double gamma = 0.0;
  double x_min = 0.0;
  double ks = 0.0;
  double p_value = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_tail = 0;
  std::size_t n = 0;
  TailModel model = TailModel::discrete;

  KeyValues to_key_values() const {
    KeyValues kv;
    kv.set("gamma", gamma);
    kv.set("xmin", x_min);
    kv.set("ks", ks);
    if (std::isnan(p_value))
      kv.set("pvalue", std::string("nan"));
    else
      kv.set("pvalue", p_value);
    kv.set("ntail", n_tail);
    kv.set("model", std::string(to_string(model)));
    return kv;
  }
};

namespace detail {

inline PowerLawFit scan_xmin(std::vector<double> data, TailModel model, std::size_t min_distinct) {
  std::sort(data.begin(), data.end());
  std::vector<double> distinct;
  for (double x : data)
    if (distinct.empty() || distinct.back() != x) distinct.push_back(x);
  if (distinct.size() < min_distinct)
    throw FitError("x_min selection needs at least " + std::to_string(min_distinct) +
                   " distinct values, got " + std::to_string(distinct.size()));
  if (model == TailModel::discrete && distinct.front() < 1.0)
    throw FitError("discrete tail model needs samples >= 1");
  if (distinct.front() <= 0.0) throw FitError("continuous tail model needs positive samples");
  PowerLawFit best;
  best.ks = std::numeric_limits<double>::infinity();
  best.n = data.size();
  best.model = model;
  // the last distinct value leaves a constant tail, so it is never a candidate
  for (std::size_t c = 0; c + 1 < distinct.size(); ++c) {
    const double x_min = distinct[c];
    auto first = std::lower_bound(data.begin(), data.end(), x_min);
    std::span<const double> tail(&*first, static_cast<std::size_t>(data.end() - first));
    if (tail.size() < 2) break;
    const double g = fit_gamma(tail, x_min, model);
    const double ks = ks_statistic(tail, g, x_min, model);
    if (ks < best.ks) {
      best.ks = ks;
      best.gamma = g;
      best.x_min = x_min;
      best.n_tail = tail.size();
    }
  }
  return best;
}

}  // namespace detail

/// Chooses x_min among the observed values by minimum KS distance (ties: smallest).
inline PowerLawFit select_xmin(std::span<const double> samples,
                               TailModel model = TailModel::discrete) {
  return detail::scan_xmin({samples.begin(), samples.end()}, model, 10);
}

/// Draws from the fitted tail law. Discrete draws use a cumulative table for
/// x_min..x_min+table_size-1 and a rounded continuous tail beyond it.
class TailSampler {
 public:
  TailSampler(TailModel model, double gamma, double x_min, std::size_t table_size = 200000)
      : model_(model), gamma_(gamma), x_min_(x_min) {
    if (model_ != TailModel::discrete) return;
    const double norm = hurwitz_zeta(gamma, x_min);
    cdf_.reserve(table_size);
    double acc = 0.0;
    for (std::size_t i = 0; i < table_size; ++i) {
      acc += std::pow(x_min + static_cast<double>(i), -gamma) / norm;
      cdf_.push_back(acc);
    }
  }

  double operator()(Rng& rng) const {
    const double u = rng.uniform();
    if (model_ == TailModel::continuous) return x_min_ * std::pow(1.0 - u, -1.0 / (gamma_ - 1.0));
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it != cdf_.end()) return x_min_ + static_cast<double>(it - cdf_.begin());
    // beyond the table: continuous approximation started at the table edge
    const double edge = x_min_ + static_cast<double>(cdf_.size());
    const double r = rng.uniform();
    return std::floor((edge - 0.5) * std::pow(1.0 - r, -1.0 / (gamma_ - 1.0)) + 0.5);
  }

 private:
  TailModel model_;
  double gamma_;
  double x_min_;
  std::vector<double> cdf_;
};

/// Semiparametric bootstrap goodness-of-fit: each synthetic set draws, per point,
/// from the fitted tail with probability n_tail/n and otherwise from the observed
/// values below x_min; the p-value is the fraction of refitted KS distances that
/// exceed the observed one.
inline double bootstrap_pvalue(std::span<const double> samples, const PowerLawFit& fit,
                               std::size_t resamples, std::uint64_t seed,
                               std::size_t threads = default_threads()) {
  if (resamples < 100) throw FitError("bootstrap needs at least 100 resamples");
  if (fit.n_tail == 0 || fit.gamma <= 1.0) throw FitError("bootstrap needs a valid fit");
  std::vector<double> body;
  for (double x : samples)
    if (x < fit.x_min) body.push_back(x);
  const std::size_t n = samples.size();
  const double tail_prob = static_cast<double>(fit.n_tail) / static_cast<double>(n);
  const TailSampler tail(fit.model, fit.gamma, fit.x_min);
  std::vector<char> exceeds(resamples, 0);
  parallel_for(
      resamples,
      [&](std::size_t r) {
        Rng rng(derive_seed(seed, {r}));
        std::vector<double> synth(n);
        for (auto& x : synth)
          x = (body.empty() || rng.uniform() < tail_prob) ? tail(rng) : body[rng.below(body.size())];
        try {
          const auto refit = detail::scan_xmin(std::move(synth), fit.model, 2);
          exceeds[r] = refit.ks > fit.ks;
        } catch (const FitError&) {
          exceeds[r] = 0;  // degenerate synthetic set: count as not exceeding
        }
      },
      threads);
  std::size_t count = 0;
  for (char e : exceeds) count += e ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(resamples);
}

/// Full pipeline: x_min by KS, gamma by MLE, p-value by bootstrap.
inline PowerLawFit fit_power_law(std::span<const double> samples, std::size_t resamples,
                                 std::uint64_t seed, TailModel model = TailModel::discrete) {
  auto fit = select_xmin(samples, model);
  fit.p_value = bootstrap_pvalue(samples, fit, resamples, seed);
  return fit;
}

}  // namespace gwm
