#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "otp/errors.hpp"

namespace otp::stats {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95) {
  if (trials == 0) throw ParameterError("Wilson interval needs at least one trial");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

// Pearson chi-square goodness of fit; returns the upper-tail p-value.
inline double chi_square_p_value(std::span<const std::uint64_t> observed, std::span<const double> expected_probs) {
  if (observed.size() != expected_probs.size() || observed.size() < 2) {
    throw ParameterError("chi-square needs matching category vectors with >= 2 categories");
  }
  double n = 0.0;
  for (auto o : observed) n += static_cast<double>(o);
  double stat = 0.0;
  std::size_t dof = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * expected_probs[i];
    if (e <= 0.0) {
      if (observed[i] != 0) return 0.0;
      continue;
    }
    const double d = static_cast<double>(observed[i]) - e;
    stat += d * d / e;
    ++dof;
  }
  if (dof < 2) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(dof - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

inline double chi_square_uniform_p_value(std::span<const std::uint64_t> observed) {
  std::vector<double> probs(observed.size(), 1.0 / static_cast<double>(observed.size()));
  return chi_square_p_value(observed, probs);
}

// Two-sample chi-square homogeneity test over shared categories.
inline double chi_square_two_sample_p_value(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw ParameterError("two-sample chi-square needs equal category counts");
  double na = 0.0, nb = 0.0;
  for (auto v : a) na += static_cast<double>(v);
  for (auto v : b) nb += static_cast<double>(v);
  double stat = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double col = static_cast<double>(a[i] + b[i]);
    if (col == 0.0) continue;
    ++used;
    const double ea = col * na / (na + nb);
    const double eb = col * nb / (na + nb);
    stat += std::pow(static_cast<double>(a[i]) - ea, 2) / ea + std::pow(static_cast<double>(b[i]) - eb, 2) / eb;
  }
  if (used < 2) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(used - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  Interval ci;
};

// Normal-approximation 95% interval for the mean of bounded [0, 1] samples.
inline MeanEstimate mean_estimate(std::span<const double> xs) {
  if (xs.empty()) throw ParameterError("mean of no samples");
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double se = xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return {mean, se, {std::max(0.0, mean - kZ95 * se), std::min(1.0, mean + kZ95 * se)}};
}

}  // namespace otp::stats
