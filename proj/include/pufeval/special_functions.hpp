// Copyright 2026 The pufeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Quantiles and distribution functions for the normal, beta and binomial
// laws. Everything here is a pure function of its arguments.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "pufeval/errors.hpp"

namespace pufeval {

/// Number of devices, positions, ones, etc.
using Count = std::int64_t;

/// A probability on the natural-log scale. log(0) has its own state so that
/// point masses never go through -inf arithmetic.
class LogProbability {
 public:
  /// Default-constructed value is log(0).
  constexpr LogProbability() = default;

  static constexpr LogProbability zero() { return {}; }
  static constexpr LogProbability one() { return LogProbability(0.0); }

  /// Small positive values from rounding are clamped to 0.
  static LogProbability from_log(double log_value) {
    if (std::isnan(log_value)) throw DomainError("log-probability is NaN");
    if (log_value == -std::numeric_limits<double>::infinity()) return zero();
    return LogProbability(std::min(log_value, 0.0));
  }

  static LogProbability from_probability(double p) {
    detail::require(p >= 0.0 && p <= 1.0, "probability outside [0,1]");
    return p == 0.0 ? zero() : LogProbability(std::log(p));
  }

  constexpr bool is_zero() const { return zero_; }

  /// Natural log; -infinity for the zero state.
  double log() const {
    return zero_ ? -std::numeric_limits<double>::infinity() : log_;
  }

  double probability() const { return zero_ ? 0.0 : std::exp(log_); }

  friend constexpr bool operator==(const LogProbability&,
                                   const LogProbability&) = default;

 private:
  constexpr explicit LogProbability(double v) : log_(v), zero_(false) {}

  double log_ = 0.0;
  bool zero_ = true;
};

namespace detail {

inline constexpr double kLnSqrt2Pi =
    0.918938533204672741780329736406;  // log(sqrt(2*pi))
inline constexpr double kLn2Pi = 1.837877066409345483560659472811;

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// log(n!) - log(sqrt(2 pi n) (n/e)^n), Loader's Stirling remainder.
inline double stirlerr(double n) {
  constexpr double S0 = 1.0 / 12.0;
  constexpr double S1 = 1.0 / 360.0;
  constexpr double S2 = 1.0 / 1260.0;
  constexpr double S3 = 1.0 / 1680.0;
  constexpr double S4 = 1.0 / 1188.0;
  // Values at n = 0, 0.5, 1, ..., 15.
  static constexpr std::array<double, 31> kHalves = {
      0.0,
      0.1534264097200273452913848,
      0.0810614667953272582196702,
      0.0548141210519176538961390,
      0.0413406959554092940938221,
      0.03316287351993628748511048,
      0.02767792568499833914878929,
      0.02374616365629749597132920,
      0.02079067210376509311152277,
      0.01848845053267318523077934,
      0.01664469118982119216319487,
      0.01513497322191737887351255,
      0.01387612882307074799874573,
      0.01281046524292022692424986,
      0.01189670994589177009505572,
      0.01110455975820691732662991,
      0.010411265261972096497478567,
      0.009799416126158803298389475,
      0.009255462182712732917728637,
      0.008768700134139385462952823,
      0.008330563433362871256469318,
      0.007934114564314020547248100,
      0.007573675487951840794972024,
      0.007244554301320383179543912,
      0.006942840107209529865664152,
      0.006665247032707682442354394,
      0.006408994188004207068439631,
      0.006171712263039457647532867,
      0.005951370112758847735624416,
      0.005746216513010115682023589,
      0.005554733551962801371038690,
  };
  if (n <= 15.0) {
    const double nn = n + n;
    if (nn == std::floor(nn)) return kHalves[static_cast<std::size_t>(nn)];
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - kLnSqrt2Pi;
  }
  const double nn = n * n;
  if (n > 500) return (S0 - S1 / nn) / n;
  if (n > 80) return (S0 - (S1 - S2 / nn) / nn) / n;
  if (n > 35) return (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n;
  return (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n;
}

/// Deviance term x log(x/np) + np - x, accurate when x is close to np.
inline double bd0(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2 * x * v;
    v = v * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

/// log of Gamma(n+1)/(Gamma(k+1)Gamma(n-k+1)) p^k q^(n-k) for real
/// 0 <= k <= n, with q = 1 - p supplied separately to keep precision.
/// Requires 0 < p < 1.
inline double log_binomial_density(double k, double n, double p, double q) {
  if (k == 0.0) {
    if (n == 0.0) return 0.0;
    return p < 0.1 ? -bd0(n, n * q) - n * p : n * std::log(q);
  }
  if (k == n) {
    return q < 0.1 ? -bd0(n, n * p) - n * q : n * std::log(p);
  }
  const double lc = stirlerr(n) - stirlerr(k) - stirlerr(n - k) -
                    bd0(k, n * p) - bd0(n - k, n * q);
  const double lf = kLn2Pi + std::log(k) + std::log1p(-k / n);
  return lc - 0.5 * lf;
}

/// log(sum exp(terms)) with compensated summation after scaling by the
/// largest term.
inline LogProbability log_sum_exp(std::span<const double> terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (double t : terms) top = std::max(top, t);
  if (top == -std::numeric_limits<double>::infinity()) {
    return LogProbability::zero();
  }
  CompensatedSum acc;
  for (double t : terms) acc.add(std::exp(t - top));
  return LogProbability::from_log(top + std::log(acc.value()));
}

inline void check_binomial_args(Count n, double p) {
  require(n >= 0, "binomial: n must be non-negative");
  require(p >= 0.0 && p <= 1.0, "binomial: p outside [0,1]");
}

// Sums the pmf over [first, last] (inclusive). Runs of at most
// kDirectSumLimit terms are summed directly; longer runs in log space so
// that tails at N in the thousands keep their leading digits.
inline constexpr Count kDirectSumLimit = 64;

inline double log_pmf_unchecked(Count k, Count n, double p) {
  return log_binomial_density(static_cast<double>(k), static_cast<double>(n),
                              p, 1.0 - p);
}

inline LogProbability log_pmf_range(Count first, Count last, Count n,
                                    double p) {
  if (first > last) return LogProbability::zero();
  // Point masses.
  if (p == 0.0) {
    return first == 0 ? LogProbability::one() : LogProbability::zero();
  }
  if (p == 1.0) {
    return last == n ? LogProbability::one() : LogProbability::zero();
  }
  const Count len = last - first + 1;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(len));
  for (Count i = first; i <= last; ++i) {
    terms.push_back(log_pmf_unchecked(i, n, p));
  }
  if (len <= kDirectSumLimit) {
    // Scaled by the largest term so deep tails do not underflow.
    const double top = *std::max_element(terms.begin(), terms.end());
    if (top == -std::numeric_limits<double>::infinity()) {
      return LogProbability::zero();
    }
    CompensatedSum acc;
    for (double t : terms) acc.add(std::exp(t - top));
    return LogProbability::from_log(std::min(0.0, top + std::log(acc.value())));
  }
  return log_sum_exp(terms);
}

}  // namespace detail

/// Standard normal CDF.
inline double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0);
}

namespace detail {

// Acklam's rational approximation of the lower-half normal quantile
// (relative error below 1.2e-9), followed by one Newton step on the CDF.
inline double normal_quantile_lower(double q) {
  constexpr std::array<double, 6> a = {
      -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr std::array<double, 5> b = {
      -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01};
  constexpr std::array<double, 6> c = {
      -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  constexpr std::array<double, 4> d = {
      7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00};
  constexpr double kLowBreak = 0.02425;

  double x;
  if (q < kLowBreak) {
    const double t = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
        ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  } else {
    const double u = q - 0.5;
    const double r = u * u;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double err = std_normal_cdf(x) - q;
  if (err == 0.0) return x;
  const double pdf = std::exp(-0.5 * x * x - kLnSqrt2Pi);
  return x - err / pdf;
}

}  // namespace detail

/// z with Phi(z) = q. Throws DomainError unless 0 < q < 1.
inline double std_normal_quantile(double q) {
  detail::require(q > 0.0 && q < 1.0, "normal quantile: q must be in (0,1)");
  // 1 - q is exact for q in [0.5, 1), so the antisymmetry is exact.
  if (q > 0.5) return -detail::normal_quantile_lower(1.0 - q);
  return detail::normal_quantile_lower(q);
}

/// log of C(n,k) p^k (1-p)^(n-k). p in {0,1} are point masses.
inline LogProbability binomial_pmf_log(Count k, Count n, double p) {
  detail::check_binomial_args(n, p);
  detail::require(k >= 0 && k <= n, "binomial: k outside [0,n]");
  if (p == 0.0) return k == 0 ? LogProbability::one() : LogProbability::zero();
  if (p == 1.0) return k == n ? LogProbability::one() : LogProbability::zero();
  return LogProbability::from_log(detail::log_pmf_unchecked(k, n, p));
}

inline double binomial_pmf(Count k, Count n, double p) {
  return binomial_pmf_log(k, n, p).probability();
}

/// P[X <= k], X ~ Binomial(n, p), in log form.
///
/// Computed by summing the pmf, never through 1 - (upper tail). Short sums
/// (at most 64 terms) are added directly; longer ones use log-sum-exp with
/// compensated accumulation, which keeps the result meaningful where the
/// linear-scale terms would underflow.
inline LogProbability binomial_cdf_log(Count k, Count n, double p) {
  detail::check_binomial_args(n, p);
  detail::require(k >= 0 && k <= n, "binomial cdf: k outside [0,n]");
  if (k == n) return LogProbability::one();
  return detail::log_pmf_range(0, k, n, p);
}

inline double binomial_cdf(Count k, Count n, double p) {
  return std::min(binomial_cdf_log(k, n, p).probability(), 1.0);
}

/// P[X >= k], X ~ Binomial(n, p), summed over the upper tail directly.
/// k may range over [0, n+1]; k = n+1 gives 0.
inline LogProbability binomial_survival_log(Count k, Count n, double p) {
  detail::check_binomial_args(n, p);
  detail::require(k >= 0 && k <= n + 1, "binomial survival: k outside [0,n+1]");
  if (k == 0) return LogProbability::one();
  return detail::log_pmf_range(k, n, n, p);
}

inline double binomial_survival(Count k, Count n, double p) {
  return std::min(binomial_survival_log(k, n, p).probability(), 1.0);
}

namespace detail {

inline void check_beta_args(double a, double b) {
  require(std::isfinite(a) && a > 0.0, "beta: shape a must be > 0");
  require(std::isfinite(b) && b > 0.0, "beta: shape b must be > 0");
}

/// x^a (1-x)^b / (a B(a,b)), i.e. b/(a+b) times the binomial density at
/// a successes of a+b trials.
inline double log_beta_front(double x, double a, double b) {
  return std::log(b / (a + b)) + log_binomial_density(a, a + b, x, 1.0 - x);
}

inline constexpr int kBetaFractionMaxIter = 100000;

/// Continued fraction for I_x(a,b) (modified Lentz). Converges fast for
/// x < (a+1)/(a+b+2).
inline double beta_continued_fraction(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaFractionMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw InternalError("incomplete beta: continued fraction did not converge");
}

// Returns {I_x(a,b), 1 - I_x(a,b)}, each computed without cancellation on
// the side the continued fraction evaluates directly.
struct BetaPair {
  double lower;
  double upper;
};

inline BetaPair incomplete_beta_pair(double x, double a, double b) {
  if (x == 0.0) return {0.0, 1.0};
  if (x == 1.0) return {1.0, 0.0};
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double v = std::exp(log_beta_front(x, a, b)) *
                     beta_continued_fraction(x, a, b);
    const double lo = std::clamp(v, 0.0, 1.0);
    return {lo, 1.0 - lo};
  }
  const double y = 1.0 - x;
  const double v = std::exp(log_beta_front(y, b, a)) *
                   beta_continued_fraction(y, b, a);
  const double up = std::clamp(v, 0.0, 1.0);
  return {1.0 - up, up};
}

inline double log_beta_density(double x, double a, double b) {
  return log_beta_front(x, a, b) + std::log(a) - std::log(x) -
         std::log1p(-x);
}

}  // namespace detail

/// Regularized incomplete beta I_x(a,b): the Beta(a,b) CDF at x.
inline double regularized_incomplete_beta(double x, double a, double b) {
  detail::require(x >= 0.0 && x <= 1.0, "incomplete beta: x outside [0,1]");
  detail::check_beta_args(a, b);
  return detail::incomplete_beta_pair(x, a, b).lower;
}

/// 1 - I_x(a,b), evaluated without subtracting from one where possible.
inline double regularized_incomplete_beta_complement(double x, double a,
                                                     double b) {
  detail::require(x >= 0.0 && x <= 1.0, "incomplete beta: x outside [0,1]");
  detail::check_beta_args(a, b);
  return detail::incomplete_beta_pair(x, a, b).upper;
}

namespace detail {

// Solves I_x(a,b) = q, or 1 - I_x(a,b) = q when `upper`, by Newton steps
// inside a shrinking bracket (bisection when a step leaves it). Stops at a
// step below 1e-13 relative to x; more than 200 iterations is an
// InternalError.
inline double beta_root(double q, double a, double b, bool upper) {
  constexpr int kMaxIter = 200;
  constexpr double kRelTol = 1e-13;

  double lo = 0.0;
  double hi = 1.0;
  const double mean = a / (a + b);
  const double sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
  const double z = std_normal_quantile(q);
  double x = upper ? mean - z * sd : mean + z * sd;
  if (!(x > 0.0 && x < 1.0)) x = mean;

  for (int it = 0; it < kMaxIter; ++it) {
    const double value = upper ? regularized_incomplete_beta_complement(x, a, b)
                               : regularized_incomplete_beta(x, a, b);
    // f is increasing in x either way.
    const double f = upper ? q - value : value - q;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - f / std::exp(log_beta_density(x, a, b));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= kRelTol * next || next == lo || next == hi) {
      return next;
    }
    x = next;
  }
  throw InternalError("beta quantile: iteration cap reached");
}

}  // namespace detail

/// Beta(a,b) quantile: x with I_x(a,b) = q. Roots above 1/2 are found as 1 - y on the mirrored
/// distribution so that they keep full relative accuracy in 1 - x.
inline double beta_quantile(double q, double a, double b) {
  detail::require(q >= 0.0 && q <= 1.0, "beta quantile: q outside [0,1]");
  detail::check_beta_args(a, b);
  if (q == 0.0) return 0.0;
  if (q == 1.0) return 1.0;
  if (regularized_incomplete_beta(0.5, a, b) < q) {
    // I_x(a,b) = 1 - I_{1-x}(b,a).
    return 1.0 - detail::beta_root(q, b, a, true);
  }
  return detail::beta_root(q, a, b, false);
}

}  // namespace pufeval
