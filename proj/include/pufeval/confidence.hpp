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

// Binomial-proportion confidence intervals, width curves and device-count
// planning for a target interval width.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pufeval/errors.hpp"
#include "pufeval/special_functions.hpp"

namespace pufeval {

enum class CiMethod { kNormal, kWilson, kClopperPearson };

inline std::string_view to_string(CiMethod m) {
  switch (m) {
    case CiMethod::kNormal:
      return "normal";
    case CiMethod::kWilson:
      return "wilson";
    case CiMethod::kClopperPearson:
      return "clopper_pearson";
  }
  return "unknown";
}

inline CiMethod parse_ci_method(std::string_view name) {
  if (name == "normal") return CiMethod::kNormal;
  if (name == "wilson") return CiMethod::kWilson;
  if (name == "clopper_pearson" || name == "clopper-pearson") {
    return CiMethod::kClopperPearson;
  }
  throw DomainError("unknown interval method: " + std::string(name));
}

/// Two-sided interval [lower, upper] at significance alpha.
///
/// For the normal approximation the bounds are clamped into [0,1] but
/// width() keeps the analytic (unclamped) width 2 z sqrt(p(1-p)/N). For the
/// other methods width() == upper - lower.
struct Interval {
  double lower = 0.0;
  double upper = 1.0;
  double alpha = 0.05;
  CiMethod method = CiMethod::kWilson;
  double analytic_width = 1.0;

  double width() const { return analytic_width; }
  bool contains(double p) const { return lower <= p && p <= upper; }
};

struct PlanResult {
  Count devices = 0;
  double target_width = 0.0;
  double alpha = 0.0;
  CiMethod method = CiMethod::kNormal;
};

namespace detail {

inline void check_alpha(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must be in (0,1)");
}

inline void check_counts(Count x, Count n) {
  require(n >= 1, "interval: n must be >= 1");
  require(x >= 0 && x <= n, "interval: x outside [0,n]");
}

inline double two_sided_z(double alpha) {
  return std_normal_quantile(1.0 - alpha / 2.0);
}

// The estimators below take x as a real number so that width curves can be
// drawn at any p_hat = x / n.

inline Interval normal_interval(double x, double n, double alpha) {
  const double z = two_sided_z(alpha);
  const double p = x / n;
  const double half = z * std::sqrt(p * (1.0 - p) / n);
  return {std::clamp(p - half, 0.0, 1.0), std::clamp(p + half, 0.0, 1.0),
          alpha, CiMethod::kNormal, 2.0 * half};
}

inline Interval wilson_interval(double x, double n, double alpha) {
  const double z = two_sided_z(alpha);
  const double z2 = z * z;
  const double p = x / n;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  // The bounds touch 0 and 1 exactly at x = 0 and x = n; rounding would
  // otherwise leave them a few ulps inside.
  const double lo = x == 0.0 ? 0.0 : std::max(centre - half, 0.0);
  const double hi = x == n ? 1.0 : std::min(centre + half, 1.0);
  return {lo, hi, alpha, CiMethod::kWilson, hi - lo};
}

inline Interval clopper_pearson_interval(double x, double n, double alpha) {
  const double lo = x > 0.0 ? beta_quantile(alpha / 2.0, x, n - x + 1.0) : 0.0;
  const double hi =
      x < n ? beta_quantile(1.0 - alpha / 2.0, x + 1.0, n - x) : 1.0;
  return {lo, hi, alpha, CiMethod::kClopperPearson, hi - lo};
}

inline Interval interval_real(CiMethod method, double x, double n,
                              double alpha) {
  switch (method) {
    case CiMethod::kNormal:
      return normal_interval(x, n, alpha);
    case CiMethod::kWilson:
      return wilson_interval(x, n, alpha);
    case CiMethod::kClopperPearson:
      return clopper_pearson_interval(x, n, alpha);
  }
  throw DomainError("unknown interval method");
}

}  // namespace detail

/// Normal-approximation (Wald) interval p_hat +- z sqrt(p_hat(1-p_hat)/n).
/// Degenerates to a point at x = 0 or x = n.
inline Interval ci_normal(Count x, Count n, double alpha) {
  detail::check_counts(x, n);
  detail::check_alpha(alpha);
  return detail::normal_interval(static_cast<double>(x),
                                 static_cast<double>(n), alpha);
}

/// Wilson score interval.
inline Interval ci_wilson(Count x, Count n, double alpha) {
  detail::check_counts(x, n);
  detail::check_alpha(alpha);
  return detail::wilson_interval(static_cast<double>(x),
                                 static_cast<double>(n), alpha);
}

/// Clopper-Pearson interval from beta quantiles; lower is exactly 0 at x = 0
/// and upper exactly 1 at x = n.
inline Interval ci_clopper_pearson(Count x, Count n, double alpha) {
  detail::check_counts(x, n);
  detail::check_alpha(alpha);
  return detail::clopper_pearson_interval(static_cast<double>(x),
                                          static_cast<double>(n), alpha);
}

inline Interval confidence_interval(CiMethod method, Count x, Count n,
                                    double alpha) {
  detail::check_counts(x, n);
  detail::check_alpha(alpha);
  return detail::interval_real(method, static_cast<double>(x),
                               static_cast<double>(n), alpha);
}

// ---------------------------------------------------------------------------
// Width curves

struct CurvePoint {
  double abscissa;
  double width;
};

/// Fixed p_hat, N varies.
struct DeviceSweep {
  double p_hat = 0.5;
  std::vector<Count> devices;
};

/// Fixed N, p_hat varies.
struct ProportionSweep {
  Count devices = 100;
  std::vector<double> p_hats;
};

using WidthSweep = std::variant<DeviceSweep, ProportionSweep>;

/// Roughly logarithmic N grid from lo to hi (duplicates after rounding are
/// dropped).
inline std::vector<Count> log_device_grid(Count lo = 2, Count hi = 10000,
                                          int points = 200) {
  detail::require(lo >= 1 && hi >= lo && points >= 1, "invalid device grid");
  std::vector<Count> out;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (int i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    const auto v = static_cast<Count>(std::llround(std::exp(a + f * (b - a))));
    if (out.empty() || out.back() != v) out.push_back(v);
  }
  return out;
}

/// p_hat = 0, step, 2 step, ..., 1.
inline std::vector<double> linear_proportion_grid(double step = 0.01) {
  detail::require(step > 0.0 && step <= 1.0, "invalid proportion grid step");
  std::vector<double> out;
  const auto count = static_cast<int>(std::llround(1.0 / step));
  for (int i = 0; i <= count; ++i) {
    out.push_back(std::min(1.0, i * step));
  }
  if (out.back() < 1.0) out.push_back(1.0);
  return out;
}

/// Interval width along a sweep. The count x = p_hat * N may be fractional
/// here; the estimators are evaluated at that real value.
inline std::vector<CurvePoint> ci_width_curve(CiMethod method, double alpha,
                                              const WidthSweep& sweep) {
  detail::check_alpha(alpha);
  std::vector<CurvePoint> out;
  if (const auto* s = std::get_if<DeviceSweep>(&sweep)) {
    detail::require(!s->devices.empty(), "width curve: empty device grid");
    detail::require(s->p_hat >= 0.0 && s->p_hat <= 1.0,
                    "width curve: p_hat outside [0,1]");
    for (Count n : s->devices) {
      detail::require(n >= 1, "width curve: N must be >= 1");
      const double nd = static_cast<double>(n);
      out.push_back({nd, detail::interval_real(method, s->p_hat * nd, nd, alpha)
                             .width()});
    }
  } else {
    const auto& ps = std::get<ProportionSweep>(sweep);
    detail::require(!ps.p_hats.empty(), "width curve: empty proportion grid");
    detail::require(ps.devices >= 1, "width curve: N must be >= 1");
    const double nd = static_cast<double>(ps.devices);
    for (double p : ps.p_hats) {
      detail::require(p >= 0.0 && p <= 1.0, "width curve: p_hat outside [0,1]");
      out.push_back(
          {p, detail::interval_real(method, p * nd, nd, alpha).width()});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Planning

inline constexpr Count kMaxPlannedDevices = 10'000'000;

/// N = ceil((z / target_width)^2), the normal-approximation estimate at
/// p_hat = 0.5.
inline PlanResult plan_devices_normal(double target_width, double alpha) {
  detail::require(target_width > 0.0 && target_width < 1.0,
                  "target width must be in (0,1)");
  detail::check_alpha(alpha);
  const double z = detail::two_sided_z(alpha);
  const double r = z / target_width;
  const auto n = static_cast<Count>(std::ceil(r * r));
  return {std::max<Count>(n, 1), target_width, alpha, CiMethod::kNormal};
}

namespace detail {

inline constexpr double kPlanContainmentTolerance = 1e-12;

/// Both intervals at the counts nearest N/2 lie inside
/// [0.5 - w/2, 0.5 + w/2].
inline bool meets_width_target(CiMethod method, Count n, double target_width,
                               double alpha) {
  const double lo_bound = 0.5 - target_width / 2.0 - kPlanContainmentTolerance;
  const double hi_bound = 0.5 + target_width / 2.0 + kPlanContainmentTolerance;
  for (Count x : {n / 2, (n + 1) / 2}) {
    const Interval iv = confidence_interval(method, x, n, alpha);
    if (iv.lower < lo_bound || iv.upper > hi_bound) return false;
  }
  return true;
}

// Smallest N = first + step * k (k >= 0) accepted by `ok`, assuming `ok` is
// monotone along that arithmetic progression. Exponential bracketing then
// bisection. Returns nullopt when the cap is reached.
template <typename Pred>
std::optional<Count> smallest_on_progression(Count first, Count step,
                                             Count cap, Pred ok) {
  Count lo_k = -1;  // known failing index (-1: none tested)
  Count hi_k = 0;
  while (!ok(first + step * hi_k)) {
    lo_k = hi_k;
    hi_k = hi_k == 0 ? 1 : hi_k * 2;
    if (first + step * hi_k > cap) {
      hi_k = (cap - first) / step;
      if (hi_k <= lo_k || !ok(first + step * hi_k)) return std::nullopt;
      break;
    }
  }
  while (hi_k - lo_k > 1) {
    const Count mid = lo_k + (hi_k - lo_k) / 2;
    if (ok(first + step * mid)) {
      hi_k = mid;
    } else {
      lo_k = mid;
    }
  }
  return first + step * hi_k;
}

}  // namespace detail

/// Smallest N whose intervals at x = floor(N/2) and x = ceil(N/2) both fit
/// inside 0.5 +- target_width/2.
///
/// Even and odd N are searched separately: within each parity the
/// criterion is monotone, while odd N are penalised by their off-centre
/// interval. The result is verified directly (N passes, N-1 fails).
inline PlanResult plan_devices_exact(CiMethod method, double target_width,
                                     double alpha) {
  detail::require(method != CiMethod::kNormal,
                  "exact planning supports wilson and clopper_pearson");
  detail::require(target_width > 0.0 && target_width < 1.0,
                  "target width must be in (0,1)");
  detail::check_alpha(alpha);

  auto ok = [&](Count n) {
    return detail::meets_width_target(method, n, target_width, alpha);
  };
  const auto even = detail::smallest_on_progression(2, 2, kMaxPlannedDevices, ok);
  const auto odd = detail::smallest_on_progression(1, 2, kMaxPlannedDevices, ok);
  if (!even && !odd) {
    throw CapacityError("width target not reachable below 10^7 devices");
  }
  const Count n = std::min(even.value_or(kMaxPlannedDevices + 1),
                           odd.value_or(kMaxPlannedDevices + 1));
  if (!ok(n) || (n > 1 && ok(n - 1))) {
    throw InternalError("exact planner: verification of N-1/N failed");
  }
  return {n, target_width, alpha, method};
}

}  // namespace pufeval
