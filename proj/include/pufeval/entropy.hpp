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

// Per-position entropy of a Bernoulli(p) response bit and its relation to
// Bit-Alias limits.
//
// All values are per position. Summing them over positions does not give
// the entropy of the whole response, since positions may be correlated.

#pragma once

#include <algorithm>
#include <cmath>

#include "pufeval/errors.hpp"
#include "pufeval/hypothesis.hpp"

namespace pufeval {

enum class EntropyKind { kMin, kShannon };

struct EntropySpec {
  EntropyKind kind;
  double bits;  // per position, in [0,1]

  EntropySpec(EntropyKind k, double value) : kind(k), bits(value) {
    detail::require(value >= 0.0 && value <= 1.0,
                    "entropy must be in [0,1] bits per position");
  }
};

/// -log2(max(p, 1-p)). Returns 0 for p in {0, 1}.
inline double min_entropy_from_limits(double p) {
  detail::require(p >= 0.0 && p <= 1.0, "min-entropy: p outside [0,1]");
  return -std::log2(std::max(p, 1.0 - p));
}

/// Binary entropy -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.
inline double shannon_entropy(double p) {
  detail::require(p >= 0.0 && p <= 1.0, "shannon entropy: p outside [0,1]");
  auto term = [](double v) { return v > 0.0 ? -v * std::log2(v) : 0.0; };
  return term(p) + term(1.0 - p);
}

/// p_u = 2^-h, p_l = 1 - p_u.
inline AliasLimits limits_from_min_entropy(double h_inf) {
  detail::require(h_inf > 0.0 && h_inf <= 1.0,
                  "min-entropy must be in (0,1]");
  const double p_u = std::exp2(-h_inf);
  if (!(p_u > 0.5)) {
    throw PerfectEntropyError(
        "one bit of entropy per position needs p_l = p_u = 0.5");
  }
  return AliasLimits(1.0 - p_u, p_u);
}

/// Solves shannon_entropy(p) = h for p in [0.5, 1) by bisection and returns
/// the symmetric limits (1 - p, p).
inline AliasLimits limits_from_shannon_entropy(double h) {
  detail::require(h > 0.0 && h <= 1.0, "shannon entropy must be in (0,1]");
  if (h == 1.0) {
    throw PerfectEntropyError(
        "one bit of entropy per position needs p_l = p_u = 0.5");
  }
  double lo = 0.5;  // entropy 1 > h
  double hi = 1.0;  // entropy 0 < h
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (shannon_entropy(mid) > h) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double p_u = 0.5 * (lo + hi);
  if (!(p_u > 0.5 && p_u < 1.0)) {
    throw PerfectEntropyError("entropy too close to one bit for finite limits");
  }
  return AliasLimits(1.0 - p_u, p_u);
}

inline AliasLimits limits_from_entropy(const EntropySpec& spec) {
  return spec.kind == EntropyKind::kMin ? limits_from_min_entropy(spec.bits)
                                        : limits_from_shannon_entropy(spec.bits);
}

/// The point of [lower, upper] farthest from 0.5, where both entropies are
/// smallest over the interval.
inline double least_entropic_point(double lower, double upper) {
  return std::abs(lower - 0.5) >= std::abs(upper - 0.5) ? lower : upper;
}

}  // namespace pufeval
