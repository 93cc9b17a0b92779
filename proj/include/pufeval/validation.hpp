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

// Monte-Carlo checks of the statistical guarantees: interval coverage,
// false acceptance at the limits and false rejection inside the inner band.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "pufeval/confidence.hpp"
#include "pufeval/errors.hpp"
#include "pufeval/hypothesis.hpp"
#include "pufeval/simulation.hpp"

namespace pufeval {

/// Draws Binomial(n, p) by inverting a precomputed CDF table, one uniform
/// per draw.
class BinomialSampler {
 public:
  BinomialSampler(Count n, double p) : n_(n) {
    detail::check_binomial_args(n, p);
    cdf_.reserve(static_cast<std::size_t>(n + 1));
    detail::CompensatedSum acc;
    for (Count k = 0; k <= n; ++k) {
      acc.add(binomial_pmf(k, n, p));
      cdf_.push_back(acc.value());
    }
    cdf_.back() = 1.0;
  }

  Count operator()(std::mt19937_64& rng) const {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<Count>(static_cast<Count>(it - cdf_.begin()), n_);
  }

 private:
  Count n_;
  std::vector<double> cdf_;
};

/// Frequency with which an interval covers the true p.
struct CoverageExperiment {
  CiMethod method = CiMethod::kClopperPearson;
  double true_p = 0.5;
  Count devices = 100;
  double alpha = 0.05;
};

/// Frequency with which a position at true_p (meant to be p_l or p_u, or
/// beyond) is accepted.
struct FarExperiment {
  AliasLimits limits{0.45, 0.55};
  double true_p = 0.55;
  Count devices = 680;
  double alpha = 0.01;
};

/// Frequency with which a position at true_p inside the inner band is
/// rejected.
struct FrrExperiment {
  AliasLimits limits{0.45, 0.55};
  double true_p = 0.52;
  Count devices = 6674;
  double alpha = 0.01;
};

using Experiment = std::variant<CoverageExperiment, FarExperiment, FrrExperiment>;

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  Count trials = 0;
  Count hits = 0;
};

inline constexpr Count kMinMonteCarloTrials = 1000;

namespace detail {

// hit[x] says whether observing x ones counts as a hit of the experiment.
inline std::vector<bool> hit_table(const Experiment& e, Count& n, double& p) {
  std::vector<bool> hit;
  if (const auto* c = std::get_if<CoverageExperiment>(&e)) {
    n = c->devices;
    p = c->true_p;
    for (Count x = 0; x <= n; ++x) {
      hit.push_back(confidence_interval(c->method, x, n, c->alpha).contains(p));
    }
  } else if (const auto* f = std::get_if<FarExperiment>(&e)) {
    n = f->devices;
    p = f->true_p;
    const auto region = acceptance_region(n, f->limits, f->alpha);
    for (Count x = 0; x <= n; ++x) hit.push_back(region.contains(x));
  } else {
    const auto& r = std::get<FrrExperiment>(e);
    n = r.devices;
    p = r.true_p;
    const auto region = acceptance_region(n, r.limits, r.alpha);
    for (Count x = 0; x <= n; ++x) hit.push_back(!region.contains(x));
  }
  return hit;
}

}  // namespace detail

/// Simulates `trials` experiments from task_stream(seed, stream) and returns
/// the hit frequency with its binomial standard error.
inline MonteCarloEstimate monte_carlo_validate(const Experiment& experiment,
                                               Count trials, std::uint64_t seed,
                                               std::uint64_t stream = 0) {
  detail::require(trials >= kMinMonteCarloTrials,
                  "monte carlo: at least 1000 trials required");
  Count n = 0;
  double p = 0.0;
  const auto hit = detail::hit_table(experiment, n, p);
  detail::require(n >= 1, "monte carlo: devices must be >= 1");
  detail::require(p >= 0.0 && p <= 1.0, "monte carlo: true p outside [0,1]");
  const BinomialSampler sample(n, p);
  auto rng = task_stream(seed, stream);
  Count hits = 0;
  for (Count i = 0; i < trials; ++i) {
    if (hit[static_cast<std::size_t>(sample(rng))]) ++hits;
  }
  MonteCarloEstimate out;
  out.trials = trials;
  out.hits = hits;
  out.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  out.standard_error = std::sqrt(out.estimate * (1.0 - out.estimate) /
                                 static_cast<double>(trials));
  return out;
}

}  // namespace pufeval
