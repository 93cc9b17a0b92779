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

// End-to-end evaluation of a response data set: noise removal, counting,
// intervals, qualification test and entropy per position.

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "pufeval/confidence.hpp"
#include "pufeval/entropy.hpp"
#include "pufeval/errors.hpp"
#include "pufeval/hypothesis.hpp"
#include "pufeval/io.hpp"
#include "pufeval/response_model.hpp"

namespace pufeval {

struct EarlyStopConfig {
  double alpha = 0.01;
  double max_flag_fraction = 0.0;
};

struct AnalysisConfig {
  double alpha = 0.01;
  /// Permissible band, given directly or as a minimum entropy.
  std::variant<AliasLimits, EntropySpec> bound = AliasLimits(0.45, 0.55);
  /// Intervals to report; the first one feeds the csv columns and the
  /// worst-case entropy.
  std::vector<CiMethod> ci_methods{CiMethod::kWilson};
  std::optional<EarlyStopConfig> early_stop;

  AliasLimits limits() const {
    if (const auto* l = std::get_if<AliasLimits>(&bound)) return *l;
    return limits_from_entropy(std::get<EntropySpec>(bound));
  }

  void validate() const {
    detail::check_alpha(alpha);
    detail::require(!ci_methods.empty(), "at least one interval method");
    (void)limits();
    if (early_stop) {
      detail::check_alpha(early_stop->alpha);
      detail::require(early_stop->max_flag_fraction >= 0.0 &&
                          early_stop->max_flag_fraction <= 1.0,
                      "max_flag_fraction must be in [0,1]");
    }
  }
};

struct PositionEntropy {
  double min_at_estimate = 0.0;
  double shannon_at_estimate = 0.0;
  /// Smallest value over the primary interval.
  double min_worst_case = 0.0;
  double shannon_worst_case = 0.0;
};

struct PositionReport {
  Count position = 0;
  Count ones = 0;
  Count devices = 0;
  double p_hat = 0.0;
  std::vector<Interval> intervals;
  TestVerdict verdict;
  PositionEntropy entropy;
};

struct AnalysisSummary {
  Count devices = 0;
  Count positions = 0;
  Count accepted = 0;
  Count rejected = 0;
  Count tie_count = 0;
  std::optional<AcceptanceRegion> region;
  std::optional<EarlyStopAdvice> early_stop;
};

struct AnalysisResult {
  AnalysisConfig config;
  std::vector<PositionReport> positions;
  AnalysisSummary summary;

  bool all_accepted() const { return summary.rejected == 0; }
};

inline PositionReport analyze_position(Count t, Count x, Count n,
                                       const AnalysisConfig& cfg,
                                       const AliasLimits& limits) {
  PositionReport r;
  r.position = t;
  r.ones = x;
  r.devices = n;
  r.p_hat = static_cast<double>(x) / static_cast<double>(n);
  for (CiMethod m : cfg.ci_methods) {
    r.intervals.push_back(confidence_interval(m, x, n, cfg.alpha));
  }
  r.verdict = test_position(x, n, limits, cfg.alpha, t);
  const Interval& primary = r.intervals.front();
  const double worst = least_entropic_point(primary.lower, primary.upper);
  r.entropy = {min_entropy_from_limits(r.p_hat), shannon_entropy(r.p_hat),
               min_entropy_from_limits(worst), shannon_entropy(worst)};
  return r;
}

/// Analysis of pre-counted data. tie_count is carried into the summary.
inline AnalysisResult analyze(const PositionCounts& counts,
                              const AnalysisConfig& cfg, Count tie_count = 0) {
  cfg.validate();
  const AliasLimits limits = cfg.limits();
  AnalysisResult out;
  out.config = cfg;
  out.summary.devices = counts.devices;
  out.summary.positions = counts.positions();
  out.summary.tie_count = tie_count;
  out.summary.region = acceptance_region(counts.devices, limits, cfg.alpha);
  out.positions.reserve(counts.ones.size());
  for (std::size_t t = 0; t < counts.ones.size(); ++t) {
    out.positions.push_back(analyze_position(static_cast<Count>(t),
                                             counts.ones[t], counts.devices,
                                             cfg, limits));
    if (out.positions.back().verdict.accepted) {
      ++out.summary.accepted;
    } else {
      ++out.summary.rejected;
    }
  }
  if (cfg.early_stop) {
    out.summary.early_stop =
        early_stop_decision(counts, limits, cfg.early_stop->alpha,
                            cfg.early_stop->max_flag_fraction);
  }
  return out;
}

inline AnalysisResult analyze(const MeasurementTensor& m,
                              const AnalysisConfig& cfg) {
  const NoiseFreeResponse r = derive_noise_free_response(m);
  return analyze(count_ones(r), cfg, r.tie_count);
}

inline AnalysisResult analyze(const AnalysisInput& input,
                              const AnalysisConfig& cfg) {
  return std::visit([&](const auto& v) { return analyze(v, cfg); }, input);
}

}  // namespace pufeval
