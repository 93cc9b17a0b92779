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

// Seeded synthetic PUF populations.
//
// A PUF response is random twice over: manufacturing fixes each device's
// noise-free bit (Bernoulli(p_t) across the population), and every readout
// flips it again with the measurement noise rate.

#pragma once

#include <exception>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pufeval/errors.hpp"
#include "pufeval/response_model.hpp"

namespace pufeval {

/// Independent generator for task `task` of a run seeded with `seed`.
inline std::mt19937_64 task_stream(std::uint64_t seed, std::uint64_t task) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(task),
                    static_cast<std::uint32_t>(task >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform double in [0,1) from the top 53 bits of one draw.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct PopulationSpec {
  Count devices = 1;
  Count positions = 1;
  Count repeats = 1;
  /// True Bit-Alias per position; a single value applies to all positions.
  std::vector<double> alias{0.5};
  double flip_noise = 0.0;
  std::uint64_t seed = 0;
};

/// Named Bit-Alias profiles: "ideal" (0.5 everywhere), "ramp" (linear from
/// 0 at the first position to 1 at the last) and "biased:<p>".
inline std::vector<double> alias_profile(std::string_view name,
                                         Count positions) {
  detail::require(positions >= 1, "alias profile: positions must be >= 1");
  const auto size = static_cast<std::size_t>(positions);
  if (name == "ideal") return std::vector<double>(size, 0.5);
  if (name == "ramp") {
    std::vector<double> out(size);
    for (std::size_t t = 0; t < size; ++t) {
      out[t] = size == 1 ? 0.5
                         : static_cast<double>(t) /
                               static_cast<double>(size - 1);
    }
    return out;
  }
  constexpr std::string_view kBiased = "biased:";
  if (name.starts_with(kBiased)) {
    const std::string value(name.substr(kBiased.size()));
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    detail::require(used == value.size() && !value.empty() && p >= 0.0 &&
                        p <= 1.0,
                    "alias profile: biased:<p> needs p in [0,1]");
    return std::vector<double>(size, p);
  }
  throw DomainError("unknown alias profile: " + std::string(name));
}

/// Deterministic in spec.seed. Device n draws from task_stream(seed, n).
inline MeasurementTensor simulate_population(const PopulationSpec& spec) {
  detail::require(spec.devices >= 1 && spec.positions >= 1 && spec.repeats >= 1,
                  "population: dimensions must be positive");
  detail::require(spec.alias.size() == 1 ||
                      spec.alias.size() == static_cast<std::size_t>(spec.positions),
                  "population: alias must have 1 or T entries");
  for (double p : spec.alias) {
    detail::require(p >= 0.0 && p <= 1.0, "population: alias outside [0,1]");
  }
  detail::require(spec.flip_noise >= 0.0 && spec.flip_noise <= 1.0,
                  "population: noise rate outside [0,1]");

  MeasurementTensor m(spec.devices, spec.positions, spec.repeats);
  for (Count n = 0; n < spec.devices; ++n) {
    auto rng = task_stream(spec.seed, static_cast<std::uint64_t>(n));
    for (Count t = 0; t < spec.positions; ++t) {
      const double p =
          spec.alias.size() == 1 ? spec.alias[0]
                                 : spec.alias[static_cast<std::size_t>(t)];
      const bool bit = uniform01(rng) < p;
      for (Count k = 0; k < spec.repeats; ++k) {
        const bool flip = uniform01(rng) < spec.flip_noise;
        m.set_bit(n, t, k, bit != flip);
      }
    }
  }
  return m;
}

}  // namespace pufeval
