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

// From raw repeated measurements to per-position counts of ones.

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "pufeval/errors.hpp"
#include "pufeval/special_functions.hpp"

namespace pufeval {

/// Raw bits of N devices x T positions x M repeated measurements.
/// Stored as bits[(n * T + t) * M + k].
class MeasurementTensor {
 public:
  MeasurementTensor(Count devices, Count positions, Count repeats,
                    std::vector<std::uint8_t> bits)
      : devices_(devices),
        positions_(positions),
        repeats_(repeats),
        bits_(std::move(bits)) {
    detail::require(devices >= 1 && positions >= 1 && repeats >= 1,
                    "measurement tensor: dimensions must be positive");
    detail::require(bits_.size() == static_cast<std::size_t>(
                                        devices * positions * repeats),
                    "measurement tensor: payload size does not match N*T*M");
    for (std::uint8_t b : bits_) {
      detail::require(b <= 1, "measurement tensor: bit values must be 0 or 1");
    }
  }

  /// All-zero tensor.
  MeasurementTensor(Count devices, Count positions, Count repeats)
      : MeasurementTensor(devices, positions, repeats,
                          std::vector<std::uint8_t>(checked_size(
                              devices, positions, repeats))) {}

  Count devices() const { return devices_; }
  Count positions() const { return positions_; }
  Count repeats() const { return repeats_; }

  std::uint8_t bit(Count device, Count position, Count repeat) const {
    return bits_[index(device, position, repeat)];
  }
  void set_bit(Count device, Count position, Count repeat, bool value) {
    bits_[index(device, position, repeat)] = value ? 1 : 0;
  }

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const MeasurementTensor&,
                         const MeasurementTensor&) = default;

 private:
  static std::size_t checked_size(Count n, Count t, Count m) {
    detail::require(n >= 1 && t >= 1 && m >= 1,
                    "measurement tensor: dimensions must be positive");
    return static_cast<std::size_t>(n * t * m);
  }
  std::size_t index(Count n, Count t, Count k) const {
    return static_cast<std::size_t>((n * positions_ + t) * repeats_ + k);
  }

  Count devices_;
  Count positions_;
  Count repeats_;
  std::vector<std::uint8_t> bits_;
};

/// One bit per device and position after majority voting.
struct NoiseFreeResponse {
  Count devices = 0;
  Count positions = 0;
  std::vector<std::uint8_t> bits;  // bits[n * positions + t]
  Count tie_count = 0;

  std::uint8_t bit(Count device, Count position) const {
    return bits[static_cast<std::size_t>(device * positions + position)];
  }
};

/// Number of ones per position over N devices. (x_t, N) is all the
/// statistics modules need.
struct PositionCounts {
  Count devices = 0;
  std::vector<Count> ones;

  PositionCounts() = default;
  PositionCounts(Count n, std::vector<Count> x)
      : devices(n), ones(std::move(x)) {
    detail::require(devices >= 1, "position counts: need at least one device");
    for (Count v : ones) {
      detail::require(v >= 0 && v <= devices,
                      "position counts: count outside [0, N]");
    }
  }

  Count positions() const { return static_cast<Count>(ones.size()); }
};

/// Majority vote over the M measurements of each cell: 1 iff more than half
/// of the measurements are 1. An exact tie (even M only) resolves to 1 when
/// device + position is even and to 0 otherwise, and is counted.
inline NoiseFreeResponse derive_noise_free_response(
    const MeasurementTensor& m) {
  NoiseFreeResponse r;
  r.devices = m.devices();
  r.positions = m.positions();
  r.bits.resize(static_cast<std::size_t>(r.devices * r.positions));
  const Count reps = m.repeats();
  for (Count n = 0; n < r.devices; ++n) {
    for (Count t = 0; t < r.positions; ++t) {
      Count ones = 0;
      for (Count k = 0; k < reps; ++k) ones += m.bit(n, t, k);
      std::uint8_t v;
      if (2 * ones > reps) {
        v = 1;
      } else if (2 * ones < reps) {
        v = 0;
      } else {
        v = (n + t) % 2 == 0 ? 1 : 0;
        ++r.tie_count;
      }
      r.bits[static_cast<std::size_t>(n * r.positions + t)] = v;
    }
  }
  return r;
}

inline PositionCounts count_ones(const NoiseFreeResponse& r) {
  std::vector<Count> ones(static_cast<std::size_t>(r.positions), 0);
  for (Count n = 0; n < r.devices; ++n) {
    for (Count t = 0; t < r.positions; ++t) {
      ones[static_cast<std::size_t>(t)] += r.bit(n, t);
    }
  }
  return PositionCounts(r.devices, std::move(ones));
}

/// Bit-Alias estimate x_t / N per position.
inline std::vector<double> bit_alias(const PositionCounts& c) {
  std::vector<double> out;
  out.reserve(c.ones.size());
  const double n = static_cast<double>(c.devices);
  for (Count x : c.ones) out.push_back(static_cast<double>(x) / n);
  return out;
}

}  // namespace pufeval
