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

#include "pufeval/entropy.hpp"

#include <gtest/gtest.h>

namespace pufeval {
namespace {

TEST(Entropy, MinEntropyLimits) {
  const AliasLimits lim = limits_from_min_entropy(0.9);
  EXPECT_NEAR(lim.upper, 0.5359, 1e-4);
  EXPECT_NEAR(lim.lower, 0.4641, 1e-4);
  EXPECT_THROW(limits_from_min_entropy(1.0), PerfectEntropyError);
  EXPECT_THROW(limits_from_min_entropy(0.0), DomainError);
  EXPECT_THROW(limits_from_min_entropy(1.2), DomainError);
}

TEST(Entropy, PointValues) {
  EXPECT_NEAR(min_entropy_from_limits(0.55), 0.8625, 1e-4);
  EXPECT_NEAR(shannon_entropy(0.55), 0.9928, 1e-4);
  EXPECT_EQ(min_entropy_from_limits(0.5), 1.0);
  EXPECT_EQ(shannon_entropy(0.5), 1.0);
  EXPECT_EQ(shannon_entropy(0.0), 0.0);
  EXPECT_EQ(shannon_entropy(1.0), 0.0);
  EXPECT_EQ(min_entropy_from_limits(0.0), 0.0);
  EXPECT_EQ(min_entropy_from_limits(0.45), min_entropy_from_limits(0.55));
}

TEST(Entropy, RoundTrip) {
  for (double h = 0.01; h < 1.0; h += 0.01) {
    const AliasLimits lim = limits_from_min_entropy(h);
    EXPECT_NEAR(min_entropy_from_limits(lim.upper), h, 1e-12);
    EXPECT_NEAR(min_entropy_from_limits(lim.lower), h, 1e-12);
    const AliasLimits sh = limits_from_shannon_entropy(h);
    EXPECT_NEAR(shannon_entropy(sh.upper), h, 1e-12);
    EXPECT_NEAR(sh.lower + sh.upper, 1.0, 1e-15);
  }
  const AliasLimits sh = limits_from_shannon_entropy(shannon_entropy(0.55));
  EXPECT_NEAR(sh.upper, 0.55, 1e-12);
}

TEST(Entropy, ShannonDominatesMinEntropy) {
  for (int i = 0; i <= 1000; ++i) {
    const double p = i / 1000.0;
    const double h = shannon_entropy(p);
    const double m = min_entropy_from_limits(p);
    if (i == 0 || i == 500 || i == 1000) {
      EXPECT_NEAR(h, m, 1e-15) << p;
    } else {
      EXPECT_GT(h, m) << p;
    }
    EXPECT_NEAR(h, shannon_entropy(1 - p), 1e-15);
    EXPECT_EQ(m, min_entropy_from_limits(1 - p));
  }
}

TEST(Entropy, SpecConversion) {
  const AliasLimits a = limits_from_entropy(EntropySpec(EntropyKind::kMin, 0.9));
  EXPECT_NEAR(a.upper, 0.5359, 1e-4);
  EXPECT_THROW(EntropySpec(EntropyKind::kMin, 1.5), DomainError);
  EXPECT_THROW(limits_from_entropy(EntropySpec(EntropyKind::kShannon, 1.0)),
               PerfectEntropyError);
}

TEST(Entropy, LeastEntropicPoint) {
  EXPECT_EQ(least_entropic_point(0.3, 0.6), 0.3);
  EXPECT_EQ(least_entropic_point(0.45, 0.9), 0.9);
  EXPECT_EQ(least_entropic_point(0.6, 0.7), 0.7);
}

}  // namespace
}  // namespace pufeval
