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

#include "pufeval/confidence.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pufeval/validation.hpp"

namespace pufeval {
namespace {

constexpr CiMethod kAllMethods[] = {CiMethod::kNormal, CiMethod::kWilson,
                                    CiMethod::kClopperPearson};

TEST(NormalInterval, DegeneratesAtTheBoundary) {
  const Interval iv = ci_normal(0, 10, 0.05);
  EXPECT_EQ(iv.lower, 0.0);
  EXPECT_EQ(iv.upper, 0.0);
  EXPECT_EQ(iv.width(), 0.0);
}

TEST(NormalInterval, Values) {
  EXPECT_NEAR(ci_normal(332, 664, 0.01).width(), 0.1, 5e-4);
  const Interval iv = ci_normal(5, 10, 0.05);
  const double half = 1.959963984540054 * std::sqrt(0.025);
  EXPECT_NEAR(iv.lower, 0.5 - half, 1e-12);
  EXPECT_NEAR(iv.upper, 0.5 + half, 1e-12);
}

TEST(NormalInterval, ClampsBoundsButKeepsAnalyticWidth) {
  const Interval iv = ci_normal(1, 5, 0.01);
  EXPECT_EQ(iv.lower, 0.0);
  const double half = std_normal_quantile(0.995) * std::sqrt(0.2 * 0.8 / 5);
  EXPECT_NEAR(iv.width(), 2 * half, 1e-12);
  EXPECT_GT(iv.width(), iv.upper - iv.lower);
}

TEST(WilsonInterval, PublishedWidths) {
  EXPECT_NEAR(ci_wilson(10, 20, 0.01).width(), 0.499, 0.001);
  EXPECT_NEAR(ci_wilson(0, 20, 0.01).width(), 0.249, 0.001);
}

TEST(WilsonInterval, BoundsAreRootsOfScoreQuadratic) {
  for (Count n : {1, 3, 20, 137}) {
    for (Count x = 0; x <= n; ++x) {
      for (double alpha : {0.01, 0.05, 0.2}) {
        const double z = oracle::normal_quantile_bisection(1 - alpha / 2);
        const double p = static_cast<double>(x) / n;
        // (1 + z^2/n) q^2 - (2p + z^2/n) q + p^2 = 0
        const double a = 1 + z * z / n;
        const double b = -(2 * p + z * z / n);
        const double c = p * p;
        const double disc = std::sqrt(b * b - 4 * a * c);
        const Interval iv = ci_wilson(x, n, alpha);
        EXPECT_NEAR(iv.lower, (-b - disc) / (2 * a), 1e-12);
        EXPECT_NEAR(iv.upper, (-b + disc) / (2 * a), 1e-12);
      }
    }
  }
}

TEST(ClopperPearsonInterval, ForcedBounds) {
  EXPECT_EQ(ci_clopper_pearson(0, 5, 0.05).lower, 0.0);
  EXPECT_EQ(ci_clopper_pearson(5, 5, 0.05).upper, 1.0);
  EXPECT_GT(ci_clopper_pearson(0, 5, 0.05).upper, 0.0);
}

TEST(ClopperPearsonInterval, MatchesBinomialTailInversion) {
  const Interval iv = ci_clopper_pearson(340, 680, 0.01);
  EXPECT_NEAR(iv.lower, 0.45, 0.002);
  EXPECT_NEAR(iv.upper, 0.55, 0.002);
  // Endpoints solve P[X >= 340 | p_L] = P[X <= 340 | p_U] = 0.005.
  const double lo = oracle::bisect(
      [](double p) { return binomial_survival(340, 680, p) - 0.005; }, 0.3,
      0.5);
  const double hi = oracle::bisect(
      [](double p) { return binomial_cdf(340, 680, p) - 0.005; }, 0.5, 0.7);
  EXPECT_NEAR(iv.lower, lo, 1e-10);
  EXPECT_NEAR(iv.upper, hi, 1e-10);
}

TEST(Intervals, RejectInvalidArguments) {
  for (CiMethod m : kAllMethods) {
    EXPECT_THROW(confidence_interval(m, 3, 0, 0.05), DomainError);
    EXPECT_THROW(confidence_interval(m, 4, 3, 0.05), DomainError);
    EXPECT_THROW(confidence_interval(m, -1, 3, 0.05), DomainError);
    EXPECT_THROW(confidence_interval(m, 1, 3, 0.0), DomainError);
    EXPECT_THROW(confidence_interval(m, 1, 3, 1.0), DomainError);
  }
  EXPECT_THROW(parse_ci_method("agresti"), DomainError);
  EXPECT_EQ(parse_ci_method("clopper_pearson"), CiMethod::kClopperPearson);
}

TEST(Intervals, MirrorSymmetry) {
  for (Count n : {1, 2, 17, 100}) {
    for (Count x = 0; x <= n; ++x) {
      for (CiMethod m : kAllMethods) {
        const Interval a = confidence_interval(m, x, n, 0.05);
        const Interval b = confidence_interval(m, n - x, n, 0.05);
        EXPECT_NEAR(a.lower, 1.0 - b.upper, 1e-10) << to_string(m) << x << "/" << n;
      }
    }
  }
}

TEST(Intervals, ContainEstimateAndStayInUnitRange) {
  for (Count n : {1, 5, 40, 333}) {
    for (Count x = 0; x <= n; ++x) {
      const double p = static_cast<double>(x) / n;
      for (CiMethod m : {CiMethod::kWilson, CiMethod::kClopperPearson}) {
        const Interval iv = confidence_interval(m, x, n, 0.01);
        EXPECT_LE(0.0, iv.lower);
        EXPECT_LE(iv.lower, iv.upper);
        EXPECT_LE(iv.upper, 1.0);
        EXPECT_TRUE(iv.contains(p)) << to_string(m) << " " << x << "/" << n;
      }
    }
  }
}

TEST(Intervals, WidthOrderingAtOneHalf) {
  // Wilson is the narrowest at p_hat = 0.5. The normal interval is wider
  // than Clopper-Pearson only for small N; from N = 30 on (alpha = 0.01) it
  // is narrower.
  for (Count n = 10; n <= 1000; n += 2) {
    const double normal = ci_normal(n / 2, n, 0.01).width();
    const double wilson = ci_wilson(n / 2, n, 0.01).width();
    const double cp = ci_clopper_pearson(n / 2, n, 0.01).width();
    EXPECT_LE(wilson, normal) << n;
    EXPECT_LE(wilson, cp) << n;
    if (n >= 30) {
      EXPECT_LE(normal, cp) << n;
    }
  }
  EXPECT_GT(ci_normal(10, 20, 0.01).width(), ci_clopper_pearson(10, 20, 0.01).width());
}

TEST(WidthCurve, PublishedPlanningPoints) {
  auto width_at = [](CiMethod m, Count n) {
    return ci_width_curve(m, 0.01, DeviceSweep{0.5, {n}}).front().width;
  };
  EXPECT_LE(width_at(CiMethod::kWilson, 658), 0.1);
  EXPECT_LE(width_at(CiMethod::kClopperPearson, 680), 0.1);
  EXPECT_GT(width_at(CiMethod::kClopperPearson, 679), 0.1);
}

TEST(WidthCurve, SinglePointEqualsDirectCall) {
  for (CiMethod m : kAllMethods) {
    const auto pts = ci_width_curve(m, 0.05, DeviceSweep{0.5, {40}});
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_EQ(pts[0].abscissa, 40.0);
    EXPECT_EQ(pts[0].width, confidence_interval(m, 20, 40, 0.05).width());
  }
}

TEST(WidthCurve, NonIncreasingInDevices) {
  const auto grid = log_device_grid();
  EXPECT_EQ(grid.front(), 2);
  EXPECT_EQ(grid.back(), 10000);
  for (CiMethod m : {CiMethod::kWilson, CiMethod::kClopperPearson}) {
    const auto pts = ci_width_curve(m, 0.01, DeviceSweep{0.5, grid});
    for (std::size_t i = 1; i < pts.size(); ++i) {
      EXPECT_LE(pts[i].width, pts[i - 1].width) << pts[i].abscissa;
    }
  }
}

TEST(WidthCurve, ProportionSweepIsSymmetricAndPeaksAtHalf) {
  const auto grid = linear_proportion_grid();
  ASSERT_EQ(grid.size(), 101u);
  const auto pts =
      ci_width_curve(CiMethod::kWilson, 0.01, ProportionSweep{20, grid});
  EXPECT_NEAR(pts[0].width, 0.249, 0.001);
  EXPECT_NEAR(pts[50].width, 0.499, 0.001);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_NEAR(pts[i].width, pts[pts.size() - 1 - i].width, 1e-12);
    EXPECT_LE(pts[i].width, pts[50].width + 1e-15);
  }
}

TEST(WidthCurve, EmptyGridIsAnError) {
  EXPECT_THROW(ci_width_curve(CiMethod::kWilson, 0.01, DeviceSweep{0.5, {}}),
               DomainError);
  EXPECT_THROW(
      ci_width_curve(CiMethod::kWilson, 0.01, ProportionSweep{10, {}}),
      DomainError);
}

TEST(PlanNormal, Values) {
  EXPECT_EQ(plan_devices_normal(0.1, 0.01).devices, 664);
  // With the exact quantile z = 2.5758293...; the 4-digit z = 2.5759 would
  // give ceil((2.5759 / 0.05)^2) = 2655.
  EXPECT_EQ(plan_devices_normal(0.05, 0.01).devices, 2654);
  EXPECT_EQ(static_cast<Count>(std::ceil(std::pow(2.5759 / 0.05, 2))), 2655);
  const double z = std_normal_quantile(0.995);
  const Count small = plan_devices_normal(1 - 1e-9, 0.01).devices;
  EXPECT_GE(static_cast<double>(small), z * z);
  EXPECT_LE(static_cast<double>(small), z * z + 1);
  EXPECT_THROW(plan_devices_normal(0.0, 0.01), DomainError);
  EXPECT_THROW(plan_devices_normal(1.0, 0.01), DomainError);
}

TEST(PlanExact, PublishedDeviceCounts) {
  EXPECT_EQ(plan_devices_exact(CiMethod::kClopperPearson, 0.1, 0.01).devices,
            680);
  EXPECT_EQ(plan_devices_exact(CiMethod::kWilson, 0.1, 0.01).devices, 658);
}

TEST(PlanExact, RoundTripsThroughWilsonWidth) {
  const double w = ci_wilson(10, 20, 0.01).width();
  EXPECT_EQ(plan_devices_exact(CiMethod::kWilson, w, 0.01).devices, 20);
}

TEST(PlanExact, ResultIsMinimal) {
  for (CiMethod m : {CiMethod::kWilson, CiMethod::kClopperPearson}) {
    for (double w : {0.5, 0.3, 0.2, 0.15, 0.1}) {
      for (double alpha : {0.01, 0.05}) {
        const Count n = plan_devices_exact(m, w, alpha).devices;
        // Brute force over every smaller N.
        for (Count k = 1; k < n; ++k) {
          bool fits = true;
          for (Count x : {k / 2, (k + 1) / 2}) {
            const Interval iv = confidence_interval(m, x, k, alpha);
            fits = fits && iv.lower >= 0.5 - w / 2 - 1e-12 &&
                   iv.upper <= 0.5 + w / 2 + 1e-12;
          }
          EXPECT_FALSE(fits) << to_string(m) << " w=" << w << " N=" << k;
        }
        const Interval iv = confidence_interval(m, n / 2, n, alpha);
        EXPECT_LE(iv.width(), w + 1e-12);
      }
    }
  }
}

TEST(PlanExact, RejectsNormalMethodAndUnreachableTargets) {
  EXPECT_THROW(plan_devices_exact(CiMethod::kNormal, 0.1, 0.01), DomainError);
  EXPECT_THROW(plan_devices_exact(CiMethod::kWilson, 1e-5, 0.01),
               CapacityError);
}

TEST(Coverage, WilsonMeanCoverageNearNominal) {
  double total = 0.0;
  int cells = 0;
  std::uint64_t stream = 0;
  for (Count n : {10, 50, 200}) {
    for (int i = 1; i <= 19; ++i) {
      const auto est = monte_carlo_validate(
          CoverageExperiment{CiMethod::kWilson, i * 0.05, n, 0.05}, 20000, 11,
          stream++);
      total += est.estimate;
      ++cells;
    }
  }
  EXPECT_NEAR(total / cells, 0.95, 0.02);
}

}  // namespace
}  // namespace pufeval
