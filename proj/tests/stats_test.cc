// Copyright 2026 The crackchain Authors
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


#include "crackchain/stats.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "crackchain/rng.h"

namespace crackchain {
namespace {

TEST(KolmogorovTest, SurvivalMatchesTabulatedQuantiles) {
  // Standard critical values of the limiting Kolmogorov law.
  EXPECT_NEAR(KolmogorovSurvival(1.3581), 0.05, 1e-4);
  EXPECT_NEAR(KolmogorovSurvival(1.6276), 0.01, 1e-4);
  EXPECT_NEAR(KolmogorovSurvival(0.0), 1.0, 1e-12);
}

TEST(KolmogorovTest, AcceptsCorrectLawAndRejectsWrongOne) {
  Rng rng(11);
  std::vector<double> x(5000);
  for (double& v : x) v = rng.Exponential(2.0);
  const auto exp_cdf = [](double rate) {
    return [rate](double t) { return t <= 0 ? 0.0 : 1.0 - std::exp(-rate * t); };
  };
  EXPECT_GT(KolmogorovSmirnovTest(x, exp_cdf(2.0)).p_value, 0.01);
  EXPECT_LT(KolmogorovSmirnovTest(x, exp_cdf(2.3)).p_value, 1e-6);
}

TEST(KolmogorovTest, StatisticOfKnownSample) {
  // Against U(0, 1), the sample {0.1, 0.5, 0.9} has D = max(0.1, 1/3 - 0.1,
  // ..., 0.9 - 2/3) = 0.2333...
  const TestResult r = KolmogorovSmirnovTest(
      {0.9, 0.1, 0.5}, [](double t) { return std::clamp(t, 0.0, 1.0); });
  EXPECT_NEAR(r.statistic, 0.9 - 2.0 / 3.0, 1e-12);
}

TEST(ChiSquareTest, StatisticAndPValueAgreeWithDefinition) {
  const std::vector<double> observed = {18, 22, 30, 30};
  const std::vector<double> expected = {25, 25, 25, 25};
  const TestResult r = ChiSquareTest(observed, expected);
  const double stat = (49.0 + 9.0 + 25.0 + 25.0) / 25.0;
  EXPECT_NEAR(r.statistic, stat, 1e-12);
  EXPECT_EQ(r.degrees_of_freedom, 3);
  const boost::math::chi_squared law(3);
  EXPECT_NEAR(r.p_value, boost::math::cdf(boost::math::complement(law, stat)),
              1e-12);
}

TEST(ChiSquareTest, MergesSparseBins) {
  const TestResult r =
      ChiSquareTest({10, 10, 1, 1, 0}, {10, 10, 1, 0.5, 0.5}, 5.0);
  // The last three bins expect 2 < 5 together and fold into the second bin,
  // leaving two bins that match exactly.
  EXPECT_EQ(r.degrees_of_freedom, 1);
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
}

TEST(TotalVariationTest, HalfL1Distance) {
  EXPECT_NEAR(TotalVariation({0.5, 0.5}, {1.0}), 0.5, 1e-15);
  EXPECT_NEAR(TotalVariation({0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}), 0.0, 1e-15);
}

TEST(TotalVariationTest, BinnedDistancesSmallForCorrectLaws) {
  Rng rng(5);
  std::vector<double> y(100000);
  for (double& v : y) v = rng.Exponential(0.7);
  EXPECT_LT(BinnedTotalVariationToExponential(y, 0.7), 0.02);
  EXPECT_GT(BinnedTotalVariationToExponential(y, 1.4), 0.2);

  const double rho = 0.6;
  std::vector<double> counts(200, 0.0);
  for (int i = 0; i < 100000; ++i) {
    int k = 1;
    while (rng.Uniform() < rho) ++k;
    if (k < 200) counts[k] += 1.0;
  }
  EXPECT_LT(BinnedTotalVariationToGeometric(counts, rho), 0.02);
  EXPECT_GT(BinnedTotalVariationToGeometric(counts, 0.3), 0.2);
}

TEST(AutocorrelationTest, MatchesAr1Value) {
  // AR(1) with coefficient phi has tau = (1 + phi) / (1 - phi).
  const double phi = 0.8;
  Rng rng(9);
  std::vector<double> x(400000);
  double state = 0.0;
  for (double& v : x) {
    state = phi * state + rng.Normal();
    v = state;
  }
  EXPECT_NEAR(IntegratedAutocorrelationTime(x), 9.0, 0.9);
  EXPECT_EQ(IntegratedAutocorrelationTime({1.0, 1.0, 1.0, 1.0, 1.0}), 1.0);
}

TEST(MomentsTest, MeanAndUnbiasedVariance) {
  EXPECT_DOUBLE_EQ(Mean({1, 2, 3, 4}), 2.5);
  EXPECT_DOUBLE_EQ(Variance({1, 2, 3, 4}), 5.0 / 3.0);
}

}  // namespace
}  // namespace crackchain
