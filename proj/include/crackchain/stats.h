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

#ifndef CRACKCHAIN_STATS_H_
#define CRACKCHAIN_STATS_H_

#include <functional>
#include <vector>

namespace crackchain {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int degrees_of_freedom = 0;
};

// Complementary CDF of the limiting Kolmogorov distribution,
// P(K > x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2).
double KolmogorovSurvival(double x);

// One-sample Kolmogorov-Smirnov test of `samples` against `cdf`. The p-value
// uses the asymptotic law with the Stephens small-sample correction. The
// input is copied and sorted.
TestResult KolmogorovSmirnovTest(std::vector<double> samples,
                                 const std::function<double(double)>& cdf);

// Pearson chi-square test of observed counts against expected counts. Bins
// are merged left to right until every merged bin expects at least
// `min_expected` events. The expected counts are rescaled to the observed
// total, and the degrees of freedom are (merged bins - 1).
TestResult ChiSquareTest(const std::vector<double>& observed,
                         const std::vector<double>& expected,
                         double min_expected = 5.0);

// Total-variation distance between two probability vectors on a common
// support (half of the L1 distance). Missing entries count as zero mass.
double TotalVariation(const std::vector<double>& p,
                      const std::vector<double>& q);

// Total-variation distance between the empirical law of `samples` and
// Exp(rate), computed on `bins` equal-probability bins of the exponential.
double BinnedTotalVariationToExponential(const std::vector<double>& samples,
                                         double rate, int bins = 64);

// Total-variation distance between an empirical law of positive integers
// given by `counts` (counts[k] for k = 0, 1, ...) and the geometric law
// P(k) = (1 - rho) rho^{k-1} on k >= 1. Bins are the geometric quantiles, so
// each bin carries roughly 1/bins of the reference mass.
double BinnedTotalVariationToGeometric(const std::vector<double>& counts,
                                       double rho, int bins = 20);

double Mean(const std::vector<double>& x);
double Variance(const std::vector<double>& x);  // unbiased

// Integrated autocorrelation time with Sokal's automatic window (c = 5).
// Returns 1 for series shorter than 4 or with zero variance.
double IntegratedAutocorrelationTime(const std::vector<double>& x);

}  // namespace crackchain

#endif  // CRACKCHAIN_STATS_H_
