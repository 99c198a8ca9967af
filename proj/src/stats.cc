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
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "crackchain/errors.h"

namespace crackchain {

double KolmogorovSurvival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) {
    // The alternating series converges slowly here; the survival function is
    // 1 to double precision.
    return 1.0;
  }
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult KolmogorovSmirnovTest(std::vector<double> samples,
                                 const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InvalidInput("KolmogorovSmirnovTest: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sqrt_n = std::sqrt(n);
  TestResult result;
  result.statistic = d;
  result.p_value = KolmogorovSurvival((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
  return result;
}

TestResult ChiSquareTest(const std::vector<double>& observed,
                         const std::vector<double>& expected,
                         double min_expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw InvalidInput("ChiSquareTest: size mismatch");
  }
  const double total_obs =
      std::accumulate(observed.begin(), observed.end(), 0.0);
  const double total_exp =
      std::accumulate(expected.begin(), expected.end(), 0.0);
  if (total_exp <= 0.0 || total_obs <= 0.0) {
    throw InvalidInput("ChiSquareTest: empty histogram");
  }
  const double scale = total_obs / total_exp;
  std::vector<double> obs_bins;
  std::vector<double> exp_bins;
  double acc_obs = 0.0;
  double acc_exp = 0.0;
  for (size_t i = 0; i < observed.size(); ++i) {
    acc_obs += observed[i];
    acc_exp += expected[i] * scale;
    if (acc_exp >= min_expected) {
      obs_bins.push_back(acc_obs);
      exp_bins.push_back(acc_exp);
      acc_obs = 0.0;
      acc_exp = 0.0;
    }
  }
  if (acc_exp > 0.0 || acc_obs > 0.0) {
    if (exp_bins.empty()) {
      obs_bins.push_back(acc_obs);
      exp_bins.push_back(acc_exp);
    } else {
      obs_bins.back() += acc_obs;
      exp_bins.back() += acc_exp;
    }
  }
  TestResult result;
  for (size_t i = 0; i < obs_bins.size(); ++i) {
    const double diff = obs_bins[i] - exp_bins[i];
    result.statistic += diff * diff / exp_bins[i];
  }
  result.degrees_of_freedom = static_cast<int>(obs_bins.size()) - 1;
  if (result.degrees_of_freedom < 1) {
    result.p_value = 1.0;
    return result;
  }
  boost::math::chi_squared dist(result.degrees_of_freedom);
  result.p_value =
      boost::math::cdf(boost::math::complement(dist, result.statistic));
  return result;
}

double TotalVariation(const std::vector<double>& p,
                      const std::vector<double>& q) {
  const size_t n = std::max(p.size(), q.size());
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    sum += std::abs(a - b);
  }
  return 0.5 * sum;
}

double BinnedTotalVariationToExponential(const std::vector<double>& samples,
                                         double rate, int bins) {
  if (samples.empty() || bins < 1) return 1.0;
  std::vector<double> counts(bins, 0.0);
  for (double x : samples) {
    // The CDF value selects the equal-probability bin directly.
    const double cdf = x <= 0.0 ? 0.0 : -std::expm1(-rate * x);
    const int b = std::min(bins - 1, static_cast<int>(cdf * bins));
    counts[b] += 1.0;
  }
  double sum = 0.0;
  const double n = static_cast<double>(samples.size());
  for (double c : counts) sum += std::abs(c / n - 1.0 / bins);
  return 0.5 * sum;
}

double BinnedTotalVariationToGeometric(const std::vector<double>& counts,
                                       double rho, int bins) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0.0 || !(rho > 0.0 && rho < 1.0)) return 1.0;
  // Upper edges k_j with CDF(k_j) = 1 - rho^{k_j} >= j / bins.
  std::vector<long> edges;
  const double log_rho = std::log(rho);
  for (int j = 1; j < bins; ++j) {
    const long k = std::max(
        1L, static_cast<long>(std::ceil(std::log1p(-static_cast<double>(j) /
                                                   bins) /
                                        log_rho -
                                        1e-12)));
    if (edges.empty() || k > edges.back()) edges.push_back(k);
  }
  double sum = 0.0;
  long lo = 0;  // bin covers (lo, hi]
  double assigned = 0.0;
  for (long hi : edges) {
    double emp = 0.0;
    for (long k = lo + 1; k <= hi && k < static_cast<long>(counts.size()); ++k) {
      emp += counts[k];
    }
    assigned += emp;
    const double ref = std::pow(rho, lo) - std::pow(rho, hi);
    sum += std::abs(emp / total - ref);
    lo = hi;
  }
  const double emp_tail = (total - assigned - (counts.empty() ? 0.0 : counts[0]));
  sum += std::abs(emp_tail / total - std::pow(rho, lo));
  if (!counts.empty()) sum += counts[0] / total;  // mass at k = 0 is off support
  return 0.5 * sum;
}

double Mean(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / x.size();
}

double Variance(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = Mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / (x.size() - 1);
}

double IntegratedAutocorrelationTime(const std::vector<double>& x) {
  const size_t n = x.size();
  if (n < 4) return 1.0;
  const double m = Mean(x);
  double c0 = 0.0;
  for (double v : x) c0 += (v - m) * (v - m);
  c0 /= n;
  if (c0 <= 0.0) return 1.0;
  double tau = 1.0;
  for (size_t t = 1; t < n / 2; ++t) {
    double ct = 0.0;
    for (size_t i = 0; i + t < n; ++i) ct += (x[i] - m) * (x[i + t] - m);
    ct /= n;
    tau += 2.0 * ct / c0;
    if (static_cast<double>(t) >= 5.0 * tau) break;
  }
  return std::max(1.0, tau);
}

}  // namespace crackchain
