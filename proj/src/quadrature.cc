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

#include "crackchain/quadrature.h"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "crackchain/errors.h"

namespace crackchain {

QuadratureRule GaussLegendre(int n, double lo, double hi) {
  if (n < 1) throw InvalidInput("GaussLegendre: n must be positive");
  if (!(hi > lo)) throw InvalidInput("GaussLegendre: empty interval");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess for the i-th root, counted from the right end.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.nodes[i] = mid - half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

namespace {

// L_n(x) and L_{n-1}(x) scaled by exp(-log_scale) so that large x cannot
// overflow; the ratio of the two is exact.
struct LaguerreValues {
  double ln = 1.0;
  double ln_minus_1 = 0.0;
  double log_scale = 0.0;
};

LaguerreValues EvaluateLaguerre(int n, double x) {
  LaguerreValues out;
  double p0 = 0.0;
  double p1 = 1.0;
  for (int k = 0; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0 - x) * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
    if (std::abs(p1) > 1e150) {
      p0 *= 1e-150;
      p1 *= 1e-150;
      out.log_scale += 150.0 * std::log(10.0);
    }
  }
  out.ln = p1;
  out.ln_minus_1 = p0;
  return out;
}

}  // namespace

QuadratureRule GaussLaguerre(int n) {
  if (n < 1) throw InvalidInput("GaussLaguerre: n must be positive");
  Eigen::VectorXd diagonal(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  for (int i = 0; i < n; ++i) diagonal[i] = 2.0 * i + 1.0;
  for (int i = 0; i + 1 < n; ++i) sub[i] = i + 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diagonal, sub.head(n - 1),
                                Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.log_weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()[i];
    for (int iter = 0; iter < 20; ++iter) {
      const LaguerreValues l = EvaluateLaguerre(n, x);
      // x L_n' = n (L_n - L_{n-1}).
      const double dx = x * l.ln / (n * (l.ln - l.ln_minus_1));
      x -= dx;
      if (std::abs(dx) <= 1e-15 * x) break;
    }
    const LaguerreValues next = EvaluateLaguerre(n + 1, x);
    rule.nodes[i] = x;
    rule.log_weights[i] = std::log(x) - 2.0 * std::log(n + 1.0) -
                          2.0 * (std::log(std::abs(next.ln)) + next.log_scale);
    rule.weights[i] = std::exp(rule.log_weights[i]);
  }
  return rule;
}

IntegralResult AdaptiveIntegrate(const std::function<double(double)>& f,
                                 double lo, double hi,
                                 double relative_tolerance, int max_depth) {
  if (!(hi >= lo)) throw InvalidInput("AdaptiveIntegrate: hi < lo");
  IntegralResult result;
  if (hi == lo) return result;
  double error = 0.0;
  result.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, hi, max_depth, relative_tolerance, &error);
  result.error_estimate = error;
  return result;
}

}  // namespace crackchain
