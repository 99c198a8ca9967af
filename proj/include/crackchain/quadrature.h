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

#ifndef CRACKCHAIN_QUADRATURE_H_
#define CRACKCHAIN_QUADRATURE_H_

#include <functional>
#include <vector>

namespace crackchain {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  // log of the weights; filled by GaussLaguerre, whose far weights underflow.
  std::vector<double> log_weights;
};

// Gauss-Legendre rule with n points mapped to [lo, hi]. Nodes are computed by
// Newton iteration on the Legendre recurrence and are returned in increasing
// order.
QuadratureRule GaussLegendre(int n, double lo, double hi);

// Gauss-Laguerre rule with n points for int_0^inf exp(-x) f(x) dx. Nodes come
// from the eigenvalues of the Jacobi matrix, polished by Newton steps on the
// Laguerre recurrence; weights use x / ((n + 1) L_{n+1}(x))^2.
QuadratureRule GaussLaguerre(int n);

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Adaptive Gauss-Kronrod (15 points per panel) integration of f over the
// finite interval [lo, hi] to the requested relative tolerance.
IntegralResult AdaptiveIntegrate(const std::function<double(double)>& f,
                                 double lo, double hi,
                                 double relative_tolerance = 1e-12,
                                 int max_depth = 30);

}  // namespace crackchain

#endif  // CRACKCHAIN_QUADRATURE_H_
