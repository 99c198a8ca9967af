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

#ifndef CRACKCHAIN_DEFECT_GAS_H_
#define CRACKCHAIN_DEFECT_GAS_H_

#include <string>
#include <vector>

#include "crackchain/transfer_operator.h"

namespace crackchain {

// Cluster interaction f(k) for k = 1 .. k_cut, with the certified tail
// |f(k)| <= tail_first * exp(-tail_rate (k - k_cut - 1)) for k > k_cut.
struct InteractionSeries {
  std::vector<double> f;
  double tail_first = 0.0;
  double tail_rate = 30.0;

  int k_cut() const { return static_cast<int>(f.size()); }
  double at(int k) const {
    return (k >= 1 && k <= k_cut()) ? f[k - 1] : 0.0;
  }
  // Upper bound of sum_{k > k_cut} |f(k)| x^k for 0 < x <= 1.
  double TailBound(double x) const;
  // f identically zero: the ideal lattice gas.
  static InteractionSeries Zero() { return {}; }
  static InteractionSeries Finite(std::vector<double> values) {
    InteractionSeries s;
    s.f = std::move(values);
    return s;
  }
};

struct EffectiveInteractionValue {
  double V = 0.0;  // -(1/beta) log Q_k - k g_R - g_surf_R
  double f = 0.0;  // exp(-beta V) - 1
};

EffectiveInteractionValue EffectiveInteraction(const TransferSolution& sol,
                                               int k);

// f(k) from the transfer solution, kept up to the first k at which two
// consecutive values fall below `noise_floor`. The tail rate is 0.9 times
// the spectral gap (capped at 30) and the tail starts at the noise floor.
InteractionSeries EffectiveInteractionSeries(const TransferSolution& sol,
                                             int k_scan = 400,
                                             double noise_floor = 1e-13);

// log q = -beta (g_surf + p R) - log(beta p). Throws RegimeError for p <= 0.
double LogEffectiveActivity(double beta, double pressure, double R,
                            double g_surf_R);
double EffectiveActivity(double beta, double pressure, double R,
                         double g_surf_R);

// log E[exp(beta C (R + Y)^-(s-2))] with Y ~ Exp(beta p), by adaptive
// quadrature over Y on [0, 60 / (beta p)]. Zero for C = 0 or
// compact support. Throws InvalidInput for s <= 2 and RegimeError for p <= 0.
double LambdaAcross(double beta, double pressure, double R, double C,
                    double s, bool compact_support = false);

// The renewal model of cluster sizes: P(T = k) = q (1 + f(k)) u^k with u the
// root of q sum_k (1 + f(k)) u^k = 1.
class DefectGasModel {
 public:
  // Throws RegimeError when epsilon = q sum |f| >= 1 or q <= 0.
  static DefectGasModel Solve(double q, InteractionSeries f);
  static DefectGasModel FromTransfer(const TransferSolution& sol,
                                     double lambda_across = 0.0);

  double q() const { return q_; }
  double u() const { return 1.0 - w_; }
  // 1 - u, kept separately because u is close to one when q is small.
  double one_minus_u() const { return w_; }
  double log_u() const { return log_u_; }
  double epsilon() const { return epsilon_; }
  double mu() const { return mu_; }
  double var() const { return var_; }
  double lambda_across() const { return lambda_across_; }
  void set_lambda_across(double lambda) { lambda_across_ = lambda; }
  const InteractionSeries& interaction() const { return f_; }
  // Bound on the neglected tail of the renewal series at the root.
  double series_tail_bound() const { return tail_bound_; }

  double Pmf(int k) const;
  double LogPmf(int k) const;
  // |q sum (1 + f(k)) u^k - 1| with the series summed in closed form.
  double RenewalResidual() const;
  // sum_{k<=k_max} P(T = k); the remainder is q u^{k_max+1} / (1 - u) plus
  // the f tail.
  double CumulativeMass(int k_max) const;

  // Cumulant generating function log E[exp(t T)] for t < -log u.
  double Phi(double t) const;
  double PhiDerivative(double t) const;
  double PhiSecondDerivative(double t) const;
  double t_max() const { return -log_u_; }

 private:
  DefectGasModel() = default;
  // Series S_r(delta) = sum_k k^r (1 + f(k)) x^{k-1} with x = exp(-delta).
  void Moments(double delta, double* s0, double* s1, double* s2) const;

  double q_ = 0.0;
  double w_ = 1.0;
  double log_u_ = 0.0;
  double epsilon_ = 0.0;
  double mu_ = 0.0;
  double var_ = 0.0;
  double lambda_across_ = 0.0;
  double tail_bound_ = 0.0;
  InteractionSeries f_;
};

class RateFunctions {
 public:
  explicit RateFunctions(DefectGasModel model) : model_(std::move(model)) {}

  double Phi(double t) const { return model_.Phi(t); }
  // Convex conjugate of Phi. +inf for x < 1, -log P(T = 1) at x = 1.
  double I(double x) const;
  // y I(1 / y) for y > 0, -log u at y = 0, +inf for y < 0 or y > 1.
  double J(double y) const;
  // Root t of Phi(t) = y.
  double PhiInverse(double y) const;
  // sup_x (t x - I(x)) by golden-section search; recovers Phi(t) for the
  // duality check.
  double Biconjugate(double t) const;
  const DefectGasModel& model() const { return model_; }

 private:
  // t solving Phi'(t) = x for x > 1.
  double SolveSlope(double x) const;
  DefectGasModel model_;
};

struct GeometricComparison {
  double tv_T = 0.0;             // TV(T, Geom(q / (1 + q)))
  double tv_size_biased = 0.0;   // TV(T~, G~)
  double mean_T = 0.0;
  double mean_geometric = 0.0;   // (1 + q) / q
  double constant_K = 0.0;       // tv_T / epsilon, measured
  double free_energy_lhs = 0.0;  // |1 - (1 + q) u|
  double free_energy_rhs = 0.0;  // q epsilon / (1 - epsilon)
  bool free_energy_bound_holds = false;
};

GeometricComparison CompareWithGeometric(const DefectGasModel& model);

struct MomentBoundCheck {
  int r = 0;
  double tau = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// q sum k^r |f(k)| exp(-k tau q) <= r! epsilon / (tau q)^r for r in {1, 2},
// tau in {0.25, 0.5}.
std::vector<MomentBoundCheck> CheckMomentBounds(const DefectGasModel& model);

struct QuadraticFloor {
  double delta = 0.0;
  double c = 0.0;  // smallest c with I(x) >= q^2 (x - mu)^2 / (2 c) on grid
};

QuadraticFloor MeasureQuadraticFloor(const RateFunctions& rates,
                                     double delta = 0.5, int grid = 200);

enum class Regime { kDiluteCracks, kCrackAggregation };

struct RegimeClassification {
  Regime regime = Regime::kDiluteCracks;
  double margin = 0.0;  // |e0| - e_surf / 2
  std::vector<std::string> annotations;
};

std::string RegimeName(Regime regime);
RegimeClassification ClassifyRegime(double e0, double e_surf);

}  // namespace crackchain

#endif  // CRACKCHAIN_DEFECT_GAS_H_
