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

#include "crackchain/defect_gas.h"

#include <algorithm>
#include <cmath>

#include "crackchain/errors.h"
#include "crackchain/quadrature.h"

namespace crackchain {
namespace {

// Bisection in delta on a function that decreases in delta, with the
// bracket grown geometrically on both sides. Returns the root delta > 0.
template <typename F>
double DecreasingRootInDelta(const F& g) {
  double lo = 1.0;
  while (g(lo) < 0.0 && lo > 1e-300) lo *= 0.5;
  double hi = 1.0;
  while (g(hi) > 0.0 && hi < 1e6) hi *= 2.0;
  if (hi <= lo) hi = 2.0 * lo;
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = std::sqrt(lo * hi);  // bisection in log delta
    if (!(mid > lo && mid < hi)) break;
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace

double InteractionSeries::TailBound(double x) const {
  if (tail_first == 0.0) return 0.0;
  const double ratio = std::exp(-tail_rate) * x;
  return tail_first * std::pow(x, k_cut() + 1) / (1.0 - ratio);
}

EffectiveInteractionValue EffectiveInteraction(const TransferSolution& sol,
                                               int k) {
  if (k < 1) throw InvalidInput("effective interaction: k must be >= 1");
  EffectiveInteractionValue out;
  out.f = BoundaryLayerSequence(sol, k).back();
  out.V = -std::log1p(out.f) / sol.beta();
  return out;
}

InteractionSeries EffectiveInteractionSeries(const TransferSolution& sol,
                                             int k_scan, double noise_floor) {
  const std::vector<double> f = BoundaryLayerSequence(sol, k_scan);
  int cut = k_scan;
  for (int k = 1; k < k_scan; ++k) {
    if (std::abs(f[k - 1]) < noise_floor && std::abs(f[k]) < noise_floor) {
      cut = k - 1;
      break;
    }
  }
  InteractionSeries series;
  series.f.assign(f.begin(), f.begin() + cut);
  const double gap = sol.spectral_gap();
  series.tail_rate = std::isfinite(gap) ? std::min(0.9 * gap, 30.0) : 30.0;
  series.tail_first = noise_floor;
  return series;
}

double LogEffectiveActivity(double beta, double pressure, double R,
                            double g_surf_R) {
  if (!(pressure > 0.0)) {
    throw RegimeError(
        "effective activity needs pressure > 0 (it divides by beta p)");
  }
  return -beta * (g_surf_R + pressure * R) - std::log(beta * pressure);
}

double EffectiveActivity(double beta, double pressure, double R,
                         double g_surf_R) {
  return std::exp(LogEffectiveActivity(beta, pressure, R, g_surf_R));
}

double LambdaAcross(double beta, double pressure, double R, double C,
                    double s, bool compact_support) {
  if (!(s > 2.0)) throw InvalidInput("lambda across cracks: need s > 2");
  if (!(pressure > 0.0)) {
    throw RegimeError("lambda across cracks needs pressure > 0");
  }
  if (compact_support || C == 0.0) return 0.0;
  const double bp = beta * pressure;
  // E[expm1(beta C (R + Y)^-(s-2))] over y in [0, 60 / (beta p)]; the
  // integrand is smooth there and the dropped tail is below
  // exp(-60) expm1(beta C R^-(s-2)).
  auto integrand = [&](double y) {
    return bp * std::exp(-bp * y) *
           std::expm1(beta * C * std::pow(R + y, -(s - 2.0)));
  };
  const IntegralResult r =
      AdaptiveIntegrate(integrand, 0.0, 60.0 / bp, 1e-12, 30);
  return std::log1p(r.value);
}

DefectGasModel DefectGasModel::Solve(double q, InteractionSeries f) {
  if (!(q > 0.0)) throw RegimeError("defect gas: activity q must be > 0");
  DefectGasModel model;
  model.q_ = q;
  model.f_ = std::move(f);
  double abs_sum = 0.0;
  for (double x : model.f_.f) abs_sum += std::abs(x);
  model.epsilon_ = q * (abs_sum + model.f_.TailBound(1.0));
  if (!(model.epsilon_ < 1.0)) {
    throw RegimeError(
        "defect gas: epsilon = q sum |f| >= 1, outside the perturbative "
        "regime");
  }
  // F(w) = q sum (1 + f(k)) u^k - 1 with u = 1 - w decreases in w.
  auto residual = [&](double w) {
    const double log_u = std::log1p(-w);
    double sum = (1.0 - w) / w;
    for (int k = 1; k <= model.f_.k_cut(); ++k) {
      sum += model.f_.f[k - 1] * std::exp(k * log_u);
    }
    return q * sum - 1.0;
  };
  double lo = 1e-12;
  double hi = 1.0 - 1e-12;
  if (!(residual(lo) > 0.0) || !(residual(hi) < 0.0)) {
    throw ValidationError("defect gas: renewal root not bracketed");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  model.w_ = (std::abs(residual(lo)) < std::abs(residual(hi))) ? lo : hi;
  model.log_u_ = std::log1p(-model.w_);
  model.tail_bound_ = q * model.f_.TailBound(1.0 - model.w_);
  double s0, s1, s2;
  model.Moments(-model.log_u_, &s0, &s1, &s2);
  model.mu_ = s1 / s0;
  model.var_ = s2 / s0 - model.mu_ * model.mu_;
  return model;
}

DefectGasModel DefectGasModel::FromTransfer(const TransferSolution& sol,
                                            double lambda_across) {
  const double q = EffectiveActivity(sol.beta(), sol.pressure(), sol.R(),
                                     sol.g_surf_R());
  DefectGasModel model = Solve(q, EffectiveInteractionSeries(sol));
  model.lambda_across_ = lambda_across;
  return model;
}

void DefectGasModel::Moments(double delta, double* s0, double* s1,
                             double* s2) const {
  const double x = std::exp(-delta);
  const double y = -std::expm1(-delta);  // 1 - x without cancellation
  *s0 = 1.0 / y;
  *s1 = 1.0 / (y * y);
  *s2 = (1.0 + x) / (y * y * y);
  double xp = 1.0;  // x^{k-1}
  for (int k = 1; k <= f_.k_cut(); ++k) {
    const double term = f_.f[k - 1] * xp;
    *s0 += term;
    *s1 += k * term;
    *s2 += static_cast<double>(k) * k * term;
    xp *= x;
  }
}

double DefectGasModel::Pmf(int k) const {
  if (k < 1) return 0.0;
  return q_ * (1.0 + f_.at(k)) * std::exp(k * log_u_);
}

double DefectGasModel::LogPmf(int k) const {
  if (k < 1) return -kInfinity;
  return std::log(q_) + std::log1p(f_.at(k)) + k * log_u_;
}

double DefectGasModel::RenewalResidual() const {
  double s0, s1, s2;
  Moments(-log_u_, &s0, &s1, &s2);
  return std::abs(q_ * (1.0 - w_) * s0 - 1.0);
}

double DefectGasModel::CumulativeMass(int k_max) const {
  double sum = 0.0;
  for (int k = 1; k <= k_max; ++k) sum += Pmf(k);
  return sum;
}

double DefectGasModel::Phi(double t) const {
  if (!(t < t_max())) return kInfinity;
  const double delta = t_max() - t;
  double s0, s1, s2;
  Moments(delta, &s0, &s1, &s2);
  return std::log(q_) - delta + std::log(s0);
}

double DefectGasModel::PhiDerivative(double t) const {
  if (!(t < t_max())) return kInfinity;
  double s0, s1, s2;
  Moments(t_max() - t, &s0, &s1, &s2);
  return s1 / s0;
}

double DefectGasModel::PhiSecondDerivative(double t) const {
  if (!(t < t_max())) return kInfinity;
  double s0, s1, s2;
  Moments(t_max() - t, &s0, &s1, &s2);
  const double m = s1 / s0;
  return s2 / s0 - m * m;
}

double RateFunctions::SolveSlope(double x) const {
  const double tm = model_.t_max();
  const double delta = DecreasingRootInDelta(
      [&](double d) { return model_.PhiDerivative(tm - d) - x; });
  double t = tm - delta;
  // Newton polish on Phi'(t) = x.
  for (int i = 0; i < 3; ++i) {
    const double d2 = model_.PhiSecondDerivative(t);
    if (!(d2 > 0.0)) break;
    const double next = t - (model_.PhiDerivative(t) - x) / d2;
    if (!(next < tm)) break;
    t = next;
  }
  return t;
}

double RateFunctions::I(double x) const {
  if (x < 1.0) return kInfinity;
  if (x == 1.0) {
    const double p1 = model_.Pmf(1);
    return p1 > 0.0 ? -model_.LogPmf(1) : kInfinity;
  }
  const double t = SolveSlope(x);
  return std::max(0.0, t * x - model_.Phi(t));
}

double RateFunctions::J(double y) const {
  if (y < 0.0 || y > 1.0) return kInfinity;
  if (y == 0.0) return -model_.log_u();
  return y * I(1.0 / y);
}

double RateFunctions::PhiInverse(double y) const {
  const double tm = model_.t_max();
  const double delta =
      DecreasingRootInDelta([&](double d) { return model_.Phi(tm - d) - y; });
  return tm - delta;
}

double RateFunctions::Biconjugate(double t) const {
  // t x - I(x) is concave in x; golden-section search on a bracket around
  // the maximizer Phi'(t).
  const double center = model_.PhiDerivative(t);
  double lo = 1.0;
  double hi = 4.0 * center + 10.0;
  auto h = [&](double x) { return t * x - I(x); };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - g * (hi - lo);
  double b = lo + g * (hi - lo);
  double ha = h(a);
  double hb = h(b);
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * hi; ++iter) {
    if (ha < hb) {
      lo = a;
      a = b;
      ha = hb;
      b = lo + g * (hi - lo);
      hb = h(b);
    } else {
      hi = b;
      b = a;
      hb = ha;
      a = hi - g * (hi - lo);
      ha = h(a);
    }
  }
  return std::max({ha, hb, h(center)});
}

GeometricComparison CompareWithGeometric(const DefectGasModel& model) {
  GeometricComparison cmp;
  const double q = model.q();
  const double rho = 1.0 / (1.0 + q);
  const double log_rho = -std::log1p(q);
  const double mu = model.mu();
  const double mu_g = (1.0 + q) / q;
  cmp.mean_T = mu;
  cmp.mean_geometric = mu_g;
  const double x = std::max(model.u(), rho);
  const double one_minus_x = std::min(model.one_minus_u(), q / (1.0 + q));
  double tv = 0.0;
  double tv_sb = 0.0;
  const long k_cut = model.interaction().k_cut();
  const long k_limit = 50000000;
  long k = 1;
  for (; k <= k_limit; ++k) {
    const double pt = model.Pmf(static_cast<int>(k));
    const double pg = q * std::exp(k * log_rho);  // (1 - rho) rho^{k-1}
    tv += std::abs(pt - pg);
    tv_sb += std::abs(k * pt / mu - k * pg / mu_g);
    if (k > k_cut) {
      const double xk = std::exp((k + 1) * std::log(x));
      const double tail = (k + 1) * xk / (one_minus_x * one_minus_x);
      if (tail * std::max(q, 1.0 / mu) < 1e-17) break;
    }
  }
  if (k > k_limit) {
    // Charge both remaining masses in full.
    const double rem_t = q * std::exp((k + 1) * model.log_u()) /
                         model.one_minus_u();
    const double rem_g = std::exp(k * log_rho);
    tv += rem_t + rem_g;
    tv_sb = 2.0;  // unresolved tail; report the trivial bound
  }
  tv += model.series_tail_bound();
  cmp.tv_T = 0.5 * tv;
  cmp.tv_size_biased = 0.5 * tv_sb;
  cmp.constant_K = model.epsilon() > 0.0 ? cmp.tv_T / model.epsilon() : 0.0;
  cmp.free_energy_lhs = std::abs(1.0 - (1.0 + q) * model.u());
  cmp.free_energy_rhs = q * model.epsilon() / (1.0 - model.epsilon());
  cmp.free_energy_bound_holds =
      cmp.free_energy_lhs <= cmp.free_energy_rhs + 1e-15;
  return cmp;
}

std::vector<MomentBoundCheck> CheckMomentBounds(const DefectGasModel& model) {
  std::vector<MomentBoundCheck> out;
  const double q = model.q();
  const InteractionSeries& f = model.interaction();
  for (int r : {1, 2}) {
    for (double tau : {0.25, 0.5}) {
      MomentBoundCheck c;
      c.r = r;
      c.tau = tau;
      double sum = 0.0;
      for (int k = 1; k <= f.k_cut(); ++k) {
        sum += std::pow(k, r) * std::abs(f.f[k - 1]) * std::exp(-k * tau * q);
      }
      // Tail terms with the certified envelope.
      for (int k = f.k_cut() + 1; k <= f.k_cut() + 2000; ++k) {
        const double env =
            f.tail_first * std::exp(-f.tail_rate * (k - f.k_cut() - 1));
        if (env == 0.0) break;
        sum += std::pow(k, r) * env * std::exp(-k * tau * q);
      }
      c.lhs = q * sum;
      const double fact = (r == 1) ? 1.0 : 2.0;
      c.rhs = fact * model.epsilon() / std::pow(tau * q, r);
      c.holds = c.lhs <= c.rhs * (1.0 + 1e-12);
      out.push_back(c);
    }
  }
  return out;
}

QuadraticFloor MeasureQuadraticFloor(const RateFunctions& rates, double delta,
                                     int grid) {
  const DefectGasModel& m = rates.model();
  const double q = m.q();
  const double mu = m.mu();
  QuadraticFloor out;
  out.delta = delta;
  const double lo = std::max(1.0 + 1e-9, mu - delta / q);
  const double hi = mu + delta / q;
  for (int i = 0; i <= grid; ++i) {
    const double x = lo + (hi - lo) * i / grid;
    const double d = x - mu;
    if (std::abs(d) < 1e-9 * mu) continue;
    const double ix = rates.I(x);
    if (!(ix > 0.0)) continue;
    out.c = std::max(out.c, q * q * d * d / (2.0 * ix));
  }
  return out;
}

std::string RegimeName(Regime regime) {
  return regime == Regime::kDiluteCracks ? "dilute-cracks"
                                         : "crack-aggregation";
}

RegimeClassification ClassifyRegime(double e0, double e_surf) {
  if (!(e0 < 0.0) || !(e_surf > 0.0)) {
    throw InvalidInput("ClassifyRegime: need e0 < 0 and e_surf > 0");
  }
  RegimeClassification out;
  out.margin = std::abs(e0) - 0.5 * e_surf;
  if (out.margin > 0.0) {
    out.regime = Regime::kDiluteCracks;
    out.annotations.push_back(
        "crack activity q ~ exp(-beta e_surf / 2) on the dilute pressure path");
  } else {
    out.regime = Regime::kCrackAggregation;
    out.annotations.push_back(
        "heuristic, not rigorous: beta p_beta ~ exp(-beta |e0|)");
    out.annotations.push_back(
        "heuristic, not rigorous: cracks prefer to aggregate; defect-gas "
        "predictions do not apply");
  }
  return out;
}

}  // namespace crackchain
