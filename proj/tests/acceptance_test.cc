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


// Acceptance suite: one PASS/FAIL line per criterion. Every reference value
// is computed here from an independent route (direct quadrature, closed
// forms or an independent eigensolver), never read back from the library.
// Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "crackchain/defect_gas.h"
#include "crackchain/errors.h"
#include "crackchain/ground_state.h"
#include "crackchain/potential.h"
#include "crackchain/rng.h"
#include "crackchain/sampler.h"
#include "crackchain/stats.h"
#include "crackchain/transfer_operator.h"
#include "crackchain/verify.h"

namespace crackchain {
namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

constexpr double kR = 2.5;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Composite Gauss-Legendre on [lo, hi] with `panels` equal panels.
template <class F>
double Composite(F f, double lo, double hi, int panels) {
  const double h = (hi - lo) / panels;
  double s = 0.0;
  for (int k = 0; k < panels; ++k) {
    s += gauss<double, 20>::integrate(f, lo + k * h, lo + (k + 1) * h);
  }
  return s;
}

// exp(-beta e), zero inside the core.
double Boltzmann(double beta, double e) {
  return std::isfinite(e) ? std::exp(-beta * e) : 0.0;
}

// --- 1 -----------------------------------------------------------------------

Outcome NearestNeighborEquivalence() {
  const PairPotential v = PairPotential::LennardJones();
  double worst_g = 0.0, worst_s = 0.0;
  for (double beta : {5.0, 10.0, 20.0}) {
    const double z = gauss_kronrod<double, 61>::integrate(
        [&](double r) { return Boltzmann(beta, v(r)); }, v.r_hc(), kR, 15,
        1e-14);
    const double g = -std::log(z) / beta;
    const TransferSolution sol = TransferSolution::Build(v, 1, beta, 0.0, kR);
    worst_g = std::max(worst_g, std::abs(sol.g_R() - g) / std::abs(g));
    worst_s = std::max(worst_s,
                       std::abs(sol.g_surf_R() + sol.g_R()) / std::abs(g));
  }
  return {worst_g < 1e-8 && worst_s < 1e-8,
          "max rel err g = " + Fmt(worst_g) + ", g_surf + g = " + Fmt(worst_s)};
}

// --- 2 -----------------------------------------------------------------------

// Tensor Gauss rule on [r_hc, R]: 36 panels of 20 points.
struct TensorRule {
  std::vector<double> x, w;
};

TensorRule MakeTensorRule(double lo, double hi, int panels) {
  TensorRule rule;
  const auto& abscissa = gauss<double, 20>::abscissa();
  const auto& weights = gauss<double, 20>::weights();
  const double h = (hi - lo) / panels;
  for (int k = 0; k < panels; ++k) {
    const double mid = lo + (k + 0.5) * h;
    for (size_t i = 0; i < abscissa.size(); ++i) {
      for (int sign : {-1, 1}) {
        if (abscissa[i] == 0.0 && sign < 0) continue;
        rule.x.push_back(mid + sign * 0.5 * h * abscissa[i]);
        rule.w.push_back(0.5 * h * weights[i]);
      }
    }
  }
  return rule;
}

Outcome BruteForceEquivalence() {
  const PairPotential v = PairPotential::LennardJones();
  const double beta = 5.0;
  // Below 0.8 every Boltzmann factor is under exp(-5 * 40), far below 1e-6.
  const TensorRule t = MakeTensorRule(0.8, kR, 12);
  const size_t n = t.x.size();
  std::vector<double> v1(n);
  std::vector<std::vector<double>> v2(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    v1[i] = v(t.x[i]);
    for (size_t j = 0; j < n; ++j) v2[i][j] = v(t.x[i] + t.x[j]);
  }
  double q3 = 0.0, q4 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const double e2 = v1[i] + v1[j] + v2[i][j];
      q3 += t.w[i] * t.w[j] * std::exp(-beta * e2);
      for (size_t k = 0; k < n; ++k) {
        const double e3 = e2 + v1[k] + v2[j][k];
        q4 += t.w[i] * t.w[j] * t.w[k] * std::exp(-beta * e3);
      }
    }
  }
  const TransferSolution sol = TransferSolution::Build(v, 2, beta, 0.0, kR);
  const double t3 = std::exp(LogTruncatedPartitionFunction(sol, 3));
  const double t4 = std::exp(LogTruncatedPartitionFunction(sol, 4));
  const double e3 = std::abs(t3 - q3) / q3;
  const double e4 = std::abs(t4 - q4) / q4;
  return {e3 < 1e-6 && e4 < 1e-6,
          "rel err Q_3 = " + Fmt(e3) + ", Q_4 = " + Fmt(e4)};
}

// --- 3 -----------------------------------------------------------------------

Outcome IdealDefectGas() {
  const double q = 0.1;
  const DefectGasModel model = DefectGasModel::Solve(q, InteractionSeries::Zero());
  const RateFunctions rates(model);
  const double du = std::abs(model.u() - 1.0 / 1.1);
  const double dm = std::abs(model.mu() - 11.0);
  const double tv = CompareWithGeometric(model).tv_T;
  const double j = rates.J(q / (1.0 + q));
  const double worst = std::max({du, dm / 11.0, std::abs(tv), std::abs(j)});
  return {worst < 1e-12, "|u - 1/1.1| = " + Fmt(du) + ", |E T - 11| = " +
                             Fmt(dm) + ", TV = " + Fmt(tv) + ", J = " + Fmt(j)};
}

// --- 4 -----------------------------------------------------------------------

// Independent evaluation of both sides of the moment bound.
bool MomentBoundsHold(const DefectGasModel& model, double* worst_ratio) {
  const double q = model.q();
  const InteractionSeries& f = model.interaction();
  double eps_sum = 0.0;
  for (int k = 1; k <= f.k_cut(); ++k) eps_sum += std::abs(f.at(k));
  const double eps = q * (eps_sum + f.TailBound(1.0));
  bool ok = true;
  for (int r : {1, 2}) {
    for (double tau : {0.25, 0.5}) {
      double lhs = 0.0;
      for (int k = 1; k <= f.k_cut(); ++k) {
        lhs += std::pow(k, r) * std::abs(f.at(k)) * std::exp(-k * tau * q);
      }
      lhs *= q;
      const double rhs = (r == 1 ? 1.0 : 2.0) * eps / std::pow(tau * q, r);
      if (rhs > 0.0) *worst_ratio = std::max(*worst_ratio, lhs / rhs);
      if (lhs > rhs * (1.0 + 1e-12)) ok = false;
    }
  }
  return ok;
}

Outcome RenewalAndMoments() {
  std::vector<DefectGasModel> models;
  models.push_back(DefectGasModel::Solve(0.1, InteractionSeries::Zero()));
  models.push_back(
      DefectGasModel::Solve(0.05, InteractionSeries::Finite({0.4, -0.2, 0.1})));
  for (const PairPotential& v :
       {PairPotential::LennardJones(), PairPotential::Spline()}) {
    for (double beta : {5.0, 10.0, 20.0}) {
      const double es = TransferSolution::Build(v, 2, beta, 0.0, kR).g_surf_R();
      const TransferSolution sol =
          TransferSolution::Build(v, 2, beta, PressurePath(beta, es), kR);
      models.push_back(DefectGasModel::FromTransfer(sol));
    }
  }
  double worst_residual = 0.0;
  double worst_ratio = 0.0;
  bool ok = true;
  for (const DefectGasModel& m : models) {
    // Residual of the renewal equation summed here in closed form for the
    // geometric part plus the finite interaction terms.
    const double u = m.u();
    double s = u / (1.0 - u);
    for (int k = 1; k <= m.interaction().k_cut(); ++k) {
      s += m.interaction().at(k) * std::pow(u, k);
    }
    const double residual =
        std::max(std::abs(m.q() * s - 1.0), m.RenewalResidual());
    worst_residual = std::max(worst_residual, residual);
    if (!(residual < 1e-12)) ok = false;
    if (!MomentBoundsHold(m, &worst_ratio)) ok = false;
    for (const MomentBoundCheck& c : CheckMomentBounds(m)) {
      if (!c.holds) ok = false;
    }
  }
  return {ok, std::to_string(models.size()) + " models, max residual " +
                  Fmt(worst_residual) + ", max lhs/rhs " + Fmt(worst_ratio)};
}

// --- 5 -----------------------------------------------------------------------

Outcome GroundStateRegime() {
  const PairPotential v = PairPotential::LennardJones();
  const SurfaceEstimate est = EstimateBulkAndSurface(v, 2, 50);
  // Closed-form lattice constant of W(r) = v(r) + v(2r).
  const double a =
      std::pow(2.0 * (1.0 + std::pow(2.0, -12)) / (1.0 + std::pow(2.0, -6)),
               1.0 / 6.0);
  const double e0 = v(a) + v(2.0 * a);
  bool ok = std::abs(est.a - a) < 1e-9 && std::abs(est.e0 - e0) < 1e-12;
  double min_margin = kInf;
  for (size_t i = 0; i < est.reports.size(); ++i) {
    const int n = est.reports[i].n;
    const double excess = est.reports[i].energy - n * e0;
    min_margin = std::min(min_margin, excess - std::abs(e0));
    if (excess < std::abs(e0) - 1e-10) ok = false;
  }
  double lo = kInf, hi = -kInf;
  for (const GroundStateReport& r : est.reports) {
    if (r.n < 40) continue;
    const double excess = r.energy - r.n * e0;
    lo = std::min(lo, excess);
    hi = std::max(hi, excess);
  }
  const double spread = hi - lo;
  const double e_surf = hi;
  if (!(spread < 1e-6)) ok = false;
  if (!(std::abs(e0) > e_surf / 2.0)) ok = false;
  std::vector<double> energies = {0.0};
  for (const GroundStateReport& r : est.reports) energies.push_back(r.energy);
  if (!CheckEnergyInequalities(energies, est.e0, est.e_surf).AllPassed()) {
    ok = false;
  }
  return {ok, "e0 = " + Fmt(e0) + ", e_surf = " + Fmt(e_surf) +
                  ", spread = " + Fmt(spread) + ", min margin = " +
                  Fmt(min_margin) + ", N_max = " +
                  std::to_string(est.reports.back().n)};
}

// --- 6 -----------------------------------------------------------------------

Outcome CorrelationDecayRate() {
  const PairPotential v = PairPotential::LennardJones();
  const TransferSolution sol = TransferSolution::Build(v, 2, 5.0, 0.1, kR);
  // Spectral gap from a general eigensolver on the discretized kernel.
  Eigen::EigenSolver<Eigen::MatrixXd> solver(sol.kernel(), false);
  std::vector<double> mags;
  for (int i = 0; i < solver.eigenvalues().size(); ++i) {
    mags.push_back(std::abs(solver.eigenvalues()[i]));
  }
  std::sort(mags.rbegin(), mags.rend());
  const double gap = std::log(mags[0] / mags[1]);
  // Least-squares slope of log |f(k)| over k in [2, 40] above the noise.
  const std::vector<double> f = BoundaryLayerSequence(sol, 40);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int k = 2; k <= 40; ++k) {
    const double y = std::abs(f[k - 1]);
    if (!(y > 1e-12)) continue;
    sx += k;
    sy += std::log(y);
    sxx += double(k) * k;
    sxy += k * std::log(y);
    ++count;
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double gamma = -slope;
  const double rel = std::abs(gamma - gap) / gap;
  return {count >= 3 && rel < 0.1, "gamma = " + Fmt(gamma) + ", gap = " +
                                       Fmt(gap) + ", rel err = " + Fmt(rel) +
                                       ", points = " + std::to_string(count)};
}

// --- 7 -----------------------------------------------------------------------

Outcome Sandwich() {
  const double beta = 5.0, p = 0.5;
  const int n = 6;
  std::string detail;
  bool ok = true;
  struct Case {
    PairPotential v;
    long points;
  };
  for (const Case& c : {Case{PairPotential::Spline(), 10000000L},
                        Case{PairPotential::LennardJones(), 2000000L}}) {
    const TransferSolution sol = TransferSolution::Build(c.v, 2, beta, p, kR);
    const double lambda =
        c.v.compact_support()
            ? 0.0
            : LambdaAcross(beta, p, kR, AcrossCrackConstant(c.v, 2, kR),
                           c.v.s());
    DefectGasModel model = DefectGasModel::FromTransfer(sol, lambda);
    const SandwichBounds bounds = ComputeSandwich(sol, model, lambda, n);
    Rng rng(20260101);
    const DirectEstimate est =
        EstimateLogPartitionFunction(c.v, 2, sol, n, c.points, rng);
    const VerificationReport report = SandwichCheck(bounds, est, n);
    if (c.v.compact_support() &&
        bounds.upper_finite_n != bounds.lower_finite_n) {
      ok = false;
    }
    if (!c.v.compact_support() && !(lambda > 0.0)) ok = false;
    if (!report.passed()) ok = false;
    detail += PotentialKindName(c.v.kind()) + ": " + Fmt(est.log_q / n) +
              " +- " + Fmt(est.std_error / n) + " in [" +
              Fmt(bounds.lower_finite_n) + ", " + Fmt(bounds.upper_finite_n) +
              "] lambda " + Fmt(lambda) + " (" + VerdictName(report.verdict) +
              "); ";
  }
  return {ok, detail};
}

// --- 8 -----------------------------------------------------------------------

Outcome ExactSamplerStatistics() {
  const PairPotential v = PairPotential::LennardJones();
  const double beta = 30.0;
  const int n = 100000;
  const int replicas = 1000;
  // Pressure giving q = 0.05.
  auto log_q_minus = [&](double log_p) {
    const double p = std::exp(log_p);
    const TransferSolution sol = TransferSolution::Build(v, 2, beta, p, kR);
    return LogEffectiveActivity(beta, p, kR, sol.g_surf_R()) - std::log(0.05);
  };
  boost::uintmax_t iters = 60;
  const auto root = boost::math::tools::toms748_solve(
      log_q_minus, std::log(1e-6), std::log(1e-1),
      boost::math::tools::eps_tolerance<double>(30), iters);
  const double p = std::exp(0.5 * (root.first + root.second));
  const TransferSolution sol = TransferSolution::Build(v, 2, beta, p, kR);
  const DefectGasModel model = DefectGasModel::FromTransfer(sol);
  const ConditionedRenewalSampler sizes(model, n);
  const double bp = beta * p;

  Rng rng(8);
  std::vector<double> density;
  std::vector<double> counts(n + 1, 0.0);
  std::vector<double> excess;
  for (int r = 0; r < replicas; ++r) {
    const std::vector<int> s = sizes.SampleClusterSizes(rng);
    density.push_back(static_cast<double>(s.size()) / n);
    for (int k : s) counts[k] += 1.0;
    for (size_t c = 0; c + 1 < s.size(); ++c) {
      excess.push_back(SampleCrackLength(beta, p, kR, rng) - kR);
    }
  }
  // Mean cluster count from the exact renewal convolution, recomputed here.
  std::vector<double> rtab(n + 1, 0.0);
  {
    // r(m) = sum_j P(T = j) r(m - j), with the geometric part carried in
    // closed form to keep the cost linear in the interaction range.
    const double u = model.u();
    const double q = model.q();
    const InteractionSeries& f = model.interaction();
    rtab[0] = 1.0;
    double g = 0.0;
    for (int m = 1; m <= n; ++m) {
      g = u * (q * rtab[m - 1] + g);
      double h = 0.0;
      for (int j = 1; j <= std::min(m, f.k_cut()); ++j) {
        h += q * f.at(j) * std::pow(u, j) * rtab[m - j];
      }
      rtab[m] = g + h;
    }
  }
  double expected_m = 0.0;
  for (int m = 1; m <= n; ++m) expected_m += rtab[m] * rtab[n - m];
  expected_m /= rtab[n];
  const double dp_mean = expected_m / n;
  const double mean = Mean(density);
  const double sigma = std::sqrt(Variance(density) / replicas);
  const bool mean_ok = std::abs(mean - dp_mean) <= 3.0 * sigma;

  double total = 0.0;
  int k_max = 0;
  for (int k = 1; k <= n; ++k) {
    total += counts[k];
    if (counts[k] > 0) k_max = k;
  }
  std::vector<double> observed, expected;
  double tail = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    const double pk = model.q() * (1.0 + model.interaction().at(k)) *
                      std::pow(model.u(), k);
    observed.push_back(counts[k]);
    expected.push_back(total * pk);
    tail -= pk;
  }
  observed.push_back(0.0);
  expected.push_back(total * std::max(tail, 0.0));
  const TestResult chi = ChiSquareTest(observed, expected);
  const TestResult ks = KolmogorovSmirnovTest(
      excess, [bp](double y) { return y <= 0.0 ? 0.0 : -std::expm1(-bp * y); });
  return {mean_ok && chi.p_value > 0.01 && ks.p_value > 0.01,
          "q = " + Fmt(model.q()) + ", M/N = " + Fmt(mean) + " vs " +
              Fmt(dp_mean) + " (sigma " + Fmt(sigma) + "), chi2 p = " +
              Fmt(chi.p_value) + ", KS p = " + Fmt(ks.p_value)};
}

// --- 9 -----------------------------------------------------------------------

Outcome CanonicalCrackStatistics() {
  const PairPotential v = PairPotential::LennardJones();
  const int n = 2000;
  const double a = FindLatticeConstant(v, 2).a;
  const double ell = a + 1.0;
  // The grid beta whose q lies closest (in log) to 0.05, the middle of the
  // admissible range [0.02, 0.1].
  double beta = 0.0, p = 0.0;
  CrackPrediction pred;
  double best = kInf;
  for (double b : {20.0, 22.5, 25.0, 27.5, 30.0, 32.5, 35.0}) {
    const double es = TransferSolution::Build(v, 2, b, 0.0, kR).g_surf_R();
    const double pb = PressureAtLength(v, 2, b, ell, kR);
    const CrackPrediction c = PredictedCrackStatistics(b, ell, es, pb);
    const double d = std::abs(std::log(c.q / 0.05));
    if (c.q >= 0.02 && c.q <= 0.1 && d < best) {
      best = d;
      beta = b;
      p = pb;
      pred = c;
    }
  }
  if (beta == 0.0) return {false, "no beta on the grid gives q in [0.02, 0.1]"};
  const TransferSolution sol = TransferSolution::Build(v, 2, beta, p, kR);
  const DefectGasModel model = DefectGasModel::FromTransfer(sol);
  const ConditionedRenewalSampler sizes(model, n);
  const ClusterSpacingSampler spacings(sol);
  Rng rng(SplitSeed(20260101, 9));
  const ExactChain init = SampleExactChain(sizes, spacings, beta, p, kR, rng);
  McmcOptions options;
  options.steps = 200000000;
  std::vector<CrackStatistics> stats;
  const McmcResult mcmc = McmcCanonical(
      v, 2, beta, ell, n, options, rng, &init.sample.spacings,
      [&](const ChainSample& s) {
        stats.push_back(ComputeCrackStatistics(s.spacings, kR));
      });
  const PooledCrackStatistics pooled =
      PoolCrackStatistics(stats, n, mcmc.autocorrelation_time);
  const std::vector<VerificationReport> reports = Theorem23Check(
      pooled, pred, stats.size() / mcmc.autocorrelation_time);
  bool ok = true;
  std::string detail = "beta = " + Fmt(beta) + ", q = " + Fmt(pred.q) + ": ";
  for (const VerificationReport& r : reports) {
    if (!r.passed()) ok = false;
    detail += r.target + " " + Fmt(r.measured[0]) + " (" +
              VerdictName(r.verdict) + "); ";
  }
  detail += "samples " + std::to_string(stats.size()) + ", tau " +
            Fmt(mcmc.autocorrelation_time);
  return {ok, detail};
}

// --- 10 ----------------------------------------------------------------------

Outcome GibbsTrend() {
  const PairPotential v = PairPotential::LennardJones();
  std::vector<GibbsExpansionPoint> points;
  for (double beta : {5.0, 10.0, 20.0, 40.0}) {
    points.push_back(GibbsExpansionAt(v, 2, beta, kR));
  }
  const VerificationReport r = GibbsExpansionCheck(points);
  std::string detail;
  for (const GibbsExpansionPoint& pt : points) {
    detail += "beta " + Fmt(pt.beta) + ": " + Fmt(pt.ratio) + "/" +
              Fmt(pt.length_ratio) + "; ";
  }
  return {r.passed(), detail};
}

// --- 11 ----------------------------------------------------------------------

struct LegendreRun {
  LegendreConsistency c;
  double analytic_error = 0.0;
  double grid_tolerance = 0.0;
};

LegendreRun LegendreOn(const PairPotential& v, int m, double beta,
                       double p_lo, double p_hi, int points,
                       const std::function<double(double)>& analytic_f) {
  TransferOptions options;
  options.full_line = true;
  std::vector<double> p, g;
  const double h = (p_hi - p_lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    p.push_back(p_lo + i * h);
    g.push_back(TransferSolution::Build(v, m, beta, p.back(), kR, options).g_R());
  }
  std::vector<double> ell, f;
  LegendreTransform(p, g, &ell, &f);
  LegendreRun run;
  run.c = CheckLegendreConsistency(p, g, ell, f);
  if (analytic_f) {
    for (size_t j = 0; j < ell.size(); ++j) {
      run.analytic_error =
          std::max(run.analytic_error, std::abs(f[j] - analytic_f(ell[j])));
    }
  }
  // Central differences err by h^2 |g'''| / 6 in ell; the tolerance allows
  // that error times the largest ell on the grid plus the same in ell.
  double g3 = 0.0;
  for (int i = 0; i + 3 < points; ++i) {
    g3 = std::max(g3, std::abs(g[i + 3] - 3 * g[i + 2] + 3 * g[i + 1] - g[i]) /
                          (h * h * h));
  }
  const double ell_error = h * h * g3 / 6.0;
  run.grid_tolerance = ell_error * (1.0 + p_hi + *std::max_element(ell.begin(), ell.end()));
  return run;
}

Outcome LegendreDuality() {
  const double beta = 3.0;
  const LegendreRun rod =
      LegendreOn(PairPotential::HardRod(), 1, beta, 0.2, 2.0, 361,
                 [beta](double ell) {
                   return -(1.0 + std::log(ell - 1.0)) / beta;
                 });
  const LegendreRun lj = LegendreOn(PairPotential::LennardJones(), 1, 5.0,
                                    0.2, 1.5, 261, nullptr);
  const double rod_worst = std::max({rod.c.transform_error,
                                     rod.c.derivative_error, rod.analytic_error});
  const double lj_worst = std::max(lj.c.transform_error, lj.c.derivative_error);
  const bool ok = rod_worst < 1e-4 && rod.c.f_convex && rod.c.g_concave &&
                  lj_worst <= lj.grid_tolerance && lj.c.f_convex &&
                  lj.c.g_concave;
  return {ok, "hard rod max err " + Fmt(rod_worst) + "; LJ max err " +
                  Fmt(lj_worst) + " (grid tolerance " +
                  Fmt(lj.grid_tolerance) + ")"};
}

// --- 12 ----------------------------------------------------------------------

// Binned TV between a histogram and bin probabilities (with overflow).
double HistogramTv(const std::vector<double>& hist,
                   const std::vector<double>& prob) {
  double total = 0.0;
  for (double h : hist) total += h;
  double tv = 0.0;
  for (size_t i = 0; i < hist.size(); ++i) {
    tv += std::abs(hist[i] / total - prob[i]);
  }
  return 0.5 * tv;
}

Outcome McmcMarginals() {
  const PairPotential v = PairPotential::LennardJones();
  const double beta = 5.0;
  const int bins = 30;
  McmcOptions options;
  options.steps = 1000000;
  options.thin = 1;

  // Constant pressure: z1, z2 in (r_hc, inf) with weight
  // exp(-beta [v(z1) + v(z2) + v(z1 + z2) + p (z1 + z2)]).
  const double p = 0.5;
  const double lo = 0.8, hi = 5.0;
  auto joint = [&](double x, double y) {
    return Boltzmann(beta, v(x) + v(y) + v(x + y) + p * (x + y));
  };
  auto marginal = [&](double x) {
    return Composite([&](double y) { return joint(x, y); }, lo, hi, 40) +
           gauss_kronrod<double, 31>::integrate(
               [&](double y) { return joint(x, y); }, hi, kInf, 15, 1e-12);
  };
  std::vector<double> edges;
  for (int i = 0; i <= bins; ++i) edges.push_back(lo + (hi - lo) * i / bins);
  std::vector<double> prob(bins + 1);
  double z = 0.0;
  for (int i = 0; i < bins; ++i) {
    prob[i] = Composite(marginal, edges[i], edges[i + 1], 2);
    z += prob[i];
  }
  prob[bins] = gauss_kronrod<double, 31>::integrate(marginal, hi, kInf, 15,
                                                    1e-12);
  z += prob[bins];
  for (double& x : prob) x /= z;
  std::vector<double> hist(bins + 1, 0.0);
  auto bin_of = [&](double x) {
    if (x >= hi) return bins;
    return std::clamp(static_cast<int>((x - lo) / (hi - lo) * bins), 0,
                      bins - 1);
  };
  Rng rng(12);
  McmcNpt(v, 2, beta, p, 3, kR, options, rng, nullptr,
          [&](const ChainSample& s) {
            for (double x : s.spacings) hist[bin_of(x)] += 1.0;
          });
  const double tv_npt = HistogramTv(hist, prob);

  // Canonical: z1 + z2 = 3 ell, so z1 has the one-dimensional weight
  // exp(-beta [v(z1) + v(L - z1)]) on (r_hc, L - r_hc).
  const double ell = 0.91;
  const double length = 3.0 * ell;
  const double c_lo = 0.8, c_hi = length - 0.8;
  auto density = [&](double x) {
    return Boltzmann(beta, v(x) + v(length - x));
  };
  std::vector<double> cprob(bins);
  double cz = 0.0;
  for (int i = 0; i < bins; ++i) {
    const double a0 = c_lo + (c_hi - c_lo) * i / bins;
    const double a1 = c_lo + (c_hi - c_lo) * (i + 1) / bins;
    cprob[i] = Composite(density, a0, a1, 4);
    cz += cprob[i];
  }
  for (double& x : cprob) x /= cz;
  std::vector<double> chist(bins, 0.0);
  McmcCanonical(v, 2, beta, ell, 3, options, rng, nullptr,
                [&](const ChainSample& s) {
                  for (double x : s.spacings) {
                    const int b = std::clamp(
                        static_cast<int>((x - c_lo) / (c_hi - c_lo) * bins), 0,
                        bins - 1);
                    chist[b] += 1.0;
                  }
                });
  const double tv_can = HistogramTv(chist, cprob);
  return {tv_npt < 0.02 && tv_can < 0.02,
          "TV npt = " + Fmt(tv_npt) + ", TV canonical = " + Fmt(tv_can)};
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace crackchain

int main(int argc, char** argv) {
  using namespace crackchain;
  const std::vector<Criterion> criteria = {
      {1, "nearest-neighbor oracle", 10, NearestNeighborEquivalence},
      {2, "brute-force partition functions", 30, BruteForceEquivalence},
      {3, "ideal defect gas", 1, IdealDefectGas},
      {4, "renewal residual and moment bounds", 30, RenewalAndMoments},
      {5, "ground-state regime", 120, GroundStateRegime},
      {6, "correlation decay", 30, CorrelationDecayRate},
      {7, "sandwich bounds", 300, Sandwich},
      {8, "exact sampler statistics", 120, ExactSamplerStatistics},
      {9, "canonical crack statistics", 900, CanonicalCrackStatistics},
      {10, "Gibbs expansion trend", 600, GibbsTrend},
      {11, "Legendre duality", 60, LegendreDuality},
      {12, "MCMC marginals", 120, McmcMarginals},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %2d: %s  %s | %s | %.2f s (budget %.0f s)%s\n",
                c.id, pass ? "PASS" : "FAIL", c.name.c_str(),
                outcome.detail.c_str(), seconds, c.budget_seconds,
                in_time ? "" : " over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
