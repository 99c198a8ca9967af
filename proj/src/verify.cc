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

#include "crackchain/verify.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "crackchain/errors.h"
#include "crackchain/ground_state.h"
#include "crackchain/quadrature.h"
#include "crackchain/stats.h"

namespace crackchain {
namespace {


std::string Format(double x) {
  std::ostringstream out;
  out.precision(10);
  out << x;
  return out.str();
}

// Three-point derivative on a non-uniform grid at interior index i.
double CentralDerivative(const std::vector<double>& x,
                         const std::vector<double>& y, size_t i) {
  const double hm = x[i] - x[i - 1];
  const double hp = x[i + 1] - x[i];
  return (hm * hm * (y[i + 1] - y[i]) + hp * hp * (y[i] - y[i - 1])) /
         (hm * hp * (hm + hp));
}

double SecondDifference(const std::vector<double>& x,
                        const std::vector<double>& y, size_t i) {
  const double hm = x[i] - x[i - 1];
  const double hp = x[i + 1] - x[i];
  return 2.0 * ((y[i + 1] - y[i]) / hp - (y[i] - y[i - 1]) / hm) / (hm + hp);
}

double LogSumExp(double a, double b) {
  if (a == -kInfinity) return b;
  if (b == -kInfinity) return a;
  const double hi = std::max(a, b);
  return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

// (1/N) log of the product-measure partition function for a defect gas.
double FiniteNLogQ(const TransferSolution& sol, const DefectGasModel& model,
                   int n) {
  const ConditionedRenewalSampler table(model, n);
  const double beta = sol.beta();
  return (-beta * n * sol.g_R() - beta * sol.g_surf_R() - std::log(model.q()) -
          n * model.log_u() + std::log(table.RenewalProbability(n))) /
         n;
}

}  // namespace

std::string VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::string ToleranceKindName(ToleranceKind kind) {
  switch (kind) {
    case ToleranceKind::kAbsolute:
      return "absolute";
    case ToleranceKind::kRelative:
      return "relative";
    case ToleranceKind::kInterval:
      return "interval";
  }
  return "unknown";
}

void JudgeElementwise(VerificationReport* report) {
  if (report->predicted.size() != report->measured.size() ||
      report->predicted.empty()) {
    report->verdict = Verdict::kInconclusive;
    return;
  }
  bool ok = true;
  for (size_t i = 0; i < report->predicted.size(); ++i) {
    const double diff = std::abs(report->predicted[i] - report->measured[i]);
    double bound = report->tolerance;
    if (report->tolerance_kind == ToleranceKind::kRelative) {
      bound *= std::abs(report->predicted[i]);
    }
    if (!(diff <= bound)) ok = false;
  }
  report->verdict = ok ? Verdict::kPass : Verdict::kFail;
}

std::string ConfigHash(const std::string& text) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

// --- Predictions -------------------------------------------------------------

PressureFreeEnergy PredictedPressureAndFreeEnergy(double beta, double ell,
                                                  double a, double e0_R,
                                                  double e_surf_R) {
  if (!(beta > 0.0)) throw InvalidInput("beta must be positive");
  if (!(ell > a)) {
    throw RegimeError("the stretched-chain prediction needs ell > a; for "
                      "ell <= a the free energy tends to W(ell)");
  }
  const double root = std::sqrt(ell - a);
  const double boltzmann = std::exp(-0.5 * beta * e_surf_R);
  PressureFreeEnergy out;
  out.pressure = boltzmann / (beta * root);
  out.beta_p = beta * out.pressure;
  out.free_energy = e0_R - 2.0 / beta * root * boltzmann;
  return out;
}

CrackPrediction PredictedCrackStatistics(double beta, double ell,
                                         double e_surf_R, double pressure) {
  if (!(pressure > 0.0)) throw RegimeError("crack prediction needs p > 0");
  (void)ell;
  CrackPrediction out;
  out.exponential_rate = beta * pressure;
  out.q = std::exp(-beta * e_surf_R) / out.exponential_rate;
  out.geometric_parameter = out.q / (1.0 + out.q);
  return out;
}

double PressurePath(double beta, double e_surf_R) {
  if (!(beta > 0.0)) throw InvalidInput("beta must be positive");
  return std::exp(-0.5 * beta * e_surf_R) / beta;
}

double PressureAtLength(const PairPotential& v, int m, double beta, double ell,
                        double R, const TransferOptions& options) {
  TransferOptions full = options;
  full.full_line = true;
  auto length_minus = [&](double log_p) {
    const TransferSolution sol =
        TransferSolution::Build(v, m, beta, std::exp(log_p), R, full);
    return MeanSpacing(sol) - ell;
  };
  // ell(p) decreases in p; expand a bracket around p = 1 / (beta ell).
  double lo = std::log(1.0 / (beta * ell));
  double hi = lo;
  double f_lo = length_minus(lo);
  double f_hi = f_lo;
  int guard = 0;
  while (f_lo < 0.0 && guard++ < 60) {
    hi = lo;
    f_hi = f_lo;
    lo -= 2.0;
    f_lo = length_minus(lo);
  }
  guard = 0;
  while (f_hi > 0.0 && guard++ < 60) {
    lo = hi;
    f_lo = f_hi;
    hi += 2.0;
    f_hi = length_minus(hi);
  }
  if (!(f_lo >= 0.0 && f_hi <= 0.0)) {
    throw ValidationError("no pressure reproduces the requested length");
  }
  if (f_lo == 0.0) return std::exp(lo);
  if (f_hi == 0.0) return std::exp(hi);
  boost::uintmax_t max_iter = 100;
  const auto root = boost::math::tools::toms748_solve(
      length_minus, lo, hi, f_lo, f_hi,
      boost::math::tools::eps_tolerance<double>(50), max_iter);
  return std::exp(0.5 * (root.first + root.second));
}

// --- Oracles -----------------------------------------------------------------

NearestNeighborValues NearestNeighborOracle(const PairPotential& v,
                                            double beta, double R) {
  if (!(beta > 0.0)) throw InvalidInput("beta must be positive");
  if (!(R > v.r_hc())) throw InvalidInput("R must exceed the hard core");
  const IntegralResult integral = AdaptiveIntegrate(
      [&](double r) {
        const double e = v(r);
        return std::isfinite(e) ? std::exp(-beta * e) : 0.0;
      },
      v.r_hc(), R, 1e-13);
  NearestNeighborValues out;
  out.e0_R = -std::log(integral.value) / beta;
  out.e_surf_R = -out.e0_R;
  out.error_estimate = integral.error_estimate / (beta * integral.value);
  return out;
}

DirectEstimate EstimateLogPartitionFunction(const PairPotential& v, int m,
                                            const TransferSolution& sol,
                                            int n, long points, Rng& rng) {
  if (n < 2 || n > 16) {
    throw InvalidInput("direct estimate supports 2 <= N <= 16 atoms");
  }
  if (!(sol.pressure() > 0.0)) {
    throw RegimeError("direct estimate needs pressure > 0");
  }
  if (points < 1) throw InvalidInput("direct estimate needs points >= 1");
  const int nz = n - 1;
  const double beta = sol.beta();
  const double bp = beta * sol.pressure();
  const double R = sol.R();
  const std::vector<double> log_qk = LogTruncatedPartitionSequence(sol, n);
  const double log_crack = -bp * R - std::log(bp);
  const ClusterSpacingSampler sampler(sol);

  const int strata = 1 << nz;
  std::vector<double> log_mass(strata);
  std::vector<std::vector<int>> sizes(strata);
  double log_total = -kInfinity;
  for (int pattern = 0; pattern < strata; ++pattern) {
    int start = 0;
    double lm = 0.0;
    for (int b = 0; b < nz; ++b) {
      if (pattern & (1 << b)) {
        sizes[pattern].push_back(b + 1 - start);
        start = b + 1;
        lm += log_crack;
      }
    }
    sizes[pattern].push_back(n - start);
    for (int k : sizes[pattern]) lm += log_qk[k - 1];
    log_mass[pattern] = lm;
    log_total = LogSumExp(log_total, lm);
  }

  DirectEstimate out;
  out.strata = strata;
  out.log_q_truncated = log_total;
  double estimate = 0.0;  // in units of exp(log_total)
  double variance = 0.0;
  std::vector<double> z(nz);
  for (int pattern = 0; pattern < strata; ++pattern) {
    const double share = std::exp(log_mass[pattern] - log_total);
    const long count =
        std::max<long>(64, std::lround(share * static_cast<double>(points)));
    // Weights relative to the stratum's truncated mass.
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long s = 0; s < count; ++s) {
      double log_density = 0.0;
      int pos = 0;
      for (size_t c = 0; c < sizes[pattern].size(); ++c) {
        const int k = sizes[pattern][c];
        if (k >= 2) {
          const std::vector<int> path = sampler.SampleNodes(k, rng);
          const std::vector<double> inner = sampler.Jitter(path, rng);
          log_density += sampler.LogPathProbability(path);
          for (size_t j = 0; j < path.size(); ++j) {
            log_density -= std::log(sampler.cell_width(path[j]));
            z[pos++] = inner[j];
          }
        }
        if (c + 1 < sizes[pattern].size()) {
          const double y = rng.Exponential(bp);
          log_density += std::log(bp) - bp * y;
          z[pos++] = R + y;
        }
      }
      const double energy = ChainEnergy(v, m, z);
      const double length = std::accumulate(z.begin(), z.end(), 0.0);
      double w = 0.0;
      if (std::isfinite(energy)) {
        w = std::exp(-beta * (energy + sol.pressure() * length) - log_density -
                     log_mass[pattern]);
      }
      sum += w;
      sum_sq += w * w;
    }
    const double mean = sum / count;
    const double var = std::max(0.0, sum_sq / count - mean * mean) / count;
    estimate += share * mean;
    variance += share * share * var;
    out.points += count;
  }
  out.log_q = log_total + std::log(estimate);
  out.std_error = std::sqrt(variance) / estimate;
  return out;
}

SandwichBounds ComputeSandwich(const TransferSolution& sol,
                               const DefectGasModel& model, double lambda,
                               int n) {
  if (!(lambda >= 0.0)) throw InvalidInput("lambda must be non-negative");
  SandwichBounds out;
  out.lambda = lambda;
  const RateFunctions rates(model);
  out.lower = -sol.beta() * sol.g_R() - model.log_u();
  out.upper = out.lower - (lambda > 0.0 ? rates.PhiInverse(-lambda) : 0.0);
  out.lower_finite_n = FiniteNLogQ(sol, model, n);
  if (lambda > 0.0) {
    const DefectGasModel widened =
        DefectGasModel::Solve(model.q() * std::exp(lambda), model.interaction());
    out.upper_finite_n = FiniteNLogQ(sol, widened, n);
  } else {
    out.upper_finite_n = out.lower_finite_n;
  }
  return out;
}

VerificationReport SandwichCheck(const SandwichBounds& bounds,
                                 const DirectEstimate& estimate, int n) {
  VerificationReport report;
  report.target = "sandwich";
  report.description =
      "(1/N) log Q_N between the defect-gas bounds with and without the "
      "across-crack factor";
  const double measured = estimate.log_q / n;
  const double sigma = estimate.std_error / n;
  const double slack = 3.0 * sigma + 1e-9 * std::max(1.0, std::abs(measured));
  report.predicted = {bounds.lower_finite_n, bounds.upper_finite_n};
  report.measured = {measured, sigma};
  report.tolerance = slack;
  report.tolerance_kind = ToleranceKind::kInterval;
  const bool inside = measured + slack >= bounds.lower_finite_n &&
                      measured - slack <= bounds.upper_finite_n;
  const bool collapsed =
      bounds.upper_finite_n - bounds.lower_finite_n <= 1e-12;
  if (!inside) {
    report.verdict = Verdict::kFail;
  } else if (!collapsed && measured - slack <= bounds.lower_finite_n &&
             measured + slack >= bounds.upper_finite_n) {
    report.verdict = Verdict::kInconclusive;
  } else {
    report.verdict = Verdict::kPass;
  }
  report.notes.push_back("asymptotic bounds [" + Format(bounds.lower) + ", " +
                         Format(bounds.upper) + "]");
  report.notes.push_back("lambda = " + Format(bounds.lambda));
  report.notes.push_back("strata = " + std::to_string(estimate.strata) +
                         ", points = " + std::to_string(estimate.points));
  return report;
}

GibbsExpansionPoint GibbsExpansionAt(const PairPotential& v, int m,
                                     double beta, double R,
                                     const TransferOptions& options) {
  GibbsExpansionPoint point;
  point.beta = beta;
  TransferOptions truncated = options;
  truncated.full_line = false;
  TransferOptions full = options;
  full.full_line = true;
  point.e_surf_R =
      TransferSolution::Build(v, m, beta, 0.0, R, truncated).g_surf_R();
  point.pressure = PressurePath(beta, point.e_surf_R);
  const TransferSolution trunc =
      TransferSolution::Build(v, m, beta, point.pressure, R, truncated);
  const TransferSolution line =
      TransferSolution::Build(v, m, beta, point.pressure, R, full);
  point.g_R = trunc.g_R();
  point.g = line.g_R();
  point.q = EffectiveActivity(beta, point.pressure, R, trunc.g_surf_R());
  point.ratio = beta * (point.g_R - point.g) / point.q;
  point.ell = MeanSpacing(line);
  point.ell_R = MeanSpacing(trunc);
  point.a = FindLatticeConstant(v, m).a;
  const double bp = beta * point.pressure;
  const double unit = bp * bp * std::exp(beta * point.e_surf_R);
  point.length_ratio = (point.ell - point.a) * unit;
  point.length_error_bar = std::abs(point.ell_R - point.a) * unit;
  point.crack_length_ratio = (point.ell - point.ell_R) * bp / point.q;
  return point;
}

VerificationReport GibbsExpansionCheck(
    const std::vector<GibbsExpansionPoint>& points, double trend_slack) {
  VerificationReport report;
  report.target = "gibbs-expansion";
  report.description =
      "beta (g_R - g) / q and (ell - a) (beta p)^2 exp(beta e_surf) tend to "
      "one along the pressure path";
  report.tolerance = trend_slack;
  report.tolerance_kind = ToleranceKind::kAbsolute;
  bool ok = !points.empty();
  for (size_t i = 0; i < points.size(); ++i) {
    const GibbsExpansionPoint& pt = points[i];
    for (double r : {pt.ratio, pt.length_ratio, pt.crack_length_ratio}) {
      report.predicted.push_back(1.0);
      report.measured.push_back(r);
      if (!(r >= 0.5 && r <= 2.0)) ok = false;
    }
    if (i > 0) {
      const GibbsExpansionPoint& prev = points[i - 1];
      auto dist = [](double r) { return std::abs(r - 1.0); };
      if (dist(pt.ratio) > dist(prev.ratio) + trend_slack) ok = false;
      if (dist(pt.crack_length_ratio) >
          dist(prev.crack_length_ratio) + trend_slack) {
        ok = false;
      }
      if (dist(pt.length_ratio) > dist(prev.length_ratio) + trend_slack +
                                      pt.length_error_bar +
                                      prev.length_error_bar) {
        ok = false;
      }
    }
    report.notes.push_back(
        "beta = " + Format(pt.beta) + ": ratio = " + Format(pt.ratio) +
        ", length ratio = " + Format(pt.length_ratio) + " +- " +
        Format(pt.length_error_bar) + ", crack length ratio = " +
        Format(pt.crack_length_ratio) + ", q = " + Format(pt.q));
  }
  report.verdict = ok ? Verdict::kPass : Verdict::kFail;
  return report;
}

PooledCrackStatistics PoolCrackStatistics(
    const std::vector<CrackStatistics>& stats, int n, double tau) {
  PooledCrackStatistics pooled;
  pooled.samples = static_cast<long>(stats.size());
  pooled.n = n;
  std::vector<double> density;
  density.reserve(stats.size());
  pooled.cluster_counts.assign(n + 1, 0.0);
  for (const CrackStatistics& s : stats) {
    density.push_back(static_cast<double>(s.M) / n);
    for (size_t k = 0; k < s.cluster_counts.size() && k <= (size_t)n; ++k) {
      pooled.cluster_counts[k] += s.cluster_counts[k];
    }
    pooled.crack_excesses.insert(pooled.crack_excesses.end(),
                                 s.crack_excesses.begin(),
                                 s.crack_excesses.end());
  }
  if (!density.empty()) {
    pooled.mean_cluster_density = Mean(density);
    const double effective =
        std::max(1.0, static_cast<double>(density.size()) / std::max(tau, 1.0));
    pooled.std_error_density =
        density.size() > 1 ? std::sqrt(Variance(density) / effective) : 0.0;
  }
  return pooled;
}

std::vector<VerificationReport> Theorem23Check(
    const PooledCrackStatistics& pooled, const CrackPrediction& prediction,
    double effective_samples, const Theorem23Tolerances& tol) {
  std::vector<VerificationReport> reports;
  const bool enough = effective_samples >= tol.min_effective_samples;
  const double q = prediction.q;
  const double rho = 1.0 / (1.0 + q);

  VerificationReport density;
  density.target = "theorem23-density";
  density.description = "M_N / N against q";
  density.predicted = {q};
  density.measured = {pooled.mean_cluster_density};
  density.tolerance = tol.density_relative;
  density.tolerance_kind = ToleranceKind::kRelative;
  JudgeElementwise(&density);
  density.notes.push_back("standard error " +
                          Format(pooled.std_error_density));
  density.notes.push_back("q / (1 + q) = " +
                          Format(prediction.geometric_parameter));

  VerificationReport geom;
  geom.target = "theorem23-cluster-law";
  geom.description = "binned TV of the cluster-size law to Geom(q / (1 + q))";
  const double tv_geom =
      BinnedTotalVariationToGeometric(pooled.cluster_counts, rho);
  geom.predicted = {0.0};
  geom.measured = {tv_geom};
  geom.tolerance = tol.tv_geometric;
  JudgeElementwise(&geom);
  {
    double total = 0.0;
    double mean_size = 0.0;
    int k_max = 0;
    for (size_t k = 1; k < pooled.cluster_counts.size(); ++k) {
      total += pooled.cluster_counts[k];
      mean_size += k * pooled.cluster_counts[k];
      if (pooled.cluster_counts[k] > 0) k_max = static_cast<int>(k);
    }
    if (total > 0.0 && k_max > 0) {
      std::vector<double> observed(k_max + 1, 0.0);
      std::vector<double> expected(k_max + 1, 0.0);
      for (int k = 1; k <= k_max; ++k) {
        observed[k - 1] = pooled.cluster_counts[k];
        expected[k - 1] = total * (1.0 - rho) * std::pow(rho, k - 1);
      }
      expected[k_max] = total * std::pow(rho, k_max);
      const TestResult chi = ChiSquareTest(observed, expected);
      geom.notes.push_back("chi-square p-value " + Format(chi.p_value));
      geom.notes.push_back("mean cluster size " + Format(mean_size / total) +
                           " against " + Format((1.0 + q) / q));
    }
  }

  VerificationReport expo;
  expo.target = "theorem23-crack-law";
  expo.description = "binned TV of the crack excesses to Exp(beta p)";
  expo.predicted = {0.0};
  expo.tolerance = tol.tv_exponential;
  if (pooled.crack_excesses.empty()) {
    expo.measured = {1.0};
    expo.verdict = Verdict::kInconclusive;
    expo.notes.push_back("no cracks observed");
  } else {
    expo.measured = {BinnedTotalVariationToExponential(
        pooled.crack_excesses, prediction.exponential_rate)};
    JudgeElementwise(&expo);
    const double rate = prediction.exponential_rate;
    const TestResult ks = KolmogorovSmirnovTest(
        pooled.crack_excesses,
        [rate](double y) { return y <= 0.0 ? 0.0 : -std::expm1(-rate * y); });
    expo.notes.push_back("KS p-value " + Format(ks.p_value) +
                         " (samples are correlated)");
    expo.notes.push_back("mean excess " + Format(Mean(pooled.crack_excesses)) +
                         " against " + Format(1.0 / rate));
  }

  for (VerificationReport* r : {&density, &geom, &expo}) {
    if (!enough && r->verdict == Verdict::kPass) {
      r->verdict = Verdict::kInconclusive;
      r->notes.push_back("effective sample size " + Format(effective_samples) +
                         " below " + std::to_string(tol.min_effective_samples));
    }
    reports.push_back(*r);
  }
  return reports;
}

// --- Legendre duality --------------------------------------------------------

void LegendreTransform(const std::vector<double>& p,
                       const std::vector<double>& g, std::vector<double>* ell,
                       std::vector<double>* f) {
  if (p.size() != g.size() || p.size() < 3) {
    throw InvalidInput("Legendre transform needs matching grids of size >= 3");
  }
  std::vector<std::pair<double, double>> pts;
  for (size_t i = 1; i + 1 < p.size(); ++i) {
    const double l = CentralDerivative(p, g, i);
    pts.emplace_back(l, g[i] - p[i] * l);
  }
  std::sort(pts.begin(), pts.end());
  ell->clear();
  f->clear();
  for (const auto& [l, fv] : pts) {
    ell->push_back(l);
    f->push_back(fv);
  }
}

LegendreConsistency CheckLegendreConsistency(const std::vector<double>& p,
                                             const std::vector<double>& g,
                                             const std::vector<double>& ell,
                                             const std::vector<double>& f) {
  if (p.size() != g.size() || ell.size() != f.size() || p.size() < 3 ||
      ell.size() < 3) {
    throw InvalidInput("Legendre check needs matching grids of size >= 3");
  }
  LegendreConsistency out;
  // g(p) = inf_ell (f + p ell), refined by a parabola through the discrete
  // minimizer and its neighbors.
  for (size_t i = 1; i + 1 < p.size(); ++i) {
    size_t best = 0;
    double best_value = kInfinity;
    for (size_t j = 0; j < ell.size(); ++j) {
      const double value = f[j] + p[i] * ell[j];
      if (value < best_value) {
        best_value = value;
        best = j;
      }
    }
    if (best == 0 || best + 1 == ell.size()) continue;
    const double x0 = ell[best - 1], x1 = ell[best], x2 = ell[best + 1];
    const double y0 = f[best - 1] + p[i] * x0;
    const double y1 = best_value;
    const double y2 = f[best + 1] + p[i] * x2;
    const double d1 = (y1 - y0) / (x1 - x0);
    const double d2 = (y2 - y1) / (x2 - x1);
    const double curvature = (d2 - d1) / (x2 - x0);
    double refined = y1;
    if (curvature > 0.0) {
      // Vertex of the interpolating parabola.
      const double slope_mid = d1 + curvature * (x1 - x0);
      const double shift = -slope_mid / (2.0 * curvature);
      refined = y1 + slope_mid * shift + curvature * shift * shift;
      refined = std::min(refined, y1);
    }
    out.transform_error = std::max(out.transform_error, std::abs(g[i] - refined));
  }
  // Derivative duality: p = -f'(ell) should give back ell = g'(p).
  std::vector<double> gp_x, gp;
  for (size_t i = 1; i + 1 < p.size(); ++i) {
    gp_x.push_back(p[i]);
    gp.push_back(CentralDerivative(p, g, i));
  }
  for (size_t j = 1; j + 1 < ell.size(); ++j) {
    const double ps = -CentralDerivative(ell, f, j);
    if (ps <= gp_x.front() || ps >= gp_x.back()) continue;
    const size_t hi = static_cast<size_t>(
        std::upper_bound(gp_x.begin(), gp_x.end(), ps) - gp_x.begin());
    const size_t lo = hi - 1;
    const double t = (ps - gp_x[lo]) / (gp_x[hi] - gp_x[lo]);
    const double predicted = gp[lo] + t * (gp[hi] - gp[lo]);
    out.derivative_error =
        std::max(out.derivative_error, std::abs(predicted - ell[j]));
  }
  out.min_second_difference_f = kInfinity;
  for (size_t j = 1; j + 1 < ell.size(); ++j) {
    out.min_second_difference_f =
        std::min(out.min_second_difference_f, SecondDifference(ell, f, j));
  }
  out.max_second_difference_g = -kInfinity;
  for (size_t i = 1; i + 1 < p.size(); ++i) {
    out.max_second_difference_g =
        std::max(out.max_second_difference_g, SecondDifference(p, g, i));
  }
  out.f_convex = out.min_second_difference_f >= -1e-8;
  out.g_concave = out.max_second_difference_g <= 1e-8;
  return out;
}

// --- Zero temperature --------------------------------------------------------

ZeroTemperatureSummary ZeroTemperatureFreeEnergy(const PairPotential& v, int m,
                                                 double z_lo, double z_hi,
                                                 int grid) {
  if (!(z_lo > v.r_hc()) || !(z_hi > z_lo) || grid < 3) {
    throw InvalidInput("zero-temperature grid must start outside the core");
  }
  const CauchyBornResult cb = FindLatticeConstant(v, m);
  ZeroTemperatureSummary out;
  out.a = cb.a;
  out.e0 = cb.e0;
  out.p_star = std::abs(v(v.z_max())) / v.z_max();
  const auto best = boost::math::tools::brent_find_minima(
      [&](double r) { return CauchyBorn(v, m, r) + out.p_star * r; },
      z_lo, cb.a, 50);
  out.ell_star = best.first;

  std::vector<double> x(grid), w(grid);
  for (int i = 0; i < grid; ++i) {
    x[i] = z_lo + (z_hi - z_lo) * i / (grid - 1);
    w[i] = x[i] <= cb.a ? CauchyBorn(v, m, x[i]) : cb.e0;
  }
  // Lower hull by the monotone chain.
  std::vector<int> hull;
  for (int i = 0; i < grid; ++i) {
    while (hull.size() >= 2) {
      const int i1 = hull[hull.size() - 2];
      const int i2 = hull.back();
      const double cross = (x[i2] - x[i1]) * (w[i] - w[i1]) -
                           (w[i2] - w[i1]) * (x[i] - x[i1]);
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  out.ell = x;
  out.hull.resize(grid);
  size_t seg = 0;
  for (int i = 0; i < grid; ++i) {
    while (seg + 1 < hull.size() - 1 && x[hull[seg + 1]] < x[i]) ++seg;
    const int i1 = hull[seg];
    const int i2 = hull[std::min(seg + 1, hull.size() - 1)];
    if (i2 == i1) {
      out.hull[i] = w[i1];
    } else {
      const double t = (x[i] - x[i1]) / (x[i2] - x[i1]);
      out.hull[i] = w[i1] + t * (w[i2] - w[i1]);
    }
  }
  return out;
}

}  // namespace crackchain
