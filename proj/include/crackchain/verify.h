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

#ifndef CRACKCHAIN_VERIFY_H_
#define CRACKCHAIN_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "crackchain/defect_gas.h"
#include "crackchain/potential.h"
#include "crackchain/rng.h"
#include "crackchain/sampler.h"
#include "crackchain/transfer_operator.h"

namespace crackchain {

enum class Verdict { kPass, kFail, kInconclusive };
std::string VerdictName(Verdict verdict);

enum class ToleranceKind { kAbsolute, kRelative, kInterval };
std::string ToleranceKindName(ToleranceKind kind);

// One check: predicted against measured values with a stated tolerance.
struct VerificationReport {
  std::string target;
  std::string description;
  std::vector<double> predicted;
  std::vector<double> measured;
  double tolerance = 0.0;
  ToleranceKind tolerance_kind = ToleranceKind::kAbsolute;
  Verdict verdict = Verdict::kInconclusive;
  double seconds = 0.0;
  uint64_t seed = 0;
  std::string config_hash;
  std::vector<std::string> notes;

  bool passed() const { return verdict == Verdict::kPass; }
};

// Sets the verdict from |predicted[i] - measured[i]| against the tolerance
// (relative to |predicted[i]| for kRelative), all entries required to pass.
void JudgeElementwise(VerificationReport* report);

// FNV-1a 64-bit hash of `text`, as 16 lowercase hex digits.
std::string ConfigHash(const std::string& text);

// --- Leading-order predictions ----------------------------------------------

struct PressureFreeEnergy {
  double pressure = 0.0;
  double beta_p = 0.0;
  double free_energy = 0.0;
};

// p = exp(-beta e_surf / 2) / (beta sqrt(ell - a)) and
// f = e0 - (2 / beta) sqrt(ell - a) exp(-beta e_surf / 2). RegimeError for
// ell <= a.
PressureFreeEnergy PredictedPressureAndFreeEnergy(double beta, double ell,
                                                  double a, double e0_R,
                                                  double e_surf_R);

struct CrackPrediction {
  double q = 0.0;                   // exp(-beta e_surf) / (beta p)
  double geometric_parameter = 0.0; // q / (1 + q)
  double exponential_rate = 0.0;    // beta p
};

CrackPrediction PredictedCrackStatistics(double beta, double ell,
                                         double e_surf_R, double pressure);

// Pressure path beta p = exp(-beta e_surf / 2).
double PressurePath(double beta, double e_surf_R);

// Root of ell(beta, p) = ell for the full-line operator (mean spacing of the
// complete constant-pressure chain), by bisection in log p.
double PressureAtLength(const PairPotential& v, int m, double beta, double ell,
                        double R, const TransferOptions& options = {});

// --- Oracles ----------------------------------------------------------------

struct NearestNeighborValues {
  double e0_R = 0.0;
  double e_surf_R = 0.0;
  double error_estimate = 0.0;
};

// e0 = -(1/beta) log int_{r_hc}^R exp(-beta v) by adaptive quadrature and
// e_surf = -e0, for nearest-neighbor chains at zero pressure.
NearestNeighborValues NearestNeighborOracle(const PairPotential& v,
                                            double beta, double R);

// Direct estimate of log Q_N(beta, p) = log int exp(-beta [U + p sum z])
// over (0, inf)^{N-1}, stratified over the 2^{N-1} crack patterns. Each
// stratum uses the truncated transfer chain for intra-cluster spacings and
// R + Exp(beta p) for cracks, so only the interactions across cracks are
// left to the Monte Carlo weights. Points are allocated in proportion to
// the truncated stratum masses.
struct DirectEstimate {
  double log_q = 0.0;
  double std_error = 0.0;  // of log_q
  double log_q_truncated = 0.0;  // sum of the stratum masses
  long points = 0;
  int strata = 0;
};

DirectEstimate EstimateLogPartitionFunction(const PairPotential& v, int m,
                                            const TransferSolution& sol,
                                            int n, long points, Rng& rng);

struct SandwichBounds {
  double lower = 0.0;          // -beta g_R - log u
  double upper = 0.0;          // lower - PhiInverse(-lambda)
  double lower_finite_n = 0.0; // exact finite-N product-measure value
  double upper_finite_n = 0.0; // same with q exp(lambda) for the cracks
  double lambda = 0.0;
};

// Bounds on (1/N) log Q_N. The finite-N pair sums the renewal table exactly:
// (1/N) [-beta N g_R - beta g_surf - log q - N log u + log r(N)].
SandwichBounds ComputeSandwich(const TransferSolution& sol,
                               const DefectGasModel& model, double lambda,
                               int n);

VerificationReport SandwichCheck(const SandwichBounds& bounds,
                                 const DirectEstimate& estimate, int n);

struct GibbsExpansionPoint {
  double beta = 0.0;
  double pressure = 0.0;
  double e_surf_R = 0.0;
  double g = 0.0;        // full-line operator
  double g_R = 0.0;      // truncated operator
  double q = 0.0;        // effective activity
  double ratio = 0.0;    // beta (g_R - g) / q
  double ell = 0.0;      // mean spacing of the full chain
  double ell_R = 0.0;    // mean spacing of the truncated chain
  double a = 0.0;
  double length_ratio = 0.0;  // (ell - a) (beta p)^2 exp(beta e_surf_R)
  // The thermal expansion ell_R - a in the same units; the additive
  // correction that separates length_ratio from one.
  double length_error_bar = 0.0;
  double crack_length_ratio = 0.0;  // (ell - ell_R) beta p / q
};

// Evaluates the expansion quantities on the pressure path at one beta. The
// full-line and truncated operators share the nodes on [r_hc, R].
GibbsExpansionPoint GibbsExpansionAt(const PairPotential& v, int m,
                                     double beta, double R,
                                     const TransferOptions& options = {});

// All three ratios in [0.5, 2]. |ratio - 1| and |crack_length_ratio - 1|
// are non-increasing along the beta grid up to `trend_slack`;
// |length_ratio - 1| is non-increasing within the sum of the error bars of
// neighboring points.
VerificationReport GibbsExpansionCheck(
    const std::vector<GibbsExpansionPoint>& points, double trend_slack = 1e-3);

struct PooledCrackStatistics {
  long samples = 0;
  int n = 0;
  double mean_cluster_density = 0.0;  // mean of M_N / N
  double std_error_density = 0.0;
  std::vector<double> cluster_counts;
  std::vector<double> crack_excesses;
};

// Pools per-sample statistics; the standard error uses the effective sample
// size samples / tau.
PooledCrackStatistics PoolCrackStatistics(
    const std::vector<CrackStatistics>& stats, int n, double tau = 1.0);

struct Theorem23Tolerances {
  double density_relative = 0.15;
  double tv_geometric = 0.1;
  double tv_exponential = 0.1;
  long min_effective_samples = 20;
};

// Three reports: crack density against q, binned TV of the cluster-size law
// against Geom(q / (1 + q)), binned TV of the crack excesses against
// Exp(beta p). KS and chi-square p-values go into the notes.
std::vector<VerificationReport> Theorem23Check(
    const PooledCrackStatistics& pooled, const CrackPrediction& prediction,
    double effective_samples, const Theorem23Tolerances& tol = {});

// --- Legendre duality -------------------------------------------------------

// f(ell) = sup_p [g(p) - p ell] evaluated parametrically: ell_i = g'(p_i)
// from central differences, f_i = g_i - p_i ell_i. Returns (ell, f) sorted by
// ell.
void LegendreTransform(const std::vector<double>& p,
                       const std::vector<double>& g, std::vector<double>* ell,
                       std::vector<double>* f);

struct LegendreConsistency {
  double transform_error = 0.0;   // max |g(p) - min_ell (f + p ell)|
  double derivative_error = 0.0;  // max |ell - g'(-f'(ell))|
  double min_second_difference_f = 0.0;  // convexity of f
  double max_second_difference_g = 0.0;  // concavity of g
  bool f_convex = false;
  bool g_concave = false;
};

// Checks g(p) = inf_ell (f(ell) + p ell) at interior p grid points, and the
// derivative duality p = -f'(ell) <=> ell = g'(p) at interior ell points.
LegendreConsistency CheckLegendreConsistency(const std::vector<double>& p,
                                             const std::vector<double>& g,
                                             const std::vector<double>& ell,
                                             const std::vector<double>& f);

// --- Zero-temperature free energy -------------------------------------------

struct ZeroTemperatureSummary {
  double a = 0.0;
  double e0 = 0.0;
  double p_star = 0.0;    // |v(z_max)| / z_max
  double ell_star = 0.0;  // argmin_r W(r) + p_star r
  std::vector<double> ell;
  std::vector<double> hull;  // W**(ell)
};

// Lower convex envelope of W on [z_lo, z_hi], with W replaced by e0 beyond
// a (cracks cost nothing per particle as N grows).
ZeroTemperatureSummary ZeroTemperatureFreeEnergy(const PairPotential& v, int m,
                                                 double z_lo, double z_hi,
                                                 int grid = 2000);

}  // namespace crackchain

#endif  // CRACKCHAIN_VERIFY_H_
