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

#ifndef CRACKCHAIN_SAMPLER_H_
#define CRACKCHAIN_SAMPLER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crackchain/defect_gas.h"
#include "crackchain/potential.h"
#include "crackchain/rng.h"
#include "crackchain/transfer_operator.h"

namespace crackchain {

enum class SampleOrigin { kExactRenewal, kMcmcNpt, kMcmcCanonical };
std::string SampleOriginName(SampleOrigin origin);

struct ChainSample {
  std::vector<double> spacings;
  double total_length = 0.0;
  uint64_t seed = 0;
  SampleOrigin origin = SampleOrigin::kExactRenewal;
  int replica = 0;
  long step = 0;
};

// Cluster sizes T_1, T_2, ... conditioned on T_1 + ... + T_k = N for some k.
// The law of T is P(T = j) = c rho^j + h(j), with h supported on
// 1 .. h.size(); this covers the defect-gas law (c = q, rho = u,
// h(j) = q f(j) u^j) and arbitrary finite laws (c = 0).
class ConditionedRenewalSampler {
 public:
  ConditionedRenewalSampler(const DefectGasModel& model, int n);
  // pmf[j - 1] = P(T = j) for a finitely supported law.
  static ConditionedRenewalSampler FromPmf(std::vector<double> pmf, int n);

  int n() const { return n_; }
  // r(m) = P(some partial sum equals m), r(0) = 1.
  double RenewalProbability(int m) const { return r_[m]; }
  double PmfT(int j) const;

  std::vector<int> SampleClusterSizes(Rng& rng) const;
  // Bonds i_1 < ... < i_{M-1} (1-based, bond i joins atoms i and i + 1)
  // that are cracks, i.e. the partial sums below N.
  static std::vector<int> CrackIndices(const std::vector<int>& sizes);

  // E[M_N] = sum_{m=1}^N r(m) r(N - m) / r(N).
  double ExpectedClusterCount() const;
  // P(M_N = k) for k = 1 .. N, by convolution powers; O(N^2 k_cut), meant
  // for N up to a few hundred.
  std::vector<double> ClusterCountLaw() const;

 private:
  ConditionedRenewalSampler() = default;
  void BuildTable();

  int n_ = 0;
  double c_ = 0.0;
  double rho_ = 0.0;
  std::vector<double> h_;
  std::vector<double> p_;  // p_[j] = P(T = j), j = 0 .. n
  std::vector<double> r_;  // r_[m], m = 0 .. n
};

// Samples the k - 1 spacings of a k-cluster from the truncated transfer
// chain. Conditional node probabilities are the kernel row times a backward
// vector; the continuous value is drawn uniformly inside the node's cell
// (piecewise-linear inverse CDF on the grid).
class ClusterSpacingSampler {
 public:
  explicit ClusterSpacingSampler(const TransferSolution& sol);

  std::vector<double> Sample(int k, Rng& rng) const;
  // Node index path of the same draw, for tests of the discrete law.
  std::vector<int> SampleNodes(int k, Rng& rng) const;
  // Spacings drawn uniformly in the cells of `path`.
  std::vector<double> Jitter(const std::vector<int>& path, Rng& rng) const;
  // log P(path) under the discrete chain of a (path.size() + 1)-cluster.
  double LogPathProbability(const std::vector<int>& path) const;
  // Cell j is [cell_lower(j), cell_lower(j) + cell_width(j)); the widths are
  // the quadrature weights.
  double cell_lower(int j) const { return edges_[j]; }
  double cell_width(int j) const { return edges_[j + 1] - edges_[j]; }

 private:
  // A^r 1 divided by exp(log_scale(r)).
  const Eigen::VectorXd& Backward(int remaining) const;
  double BackwardLogScale(int remaining) const;
  int DrawIndex(const Eigen::VectorXd& weights, Rng& rng) const;

  Eigen::MatrixXd kernel_;
  Eigen::VectorXd boundary_;
  Eigen::VectorXd nodes_;
  std::vector<double> edges_;
  mutable std::vector<Eigen::VectorXd> backward_;
  mutable std::vector<double> log_scale_;
  mutable int converged_at_ = -1;
  mutable double log_growth_ = 0.0;
};

// R + Exp(beta p). Throws RegimeError for p <= 0.
double SampleCrackLength(double beta, double pressure, double R, Rng& rng);

struct SystemLengthDecomposition {
  std::vector<double> cluster_lengths;  // X_i
  std::vector<double> crack_excesses;   // Y_i
  double R = 0.0;
  double total = 0.0;                   // Lambda_n
  double Recompose() const;             // sum X + (n - 1) R + sum Y
};

struct ExactChain {
  ChainSample sample;
  std::vector<int> cluster_sizes;
  SystemLengthDecomposition decomposition;
};

// Exact draw from the defect-gas product measure: conditioned cluster sizes,
// transfer-chain spacings inside clusters, exponential crack excesses.
ExactChain SampleExactChain(const ConditionedRenewalSampler& sizes,
                            const ClusterSpacingSampler& spacings,
                            double beta, double pressure, double R, Rng& rng);

struct McmcOptions {
  long steps = 1000000;
  double burn_in_fraction = 0.1;
  // Steps between recorded samples; 0 picks ceil(tau) sweeps from the
  // integrated autocorrelation time measured during burn-in.
  long thin = 0;
  // Gaussian proposal width; 0 means 0.05 a.
  double sigma = 0.0;
  double jump_probability = 0.2;
  double swap_probability = 0.1;
  // Record the spacings in each ChainSample (otherwise only totals).
  bool keep_spacings = true;
  // Lattice spacing that centers the proposals; 0 uses the lattice constant
  // (or z_max when the potential has none).
  double a = 0.0;
};

struct McmcResult {
  std::vector<ChainSample> samples;
  double acceptance_rate = 0.0;
  double autocorrelation_time = 1.0;  // in recorded samples
  long thin = 1;
  std::vector<std::string> warnings;
};

using SampleSink = std::function<void(const ChainSample&)>;

// Metropolis sampler of the constant-pressure measure
// exp(-beta [U_N + p sum z]) on (0, inf)^{N-1}. Moves: Gaussian resize of one
// spacing, and an independence proposal from the mixture of N(a, sigma) and
// R + Exp(beta p) with its exact density ratio. Interactions across cracks
// are kept in full. `R` only shapes the proposal.
McmcResult McmcNpt(const PairPotential& v, int m, double beta,
                   double pressure, int n, double R,
                   const McmcOptions& options, Rng& rng,
                   const std::vector<double>* initial = nullptr,
                   const SampleSink& sink = nullptr);

// Metropolis sampler of the canonical measure with sum z = ell N fixed.
// Moves act on a random pair (i, j): a length transfer by a Gaussian step,
// an independence proposal for z_i in (0, z_i + z_j) from a mixture of
// N(a, sigma), N(z_i + z_j - a, sigma) and the uniform law, and a swap.
McmcResult McmcCanonical(const PairPotential& v, int m, double beta,
                         double ell, int n, const McmcOptions& options,
                         Rng& rng,
                         const std::vector<double>* initial = nullptr,
                         const SampleSink& sink = nullptr);

struct CrackStatistics {
  int M = 1;
  std::vector<int> crack_indices;      // 1-based bond indices
  std::vector<double> cluster_counts;  // counts[k] of clusters of size k
  std::vector<double> crack_excesses;  // z - R over cracks
  bool crack_law_empty = true;         // no crack: nu_hat undefined
  std::optional<double> tv_geom;
  std::optional<double> tv_exp;

  // nu_N as a probability vector indexed by size.
  std::vector<double> ClusterLaw() const;
};

// Crack detection with z >= R. With reference parameters, adds the binned
// TV distances to Geom(q / (1 + q)) on cluster sizes and Exp(beta p) on crack
// excesses.
CrackStatistics ComputeCrackStatistics(
    const std::vector<double>& spacings, double R,
    std::optional<double> q = std::nullopt,
    std::optional<double> beta_p = std::nullopt);

// Replaces the spacings by a configuration with total exactly `length`,
// stretching or shrinking the crack excesses (and opening one crack at the
// largest spacing if there is none).
void RescaleToLength(std::vector<double>* spacings, double R, double length);

}  // namespace crackchain

#endif  // CRACKCHAIN_SAMPLER_H_
