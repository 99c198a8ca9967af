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

#ifndef CRACKCHAIN_TRANSFER_OPERATOR_H_
#define CRACKCHAIN_TRANSFER_OPERATOR_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crackchain/potential.h"

namespace crackchain {

struct TransferOptions {
  int node_count = 256;
  // When true the spacing domain is [r_hc, inf): the Gauss-Legendre block on
  // [r_hc, R] is followed by `tail_node_count` Gauss-Laguerre nodes in
  // x = beta p (z - R). This gives the untruncated constant-pressure
  // quantities and requires p > 0.
  bool full_line = false;
  int tail_node_count = 96;
  double power_tolerance = 1e-13;
  int max_power_iterations = 100000;
};

// Nystrom discretization of the constant-pressure transfer kernel for
// interaction range m in {1, 2}:
//
//   K(z, z') = w(z') exp(-beta [v(z') + v(z + z') 1{m = 2} + p z']).
//
// The kernel factors as S D with S_ij = exp(-beta v(z_i + z_j)) symmetric and
// D = diag(w_j exp(-beta (v_j + p z_j))). All matrices are stored with their
// largest entry scaled to one and the scale kept as a separate logarithm.
class TransferSolution {
 public:
  static TransferSolution Build(const PairPotential& v, int m, double beta,
                                double pressure, double R,
                                const TransferOptions& options = {});

  int m() const { return m_; }
  double beta() const { return beta_; }
  double pressure() const { return pressure_; }
  double R() const { return R_; }
  bool full_line() const { return full_line_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  const Eigen::VectorXd& nodes() const { return nodes_; }
  // Weights of the rule for dz, including the Jacobian on tail nodes.
  const Eigen::VectorXd& weights() const { return weights_; }
  // Kernel divided by exp(log_kernel_scale()).
  const Eigen::MatrixXd& kernel() const { return kernel_; }
  double log_kernel_scale() const { return log_kernel_scale_; }
  // Boundary vector l_j = w_j exp(-beta (v_j + p z_j)) divided by
  // exp(log_boundary_scale()).
  const Eigen::VectorXd& boundary() const { return boundary_; }
  double log_boundary_scale() const { return log_boundary_scale_; }

  double log_lambda() const { return log_lambda_; }
  double lambda() const;
  // Second eigenvalue in absolute value relative to the first; 0 for m = 1.
  double lambda2_ratio() const { return lambda2_ratio_; }
  // log(lambda_1 / |lambda_2|); +inf for the rank-one m = 1 kernel.
  double spectral_gap() const;
  // Relative difference between the power-iteration eigenvalue and the
  // symmetric eigensolver; a build diagnostic.
  double eigen_cross_check() const { return eigen_cross_check_; }
  int power_iterations() const { return power_iterations_; }

  // Right and left Perron vectors, normalized so that sum(right) = 1 and
  // left . right = 1.
  const Eigen::VectorXd& right_vec() const { return right_; }
  const Eigen::VectorXd& left_vec() const { return left_; }

  double g_R() const { return -log_lambda_ / beta_; }
  // Eigenvector-overlap closed form of lim_k [-(1/beta) log Q_k - k g_R].
  double g_surf_R() const { return g_surf_; }

  // Stationary spacing law: node masses pi_j (summing to one) and the
  // density pi_j / w_j, which integrates to one against weights().
  const Eigen::VectorXd& stationary_mass() const { return stationary_mass_; }
  Eigen::VectorXd stationary_density() const;

  // Transfer kernel divided by lambda, with unit spectral radius; used for
  // the exactly normalized boundary-layer products.
  Eigen::MatrixXd NormalizedKernel() const;
  // log of (l . right)^2 / (l . right^2) in boundary-scaled units.
  double log_overlap() const { return log_overlap_; }

 private:
  TransferSolution() = default;

  int m_ = 2;
  double beta_ = 1.0;
  double pressure_ = 0.0;
  double R_ = 0.0;
  bool full_line_ = false;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd kernel_;
  double log_kernel_scale_ = 0.0;
  Eigen::VectorXd boundary_;
  double log_boundary_scale_ = 0.0;
  double log_lambda_ = 0.0;
  double lambda2_ratio_ = 0.0;
  double eigen_cross_check_ = 0.0;
  int power_iterations_ = 0;
  Eigen::VectorXd right_;
  Eigen::VectorXd left_;
  double g_surf_ = 0.0;
  double log_overlap_ = 0.0;
  Eigen::VectorXd stationary_mass_;
};

// log Q_k for k >= 1 with Q_1 = 1. Throws InvalidInput for k < 1.
double LogTruncatedPartitionFunction(const TransferSolution& sol, int k);
// log Q_k for k = 1 .. k_max in one pass; element k - 1 holds log Q_k.
std::vector<double> LogTruncatedPartitionSequence(const TransferSolution& sol,
                                                  int k_max);

struct SurfaceCrossCheck {
  double closed_form = 0.0;
  double sequence_50 = 0.0;
  double sequence_100 = 0.0;
  double max_deviation = 0.0;
  bool agree = false;
  double gap = 0.0;
  std::string warning;
};

// g_surf_R from the closed form and from -(1/beta) log Q_k - k g_R at
// k = 50 and 100. A disagreement above 1e-8 sets a spectral-gap warning.
SurfaceCrossCheck SurfaceFreeEnergy(const TransferSolution& sol);

// Mean of the stationary spacing law.
double MeanSpacing(const TransferSolution& sol);

// d g_R / d p by central differences with step max(1e-8, 1e-3 p); a one-sided
// second-order stencil at p = 0.
double MeanSpacingFiniteDifference(const PairPotential& v, int m, double beta,
                                   double pressure, double R,
                                   const TransferOptions& options = {});

// L_k = -(1/beta) d/dp log Q_k by the same differences as above.
double ClusterLength(const PairPotential& v, int m, double beta,
                     double pressure, double R, int k,
                     const TransferOptions& options = {});
// L_k as the expectation of the summed spacings under the k-cluster law.
double ClusterLengthExpectation(const TransferSolution& sol, int k);

// f(k) = Q_k exp(beta [k g_R + g_surf_R]) - 1 for k = 1 .. k_max, computed
// with the normalized kernel so that no large logarithms cancel.
std::vector<double> BoundaryLayerSequence(const TransferSolution& sol,
                                          int k_max);

struct DecayTable {
  std::vector<int> k;
  std::vector<double> abs_f;
  double fitted_rate = 0.0;
  double spectral_gap = 0.0;
  double relative_error = 0.0;
  int points_used = 0;
  std::string warning;
};

// |f(k)| for k <= k_max and the least-squares slope of log|f(k)| over the
// points k >= 2 that lie above the noise floor `noise_floor`.
DecayTable CorrelationDecay(const TransferSolution& sol, int k_max,
                            double noise_floor = 1e-12);

}  // namespace crackchain

#endif  // CRACKCHAIN_TRANSFER_OPERATOR_H_
