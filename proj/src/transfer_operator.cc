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

#include "crackchain/transfer_operator.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "crackchain/errors.h"
#include "crackchain/quadrature.h"

namespace crackchain {
namespace {

// Offset that keeps the first node clear of the hard core, where the
// integrand vanishes identically.
constexpr double kCoreOffset = 1e-9;

double FiniteDifferenceStep(double p) { return std::max(1e-8, 1e-3 * p); }

// Derivative of h at p by central differences, or by the one-sided
// second-order stencil when p - step would be negative.
double Differentiate(const std::function<double(double)>& h, double p) {
  const double step = FiniteDifferenceStep(p);
  if (p - step < 0.0) {
    return (-3.0 * h(p) + 4.0 * h(p + step) - h(p + 2.0 * step)) /
           (2.0 * step);
  }
  return (h(p + step) - h(p - step)) / (2.0 * step);
}

}  // namespace

TransferSolution TransferSolution::Build(const PairPotential& v, int m,
                                         double beta, double pressure,
                                         double R,
                                         const TransferOptions& options) {
  if (m != 1 && m != 2) {
    throw InvalidInput("transfer operator supports m = 1 and m = 2 only");
  }
  if (!(beta > 0.0)) throw InvalidInput("transfer operator: beta must be > 0");
  if (!(pressure >= 0.0)) {
    throw InvalidInput("transfer operator: pressure must be >= 0");
  }
  if (!(R >= v.z_max())) throw InvalidInput("transfer operator: need R >= z_max");
  if (options.node_count < 64) {
    throw InvalidInput("transfer operator: node_count must be >= 64");
  }
  if (options.full_line && !(pressure > 0.0)) {
    throw RegimeError("full-line transfer operator requires pressure > 0");
  }
  TransferSolution sol;
  sol.m_ = m;
  sol.beta_ = beta;
  sol.pressure_ = pressure;
  sol.R_ = R;
  sol.full_line_ = options.full_line;

  const QuadratureRule core =
      GaussLegendre(options.node_count, v.r_hc() + kCoreOffset, R);
  const int n_tail = options.full_line ? options.tail_node_count : 0;
  const int n = options.node_count + n_tail;
  sol.nodes_.resize(n);
  sol.weights_.resize(n);
  Eigen::VectorXd log_w(n);
  for (int j = 0; j < options.node_count; ++j) {
    sol.nodes_[j] = core.nodes[j];
    sol.weights_[j] = core.weights[j];
    log_w[j] = std::log(core.weights[j]);
  }
  if (n_tail > 0) {
    const double bp = beta * pressure;
    // Gauss-Laguerre in x = beta p (z - R) absorbs the pressure factor of
    // the tail, which is exp(-beta p R - x).
    const QuadratureRule tail = GaussLaguerre(n_tail);
    for (int j = 0; j < n_tail; ++j) {
      const double x = tail.nodes[j];
      const int idx = options.node_count + j;
      sol.nodes_[idx] = R + x / bp;
      log_w[idx] = tail.log_weights[j] + x - std::log(bp);
      sol.weights_[idx] = std::exp(log_w[idx]);
    }
  }

  Eigen::VectorXd log_d(n);
  for (int j = 0; j < n; ++j) {
    const double z = sol.nodes_[j];
    log_d[j] = log_w[j] - beta * (v(z) + pressure * z);
  }
  Eigen::MatrixXd log_a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double log_s =
          (m == 2) ? -beta * v(sol.nodes_[i] + sol.nodes_[j]) : 0.0;
      log_a(i, j) = log_s + log_d[j];
    }
  }
  const double scale = log_a.maxCoeff();
  const double d_scale = log_d.maxCoeff();
  if (!std::isfinite(scale) || !std::isfinite(d_scale)) {
    throw ValidationError(
        "transfer operator: all kernel entries vanish; rescaling failed");
  }
  sol.log_kernel_scale_ = scale;
  sol.kernel_ = (log_a.array() - scale).exp().matrix();
  sol.log_boundary_scale_ = d_scale;
  sol.boundary_ = (log_d.array() - d_scale).exp().matrix();

  // Leading eigenpair by power iteration from the flat vector.
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
  double lam = 0.0;
  double lam_prev = -1.0;
  int iter = 0;
  for (; iter < options.max_power_iterations; ++iter) {
    Eigen::VectorXd y = sol.kernel_ * x;
    lam = y.sum();
    if (!(lam > 0.0)) {
      throw ValidationError("transfer operator: power iteration collapsed");
    }
    y /= lam;
    const double diff = (y - x).lpNorm<1>();
    x.swap(y);
    if (iter > 0 && std::abs(lam - lam_prev) <= options.power_tolerance * lam &&
        diff <= options.power_tolerance) {
      break;
    }
    lam_prev = lam;
  }
  if (iter >= options.max_power_iterations) {
    throw ValidationError("transfer operator: power iteration did not converge");
  }
  sol.power_iterations_ = iter + 1;
  sol.log_lambda_ = scale + std::log(lam);
  sol.right_ = x;
  // The kernel is S D with S symmetric, so D times the right vector is the
  // left eigenvector.
  Eigen::VectorXd left = sol.boundary_.cwiseProduct(x);
  left /= left.dot(x);
  sol.left_ = left;
  sol.stationary_mass_ = sol.left_.cwiseProduct(sol.right_);
  sol.stationary_mass_ /= sol.stationary_mass_.sum();

  const double overlap_1 = sol.boundary_.dot(x);
  const double overlap_2 = sol.boundary_.dot(x.cwiseProduct(x));
  sol.log_overlap_ = 2.0 * std::log(overlap_1) - std::log(overlap_2);
  const double log_c = d_scale + sol.log_overlap_;
  sol.g_surf_ = -2.0 * sol.g_R() - log_c / beta;

  // Symmetric similarity D^1/2 S D^1/2 for the second eigenvalue and an
  // independent check of the first.
  if (m == 2) {
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        b(i, j) = std::exp(0.5 * (log_a(i, j) + log_a(j, i)) - scale);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b,
                                                      Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double l1 = ev[n - 1];
    const double l2 = std::max(std::abs(ev[n - 2]), std::abs(ev[0]));
    sol.lambda2_ratio_ = l2 / l1;
    sol.eigen_cross_check_ = std::abs(l1 - lam) / lam;
  } else {
    sol.lambda2_ratio_ = 0.0;
    sol.eigen_cross_check_ = 0.0;
  }
  return sol;
}

double TransferSolution::lambda() const { return std::exp(log_lambda_); }

double TransferSolution::spectral_gap() const {
  if (lambda2_ratio_ <= 0.0) return kInfinity;
  return -std::log(lambda2_ratio_);
}

Eigen::VectorXd TransferSolution::stationary_density() const {
  return stationary_mass_.cwiseQuotient(weights_);
}

Eigen::MatrixXd TransferSolution::NormalizedKernel() const {
  return kernel_ / std::exp(log_lambda_ - log_kernel_scale_);
}

std::vector<double> LogTruncatedPartitionSequence(const TransferSolution& sol,
                                                  int k_max) {
  if (k_max < 1) throw InvalidInput("truncated partition function: k < 1");
  std::vector<double> out;
  out.reserve(k_max);
  out.push_back(0.0);
  if (k_max == 1) return out;
  Eigen::VectorXd x = sol.boundary();
  double acc = sol.log_boundary_scale();
  double total = x.sum();
  out.push_back(acc + std::log(total));
  const Eigen::MatrixXd kt = sol.kernel().transpose();
  for (int k = 3; k <= k_max; ++k) {
    x /= total;
    acc += std::log(total);
    x = kt * x;
    acc += sol.log_kernel_scale();
    total = x.sum();
    out.push_back(acc + std::log(total));
  }
  return out;
}

double LogTruncatedPartitionFunction(const TransferSolution& sol, int k) {
  if (k < 1) throw InvalidInput("truncated partition function: k < 1");
  return LogTruncatedPartitionSequence(sol, k).back();
}

SurfaceCrossCheck SurfaceFreeEnergy(const TransferSolution& sol) {
  SurfaceCrossCheck check;
  check.closed_form = sol.g_surf_R();
  const std::vector<double> log_q = LogTruncatedPartitionSequence(sol, 100);
  auto seq = [&](int k) {
    return -log_q[k - 1] / sol.beta() - k * sol.g_R();
  };
  check.sequence_50 = seq(50);
  check.sequence_100 = seq(100);
  check.max_deviation =
      std::max(std::abs(check.sequence_50 - check.closed_form),
               std::abs(check.sequence_100 - check.closed_form));
  // Absolute agreement scaled by the size of the terms that cancel.
  const double tol = 1e-8 * std::max(1.0, std::abs(check.closed_form));
  check.agree = check.max_deviation <= tol;
  check.gap = sol.spectral_gap();
  if (!check.agree) {
    check.warning = "closed form and k-sequence disagree; spectral gap " +
                    std::to_string(check.gap);
  }
  return check;
}

double MeanSpacing(const TransferSolution& sol) {
  return sol.stationary_mass().dot(sol.nodes());
}

double MeanSpacingFiniteDifference(const PairPotential& v, int m, double beta,
                                   double pressure, double R,
                                   const TransferOptions& options) {
  return Differentiate(
      [&](double p) {
        return TransferSolution::Build(v, m, beta, p, R, options).g_R();
      },
      pressure);
}

double ClusterLength(const PairPotential& v, int m, double beta,
                     double pressure, double R, int k,
                     const TransferOptions& options) {
  if (k < 2) throw InvalidInput("cluster length: k must be >= 2");
  return -Differentiate(
             [&](double p) {
               return LogTruncatedPartitionFunction(
                   TransferSolution::Build(v, m, beta, p, R, options), k);
             },
             pressure) /
         beta;
}

double ClusterLengthExpectation(const TransferSolution& sol, int k) {
  if (k < 2) throw InvalidInput("cluster length: k must be >= 2");
  const int n = sol.size();
  const int spacings = k - 1;
  // backward[s] weights the remaining spacings after spacing s + 1.
  std::vector<Eigen::VectorXd> backward(spacings);
  backward[spacings - 1] = Eigen::VectorXd::Ones(n);
  for (int s = spacings - 2; s >= 0; --s) {
    Eigen::VectorXd b = sol.kernel() * backward[s + 1];
    backward[s] = b / b.sum();
  }
  Eigen::VectorXd forward = sol.boundary();
  const Eigen::MatrixXd kt = sol.kernel().transpose();
  double total = 0.0;
  for (int s = 0; s < spacings; ++s) {
    if (s > 0) {
      forward = kt * forward;
    }
    forward /= forward.sum();
    const Eigen::VectorXd marginal = forward.cwiseProduct(backward[s]);
    total += marginal.dot(sol.nodes()) / marginal.sum();
  }
  return total;
}

std::vector<double> BoundaryLayerSequence(const TransferSolution& sol,
                                          int k_max) {
  if (k_max < 1) throw InvalidInput("boundary layer: k_max < 1");
  std::vector<double> f;
  f.reserve(k_max);
  f.push_back(std::expm1(sol.log_lambda() - sol.log_boundary_scale() -
                         sol.log_overlap()));
  const double c = std::exp(sol.log_overlap());
  const Eigen::MatrixXd kt = sol.NormalizedKernel().transpose();
  Eigen::VectorXd x = sol.boundary();
  for (int k = 2; k <= k_max; ++k) {
    if (k > 2) x = kt * x;
    f.push_back(x.sum() / c - 1.0);
  }
  return f;
}

DecayTable CorrelationDecay(const TransferSolution& sol, int k_max,
                            double noise_floor) {
  DecayTable table;
  table.spectral_gap = sol.spectral_gap();
  const std::vector<double> f = BoundaryLayerSequence(sol, k_max);
  std::vector<double> xs;
  std::vector<double> ys;
  bool above = true;
  for (int k = 1; k <= k_max; ++k) {
    table.k.push_back(k);
    table.abs_f.push_back(std::abs(f[k - 1]));
    if (k >= 2 && above) {
      if (std::abs(f[k - 1]) > noise_floor) {
        xs.push_back(k);
        ys.push_back(std::log(std::abs(f[k - 1])));
      } else {
        above = false;
      }
    }
  }
  table.points_used = static_cast<int>(xs.size());
  if (!std::isfinite(table.spectral_gap)) {
    table.warning = "degenerate gap: the kernel has rank one";
    table.fitted_rate = kInfinity;
    return table;
  }
  if (xs.size() < 2) {
    table.warning = "fewer than two points above the noise floor";
    table.fitted_rate = std::nan("");
    return table;
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  table.fitted_rate = -sxy / sxx;
  table.relative_error =
      std::abs(table.fitted_rate - table.spectral_gap) / table.spectral_gap;
  if (table.relative_error > 0.1) {
    table.warning = "fitted decay rate differs from the spectral gap by more "
                    "than 10%";
  }
  return table;
}

}  // namespace crackchain
