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

#include "crackchain/sampler.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "crackchain/errors.h"
#include "crackchain/ground_state.h"
#include "crackchain/stats.h"

namespace crackchain {
namespace {

constexpr double kPi = 3.14159265358979323846;

double NormalDensity(double x, double mean, double sigma) {
  const double t = (x - mean) / sigma;
  return std::exp(-0.5 * t * t) / (sigma * std::sqrt(2.0 * kPi));
}

double Sum(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0);
}

// Energy of all windows of at most m consecutive spacings that overlap the
// index range [lo, hi].
double WindowEnergy(const PairPotential& v, int m, const std::vector<double>& z,
                    int lo, int hi) {
  const int nz = static_cast<int>(z.size());
  double energy = 0.0;
  for (int s = std::max(0, lo - m + 1); s <= std::min(hi, nz - 1); ++s) {
    double length = 0.0;
    for (int l = 0; l < m && s + l < nz; ++l) {
      length += z[s + l];
      if (s + l >= lo) energy += v(length);
    }
  }
  return energy;
}

// Energy of the windows touching spacing i or spacing j.
double PairWindowEnergy(const PairPotential& v, int m,
                        const std::vector<double>& z, int i, int j) {
  if (i > j) std::swap(i, j);
  if (j - i <= m) return WindowEnergy(v, m, z, i, j);
  return WindowEnergy(v, m, z, i, i) + WindowEnergy(v, m, z, j, j);
}

int CountClusters(const std::vector<double>& z, double R) {
  int cracks = 0;
  for (double x : z) cracks += (x >= R) ? 1 : 0;
  return cracks + 1;
}

double DefaultLatticeSpacing(const PairPotential& v, int m) {
  try {
    return FindLatticeConstant(v, m).a;
  } catch (const std::exception&) {
    return v.z_max();
  }
}

void CheckMcmcInputs(const PairPotential& v, int m, double beta, int n) {
  if (m != 1 && m != 2) throw InvalidInput("interaction range m must be 1 or 2");
  if (!(beta > 0.0)) throw InvalidInput("beta must be positive");
  if (n < 2) throw InvalidInput("chain needs at least two atoms");
  (void)v;
}

// Shared driver: runs `step` for options.steps iterations, estimates the
// thinning interval during burn-in from the per-sweep observable and emits
// samples afterwards.
template <typename StepFn, typename ObservableFn>
McmcResult RunChain(const McmcOptions& options, SampleOrigin origin, Rng& rng,
                    std::vector<double>& z, const SampleSink& sink,
                    StepFn step, ObservableFn observable) {
  McmcResult result;
  const long sweep = std::max<long>(1, static_cast<long>(z.size()));
  const long burn_in = static_cast<long>(
      std::floor(options.burn_in_fraction * static_cast<double>(options.steps)));
  long accepted = 0;
  std::vector<double> burn_series;
  long t = 0;
  for (; t < burn_in; ++t) {
    accepted += step() ? 1 : 0;
    if ((t + 1) % sweep == 0) burn_series.push_back(observable());
  }
  long thin = options.thin;
  if (thin <= 0) {
    double tau = 1.0;
    if (burn_series.size() >= 20) {
      tau = IntegratedAutocorrelationTime(burn_series);
      if (!std::isfinite(tau) || tau < 1.0) tau = 1.0;
    }
    thin = static_cast<long>(std::ceil(tau)) * sweep;
  }
  result.thin = thin;
  std::vector<double> emitted;
  for (; t < options.steps; ++t) {
    accepted += step() ? 1 : 0;
    if ((t + 1 - burn_in) % thin == 0) {
      ChainSample sample;
      sample.total_length = Sum(z);
      if (options.keep_spacings) sample.spacings = z;
      sample.seed = rng.seed();
      sample.origin = origin;
      sample.step = t + 1;
      emitted.push_back(observable());
      if (sink) {
        sink(sample);
      } else {
        result.samples.push_back(std::move(sample));
      }
    }
  }
  result.acceptance_rate =
      options.steps > 0 ? static_cast<double>(accepted) / options.steps : 0.0;
  if (emitted.size() >= 20) {
    const double tau = IntegratedAutocorrelationTime(emitted);
    result.autocorrelation_time = std::isfinite(tau) ? std::max(tau, 1.0)
                                                     : 1.0;
  }
  if (options.steps > 0 && result.acceptance_rate < 0.01) {
    std::ostringstream msg;
    msg << "acceptance rate " << result.acceptance_rate
        << " is below 1%; the proposal scales need tuning";
    result.warnings.push_back(msg.str());
  }
  return result;
}

}  // namespace

std::string SampleOriginName(SampleOrigin origin) {
  switch (origin) {
    case SampleOrigin::kExactRenewal:
      return "exact-renewal";
    case SampleOrigin::kMcmcNpt:
      return "mcmc-npt";
    case SampleOrigin::kMcmcCanonical:
      return "mcmc-canonical";
  }
  return "unknown";
}

// --- ConditionedRenewalSampler ----------------------------------------------

ConditionedRenewalSampler::ConditionedRenewalSampler(
    const DefectGasModel& model, int n) {
  if (n < 1) throw InvalidInput("chain length must be at least one atom");
  n_ = n;
  c_ = model.q();
  rho_ = model.u();
  const InteractionSeries& f = model.interaction();
  const int k_cut = std::min(f.k_cut(), n);
  h_.resize(k_cut);
  p_.assign(n + 1, 0.0);
  for (int j = 1; j <= n; ++j) p_[j] = model.Pmf(j);
  for (int j = 1; j <= k_cut; ++j) {
    h_[j - 1] = model.q() * f.at(j) * std::exp(j * model.log_u());
  }
  BuildTable();
}

ConditionedRenewalSampler ConditionedRenewalSampler::FromPmf(
    std::vector<double> pmf, int n) {
  if (n < 1) throw InvalidInput("chain length must be at least one atom");
  for (double x : pmf) {
    if (!(x >= 0.0)) throw InvalidInput("probabilities must be non-negative");
  }
  ConditionedRenewalSampler sampler;
  sampler.n_ = n;
  sampler.c_ = 0.0;
  sampler.rho_ = 0.0;
  if (static_cast<int>(pmf.size()) > n) pmf.resize(n);
  sampler.h_ = std::move(pmf);
  sampler.p_.assign(n + 1, 0.0);
  for (int j = 1; j <= static_cast<int>(sampler.h_.size()); ++j) {
    sampler.p_[j] = sampler.h_[j - 1];
  }
  sampler.BuildTable();
  return sampler;
}

void ConditionedRenewalSampler::BuildTable() {
  // r(m) = G(m) + H(m) with the geometric part G obeying
  // G(m) = rho (c r(m - 1) + G(m - 1)), so the table costs O(N k_cut).
  r_.assign(n_ + 1, 0.0);
  r_[0] = 1.0;
  double g = 0.0;
  const int k_cut = static_cast<int>(h_.size());
  for (int m = 1; m <= n_; ++m) {
    g = rho_ * (c_ * r_[m - 1] + g);
    double h = 0.0;
    for (int j = 1; j <= std::min(m, k_cut); ++j) h += h_[j - 1] * r_[m - j];
    r_[m] = g + h;
  }
}

double ConditionedRenewalSampler::PmfT(int j) const {
  if (j < 1 || j > n_) return 0.0;
  return p_[j];
}

std::vector<int> ConditionedRenewalSampler::SampleClusterSizes(
    Rng& rng) const {
  std::vector<int> sizes;
  // No admissible decomposition: the whole chain is one cluster.
  if (!(r_[n_] > 0.0)) return {n_};
  int remaining = n_;
  while (remaining > 0) {
    const double target = rng.Uniform() * r_[remaining];
    double cumulative = 0.0;
    int chosen = 0;
    for (int j = 1; j <= remaining; ++j) {
      const double w = p_[j] * r_[remaining - j];
      if (w <= 0.0) continue;
      cumulative += w;
      chosen = j;
      if (cumulative > target) break;
    }
    sizes.push_back(chosen);
    remaining -= chosen;
  }
  return sizes;
}

std::vector<int> ConditionedRenewalSampler::CrackIndices(
    const std::vector<int>& sizes) {
  std::vector<int> cracks;
  int position = 0;
  for (size_t i = 0; i + 1 < sizes.size(); ++i) {
    position += sizes[i];
    cracks.push_back(position);
  }
  return cracks;
}

double ConditionedRenewalSampler::ExpectedClusterCount() const {
  if (!(r_[n_] > 0.0)) return 1.0;
  double sum = 0.0;
  for (int m = 1; m <= n_; ++m) sum += r_[m] * r_[n_ - m];
  return sum / r_[n_];
}

std::vector<double> ConditionedRenewalSampler::ClusterCountLaw() const {
  if (n_ > 400) {
    throw InvalidInput("cluster-count law is limited to chains of 400 atoms");
  }
  std::vector<double> law(n_ + 1, 0.0);
  if (!(r_[n_] > 0.0)) {
    law[1] = 1.0;
    return law;
  }
  std::vector<double> a(p_);  // P(S_1 = n)
  a[0] = 0.0;
  for (int k = 1; k <= n_; ++k) {
    law[k] = a[n_] / r_[n_];
    std::vector<double> next(n_ + 1, 0.0);
    for (int n = k + 1; n <= n_; ++n) {
      double s = 0.0;
      for (int j = 1; j <= n - k; ++j) s += p_[j] * a[n - j];
      next[n] = s;
    }
    a.swap(next);
  }
  return law;
}

// --- ClusterSpacingSampler --------------------------------------------------

ClusterSpacingSampler::ClusterSpacingSampler(const TransferSolution& sol)
    : kernel_(sol.kernel()), boundary_(sol.boundary()), nodes_(sol.nodes()) {
  if (sol.full_line()) {
    throw InvalidInput("cluster spacings need the truncated transfer operator");
  }
  // Cells have the quadrature weights as widths, so a flat density on the
  // grid maps to an exactly uniform draw.
  const Eigen::VectorXd& w = sol.weights();
  const int n = static_cast<int>(w.size());
  edges_.resize(n + 1);
  edges_[n] = sol.R();
  for (int j = n - 1; j >= 0; --j) edges_[j] = edges_[j + 1] - w(j);
  backward_.push_back(Eigen::VectorXd::Ones(n));
  log_scale_.push_back(0.0);
}

const Eigen::VectorXd& ClusterSpacingSampler::Backward(int remaining) const {
  while (converged_at_ < 0 &&
         static_cast<int>(backward_.size()) <= remaining) {
    Eigen::VectorXd next = kernel_ * backward_.back();
    const double norm = next.maxCoeff();
    next /= norm;
    const double change = (next - backward_.back()).cwiseAbs().maxCoeff();
    log_scale_.push_back(log_scale_.back() + std::log(norm));
    backward_.push_back(std::move(next));
    if (change < 1e-15) {
      converged_at_ = static_cast<int>(backward_.size()) - 1;
      log_growth_ = std::log(norm);
    }
  }
  if (converged_at_ >= 0 && remaining >= converged_at_) {
    return backward_[converged_at_];
  }
  return backward_[remaining];
}

double ClusterSpacingSampler::BackwardLogScale(int remaining) const {
  Backward(remaining);
  if (converged_at_ >= 0 && remaining >= converged_at_) {
    return log_scale_[converged_at_] +
           (remaining - converged_at_) * log_growth_;
  }
  return log_scale_[remaining];
}

int ClusterSpacingSampler::DrawIndex(const Eigen::VectorXd& weights,
                                     Rng& rng) const {
  const double target = rng.Uniform() * weights.sum();
  double cumulative = 0.0;
  int last_positive = 0;
  for (int j = 0; j < weights.size(); ++j) {
    if (weights(j) <= 0.0) continue;
    cumulative += weights(j);
    last_positive = j;
    if (cumulative > target) return j;
  }
  return last_positive;
}

std::vector<int> ClusterSpacingSampler::SampleNodes(int k, Rng& rng) const {
  if (k < 1) throw InvalidInput("cluster size must be at least one");
  std::vector<int> path;
  if (k == 1) return path;
  path.reserve(k - 1);
  Eigen::VectorXd weights = boundary_.cwiseProduct(Backward(k - 2));
  path.push_back(DrawIndex(weights, rng));
  for (int n = 1; n <= k - 2; ++n) {
    weights = kernel_.row(path.back()).transpose().cwiseProduct(
        Backward(k - 2 - n));
    path.push_back(DrawIndex(weights, rng));
  }
  return path;
}

std::vector<double> ClusterSpacingSampler::Sample(int k, Rng& rng) const {
  return Jitter(SampleNodes(k, rng), rng);
}

double ClusterSpacingSampler::LogPathProbability(
    const std::vector<int>& path) const {
  if (path.empty()) return 0.0;
  const int r = static_cast<int>(path.size()) - 1;
  double log_p = std::log(boundary_(path[0]));
  for (size_t n = 1; n < path.size(); ++n) {
    log_p += std::log(kernel_(path[n - 1], path[n]));
  }
  const double log_norm =
      std::log(boundary_.dot(Backward(r))) + BackwardLogScale(r);
  return log_p - log_norm;
}

std::vector<double> ClusterSpacingSampler::Jitter(const std::vector<int>& path,
                                                  Rng& rng) const {
  std::vector<double> z;
  z.reserve(path.size());
  for (int j : path) z.push_back(rng.Uniform(edges_[j], edges_[j + 1]));
  return z;
}

// --- Exact chain ------------------------------------------------------------

double SampleCrackLength(double beta, double pressure, double R, Rng& rng) {
  if (!(pressure > 0.0) || !(beta > 0.0)) {
    throw RegimeError("crack lengths need beta > 0 and pressure > 0");
  }
  return R + rng.Exponential(beta * pressure);
}

double SystemLengthDecomposition::Recompose() const {
  const double n = static_cast<double>(cluster_lengths.size());
  return Sum(cluster_lengths) + (n - 1.0) * R + Sum(crack_excesses);
}

ExactChain SampleExactChain(const ConditionedRenewalSampler& sizes,
                            const ClusterSpacingSampler& spacings,
                            double beta, double pressure, double R, Rng& rng) {
  ExactChain chain;
  chain.cluster_sizes = sizes.SampleClusterSizes(rng);
  chain.decomposition.R = R;
  std::vector<double>& z = chain.sample.spacings;
  z.reserve(sizes.n() - 1);
  for (size_t c = 0; c < chain.cluster_sizes.size(); ++c) {
    const std::vector<double> inner = spacings.Sample(chain.cluster_sizes[c], rng);
    chain.decomposition.cluster_lengths.push_back(Sum(inner));
    z.insert(z.end(), inner.begin(), inner.end());
    if (c + 1 < chain.cluster_sizes.size()) {
      const double crack = SampleCrackLength(beta, pressure, R, rng);
      chain.decomposition.crack_excesses.push_back(crack - R);
      z.push_back(crack);
    }
  }
  chain.sample.total_length = Sum(z);
  chain.decomposition.total = chain.decomposition.Recompose();
  chain.sample.seed = rng.seed();
  chain.sample.origin = SampleOrigin::kExactRenewal;
  return chain;
}

// --- Metropolis samplers ----------------------------------------------------

McmcResult McmcNpt(const PairPotential& v, int m, double beta,
                   double pressure, int n, double R,
                   const McmcOptions& options, Rng& rng,
                   const std::vector<double>* initial,
                   const SampleSink& sink) {
  CheckMcmcInputs(v, m, beta, n);
  if (!(pressure > 0.0)) {
    throw RegimeError("the constant-pressure measure needs pressure > 0");
  }
  const double a = options.a > 0.0 ? options.a : DefaultLatticeSpacing(v, m);
  const double sigma = options.sigma > 0.0 ? options.sigma : 0.05 * a;
  const double bp = beta * pressure;
  std::vector<double> z =
      initial ? *initial : std::vector<double>(n - 1, a);
  if (static_cast<int>(z.size()) != n - 1) {
    throw InvalidInput("initial configuration has the wrong length");
  }
  if (!std::isfinite(ChainEnergy(v, m, z))) {
    throw InvalidInput("initial configuration has infinite energy");
  }
  const int nz = n - 1;
  const double floor = std::max(v.r_hc(), 0.0);

  auto proposal_density = [&](double x) {
    double h = 0.5 * NormalDensity(x, a, sigma);
    if (x >= R) h += 0.5 * bp * std::exp(-bp * (x - R));
    return h;
  };

  auto step = [&]() -> bool {
    const int i = static_cast<int>(rng.Below(nz));
    const double old = z[i];
    double proposed;
    double log_hastings = 0.0;
    if (rng.Uniform() < options.jump_probability) {
      proposed = rng.Uniform() < 0.5 ? a + sigma * rng.Normal()
                                     : R + rng.Exponential(bp);
      if (!(proposed > floor)) return false;
      log_hastings = std::log(proposal_density(old)) -
                     std::log(proposal_density(proposed));
    } else {
      proposed = old + sigma * rng.Normal();
      if (!(proposed > floor)) return false;
    }
    const double e_old = WindowEnergy(v, m, z, i, i);
    z[i] = proposed;
    const double e_new = WindowEnergy(v, m, z, i, i);
    if (!std::isfinite(e_new)) {
      z[i] = old;
      return false;
    }
    const double log_ratio =
        -beta * (e_new - e_old + pressure * (proposed - old)) + log_hastings;
    if (log_ratio >= 0.0 || rng.Uniform() < std::exp(log_ratio)) return true;
    z[i] = old;
    return false;
  };
  auto observable = [&]() { return Sum(z); };
  return RunChain(options, SampleOrigin::kMcmcNpt, rng, z, sink, step,
                  observable);
}

McmcResult McmcCanonical(const PairPotential& v, int m, double beta,
                         double ell, int n, const McmcOptions& options,
                         Rng& rng, const std::vector<double>* initial,
                         const SampleSink& sink) {
  CheckMcmcInputs(v, m, beta, n);
  const double length = ell * n;
  if (!(length > n * v.r_hc())) {
    throw RegimeError("total length must exceed N r_hc");
  }
  const double a = options.a > 0.0 ? options.a : DefaultLatticeSpacing(v, m);
  const double sigma = options.sigma > 0.0 ? options.sigma : 0.05 * a;
  const int nz = n - 1;
  std::vector<double> z;
  if (initial) {
    z = *initial;
    if (static_cast<int>(z.size()) != nz) {
      throw InvalidInput("initial configuration has the wrong length");
    }
    RescaleToLength(&z, v.z_max(), length);
  } else {
    z.assign(nz, a);
    RescaleToLength(&z, v.z_max(), length);
  }
  if (!std::isfinite(ChainEnergy(v, m, z))) {
    throw InvalidInput("initial configuration has infinite energy");
  }
  const double floor = std::max(v.r_hc(), 0.0);
  // Crack threshold for the per-sweep observable; z_max is a neutral choice
  // since only the autocorrelation of the count is used.
  const double count_threshold = 2.0 * v.z_max();
  long steps_since_fix = 0;

  auto pair_density = [&](double x, double s) {
    return (NormalDensity(x, a, sigma) + NormalDensity(x, s - a, sigma) +
            1.0 / s) /
           3.0;
  };

  auto step = [&]() -> bool {
    if (nz < 2) return false;
    // Rounding in the pair updates is swept back into the largest spacing
    // once per sweep so that the total stays pinned.
    if (++steps_since_fix >= nz) {
      steps_since_fix = 0;
      auto it = std::max_element(z.begin(), z.end());
      *it += length - Sum(z);
    }
    const int i = static_cast<int>(rng.Below(nz));
    int j = static_cast<int>(rng.Below(nz - 1));
    if (j >= i) ++j;
    const double zi = z[i];
    const double zj = z[j];
    const double u = rng.Uniform();
    double new_i, new_j;
    double log_hastings = 0.0;
    if (u < options.swap_probability) {
      new_i = zj;
      new_j = zi;
    } else if (u < options.swap_probability + options.jump_probability) {
      const double s = zi + zj;
      const double pick = rng.Uniform();
      double x;
      if (pick < 1.0 / 3.0) {
        x = a + sigma * rng.Normal();
      } else if (pick < 2.0 / 3.0) {
        x = s - a + sigma * rng.Normal();
      } else {
        x = rng.Uniform(0.0, s);
      }
      new_i = x;
      new_j = s - x;
      if (!(new_i > floor) || !(new_j > floor)) return false;
      log_hastings = std::log(pair_density(zi, s)) -
                     std::log(pair_density(x, s));
    } else {
      const double delta = sigma * rng.Normal();
      new_i = zi + delta;
      new_j = zj - delta;
    }
    if (!(new_i > floor) || !(new_j > floor)) return false;
    const double e_old = PairWindowEnergy(v, m, z, i, j);
    z[i] = new_i;
    z[j] = new_j;
    const double e_new = PairWindowEnergy(v, m, z, i, j);
    double log_ratio = -kInfinity;
    if (std::isfinite(e_new)) log_ratio = -beta * (e_new - e_old) + log_hastings;
    if (log_ratio >= 0.0 || rng.Uniform() < std::exp(log_ratio)) return true;
    z[i] = zi;
    z[j] = zj;
    return false;
  };
  auto observable = [&]() {
    return static_cast<double>(CountClusters(z, count_threshold));
  };
  return RunChain(options, SampleOrigin::kMcmcCanonical, rng, z, sink, step,
                  observable);
}

// --- Crack statistics -------------------------------------------------------

std::vector<double> CrackStatistics::ClusterLaw() const {
  std::vector<double> law(cluster_counts.size(), 0.0);
  const double total = Sum(cluster_counts);
  if (total <= 0.0) return law;
  for (size_t k = 0; k < law.size(); ++k) law[k] = cluster_counts[k] / total;
  return law;
}

CrackStatistics ComputeCrackStatistics(const std::vector<double>& spacings,
                                       double R, std::optional<double> q,
                                       std::optional<double> beta_p) {
  CrackStatistics stats;
  const int n = static_cast<int>(spacings.size()) + 1;
  stats.cluster_counts.assign(n + 1, 0.0);
  int start = 1;  // first atom of the current cluster
  for (int b = 1; b <= n - 1; ++b) {
    const double z = spacings[b - 1];
    if (z >= R) {
      stats.crack_indices.push_back(b);
      stats.crack_excesses.push_back(z - R);
      stats.cluster_counts[b - start + 1] += 1.0;
      start = b + 1;
    }
  }
  stats.cluster_counts[n - start + 1] += 1.0;
  stats.M = static_cast<int>(stats.crack_indices.size()) + 1;
  stats.crack_law_empty = stats.crack_excesses.empty();
  if (q) {
    stats.tv_geom = BinnedTotalVariationToGeometric(stats.cluster_counts,
                                                    1.0 / (1.0 + *q));
  }
  if (beta_p && !stats.crack_law_empty) {
    stats.tv_exp =
        BinnedTotalVariationToExponential(stats.crack_excesses, *beta_p);
  }
  return stats;
}

void RescaleToLength(std::vector<double>* spacings, double R, double length) {
  std::vector<double>& z = *spacings;
  if (z.empty()) return;
  const double current = Sum(z);
  const double diff = length - current;
  double excess = 0.0;
  int cracks = 0;
  for (double x : z) {
    if (x >= R) {
      excess += x - R;
      ++cracks;
    }
  }
  if (cracks > 0 && excess + diff >= 0.0) {
    for (double& x : z) {
      if (x < R) continue;
      x += excess > 0.0 ? diff * (x - R) / excess : diff / cracks;
    }
  } else if (diff > 0.0) {
    *std::max_element(z.begin(), z.end()) += diff;
  } else {
    const double scale = length / current;
    for (double& x : z) x *= scale;
  }
  *std::max_element(z.begin(), z.end()) += length - Sum(z);
}

}  // namespace crackchain
