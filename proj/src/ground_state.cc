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

#include "crackchain/ground_state.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include <Eigen/Dense>

#include "crackchain/errors.h"
#include "crackchain/rng.h"

namespace crackchain {
namespace {

Eigen::MatrixXd ChainEnergyHessian(const PairPotential& v, int m,
                                   const std::vector<double>& z) {
  const int n = static_cast<int>(z.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int len = 1; len <= m && i + len - 1 < n; ++len) {
      s += z[i + len - 1];
      const double d2 = v.SecondDerivative(s);
      h.block(i, i, len, len).array() += d2;
    }
  }
  return h;
}

struct LocalResult {
  std::vector<double> z;
  double energy = kInfinity;
  bool converged = false;
  int iterations = 0;
  std::vector<double> history;
};

double ProjectedGradientNorm(const std::vector<double>& z,
                             const std::vector<double>& g, double lo,
                             double hi) {
  double norm = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    // Components pushing against an active bound do not count.
    if (z[i] <= lo && g[i] > 0.0) continue;
    if (z[i] >= hi && g[i] < 0.0) continue;
    norm = std::max(norm, std::abs(g[i]));
  }
  return norm;
}

LocalResult NewtonDescent(const PairPotential& v, int m, std::vector<double> z,
                          const MinimizeOptions& options) {
  const double lo = v.r_hc() + 1e-6;
  const double hi = 4.0 * v.z_max();
  for (double& x : z) x = std::clamp(x, lo, hi);
  LocalResult out;
  double energy = ChainEnergy(v, m, z);
  if (!std::isfinite(energy)) {
    throw ValidationError("MinimizeEnergy: non-finite energy at start");
  }
  out.history.push_back(energy);
  const int n = static_cast<int>(z.size());
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const std::vector<double> g = ChainEnergyGradient(v, m, z);
    if (ProjectedGradientNorm(z, g, lo, hi) < options.gradient_tolerance) {
      out.converged = true;
      break;
    }
    Eigen::MatrixXd h = ChainEnergyHessian(v, m, z);
    Eigen::VectorXd grad = Eigen::Map<const Eigen::VectorXd>(g.data(), n);
    Eigen::VectorXd dir;
    double shift = 0.0;
    const double scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::MatrixXd hs = h;
      hs.diagonal().array() += shift;
      Eigen::LLT<Eigen::MatrixXd> llt(hs);
      if (llt.info() == Eigen::Success) {
        dir = -llt.solve(grad);
        break;
      }
      shift = (shift == 0.0) ? 1e-8 * scale : 4.0 * shift;
    }
    if (dir.size() != n) dir = -grad;
    // Backtracking on the projected step keeps the energy non-increasing.
    double t = 1.0;
    bool moved = false;
    std::vector<double> trial(n);
    for (int bt = 0; bt < 60; ++bt) {
      for (int i = 0; i < n; ++i) trial[i] = std::clamp(z[i] + t * dir[i], lo, hi);
      const double e_trial = ChainEnergy(v, m, trial);
      if (e_trial <= energy) {
        moved = trial != z;
        z = trial;
        energy = e_trial;
        break;
      }
      t *= 0.5;
    }
    out.history.push_back(energy);
    if (!moved) {
      // No representable decrease left: the iterate is stationary to
      // machine precision.
      const double gn = ProjectedGradientNorm(z, ChainEnergyGradient(v, m, z), lo, hi);
      out.converged = gn < 1e-8;
      break;
    }
  }
  out.iterations = iter;
  out.z = std::move(z);
  out.energy = energy;
  return out;
}

}  // namespace

double ChainEnergy(const PairPotential& v, int m,
                   const std::vector<double>& z) {
  const int n = static_cast<int>(z.size());
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int len = 1; len <= m && i + len - 1 < n; ++len) {
      s += z[i + len - 1];
      e += v(s);
    }
  }
  return e;
}

std::vector<double> ChainEnergyGradient(const PairPotential& v, int m,
                                        const std::vector<double>& z) {
  const int n = static_cast<int>(z.size());
  std::vector<double> g(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int len = 1; len <= m && i + len - 1 < n; ++len) {
      s += z[i + len - 1];
      const double d = v.Derivative(s);
      for (int j = i; j < i + len; ++j) g[j] += d;
    }
  }
  return g;
}

GroundStateReport MinimizeEnergy(const PairPotential& v, int m, int n,
                                 const MinimizeOptions& options) {
  if (n < 2) throw InvalidInput("MinimizeEnergy: N must be >= 2");
  if (m < 1) throw InvalidInput("MinimizeEnergy: m must be >= 1");
  GroundStateReport report;
  report.n = n;
  double a = v.z_max();
  bool have_a = false;
  try {
    const CauchyBornResult cb = FindLatticeConstant(v, m);
    a = cb.a;
    have_a = true;
    report.e0_estimate = cb.e0;
    for (int k = 1; k <= m; ++k) report.clamped_surface_energy -= k * v(k * a);
  } catch (const ValidationError&) {
    // Relaxed potentials without a well: keep the nominal start.
  }
  std::vector<std::vector<double>> starts;
  starts.emplace_back(n - 1, a);
  if (have_a) starts.emplace_back(n - 1, v.z_max());
  Rng rng(SplitSeed(options.seed, static_cast<uint64_t>(n)));
  for (int s = 0; s < options.perturbed_starts; ++s) {
    std::vector<double> z(n - 1);
    for (double& x : z) x = a * (1.0 + options.perturbation * rng.Normal());
    starts.push_back(std::move(z));
  }
  LocalResult best;
  for (const auto& start : starts) {
    LocalResult r = NewtonDescent(v, m, start, options);
    if (r.energy < best.energy) best = std::move(r);
  }
  report.energy = best.energy;
  report.spacings = std::move(best.z);
  report.converged = best.converged;
  report.iterations = best.iterations;
  report.energy_history = std::move(best.history);
  if (have_a) report.e_surf_estimate = report.energy - n * report.e0_estimate;
  return report;
}

SurfaceEstimate EstimateBulkAndSurface(const PairPotential& v, int m,
                                       int n_max,
                                       const MinimizeOptions& options) {
  if (n_max < 10) throw InvalidInput("EstimateBulkAndSurface: N_max < 10");
  SurfaceEstimate est;
  const CauchyBornResult cb = FindLatticeConstant(v, m);
  est.a = cb.a;
  est.e0 = cb.e0;
  for (int k = 1; k <= m; ++k) est.clamped_surface_energy -= k * v(k * cb.a);
  for (int n = 2; n <= n_max; ++n) {
    GroundStateReport r = MinimizeEnergy(v, m, n, options);
    est.excess.push_back(r.energy - n * est.e0);
    est.reports.push_back(std::move(r));
  }
  const int window = 5;
  const auto tail_begin = est.excess.end() - window;
  const auto [lo, hi] = std::minmax_element(tail_begin, est.excess.end());
  est.spread = *hi - *lo;
  est.e_surf = est.excess.back();
  est.tail_flagged = est.spread > 1e-6;
  for (auto& r : est.reports) r.e_surf_estimate = est.e_surf;
  return est;
}

bool InequalityLedger::AllPassed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const InequalityCheck& c) { return c.passed; });
}

InequalityLedger CheckEnergyInequalities(const std::vector<double>& energies,
                                         double e0, double e_surf,
                                         double tolerance) {
  InequalityLedger ledger;
  {
    InequalityCheck c{"E_n - n e0 >= |e0|", true, kInfinity, -1};
    for (size_t k = 1; k < energies.size(); ++k) {
      const int n = static_cast<int>(k) + 1;
      const double margin = energies[k] - n * e0 - std::abs(e0);
      c.margin = std::min(c.margin, margin);
      if (margin < -tolerance && c.passed) {
        c.passed = false;
        c.first_violation = n;
      }
    }
    ledger.checks.push_back(c);
  }
  {
    InequalityCheck c{"|e0| > e_surf / 2", false, 0.0, -1};
    c.margin = std::abs(e0) - 0.5 * e_surf;
    c.passed = c.margin > 0.0;
    ledger.checks.push_back(c);
  }
  {
    // s_n = E_{n+1} = energies[n]; require s_{j+k} <= s_j + s_k.
    InequalityCheck c{"subadditivity of E_{n+1}", true, kInfinity, -1};
    const int count = static_cast<int>(energies.size()) - 1;
    for (int total = 2; total <= count && c.passed; ++total) {
      for (int j = 1; j < total; ++j) {
        const double margin = energies[j] + energies[total - j] - energies[total];
        c.margin = std::min(c.margin, margin);
        if (margin < -tolerance) {
          c.passed = false;
          c.first_violation = total;
          break;
        }
      }
    }
    ledger.checks.push_back(c);
  }
  return ledger;
}

void WriteGroundStateCsv(const std::string& path, const SurfaceEstimate& est,
                         const std::vector<std::string>& metadata) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  for (const auto& line : metadata) out << "# " << line << "\n";
  out << "N,E_N,E_N_minus_N_e0,min_spacing,max_spacing\n";
  out << std::setprecision(17);
  for (size_t i = 0; i < est.reports.size(); ++i) {
    const auto& r = est.reports[i];
    const auto [lo, hi] = std::minmax_element(r.spacings.begin(), r.spacings.end());
    out << r.n << "," << r.energy << "," << est.excess[i] << "," << *lo << ","
        << *hi << "\n";
  }
}

}  // namespace crackchain
