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

#ifndef CRACKCHAIN_GROUND_STATE_H_
#define CRACKCHAIN_GROUND_STATE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "crackchain/potential.h"

namespace crackchain {

// U_N for a chain with the given N - 1 spacings and interaction range m:
// the sum of v over all windows of at most m consecutive spacings.
double ChainEnergy(const PairPotential& v, int m,
                   const std::vector<double>& spacings);

// Gradient of ChainEnergy with respect to the spacings. All spacings must be
// outside the hard core.
std::vector<double> ChainEnergyGradient(const PairPotential& v, int m,
                                        const std::vector<double>& spacings);

struct MinimizeOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-12;
  uint64_t seed = 12345;
  // Number of seeded random perturbations of the uniform start, in addition
  // to the uniform starts at a and at z_max.
  int perturbed_starts = 3;
  double perturbation = 0.02;
};

struct GroundStateReport {
  int n = 0;
  double energy = 0.0;
  std::vector<double> spacings;
  double e0_estimate = 0.0;
  double e_surf_estimate = 0.0;
  double clamped_surface_energy = 0.0;
  bool converged = false;
  int iterations = 0;
  // Energies of accepted iterates of the best start; non-increasing.
  std::vector<double> energy_history;
};

// Local minimizer of U_N over spacings in the box [r_hc + 1e-6, 4 z_max]
// by damped Newton steps with an analytic Hessian and backtracking, so the
// energy never increases. Runs the multistart set of MinimizeOptions and
// keeps the lowest energy. Potentials without a lattice constant (the hard
// rod) start from the uniform spacing z_max.
GroundStateReport MinimizeEnergy(const PairPotential& v, int m, int n,
                                 const MinimizeOptions& options = {});

struct SurfaceEstimate {
  double a = 0.0;
  double e0 = 0.0;
  double e_surf = 0.0;
  // max - min of E_N - N e0 over the last five N; the error bar of e_surf.
  double spread = 0.0;
  double clamped_surface_energy = 0.0;
  // True when the tail spread exceeds 1e-6.
  bool tail_flagged = false;
  std::vector<GroundStateReport> reports;  // N = 2 .. N_max
  std::vector<double> excess;              // E_N - N e0 for N = 2 .. N_max
};

// e0 = W(a) from the lattice constant, e_surf from E_{N_max} - N_max e0.
SurfaceEstimate EstimateBulkAndSurface(const PairPotential& v, int m,
                                       int n_max,
                                       const MinimizeOptions& options = {});

struct InequalityCheck {
  std::string name;
  bool passed = false;
  double margin = 0.0;
  int first_violation = -1;  // N (or n for subadditivity), -1 if none
};

struct InequalityLedger {
  std::vector<InequalityCheck> checks;
  bool AllPassed() const;
};

// energies[k] = E_{k+1}, so energies[0] = E_1 = 0 by convention. Checks
// E_n - n e0 >= |e0| for n >= 2, |e0| > e_surf / 2, and subadditivity
// E_{j+k+1} <= E_{j+1} + E_{k+1} of s_n = E_{n+1}.
InequalityLedger CheckEnergyInequalities(const std::vector<double>& energies,
                                         double e0, double e_surf,
                                         double tolerance = 1e-10);

// Writes N, E_N, E_N_minus_N_e0, min_spacing, max_spacing with `#` metadata
// lines in front of the header.
void WriteGroundStateCsv(const std::string& path, const SurfaceEstimate& est,
                         const std::vector<std::string>& metadata);

}  // namespace crackchain

#endif  // CRACKCHAIN_GROUND_STATE_H_
