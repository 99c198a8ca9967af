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

#ifndef CRACKCHAIN_CONFIG_H_
#define CRACKCHAIN_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crackchain/potential.h"
#include "crackchain/transfer_operator.h"

namespace crackchain {

// Experiment settings read from flat `key = value` text. Lines starting with
// `#` are comments; dotted keys group related settings (`mcmc.steps`).
struct ExperimentConfig {
  // Potential.
  std::string potential = "lj";  // lj | spline | hard-rod | tabulated
  double r_hc = 0.5;
  double z_min = 0.95;
  double s = 6.0;
  double r_on = 1.4;
  double r_cut = 1.8;
  double diameter = 1.0;
  std::string potential_file;
  int m = 2;

  // Thermodynamic state.
  std::vector<double> beta = {2.5, 5.0, 10.0, 20.0, 40.0};
  std::optional<double> pressure;
  std::optional<double> ell;
  int n = 2000;
  std::optional<double> R = 2.5;  // unset ("auto") means self-consistent

  // Numerics.
  int node_count = 256;
  int tail_node_count = 96;
  int ground_state_n_max = 50;

  // Sampling.
  std::string ensemble = "exact";  // exact | npt | canonical
  long mcmc_steps = 1000000;
  double mcmc_burn_in = 0.1;
  long mcmc_thin = 0;
  double mcmc_sigma = 0.0;
  double mcmc_jump_probability = 0.2;
  double mcmc_swap_probability = 0.1;
  int replicas = 1;

  // Verification.
  long verify_points = 1000000;
  int verify_n = 6;

  uint64_t seed = 20260101;
  int threads = 1;
  std::string out;

  // Parses text, applying keys on top of the defaults. Throws InvalidInput
  // for unknown keys (naming the closest valid key) or malformed values.
  static ExperimentConfig Parse(const std::string& text);
  static ExperimentConfig FromFile(const std::string& path);

  void Set(const std::string& key, const std::string& value);
  // Every key with its resolved value, one per line, sorted by key.
  std::string Echo() const;
  // FNV-1a hash of Echo().
  std::string Hash() const;

  // Consistency of the settings; throws InvalidInput.
  void Validate() const;

  PairPotential MakePotential() const;
  TransferOptions MakeTransferOptions(bool full_line = false) const;
  // R if set, otherwise the self-consistent truncation radius computed from
  // the ground-state surface energy (z_max when that fails).
  double ResolveR(const PairPotential& v, double e_surf) const;

  static std::vector<std::string> Keys();
};

// Edit distance, used to suggest key names.
int LevenshteinDistance(const std::string& a, const std::string& b);

// Comma-separated list of numbers.
std::vector<double> ParseNumberList(const std::string& text);

}  // namespace crackchain

#endif  // CRACKCHAIN_CONFIG_H_
