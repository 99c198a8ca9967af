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

#include "crackchain/config.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "crackchain/errors.h"
#include "crackchain/verify.h"

namespace crackchain {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double ToDouble(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw InvalidInput("config key '" + key + "': '" + value +
                       "' is not a number");
  }
}

long ToLong(const std::string& key, const std::string& value) {
  const double x = ToDouble(key, value);
  if (x != static_cast<double>(static_cast<long>(x))) {
    throw InvalidInput("config key '" + key + "': '" + value +
                       "' is not an integer");
  }
  return static_cast<long>(x);
}

uint64_t ToUnsigned(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const unsigned long long x = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw InvalidInput("config key '" + key + "': '" + value +
                       "' is not an unsigned integer");
  }
}

std::string FormatNumber(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

struct KeyHandler {
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)>
      set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::map<std::string, KeyHandler>& Handlers() {
  using C = ExperimentConfig;
  auto number = [](double C::*field) {
    return KeyHandler{
        [field](C& c, const std::string& k, const std::string& v) {
          c.*field = ToDouble(k, v);
        },
        [field](const C& c) { return FormatNumber(c.*field); }};
  };
  auto integer = [](int C::*field) {
    return KeyHandler{
        [field](C& c, const std::string& k, const std::string& v) {
          c.*field = static_cast<int>(ToLong(k, v));
        },
        [field](const C& c) { return std::to_string(c.*field); }};
  };
  auto long_integer = [](long C::*field) {
    return KeyHandler{
        [field](C& c, const std::string& k, const std::string& v) {
          c.*field = ToLong(k, v);
        },
        [field](const C& c) { return std::to_string(c.*field); }};
  };
  auto text = [](std::string C::*field) {
    return KeyHandler{
        [field](C& c, const std::string&, const std::string& v) {
          c.*field = v;
        },
        [field](const C& c) { return c.*field; }};
  };
  auto optional = [](std::optional<double> C::*field, const char* unset) {
    return KeyHandler{
        [field, unset](C& c, const std::string& k, const std::string& v) {
          if (v.empty() || v == unset) {
            (c.*field).reset();
          } else {
            c.*field = ToDouble(k, v);
          }
        },
        [field, unset](const C& c) {
          return (c.*field) ? FormatNumber(*(c.*field)) : std::string(unset);
        }};
  };
  static const std::map<std::string, KeyHandler> handlers = {
      {"potential", text(&C::potential)},
      {"potential.r_hc", number(&C::r_hc)},
      {"potential.z_min", number(&C::z_min)},
      {"potential.s", number(&C::s)},
      {"potential.r_on", number(&C::r_on)},
      {"potential.r_cut", number(&C::r_cut)},
      {"potential.diameter", number(&C::diameter)},
      {"potential.file", text(&C::potential_file)},
      {"m", integer(&C::m)},
      {"beta",
       KeyHandler{[](C& c, const std::string&, const std::string& v) {
                    c.beta = ParseNumberList(v);
                  },
                  [](const C& c) {
                    std::string out;
                    for (size_t i = 0; i < c.beta.size(); ++i) {
                      if (i) out += ",";
                      out += FormatNumber(c.beta[i]);
                    }
                    return out;
                  }}},
      {"pressure", optional(&C::pressure, "none")},
      {"ell", optional(&C::ell, "none")},
      {"N", integer(&C::n)},
      {"R", optional(&C::R, "auto")},
      {"node_count", integer(&C::node_count)},
      {"tail_node_count", integer(&C::tail_node_count)},
      {"ground_state.n_max", integer(&C::ground_state_n_max)},
      {"ensemble", text(&C::ensemble)},
      {"mcmc.steps", long_integer(&C::mcmc_steps)},
      {"mcmc.burn_in", number(&C::mcmc_burn_in)},
      {"mcmc.thin", long_integer(&C::mcmc_thin)},
      {"mcmc.sigma", number(&C::mcmc_sigma)},
      {"mcmc.jump_probability", number(&C::mcmc_jump_probability)},
      {"mcmc.swap_probability", number(&C::mcmc_swap_probability)},
      {"replicas", integer(&C::replicas)},
      {"verify.points", long_integer(&C::verify_points)},
      {"verify.N", integer(&C::verify_n)},
      {"seed",
       KeyHandler{[](C& c, const std::string& k, const std::string& v) {
                    c.seed = ToUnsigned(k, v);
                  },
                  [](const C& c) { return std::to_string(c.seed); }}},
      {"threads", integer(&C::threads)},
      {"out", text(&C::out)},
  };
  return handlers;
}

}  // namespace

int LevenshteinDistance(const std::string& a, const std::string& b) {
  std::vector<int> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    int diagonal = row[0];
    row[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      const int above = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diagonal = above;
    }
  }
  return row[b.size()];
}

std::vector<double> ParseNumberList(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    out.push_back(ToDouble("list", item));
  }
  if (out.empty()) throw InvalidInput("empty number list '" + text + "'");
  return out;
}

std::vector<std::string> ExperimentConfig::Keys() {
  std::vector<std::string> keys;
  for (const auto& [key, handler] : Handlers()) keys.push_back(key);
  return keys;
}

void ExperimentConfig::Set(const std::string& key, const std::string& value) {
  const auto& handlers = Handlers();
  const auto it = handlers.find(key);
  if (it == handlers.end()) {
    std::string nearest;
    int best = 1 << 30;
    for (const auto& [name, handler] : handlers) {
      const int d = LevenshteinDistance(key, name);
      if (d < best) {
        best = d;
        nearest = name;
      }
    }
    throw InvalidInput("unknown config key '" + key + "'; did you mean '" +
                       nearest + "'?");
  }
  it->second.set(*this, key, value);
}

ExperimentConfig ExperimentConfig::Parse(const std::string& text) {
  ExperimentConfig config;
  std::stringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput("config line " + std::to_string(line_number) +
                         ": expected key = value");
    }
    config.Set(Trim(trimmed.substr(0, eq)), Trim(trimmed.substr(eq + 1)));
  }
  return config;
}

ExperimentConfig ExperimentConfig::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

std::string ExperimentConfig::Echo() const {
  std::string out;
  for (const auto& [key, handler] : Handlers()) {
    out += key + " = " + handler.get(*this) + "\n";
  }
  return out;
}

std::string ExperimentConfig::Hash() const { return ConfigHash(Echo()); }

void ExperimentConfig::Validate() const {
  static const std::vector<std::string> kinds = {"lj", "spline", "hard-rod",
                                                 "tabulated"};
  if (std::find(kinds.begin(), kinds.end(), potential) == kinds.end()) {
    throw InvalidInput("potential must be one of lj, spline, hard-rod, "
                       "tabulated");
  }
  if (potential == "tabulated" && potential_file.empty()) {
    throw InvalidInput("a tabulated potential needs potential.file");
  }
  if (m != 1 && m != 2) throw InvalidInput("m must be 1 or 2");
  if (beta.empty()) throw InvalidInput("beta grid is empty");
  for (double b : beta) {
    if (!(b > 0.0)) throw InvalidInput("beta values must be positive");
  }
  if (pressure && ell) {
    throw InvalidInput("set exactly one of pressure and ell, not both");
  }
  if (pressure && !(*pressure >= 0.0)) {
    throw InvalidInput("pressure must be non-negative");
  }
  if (n < 2) throw InvalidInput("N must be at least 2");
  if (node_count < 64) throw InvalidInput("node_count must be at least 64");
  if (tail_node_count < 8) {
    throw InvalidInput("tail_node_count must be at least 8");
  }
  if (ground_state_n_max < 10) {
    throw InvalidInput("ground_state.n_max must be at least 10");
  }
  static const std::vector<std::string> ensembles = {"exact", "npt",
                                                     "canonical"};
  if (std::find(ensembles.begin(), ensembles.end(), ensemble) ==
      ensembles.end()) {
    throw InvalidInput("ensemble must be one of exact, npt, canonical");
  }
  if (mcmc_steps < 1) throw InvalidInput("mcmc.steps must be positive");
  if (!(mcmc_burn_in >= 0.0 && mcmc_burn_in < 1.0)) {
    throw InvalidInput("mcmc.burn_in must lie in [0, 1)");
  }
  if (mcmc_jump_probability < 0.0 || mcmc_swap_probability < 0.0 ||
      mcmc_jump_probability + mcmc_swap_probability > 1.0) {
    throw InvalidInput("move probabilities must be non-negative with sum <= 1");
  }
  if (replicas < 1) throw InvalidInput("replicas must be at least 1");
  if (threads < 1) throw InvalidInput("threads must be at least 1");
  if (verify_n < 2 || verify_n > 16) {
    throw InvalidInput("verify.N must lie in [2, 16]");
  }
}

PairPotential ExperimentConfig::MakePotential() const {
  if (potential == "lj") return PairPotential::LennardJones(r_hc, z_min);
  if (potential == "spline") {
    return PairPotential::Spline(r_hc, z_min, r_on, r_cut);
  }
  if (potential == "hard-rod") return PairPotential::HardRod(diameter);
  if (potential == "tabulated") {
    return PairPotential::FromFile(potential_file, std::nullopt, std::nullopt,
                                   s);
  }
  throw InvalidInput("unknown potential '" + potential + "'");
}

TransferOptions ExperimentConfig::MakeTransferOptions(bool full_line) const {
  TransferOptions options;
  options.node_count = node_count;
  options.tail_node_count = tail_node_count;
  options.full_line = full_line;
  return options;
}

double ExperimentConfig::ResolveR(const PairPotential& v, double e_surf) const {
  if (R) {
    if (!(*R >= v.z_max())) throw InvalidInput("R must be at least z_max");
    return *R;
  }
  if (v.compact_support()) return std::max(v.z_max(), *v.support_radius());
  try {
    return SelfConsistentTruncationRadius(v, m, e_surf);
  } catch (const std::exception&) {
    return v.z_max();
  }
}

}  // namespace crackchain
