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

#ifndef CRACKCHAIN_POTENTIAL_H_
#define CRACKCHAIN_POTENTIAL_H_

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace crackchain {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class PotentialKind { kLennardJones, kSpline, kHardRod, kTabulated };

std::string PotentialKindName(PotentialKind kind);

// A hard-core pair interaction v(r) together with the structural constants
// that the analysis relies on. Instances are immutable and cheap to copy.
//
// Lennard-Jones: v(r) = r^-12 - r^-6 for r > r_hc, +inf otherwise.
// Spline: the Lennard-Jones form multiplied by a C2 quintic switch that
//   falls from 1 at r_on to 0 at r_cut, so v has compact support.
// Hard rod: v = +inf on (0, d] and 0 beyond. It violates the shape
//   assumptions and is admitted only in relaxed validation mode.
// Tabulated: values read from (r, v) pairs, interpolated linearly in log r,
//   extended by v_last (r_last / r)^s beyond the last node (or by zero when
//   v_last is zero) and by +inf at and below r_hc.
class PairPotential {
 public:
  static PairPotential LennardJones(double r_hc = 0.5, double z_min = 0.95);
  static PairPotential Spline(double r_hc = 0.5, double z_min = 0.95,
                              double r_on = 1.4, double r_cut = 1.8);
  static PairPotential HardRod(double diameter = 1.0);
  // r and v must have equal length >= 2 with strictly increasing r > 0.
  // r_hc defaults to the first node. z_min defaults to the midpoint between
  // r_hc and the tabulated minimizer.
  static PairPotential Tabulated(std::vector<double> r, std::vector<double> v,
                                 std::optional<double> r_hc = std::nullopt,
                                 std::optional<double> z_min = std::nullopt,
                                 double s = 6.0);
  // Reads a whitespace-separated two-column file; '#' starts a comment.
  static PairPotential FromFile(const std::string& path,
                                std::optional<double> r_hc = std::nullopt,
                                std::optional<double> z_min = std::nullopt,
                                double s = 6.0);

  // v(r). Throws InvalidInput for r <= 0; returns +inf for r <= r_hc.
  double Evaluate(double r) const;
  double operator()(double r) const { return Evaluate(r); }
  // v'(r) and v''(r) for r > r_hc. Tabulated potentials return the
  // piecewise derivatives of the interpolant.
  double Derivative(double r) const;
  double SecondDerivative(double r) const;

  PotentialKind kind() const { return kind_; }
  double r_hc() const { return r_hc_; }
  double s() const { return s_; }
  double alpha1() const { return alpha1_; }
  double alpha2() const { return alpha2_; }
  double z_min() const { return z_min_; }
  double z_max() const { return z_max_; }
  // sup supp(v) for compactly supported potentials, nullopt otherwise.
  std::optional<double> support_radius() const { return support_radius_; }
  bool compact_support() const { return support_radius_.has_value(); }
  // True for the hard rod, which only satisfies relaxed validation.
  bool relaxed_only() const { return kind_ == PotentialKind::kHardRod; }
  // Short human-readable description with all parameters.
  std::string Describe() const;

  PairPotential& set_alpha1(double a) { alpha1_ = a; return *this; }
  PairPotential& set_alpha2(double a) { alpha2_ = a; return *this; }

 private:
  struct Table {
    std::vector<double> log_r;
    std::vector<double> v;
  };

  PairPotential() = default;
  double EvaluateTable(double r, int derivative) const;

  PotentialKind kind_ = PotentialKind::kLennardJones;
  double r_hc_ = 0.5;
  double s_ = 6.0;
  double alpha1_ = 1.0;
  double alpha2_ = 156.0;
  double z_min_ = 0.95;
  double z_max_ = 0.0;
  std::optional<double> support_radius_;
  double r_on_ = 0.0;
  double r_cut_ = 0.0;
  std::shared_ptr<const Table> table_;
};

// W(r) = sum_{k=1}^m v(k r). Returns +inf for r <= r_hc.
double CauchyBorn(const PairPotential& v, int m, double r);
double CauchyBornDerivative(const PairPotential& v, int m, double r);
double CauchyBornSecondDerivative(const PairPotential& v, int m, double r);

struct CauchyBornResult {
  double a = 0.0;
  double e0 = 0.0;
  int m = 0;
};

// Minimizer of W on [z_min, z_max]. The interval is scanned on
// `grid_points` cells for the lowest W, and W' is bisected to machine
// precision inside the bracketing cell. Throws ValidationError when W' has
// no sign change there.
CauchyBornResult FindLatticeConstant(const PairPotential& v, int m,
                                     int grid_points = 400);

struct ValidationItem {
  std::string id;      // "structure", "i", ..., "vi"
  std::string name;
  bool passed = false;
  std::string detail;
  std::optional<double> first_violation;  // grid point where it failed
  double margin = 0.0;                    // worst value of the checked quantity
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  bool relaxed_only = false;
  bool AllPassed() const;
  const ValidationItem& Item(const std::string& id) const;
};

// Checks the shape, growth and hard-core assumptions on a uniform grid of
// `grid_points` points. Infinite sums are truncated once the power-law
// envelope bounds the remainder by 1e-12, and that bound is charged against
// the checked inequality.
ValidationReport ValidateAssumptions(const PairPotential& v, int m,
                                     int grid_points = 2000);

// Value of v(z) + v(z_max) - 2 alpha1 sum_{n>=2} (n z)^-s with the tail
// bound subtracted; the growth condition asks for it to be positive when
// r_hc < z < z_min.
double GrowthInequalityValue(const PairPotential& v, double z);

// v''(z_max) + sum_{n>=2} n^2 v''(n z_min) with the tail bound subtracted.
double CurvatureInequalityValue(const PairPotential& v);

// Constant C in the across-crack bound C r^-(s-2): the m(m+1)/2 pair terms
// that span one crack of length >= R, each bounded below by -alpha1 r^-s.
double AcrossCrackConstant(const PairPotential& v, int m, double R);

// Smallest R >= z_max with C / R^(s-2) < e_surf / 2, or the support radius
// for compactly supported potentials. Throws InvalidInput for e_surf <= 0
// or C <= 0.
double MinTruncationRadius(const PairPotential& v, double e_surf, double C);
// Same criterion for an unbounded-support potential given by (z_max, s).
double MinTruncationRadius(double z_max, double s, double e_surf, double C);

// Smallest R >= z_max for which the across-crack constant evaluated at R
// itself satisfies the criterion above.
double SelfConsistentTruncationRadius(const PairPotential& v, int m,
                                      double e_surf);

}  // namespace crackchain

#endif  // CRACKCHAIN_POTENTIAL_H_
