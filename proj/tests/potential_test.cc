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


#include "crackchain/potential.h"

#include <cmath>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "crackchain/errors.h"

namespace crackchain {
namespace {

double LjOracle(double r) { return std::pow(r, -12) - std::pow(r, -6); }

// Central difference of f at x with step h.
template <typename F>
double CentralDifference(F f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

TEST(LennardJonesTest, ValuesAndStructuralConstants) {
  const PairPotential v = PairPotential::LennardJones();
  EXPECT_DOUBLE_EQ(v(1.0), 0.0);
  EXPECT_NEAR(v.z_max(), std::pow(2.0, 1.0 / 6.0), 1e-15);
  EXPECT_NEAR(v(v.z_max()), -0.25, 1e-15);
  EXPECT_NEAR(v(1.7), LjOracle(1.7), 1e-15);
  EXPECT_EQ(v(0.5), kInfinity);
  EXPECT_EQ(v(0.3), kInfinity);
  EXPECT_THROW(v(0.0), InvalidInput);
  EXPECT_DOUBLE_EQ(v.s(), 6.0);
  EXPECT_FALSE(v.compact_support());
}

TEST(LennardJonesTest, DerivativesMatchFiniteDifferences) {
  const PairPotential v = PairPotential::LennardJones();
  for (double r : {0.8, 1.0, 1.12, 1.5, 2.3}) {
    EXPECT_NEAR(v.Derivative(r), CentralDifference(LjOracle, r),
                1e-7 * (1.0 + std::abs(v.Derivative(r))));
    EXPECT_NEAR(
        v.SecondDerivative(r),
        CentralDifference([&](double x) { return v.Derivative(x); }, r),
        1e-6 * (1.0 + std::abs(v.SecondDerivative(r))));
  }
  EXPECT_THROW(v.Derivative(0.4), InvalidInput);
}

TEST(SplineTest, MatchesLennardJonesInsideAndVanishesBeyondCut) {
  const PairPotential v = PairPotential::Spline();
  EXPECT_NEAR(v(1.2), LjOracle(1.2), 1e-15);
  EXPECT_NEAR(v(1.4), LjOracle(1.4), 1e-15);
  EXPECT_EQ(v(1.8), 0.0);
  EXPECT_EQ(v(2.5), 0.0);
  ASSERT_TRUE(v.compact_support());
  EXPECT_DOUBLE_EQ(*v.support_radius(), 1.8);
  // Halfway through the switch S = 1/2.
  EXPECT_NEAR(v(1.6), 0.5 * LjOracle(1.6), 1e-15);
}

TEST(SplineTest, IsTwiceContinuouslyDifferentiable) {
  const PairPotential v = PairPotential::Spline();
  for (double r : {1.4, 1.8}) {
    const double below = v.SecondDerivative(r - 1e-9);
    const double above = v.SecondDerivative(r + 1e-9);
    EXPECT_NEAR(below, above, 1e-6);
    EXPECT_NEAR(v.Derivative(r - 1e-9), v.Derivative(r + 1e-9), 1e-8);
  }
  for (double r : {1.45, 1.6, 1.75}) {
    EXPECT_NEAR(v.Derivative(r),
                CentralDifference([&](double x) { return v(x); }, r), 1e-8);
  }
  EXPECT_THROW(PairPotential::Spline(0.5, 0.95, 1.0, 1.8), InvalidInput);
}

TEST(HardRodTest, FlatBeyondDiameter) {
  const PairPotential v = PairPotential::HardRod(1.5);
  EXPECT_EQ(v(1.5), kInfinity);
  EXPECT_EQ(v(1.50001), 0.0);
  EXPECT_DOUBLE_EQ(v.r_hc(), 1.5);
  EXPECT_TRUE(v.relaxed_only());
  EXPECT_THROW(PairPotential::HardRod(0.0), InvalidInput);
}

TEST(TabulatedTest, InterpolatesLinearlyInLogR) {
  const PairPotential v =
      PairPotential::Tabulated({1.0, 2.0, 4.0}, {1.0, -1.0, -0.5});
  EXPECT_DOUBLE_EQ(v(2.0), -1.0);
  // Halfway in log r between 1 and 2 is sqrt(2).
  EXPECT_NEAR(v(std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(v(std::sqrt(8.0)), -0.75, 1e-15);
  // Power-law tail v_last (r_last / r)^s beyond the table.
  EXPECT_NEAR(v(8.0), -0.5 * std::pow(0.5, 6.0), 1e-15);
  EXPECT_EQ(v(1.0), kInfinity);
  EXPECT_DOUBLE_EQ(v.z_max(), 2.0);
  EXPECT_NEAR(v.Derivative(1.5), -2.0 / std::log(2.0) / 1.5, 1e-13);
}

TEST(TabulatedTest, ZeroLastValueGivesCompactSupport) {
  const PairPotential v =
      PairPotential::Tabulated({1.0, 1.2, 2.0}, {2.0, -1.0, 0.0});
  ASSERT_TRUE(v.compact_support());
  EXPECT_EQ(v(3.0), 0.0);
}

TEST(TabulatedTest, RejectsMalformedTables) {
  EXPECT_THROW(PairPotential::Tabulated({1.0}, {0.0}), InvalidInput);
  EXPECT_THROW(PairPotential::Tabulated({1.0, 1.0}, {0.0, 1.0}), InvalidInput);
  EXPECT_THROW(PairPotential::Tabulated({1.0, 2.0}, {0.0}), InvalidInput);
  EXPECT_THROW(PairPotential::Tabulated({-1.0, 2.0}, {0.0, 1.0}),
               InvalidInput);
}

TEST(TabulatedTest, FromFileSkipsComments) {
  const std::string path = ::testing::TempDir() + "/crackchain_table.dat";
  {
    std::ofstream out(path);
    out << "# r v\n0.9 2.0\n\n1.1 -0.9  # well\n1.5 -0.3\n2.0 -0.05\n";
  }
  const PairPotential v = PairPotential::FromFile(path);
  EXPECT_DOUBLE_EQ(v(1.1), -0.9);
  EXPECT_DOUBLE_EQ(v.r_hc(), 0.9);
  EXPECT_THROW(PairPotential::FromFile(path + ".missing"), InvalidInput);
}

TEST(CauchyBornTest, LatticeConstantHasClosedFormForLennardJones) {
  const PairPotential v = PairPotential::LennardJones();
  // W(r) = (1 + 2^-12) r^-12 - (1 + 2^-6) r^-6 is minimized at
  // r^6 = 2 (1 + 2^-12) / (1 + 2^-6).
  const double c12 = 1.0 + std::pow(2.0, -12);
  const double c6 = 1.0 + std::pow(2.0, -6);
  const double a = std::pow(2.0 * c12 / c6, 1.0 / 6.0);
  const double e0 = c12 * std::pow(a, -12) - c6 * std::pow(a, -6);
  const CauchyBornResult m2 = FindLatticeConstant(v, 2);
  EXPECT_NEAR(m2.a, a, 1e-13);
  EXPECT_NEAR(m2.e0, e0, 1e-14);
  EXPECT_NEAR(CauchyBorn(v, 2, 1.3), LjOracle(1.3) + LjOracle(2.6), 1e-15);
  EXPECT_NEAR(CauchyBornDerivative(v, 2, a), 0.0, 1e-12);

  const CauchyBornResult m1 = FindLatticeConstant(v, 1);
  EXPECT_NEAR(m1.a, v.z_max(), 1e-13);
  EXPECT_NEAR(m1.e0, -0.25, 1e-15);
}

TEST(ValidationTest, LennardJonesDefaultsPassAllChecks) {
  const ValidationReport report =
      ValidateAssumptions(PairPotential::LennardJones(), 2);
  for (const ValidationItem& item : report.items) {
    EXPECT_TRUE(item.passed) << item.id << ": " << item.detail;
  }
  EXPECT_TRUE(report.AllPassed());
  EXPECT_FALSE(report.relaxed_only);
}

TEST(ValidationTest, ShapeViolationIsReported) {
  // A second well breaks the unique-minimum shape condition.
  const PairPotential v = PairPotential::Tabulated(
      {0.9, 1.0, 1.1, 1.3, 1.5, 1.8, 2.2},
      {5.0, -0.5, -1.0, -0.2, -0.8, -0.1, -0.01});
  const ValidationReport report = ValidateAssumptions(v, 1);
  EXPECT_FALSE(report.AllPassed());
  EXPECT_FALSE(report.Item("i").passed);
}

TEST(ValidationTest, HardRodUsesRelaxedMode) {
  const ValidationReport report =
      ValidateAssumptions(PairPotential::HardRod(), 1);
  EXPECT_TRUE(report.relaxed_only);
}

TEST(TruncationRadiusTest, SatisfiesItsDefiningInequality) {
  const PairPotential v = PairPotential::LennardJones();
  const double e_surf = 0.26565;
  const double R = SelfConsistentTruncationRadius(v, 2, e_surf);
  const double C = AcrossCrackConstant(v, 2, R);
  EXPECT_GE(R, v.z_max());
  EXPECT_LE(C * std::pow(R, -(v.s() - 2.0)), 0.5 * e_surf * (1 + 1e-9));
  // Slightly smaller radii violate it.
  const double smaller = 0.99 * R;
  EXPECT_GT(AcrossCrackConstant(v, 2, smaller) *
                std::pow(smaller, -(v.s() - 2.0)),
            0.5 * e_surf);
  EXPECT_THROW(MinTruncationRadius(v, 0.0, 1.0), InvalidInput);
  EXPECT_DOUBLE_EQ(
      MinTruncationRadius(PairPotential::Spline(), 0.2, 1.0), 1.8);
}

}  // namespace
}  // namespace crackchain
