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


#include "crackchain/defect_gas.h"

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <gtest/gtest.h>

#include "crackchain/errors.h"
#include "crackchain/potential.h"
#include "crackchain/transfer_operator.h"

namespace crackchain {
namespace {

// Root u of q sum_k (1 + f(k)) u^k = 1 with the geometric part summed in
// closed form, found by TOMS 748.
double RenewalRootOracle(double q, const std::vector<double>& f) {
  auto residual = [&](double u) {
    double sum = u / (1.0 - u);
    for (size_t k = 1; k <= f.size(); ++k) sum += f[k - 1] * std::pow(u, k);
    return q * sum - 1.0;
  };
  std::uintmax_t iterations = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      residual, 1e-12, 1.0 - 1e-12, boost::math::tools::eps_tolerance<double>(52),
      iterations);
  return 0.5 * (bracket.first + bracket.second);
}

// P(T = k) for k = 1 .. k_max from the oracle root.
std::vector<double> PmfOracle(double q, const std::vector<double>& f,
                              int k_max) {
  const double u = RenewalRootOracle(q, f);
  std::vector<double> pmf(k_max);
  for (int k = 1; k <= k_max; ++k) {
    const double fk = k <= static_cast<int>(f.size()) ? f[k - 1] : 0.0;
    pmf[k - 1] = q * (1.0 + fk) * std::pow(u, k);
  }
  return pmf;
}

TEST(DefectGasTest, IdealGasIdentitiesAreExact) {
  const DefectGasModel model =
      DefectGasModel::Solve(0.1, InteractionSeries::Zero());
  EXPECT_NEAR(model.u(), 1.0 / 1.1, 1e-12);
  EXPECT_NEAR(model.mu(), 11.0, 1e-12);
  // Geometric with success probability pi = q / (1 + q): (1 - pi) / pi^2.
  EXPECT_NEAR(model.var(), 110.0, 1e-9);
  EXPECT_EQ(model.epsilon(), 0.0);
  EXPECT_LT(model.RenewalResidual(), 1e-12);
  EXPECT_NEAR(CompareWithGeometric(model).tv_T, 0.0, 1e-12);
  EXPECT_NEAR(RateFunctions(model).J(0.1 / 1.1), 0.0, 1e-12);
}

TEST(DefectGasTest, FiniteInteractionMatchesOracleRoot) {
  const std::vector<double> f = {0.3, -0.2, 0.1, 0.05};
  const double q = 0.08;
  const DefectGasModel model =
      DefectGasModel::Solve(q, InteractionSeries::Finite(f));
  EXPECT_NEAR(model.u(), RenewalRootOracle(q, f), 1e-13);
  EXPECT_NEAR(model.epsilon(), q * 0.65, 1e-15);
  EXPECT_LT(model.RenewalResidual(), 1e-12);

  const std::vector<double> pmf = PmfOracle(q, f, 4000);
  double mass = 0.0;
  double mean = 0.0;
  double second = 0.0;
  for (int k = 1; k <= 4000; ++k) {
    EXPECT_NEAR(model.Pmf(k), pmf[k - 1], 1e-14);
    mass += pmf[k - 1];
    mean += k * pmf[k - 1];
    second += double(k) * k * pmf[k - 1];
  }
  EXPECT_NEAR(mass, 1.0, 1e-12);
  EXPECT_NEAR(model.mu(), mean, 1e-9 * mean);
  EXPECT_NEAR(model.var(), second - mean * mean, 1e-7 * model.var());
  EXPECT_NEAR(model.CumulativeMass(4000), 1.0, 1e-12);
}

TEST(DefectGasTest, CumulantGeneratingFunctionMatchesDirectSum) {
  const std::vector<double> f = {0.3, -0.2, 0.1};
  const DefectGasModel model =
      DefectGasModel::Solve(0.2, InteractionSeries::Finite(f));
  const std::vector<double> pmf = PmfOracle(0.2, f, 3000);
  for (double t : {-0.5, 0.0, 0.05, 0.1}) {
    double sum = 0.0;
    double sum_k = 0.0;
    for (int k = 1; k <= 3000; ++k) {
      sum += pmf[k - 1] * std::exp(t * k);
      sum_k += k * pmf[k - 1] * std::exp(t * k);
    }
    EXPECT_NEAR(model.Phi(t), std::log(sum), 1e-11);
    EXPECT_NEAR(model.PhiDerivative(t), sum_k / sum, 1e-9);
  }
  EXPECT_NEAR(model.Phi(0.0), 0.0, 1e-13);
  EXPECT_NEAR(model.t_max(), -std::log(model.u()), 1e-15);
}

TEST(RateFunctionTest, LegendreTransformOfPhi) {
  const DefectGasModel model = DefectGasModel::Solve(
      0.15, InteractionSeries::Finite({0.2, -0.1}));
  const RateFunctions rates(model);
  EXPECT_EQ(rates.I(0.5), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(rates.I(model.mu()), 0.0, 1e-10);
  // Brute-force sup over a fine t grid.
  for (double x : {2.0, 5.0, 12.0}) {
    double best = -1e300;
    for (int i = 0; i <= 200000; ++i) {
      const double t = -3.0 + (model.t_max() + 3.0) * i / 200001.0;
      best = std::max(best, t * x - model.Phi(t));
    }
    EXPECT_NEAR(rates.I(x), best, 1e-6);
  }
  EXPECT_NEAR(rates.I(1.0), -std::log(model.Pmf(1)), 1e-12);
  EXPECT_NEAR(rates.J(0.0), -model.log_u(), 1e-15);
  EXPECT_NEAR(rates.J(0.25), 0.25 * rates.I(4.0), 1e-15);
  EXPECT_EQ(rates.J(1.5), std::numeric_limits<double>::infinity());
  for (double t : {-1.0, 0.0, 0.05}) {
    EXPECT_NEAR(rates.Biconjugate(t), model.Phi(t), 1e-8);
    EXPECT_NEAR(rates.PhiInverse(model.Phi(t)), t, 1e-9);
  }
}

TEST(DefectGasTest, GeometricComparisonMatchesDirectSum) {
  const std::vector<double> f = {0.2, -0.1, 0.05};
  const double q = 0.1;
  const DefectGasModel model =
      DefectGasModel::Solve(q, InteractionSeries::Finite(f));
  const std::vector<double> pmf = PmfOracle(q, f, 6000);
  double tv = 0.0;
  for (int k = 1; k <= 6000; ++k) {
    tv += 0.5 * std::abs(pmf[k - 1] - q / std::pow(1.0 + q, k));
  }
  const GeometricComparison cmp = CompareWithGeometric(model);
  EXPECT_NEAR(cmp.tv_T, tv, 1e-12);
  EXPECT_NEAR(cmp.mean_geometric, 11.0, 1e-12);
  EXPECT_TRUE(cmp.free_energy_bound_holds);
  EXPECT_LE(cmp.free_energy_lhs, cmp.free_energy_rhs);
}

TEST(DefectGasTest, MomentBoundsHold) {
  const DefectGasModel model = DefectGasModel::Solve(
      0.05, InteractionSeries::Finite({0.4, -0.3, 0.2, -0.1, 0.05}));
  const std::vector<MomentBoundCheck> checks = CheckMomentBounds(model);
  EXPECT_EQ(checks.size(), 4u);
  for (const MomentBoundCheck& c : checks) {
    EXPECT_TRUE(c.holds) << "r = " << c.r << ", tau = " << c.tau;
    EXPECT_LE(c.lhs, c.rhs);
  }
}

TEST(DefectGasTest, RejectsOutsidePerturbativeRegime) {
  EXPECT_THROW(DefectGasModel::Solve(0.0, InteractionSeries::Zero()),
               RegimeError);
  EXPECT_THROW(DefectGasModel::Solve(0.5, InteractionSeries::Finite({3.0})),
               RegimeError);
}

TEST(DefectGasTest, EffectiveActivityFormula) {
  const double beta = 5.0;
  const double p = 0.1;
  const double R = 2.5;
  const double gs = 0.02;
  EXPECT_NEAR(LogEffectiveActivity(beta, p, R, gs),
              -beta * (gs + p * R) - std::log(beta * p), 1e-15);
  EXPECT_NEAR(EffectiveActivity(beta, p, R, gs),
              std::exp(-beta * (gs + p * R)) / (beta * p), 1e-15);
  EXPECT_THROW(EffectiveActivity(beta, 0.0, R, gs), RegimeError);
}

TEST(DefectGasTest, LambdaAcrossMatchesQuadrature) {
  const double beta = 5.0;
  const double p = 0.1;
  const double R = 2.5;
  const double C = 3.0;
  const double s = 6.0;
  auto f = [&](double y) {
    return beta * p * std::exp(-beta * p * y) *
           std::exp(beta * C * std::pow(R + y, -(s - 2.0)));
  };
  const double oracle = std::log(
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          f, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14));
  EXPECT_NEAR(LambdaAcross(beta, p, R, C, s), oracle, 1e-10 * oracle);
  EXPECT_EQ(LambdaAcross(beta, p, R, C, s, true), 0.0);
  EXPECT_EQ(LambdaAcross(beta, p, R, 0.0, s), 0.0);
  EXPECT_THROW(LambdaAcross(beta, p, R, C, 2.0), InvalidInput);
  EXPECT_THROW(LambdaAcross(beta, 0.0, R, C, s), RegimeError);
}

TEST(DefectGasTest, ModelFromTransferUsesBoundaryLayer) {
  const PairPotential v = PairPotential::LennardJones();
  const TransferSolution sol = TransferSolution::Build(v, 2, 5.0, 0.1, 2.5);
  const DefectGasModel model = DefectGasModel::FromTransfer(sol, 0.01);
  EXPECT_NEAR(model.q(), EffectiveActivity(5.0, 0.1, 2.5, sol.g_surf_R()),
              1e-15);
  EXPECT_DOUBLE_EQ(model.lambda_across(), 0.01);
  const std::vector<double> f = BoundaryLayerSequence(sol, 5);
  for (int k = 1; k <= 5; ++k) {
    EXPECT_NEAR(model.interaction().at(k), f[k - 1], 1e-14);
    EXPECT_NEAR(EffectiveInteraction(sol, k).f, f[k - 1], 1e-10);
  }
  EXPECT_LT(model.RenewalResidual(), 1e-12);
}

TEST(DefectGasTest, QuadraticFloorIsPositive) {
  const DefectGasModel model =
      DefectGasModel::Solve(0.1, InteractionSeries::Finite({0.1}));
  const QuadraticFloor floor = MeasureQuadraticFloor(RateFunctions(model));
  EXPECT_GT(floor.c, 0.0);
  EXPECT_TRUE(std::isfinite(floor.c));
}

TEST(RegimeTest, ClassifiesBySurfaceEnergy) {
  EXPECT_EQ(ClassifyRegime(-0.2578, 0.2657).regime, Regime::kDiluteCracks);
  const RegimeClassification other = ClassifyRegime(-0.1, 0.3);
  EXPECT_EQ(other.regime, Regime::kCrackAggregation);
  EXPECT_FALSE(other.annotations.empty());
  EXPECT_NEAR(other.margin, 0.1 - 0.15, 1e-15);
}

}  // namespace
}  // namespace crackchain
