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


// Python bindings for the crackchain core library.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "crackchain/cli.h"
#include "crackchain/defect_gas.h"
#include "crackchain/errors.h"
#include "crackchain/ground_state.h"
#include "crackchain/potential.h"
#include "crackchain/rng.h"
#include "crackchain/sampler.h"
#include "crackchain/transfer_operator.h"
#include "crackchain/verify.h"

namespace py = pybind11;

namespace crackchain {
namespace {

// Cluster sizes, spacings and crack excesses of `replicas` exact samples.
py::dict SampleExact(const PairPotential& v, int m, double beta,
                     double pressure, double R, int n, int replicas,
                     uint64_t seed, const TransferOptions& options) {
  const TransferSolution sol =
      TransferSolution::Build(v, m, beta, pressure, R, options);
  const DefectGasModel model = DefectGasModel::FromTransfer(sol);
  const ConditionedRenewalSampler sizes(model, n);
  const ClusterSpacingSampler spacings(sol);
  std::vector<std::vector<double>> z;
  std::vector<std::vector<int>> clusters;
  for (int r = 0; r < replicas; ++r) {
    Rng rng(SplitSeed(seed, r));
    ExactChain chain = SampleExactChain(sizes, spacings, beta, pressure, R, rng);
    z.push_back(std::move(chain.sample.spacings));
    clusters.push_back(std::move(chain.cluster_sizes));
  }
  py::dict out;
  out["spacings"] = z;
  out["cluster_sizes"] = clusters;
  out["q"] = model.q();
  out["expected_cluster_count"] = sizes.ExpectedClusterCount();
  return out;
}

}  // namespace
}  // namespace crackchain

PYBIND11_MODULE(_core, m) {
  using namespace crackchain;
  m.doc() = "Transfer operators, defect gas and samplers for cracked chains";
  m.attr("__version__") = VersionString();

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_RuntimeError);

  py::class_<PairPotential>(m, "PairPotential")
      .def_static("lennard_jones", &PairPotential::LennardJones,
                  py::arg("r_hc") = 0.5, py::arg("z_min") = 0.95)
      .def_static("spline", &PairPotential::Spline, py::arg("r_hc") = 0.5,
                  py::arg("z_min") = 0.95, py::arg("r_on") = 1.4,
                  py::arg("r_cut") = 1.8)
      .def_static("hard_rod", &PairPotential::HardRod,
                  py::arg("diameter") = 1.0)
      .def_static("tabulated", &PairPotential::Tabulated, py::arg("r"),
                  py::arg("v"), py::arg("r_hc") = py::none(),
                  py::arg("z_min") = py::none(), py::arg("s") = 6.0)
      .def_static("from_file", &PairPotential::FromFile, py::arg("path"),
                  py::arg("r_hc") = py::none(), py::arg("z_min") = py::none(),
                  py::arg("s") = 6.0)
      .def("__call__", &PairPotential::Evaluate, py::arg("r"))
      .def("derivative", &PairPotential::Derivative, py::arg("r"))
      .def_property_readonly("r_hc", &PairPotential::r_hc)
      .def_property_readonly("z_min", &PairPotential::z_min)
      .def_property_readonly("z_max", &PairPotential::z_max)
      .def_property_readonly("s", &PairPotential::s)
      .def_property_readonly("support_radius", &PairPotential::support_radius)
      .def("__repr__", &PairPotential::Describe);

  m.def("cauchy_born", &CauchyBorn, py::arg("v"), py::arg("m"), py::arg("r"));
  m.def(
      "lattice_constant",
      [](const PairPotential& v, int mm) {
        const CauchyBornResult r = FindLatticeConstant(v, mm);
        return py::make_tuple(r.a, r.e0);
      },
      py::arg("v"), py::arg("m"), "Returns (a, e0).");

  py::class_<SurfaceEstimate>(m, "SurfaceEstimate")
      .def_readonly("a", &SurfaceEstimate::a)
      .def_readonly("e0", &SurfaceEstimate::e0)
      .def_readonly("e_surf", &SurfaceEstimate::e_surf)
      .def_readonly("spread", &SurfaceEstimate::spread)
      .def_readonly("excess", &SurfaceEstimate::excess);
  m.def(
      "estimate_bulk_and_surface",
      [](const PairPotential& v, int mm, int n_max) {
        return EstimateBulkAndSurface(v, mm, n_max);
      },
      py::arg("v"), py::arg("m"), py::arg("n_max") = 50);

  py::class_<TransferOptions>(m, "TransferOptions")
      .def(py::init<>())
      .def_readwrite("node_count", &TransferOptions::node_count)
      .def_readwrite("full_line", &TransferOptions::full_line)
      .def_readwrite("tail_node_count", &TransferOptions::tail_node_count);

  py::class_<TransferSolution>(m, "TransferSolution")
      .def_static("build", &TransferSolution::Build, py::arg("v"),
                  py::arg("m"), py::arg("beta"), py::arg("pressure"),
                  py::arg("R"), py::arg("options") = TransferOptions{})
      .def_property_readonly("g_R", &TransferSolution::g_R)
      .def_property_readonly("g_surf_R", &TransferSolution::g_surf_R)
      .def_property_readonly("spectral_gap", &TransferSolution::spectral_gap)
      .def_property_readonly("nodes", &TransferSolution::nodes)
      .def_property_readonly("stationary_density",
                             &TransferSolution::stationary_density)
      .def("mean_spacing",
           [](const TransferSolution& s) { return MeanSpacing(s); })
      .def(
          "log_partition_sequence",
          [](const TransferSolution& s, int k_max) {
            return LogTruncatedPartitionSequence(s, k_max);
          },
          py::arg("k_max"));

  py::class_<DefectGasModel>(m, "DefectGasModel")
      .def_static(
          "ideal",
          [](double q) { return DefectGasModel::Solve(q, InteractionSeries::Zero()); },
          py::arg("q"))
      .def_static(
          "finite",
          [](double q, std::vector<double> f) {
            return DefectGasModel::Solve(q, InteractionSeries::Finite(std::move(f)));
          },
          py::arg("q"), py::arg("f"))
      .def_static("from_transfer", &DefectGasModel::FromTransfer,
                  py::arg("solution"), py::arg("lambda_across") = 0.0)
      .def_property_readonly("q", &DefectGasModel::q)
      .def_property_readonly("u", &DefectGasModel::u)
      .def_property_readonly("epsilon", &DefectGasModel::epsilon)
      .def_property_readonly("mean_cluster_size", &DefectGasModel::mu)
      .def("pmf", &DefectGasModel::Pmf, py::arg("k"))
      .def("renewal_residual", &DefectGasModel::RenewalResidual)
      .def("rate_J", [](const DefectGasModel& model, double y) {
        return RateFunctions(model).J(y);
      }, py::arg("y"));

  m.def("effective_activity", &EffectiveActivity, py::arg("beta"),
        py::arg("pressure"), py::arg("R"), py::arg("g_surf_R"));
  m.def(
      "nearest_neighbor_oracle",
      [](const PairPotential& v, double beta, double R) {
        const NearestNeighborValues nn = NearestNeighborOracle(v, beta, R);
        return py::make_tuple(nn.e0_R, nn.e_surf_R);
      },
      py::arg("v"), py::arg("beta"), py::arg("R"),
      "Returns (e0_R, e_surf_R) by adaptive quadrature.");
  m.def("pressure_at_length", &PressureAtLength, py::arg("v"), py::arg("m"),
        py::arg("beta"), py::arg("ell"), py::arg("R"),
        py::arg("options") = TransferOptions{});
  m.def("sample_exact", &SampleExact, py::arg("v"), py::arg("m"),
        py::arg("beta"), py::arg("pressure"), py::arg("R"), py::arg("n"),
        py::arg("replicas") = 1, py::arg("seed") = 20260101,
        py::arg("options") = TransferOptions{});
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = RunCli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool; returns (code, out, err).");
}
