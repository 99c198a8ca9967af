# Copyright 2026 The crackchain Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Cracks in one-dimensional atomistic chains.

Dimensionless units throughout: energies in units of the pair-potential
well depth, lengths in Lennard-Jones sigma, and beta the inverse
temperature in the same energy units.
"""

from crackchain._core import (
    DefectGasModel,
    InvalidInput,
    PairPotential,
    RegimeError,
    SurfaceEstimate,
    TransferOptions,
    TransferSolution,
    ValidationError,
    __version__,
    cauchy_born,
    effective_activity,
    estimate_bulk_and_surface,
    lattice_constant,
    nearest_neighbor_oracle,
    pressure_at_length,
    run_cli,
    sample_exact,
)

__all__ = [
    "DefectGasModel",
    "InvalidInput",
    "PairPotential",
    "RegimeError",
    "SurfaceEstimate",
    "TransferOptions",
    "TransferSolution",
    "ValidationError",
    "__version__",
    "cauchy_born",
    "crack_statistics",
    "effective_activity",
    "estimate_bulk_and_surface",
    "lattice_constant",
    "nearest_neighbor_oracle",
    "pressure_at_length",
    "run_cli",
    "sample_exact",
]


def crack_statistics(spacings, R):
    """Cluster sizes and crack excesses of one chain.

    A bond is a crack when its spacing is at least R. Returns a pair
    (cluster_sizes, excesses) of lists.
    """
    sizes = []
    excesses = []
    run = 1
    for z in spacings:
        if z >= R:
            sizes.append(run)
            excesses.append(z - R)
            run = 1
        else:
            run += 1
    sizes.append(run)
    return sizes, excesses
