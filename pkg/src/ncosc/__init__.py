"""Noncommutative planar oscillators with an sl(2,R) deformation.

Subpackages by layer: :mod:`lie_core` (structure constants, Levi
decomposition), :mod:`irrep` (truncated sl(2,R) irreps), :mod:`fock2d`
(two-mode Fock space), :mod:`nc_hamiltonian` (sector Hamiltonians),
:mod:`dirac_osc` (Dirac oscillator), :mod:`spectra` (eigensolving and
perturbation theory) and :mod:`cli`.
"""

from .irrep import IrrepSpec, make_irrep
from .lie_core import LieAlgebra, deformed_heisenberg, levi_decompose
from .nc_hamiltonian import NCParams, build_hamiltonian, sector_basis
from .operators import HermitianOperator

__version__ = "0.1.0"

__all__ = ["IrrepSpec", "make_irrep", "LieAlgebra", "deformed_heisenberg", "levi_decompose",
           "NCParams", "build_hamiltonian", "sector_basis", "HermitianOperator"]
