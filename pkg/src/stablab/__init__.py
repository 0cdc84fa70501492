"""stablab: stabilizer models on cubical complexes, symmetric local moves,
energy barriers and Metropolis memory times."""

__version__ = "0.1.0"

from .pauli import DimensionError, PauliOperator, QubitIndex, commutes, multiply, product, support, weight
from .lattice import (CellComplex, Curve, DualMembrane, GeometryError, SizeError, TopologyError, build_t2xi,
                      build_torus, make_curve, path_curve, straight_curve)
from .codes import (InvalidCodeError, StabilizerCode, build_3d3f, build_paramagnet_bulk, build_toric,
                    count_logical_qubits, extract_logicals)
from .operators import (SyndromeReport, bare_string, boundary_logicals, boundary_string, decorated_string,
                        membrane, membrane_logicals, syndrome)
from .symmetry import FULL, SymmetrySpec, SymmetrySpecError, allowed_local_moves, ball, respects_symmetry
from .barrier import (DecompositionError, DecompositionPath, InvalidPathError, canonical_decomposition,
                      minimal_barrier_oracle, paired_decomposition, path_energy, verify_scaling)
from .dynamics import ConfigurationError, MemoryStats, measure_memory_time, metropolis_step

__all__ = [
    "DimensionError",
    "PauliOperator",
    "QubitIndex",
    "commutes",
    "multiply",
    "product",
    "support",
    "weight",
    "CellComplex",
    "Curve",
    "DualMembrane",
    "GeometryError",
    "SizeError",
    "TopologyError",
    "build_t2xi",
    "build_torus",
    "make_curve",
    "path_curve",
    "straight_curve",
    "InvalidCodeError",
    "StabilizerCode",
    "build_3d3f",
    "build_paramagnet_bulk",
    "build_toric",
    "count_logical_qubits",
    "extract_logicals",
    "SyndromeReport",
    "bare_string",
    "boundary_logicals",
    "boundary_string",
    "decorated_string",
    "membrane",
    "membrane_logicals",
    "syndrome",
    "FULL",
    "SymmetrySpec",
    "SymmetrySpecError",
    "allowed_local_moves",
    "ball",
    "respects_symmetry",
    "DecompositionError",
    "DecompositionPath",
    "InvalidPathError",
    "canonical_decomposition",
    "minimal_barrier_oracle",
    "paired_decomposition",
    "path_energy",
    "verify_scaling",
    "ConfigurationError",
    "MemoryStats",
    "measure_memory_time",
    "metropolis_step",
]
