"""Metropolis bath coupled through symmetric local moves, and logical memory times.

The state is a Pauli frame relative to a reference ground state.  Every
proposal is one (center, basis element) pair from the symmetric move table,
drawn uniformly; moves are self-inverse, so the proposal is symmetric and
Metropolis acceptance gives detailed balance with respect to exp(-E/T) over
the frames reachable by symmetric moves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .codes import StabilizerCode
from .pauli import PauliOperator
from .symmetry import SymmetrySpec, move_table


class ConfigurationError(ValueError):
    """The requested dynamics cannot run (for instance, no allowed moves)."""


class MoveSet:
    """Flattened move table with precomputed syndrome flips.

    ``mv_ptr/mv_idx`` list each move's symplectic positions (x at i, z at
    n + i); ``flip_ptr/flip_idx`` list the generators it anticommutes with.
    """

    def __init__(self, code: StabilizerCode, spec: SymmetrySpec, radius: int = 1):
        self.code = code
        self.spec = spec
        self.radius = radius
        n = code.n_qubits
        table = move_table(code, spec, radius=radius)
        if not table:
            raise ConfigurationError("the symmetry spec leaves no local moves")
        lens = np.array([len(x) + len(z) for x, z in table], dtype=np.int64)
        self.mv_ptr = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
        self.mv_idx = np.concatenate([np.concatenate([x, n + z]) for x, z in table]).astype(np.int64)
        rows = np.repeat(np.arange(len(table)), lens)
        M = sp.csr_matrix((np.ones(len(rows), np.int64), (rows, self.mv_idx)), shape=(len(table), 2 * n))
        gx, gz = code._gen_sparse
        # symplectic pairing: move x meets generator z, move z meets generator x
        G = sp.hstack([gz, gx]).tocsr()
        A = (M @ G.T).tocsr()
        A.data %= 2
        A.eliminate_zeros()
        A.sort_indices()
        self.flip_ptr = A.indptr.astype(np.int64)
        self.flip_idx = A.indices.astype(np.int64)
        self.size = len(table)
        self.max_flip = int(np.diff(self.flip_ptr).max(initial=0))

    def boltzmann(self, T: float) -> np.ndarray:
        """Acceptance probability for each energy rise 0..max_flip."""
        if T <= 0:
            raise ConfigurationError("temperature must be positive")
        return np.array([math.exp(-d / T) for d in range(self.max_flip + 1)], dtype=np.float64)


@dataclass
class SimulationState:
    frame: np.ndarray          # symplectic 0/1 vector [x | z], length 2n
    syndrome: np.ndarray       # 0/1 over Hamiltonian generators
    energy: int
    step: int
    rng: np.random.Generator

    def operator(self) -> PauliOperator:
        n = len(self.frame) // 2
        return PauliOperator.from_bits(self.frame[:n], self.frame[n:])


def initial_state(code: StabilizerCode, seed: int) -> SimulationState:
    n = code.n_qubits
    return SimulationState(np.zeros(2 * n, np.uint8), np.zeros(len(code.generators), np.uint8),
                           0, 0, np.random.default_rng(seed))


def recompute_syndrome(code: StabilizerCode, frame: np.ndarray) -> np.ndarray:
    n = code.n_qubits
    gx, gz = code._gen_sparse
    f = frame.astype(np.int64)
    return ((gx @ f[n:] + gz @ f[:n]) & 1).astype(np.uint8)


def run_steps(state: SimulationState, moves: MoveSet, T: float, steps: int) -> int:
    """Advance ``steps`` proposals; returns the number accepted."""
    if steps <= 0:
        return 0
    props = state.rng.integers(0, moves.size, size=steps, dtype=np.int64)
    unif = state.rng.random(steps)
    energy, acc = _kernels.metropolis_chunk(state.syndrome, state.energy, state.frame,
                                           moves.flip_ptr, moves.flip_idx, moves.mv_ptr, moves.mv_idx,
                                           props, unif, moves.boltzmann(T))
    state.energy = energy
    state.step += steps
    return acc


def metropolis_step(state: SimulationState, moves: MoveSet, T: float) -> bool:
    """One proposal with acceptance min(1, exp(-dE / T))."""
    return run_steps(state, moves, T, 1) == 1


# ---------------------------------------------------------------------------
# memory time
# ---------------------------------------------------------------------------


@dataclass
class TrajectoryRecord:
    seed: int
    failure_step: int | None
    times: list[int] = field(default_factory=list)
    energies: list[int] = field(default_factory=list)
    parities: list[list[int] | None] = field(default_factory=list)
    enforced_violations: list[int] = field(default_factory=list)
    energy_mismatches: int = 0

    @property
    def censored(self) -> bool:
        return self.failure_step is None

    def summary(self) -> dict:
        e = np.asarray(self.energies) if self.energies else np.zeros(1)
        return {
            "seed": self.seed,
            "failure_step": "censored" if self.censored else self.failure_step,
            "checkpoints": len(self.times),
            "mean_energy": float(e.mean()),
            "max_energy": int(e.max()),
            "max_enforced_violations": max(self.enforced_violations, default=0),
        }


def default_tracked(code: StabilizerCode) -> list[PauliOperator]:
    """Logicals whose flips count as failure.

    On the 3d3f slab these are the right-boundary strings Z1, X1, Z2, X2, the
    qubits the enforced slab is meant to protect.  Elsewhere every extracted
    logical pair is tracked.
    """
    if code.name == "3d3f" and code.complex.is_t2xi:
        from .operators import boundary_logicals

        logs = code.logicals or boundary_logicals(code)
        return [logs[k] for k in ("Z1", "X1", "Z2", "X2")]
    from .codes import extract_logicals

    return [op for pair in extract_logicals(code) for op in pair]


def _parity_matrix(ops: list[PauliOperator], n: int) -> np.ndarray:
    """Rows [z | x] so that row . frame = symplectic product with a frame [x | z]."""
    return np.stack([np.concatenate([op.z_bits(), op.x_bits()]) for op in ops]).astype(np.int64)


def run_trajectory(code: StabilizerCode, spec: SymmetrySpec, moves: MoveSet, T: float, max_steps: int,
                   interval: int, seed: int, tracked: list[PauliOperator],
                   stop_on_failure: bool = True) -> TrajectoryRecord:
    n = code.n_qubits
    enf = spec.enforced(code)
    P = _parity_matrix(tracked, n)
    E = sp.hstack([enf.Ez, enf.Ex]).tocsr() if len(enf) else None
    state = initial_state(code, seed)
    rec = TrajectoryRecord(seed, None)
    while state.step < max_steps:
        run_steps(state, moves, T, min(interval, max_steps - state.step))
        f = state.frame.astype(np.int64)
        rec.times.append(state.step)
        rec.energies.append(state.energy)
        rec.enforced_violations.append(int(((E @ f) & 1).sum()) if E is not None else 0)
        if int(recompute_syndrome(code, state.frame).sum()) != state.energy:
            rec.energy_mismatches += 1
        if state.energy == 0:
            par = ((P @ f) & 1).tolist()
            rec.parities.append(par)
            if any(par) and rec.failure_step is None:
                rec.failure_step = state.step
                if stop_on_failure:
                    break
        else:
            rec.parities.append(None)
    return rec


@dataclass
class MemoryStats:
    records: list[TrajectoryRecord]
    max_steps: int

    @property
    def failure_times(self) -> np.ndarray:
        """Failure steps with censored trials at +inf."""
        return np.array([np.inf if r.censored else r.failure_step for r in self.records], dtype=float)

    @property
    def censored(self) -> int:
        return sum(r.censored for r in self.records)

    def mean(self) -> float:
        t = self.failure_times
        return float(t.mean())

    def median(self) -> float:
        return float(np.median(self.failure_times))

    def to_json(self) -> dict:
        def clean(x):
            return "censored" if math.isinf(x) else x

        return {
            "trials": len(self.records),
            "censored": self.censored,
            "max_steps": self.max_steps,
            "mean_failure": clean(self.mean()),
            "median_failure": clean(self.median()),
            "max_enforced_violations": max((max(r.enforced_violations, default=0) for r in self.records),
                                           default=0),
        }


def measure_memory_time(code: StabilizerCode, spec: SymmetrySpec, T: float, max_steps: int,
                        checkpoints: int | None = None, trials: int = 1, seeds=None,
                        radius: int = 1, tracked: list[PauliOperator] | None = None,
                        moves: MoveSet | None = None) -> MemoryStats:
    """Failure statistics of independent trajectories started at the identity frame.

    ``checkpoints`` is the number of proposals between checks (default one
    sweep, ``n_qubits``).  A trial fails at the first checkpoint where the
    syndrome is zero and the frame flips a tracked logical.
    """
    interval = int(checkpoints or code.n_qubits)
    seeds = list(seeds) if seeds is not None else list(range(trials))
    if len(seeds) != trials:
        raise ConfigurationError("need one seed per trial")
    moves = moves or MoveSet(code, spec, radius)
    tracked = tracked if tracked is not None else default_tracked(code)
    recs = [run_trajectory(code, spec, moves, T, max_steps, interval, s, tracked) for s in seeds]
    return MemoryStats(recs, max_steps)
