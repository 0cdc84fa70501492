"""Enforced 1-form symmetries and the symmetric local moves they leave to the bath."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gf2
from .codes import StabilizerCode
from .pauli import PauliOperator

FAMILIES = ("vertex", "paramagnet-all", "all", "none")
FULL = math.inf


class SymmetrySpecError(ValueError):
    """Spec cannot be applied to the given code."""


@dataclass(frozen=True)
class SymmetrySpec:
    """Which symmetry generators are enforced, and where.

    ``W`` counts cells from the right boundary (y = 0).  A generator is
    enforced when every qubit it touches lies within the first W layers;
    ``W = FULL`` enforces everywhere.  On a complex with no open axis every
    generator sits at layer 0 and is enforced for any W >= 0.
    """

    family: str = "vertex"
    W: float = FULL

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise SymmetrySpecError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.W != FULL and (self.W < 0 or int(self.W) != self.W):
            raise SymmetrySpecError(f"W must be a non-negative integer or full, got {self.W}")

    @property
    def is_full(self) -> bool:
        return self.W == FULL

    @classmethod
    def parse(cls, family: str, W) -> "SymmetrySpec":
        if isinstance(W, str):
            W = FULL if W.strip().lower() in ("full", "inf") else int(W)
        return cls(family, W)

    def to_json(self) -> dict:
        return {"family": self.family, "W": "full" if self.is_full else int(self.W)}

    # -- binding to a code ------------------------------------------------
    def family_ops(self, code: StabilizerCode) -> list[PauliOperator]:
        if self.family == "none":
            return []
        if self.family == "all":
            return list(code.generators)
        if self.family == "paramagnet-all":
            if not code.symmetry:
                raise SymmetrySpecError(f"{code.name} has no symmetry-tagged generators")
            return list(code.symmetry)
        idx = [i for i, t in enumerate(code.tags) if t.kind.startswith("vertex")]
        if not idx:
            raise SymmetrySpecError(f"{code.name} has no vertex generators")
        return [code.generators[i] for i in idx]

    def enforced(self, code: StabilizerCode) -> "EnforcedSet":
        return _enforced(code, self)


class EnforcedSet:
    """Enforced generators of one spec on one code, as sparse check matrices."""

    def __init__(self, code: StabilizerCode, spec: SymmetrySpec):
        self.code = code
        self.spec = spec
        ops = spec.family_ops(code)
        if spec.is_full:
            keep = ops
        else:
            yhi = code.qubit_yhi
            keep = [g for g in ops if g.is_identity() or yhi[g.support()].max() <= spec.W]
        self.ops = keep
        self.Ex, self.Ez = StabilizerCode._sparse(keep, code.n_qubits)
        self.Ex_csc, self.Ez_csc = self.Ex.tocsc(), self.Ez.tocsc()

    def __len__(self) -> int:
        return len(self.ops)

    def violations(self, p: PauliOperator) -> np.ndarray:
        """0/1 vector over enforced generators: 1 where one anticommutes with ``p``."""
        px = p.x_bits().astype(np.int64)
        pz = p.z_bits().astype(np.int64)
        return ((self.Ex @ pz + self.Ez @ px) & 1).astype(np.uint8)

    def respects(self, p: PauliOperator) -> bool:
        return not self.violations(p).any()


def _memo(code: StabilizerCode, name: str) -> dict:
    """Per-code memo table; lives and dies with the code object."""
    return code.__dict__.setdefault(name, {})


def _enforced(code: StabilizerCode, spec: SymmetrySpec) -> EnforcedSet:
    memo = _memo(code, "_enforced")
    hit = memo.get(spec)
    if hit is None:
        hit = memo[spec] = EnforcedSet(code, spec)
    return hit


def respects_symmetry(code: StabilizerCode, p: PauliOperator, spec: SymmetrySpec) -> bool:
    """True iff ``p`` commutes with every enforced generator (hence with the whole group)."""
    return spec.enforced(code).respects(p)


# ---------------------------------------------------------------------------
# local moves
# ---------------------------------------------------------------------------


def ball(code: StabilizerCode, center, radius: int) -> np.ndarray:
    """Qubits inside the box of side ``2 * radius`` cells centred on vertex ``center``.

    A cell belongs to the ball when some lift of it to the universal cover
    fits entirely in the box, so the ball never wraps onto itself when
    ``2 * radius < L``.
    """
    cx = code.complex
    base, span = code.qubit_geometry
    ok = np.ones(code.n_qubits, dtype=bool)
    for a in range(cx.D):
        o = base[:, a] - (int(center[a]) - radius)
        if cx.periodic[a]:
            o = o % cx.dims[a]
        ok &= (o >= 0) & (o + span[:, a] <= 2 * radius)
    return np.flatnonzero(ok)


def _local_basis(code: StabilizerCode, spec: SymmetrySpec, center, radius: int) -> list[tuple[np.ndarray, np.ndarray]]:
    qs = ball(code, center, radius)
    enf = spec.enforced(code)
    m = len(qs)
    if len(enf):
        gz = enf.Ez_csc[:, qs]
        gx = enf.Ex_csc[:, qs]
        touching = np.flatnonzero(np.asarray((gz.sum(axis=1) + gx.sum(axis=1))).ravel())
        A = np.concatenate([gz[touching].toarray(), gx[touching].toarray()], axis=1) & 1
    else:
        A = np.zeros((0, 2 * m), dtype=np.int64)
    basis = gf2.nullspace(A) if len(A) else np.eye(2 * m, dtype=np.uint8)
    out = []
    for v in basis:
        out.append((qs[np.flatnonzero(v[:m])], qs[np.flatnonzero(v[m:])]))
    return out


def _center_class(code: StabilizerCode, center) -> tuple:
    cx = code.complex
    return tuple(int(center[a]) if not cx.periodic[a] else 0 for a in range(cx.D))


def local_move_supports(code: StabilizerCode, spec: SymmetrySpec, center, radius: int = 2):
    """Basis of the allowed moves around ``center`` as (x positions, z positions) pairs.

    The basis is computed once per translation class of the center and
    shifted into place, so it is identical for equivalent centers.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    cls = _center_class(code, center)
    memo = _memo(code, "_move_basis")
    basis = memo.get((spec, cls, radius))
    if basis is None:
        basis = memo[(spec, cls, radius)] = _local_basis(code, spec, cls, radius)
    shift = tuple(int(c) - k for c, k in zip(center, cls))
    if not any(shift):
        return basis
    cache = _memo(code, "_translations")
    perm = cache.get(shift)
    if perm is None:
        perm = code.translation(shift)
        cache[shift] = perm
    return [(perm[x], perm[z]) for x, z in basis]


def allowed_local_moves(code: StabilizerCode, spec: SymmetrySpec, center, radius: int = 2) -> list[PauliOperator]:
    """GF(2) basis of Paulis supported in the radius ball that respect the spec."""
    n = code.n_qubits
    return [PauliOperator.from_support(n, x, z) for x, z in local_move_supports(code, spec, center, radius)]


def move_table(code: StabilizerCode, spec: SymmetrySpec, radius: int = 2, dedup: bool = False):
    """All (center, basis element) moves over every vertex center, as support pairs.

    With ``dedup`` identical operators from different centers are merged.
    """
    cx = code.complex
    moves = []
    seen = set()
    for v in range(cx.n_cells[0]):
        for x, z in local_move_supports(code, spec, cx.coords[0][v], radius):
            if dedup:
                key = (tuple(sorted(x.tolist())), tuple(sorted(z.tolist())))
                if key in seen:
                    continue
                seen.add(key)
            moves.append((x, z))
    return moves
