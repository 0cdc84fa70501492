"""Stabilizer models on cubical complexes.

Models:
  * toric codes in 2d and 3d (single species) and the doubled 3d toric code;
  * the 3d three-fermion Walker-Wang model, whose face terms are the doubled
    toric plaquettes dressed by X on the over (O) and under (U) legs;
  * a paramagnet bulk (single-qubit X on bulk faces and edges) capped by 2d
    toric codes on both boundary planes, with its 1-form symmetry generators.

Energies count violated generators (unit couplings, ground energy 0).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from . import _kernels, gf2
from .lattice import CellComplex, TopologyError
from .pauli import DimensionError, PauliOperator, QubitIndex, pack_bits, unpack_bits


class InvalidCodeError(ValueError):
    """Generators fail to commute."""


@dataclass(frozen=True)
class Tag:
    kind: str
    cell: int


@dataclass
class StabilizerCode:
    name: str
    complex: CellComplex
    layout: list[QubitIndex]
    generators: list[PauliOperator]
    tags: list[Tag]
    symmetry: list[PauliOperator] = field(default_factory=list)
    symmetry_tags: list[Tag] = field(default_factory=list)
    logicals: dict[str, PauliOperator] = field(default_factory=dict)

    @property
    def n_qubits(self) -> int:
        return len(self.layout)

    @cached_property
    def qubit_position(self) -> dict[QubitIndex, int]:
        return {q: i for i, q in enumerate(self.layout)}

    def qubit(self, dim: int, cell: int, species: str = "single") -> int:
        return self.qubit_position.get(QubitIndex(dim, cell, species), -1)

    @cached_property
    def qubit_geometry(self) -> tuple[np.ndarray, np.ndarray]:
        """Base corner (n, D) and spanned-axis mask (n, D) of each qubit's cell."""
        cx = self.complex
        base = np.zeros((self.n_qubits, cx.D), dtype=np.int64)
        span = np.zeros((self.n_qubits, cx.D), dtype=bool)
        for i, q in enumerate(self.layout):
            base[i] = cx.coords[q.dim][q.cell]
            span[i, list(cx.orients[q.dim][cx.orient_of[q.dim][q.cell]])] = True
        return base, span

    @cached_property
    def qubit_yhi(self) -> np.ndarray:
        """Largest open-axis coordinate touched by each qubit's cell (0 on a torus)."""
        a = self.complex.open_axis
        if a is None:
            return np.zeros(self.n_qubits, dtype=np.int64)
        base, span = self.qubit_geometry
        return base[:, a] + span[:, a]

    def translation(self, shift) -> np.ndarray:
        """Permutation of qubit positions under a lattice translation (-1 where it leaves)."""
        cx = self.complex
        base, _ = self.qubit_geometry
        shifted = base + np.asarray(shift, dtype=np.int64)
        out = np.empty(self.n_qubits, dtype=np.int64)
        for i, q in enumerate(self.layout):
            orient = cx.orients[q.dim][cx.orient_of[q.dim][q.cell]]
            cid = cx.cell_id(q.dim, orient, shifted[i])
            out[i] = self.qubit(q.dim, cid, q.species) if cid >= 0 else -1
        return out

    # -- sparse check matrices ------------------------------------------
    @staticmethod
    def _sparse(ops: list[PauliOperator], n: int):
        rows_x, cols_x, rows_z, cols_z = [], [], [], []
        for i, op in enumerate(ops):
            xs, zs = op.x_support(), op.z_support()
            rows_x.append(np.full(len(xs), i))
            cols_x.append(xs)
            rows_z.append(np.full(len(zs), i))
            cols_z.append(zs)
        m = len(ops)

        def mk(r, c):
            r = np.concatenate(r) if r else np.zeros(0, np.int64)
            c = np.concatenate(c) if c else np.zeros(0, np.int64)
            return sp.csr_matrix((np.ones(len(r), np.int64), (r, c)), shape=(m, n))

        return mk(rows_x, cols_x), mk(rows_z, cols_z)

    @cached_property
    def _gen_sparse(self):
        return self._sparse(self.generators, self.n_qubits)

    @cached_property
    def _incidence(self):
        """Qubit -> generators with Z there (flipped by X) and with X there (flipped by Z)."""
        gx, gz = self._gen_sparse
        by_x = gz.T.tocsr()
        by_z = gx.T.tocsr()
        return (by_x.indptr.astype(np.int64), by_x.indices.astype(np.int64),
                by_z.indptr.astype(np.int64), by_z.indices.astype(np.int64))

    def syndrome_bits(self, p: PauliOperator) -> np.ndarray:
        """0/1 vector over generators: 1 where the generator anticommutes with ``p``."""
        if p.n != self.n_qubits:
            raise DimensionError(f"operator on {p.n} qubits, code has {self.n_qubits}")
        ix_ptr, ix_idx, iz_ptr, iz_idx = self._incidence
        out = np.zeros(len(self.generators), dtype=np.uint8)
        _kernels.accumulate_flips(ix_ptr, ix_idx, p.x_support().astype(np.int64), out)
        _kernels.accumulate_flips(iz_ptr, iz_idx, p.z_support().astype(np.int64), out)
        return out

    def energy(self, p: PauliOperator) -> int:
        return int(self.syndrome_bits(p).sum())

    @staticmethod
    def _anticommutation(a_ops, b_ops, n):
        ax, az = StabilizerCode._sparse(a_ops, n)
        bx, bz = StabilizerCode._sparse(b_ops, n)
        m = (ax @ bz.T + az @ bx.T).tocoo()
        bad = m.data % 2 == 1
        return np.stack([m.row[bad], m.col[bad]], axis=1)

    def noncommuting_pairs(self) -> np.ndarray:
        """Index pairs (i, j) of generators that anticommute."""
        return self._anticommutation(self.generators, self.generators, self.n_qubits)

    def symmetry_violations(self) -> np.ndarray:
        """(symmetry index, generator index) pairs that anticommute."""
        if not self.symmetry:
            return np.zeros((0, 2), np.int64)
        return self._anticommutation(self.symmetry, self.generators, self.n_qubits)

    def is_commuting(self) -> bool:
        return len(self.noncommuting_pairs()) == 0

    # -- GF(2) structure --------------------------------------------------
    @cached_property
    def check_matrix(self) -> np.ndarray:
        """Packed symplectic rows [x | z] of all generators."""
        n = self.n_qubits
        if not self.generators:
            return np.zeros((0, gf2.as_packed(np.zeros((1, 2 * n), np.uint8))[0].shape[1]), np.uint64)
        bits = np.concatenate([np.stack([g.x_bits() for g in self.generators]),
                               np.stack([g.z_bits() for g in self.generators])], axis=1)
        return pack_bits(bits)

    @cached_property
    def stabilizer_space(self) -> gf2.RowSpace:
        return gf2.RowSpace(self.check_matrix, 2 * self.n_qubits)

    def rank(self) -> int:
        return self.stabilizer_space.rank

    def in_stabilizer_group(self, p: PauliOperator) -> bool:
        return self.stabilizer_space.contains(p.symplectic())

    def canonical_form(self, p: PauliOperator) -> PauliOperator:
        """Representative of ``p`` modulo the stabilizer group (deterministic)."""
        v = self.stabilizer_space.reduce(p.symplectic())
        bits = unpack_bits(v, 2 * self.n_qubits)
        return PauliOperator.from_bits(bits[: self.n_qubits], bits[self.n_qubits:])

    def fixture_hash(self) -> str:
        """SHA-256 over the serialized generator list (order included)."""
        h = hashlib.sha256()
        h.update(self.name.encode())
        for g, t in zip(self.generators, self.tags):
            h.update(f"{t.kind}/{t.cell}/{g.to_hex()}\n".encode())
        return h.hexdigest()

    def generator_indices(self, kinds) -> np.ndarray:
        kinds = {kinds} if isinstance(kinds, str) else set(kinds)
        return np.array([i for i, t in enumerate(self.tags) if t.kind in kinds], dtype=np.int64)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _edge_layout(cx: CellComplex, species=("single",)) -> list[QubitIndex]:
    return [QubitIndex(1, e, s) for s in species for e in range(cx.n_cells[1])]


def _op(n: int, x=(), z=()) -> PauliOperator:
    return PauliOperator.from_support(n, x, z)


def build_toric(dimension: int, complex: CellComplex, doubled: bool = False) -> StabilizerCode:
    """Toric code with qubits on edges: X stars on vertices, Z plaquettes on faces."""
    cx = complex
    if cx.D != dimension:
        raise TopologyError(f"toric{dimension}d needs a {dimension}d complex, got {cx.D}d")
    species = ("sigma", "tau") if doubled else ("single",)
    layout = _edge_layout(cx, species)
    n = len(layout)
    nE = cx.n_cells[1]
    gens, tags = [], []
    for s_i, s in enumerate(species):
        kind = "vertex" if s == "single" else f"vertex-{s}"
        for v in range(cx.n_cells[0]):
            gens.append(_op(n, x=[s_i * nE + e for e in cx.coboundary_of(0, v)]))
            tags.append(Tag(kind, v))
    for s_i, s in enumerate(species):
        kind = "face" if s == "single" else f"face-{s}"
        for f in range(cx.n_cells[2]):
            gens.append(_op(n, z=[s_i * nE + e for e in cx.boundary_of(2, f)]))
            tags.append(Tag(kind, f))
    name = f"toric{dimension}d" + ("-doubled" if doubled else "")
    return StabilizerCode(name, cx, layout, gens, tags)


def build_3d3f(complex: CellComplex, decorate: bool = True) -> StabilizerCode:
    """Three-fermion Walker-Wang model on two qubit species per edge.

    B_f^sigma = sx(O) sx(U) tx(U) prod sz(boundary f)
    B_f^tau   = sx(O) tx(O) tx(U) prod tz(boundary f)

    Legs missing at an open boundary are dropped (smooth truncation).  With
    ``decorate=False`` this is exactly the doubled 3d toric code.
    """
    cx = complex
    if cx.D != 3 or not (cx.periodic[0] and cx.periodic[2]):
        raise TopologyError("3d3f needs a 3d complex periodic in x and z")
    layout = _edge_layout(cx, ("sigma", "tau"))
    n = len(layout)
    nE = cx.n_cells[1]
    gens, tags = [], []
    for s_i, s in enumerate(("sigma", "tau")):
        for v in range(cx.n_cells[0]):
            gens.append(_op(n, x=[s_i * nE + e for e in cx.coboundary_of(0, v)]))
            tags.append(Tag(f"vertex-{s}", v))
    ou = cx.over_under_table
    for s in ("sigma", "tau"):
        for f in range(cx.n_cells[2]):
            edges = cx.boundary_of(2, f)
            o, u = int(ou[f, 0]), int(ou[f, 1])
            if s == "sigma":
                legs = [(o, 0), (u, 0), (u, nE)]
            else:
                legs = [(o, 0), (o, nE), (u, nE)]
            xs = [e + shift for e, shift in legs if e >= 0] if decorate else []
            off = 0 if s == "sigma" else nE
            gens.append(_op(n, x=xs, z=[off + e for e in edges]))
            tags.append(Tag(f"face-{s}", f))
    return StabilizerCode("3d3f" if decorate else "toric3d-doubled", cx, layout, gens, tags)


def build_paramagnet_bulk(complex: CellComplex) -> StabilizerCode:
    """Paramagnet on bulk faces and edges, 2d toric codes on both boundary planes.

    Symmetry generators: A_v (bulk vertex stars), A_c (cubes away from the
    boundary), A_v' (five-edge stars at boundary vertices) and A_q' (five face
    X's on a boundary cube dressed by Z on the four edges of its boundary face).
    """
    cx = complex
    if not cx.is_t2xi:
        raise TopologyError("paramagnet bulk needs the T^2 x I slab")
    bdy_edge = np.array([cx.is_boundary_cell(1, e) for e in range(cx.n_cells[1])])
    bdy_face = np.array([cx.is_boundary_cell(2, f) for f in range(cx.n_cells[2])])
    bdy_vert = np.array([cx.is_boundary_cell(0, v) for v in range(cx.n_cells[0])])
    layout = [QubitIndex(1, e, "single") for e in range(cx.n_cells[1])]
    layout += [QubitIndex(2, f, "single") for f in range(cx.n_cells[2]) if not bdy_face[f]]
    pos = {q: i for i, q in enumerate(layout)}
    n = len(layout)

    def eq(e):
        return pos[QubitIndex(1, e, "single")]

    def fq(f):
        return pos[QubitIndex(2, f, "single")]

    gens, tags = [], []
    # vertex-type terms first: boundary toric stars
    for v in range(cx.n_cells[0]):
        if bdy_vert[v]:
            es = [e for e in cx.coboundary_of(0, v) if bdy_edge[e]]
            gens.append(_op(n, x=[eq(e) for e in es]))
            tags.append(Tag("boundary-toric-A", v))
    for e in range(cx.n_cells[1]):
        if not bdy_edge[e]:
            gens.append(_op(n, x=[eq(e)]))
            tags.append(Tag("para-edge", e))
    for f in range(cx.n_cells[2]):
        if bdy_face[f]:
            gens.append(_op(n, z=[eq(e) for e in cx.boundary_of(2, f)]))
            tags.append(Tag("boundary-toric-B", f))
        else:
            gens.append(_op(n, x=[fq(f)]))
            tags.append(Tag("para-face", f))

    sym, sym_tags = [], []
    for v in range(cx.n_cells[0]):
        star = [eq(e) for e in cx.coboundary_of(0, v)]
        sym.append(_op(n, x=star))
        sym_tags.append(Tag("sym-Av'" if bdy_vert[v] else "sym-Av", v))
    for q in range(cx.n_cells[3]):
        faces = cx.boundary_of(3, q)
        f0 = [f for f in faces if bdy_face[f]]
        xs = [fq(f) for f in faces if not bdy_face[f]]
        if f0:
            zs = [eq(e) for f in f0 for e in cx.boundary_of(2, f)]
            sym.append(_op(n, x=xs, z=zs))
            sym_tags.append(Tag("sym-Aq'", q))
        else:
            sym.append(_op(n, x=xs))
            sym_tags.append(Tag("sym-Ac", q))
    return StabilizerCode("parabulk", cx, layout, gens, tags, sym, sym_tags)


# ---------------------------------------------------------------------------
# logical qubits
# ---------------------------------------------------------------------------


def _require_commuting(code: StabilizerCode) -> None:
    bad = code.noncommuting_pairs()
    if len(bad):
        i, j = bad[0]
        raise InvalidCodeError(f"generators {i} ({code.tags[i]}) and {j} ({code.tags[j]}) anticommute")


def count_logical_qubits(code: StabilizerCode) -> int:
    _require_commuting(code)
    return code.n_qubits - code.rank()


def _symplectic_inner(a: np.ndarray, b: np.ndarray, n: int) -> int:
    return int((a[:n] @ b[n:] + a[n:] @ b[:n]) % 2)


def extract_logicals(code: StabilizerCode) -> list[tuple[PauliOperator, PauliOperator]]:
    """k anticommuting (X-like, Z-like) pairs commuting with every generator.

    Pairs are mutually commuting across different indices and independent of
    the stabilizer group.  Found by symplectic Gram-Schmidt on the centralizer.
    """
    _require_commuting(code)
    n = code.n_qubits
    H = unpack_bits(code.check_matrix, 2 * n) if code.generators else np.zeros((0, 2 * n), np.uint8)
    swapped = np.concatenate([H[:, n:], H[:, :n]], axis=1)
    cent = gf2.nullspace(swapped) if len(H) else np.eye(2 * n, dtype=np.uint8)
    space = code.stabilizer_space
    # keep centralizer vectors independent of stabilizers and of each other
    reps = []
    work = gf2.RowSpace(code.check_matrix, 2 * n)
    for v in cent:
        packed = pack_bits(v)
        if not work.contains(packed):
            reps.append(v.astype(np.uint8))
            work = work.extended(packed[None, :])
    k = n - space.rank
    pairs = []
    pool = [r.copy() for r in reps]
    while pool:
        a = pool.pop(0)
        j = next((i for i, b in enumerate(pool) if _symplectic_inner(a, b, n)), None)
        if j is None:
            continue
        b = pool.pop(j)
        new_pool = []
        for c in pool:
            if _symplectic_inner(c, b, n):
                c = c ^ a
            if _symplectic_inner(c, a, n):
                c = c ^ b
            new_pool.append(c)
        pool = new_pool
        pairs.append((PauliOperator.from_bits(a[:n], a[n:]), PauliOperator.from_bits(b[:n], b[n:])))
    if len(pairs) != k:
        raise InvalidCodeError(f"found {len(pairs)} logical pairs, expected {k}")
    return pairs
