"""String and membrane operators, syndromes and excitation classification."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from . import gf2
from .codes import StabilizerCode
from .lattice import Curve, DualMembrane, GeometryError, offset_curve, straight_curve
from .pauli import DimensionError, PauliOperator

POINT_KINDS = {"vertex", "vertex-sigma", "vertex-tau", "boundary-toric-A"}
SIGMA_FLUX = {"face-sigma"}
TAU_FLUX = {"face-tau"}
PLAIN_FLUX = {"face", "boundary-toric-B"}
PARA_KINDS = {"para-edge", "para-face"}


@dataclass
class SyndromeReport:
    """Violated generators of an operator, sorted into excitation types.

    Flux groups are connected components of violated face terms, two faces
    being adjacent when they bound a common top-dimensional cell.
    """

    violated: np.ndarray
    energy: int
    points: list[int] = field(default_factory=list)
    sigma_flux: list[list[int]] = field(default_factory=list)
    tau_flux: list[list[int]] = field(default_factory=list)
    flux: list[list[int]] = field(default_factory=list)
    para: list[int] = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        return {
            "points": len(self.points),
            "sigma_flux_faces": sum(map(len, self.sigma_flux)),
            "tau_flux_faces": sum(map(len, self.tau_flux)),
            "flux_faces": sum(map(len, self.flux)),
            "para": len(self.para),
        }

    def to_dict(self) -> dict:
        return {
            "violated": self.violated.tolist(),
            "energy": self.energy,
            "points": self.points,
            "sigma_flux": self.sigma_flux,
            "tau_flux": self.tau_flux,
            "flux": self.flux,
            "para": self.para,
            "counts": self.counts(),
        }


def _flux_components(code: StabilizerCode, gens: list[int]) -> list[list[int]]:
    if not gens:
        return []
    cx = code.complex
    faces = [code.tags[g].cell for g in gens]
    # faces meet along a shared top cell in 3d, or a shared edge in 2d
    if cx.D == 3:
        links = [cx.coboundary_of(2, f) for f in faces]
    else:
        links = [cx.boundary_of(2, f) for f in faces]
    rows, cols = [], []
    for i, ls in enumerate(links):
        rows += [i] * len(ls)
        cols += ls
    inc = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(faces), max(cols) + 1))
    adj = inc @ inc.T
    n, labels = connected_components(adj, directed=False)
    groups: list[list[int]] = [[] for _ in range(n)]
    for g, lab in zip(gens, labels):
        groups[lab].append(int(g))
    return sorted(groups, key=lambda grp: grp[0])


def syndrome(code: StabilizerCode, p: PauliOperator) -> SyndromeReport:
    bits = code.syndrome_bits(p)
    violated = np.flatnonzero(bits)
    rep = SyndromeReport(violated=violated, energy=int(len(violated)))
    buckets: dict[str, list[int]] = {"s": [], "t": [], "f": []}
    for g in violated.tolist():
        kind = code.tags[g].kind
        if kind in POINT_KINDS:
            rep.points.append(g)
        elif kind in SIGMA_FLUX:
            buckets["s"].append(g)
        elif kind in TAU_FLUX:
            buckets["t"].append(g)
        elif kind in PLAIN_FLUX:
            buckets["f"].append(g)
        elif kind in PARA_KINDS:
            rep.para.append(g)
    rep.sigma_flux = _flux_components(code, buckets["s"])
    rep.tau_flux = _flux_components(code, buckets["t"])
    rep.flux = _flux_components(code, buckets["f"])
    return rep


# ---------------------------------------------------------------------------
# strings
# ---------------------------------------------------------------------------


def _species_offsets(code: StabilizerCode) -> tuple[int, int]:
    """Position offsets of the sigma and tau copies of edge qubits."""
    nE = code.complex.n_cells[1]
    if code.n_qubits != 2 * nE:
        raise DimensionError(f"{code.name} does not carry two qubit species per edge")
    return 0, nE


def bare_string(code: StabilizerCode, curve: Curve, species: str) -> PauliOperator:
    """sigma^z (species 'e') or tau^z (species 'm') on every edge of ``curve``."""
    s_off, t_off = _species_offsets(code)
    off = {"e": s_off, "m": t_off}[species]
    return PauliOperator.from_support(code.n_qubits, z=[off + e for e in curve.edges])


def _decorated(code: StabilizerCode, curve: Curve, species: str, truncate: bool) -> PauliOperator:
    if species in ("eps", "epsilon", "ε"):
        return _decorated(code, curve, "e", truncate) * _decorated(code, curve, "m", truncate)
    s_off, t_off = _species_offsets(code)
    over, under = offset_curve(code.complex, curve, truncate=truncate)
    if species == "e":
        xs = [s_off + e for e in over + under] + [t_off + e for e in under]
    elif species == "m":
        xs = [s_off + e for e in over] + [t_off + e for e in over + under]
    else:
        raise ValueError(f"unknown species {species!r}")
    return bare_string(code, curve, species) * PauliOperator.from_support(code.n_qubits, x=xs)


def decorated_string(code: StabilizerCode, curve: Curve, species: str) -> PauliOperator:
    """Bulk string dressed so that only one flux line trails it.

    S^e = prod_under sx tx  prod_over sx  prod sz
    S^m = prod_under tx     prod_over sx tx  prod tz
    Species 'eps' is the product of both.
    """
    return _decorated(code, curve, species, truncate=False)


def boundary_string(code: StabilizerCode, curve: Curve, species: str) -> PauliOperator:
    """Deconfined string on the right boundary plane (y = 0)."""
    cx = code.complex
    if not all(cx.on_side(1, e, "right") for e in curve.edges):
        raise GeometryError("curve is not contained in the right boundary")
    return _decorated(code, curve, species, truncate=True)


def decoration_solve(code: StabilizerCode, bare: PauliOperator, candidates) -> PauliOperator:
    """Dress ``bare`` with X's on ``candidates`` so the product commutes with every face term.

    Used for the left boundary, where strings are found from the generator
    list itself instead of a leg table.  Raises ``GeometryError`` when no
    dressing exists on the candidate set.
    """
    candidates = np.asarray(sorted(set(int(c) for c in candidates)), dtype=np.int64)
    target = code.syndrome_bits(bare)
    gx, gz = code._gen_sparse
    A = (gz[:, candidates].toarray() & 1).astype(np.uint8)
    sol = gf2.solve(A, target)
    if sol is None:
        raise GeometryError("no decoration on the candidate qubits removes the flux")
    return bare * PauliOperator.from_support(code.n_qubits, x=candidates[sol.astype(bool)])


# ---------------------------------------------------------------------------
# membranes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectMembrane:
    """Set of faces forming a direct membrane (paramagnet model)."""

    faces: frozenset[int]

    def rim(self, cx) -> list[int]:
        counts: dict[int, int] = {}
        for f in self.faces:
            for e in cx.boundary_of(2, f):
                counts[e] = counts.get(e, 0) + 1
        return sorted(e for e, c in counts.items() if c % 2)


def dual_plane(cx, normal: int, level: int, extent=None) -> DualMembrane:
    """Edges along ``normal`` crossing the plane ``normal = level + 1/2``.

    ``extent`` optionally restricts to a rectangle: a dict axis -> (lo, hi)
    over base coordinates, inclusive-exclusive.
    """
    if cx.periodic[normal]:
        level %= cx.dims[normal]
    edges = []
    for e in range(cx.n_cells[1]):
        if cx.edge_axis(e) != normal:
            continue
        c = cx.coords[1][e]
        if c[normal] != level:
            continue
        if extent and any(not (lo <= c[a] < hi) for a, (lo, hi) in extent.items()):
            continue
        edges.append(e)
    return DualMembrane(frozenset(edges))


def direct_plane(cx, normal: int, level: int) -> DirectMembrane:
    """All faces with the given normal at base coordinate ``level``."""
    faces = [f for f in range(cx.n_cells[2])
             if cx.face_normal(f) == normal and cx.coords[2][f][normal] == level]
    return DirectMembrane(frozenset(faces))


def membrane(code: StabilizerCode, m, species: str = "sigma") -> PauliOperator:
    """Membrane operator.

    A ``DualMembrane`` gives X on the chosen species of every pierced edge
    (R^sigma / R^tau, or the single species of a toric code).  A
    ``DirectMembrane`` on the paramagnet model gives X on its bulk faces,
    dressed by Z on the rim edges that lie in a boundary plane.
    """
    n = code.n_qubits
    if isinstance(m, DualMembrane):
        if species == "single":
            pos = [code.qubit(1, e, "single") for e in m.edges]
        else:
            pos = [code.qubit(1, e, species) for e in m.edges]
        if min(pos, default=0) < 0:
            raise GeometryError(f"no {species} qubits on membrane edges")
        return PauliOperator.from_support(n, x=pos)
    if isinstance(m, DirectMembrane):
        cx = code.complex
        xs = [code.qubit(2, f) for f in m.faces if code.qubit(2, f) >= 0]
        zs = [code.qubit(1, e) for e in m.rim(cx) if cx.is_boundary_cell(1, e)]
        return PauliOperator.from_support(n, x=xs, z=zs)
    raise TypeError(f"not a membrane: {type(m).__name__}")


# ---------------------------------------------------------------------------
# constructive logicals of the 3d3f slab
# ---------------------------------------------------------------------------

VERT, HORIZ = 2, 0  # axes: vertical strings run along z, horizontal along x


def right_boundary_string(code: StabilizerCode, species: str, direction: str, offset: int = 0) -> PauliOperator:
    cx = code.complex
    axis = VERT if direction == "vert" else HORIZ
    start = [0, 0, 0]
    start[HORIZ if axis == VERT else VERT] = offset
    return boundary_string(code, straight_curve(cx, start, axis, cx.dims[axis]), species)


def left_boundary_string(code: StabilizerCode, species: str, direction: str, offset: int = 0) -> PauliOperator:
    cx = code.complex
    Ly = cx.dims[1]
    axis = VERT if direction == "vert" else HORIZ
    start = [0, Ly, 0]
    start[HORIZ if axis == VERT else VERT] = offset
    bare = bare_string(code, straight_curve(cx, start, axis, cx.dims[axis]), species)
    s_off, t_off = _species_offsets(code)
    near = [e for e in range(cx.n_cells[1]) if cx.y_range(1, e)[0] >= Ly - 1]
    return decoration_solve(code, bare, [s_off + e for e in near] + [t_off + e for e in near])


def membrane_logicals(code: StabilizerCode) -> dict[str, PauliOperator]:
    """The four membranes spanning the bulk: R^sigma/R^tau, horizontal/vertical."""
    cx = code.complex
    horiz = dual_plane(cx, VERT, 0)   # pierces vertical edges
    vert = dual_plane(cx, HORIZ, 0)   # pierces horizontal edges
    return {
        "R_sigma_horiz": membrane(code, horiz, "sigma"),
        "R_tau_horiz": membrane(code, horiz, "tau"),
        "R_sigma_vert": membrane(code, vert, "sigma"),
        "R_tau_vert": membrane(code, vert, "tau"),
    }


def boundary_logicals(code: StabilizerCode) -> dict[str, PauliOperator]:
    """Z1..X4: right-boundary strings for qubits 1, 2 and left-boundary strings for 3, 4.

    Encoding on each boundary: Z = S^e_vert, X = S^m_horiz for the first
    qubit and Z = S^m_vert, X = S^e_horiz for the second.
    """
    r, lft = right_boundary_string, left_boundary_string
    return {
        "Z1": r(code, "e", "vert"), "X1": r(code, "m", "horiz"),
        "Z2": r(code, "m", "vert"), "X2": r(code, "e", "horiz"),
        "Z3": lft(code, "e", "vert"), "X3": lft(code, "m", "horiz"),
        "Z4": lft(code, "m", "vert"), "X4": lft(code, "e", "horiz"),
    }


PAIRED = {
    "X1X3": "R_sigma_horiz",
    "Z1Z3": "R_tau_vert",
    "X2X4": "R_tau_horiz",
    "Z2Z4": "R_sigma_vert",
}


def attach_logicals(code: StabilizerCode) -> StabilizerCode:
    """Fill ``code.logicals`` with the boundary strings and the bulk membranes."""
    code.logicals.update(boundary_logicals(code))
    code.logicals.update(membrane_logicals(code))
    return code
