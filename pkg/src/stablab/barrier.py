"""Energy barriers of local decompositions.

Two kinds of numbers come out of this module and are never mixed up:

* upper bounds ``path_energy`` of explicit paths (canonical and paired
  decompositions), usable at any size;
* exact minimax barriers from ``minimal_barrier_oracle``, feasible only on
  tiny instances.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .codes import StabilizerCode, build_3d3f
from .lattice import build_t2xi, make_curve
from .operators import PAIRED, _decorated, boundary_string, membrane, dual_plane, VERT, HORIZ
from .pauli import PauliOperator, pack_bits, unpack_bits
from .symmetry import SymmetrySpec, move_table, respects_symmetry


class InvalidPathError(ValueError):
    """Path breaks locality, endpoints, or its stored energies."""


class DecompositionError(ValueError):
    """No symmetric decomposition of the requested kind exists."""


@dataclass
class DecompositionPath:
    steps: list[PauliOperator]
    radius: int
    energies: list[int]
    symmetric: list[bool]
    label: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def peak(self) -> int:
        return max(self.energies, default=0)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "steps": len(self.steps),
            "radius": self.radius,
            "peak_energy": self.peak,
            "per_step_energies": list(self.energies),
            "symmetric": all(self.symmetric),
            **self.meta,
        }


# ---------------------------------------------------------------------------
# locality and energy
# ---------------------------------------------------------------------------


def support_extent(code: StabilizerCode, p: PauliOperator) -> int:
    """Largest per-axis extent (in cells) of the smallest box holding ``p``'s support."""
    q = p.support()
    if q.size == 0:
        return 0
    cx = code.complex
    base, span = code.qubit_geometry
    worst = 0
    for a in range(cx.D):
        lo = base[q, a]
        hi = lo + span[q, a]
        if not cx.periodic[a]:
            worst = max(worst, int(hi.max() - lo.min()))
            continue
        L = cx.dims[a]
        occupied = np.zeros(L, dtype=bool)
        occupied[lo % L] = True
        occupied[hi % L] = True
        if occupied.all():
            best = L
        else:
            # longest circular run of empty points; the support fills the rest
            k = int(np.flatnonzero(occupied)[0])
            ring = np.roll(occupied, -k)
            gaps = np.diff(np.flatnonzero(np.append(ring, True))) - 1
            best = L - int(gaps.max()) - 1
        worst = max(worst, best)
    return worst


def _recompute(code: StabilizerCode, steps, spec: SymmetrySpec | None):
    energies = [code.energy(s) for s in steps]
    sym = [respects_symmetry(code, s, spec) if spec is not None else True for s in steps]
    return energies, sym


def path_energy(code: StabilizerCode, path: DecompositionPath) -> int:
    """Barrier of one decomposition: the largest step energy (ground energy 0).

    Checks that the path starts at the identity, that neighbouring steps
    differ inside a ball of the path's radius, and that the stored energies
    match the syndromes.
    """
    if not path.steps:
        raise InvalidPathError("empty path")
    if not path.steps[0].is_identity():
        raise InvalidPathError("path must start at the identity")
    for k in range(1, len(path.steps)):
        delta = path.steps[k] * path.steps[k - 1]
        if support_extent(code, delta) > 2 * path.radius:
            raise InvalidPathError(f"step {k} is not local at radius {path.radius}")
    energies = [code.energy(s) for s in path.steps]
    if path.energies and list(path.energies) != energies:
        raise InvalidPathError("stored energies disagree with syndromes")
    return max(energies)


def _finish(code, steps, spec, radius, label, meta=None) -> DecompositionPath:
    energies, sym = _recompute(code, steps, spec)
    return DecompositionPath(steps, radius, energies, sym, label, dict(meta or {}))


# ---------------------------------------------------------------------------
# canonical decomposition of a right-boundary string
# ---------------------------------------------------------------------------

LOGICALS = {
    "Se-vert": ("e", VERT), "Se-horiz": ("e", HORIZ),
    "Sm-vert": ("m", VERT), "Sm-horiz": ("m", HORIZ),
}


class _ChainWalker:
    """Grows a frame by toggling edges; the frame is the string operator of the chain."""

    def __init__(self, code: StabilizerCode, species: str, axis: int):
        self.code = code
        self.cx = code.complex
        self.species = species
        self.axis = axis
        self.frame = PauliOperator.identity(code.n_qubits)
        self.steps = [self.frame]

    def _edge(self, t: int, h: int, along: int) -> int:
        c = [0, h, 0]
        c[self.axis] = t
        return self.cx.edge(c, along)

    def A(self, t, h):
        return self._edge(t, h, self.axis)

    def Y(self, t, h):
        return self._edge(t, h, 1)

    def toggle(self, edges):
        curve = make_curve(self.cx, edges)
        delta = _decorated(self.code, curve, self.species, truncate=True)
        self.frame = self.frame * delta
        self.steps.append(self.frame)

    def plaquette(self, t, h):
        self.toggle([self.A(t, h), self.A(t, h + 1), self.Y(t, h), self.Y(t + 1, h)])


def opening_layer(code: StabilizerCode, spec: SymmetrySpec) -> int:
    """First vertex layer whose vertex terms are not enforced.

    A vertex term at layer y touches the edge up to y + 1, so it is enforced
    iff y + 1 <= W; the top layer has no upward edge.
    """
    Ly = code.complex.dims[1]
    if spec.is_full or spec.W >= Ly:
        raise DecompositionError("symmetry covers the whole slab; use paired_decomposition")
    return int(spec.W)


def canonical_decomposition(code: StabilizerCode, spec: SymmetrySpec, logical: str = "Se-vert",
                            variant: str = "open", radius: int = 2) -> DecompositionPath:
    """Symmetric path from I to a right-boundary string.

    ``open``: grow a small loop from the boundary up to the first unenforced
    layer, cut it there, sweep one leg around the torus while the boundary
    string stretches, and let the two legs annihilate.

    ``vertical``: grow the loop along the string direction until it wraps
    into a boundary line and a bulk line, push the bulk line out of the
    enforced region and erase it edge by edge.
    """
    if logical not in LOGICALS:
        raise DecompositionError(f"unknown boundary logical {logical!r}; choose from {sorted(LOGICALS)}")
    species, axis = LOGICALS[logical]
    d = opening_layer(code, spec)
    La = code.complex.dims[axis]
    w = _ChainWalker(code, species, axis)
    if d == 0:
        for t in range(La):
            w.toggle([w.A(t, 0)])
    elif variant == "open":
        for h in range(d):
            w.plaquette(0, h)
        w.toggle([w.A(0, d)])
        for t in range(1, La):
            for h in range(d):
                w.plaquette(t, h)
            w.toggle([w.A(t, d)])
    elif variant == "vertical":
        for t in range(La):
            w.plaquette(t, 0)
        for h in range(1, d):
            for t in range(La):
                w.plaquette(t, h)
        for t in range(La):
            w.toggle([w.A(t, d)])
    else:
        raise DecompositionError(f"unknown variant {variant!r}")
    target = boundary_string(code, make_curve(code.complex, [w.A(t, 0) for t in range(La)]), species)
    if not code.in_stabilizer_group(w.frame * target):
        raise DecompositionError("path does not end on the target logical")
    return _finish(code, w.steps, spec, radius, f"{logical}/{variant}",
                   {"W": spec.to_json()["W"], "opening_layer": d, "variant": variant})


# ---------------------------------------------------------------------------
# paired membrane logicals under the full-bulk symmetry
# ---------------------------------------------------------------------------

_MEMBRANES = {
    "R_sigma_horiz": (VERT, "sigma"), "R_tau_horiz": (VERT, "tau"),
    "R_sigma_vert": (HORIZ, "sigma"), "R_tau_vert": (HORIZ, "tau"),
}


def paired_decomposition(code: StabilizerCode, spec: SymmetrySpec, target: str,
                         radius: int = 2) -> DecompositionPath:
    """Sweep an open dual membrane across the slab, one pierced edge at a time.

    ``target`` is a product label (``X1X3``, ``Z1Z3``, ``X2X4``, ``Z2Z4``) or
    the membrane name it equals.
    """
    name = PAIRED.get(target, target)
    if name not in _MEMBRANES:
        raise DecompositionError(f"{target!r} is not one of the paired logicals {sorted(PAIRED)}")
    normal, species = _MEMBRANES[name]
    cx = code.complex
    other = HORIZ if normal == VERT else VERT
    edges = sorted(dual_plane(cx, normal, 0).edges,
                   key=lambda e: (int(cx.coords[1][e][1]), int(cx.coords[1][e][other])))
    n = code.n_qubits
    frame = PauliOperator.identity(n)
    steps = [frame]
    for e in edges:
        frame = frame * PauliOperator.from_support(n, x=[code.qubit(1, e, species)])
        steps.append(frame)
    full = membrane(code, dual_plane(cx, normal, 0), species)
    if frame != full:
        raise DecompositionError("sweep did not assemble the membrane")
    return _finish(code, steps, spec, radius, f"{target}/sweep", {"membrane": name})


# ---------------------------------------------------------------------------
# exact minimax oracle for tiny instances
# ---------------------------------------------------------------------------


@dataclass
class OracleResult:
    status: str  # "found" | "unreachable" | "exhausted"
    barrier: int | None
    states: int
    reachable_dim: int
    weight_cap: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def minimal_barrier_oracle(code: StabilizerCode, spec: SymmetrySpec | None, logical: PauliOperator,
                           weight_cap: int = 200_000, radius: int = 1) -> OracleResult:
    """Exact minimax barrier to reach ``logical`` modulo stabilizers.

    States are Pauli frames reduced modulo the stabilizer group; edges are
    the symmetric local moves.  Reachability is settled first by linear
    algebra: the walk can reach exactly the span of the moves, so a target
    outside that span is reported ``unreachable`` without enumerating it.
    Otherwise a bottleneck Dijkstra runs until it pops the target class, or
    reports ``exhausted`` after ``weight_cap`` distinct states.
    """
    spec = spec or SymmetrySpec("none")
    n = code.n_qubits
    ncols = 2 * n
    stab = code.stabilizer_space
    moves = []
    for x, z in move_table(code, spec, radius=radius, dedup=True):
        bits = np.zeros(ncols, dtype=np.uint8)
        bits[x] = 1
        bits[n + z] = 1
        moves.append(stab.reduce(pack_bits(bits)))
    moves = [m for m in moves if m.any()]
    target = stab.reduce(logical.symplectic())
    if moves:
        reach = stab.extended(np.stack(moves))
    else:
        reach = stab
    reach_dim = reach.rank - stab.rank
    if not target.any():
        return OracleResult("found", 0, 1, reach_dim, weight_cap)
    if not reach.contains(target.copy()):
        return OracleResult("unreachable", None, 0, reach_dim, weight_cap)

    # dedupe move classes, deterministic order
    uniq = {m.tobytes(): m for m in moves}
    move_arr = [uniq[k] for k in sorted(uniq)]
    gx, gz = code._gen_sparse

    def energy(v: np.ndarray) -> int:
        b = unpack_bits(v, ncols).astype(np.int64)
        return int(((gx @ b[n:] + gz @ b[:n]) & 1).sum())

    start = np.zeros_like(target)
    goal = target.tobytes()
    best = {start.tobytes(): 0}
    heap = [(0, start.tobytes())]
    done = set()
    while heap:
        cost, key = heapq.heappop(heap)
        if key in done:
            continue
        if key == goal:
            return OracleResult("found", cost, len(best), reach_dim, weight_cap)
        done.add(key)
        v = np.frombuffer(key, dtype=np.uint64)
        for m in move_arr:
            nxt = stab.reduce(v ^ m)
            nk = nxt.tobytes()
            if nk in done:
                continue
            c = max(cost, energy(nxt))
            if c < best.get(nk, 1 << 60):
                if nk not in best and len(best) >= weight_cap:
                    return OracleResult("exhausted", None, len(best), reach_dim, weight_cap)
                best[nk] = c
                heapq.heappush(heap, (c, nk))
    return OracleResult("unreachable", None, len(best), reach_dim, weight_cap)


# ---------------------------------------------------------------------------
# scaling sweep
# ---------------------------------------------------------------------------


def _affine_fit(xs, ys):
    A = np.vstack([np.ones(len(xs)), xs]).T
    coef, *_ = np.linalg.lstsq(A, np.asarray(ys, float), rcond=None)
    resid = np.asarray(ys, float) - A @ coef
    return float(coef[0]), float(coef[1]), float(np.abs(resid).max()) if len(xs) else 0.0


def verify_scaling(W_list, L1: int, L2: int, L_y: int | None = None, logical: str = "Se-vert",
                   variants=("open", "vertical"), radius: int = 2, code: StabilizerCode | None = None) -> dict:
    """Canonical barriers of a right-boundary logical as the enforced width varies.

    ``L1`` is the length of the direction the logical wraps, ``L2`` the other
    boundary direction.  Rows report each variant's peak and their minimum;
    the affine fit uses the W values where the ``open`` variant is the
    minimiser, i.e. where W is the smallest of the three lengths.
    """
    species, axis = LOGICALS[logical]
    W_list = [int(w) for w in W_list]
    if L_y is None:
        L_y = max(W_list) + 2
    if max(W_list) >= L_y:
        raise DecompositionError("every W must be below L_y")
    dims = [0, L_y, 0]
    dims[axis] = L1
    dims[HORIZ if axis == VERT else VERT] = L2
    if code is None:
        code = build_3d3f(build_t2xi(*dims))
    rows = []
    for W in W_list:
        spec = SymmetrySpec("vertex", W)
        row = {"W": W}
        for var in variants:
            path = canonical_decomposition(code, spec, logical, var, radius)
            row[var] = path_energy(code, path)
            row[f"{var}_symmetric"] = all(path.symmetric)
        row["delta"] = min(row[v] for v in variants)
        row["winner"] = min(variants, key=lambda v: (row[v], variants.index(v)))
        rows.append(row)
    fit_rows = [r for r in rows if r["winner"] == "open" and r["W"] > 0]
    fit = None
    if len(fit_rows) >= 2:
        a, b, res = _affine_fit([r["W"] for r in fit_rows], [r["open"] for r in fit_rows])
        fit = {"intercept": a, "slope": b, "max_residual": res, "points": len(fit_rows)}
    return {"dims": list(code.complex.dims), "logical": logical, "rows": rows, "fit": fit,
            "label": "canonical upper bounds"}
