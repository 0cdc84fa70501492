"""Cubic cell complexes: the T^2 x I slab and fully periodic tori.

Cells of dimension k are identified by an orientation (the k axes they span)
and a base coordinate (their minimal corner).  Ids are assigned block by
orientation, and row-major inside a block with x fastest.

The slab is periodic in x and z and open in y.  ``L_y`` counts cells in y, so
there are ``L_y + 1`` vertex layers; the right boundary is the plane y = 0 and
the left boundary is y = L_y.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

# Viewing direction used to decide which legs lie over/under a plaquette and
# how strings are framed.  Only its sign pattern matters.
VIEW = (1, -1, -1)
PROJECTION_TAG = "view(+x,-y,-z)"


class SizeError(ValueError):
    """Lattice dimensions too small for the requested identifications."""


class GeometryError(ValueError):
    """A construction left the lattice."""


class TopologyError(ValueError):
    """Complex has the wrong topology for a construction."""


class CellComplex:
    """Cubical complex on a box with per-axis periodic or open boundaries."""

    def __init__(self, dims, periodic):
        dims = tuple(int(d) for d in dims)
        periodic = tuple(bool(p) for p in periodic)
        if len(dims) != len(periodic) or len(dims) not in (2, 3):
            raise SizeError("need 2 or 3 axes with matching boundary flags")
        if min(dims) < 2:
            raise SizeError(f"all dims must be >= 2, got {dims}")
        self.dims = dims
        self.periodic = periodic
        self.D = len(dims)
        self.vshape = tuple(L if p else L + 1 for L, p in zip(dims, periodic))
        self.orients = [list(combinations(range(self.D), k)) for k in range(self.D + 1)]
        self._shapes = []
        self._offsets = []
        self.n_cells = []
        for k in range(self.D + 1):
            shapes = [tuple(dims[a] if a in o else self.vshape[a] for a in range(self.D))
                      for o in self.orients[k]]
            sizes = [int(np.prod(s)) for s in shapes]
            self._shapes.append(shapes)
            self._offsets.append(np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64))
            self.n_cells.append(int(sum(sizes)))
        self._build_tables()

    # -- enumeration ------------------------------------------------------
    def _build_tables(self):
        self.coords = []
        self.orient_of = []
        for k in range(self.D + 1):
            cs, os_ = [], []
            for oi, shape in enumerate(self._shapes[k]):
                grid = np.indices(shape[::-1]).reshape(self.D, -1)[::-1].T
                cs.append(grid)
                os_.append(np.full(len(grid), oi, dtype=np.int64))
            self.coords.append(np.concatenate(cs).astype(np.int64))
            self.orient_of.append(np.concatenate(os_))
        self.boundary = [None]
        for k in range(1, self.D + 1):
            table = np.empty((self.n_cells[k], 2 * k), dtype=np.int64)
            for cid in range(self.n_cells[k]):
                o = self.orients[k][self.orient_of[k][cid]]
                p = self.coords[k][cid]
                cols = []
                for a in o:
                    sub = tuple(b for b in o if b != a)
                    step = np.zeros(self.D, np.int64)
                    step[a] = 1
                    cols.append(self.cell_id(k - 1, sub, p))
                    cols.append(self.cell_id(k - 1, sub, p + step))
                table[cid] = cols
            if (table < 0).any():
                raise GeometryError("boundary of a cell left the lattice")
            self.boundary.append(table)
        self.coboundary = []
        for k in range(self.D):
            lists = [[] for _ in range(self.n_cells[k])]
            for hi in range(self.n_cells[k + 1]):
                for lo in self.boundary[k + 1][hi]:
                    lists[lo].append(hi)
            width = max(len(x) for x in lists)
            arr = np.full((self.n_cells[k], width), -1, dtype=np.int64)
            for i, x in enumerate(lists):
                arr[i, : len(x)] = sorted(x)
            self.coboundary.append(arr)
        self.coboundary.append(np.zeros((self.n_cells[self.D], 0), dtype=np.int64))

    def cell_id(self, k: int, orient, coord) -> int:
        """Id of the k-cell spanning ``orient`` with base corner ``coord``; -1 if outside."""
        orient = tuple(orient)
        oi = self.orients[k].index(orient)
        shape = self._shapes[k][oi]
        idx = 0
        stride = 1
        for a in range(self.D):
            c = int(coord[a])
            if self.periodic[a]:
                c %= shape[a]
            elif c < 0 or c >= shape[a]:
                return -1
            idx += c * stride
            stride *= shape[a]
        return int(self._offsets[k][oi] + idx)

    def cell(self, k: int, cid: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.orients[k][self.orient_of[k][cid]], tuple(int(c) for c in self.coords[k][cid])

    def vertex(self, coord) -> int:
        return self.cell_id(0, (), coord)

    def edge(self, coord, axis: int) -> int:
        return self.cell_id(1, (axis,), coord)

    def face(self, coord, normal: int) -> int:
        if self.D == 2:
            return self.cell_id(2, (0, 1), coord)
        return self.cell_id(2, tuple(a for a in range(3) if a != normal), coord)

    def boundary_of(self, k: int, cid: int) -> list[int]:
        return self.boundary[k][cid].tolist()

    def coboundary_of(self, k: int, cid: int) -> list[int]:
        row = self.coboundary[k][cid]
        return row[row >= 0].tolist()

    def edge_axis(self, e: int) -> int:
        return self.orients[1][self.orient_of[1][e]][0]

    def face_normal(self, f: int) -> int:
        o = self.orients[2][self.orient_of[2][f]]
        return [a for a in range(self.D) if a not in o][0] if self.D == 3 else 2

    def edge_vertices(self, e: int) -> tuple[int, int]:
        a, b = self.boundary[1][e]
        return int(a), int(b)

    # -- open direction ---------------------------------------------------
    @cached_property
    def open_axis(self) -> int | None:
        opens = [a for a in range(self.D) if not self.periodic[a]]
        return opens[0] if opens else None

    @property
    def is_t2xi(self) -> bool:
        return self.D == 3 and self.periodic == (True, False, True)

    def y_range(self, k: int, cid: int) -> tuple[int, int]:
        """Smallest and largest coordinate along the open axis touched by the cell."""
        a = self.open_axis
        if a is None:
            return (0, 0)
        o = self.orients[k][self.orient_of[k][cid]]
        y = int(self.coords[k][cid][a])
        return (y, y + 1) if a in o else (y, y)

    def on_side(self, k: int, cid: int, side: str) -> bool:
        """True if the cell lies inside the boundary plane ``side`` ('right' y=0, 'left' y=L_y)."""
        a = self.open_axis
        if a is None:
            return False
        lo, hi = self.y_range(k, cid)
        plane = 0 if side == "right" else self.dims[a]
        return lo == hi == plane

    def side_cells(self, k: int, side: str) -> np.ndarray:
        return np.array([c for c in range(self.n_cells[k]) if self.on_side(k, c, side)], dtype=np.int64)

    def is_boundary_cell(self, k: int, cid: int) -> bool:
        return self.on_side(k, cid, "right") or self.on_side(k, cid, "left")

    # -- over / under legs ------------------------------------------------
    def over_under_edges(self, f: int) -> tuple[list[int], list[int]]:
        """Legs lying over and under face ``f`` in the fixed projection.

        Each face of the infinite lattice has one O and one U leg, both
        perpendicular to the face.  Legs that fall outside an open boundary are
        dropped, so truncated faces return shorter lists.
        """
        if self.D != 3:
            return [], []
        orient, p = self.cell(2, f)
        c = [a for a in range(3) if a not in orient][0]
        a, b = orient
        p = np.array(p)
        ea, eb, ec = (np.eye(3, dtype=np.int64)[i] for i in (a, b, c))
        hi = p + (VIEW[a] > 0) * ea + (VIEW[b] > 0) * eb
        lo = p + (VIEW[a] < 0) * ea + (VIEW[b] < 0) * eb
        if VIEW[c] > 0:
            o, u = self.edge(hi, c), self.edge(lo - ec, c)
        else:
            o, u = self.edge(hi - ec, c), self.edge(lo, c)
        return ([o] if o >= 0 else []), ([u] if u >= 0 else [])

    @cached_property
    def over_under_table(self) -> np.ndarray:
        """(n_faces, 2) array of O and U leg ids, -1 where truncated."""
        out = np.full((self.n_cells[2], 2), -1, dtype=np.int64)
        for f in range(self.n_cells[2]):
            o, u = self.over_under_edges(f)
            if o:
                out[f, 0] = o[0]
            if u:
                out[f, 1] = u[0]
        return out

    # -- serialization ----------------------------------------------------
    def describe(self, n_qubits: int | None = None) -> dict:
        names = "xyz"[: self.D]
        return {
            "dims": list(self.dims),
            "boundary_conditions": {names[a]: ("periodic" if self.periodic[a] else "open")
                                    for a in range(self.D)},
            "projection": PROJECTION_TAG if self.D == 3 else None,
            "cells": self.n_cells,
            "n_qubits": n_qubits,
        }

    def to_json(self, n_qubits: int | None = None) -> str:
        return json.dumps(self.describe(n_qubits), sort_keys=True)


def build_t2xi(L_x: int, L_y: int, L_z: int) -> CellComplex:
    """Slab periodic in x and z with open smooth boundaries at y = 0 and y = L_y."""
    return CellComplex((L_x, L_y, L_z), (True, False, True))


def build_torus(dims) -> CellComplex:
    """Fully periodic 2d or 3d torus."""
    return CellComplex(dims, (True,) * len(dims))


# ---------------------------------------------------------------------------
# curves and dual membranes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Curve:
    """A chain of edges; repeated edges cancel mod 2."""

    edges: tuple[int, ...]
    closed: bool

    def endpoints(self, cx: CellComplex) -> list[int]:
        """Vertices touched an odd number of times."""
        counts: dict[int, int] = {}
        for e in self.edges:
            for v in cx.edge_vertices(e):
                counts[v] = counts.get(v, 0) + 1
        return sorted(v for v, c in counts.items() if c % 2)

    def edge_set(self) -> set[int]:
        out: set[int] = set()
        for e in self.edges:
            out ^= {e}
        return out


def make_curve(cx: CellComplex, edges) -> Curve:
    edges = tuple(int(e) for e in edges)
    c = Curve(edges, True)
    return Curve(edges, not c.endpoints(cx))


def straight_curve(cx: CellComplex, start, axis: int, length: int) -> Curve:
    """``length`` consecutive edges along ``axis`` from vertex coordinate ``start``."""
    start = np.array(start, dtype=np.int64)
    step = np.zeros(cx.D, np.int64)
    step[axis] = 1
    edges = []
    for t in range(length):
        e = cx.edge(start + t * step, axis)
        if e < 0:
            raise GeometryError(f"curve leaves the lattice at {tuple(start + t * step)}")
        edges.append(e)
    return make_curve(cx, edges)


def path_curve(cx: CellComplex, vertices) -> Curve:
    """Curve through a list of vertex coordinates, consecutive ones adjacent."""
    edges = []
    pts = [np.array(v, dtype=np.int64) for v in vertices]
    for a, b in zip(pts, pts[1:]):
        diff = b - a
        for ax in range(cx.D):
            if cx.periodic[ax]:
                L = cx.dims[ax]
                diff[ax] = (diff[ax] + L // 2) % L - L // 2 if L > 2 else diff[ax] % L
        nz = np.flatnonzero(diff)
        if len(nz) != 1 or abs(diff[nz[0]]) != 1:
            raise GeometryError(f"vertices {tuple(a)} and {tuple(b)} are not adjacent")
        ax = int(nz[0])
        base = a if diff[ax] > 0 else b
        e = cx.edge(base, ax)
        if e < 0 or cx.vertex(a) < 0 or cx.vertex(b) < 0:
            raise GeometryError("path leaves the lattice")
        edges.append(e)
    return make_curve(cx, edges)


# Legs attached to each edge of a decorated string, keyed by the edge axis.
# Entries are (vertex offset from the edge's base, leg axis).  The table was
# obtained once by solving, over GF(2), for translation-invariant legs such
# that closed bulk loops carry no sigma-flux for e strings (no tau-flux for m
# strings) and closed loops in the right boundary plane carry no flux at all;
# the minimum-weight solution is frozen here.  In this gauge every leg sits
# under the offset copy of the curve, so the "over" set is always empty.
UNDER_LEGS = {
    0: (((0, 0, 0), 2), ((1, -1, 0), 1)),
    1: (((0, 0, 0), 0), ((0, 0, 0), 2)),
    2: (((-1, 0, 1), 0), ((0, -1, 1), 1)),
}


def offset_curve(cx: CellComplex, curve: Curve, truncate: bool = False) -> tuple[list[int], list[int]]:
    """Over and under decoration edges of ``curve`` relative to its offset copy.

    Legs of consecutive edges that coincide cancel.  A leg that falls outside
    an open boundary raises ``GeometryError`` unless ``truncate`` is set, in
    which case it is dropped (the smooth-boundary truncation).
    """
    if cx.D != 3:
        raise GeometryError("decorations are defined on 3d complexes only")
    under: set[int] = set()
    for e in curve.edges:
        axis = cx.edge_axis(e)
        base = cx.coords[1][e]
        for off, leg_axis in UNDER_LEGS[axis]:
            leg = cx.edge(base + np.asarray(off), leg_axis)
            if leg < 0:
                if truncate:
                    continue
                raise GeometryError(f"decoration of edge {e} leaves the lattice")
            under ^= {leg}
    return [], sorted(under)


@dataclass(frozen=True)
class DualMembrane:
    """Set of edges pierced by a dual surface (3d) or dual curve (2d)."""

    edges: frozenset[int]

    def boundary_faces(self, cx: CellComplex) -> list[int]:
        """Faces containing an odd number of membrane edges: the dual boundary."""
        out = []
        for f in range(cx.n_cells[2]):
            if sum(1 for e in cx.boundary[2][f] if e in self.edges) % 2:
                out.append(f)
        return out
