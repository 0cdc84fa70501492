"""Hot inner loops, compiled with numba when available.

Every kernel exists twice: a loop version that numba compiles and a numpy
version used when numba is missing or disabled.  Set ``STABLAB_NO_NUMBA=1``
to force the numpy path.  Both paths are required to return identical
results; ``tests/test_kernels.py`` checks this.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("STABLAB_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED

ONE = np.uint64(1)


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


# ---------------------------------------------------------------------------
# GF(2) row reduction on bit-packed rows
# ---------------------------------------------------------------------------


def _rref_loops(M, ncols):
    m, w = M.shape
    pivots = np.empty(min(m, ncols), dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        wi = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        sel = -1
        for i in range(r, m):
            if M[i, wi] & bit:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            for k in range(w):
                tmp = M[r, k]
                M[r, k] = M[sel, k]
                M[sel, k] = tmp
        for i in range(m):
            if i != r and (M[i, wi] & bit):
                for k in range(w):
                    M[i, k] ^= M[r, k]
        pivots[r] = c
        r += 1
    return pivots[:r]


def _rref_numpy(M, ncols):
    m, _ = M.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        wi, sh = c >> 6, np.uint64(c & 63)
        col = ((M[r:, wi] >> sh) & ONE).astype(bool)
        hits = np.flatnonzero(col)
        if hits.size == 0:
            continue
        sel = r + int(hits[0])
        if sel != r:
            M[[r, sel]] = M[[sel, r]]
        mask = ((M[:, wi] >> sh) & ONE).astype(bool)
        mask[r] = False
        if mask.any():
            M[mask] ^= M[r]
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


_rref_jit = _njit(_rref_loops)


def rref_inplace(M: np.ndarray, ncols: int) -> np.ndarray:
    """Reduce packed rows ``M`` (uint64, C-contiguous) in place; return pivot columns."""
    if M.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if USE_NUMBA:
        return _rref_jit(M, ncols)
    return _rref_numpy(M, ncols)


def _reduce_loops(v, R, pivots):
    for i in range(pivots.shape[0]):
        c = pivots[i]
        if v[c >> 6] & (np.uint64(1) << np.uint64(c & 63)):
            for k in range(v.shape[0]):
                v[k] ^= R[i, k]
    return v


def _reduce_numpy(v, R, pivots):
    for i, c in enumerate(pivots):
        if (v[c >> 6] >> np.uint64(c & 63)) & ONE:
            v ^= R[i]
    return v


_reduce_jit = _njit(_reduce_loops)


def reduce_vector(v: np.ndarray, R: np.ndarray, pivots: np.ndarray) -> np.ndarray:
    """Reduce packed vector ``v`` in place against a reduced row-echelon basis."""
    if pivots.shape[0] == 0:
        return v
    if USE_NUMBA:
        return _reduce_jit(v, R, pivots)
    return _reduce_numpy(v, R, pivots)


# ---------------------------------------------------------------------------
# Syndromes via qubit -> generator incidence (CSR)
# ---------------------------------------------------------------------------


def _flips_loops(indptr, indices, qubits, out):
    for j in range(qubits.shape[0]):
        q = qubits[j]
        for t in range(indptr[q], indptr[q + 1]):
            out[indices[t]] ^= 1
    return out


def _flips_numpy(indptr, indices, qubits, out):
    if qubits.size == 0:
        return out
    starts = indptr[qubits]
    stops = indptr[qubits + 1]
    lens = stops - starts
    if lens.sum() == 0:
        return out
    idx = np.repeat(stops - lens.cumsum(), lens) + np.arange(lens.sum())
    hit = np.bincount(indices[idx], minlength=out.shape[0]) & 1
    out ^= hit.astype(out.dtype)
    return out


_flips_jit = _njit(_flips_loops)


def accumulate_flips(indptr, indices, qubits, out):
    """XOR into ``out`` one flip per (qubit, incident generator) pair."""
    if USE_NUMBA:
        return _flips_jit(indptr, indices, qubits, out)
    return _flips_numpy(indptr, indices, qubits, out)


# ---------------------------------------------------------------------------
# Metropolis chain over a fixed move table
# ---------------------------------------------------------------------------


def _metropolis_loops(syn, energy, frame, flip_ptr, flip_idx, mv_ptr, mv_idx, proposals, uniforms, boltz):
    n_acc = 0
    for s in range(proposals.shape[0]):
        k = proposals[s]
        de = 0
        for t in range(flip_ptr[k], flip_ptr[k + 1]):
            de += 1 - 2 * syn[flip_idx[t]]
        if de <= 0 or uniforms[s] < boltz[de]:
            for t in range(flip_ptr[k], flip_ptr[k + 1]):
                syn[flip_idx[t]] ^= 1
            for t in range(mv_ptr[k], mv_ptr[k + 1]):
                frame[mv_idx[t]] ^= 1
            energy += de
            n_acc += 1
    return energy, n_acc


def _metropolis_numpy(syn, energy, frame, flip_ptr, flip_idx, mv_ptr, mv_idx, proposals, uniforms, boltz):
    n_acc = 0
    for s in range(proposals.shape[0]):
        k = proposals[s]
        hits = flip_idx[flip_ptr[k]:flip_ptr[k + 1]]
        de = int(hits.size - 2 * int(syn[hits].sum()))
        if de <= 0 or uniforms[s] < boltz[de]:
            syn[hits] ^= 1
            frame[mv_idx[mv_ptr[k]:mv_ptr[k + 1]]] ^= 1
            energy += de
            n_acc += 1
    return energy, n_acc


_metropolis_jit = _njit(_metropolis_loops)


def metropolis_chunk(syn, energy, frame, flip_ptr, flip_idx, mv_ptr, mv_idx, proposals, uniforms, boltz):
    """Run one block of Metropolis proposals; mutate ``syn`` and ``frame`` in place.

    Move ``k`` flips generators ``flip_idx[flip_ptr[k]:flip_ptr[k+1]]`` and
    toggles symplectic positions ``mv_idx[mv_ptr[k]:mv_ptr[k+1]]`` of the
    frame.  ``boltz[de]`` is the acceptance probability of an energy rise
    ``de > 0``; tabulating it keeps both code paths bit-identical.  Returns
    ``(energy, accepted)``.  Random numbers are drawn by the
    caller so the two code paths consume identical streams.
    """
    if USE_NUMBA:
        e, a = _metropolis_jit(syn, np.int64(energy), frame, flip_ptr, flip_idx, mv_ptr, mv_idx,
                               proposals, uniforms, boltz)
        return int(e), int(a)
    return _metropolis_numpy(syn, int(energy), frame, flip_ptr, flip_idx, mv_ptr, mv_idx,
                             proposals, uniforms, boltz)
