"""Time the numba kernels against the numpy fallback.

Each path runs in its own interpreter (the switch is read at import time):

    python3 benchmarks/bench_kernels.py            # both paths, side by side
    python3 benchmarks/bench_kernels.py --worker   # one path, as set by STABLAB_NO_NUMBA

Kernels timed: GF(2) row reduction of a code's check matrix, and a block of
Metropolis proposals on the 3d3f slab.  Numba timings exclude the first
(compiling) call.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def worker(L: int, proposals: int, repeat: int) -> dict:
    from stablab import _kernels
    from stablab.codes import build_3d3f
    from stablab.dynamics import MoveSet
    from stablab.lattice import build_t2xi
    from stablab.symmetry import SymmetrySpec

    code = build_3d3f(build_t2xi(L, L, L))
    H = code.check_matrix
    ncols = 2 * code.n_qubits
    moves = MoveSet(code, SymmetrySpec("vertex", L // 2))
    rng = np.random.default_rng(0)
    props = rng.integers(0, moves.size, proposals).astype(np.int64)
    unif = rng.random(proposals)
    boltz = moves.boltzmann(0.5)

    def rref():
        _kernels.rref_inplace(H.copy(), ncols)

    def chain():
        syn = np.zeros(len(code.generators), np.uint8)
        frame = np.zeros(ncols, np.uint8)
        _kernels.metropolis_chunk(syn, 0, frame, moves.flip_ptr, moves.flip_idx, moves.mv_ptr, moves.mv_idx,
                                  props, unif, boltz)

    rref(), chain()  # warm-up (compilation on the numba path)
    return {
        "numba": _kernels.USE_NUMBA,
        "n_qubits": code.n_qubits,
        "rref_s": _best_of(rref, repeat),
        "metropolis_s": _best_of(chain, repeat),
        "proposals": proposals,
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=int, default=4)
    ap.add_argument("--proposals", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--worker", action="store_true")
    args = ap.parse_args()
    if args.worker:
        print(json.dumps(worker(args.L, args.proposals, args.repeat)))
        return
    rows = []
    for disable in ("0", "1"):
        env = dict(os.environ, STABLAB_NO_NUMBA=disable)
        cmd = [sys.executable, __file__, "--worker", "--L", str(args.L), "--proposals", str(args.proposals),
               "--repeat", str(args.repeat)]
        out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
        rows.append(json.loads(out.stdout))
    fast, slow = rows
    print(f"3d3f L={args.L}, n={fast['n_qubits']} qubits, {args.proposals} proposals")
    print(f"{'kernel':<12}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for key, label in (("rref_s", "rref"), ("metropolis_s", "metropolis")):
        print(f"{label:<12}{fast[key]:>12.4f}{slow[key]:>12.4f}{slow[key] / fast[key]:>10.1f}")
    if not fast["numba"]:
        print("numba is not installed: both columns used the numpy path")


if __name__ == "__main__":
    main()
