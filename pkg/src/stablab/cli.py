"""Command-line entry point: ``stablab {build,verify,ops,barrier,sweep,simulate}``.

Every artifact is JSON (reports) or CSV (series), carries the full config
echo and the code fixture hash, and is byte-identical for identical argv.
The default output directory comes from ``$STABLAB_OUT`` (else ``./out``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__, gf2
from .barrier import (LOGICALS, DecompositionError, InvalidPathError, canonical_decomposition,
                      paired_decomposition, path_energy, verify_scaling)
from .codes import InvalidCodeError, build_3d3f, build_paramagnet_bulk, build_toric, count_logical_qubits
from .lattice import GeometryError, SizeError, TopologyError, build_t2xi, build_torus, straight_curve
from .operators import (PAIRED, attach_logicals, bare_string, boundary_string, decorated_string, membrane_logicals,
                        syndrome)
from .symmetry import SymmetrySpec, SymmetrySpecError

EXIT_OK = 0
EXIT_USAGE = 2          # argparse: unknown subcommand or malformed flags
EXIT_DIMS = 3           # dims invalid for the model
EXIT_WIDTH = 4          # W >= L_y where a canonical (finite-W) path is required
EXIT_CONFIG = 5         # any other validation failure
EXIT_NO_DECOMP = 6      # requested decomposition does not exist

MODELS = ("toric2d", "toric3d", "3d3f", "parabulk")
OUT_ENV = "STABLAB_OUT"


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


@dataclass
class ExperimentConfig:
    """Parameters of one CLI invocation; round-trips through JSON."""

    command: str
    model: str = "3d3f"
    dims: list[int] = field(default_factory=lambda: [4, 4, 4])
    W: str = "full"
    T: float = 0.45
    trials: int = 1
    seed: int = 0
    steps: int = 10_000
    checkpoints: int = 0
    radius: int = 2
    logical: str = "Se-vert"
    variant: str = "min"
    kind: str = "Se"
    path: str = "vertical"
    length: int = 3
    y: int = 0
    Ws: list[int] = field(default_factory=lambda: [2, 4, 6, 8])
    dump: bool = False
    csv: bool = False

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise CliError(EXIT_CONFIG, "config", f"unknown config keys {sorted(unknown)}")
        return cls(**data)


# ---------------------------------------------------------------------------
# model construction
# ---------------------------------------------------------------------------


def parse_dims(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise CliError(EXIT_DIMS, "dims", f"cannot parse dims {text!r}") from exc


def build_model(model: str, dims):
    dims = parse_dims(dims)
    try:
        if model == "toric2d":
            if len(dims) != 2:
                raise CliError(EXIT_DIMS, "dims", "toric2d needs --dims Lx,Ly")
            return build_toric(2, build_torus(dims))
        if len(dims) != 3:
            raise CliError(EXIT_DIMS, "dims", f"{model} needs --dims Lx,Ly,Lz")
        if model == "toric3d":
            return build_toric(3, build_torus(dims))
        if model == "3d3f":
            return attach_logicals(build_3d3f(build_t2xi(*dims)))
        if model == "parabulk":
            return build_paramagnet_bulk(build_t2xi(*dims))
    except (SizeError, TopologyError) as exc:
        raise CliError(EXIT_DIMS, "dims", str(exc)) from exc
    raise CliError(EXIT_CONFIG, "model", f"unknown model {model!r}")


def per_boundary_k(code) -> dict[str, int]:
    """Logical qubits of the generators living entirely in each boundary plane."""
    cx = code.complex
    out = {}
    for side in ("right", "left"):
        idx = np.array([i for i, q in enumerate(code.layout) if cx.on_side(q.dim, q.cell, side)], dtype=np.int64)
        inside = np.zeros(code.n_qubits, dtype=bool)
        inside[idx] = True
        rows = [g for g in code.generators if not g.is_identity() and inside[g.support()].all()]
        if not rows:
            out[side] = len(idx)
            continue
        bits = np.stack([np.concatenate([g.x_bits()[idx], g.z_bits()[idx]]) for g in rows])
        out[side] = len(idx) - gf2.rank(bits)
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _spec(cfg: ExperimentConfig, model: str) -> SymmetrySpec:
    family = "paramagnet-all" if model == "parabulk" else "vertex"
    try:
        return SymmetrySpec.parse(family, cfg.W)
    except (SymmetrySpecError, ValueError) as exc:
        raise CliError(EXIT_CONFIG, "W", str(exc)) from exc


def cmd_build(cfg: ExperimentConfig) -> dict:
    code = build_model(cfg.model, cfg.dims)
    rep = {"model": code.name, "complex": code.complex.describe(code.n_qubits),
           "generators": len(code.generators), "symmetry_generators": len(code.symmetry)}
    if cfg.dump:
        rep["generator_hex"] = [f"{t.kind}/{t.cell}/{g.to_hex()}" for g, t in zip(code.generators, code.tags)]
    return rep, code


def cmd_verify(cfg: ExperimentConfig) -> dict:
    code = build_model(cfg.model, cfg.dims)
    bad = code.noncommuting_pairs()
    rep = {
        "model": code.name, "dims": list(code.complex.dims), "n_qubits": code.n_qubits,
        "generators": len(code.generators), "commuting": bool(len(bad) == 0),
    }
    if len(bad):
        rep["k"] = None
        return rep, code
    rep["rank"] = code.rank()
    rep["k"] = count_logical_qubits(code)
    if code.symmetry:
        rep["symmetry_commutes"] = bool(len(code.symmetry_violations()) == 0)
    if code.name == "parabulk":
        rep["k_per_boundary"] = per_boundary_k(code)
    if code.logicals:
        rep["logicals"] = {k: v.weight for k, v in code.logicals.items()}
    return rep, code


def cmd_ops(cfg: ExperimentConfig) -> dict:
    code = build_model(cfg.model, cfg.dims)
    if code.name != "3d3f":
        raise CliError(EXIT_CONFIG, "model", "ops is defined for the 3d3f model")
    cx = code.complex
    axis = {"vertical": 2, "horizontal": 0, "y": 1}.get(cfg.path)
    if axis is None:
        raise CliError(EXIT_CONFIG, "path", f"unknown path {cfg.path!r}")
    start = [1, cfg.y, 1]
    try:
        if cfg.kind.startswith("R"):
            op = membrane_logicals(code)[cfg.kind]
        else:
            curve = straight_curve(cx, start, axis, cfg.length)
            kind = cfg.kind
            if kind in ("Se", "Sm", "Seps"):
                op = decorated_string(code, curve, {"Se": "e", "Sm": "m", "Seps": "eps"}[kind])
            elif kind in ("bare-e", "bare-m"):
                op = bare_string(code, curve, kind[-1])
            elif kind in ("bdy-e", "bdy-m"):
                op = boundary_string(code, curve, kind[-1])
            else:
                raise CliError(EXIT_CONFIG, "kind", f"unknown operator kind {kind!r}")
    except (GeometryError, KeyError) as exc:
        raise CliError(EXIT_CONFIG, "geometry", str(exc)) from exc
    rep = syndrome(code, op).to_dict()
    rep.update({"operator": op.to_hex(), "weight": op.weight})
    return rep, code


def _barrier_for(code, spec, cfg):
    variants = ("open", "vertical") if cfg.variant == "min" else (cfg.variant,)
    best = None
    for v in variants:
        path = canonical_decomposition(code, spec, cfg.logical, v, cfg.radius)
        path_energy(code, path)
        if best is None or path.peak < best.peak:
            best = path
    return best


def cmd_barrier(cfg: ExperimentConfig):
    code = build_model(cfg.model, cfg.dims)
    if code.name != "3d3f":
        raise CliError(EXIT_CONFIG, "model", "barrier paths are defined for the 3d3f model")
    if cfg.logical not in LOGICALS and cfg.logical not in PAIRED and cfg.logical not in PAIRED.values():
        raise CliError(EXIT_CONFIG, "logical", f"unknown logical {cfg.logical!r}")
    spec = _spec(cfg, cfg.model)
    Ly = code.complex.dims[1]
    try:
        if cfg.logical in PAIRED or cfg.logical in PAIRED.values():
            path = paired_decomposition(code, spec, cfg.logical, cfg.radius)
            path_energy(code, path)
        else:
            if spec.is_full or spec.W >= Ly:
                raise CliError(EXIT_WIDTH, "W", f"W must be below L_y = {Ly} for a canonical path")
            path = _barrier_for(code, spec, cfg)
    except DecompositionError as exc:
        raise CliError(EXIT_NO_DECOMP, "decomposition", str(exc)) from exc
    except InvalidPathError as exc:
        raise CliError(EXIT_CONFIG, "path", str(exc)) from exc
    rep = path.to_json()
    rep["kind"] = "canonical upper bound"
    series = [("step", "energy", "symmetric")] + [(i, e, int(s)) for i, (e, s) in
                                                  enumerate(zip(path.energies, path.symmetric))]
    return rep, code, series


def cmd_sweep(cfg: ExperimentConfig):
    dims = parse_dims(cfg.dims)
    if len(dims) != 3:
        raise CliError(EXIT_DIMS, "dims", "sweep needs --dims L2,Ly,L1")
    L2, Ly, L1 = dims
    if max(cfg.Ws) >= Ly:
        raise CliError(EXIT_WIDTH, "W", f"every W must be below L_y = {Ly}")
    try:
        rep = verify_scaling(cfg.Ws, L1, L2, Ly, cfg.logical, radius=cfg.radius)
    except (SizeError, TopologyError) as exc:
        raise CliError(EXIT_DIMS, "dims", str(exc)) from exc
    except DecompositionError as exc:
        raise CliError(EXIT_NO_DECOMP, "decomposition", str(exc)) from exc
    code = build_model("3d3f", rep["dims"])
    series = [("W", "open", "vertical", "delta")] + [(r["W"], r["open"], r["vertical"], r["delta"])
                                                     for r in rep["rows"]]
    return rep, code, series


def cmd_simulate(cfg: ExperimentConfig):
    from .dynamics import ConfigurationError, measure_memory_time

    code = build_model(cfg.model, cfg.dims)
    spec = _spec(cfg, cfg.model)
    seeds = [cfg.seed + i for i in range(cfg.trials)]
    try:
        stats = measure_memory_time(code, spec, cfg.T, max_steps=cfg.steps * code.n_qubits,
                                    checkpoints=cfg.checkpoints or None, trials=cfg.trials, seeds=seeds,
                                    radius=cfg.radius)
    except ConfigurationError as exc:
        raise CliError(EXIT_CONFIG, "dynamics", str(exc)) from exc
    rep = stats.to_json()
    rep["seeds"] = seeds
    rows = [("seed", "failure_step", "checkpoints", "mean_energy", "max_energy", "max_enforced_violations")]
    for r in stats.records:
        s = r.summary()
        rows.append((s["seed"], s["failure_step"], s["checkpoints"], f"{s['mean_energy']:.6f}",
                     s["max_energy"], s["max_enforced_violations"]))
    return rep, code, rows


COMMANDS = {
    "build": cmd_build, "verify": cmd_verify, "ops": cmd_ops,
    "barrier": cmd_barrier, "sweep": cmd_sweep, "simulate": cmd_simulate,
}


# ---------------------------------------------------------------------------
# argv
# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stablab", description="Stabilizer-model experiments with reproducible JSON/CSV output.",
                                formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, dims="4,4,4"):
        sp.add_argument("--model", choices=MODELS, default="3d3f")
        sp.add_argument("--dims", default=dims, help="Lx,Ly,Lz (y is the open direction)")
        sp.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or ./out)")
        sp.add_argument("--config", default=None, help="JSON config file; its keys take precedence over flags")

    sp = sub.add_parser("build", help="construct a model and describe it")
    common(sp)
    sp.add_argument("--dump", action="store_true", help="include every generator in hex")

    sp = sub.add_parser("verify", help="commutation check, rank and logical qubit count")
    common(sp)

    sp = sub.add_parser("ops", help="syndrome report of a named operator")
    common(sp, "6,6,6")
    sp.add_argument("--kind", default="Se",
                    help="Se, Sm, Seps, bare-e, bare-m, bdy-e, bdy-m, R_sigma_horiz, R_tau_vert, ...")
    sp.add_argument("--path", default="vertical", choices=("vertical", "horizontal", "y"))
    sp.add_argument("--length", type=int, default=3)
    sp.add_argument("--y", type=int, default=2, help="layer of the string (0 = right boundary)")

    sp = sub.add_parser("barrier", help="canonical or paired decomposition and its peak energy")
    common(sp, "8,8,8")
    sp.add_argument("--W", default="3", help="enforced width in cells, or 'full'")
    sp.add_argument("--logical", default="Se-vert",
                    help="Se-vert, Se-horiz, Sm-vert, Sm-horiz, or paired X1X3, Z1Z3, X2X4, Z2Z4")
    sp.add_argument("--variant", default="min", choices=("min", "open", "vertical"))
    sp.add_argument("--radius", type=int, default=2)
    sp.add_argument("--csv", action="store_true", help="also write the per-step energy profile")

    sp = sub.add_parser("sweep", help="canonical barrier versus W (dims = L2,Ly,L1)")
    common(sp, "12,12,12")
    sp.add_argument("--Ws", default="2,4,6,8")
    sp.add_argument("--logical", default="Se-vert")
    sp.add_argument("--radius", type=int, default=2)

    sp = sub.add_parser("simulate", help="Metropolis memory-time trials")
    common(sp, "8,8,8")
    sp.add_argument("--W", default="4")
    sp.add_argument("--T", type=float, default=0.45)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--steps", type=int, default=10_000, help="maximum sweeps (units of n_qubits proposals)")
    sp.add_argument("--checkpoints", type=int, default=0, help="proposals between checks (0 = one sweep)")
    sp.add_argument("--radius", type=int, default=1)
    return p


def _config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    data = {"command": ns.command}
    if ns.config:
        try:
            loaded = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(EXIT_CONFIG, "config", f"cannot read config: {exc}") from exc
        data.update(loaded)
        data["command"] = ns.command
    for f in fields(ExperimentConfig):
        if f.name in ("command",) or not hasattr(ns, f.name):
            continue
        if ns.config and f.name in data:
            continue
        val = getattr(ns, f.name)
        if f.name == "dims":
            val = parse_dims(val)
        elif f.name == "Ws":
            val = parse_dims(val)
        elif f.name == "W":
            val = str(val)
        data[f.name] = val
    return ExperimentConfig.from_json(data)


def _write(out_dir: Path, stem: str, report: dict, series=None) -> list[str]:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    jp = out_dir / f"{stem}.json"
    jp.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    paths.append(str(jp))
    if series is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(series)
        cp = out_dir / f"{stem}.csv"
        cp.write_text(buf.getvalue())
        paths.append(str(cp))
    return paths


def run(argv=None) -> int:
    parser = make_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    out_dir = Path(getattr(ns, "out", None) or os.environ.get(OUT_ENV) or "out")
    try:
        cfg = _config_from_args(ns)
        result = COMMANDS[cfg.command](cfg)
        report, code = result[0], result[1]
        series = result[2] if len(result) > 2 else None
        if cfg.command == "barrier" and not cfg.csv:
            series = None
        report = {"result": report, "config": cfg.to_json(), "seed": cfg.seed,
                  "fixture_hash": code.fixture_hash(), "version": __version__}
        stem = f"{cfg.command}-{cfg.model}"
        paths = _write(out_dir, stem, report, series)
        brief = {k: v for k, v in report["result"].items() if len(json.dumps(v, default=str)) <= 200}
        print(json.dumps({"status": "ok", "artifacts": paths, "result": brief}, sort_keys=True, default=str))
        return EXIT_OK
    except CliError as exc:
        print(json.dumps({"status": "error", "kind": exc.kind, "message": str(exc), "exit_code": exc.code}),
              file=sys.stderr)
        return exc.code
    except InvalidCodeError as exc:
        print(json.dumps({"status": "error", "kind": "code", "message": str(exc), "exit_code": EXIT_CONFIG}),
              file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:  # pragma: no cover - thin wrapper
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
