"""Command-line front end.

    quatspec spectrum    --input op.json
    quatspec measure     --input op.json --frame 0,0,1
    quatspec decompose   --n 6 --seed 3
    quatspec reconstruct --n 8 --seed 0
    quatspec verify      --n 8 --trials 50

Operator commands read ``{"n": int, "entries": [[a, b, c, d], ...]}``
(row-major); without ``--input`` a random normal operator is generated
from ``--n``, ``--seed`` and ``--profile``.

Exit codes: 0 success, 1 a check failed, 2 unreadable input, 3 operator
not normal.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import verify
from .exceptions import DomainError, NotNormalError
from .qspace import PROFILES, QOperator, operator_norm_fro, random_normal
from .quaternion import Quaternion, complete_frame
from .spectral import (
    Tolerances,
    q_residual,
    reconstruct,
    require_normal,
    spectral_measure,
    tjb_decompose,
)

SCHEMA = 1

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_NOT_NORMAL = 0, 1, 2, 3


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# deterministic JSON


def _fmt(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return "null"
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dumps(obj) -> str:
    """JSON text with every float printed to 17 significant digits."""
    return _fmt(obj)


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    command: str
    input: str | None
    tol: float | None
    tolerances: Tolerances
    frame: object
    frame_vector: list
    seed: int
    trials: int
    n: int
    profile: str
    format: str
    suites: list | None


def parse_frame(spec: str):
    if spec == "standard":
        vec = np.array([1.0, 0.0, 0.0])
    else:
        try:
            vec = np.array([float(v) for v in spec.split(",")])
        except ValueError as exc:
            raise InputError(f"bad frame spec {spec!r}: {exc}") from None
        if vec.shape != (3,) or not np.all(np.isfinite(vec)) or np.linalg.norm(vec) == 0.0:
            raise InputError(f"frame must be 'standard' or a nonzero 3-vector b,c,d; got {spec!r}")
        vec = vec / np.linalg.norm(vec)
    return complete_frame(Quaternion(0.0, *vec)), vec.tolist()


def load_operator(path: str) -> QOperator:
    try:
        with open(path) as fh:
            obj = json.load(fh)
        return QOperator.from_json(obj)
    except (OSError, ValueError, KeyError, TypeError, DomainError) as exc:
        raise InputError(f"cannot read operator from {path}: {exc}") from None


def _operator(cfg: RunConfig) -> QOperator:
    if cfg.input:
        return load_operator(cfg.input)
    return random_normal(cfg.n, cfg.seed, cfg.profile)


# ---------------------------------------------------------------------------
# commands


def _header(cfg: RunConfig, T: QOperator) -> dict:
    return {
        "schema": SCHEMA,
        "command": cfg.command,
        "n": T.n,
        "frame": cfg.frame_vector,
        "source": cfg.input if cfg.input else {"seed": cfg.seed, "profile": cfg.profile},
    }


def _checked(cfg: RunConfig, T: QOperator) -> float:
    return require_normal(T, cfg.tolerances)


def cmd_spectrum(cfg: RunConfig) -> tuple[dict, int]:
    T = _operator(cfg)
    normal = _checked(cfg, T)
    E = spectral_measure(T, cfg.frame, cfg.tolerances)
    scale = max(operator_norm_fro(T) ** 2, 1.0)
    spheres = [[a.sphere.re, a.sphere.rad, a.multiplicity] for a in E.atoms]
    oracle = [q_residual(T, a.sphere.point(cfg.frame.i)) / scale for a in E.atoms]
    out = _header(cfg, T)
    out["spheres"] = spheres
    out["oracle"] = oracle
    out["residuals"] = {"normality": normal}
    return out, EXIT_OK


def cmd_measure(cfg: RunConfig) -> tuple[dict, int]:
    T = _operator(cfg)
    normal = _checked(cfg, T)
    E = spectral_measure(T, cfg.frame, cfg.tolerances)
    axioms = E.axiom_residuals()
    out = _header(cfg, T)
    out["spheres"] = [[a.sphere.re, a.sphere.rad, a.multiplicity] for a in E.atoms]
    out["atoms"] = E.to_json()["atoms"]
    out["residuals"] = {"normality": normal, "measure_axioms": max(axioms.values())}
    code = EXIT_OK if max(axioms.values()) <= cfg.tolerances.meas else EXIT_FAIL
    return out, code


def cmd_decompose(cfg: RunConfig) -> tuple[dict, int]:
    T = _operator(cfg)
    normal = _checked(cfg, T)
    E = spectral_measure(T, cfg.frame, cfg.tolerances)
    tjb = tjb_decompose(T, measure=E)
    res = tjb.residuals(T)
    worst = max(res.values()) / max(operator_norm_fro(T), 1.0)
    out = _header(cfg, T)
    out["tjb"] = tjb.to_json()
    out["residuals"] = {"normality": normal, "tjb": worst}
    return out, EXIT_OK if worst <= cfg.tolerances.meas else EXIT_FAIL


def _second_frame(frame):
    v = np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0)
    if abs(float(v @ frame.i.vector)) > 0.9:
        v = np.array([1.0, -1.0, 1.0]) / math.sqrt(3.0)
    return complete_frame(Quaternion(0.0, *v))


def cmd_reconstruct(cfg: RunConfig) -> tuple[dict, int]:
    T = _operator(cfg)
    normal = _checked(cfg, T)
    tol = cfg.tolerances
    E = spectral_measure(T, cfg.frame, tol)
    tjb = tjb_decompose(T, measure=E)
    tn = operator_norm_fro(T)
    recon = operator_norm_fro(reconstruct(E, tjb.J) - T) / (tn if tn > 0 else 1.0)
    E2 = spectral_measure(T, _second_frame(cfg.frame), tol)
    slice_diff = 0.0
    if len(E2.atoms) != len(E.atoms):
        slice_diff = math.inf
    else:
        for a, b in zip(E.atoms, E2.atoms):
            slice_diff = max(slice_diff, operator_norm_fro(a.projection - b.projection))
    out = _header(cfg, T)
    out["spheres"] = [[a.sphere.re, a.sphere.rad, a.multiplicity] for a in E.atoms]
    out["atoms"] = E.to_json()["atoms"]
    out["tjb"] = tjb.to_json()
    out["residuals"] = {
        "normality": normal,
        "measure_axioms": max(E.axiom_residuals().values()),
        "reconstruction": recon,
        "slice_independence": slice_diff,
    }
    out["tolerance"] = tol.rec
    out["passed"] = bool(recon <= tol.rec)
    return out, EXIT_OK if out["passed"] else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    reports = verify.run_all(n=cfg.n, seed=cfg.seed, trials=cfg.trials, tol=cfg.tol, suites=cfg.suites)
    passed = all(r.passed for r in reports)
    out = {
        "schema": SCHEMA,
        "command": "verify",
        "n": cfg.n,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "passed": passed,
        "suites": [r.to_json() for r in reports],
    }
    return out, EXIT_OK if passed else EXIT_FAIL


COMMANDS = {
    "spectrum": cmd_spectrum,
    "measure": cmd_measure,
    "decompose": cmd_decompose,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# text rendering


def render_text(out: dict) -> str:
    lines = [f"{out['command']}  (schema {out['schema']})"]
    for key, val in out.items():
        if key in ("schema", "command"):
            continue
        if key == "spheres":
            lines.append("spheres (re, rad, multiplicity):")
            lines += [f"  {re_:+.10g}  {rad:.10g}  x{m}" for re_, rad, m in val]
        elif key == "suites":
            for s in val:
                flag = "PASS" if s["passed"] else "FAIL"
                lines.append(f"  [{flag}] {s['suite']:<20} worst={s['worst']:.3e} tol={s['tolerance']:.1e}")
                for f in s["failures"]:
                    lines.append(f"         trial {f['trial']} seed {f['seed']} residual {f['residual']:.3e}")
        elif key == "residuals":
            lines += [f"  {k}: {v:.3e}" for k, v in val.items()]
        elif key in ("atoms", "tjb"):
            lines.append(f"{key}: (use --format json for matrices)")
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quatspec", description=__doc__.split("\n\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="operator JSON file; random normal operator if omitted")
    common.add_argument("--tol", type=float, help="normality tolerance; suite tolerance for verify")
    common.add_argument("--tol-sphere", type=float, help="sphere clustering tolerance (relative)")
    common.add_argument("--tol-struct", type=float, help="quaternionic structure tolerance")
    common.add_argument("--tol-meas", type=float, help="measure / decomposition tolerance")
    common.add_argument("--tol-rec", type=float, help="reconstruction tolerance (relative)")
    common.add_argument("--frame", default="standard", help="'standard' or unit direction b,c,d of i")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=50)
    common.add_argument("--n", type=int, default=8)
    common.add_argument("--profile", choices=PROFILES, default="generic")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument(
        "--suites",
        help=f"comma-separated subset for verify (default: {','.join(verify.SUITES)}); "
        f"also available: {','.join(verify.EXTRA_SUITES)}",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def make_config(args) -> RunConfig:
    frame, vec = parse_frame(args.frame)
    for name in ("tol", "tol_sphere", "tol_struct", "tol_meas", "tol_rec"):
        val = getattr(args, name)
        if val is not None and not val > 0:
            raise InputError(f"--{name.replace('_', '-')} must be positive")
    if args.n < 1 or args.trials < 0:
        raise InputError("--n must be >= 1 and --trials >= 0")
    tols = Tolerances().with_(
        normal=args.tol if args.command != "verify" else None,
        sphere=args.tol_sphere,
        struct=args.tol_struct,
        meas=args.tol_meas,
        rec=args.tol_rec,
    )
    suites = None
    if args.suites:
        suites = [s.strip() for s in args.suites.split(",") if s.strip()]
        known = {**verify.SUITES, **verify.EXTRA_SUITES}
        unknown = [s for s in suites if s not in known]
        if unknown:
            raise InputError(f"unknown suites: {', '.join(unknown)}")
    return RunConfig(
        args.command, args.input, args.tol, tols, frame, vec,
        args.seed, args.trials, args.n, args.profile, args.format, suites,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
        out, code = COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotNormalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_NORMAL
    text = dumps(out) if cfg.format == "json" else render_text(out)
    sys.stdout.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
