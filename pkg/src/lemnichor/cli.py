"""Command-line surface: sample, verify, integrate, geometry, analytic.

Data outputs are deterministic: CSV uses '.' decimal, ',' delimiter, LF line
endings and 17 significant digits, and carries no timestamps; run metadata
goes to a separate ``<output>.meta.json`` sidecar.  The environment variable
LEMNICHOR_SEED is reserved and currently unused (all computation is
deterministic).

Exit codes: 0 success, 1 verification residual above tolerance (a
machine-readable report is still written), 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import analytic, dynamics, geometry, invariants
from .elliptic import CHOREO_M, choreography_context
from .orbit import position, triple, velocity

# Default residual tolerances, overridable by --tolerance-scale.
DEFAULT_TOLERANCES = {
    "center_of_mass": 1e-10,
    "moment_of_inertia": 1e-10,
    "angular_momentum": 1e-10,
    "kinetic_energy": 1e-10,
    "curvature_sq_sum": 1e-9,
    "sum_sq_distances": 1e-10,
    "product_sq_distances": 1e-10,
    "eom_residual": 1e-9,
    "concurrency": 1e-9,
    "hyperbola": 1e-8,
}


@dataclass
class RunConfig:
    command: str
    n_samples: int = 1000
    dt: float | None = None
    steps: int = 65536
    variant: dynamics.PotentialVariant = dynamics.PotentialVariant.U_CENTRAL
    output_path: Path | None = None
    format: str = "csv"
    affine: bool = False
    tolerance_scale: float = 1.0
    init: str = "analytic"
    from_c: tuple[float, float] | None = None
    from_point: float | None = None
    extra: dict = field(default_factory=dict)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_text(cfg: RunConfig, text: str) -> None:
    if cfg.output_path is None:
        sys.stdout.write(text)
        return
    cfg.output_path.write_text(text, encoding="utf-8", newline="\n")
    sidecar = {
        "command": cfg.command,
        "config": {
            "n_samples": cfg.n_samples,
            "dt": cfg.dt,
            "steps": cfg.steps,
            "variant": cfg.variant.value,
            "format": cfg.format,
            "affine": cfg.affine,
            "tolerance_scale": cfg.tolerance_scale,
        },
        "tool": "lemnichor 0.1.0",
    }
    Path(str(cfg.output_path) + ".meta.json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _csv(rows: list[list], header: list[str]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _cplx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def cmd_sample(cfg: RunConfig) -> int:
    ctx = choreography_context()
    period = ctx.period
    rows = []
    for j in range(cfg.n_samples):
        t = j * period / cfg.n_samples
        p = position(t, ctx)
        v = velocity(t, ctx)
        y = CHOREO_M * p.y if cfg.affine else p.y
        rows.append([t, p.x, y, v.x, v.y])
    if cfg.format == "json":
        _write_text(cfg, _json_text([
            {"t": r[0], "x": r[1], "y": r[2], "vx": r[3], "vy": r[4]} for r in rows
        ]))
    else:
        _write_text(cfg, _csv(rows, ["t", "x", "y", "vx", "vy"]))
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    ctx = choreography_context()
    period = ctx.period
    worst: dict[str, float] = {}
    for j in range(cfg.n_samples):
        t = j * period / cfg.n_samples
        rep = invariants.full_report(t, ctx)
        for name, r in rep.residuals.items():
            worst[name] = max(worst.get(name, 0.0), r)
        for variant in dynamics.PotentialVariant:
            r = dynamics.eom_residual(t, variant, ctx)
            worst["eom_residual"] = max(worst.get("eom_residual", 0.0), r)
    tolerances = {k: DEFAULT_TOLERANCES[k] * cfg.tolerance_scale for k in worst}
    failures = {k: worst[k] for k in worst if worst[k] > tolerances[k]}
    report = {
        "n_samples": cfg.n_samples,
        "max_residuals": worst,
        "tolerances": tolerances,
        "failures": failures,
        "passed": not failures,
    }
    _write_text(cfg, _json_text(report))
    return 0 if not failures else 1


def _load_init(path: Path):
    data = json.loads(path.read_text(encoding="utf-8"))
    from .orbit import Vec2

    positions = [Vec2(float(x), float(y)) for x, y in data["positions"]]
    velocities = [Vec2(float(x), float(y)) for x, y in data["velocities"]]
    if len(positions) != 3 or len(velocities) != 3:
        raise ValueError("init file must hold exactly 3 positions and 3 velocities")
    return positions, velocities


def cmd_integrate(cfg: RunConfig) -> int:
    ctx = choreography_context()
    dt = cfg.dt if cfg.dt is not None else ctx.period / 65536.0
    if cfg.init == "analytic":
        traj = dynamics.integrate_choreography(ctx, cfg.variant, dt, cfg.steps)
    else:
        positions, velocities = _load_init(Path(cfg.init))
        traj = dynamics.integrate(positions, velocities, cfg.variant, dt, cfg.steps)

    header = ["t"]
    for i in (1, 2, 3):
        header += [f"x{i}", f"y{i}", f"vx{i}", f"vy{i}"]
    header.append("energy")
    rows = []
    for pt in traj.points:
        row = [pt.t]
        for p, v in zip(pt.positions, pt.velocities):
            row += [p.x, p.y, v.x, v.y]
        row.append(pt.energy)
        rows.append(row)
    _write_text(cfg, _csv(rows, header))

    if cfg.init == "analytic":
        t_final = cfg.steps * dt
        ref = triple(t_final, ctx)
        err = max(
            (pt - p).norm() for pt, p in zip(traj.final.positions, ref.positions)
        )
        summary = {
            "final_time": t_final,
            "position_error_vs_analytic": err,
            "energy_drift": traj.energy_drift,
        }
        sys.stderr.write(_json_text(summary))
    return 0


def cmd_geometry(cfg: RunConfig) -> int:
    ctx = choreography_context()
    if cfg.from_c is not None:
        c = geometry.Vec2(*cfg.from_c)
        candidates = geometry.tangents_from_point(c, ctx)
        selected = geometry.select_choreographic(c, candidates, ctx)
        _write_text(cfg, _json_text({
            "c": [c.x, c.y],
            "candidates": [
                {"s": cand.s, "point": [cand.point.x, cand.point.y], "quadrant": cand.quadrant}
                for cand in candidates
            ],
            "selected_phases": [cand.s for cand in selected],
        }))
        return 0
    if cfg.from_point is not None:
        (x2, x3), cp = geometry.complete_triple_from_point(cfg.from_point, ctx)
        _write_text(cfg, _json_text({
            "x1_phase": cfg.from_point,
            "x2": [x2.x, x2.y],
            "x3": [x3.x, x3.y],
            "c": [cp.c.x, cp.c.y],
            "lambdas": list(cp.lambdas),
        }))
        return 0

    period = ctx.period
    rows = []
    worst_hyp = 0.0
    for j in range(cfg.n_samples):
        t = (j + 0.431) * period / cfg.n_samples
        rec = geometry.sweep_row(t, ctx)
        rows.append([
            rec["t"], rec["cx"], rec["cy"],
            rec["lambda1"], rec["lambda2"], rec["lambda3"],
            rec["quadrant_c"], rec["quadrant_1"], rec["quadrant_2"], rec["quadrant_3"],
            rec["hyperbola_residual"],
        ])
        if rec["finite"] and math.hypot(rec["cx"], rec["cy"]) < 50.0:
            worst_hyp = max(worst_hyp, abs(rec["hyperbola_residual"]))
    _write_text(cfg, _csv(rows, [
        "t", "cx", "cy", "lambda1", "lambda2", "lambda3",
        "quadrant_c", "quadrant_1", "quadrant_2", "quadrant_3", "hyperbola_residual",
    ]))
    return 0 if worst_hyp <= DEFAULT_TOLERANCES["hyperbola"] * cfg.tolerance_scale else 1


def cmd_analytic(cfg: RunConfig) -> int:
    ctx = choreography_context()
    scale = cfg.tolerance_scale
    results: list[analytic.CheckResult] = []
    results += analytic.check_special_values(ctx, tol=1e-12 * scale)
    results += analytic.check_modulus_identity(ctx, tol=1e-12 * scale)
    for f_id, poles in analytic.pole_table(ctx).items():
        for pole in poles:
            res = analytic.residue_at(pole, f_id, ctx)
            results.append(analytic.CheckResult(
                name=f"residue of {f_id} at {pole.location}",
                claimed=pole.claimed_residue,
                observed=res,
                residual=abs(res - pole.claimed_residue),
                passed=abs(res - pole.claimed_residue) <= 1e-6 * scale,
            ))
    for t in (0.3, 1.3, complex(0.2, 0.3)):
        results += analytic.check_sum_identities(t, ctx)
    for t in (ctx.K / 4.0, 0.9):
        results += analytic.check_j_identity(t, ctx)
    results += analytic.check_triple_zero_and_pole(analytic.alpha2(ctx), ctx)
    results += analytic.check_eom_pole_cancellation(
        [complex(0.5, 0.4), complex(ctx.K / 6.0, 0.0)], ctx, tol=1e-8 * scale
    )
    report = [
        {
            "name": r.name,
            "claimed": _cplx(r.claimed),
            "observed": _cplx(r.observed),
            "residual": r.residual,
            "pass": r.passed,
        }
        for r in results
    ]
    _write_text(cfg, _json_text(report))
    return 0 if all(r.passed for r in results) else 1


_COMMANDS = {
    "sample": cmd_sample,
    "verify": cmd_verify,
    "integrate": cmd_integrate,
    "geometry": cmd_geometry,
    "analytic": cmd_analytic,
}


def run(cfg: RunConfig) -> int:
    """Execute one configured command; returns the process exit code."""
    if cfg.n_samples < 1 or cfg.steps < 1 or (cfg.dt is not None and cfg.dt <= 0):
        raise ValueError("n_samples and steps must be >= 1 and dt > 0")
    try:
        return _COMMANDS[cfg.command](cfg)
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return 3
    except (dynamics.CollisionError, RuntimeError) as exc:
        sys.stderr.write(_json_text({"error": str(exc), "passed": False}))
        return 1
    except ValueError as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lemnichor",
        description="Sample, verify and explore the exact three-body "
        "choreography on the Bernoulli lemniscate.",
        epilog="LEMNICHOR_SEED is reserved; all computation is deterministic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", type=Path, default=None, help="write data here (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--n-samples", type=int, default=None)
        p.add_argument("--tolerance-scale", type=float, default=1.0)

    p = sub.add_parser("sample", help="sample the analytic orbit over one period")
    common(p)
    p.add_argument("--affine", action="store_true",
                   help="scale exported y by the squared modulus")

    p = sub.add_parser("verify", help="run the conservation-law suite")
    common(p)

    p = sub.add_parser("integrate", help="velocity-Verlet integration")
    common(p)
    p.add_argument("--variant", choices=("U", "V"), default="U")
    p.add_argument("--dt", type=float, default=None, help="step (default: period / 65536)")
    p.add_argument("--steps", type=int, default=65536)
    p.add_argument("--init", default="analytic",
                   help="'analytic' or a JSON file with positions/velocities")

    p = sub.add_parser("geometry", help="tangent-line geometry sweep or constructions")
    common(p)
    p.add_argument("--from-c", default=None, metavar="CX,CY",
                   help="construct the triple from a hyperbola point")
    p.add_argument("--from-point", type=float, default=None, metavar="S",
                   help="construct the triple from one orbit phase")

    p = sub.add_parser("analytic", help="run the complex-analytic check suite")
    common(p)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if args.output is not None:
        cfg.output_path = args.output
    if getattr(args, "format", None):
        cfg.format = args.format
    if getattr(args, "n_samples", None) is not None:
        cfg.n_samples = args.n_samples
    elif args.command == "geometry":
        cfg.n_samples = 200
    cfg.tolerance_scale = args.tolerance_scale
    cfg.affine = getattr(args, "affine", False)
    if getattr(args, "variant", None):
        cfg.variant = dynamics.PotentialVariant(args.variant)
    if getattr(args, "dt", None) is not None:
        cfg.dt = args.dt
    if getattr(args, "steps", None) is not None:
        cfg.steps = args.steps
    cfg.init = getattr(args, "init", "analytic")
    if getattr(args, "from_c", None) is not None:
        parts = args.from_c.split(",")
        if len(parts) != 2:
            raise ValueError("--from-c expects CX,CY")
        cfg.from_c = (float(parts[0]), float(parts[1]))
    if getattr(args, "from_point", None) is not None:
        cfg.from_point = args.from_point
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if cfg.n_samples < 1 or cfg.steps < 1 or (cfg.dt is not None and cfg.dt <= 0):
            raise ValueError("n_samples and steps must be >= 1 and dt > 0")
    except ValueError as exc:
        parser.error(str(exc))  # exits 2
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
