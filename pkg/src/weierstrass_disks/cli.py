"""Command-line driver: ``generate``, ``verify`` and ``sweep``.

Flags mirror the JSON config (``--config``) one to one and override it.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .domain import GridSpec, build_domain
from .export import ball_radius, build_mesh, write_mesh, write_report
from .geometry import blowup_sweep, gauss_curvature
from .holo import HelicoidData
from .immersion import QuadratureConfig
from .params import ConstructionParams
from .verify import DEFAULT_CONVERGENCE_A, check_separation, convergence_table, run_all

DEFAULT_SWEEP = (0.2, 0.1, 0.05, 0.025, 0.0125)


class StageError(RuntimeError):
    def __init__(self, stage, exc):
        super().__init__(f"{stage}: {exc}")
        self.stage = stage


@dataclass
class RunConfig:
    construction: ConstructionParams | None
    grid: GridSpec
    quad: QuadratureConfig
    sweep: tuple | None = None
    delta: float = 0.1
    outputs: dict = field(default_factory=dict)
    helicoid: bool = False
    clip: bool = False
    a: float | None = None

    def __post_init__(self):
        if self.sweep is not None:
            if len(self.sweep) == 0:
                raise ValueError("a-list must not be empty")
            if any(b >= a for a, b in zip(self.sweep, self.sweep[1:])):
                raise ValueError("a-list must be strictly decreasing")

    def to_dict(self) -> dict:
        return {"construction": self.construction.to_dict() if self.construction else None,
                "a": self.a, "helicoid": self.helicoid, "grid": self.grid.to_dict(),
                "quadrature": self.quad.to_dict(), "sweep": list(self.sweep) if self.sweep else None,
                "delta": self.delta, "clip": self.clip, "outputs": dict(self.outputs)}


def workers() -> int:
    try:
        return max(1, int(os.environ.get("WEIERSTRASS_THREADS", "1")))
    except ValueError:
        return 1


def _floats(text):
    return [float(t) for t in str(text).split(",") if t.strip()]


def resolve_config(args) -> RunConfig:
    """Merge ``--config`` JSON with command-line flags (flags win)."""
    cfg = {}
    if getattr(args, "config", None):
        cfg = json.loads(Path(args.config).read_text())
    grid_cfg = dict(cfg.get("grid", {}))

    def pick(name, default=None):
        val = getattr(args, name, None)
        return val if val is not None else cfg.get(name, default)

    points = pick("points")
    if isinstance(points, str):
        points = _floats(points)
    helicoid = bool(getattr(args, "helicoid", False) or cfg.get("helicoid", False))
    a = pick("a", 0.1)
    a_list = getattr(args, "a_list", None)
    a_list = _floats(a_list) if a_list is not None else cfg.get("a_list")
    nx = args.nx if getattr(args, "nx", None) is not None else grid_cfg.get("nx", 200)
    ny = args.ny if getattr(args, "ny", None) is not None else grid_cfg.get("ny", 41)
    tol = pick("tol", 1e-10)
    construction = None
    if points is not None and not helicoid:
        construction = ConstructionParams(points, a)
    quad = QuadratureConfig(abs_tol=tol, height_fault=float(getattr(args, "inject_fault", 0) or 0))
    outputs = {k: getattr(args, k) for k in ("out", "report") if getattr(args, k, None)}
    return RunConfig(construction=construction, grid=GridSpec(nx=nx, ny=ny), quad=quad,
                     sweep=tuple(a_list) if a_list is not None else None,
                     delta=pick("delta", 0.1), outputs=outputs, helicoid=helicoid,
                     clip=bool(getattr(args, "clip", False) or cfg.get("clip", False)), a=a)


def format_curvature(K: float) -> str:
    """``-10000 -> '-1.0e4'``."""
    if K == 0:
        return "0.0e0"
    e = int(np.floor(np.log10(abs(K))))
    m = K / 10**e
    if abs(round(m, 1)) >= 10:
        m, e = m / 10, e + 1
    return f"{m:.1f}e{e}"


def cmd_generate(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.construction is None and not cfg.helicoid:
        raise ValueError("generate needs --points or --helicoid")
    path = Path(cfg.outputs.get("out", "surface.obj"))
    fmt = path.suffix.lstrip(".").lower() or "obj"
    if cfg.helicoid:
        mesh = _stage("mesh", build_mesh, HelicoidData(), cfg.grid, cfg.quad)
        _stage("write", write_mesh, mesh, fmt, path)
        print(f"wrote {path}: {mesh.n_vertices} vertices, {len(mesh.triangles)} triangles (helicoid)",
              file=out)
        return 0
    p = cfg.construction
    radius = None
    r0 = None
    if cfg.clip:
        _, r0 = _stage("separation", check_separation, p, cfg.grid, cfg.quad)
        radius = ball_radius(r0)
    mesh = _stage("mesh", build_mesh, p, cfg.grid, cfg.quad, radius)
    _stage("write", write_mesh, mesh, fmt, path)
    print(f"wrote {path}: {mesh.n_vertices} vertices, {len(mesh.triangles)} triangles", file=out)
    if r0 is not None:
        print(f"r0_estimate = {r0:.6g}, R = {radius:.6g}", file=out)
    K = gauss_curvature(p, np.asarray(p.points, dtype=complex)).K
    for j, k in enumerate(K, start=1):
        print(f"K(b_{j}) = {format_curvature(float(k))}", file=out)
    return 0


def cmd_verify(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.construction is None:
        raise ValueError("verify needs --points")
    rep = _stage("verify", run_all, cfg.construction, cfg.grid, cfg.quad,
                 list(cfg.sweep) if cfg.sweep else list(DEFAULT_CONVERGENCE_A), cfg.delta)
    rep.grid["config"] = cfg.to_dict()
    path = Path(cfg.outputs.get("report", "report.json"))
    _stage("write", write_report, rep, path)
    for c in sorted(rep.checks, key=lambda c: c.name):
        tag = "PASS" if c.passed else "FAIL"
        if not c.asserted:
            tag = "INFO"
        print(f"{tag} {c.name}: margin={c.margin:.4g}", file=out)
    sep = next(c for c in rep.checks if c.name == "separation")
    print(f"r0_estimate = {sep.details['r0_estimate']:.6g}", file=out)
    return 0 if rep.passed else 1


def equally_spaced(n: int):
    return [-0.5 + j / (n + 1) for j in range(1, n + 1)]


def cmd_sweep(cfg: RunConfig, out=None, r0_vs_n: bool = False, n_max: int = 4) -> int:
    out = out or sys.stdout
    outdir = Path(cfg.outputs.get("out", "sweep"))
    outdir.mkdir(parents=True, exist_ok=True)
    echo = json.dumps(cfg.to_dict(), sort_keys=True)
    written = []
    if cfg.sweep is not None:
        if cfg.construction is None:
            raise ValueError("sweep needs --points")
        pts = cfg.construction.points
        a_vals = list(cfg.sweep)
        sw = _stage("blowup", blowup_sweep, pts, a_vals, cfg.delta)
        rows = [("a", "j", "K_at_bj", "delta", "sup_off_axis")] + list(sw.rows())
        written.append(_write_csv(outdir / "blowup.csv", rows, echo))
        for j, s in enumerate(sw.slopes, start=1):
            print(f"slope log|K(b_{j})| vs log(1/a) = {s:.6f}", file=out)
        print(f"off-axis sup change (two smallest a) = {sw.sup_ratio:.4%}", file=out)

        if len(a_vals) >= 2:
            try:
                tab = _stage("convergence", convergence_table,
                             [ConstructionParams(pts, a) for a in a_vals], cfg.delta,
                             quad=cfg.quad)
            except StageError as exc:
                print(f"convergence table skipped: {exc}", file=out)
            else:
                rows = [("a_coarse", "a_fine", "dF", "dD1", "dD2", "dF_scaled", "dD1_scaled",
                         "dD2_scaled")]
                for i in range(len(a_vals) - 1):
                    rows.append((a_vals[i], a_vals[i + 1], tab.dF[i], tab.dD1[i], tab.dD2[i],
                                 tab.dF_scaled[i], tab.dD1_scaled[i], tab.dD2_scaled[i]))
                written.append(_write_csv(outdir / "convergence.csv", rows, echo))

        def r0_of(a):
            return check_separation(ConstructionParams(pts, a), cfg.grid, cfg.quad)[1]

        with ThreadPoolExecutor(max_workers=workers()) as pool:
            r0s = list(pool.map(r0_of, a_vals))
        rows = [("a", "r0_estimate")] + list(zip(a_vals, r0s))
        written.append(_write_csv(outdir / "r0_vs_a.csv", rows, echo))
    if r0_vs_n:
        a = cfg.a

        def r0_n(n):
            return check_separation(ConstructionParams(equally_spaced(n), a), cfg.grid, cfg.quad)[1]

        ns = list(range(1, n_max + 1))
        with ThreadPoolExecutor(max_workers=workers()) as pool:
            r0s = list(pool.map(r0_n, ns))
        rows = [("n", "a", "points", "r0_estimate")]
        rows += [(n, a, " ".join(f"{b:.6g}" for b in equally_spaced(n)), r) for n, r in zip(ns, r0s)]
        written.append(_write_csv(outdir / "r0_vs_n.csv", rows, echo))
    if not written:
        raise ValueError("sweep needs --a-list or --r0-vs-n")
    for w in written:
        print(f"wrote {w}", file=out)
    return 0


def _write_csv(path, rows, echo):
    with open(path, "w", newline="") as fh:
        fh.write(f"# config: {echo}\n")
        w = csv.writer(fh, lineterminator="\n")
        for r in rows:
            w.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in r])
    return path


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ValueError, RuntimeError, OSError) as exc:
        raise StageError(name, exc) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weierstrass-disks",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--points", help="comma-separated blowup heights b_1,...,b_n")
    common.add_argument("--a", type=float, help="pinch parameter, 0 < a <= 1/2")
    common.add_argument("--a-list", dest="a_list", help="comma-separated decreasing a values")
    common.add_argument("--nx", type=int, help="columns per piece")
    common.add_argument("--ny", type=int, help="samples per column (odd)")
    common.add_argument("--tol", type=float, help="quadrature absolute tolerance")
    common.add_argument("--delta", type=float, help="distance kept from every b_j")
    common.add_argument("--clip", action="store_true", help="cut the mesh to the ball B_R")
    common.add_argument("--helicoid", action="store_true", help="use helicoid data h(z) = z")
    common.add_argument("--out", help="output mesh path or sweep directory")
    common.add_argument("--report", help="verification report path (JSON)")
    common.add_argument("--inject-fault", dest="inject_fault", type=float, help=argparse.SUPPRESS)
    sub.add_parser("generate", parents=[common], help="write a surface mesh")
    sub.add_parser("verify", parents=[common], help="run every check and write a JSON report")
    sw = sub.add_parser("sweep", parents=[common], help="curvature / convergence / r0 sweeps")
    sw.add_argument("--r0-vs-n", dest="r0_vs_n", action="store_true",
                    help="also write r0_vs_n.csv for equally spaced points")
    sw.add_argument("--n-max", dest="n_max", type=int, default=4,
                    help="largest n in the r0 versus n sweep")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ValueError, OSError) as exc:
        parser.error(str(exc))
    try:
        if args.command == "generate":
            if cfg.construction is None and not cfg.helicoid:
                parser.error("generate needs --points or --helicoid")
            return cmd_generate(cfg)
        if args.command == "verify":
            if cfg.construction is None:
                parser.error("verify needs --points")
            return cmd_verify(cfg)
        if cfg.sweep is None and not args.r0_vs_n:
            parser.error("sweep needs a non-empty --a-list or --r0-vs-n")
        return cmd_sweep(cfg, r0_vs_n=args.r0_vs_n, n_max=args.n_max)
    except StageError as exc:
        print(f"error in stage {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
