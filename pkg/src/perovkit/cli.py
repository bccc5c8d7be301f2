"""Command-line front end: certify and solve the built-in example (or a spec file).

Exit status: 0 when every requested certification passes, 1 when one fails
(the failing check is named), 2 on configuration or spec-file errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass
from typing import Optional

from . import example
from .errors import NoConvergence, NotConvergentMatrix, PerovError, RegularityViolation
from .grid import Grid, PairFunction, pair_norm
from .hybrid import outer_solve, residual
from .hypotheses import ProblemSpec, audit, dumps, full_report
from .system import FractionalSystem

log = logging.getLogger("perovkit")

MODES = ("check", "solve", "audit", "all")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    mode: str = "all"
    grid_N: int = 1024
    tol: float = 1e-8
    outer_tol: float = 1e-6
    max_outer: int = 200
    spec_path: Optional[str] = None
    report_path: Optional[str] = None
    seed: int = 0
    samples: int = 500
    a_min: float = 1e-8

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.grid_N < 16:
            raise ConfigError("grid must have at least 16 cells")
        if not (self.tol > 0 and self.outer_tol > 0 and self.a_min > 0):
            raise ConfigError("tolerances must be positive")
        if self.max_outer < 1 or self.samples < 2:
            raise ConfigError("need max_outer >= 1 and samples >= 2")


def load_spec(path: Optional[str]):
    """Return ``(spec, system)``; ``system`` is None when no functions are attached."""
    if path is None:
        return example.builtin_spec(), example.builtin_system()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        problem = data.get("problem", "builtin")
        spec = ProblemSpec.from_dict(data)
    except (OSError, json.JSONDecodeError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot load spec {path}: {exc}") from exc
    if problem is None:
        return spec, None
    if problem != "builtin":
        raise ConfigError(f"unknown problem family {problem!r}; only 'builtin' is available")
    if spec.n != 2 or spec.m != 2:
        raise ConfigError("the builtin function family needs 2 equations and m = 2")
    base = example.builtin_system()
    system = FractionalSystem(base.f, base.g, base.h, spec.alpha, spec.betas)
    return spec, system


def _solve(cfg: RunConfig, spec: ProblemSpec, system: FractionalSystem):
    grid = Grid(spec.T, cfg.grid_N)
    problem = example.build_problem(system, spec, grid, cfg.a_min)
    out = {"grid_N": cfg.grid_N, "outer_tol": cfg.outer_tol, "inner_tol": cfg.tol}
    failed = []
    try:
        res = outer_solve(problem, PairFunction.zeros(grid), cfg.outer_tol, cfg.max_outer, cfg.tol)
    except NoConvergence as exc:
        res = exc.result
        failed.append("outer_convergence")
    except RegularityViolation as exc:
        out["error"] = str(exc)
        return out, ["A_regularity"]
    except NotConvergentMatrix as exc:
        out["error"] = str(exc)
        return out, ["combined_convergent"]
    if res.left_ball:
        failed.append("r0_invariance")
    t = grid.nodes
    probe = [round(k * cfg.grid_N / 4) for k in range(5)]
    out.update(
        converged=res.converged,
        outer_iterations=res.iterations,
        damping=res.damping,
        residual=residual(problem, res.point).tolist(),
        residual_history=[r.tolist() for r in res.residuals],
        solution_norm=pair_norm(res.point).tolist(),
        in_ball=not res.left_ball,
        solution_samples={
            "t": [float(t[j]) for j in probe],
            "x": [float(res.point.first.samples[j]) for j in probe],
            "y": [float(res.point.second.samples[j]) for j in probe],
        },
    )
    return out, failed


def run(cfg: RunConfig, out=sys.stdout) -> int:
    try:
        spec, system = load_spec(cfg.spec_path)
        if cfg.mode in ("solve", "audit", "all") and system is None:
            raise ConfigError(f"mode {cfg.mode!r} needs functions; the spec declares problem = null")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    report = {"config": asdict(cfg), "spec": spec.to_dict()}
    failed: list[str] = []

    if cfg.mode in ("check", "all"):
        tr = full_report(spec)
        report["check"] = tr.to_dict()
        failed += tr.failed_checks
        print("== hypothesis check ==", file=out)
        print(tr.summary(), file=out)

    if cfg.mode in ("audit", "all"):
        ar = audit(system, spec, Grid(spec.T, cfg.grid_N), cfg.samples, cfg.seed, a_min=cfg.a_min)
        report["audit"] = ar.to_dict()
        failed += ar.failed_checks
        print(f"== sampled audit ({cfg.samples} pairs, seed {cfg.seed}) ==", file=out)
        print(ar.summary(), file=out)

    if cfg.mode in ("solve", "all"):
        try:
            sol, sol_failed = _solve(cfg, spec, system)
        except PerovError as exc:
            sol, sol_failed = {"error": str(exc)}, ["solve"]
        report["solve"] = sol
        failed += sol_failed
        print(f"== solve (N = {cfg.grid_N}) ==", file=out)
        if "residual" in sol:
            print(f"outer iterations   = {sol['outer_iterations']} (damping {sol['damping']:g})", file=out)
            print(f"residual           = {sol['residual']}", file=out)
            print(f"||(x, y)||         = {sol['solution_norm']}  (r0 = {spec.r0:g})", file=out)
        else:
            print(f"error: {sol['error']}", file=out)

    report["failed_checks"] = failed
    report["passed"] = not failed
    if cfg.report_path:
        with open(cfg.report_path, "w", encoding="utf-8") as fh:
            fh.write(dumps(report))
    if failed:
        print("FAILED: " + ", ".join(failed), file=out)
        return 1
    print("PASSED", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="perovkit", description=__doc__.splitlines()[0])
    p.add_argument("--mode", choices=MODES, default="all")
    p.add_argument("--grid", type=int, default=1024, dest="grid_N", help="number of grid cells (>= 16)")
    p.add_argument("--tol", type=float, default=1e-8, help="inner Perov step tolerance")
    p.add_argument("--outer-tol", type=float, default=1e-6, help="outer residual tolerance")
    p.add_argument("--max-outer", type=int, default=200)
    p.add_argument("--spec", dest="spec_path", help="JSON problem spec (default: built-in example)")
    p.add_argument("--report", dest="report_path", help="write the JSON report here")
    p.add_argument("--seed", type=int, default=0, help="audit sampling seed")
    p.add_argument("--samples", type=int, default=500, help="audit sample pairs")
    p.add_argument("--a-min", type=float, default=1e-8, help="regularity floor for |A_i|")
    p.add_argument("--write-spec", metavar="PATH", help="write the built-in spec as JSON and exit")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.write_spec:
        data = {"problem": "builtin", **example.builtin_spec().to_dict()}
        with open(args.write_spec, "w", encoding="utf-8") as fh:
            fh.write(dumps(data))
        return 0
    opts = vars(args)
    opts.pop("write_spec")
    opts.pop("verbose")
    try:
        cfg = RunConfig(**opts)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
