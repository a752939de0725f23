"""Command-line harness.

Subcommands (one verb per experiment type):

* ``check``   sample the modular axioms, edge preservation and the configured
              contraction inequality; exit 1 on any violation.
* ``solve``   run certified Picard iteration, print the certificate and write
              the per-iteration CSV trace; exit 2 on non-convergence.
* ``bounds``  tabulate bound-vs-actual gap rows; exit 1 if any slack is
              negative (which admissible inputs can never produce).
* ``repro``   replay the embedded worked-example identities on the exact
              backend; exit 1 naming the first mismatch.

Backend resolution: the --backend flag wins, then the MODFIX_BACKEND
environment variable, then the config's space.backend, then float.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from typing import Optional

from .backend import Backend
from .config import ExperimentConfig, load_config
from .contractions import (check_banach_condition, check_edge_preservation,
                           check_kannan_condition)
from .errors import ModfixError
from .modular import check_convexity, check_modular_axioms, rho_gap
from .repro import run_repro
from .sampling import (SplitMix64, canonical_coeff_pairs, grid_points,
                       random_coeff_pairs, random_pairs)
from .solver import (banach_apriori_bound, kannan_cauchy_bound,
                     kannan_tail_bound, picard_orbit, solve_banach,
                     solve_kannan)


def _resolve_backend_name(flag: Optional[str]) -> Optional[str]:
    return flag or os.environ.get("MODFIX_BACKEND") or None


def build_point_sample(cfg: ExperimentConfig) -> list:
    s = cfg.samples
    pts = grid_points(cfg.backend, s.grid_min, s.grid_max, s.grid_count,
                      cfg.dimension)
    if s.random_pairs > 0:
        rng = SplitMix64(s.seed)
        for x, y in random_pairs(rng, cfg.backend, cfg.dimension,
                                 s.grid_min, s.grid_max, s.random_pairs):
            pts.append(x)
            pts.append(y)
    return pts


def build_pair_sample(cfg: ExperimentConfig) -> list:
    s = cfg.samples
    grid = grid_points(cfg.backend, s.grid_min, s.grid_max, s.grid_count,
                       cfg.dimension)
    pairs = [(x, y) for x in grid for y in grid]
    if s.random_pairs > 0:
        rng = SplitMix64(s.seed + 1)
        pairs.extend(random_pairs(rng, cfg.backend, cfg.dimension,
                                  s.grid_min, s.grid_max, s.random_pairs))
    return pairs


def build_coeff_sample(cfg: ExperimentConfig) -> list:
    coeffs = canonical_coeff_pairs(cfg.backend)
    if cfg.samples.coeff_pairs > 0:
        rng = SplitMix64((cfg.samples.seed or 0) + 2)
        coeffs.extend(random_coeff_pairs(rng, cfg.backend,
                                         cfg.samples.coeff_pairs))
    return coeffs


def _print_report(name: str, ok: bool, detail: str, witnesses=()):
    print(f"{'ok  ' if ok else 'FAIL'} {name}: {detail}")
    for w in witnesses:
        print(f"     witness: {w}")


def _format_pair_violation(be: Backend, v) -> str:
    parts = [f"x={tuple(be.format(c) for c in v.x)}",
             f"y={tuple(be.format(c) for c in v.y)}"]
    if v.lhs is not None:
        parts.append(f"lhs={be.format(v.lhs)}")
        parts.append(f"rhs={be.format(v.rhs)}")
    return ", ".join(parts)


def cmd_check(cfg: ExperimentConfig) -> int:
    be = cfg.backend
    points = build_point_sample(cfg)
    pairs = build_pair_sample(cfg)
    coeffs = build_coeff_sample(cfg)
    failed = False

    rep = check_modular_axioms(cfg.spec, points, coeffs, backend=be)
    _print_report("modular-axioms", rep.ok,
                  f"{len(rep.violations)} violation(s) in {rep.checks} checks",
                  [f"{v.axiom} {v.witness}" for v in rep.violations[:3]])
    failed |= not rep.ok

    if cfg.spec.convex:
        rep = check_convexity(cfg.spec, points, coeffs, backend=be)
        _print_report("convexity", rep.ok,
                      f"{len(rep.violations)} violation(s) in {rep.checks} checks",
                      [f"{v.axiom} {v.witness}" for v in rep.violations[:3]])
        failed |= not rep.ok

    rep = check_edge_preservation(cfg.map, cfg.graph, pairs)
    _print_report("edge-preservation", rep.ok,
                  f"{len(rep.violations)} violation(s) on {rep.pairs_checked} edges",
                  [_format_pair_violation(be, v) for v in rep.violations[:3]])
    failed |= not rep.ok

    if cfg.mode == "banach":
        rep = check_banach_condition(cfg.map, cfg.spec, cfg.graph, cfg.banach,
                                     pairs, use_undirected=cfg.undirected,
                                     backend=be)
        ratio = "n/a" if rep.max_ratio is None else be.format(rep.max_ratio)
        _print_report("banach-condition", rep.ok,
                      f"{len(rep.violations)} violation(s) on "
                      f"{rep.pairs_checked} edges, max lhs/rhs = {ratio}",
                      [_format_pair_violation(be, v) for v in rep.violations[:3]])
    else:
        rep = check_kannan_condition(cfg.map, cfg.spec, cfg.graph, cfg.kannan,
                                     pairs, use_undirected=cfg.undirected,
                                     backend=be)
        ratio = "n/a" if rep.max_ratio is None else be.format(rep.max_ratio)
        _print_report("kannan-condition", rep.ok,
                      f"{len(rep.violations)} violation(s) on "
                      f"{rep.pairs_checked} edges, max lhs/rhs = {ratio}",
                      [_format_pair_violation(be, v) for v in rep.violations[:3]])
        print(f"     note: a2 <= b/2 (undirected role-interchange margin): "
              f"{'yes' if rep.a2_within_half_b else 'no'}")
    failed |= not rep.ok

    print("result:", "FAIL" if failed else "ok")
    return 1 if failed else 0


def _write_csv(path: str, header, rows, be: Backend) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([c if isinstance(c, str) else be.format(c) for c in row])


def _print_certificate(cert, be: Backend) -> None:
    print(f"mode: {cert.mode}")
    print(f"backend: {cert.backend}")
    if cert.mode == "banach":
        c = cert.constants
        print(f"constants: k={be.format(c.k)} a={be.format(c.a)} b={be.format(c.b)}")
        print(f"alpha: {be.format(cert.alpha)}  seed r: {be.format(cert.initial_gap)}"
              f"  rate k: {be.format(cert.rate)}")
    else:
        c = cert.constants
        print(f"constants: k={be.format(c.k)} l={be.format(c.l)} "
              f"a1={be.format(c.a1)} a2={be.format(c.a2)} b={be.format(c.b)}")
        print(f"seed d0: {be.format(cert.initial_gap)}  rate delta: {be.format(cert.rate)}")
    print(f"iterations: {cert.iterations} (stop: {cert.stop_reason})")
    print(f"fixed point: {tuple(be.format(c) for c in cert.fixed_point)}"
          f"{' [exact]' if cert.exact_fixed else ''}"
          f"{' [snapped]' if cert.snapped else ''}")
    print(f"residual rho((b/2)(fx*-x*)): {be.format(cert.residual)}")
    print(f"bound at stop: {be.format(cert.bound_at_stop)}")
    print(f"forward-orbit edges checked to depth {cert.cf_checked_depth}: "
          f"{'ok' if cert.cf_ok else 'FAILED'}")
    ev = cert.uniqueness_evidence
    if ev is not None:
        if ev.kind == "path":
            print(f"uniqueness evidence: weakly connected on orbit witness set: "
                  f"{'yes' if ev.weakly_connected else 'no'}")
        else:
            z = ("none" if ev.common_neighbor is None
                 else tuple(be.format(c) for c in ev.common_neighbor))
            print(f"uniqueness evidence: common neighbor {z}, "
                  f"k < 1/2: {'yes' if ev.rate_below_half else 'no'}")
    print(f"converged: {'yes' if cert.converged else 'NO'}")


def cmd_solve(cfg: ExperimentConfig, out: str) -> int:
    if cfg.solve is None:
        raise ModfixError("config has no solve block")
    be = cfg.backend
    sv = cfg.solve
    if cfg.mode == "banach":
        cert = solve_banach(cfg.map, cfg.spec, cfg.graph, cfg.banach, sv.x0,
                            sv.tol, sv.max_iter, sv.cf_depth, backend=be)
        bound_fn = lambda n: banach_apriori_bound(cert.constants,
                                                  cert.initial_gap, n)
    else:
        cert = solve_kannan(cfg.map, cfg.spec, cfg.graph, cfg.kannan, sv.x0,
                            sv.tol, sv.max_iter, sv.cf_depth, backend=be)
        bound_fn = lambda n: (cert.initial_gap if n < 1
                              else kannan_tail_bound(cert.constants,
                                                     cert.initial_gap, n))
    header = (["n"] + [f"x_{i}" for i in range(cfg.dimension)]
              + ["step_gap", "apriori_bound"])
    rows = []
    for n, pt in enumerate(cert.trace.points):
        gap = "" if n == 0 else cert.trace.step_gaps[n - 1]
        rows.append([str(n)] + list(pt) + [gap, bound_fn(n)])
    _write_csv(out, header, rows, be)
    _print_certificate(cert, be)
    print(f"trace: {out} ({len(rows)} rows)")
    return 0 if cert.converged else 2


def cmd_bounds(cfg: ExperimentConfig, out: str) -> int:
    if cfg.solve is None:
        raise ModfixError("config has no solve block")
    be = cfg.backend
    sv = cfg.solve
    depth = sv.bounds_depth
    orbit = picard_orbit(cfg.map, sv.x0, depth).points
    if cfg.mode == "banach":
        c = cfg.banach
        r = rho_gap(cfg.spec, c.alpha * c.a, orbit[1], orbit[0])
        bound_fn = lambda n, m: banach_apriori_bound(c, r, n)
    else:
        c = cfg.kannan
        d0 = rho_gap(cfg.spec, c.b, orbit[1], orbit[0])
        bound_fn = lambda n, m: kannan_cauchy_bound(c, d0, n, m)
    rows = []
    negative = 0
    for n in range(1, depth + 1):
        for m in range(n, depth + 1):
            actual = rho_gap(cfg.spec, c.b, orbit[m], orbit[n])
            bound = bound_fn(n, m)
            slack = bound - actual
            if be.violates(actual, bound):
                negative += 1
            rows.append([str(n), str(m), actual, bound, slack])
    _write_csv(out, ["n", "m", "actual_gap", "bound", "slack"], rows, be)
    print(f"bounds: {len(rows)} rows, {negative} negative-slack row(s) -> {out}")
    return 1 if negative else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="modfix",
        description="Fixed points of graph-constrained contractions on "
                    "modular spaces: checkers, solver, bound tables, repro.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_out):
        p.add_argument("--config", required=True, help="path to a JSON config")
        p.add_argument("--backend", choices=["exact", "float"], default=None,
                       help="numeric backend override (beats MODFIX_BACKEND)")
        if needs_out:
            p.add_argument("--out", required=True, help="output CSV path")

    add_common(sub.add_parser("check", help="sample the hypotheses"), False)
    add_common(sub.add_parser("solve", help="certified Picard iteration"), True)
    add_common(sub.add_parser("bounds", help="bound-vs-actual table"), True)
    sub.add_parser("repro", help="replay embedded worked examples (exact backend)")

    args = parser.parse_args(argv)
    try:
        if args.command == "repro":
            return run_repro()
        cfg = load_config(args.config, _resolve_backend_name(args.backend))
        if args.command == "check":
            return cmd_check(cfg)
        if args.command == "solve":
            return cmd_solve(cfg, args.out)
        return cmd_bounds(cfg, args.out)
    except ModfixError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
