"""Command-line front end: compute, verify, render, oracle.

Exit codes: 0 success, 1 input/system error, 2 infeasible instance,
3 property verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .errors import IcPathError, VerificationFailed
from .geom import Point
from .instances import Instance, instance_from_json
from .oracle import SearchBudget, falsification_search
from .deadregion import build_dead_region, region_contains
from .paths import path_from_json, path_to_json
from .pipeline import IcResult, result_from_json, shortest_increasing_chords_path
from .svg import render_result_svg
from .verify import full_suite

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_VIOLATION = 3


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".icpath-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_instance(path: str) -> Instance:
    with open(path) as fh:
        return instance_from_json(json.load(fh))


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("IC_PATHS_SEED")
    return int(env) if env else 0


def cmd_compute(args) -> int:
    try:
        inst = _load_instance(args.instance)
        tol = args.tol if args.tol is not None else 1e-7 * inst.polygon.diameter
        delta = args.delta if args.delta is not None else tol
        result = shortest_increasing_chords_path(
            inst.polygon, inst.s, inst.t, tol=tol, delta=delta, verify_samples=args.n
        )
    except VerificationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (IcPathError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    payload = json.dumps(result.to_json(), indent=2)
    if args.out:
        _atomic_write(args.out, payload + "\n")
    else:
        print(payload)
    if result.status != "path":
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        inst = _load_instance(args.instance)
        with open(args.path) as fh:
            data = json.load(fh)
        if isinstance(data, dict) and "path" in data:
            data = data["path"]
        path = path_from_json(data)
        tol = args.tol if args.tol is not None else 1e-7 * inst.polygon.diameter
        reports = full_suite(path, n=args.n, tol=tol)
    except (IcPathError, OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    payload = json.dumps([r.to_json() for r in reports], indent=2)
    if args.out:
        _atomic_write(args.out, payload + "\n")
    else:
        print(payload)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


def cmd_render(args) -> int:
    try:
        inst = _load_instance(args.instance)
        with open(args.result) as fh:
            result = result_from_json(json.load(fh))
        svg = render_result_svg(inst, result)
        _atomic_write(args.svg, svg)
    except (IcPathError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def cmd_oracle(args) -> int:
    try:
        inst = _load_instance(args.instance)
        poly = inst.polygon
        tol = args.tol if args.tol is not None else 1e-7 * poly.diameter
        budget = SearchBudget(max_candidates=args.budget, seed=_seed(args))
        grid = args.grid
        xs = [v.x for v in poly.vertices]
        ys = [v.y for v in poly.vertices]
        report = {"name": inst.name, "grid": grid, "anchors": {}}
        for label, anchor in (("t", inst.t), ("s", inst.s)):
            regions = build_dead_region(poly, anchor, tol)
            agree = 0
            total = 0
            disagreements = []
            for i in range(grid):
                for j in range(grid):
                    p = Point(
                        min(xs) + (i + 0.5) * (max(xs) - min(xs)) / grid,
                        min(ys) + (j + 0.5) * (max(ys) - min(ys)) / grid,
                    )
                    if poly.contains(p) != "inside":
                        continue
                    by_region = any(
                        region_contains(r, p) == "inside" for r in regions
                    )
                    found = falsification_search(
                        poly, p, anchor, budget, prop="self_approaching",
                        n_verify=args.n, tol=tol,
                    )
                    by_search = found is None
                    total += 1
                    if by_region == by_search:
                        agree += 1
                    else:
                        disagreements.append([p.x, p.y])
            report["anchors"][label] = {
                "cells": total,
                "agreement": agree / total if total else 1.0,
                "disagreements": disagreements,
            }
    except (IcPathError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    payload = json.dumps(report, indent=2)
    if args.out:
        _atomic_write(args.out, payload + "\n")
    else:
        print(payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="icpath",
        description="Shortest paths with increasing chords in simple polygons",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute the shortest increasing-chords path")
    p.add_argument("instance")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--n", type=int, default=20000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="run the property verifier on a path file")
    p.add_argument("path")
    p.add_argument("instance")
    p.add_argument("--n", type=int, default=20000)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="render a result file to SVG")
    p.add_argument("result")
    p.add_argument("instance")
    p.add_argument("--svg", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("oracle", help="grid agreement: regions vs falsification search")
    p.add_argument("instance")
    p.add_argument("--budget", type=int, default=48)
    p.add_argument("--grid", type=int, default=40)
    p.add_argument("--n", type=int, default=800)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
