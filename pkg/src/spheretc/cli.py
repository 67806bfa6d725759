"""Command line interface: one binary, subcommands plan/verify/tc/euler/vfield.

Structured I/O is JSON; grids and sampled paths can also be emitted as CSV.
The verify subcommand exits 0 iff every check passes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import euler as eu
from . import planner as pl
from . import tc_oracle as tco
from .action import CyclicLinearAction, SpherePoint
from .errors import SphereTCError
from .verify import VerifyConfig, run_verify
from .vfield import field_certificate, j_field, projection_field
from .action import fixed_basis_vector


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_action(path: str) -> CyclicLinearAction:
    return CyclicLinearAction.from_dict(_load_json(path))


# --- plan -------------------------------------------------------------------

def _cmd_plan(args) -> int:
    action = _load_action(args.action)
    query = _load_json(args.query)
    x = SpherePoint(query["x"])
    y = SpherePoint(query["y"])
    samples = int(query.get("samples", args.samples))
    kind = args.planner
    if kind == "auto":
        kind = pl.select_planner_kind(action)
    path = pl.plan(action, kind, x, y)
    ts = np.linspace(0.0, 1.0, samples)
    points = path.evaluate_grid(ts)
    if args.format == "json":
        payload = {
            "planner": kind,
            "domain": path.domain.name,
            "rows": [{"t": float(t), "point": [float(c) for c in p]}
                     for t, p in zip(ts, points)],
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["t"] + [f"x{i}" for i in range(action.ambient_dim)] + ["domain"])
        for t, p in zip(ts, points):
            writer.writerow([repr(float(t))] + [repr(float(c)) for c in p]
                            + [path.domain.name])
        _emit(buf.getvalue(), args.out)
    return 0


# --- verify -----------------------------------------------------------------

def _cmd_verify(args) -> int:
    action = _load_action(args.action)
    config = VerifyConfig(seed=args.seed, samples=args.samples,
                          pair_samples=args.pair_samples, t_grid=args.t_grid)
    report = run_verify(action, planner_kind=args.planner, config=config)
    _emit(report.to_json(include_timing=not args.no_timing), args.out)
    return 0 if report.passed else 1


# --- tc ---------------------------------------------------------------------

def _cmd_tc(args) -> int:
    if args.table:
        ps = [int(v) for v in args.p.split(",")] if args.p else [2, 3, 5]
        rows = tco.table_rows(args.max_n, ps)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["n", "k", "p", "TC", "cat_G", "TC_G", "TC^G"])
        writer.writeheader()
        writer.writerows(rows)
        _emit(buf.getvalue(), args.out)
        return 0
    if args.query:
        q = _load_json(args.query)
        n, k, p = int(q["n"]), int(q["k"]), int(q["p"])
        invariant = q.get("invariant", args.invariant)
    else:
        if args.n is None or args.k is None:
            raise SphereTCError("tc needs either --query FILE or --n and --k")
        n, k, p = args.n, args.k, int(args.p or 2)
        invariant = args.invariant
    query = tco.SphereQuery(n=n, k=k, p=p)
    value = tco.query_value(query, invariant)
    payload = {"query": {"n": n, "k": k, "p": p}, "invariant": invariant,
               "value": value.render(), **value.to_dict()}
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return 0


# --- euler --------------------------------------------------------------------

def _cmd_euler(args) -> int:
    if not args.action and not args.gcw:
        raise SphereTCError("euler needs --action FILE or --gcw FILE")
    payload: dict = {}
    if args.gcw:
        complex_ = eu.GCWComplex.from_dict(_load_json(args.gcw))
    else:
        action = _load_action(args.action)
        complex_ = eu.linear_sphere_gcw(action)
        payload["action"] = action.to_dict()
        payload["orbit_space_euler"] = eu.orbit_space_euler(action)
        payload["vector_field"] = eu.vector_field_exists_predicate(action).value
    chi_def = eu.euler_definition(complex_)
    chi_fpf = eu.euler_fixed_point_formula(complex_)
    payload.update({
        "complex": complex_.to_dict(),
        "chi_definition": chi_def.to_dict(),
        "chi_fixed_point_formula": chi_fpf.to_dict(),
        "routes_agree": chi_def == chi_fpf,
        "weak_gap": eu.weak_gap_check(complex_).to_dict(),
    })
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return 0


# --- vfield ---------------------------------------------------------------------

def _cmd_vfield(args) -> int:
    action = _load_action(args.action)
    if args.field == "rotation":
        fld = j_field(action)
    else:
        fld = projection_field(action, fixed_basis_vector(action, 0))
    cert = field_certificate(action, fld, seed=args.seed, samples=args.samples)
    payload = {"action": action.to_dict(),
               "existence": eu.vector_field_exists_predicate(action).value,
               "certificate": cert.to_dict()}
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return 0


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spheretc",
        description="Equivariant motion planners and TC invariants on linear Z/p spheres")
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="evaluate a planned path for one query pair")
    p_plan.add_argument("--action", required=True, help="action JSON file")
    p_plan.add_argument("--query", required=True,
                        help='query JSON file: {"x": [...], "y": [...], "samples": N}')
    p_plan.add_argument("--planner", default="auto",
                        choices=("auto", "two", "three", "hemisphere"))
    p_plan.add_argument("--samples", type=int, default=101, help="time grid size")
    p_plan.add_argument("--format", default="json", choices=("json", "csv"))
    p_plan.add_argument("--out", default=None)
    p_plan.set_defaults(func=_cmd_plan)

    p_verify = sub.add_parser("verify", help="run the seeded verification suite")
    p_verify.add_argument("--action", required=True)
    p_verify.add_argument("--planner", default="auto",
                          choices=("auto", "two", "three", "hemisphere"))
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--samples", type=int, default=100_000)
    p_verify.add_argument("--pair-samples", type=int, default=10_000)
    p_verify.add_argument("--t-grid", type=int, default=1000)
    p_verify.add_argument("--no-timing", action="store_true",
                          help="omit elapsed times (byte-identical replays)")
    p_verify.add_argument("--out", default=None)
    p_verify.set_defaults(func=_cmd_verify)

    p_tc = sub.add_parser("tc", help="theorem-backed TC values and bounds")
    p_tc.add_argument("--query", default=None,
                      help='JSON file {"n":..,"k":..,"p":..,"invariant":..}')
    p_tc.add_argument("--n", type=int, default=None)
    p_tc.add_argument("--k", type=int, default=None)
    p_tc.add_argument("--p", default=None, help="prime, or comma list with --table")
    p_tc.add_argument("--invariant", default="TC_G", choices=tco.INVARIANT_NAMES)
    p_tc.add_argument("--table", action="store_true", help="emit the full CSV grid")
    p_tc.add_argument("--max-n", type=int, default=6)
    p_tc.add_argument("--out", default=None)
    p_tc.set_defaults(func=_cmd_tc)

    p_euler = sub.add_parser("euler", help="Burnside-ring Euler characteristics")
    p_euler.add_argument("--action", default=None)
    p_euler.add_argument("--gcw", default=None, help="G-CW complex JSON file")
    p_euler.add_argument("--out", default=None)
    p_euler.set_defaults(func=_cmd_euler)

    p_vf = sub.add_parser("vfield", help="equivariant vector field certificate")
    p_vf.add_argument("--action", required=True)
    p_vf.add_argument("--field", default="rotation", choices=("rotation", "projection"))
    p_vf.add_argument("--seed", type=int, default=0)
    p_vf.add_argument("--samples", type=int, default=10_000)
    p_vf.add_argument("--out", default=None)
    p_vf.set_defaults(func=_cmd_vfield)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SphereTCError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
