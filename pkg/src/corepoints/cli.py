"""Command line interface.

Exit codes: 0 success, 1 negative verdict (not a core point / infeasible /
not invariant / not equivalent), 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .balance import build_log_lattice, reduce_min_norm
from .enumeration import Canonicalizer, enumerate_core_classes, norm_bound
from .errors import BudgetExceeded
from .geometry import is_core_point
from .groups import GroupError, PermGroup, parse_cycles
from .ilp import (ILPError, brute_force_feasible, check_invariance, derive_box,
                  generate_hard_instance, improve_formulation, parse_instance,
                  transform, write_instance)
from .order_units import normalizer_generators, verify_unit
from .repdecomp import cyclic_components, is_qi_group, normalizer_finite

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def load_group(spec: str) -> PermGroup:
    """A group from a JSON file path or inline 1-based cycle notation."""
    path = Path(spec)
    if path.exists():
        return PermGroup.from_json(path.read_text())
    if spec.strip().startswith("("):
        return PermGroup.from_generators([parse_cycles(spec)])
    raise GroupError(f"cannot interpret group spec {spec!r} (no such file, not cycle notation)")


def parse_point(text: str) -> tuple[int, ...]:
    toks = text.replace(",", " ").replace("(", " ").replace(")", " ").split()
    return tuple(int(t) for t in toks)


def cmd_analyze(args) -> int:
    group = load_group(args.group)
    n = group.degree
    info: dict = {"degree": n, "order": group.order(),
                  "transitive": group.is_transitive()}
    if group.is_transitive():
        info["qi_group"] = is_qi_group(group)
    if group.cyclic_shift_power() is not None:
        info["normalizer_finite"] = normalizer_finite(n)
        info["components"] = [
            {"frequencies": list(c.frequency_class), "order": c.order,
             "real_dimension": c.real_dimension, "rational": c.rational}
            for c in cyclic_components(n)]
        lat = build_log_lattice(n)
        info["unit_lattice_rank"] = lat.rank
        info["balance_ratio_bound"] = lat.d_impl
    print(json.dumps(info, indent=2))
    return EXIT_OK


def cmd_corepoint_check(args) -> int:
    group = load_group(args.group)
    z = parse_point(args.point)
    ok = is_core_point(group, z)
    print("core point" if ok else "not a core point")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_corepoint_enumerate(args) -> int:
    group = load_group(args.group)
    filter_group = load_group(args.subgroup_filter) if args.subgroup_filter else None
    classes = enumerate_core_classes(group, args.layer, bound=args.bound,
                                     c_const=Fraction(args.c_const),
                                     filter_group=filter_group)
    payload = [cls.to_dict() for cls in classes]
    text = json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_reduce(args) -> int:
    group = load_group(args.group)
    z = parse_point(args.point)
    gens = normalizer_generators(group.degree)
    reduced, move = reduce_min_norm(z, gens, radius=args.radius)
    print(json.dumps({"input": list(z), "reduced": list(reduced),
                      "matrix": [list(r) for r in move.S.matrix],
                      "translation": list(move.t)}, indent=2))
    return EXIT_OK


def cmd_ilp_check_sym(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    group = load_group(args.group)
    ok = check_invariance(inst, group)
    print("invariant" if ok else "not invariant")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_ilp_transform(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    group = load_group(args.group)
    S = json.loads(Path(args.matrix).read_text())
    unit = verify_unit(S, group)
    t = parse_point(args.translate) if args.translate else tuple([0] * inst.dim)
    out = transform(inst, unit, t)
    sys.stdout.write(write_instance(out))
    return EXIT_OK


def cmd_ilp_improve(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    group = load_group(args.group)
    report = improve_formulation(inst, group, budget=args.budget)
    sys.stdout.write(write_instance(report.result))
    print(f"# steps: {', '.join(report.steps) if report.steps else '(none)'}", file=sys.stderr)
    print(f"# max |entry|: {report.before.max_abs} -> {report.after.max_abs}", file=sys.stderr)
    return EXIT_OK


def cmd_ilp_generate_hard(args) -> int:
    group = load_group(args.group)
    z = parse_point(args.point)
    inst = generate_hard_instance(group, z, shrink=args.shrink)
    sys.stdout.write(write_instance(inst))
    return EXIT_OK


def cmd_ilp_brute_solve(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    if args.box:
        toks = [int(t) for t in args.box.replace(",", " ").split()]
        box = list(zip(toks[::2], toks[1::2]))
    else:
        box = derive_box(inst)
    sol = brute_force_feasible(inst, box, budget=args.budget)
    if sol is None:
        print("infeasible")
        return EXIT_NEGATIVE
    print(json.dumps({"solution": list(sol)}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="corepoints",
        description="Core points of lattice orbit polytopes and symmetric ILP reformulation")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="decomposition, QI and finiteness tests")
    p.add_argument("group")
    p.set_defaults(func=cmd_analyze)

    cp = sub.add_parser("corepoint", help="core point operations")
    cpsub = cp.add_subparsers(dest="subcommand", required=True)
    p = cpsub.add_parser("check", help="decide whether a point is a core point")
    p.add_argument("group")
    p.add_argument("point")
    p.set_defaults(func=cmd_corepoint_check)
    p = cpsub.add_parser("enumerate", help="enumerate core point classes of a layer")
    p.add_argument("--group", required=True)
    p.add_argument("--layer", type=int, required=True)
    p.add_argument("--bound", type=float, default=None)
    p.add_argument("--c-const", dest="c_const", default="48/5")
    p.add_argument("--subgroup-filter", dest="subgroup_filter", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_corepoint_enumerate)

    p = sub.add_parser("reduce", help="norm-reduce a point by normalizer moves")
    p.add_argument("group")
    p.add_argument("point")
    p.add_argument("--radius", type=int, default=2)
    p.set_defaults(func=cmd_reduce)

    ilp = sub.add_parser("ilp", help="integer linear program operations")
    ilpsub = ilp.add_subparsers(dest="subcommand", required=True)
    p = ilpsub.add_parser("check-sym", help="check invariance under a group")
    p.add_argument("instance")
    p.add_argument("group")
    p.set_defaults(func=cmd_ilp_check_sym)
    p = ilpsub.add_parser("transform", help="apply a unimodular substitution")
    p.add_argument("instance")
    p.add_argument("group")
    p.add_argument("matrix", help="JSON file with the matrix rows")
    p.add_argument("--translate", default=None)
    p.set_defaults(func=cmd_ilp_transform)
    p = ilpsub.add_parser("improve", help="greedy coefficient reduction")
    p.add_argument("instance")
    p.add_argument("group")
    p.add_argument("--budget", type=int, default=100)
    p.set_defaults(func=cmd_ilp_improve)
    p = ilpsub.add_parser("generate-hard", help="hard instance from a core point")
    p.add_argument("group")
    p.add_argument("point")
    p.add_argument("--shrink", type=int, default=1)
    p.set_defaults(func=cmd_ilp_generate_hard)
    p = ilpsub.add_parser("brute-solve", help="complete integral feasibility search")
    p.add_argument("instance")
    p.add_argument("--box", default=None,
                   help="lo hi pairs per coordinate, e.g. '-3 3 -3 3'")
    p.add_argument("--budget", type=int, default=10 ** 9)
    p.set_defaults(func=cmd_ilp_brute_solve)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (GroupError, ILPError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
