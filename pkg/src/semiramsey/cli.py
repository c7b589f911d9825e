"""Command-line interface.

Exit codes: 0 success or claim verified, 1 claim refuted (a checker says
no, certification fails, or a search result contradicts ``--expect``),
2 usage, input or guard error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import List, Optional

from . import __version__
from .construct import (
    CertificationError,
    GuardError,
    Limits,
    PreconditionError,
    certify_epsilon,
    certify_super_general_position,
    choose_epsilon,
    construct_P,
    step_up_sequence,
    tower,
)
from .homogeneity import (
    is_k_monotone,
    is_markov_system,
    is_order_type_homogeneous,
    is_phi_homogeneous,
    is_super_order_type_homogeneous,
    monotonicity_witness,
)
from .kernel import GeometryError, PointSequence
from .pointfile import PointFileError, dump, format_rational, load, to_csv
from .predicates import (
    PredicateEvaluationError,
    first_coord_order,
    orientation_predicate,
    second_difference_predicate,
)
from .search import (
    DEFAULT_NODE_BUDGET,
    exists_homogeneous_subsequence,
    exists_super_ot_homogeneous_subsequence,
    longest_monotone_subsequence,
)

PREDICATE_NAMES = ("orientation", "second_difference", "none")


class UsageError(Exception):
    pass


def _predicate(name: str, dim: int):
    if name == "none":
        return None
    if name == "orientation":
        return orientation_predicate(dim)
    if name == "second_difference":
        if dim != 1:
            raise UsageError("second_difference is defined for 1-dimensional points")
        return second_difference_predicate()
    raise UsageError(f"unknown predicate {name!r}; choose from {', '.join(PREDICATE_NAMES)}")


def _load_points(path: str) -> PointSequence:
    P, _ = load(path)
    if len(P) == 0:
        raise UsageError(f"{path}: no points")
    return P


def _mode(args):
    return "exhaustive" if args.mode == "exhaustive" else ("sampled", args.sample_size)


def _manifest(command: str, parameters: dict, result: dict, started: float, args) -> dict:
    out = {"command": command, "parameters": parameters, "result": result,
           "version": __version__}
    if getattr(args, "timing", False):
        out["timing"] = {"seconds": round(time.perf_counter() - started, 3)}
    return out


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=1, sort_keys=True) + "\n")


def cmd_tower(args) -> int:
    print(tower(args.height, args.x))
    return 0


def cmd_construct(args) -> int:
    started = time.perf_counter()
    C = construct_P(args.d, args.n, _mode(args), Limits.from_env())
    params = {"d": args.d, "n": args.n, "mode": args.mode}
    if args.mode == "sampled":
        params["sample_size"] = args.sample_size
    manifest = _manifest("construct", params, C.to_dict(), started, args)
    if args.output:
        dump(args.output, C.points, manifest)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(to_csv(C.points))
    _emit(manifest)
    return 0


def cmd_stepup(args) -> int:
    started = time.perf_counter()
    P = _load_points(args.input)
    phi = _predicate(args.predicate, P.dim)
    prec = first_coord_order(P.dim)
    limits = Limits.from_env()
    params = {"input_count": len(P), "dim": P.dim, "predicate": args.predicate,
              "mode": args.mode, "seed": args.seed}
    if args.mode == "sampled":
        params["sample_size"] = args.sample_size
    try:
        if args.epsilon is not None:
            eps = Fraction(args.epsilon)
            params["epsilon"] = format_rational(eps)
            cert = certify_epsilon(P, phi, prec, eps, _mode(args), seed=args.seed, limits=limits)
        else:
            params["epsilon"] = "auto"
            cert = choose_epsilon(P, phi, prec, _mode(args), limits=limits,
                                  return_certificate=True)
    except CertificationError as exc:
        witness = list(exc.witness) if exc.witness is not None else None
        _emit(_manifest("stepup", params,
                        {"certificate": {"failed": exc.check, "witness": witness,
                                         "message": str(exc)}}, started, args))
        return 1
    Q = step_up_sequence(P, cert.epsilon, limits)
    manifest = _manifest("stepup", params, {"count": len(Q), "certificate": cert.to_dict()},
                         started, args)
    if args.output:
        dump(args.output, Q, manifest)
    _emit(manifest)
    return 0


CHECKERS = ("order_type", "super_ot", "super_monotone", "k_monotone", "markov",
            "general_position", "phi")


def cmd_check(args) -> int:
    started = time.perf_counter()
    P = _load_points(args.input)
    name = args.checker
    params = {"checker": name, "count": len(P), "dim": P.dim}
    if name == "order_type":
        v = is_order_type_homogeneous(P)
        result = {"holds": v.homogeneous, "status": v.status.value,
                  "witness": list(v.witness) if v.witness else None}
    elif name == "super_ot":
        result = {"holds": is_super_order_type_homogeneous(P)}
    elif name in ("super_monotone", "k_monotone"):
        k = P.dim if name == "super_monotone" else args.k
        if k is None:
            raise UsageError("--k-monotone needs a level K")
        params["k"] = k
        w = monotonicity_witness(P, k)
        result = {"holds": w is None, "witness": list(w) if w else None}
    elif name == "markov":
        result = {"holds": is_markov_system(P)}
    elif name == "general_position":
        result = {"holds": certify_super_general_position(P, Limits.from_env().tuple_budget)}
    else:
        phi = _predicate(args.phi, P.dim)
        if phi is None:
            raise UsageError("--phi needs a predicate name")
        params["phi"] = args.phi
        v = is_phi_homogeneous(P, phi)
        result = {"holds": v.homogeneous, "status": v.status.value,
                  "witness": list(v.witness) if v.witness else None}
    result["exhaustive"] = True
    _emit(_manifest("check", params, result, started, args))
    return 0 if result["holds"] else 1


def cmd_search(args) -> int:
    started = time.perf_counter()
    P = _load_points(args.input)
    params = {"search": args.search, "n": args.n, "count": len(P), "dim": P.dim,
              "node_budget": args.node_budget}
    if args.search == "super_ot":
        if args.n < 2:
            raise UsageError("--super-ot needs n >= 2")
        r = exists_super_ot_homogeneous_subsequence(P, args.n, args.node_budget, args.threads)
    elif args.search == "monotone":
        r = longest_monotone_subsequence(P.first_coordinates(), args.n)
    else:
        phi = _predicate(args.phi, P.dim)
        if phi is None:
            raise UsageError("--phi needs a predicate name")
        params["phi"] = args.phi
        r = exists_homogeneous_subsequence(P, phi, args.n, args.node_budget)
    _emit(_manifest("search", params, r.to_dict(), started, args))
    if args.expect == "found" and not r.found:
        return 1
    if args.expect == "absent" and (r.found or not r.exhaustive):
        return 1
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semiramsey", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def certification_flags(sp):
        sp.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
        sp.add_argument("--sample-size", type=int, default=Limits().sample_size)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--timing", action="store_true",
                        help="add wall-clock time to the manifest (breaks byte-for-byte reproducibility)")

    sp = sub.add_parser("tower", help="exact tower value twr_height(x)")
    sp.add_argument("height", type=int)
    sp.add_argument("x", type=int)
    sp.set_defaults(func=cmd_tower)

    sp = sub.add_parser("construct", help="build the lower-bound sequence in R^d")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("-o", "--output")
    sp.add_argument("--csv", help="also write a lossy decimal CSV")
    certification_flags(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("stepup", help="lift a point file one dimension up")
    sp.add_argument("input")
    sp.add_argument("--predicate", default="none", choices=PREDICATE_NAMES)
    sp.add_argument("--epsilon", help="exact rational; chosen automatically when omitted")
    sp.add_argument("-o", "--output")
    certification_flags(sp)
    sp.set_defaults(func=cmd_stepup)

    sp = sub.add_parser("check", help="run a homogeneity checker")
    sp.add_argument("input")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--order-type", dest="checker", action="store_const", const="order_type")
    g.add_argument("--super-ot", dest="checker", action="store_const", const="super_ot")
    g.add_argument("--super-monotone", dest="checker", action="store_const", const="super_monotone")
    g.add_argument("--k-monotone", dest="k", type=int, metavar="K")
    g.add_argument("--markov", dest="checker", action="store_const", const="markov")
    g.add_argument("--general-position", dest="checker", action="store_const",
                   const="general_position")
    g.add_argument("--phi", choices=PREDICATE_NAMES[:-1])
    sp.add_argument("--timing", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("search", help="search for a homogeneous subsequence of length n")
    sp.add_argument("input")
    sp.add_argument("--n", type=int, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--super-ot", dest="search", action="store_const", const="super_ot")
    g.add_argument("--monotone", dest="search", action="store_const", const="monotone")
    g.add_argument("--phi", choices=PREDICATE_NAMES[:-1])
    sp.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--expect", choices=("found", "absent"),
                    help="exit 1 unless the result matches")
    sp.add_argument("--timing", action="store_true")
    sp.set_defaults(func=cmd_search)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    if args.command == "check":
        if args.k is not None:
            args.checker = "k_monotone"
        elif args.phi is not None:
            args.checker = "phi"
    if args.command == "search" and args.phi is not None:
        args.search = "phi"
    try:
        return args.func(args)
    except (UsageError, PointFileError, GuardError, PreconditionError, GeometryError,
            PredicateEvaluationError, ValueError, OSError) as exc:
        print(f"semiramsey: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
