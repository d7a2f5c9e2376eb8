"""``qcr``: JSON in on stdin (or a file), JSON out on stdout.

Verbs chain through pipes, e.g. ``qcr model --factor CoV:1 | qcr splitting``.
Exit status is 0 on success, 1 on a domain error (a JSON object naming the
error and its module is printed), 2 when the input does not parse.
"""
from __future__ import annotations

import argparse
import random
import sys
import time

from . import linalg as la
from . import serialize as ser
from .conjugations import ConditionFailed, ConjugationError, quaternionify, recover_real_form, tau
from .experiments import disguise, round_trip
from .fstructures import FQuatTriple, FrameError, InvalidTriple, cocr_side, conformal_3d, cr_side, model_f_triple, validate_triple
from .models import ClassificationInconsistency, NotClassifiable, build, classify, dual_pair, parse_factor
from .pencil import CrossOracleMismatch, SplittingError, TorsionDetected, analyze_pair
from .quaternion import QI, QJ, format_quaternion
from .selftest import MUTATIONS, run_selftest
from .structures import StructureError, conjugate_structure, random_automorphism

VERBS = ("check", "splitting", "classify", "model", "dual", "ftriple", "conjugation-recover", "random", "selftest")

# error class -> originating module
DOMAIN_ERRORS = {
    StructureError: "quaternion-structures",
    TorsionDetected: "twistor-pencil",
    SplittingError: "twistor-pencil",
    CrossOracleMismatch: "twistor-pencil",
    NotClassifiable: "models-classification",
    ClassificationInconsistency: "models-classification",
    InvalidTriple: "f-structures",
    FrameError: "f-structures",
    ConjugationError: "conjugations",
    ConditionFailed: "conjugations",
}


class DimensionGuard(ValueError):
    """Input exceeds --max-dim."""


class UsageError(ValueError):
    pass


def _read(args):
    if args.input and args.input != "-":
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ser.ParseError(f"cannot read {args.input}: {exc}") from None
    else:
        text = sys.stdin.read()
    return ser.loads(text)


def _unwrap(doc, key: str):
    """Accept a bare document or one wrapped under ``key`` by an earlier verb."""
    if isinstance(doc, dict) and key in doc and isinstance(doc[key], (dict, list)):
        return doc[key]
    return doc


def _guard(dim: int, args) -> None:
    if dim // 4 > args.max_dim:
        raise DimensionGuard(f"quaternionic dimension {dim // 4} exceeds --max-dim {args.max_dim}")


def _pair(args):
    p = ser.pair_from_json(_unwrap(_read(args), "pair"))
    _guard(p.e.dim, args)
    return p


# ------------------------------------------------------------- verbs


def cmd_check(args):
    p = _pair(args)
    r = analyze_pair(p, args.samples, args.seed)
    if args.kind == "cr":
        return {"cr": r.is_cr}
    if args.kind == "cocr":
        return {"cocr": r.is_co_cr}
    return ser.report_to_json(r)


def cmd_splitting(args):
    p = _pair(args)
    r = analyze_pair(p)
    if r.has_torsion:
        raise TorsionDetected(r.torsion)
    if r.is_co_cr:
        return {"cocr": True, "plus": list(r.plus.degrees)}
    if r.is_cr:
        return {"cr": True, "minus": list(r.minus.degrees)}
    return ser.report_to_json(r)


def cmd_classify(args):
    doc = _read(args)
    if isinstance(doc, list):
        # an already computed decomposition is checked and echoed
        return ser.decomposition_to_json(ser.decomposition_from_json(doc))
    p = ser.pair_from_json(_unwrap(doc, "pair"))
    _guard(p.e.dim, args)
    return ser.decomposition_to_json(classify(p))


def cmd_model(args):
    if not args.factor:
        raise UsageError("model needs at least one --factor TAG:k")
    try:
        fs = [parse_factor(f) for f in args.factor]
    except ValueError as exc:
        raise ser.ParseError(str(exc)) from None
    if sum(f.quaternionic_dim for f in fs) > args.max_dim:
        raise DimensionGuard(f"model exceeds --max-dim {args.max_dim}")
    p = build(fs)
    if args.disguise:
        p = disguise(p, args.seed)
    doc = ser.pair_to_json(p)
    doc["factors"] = [str(f) for f in fs]
    if args.disguise:
        doc["seed"] = args.seed
    return doc


def cmd_dual(args):
    return ser.pair_to_json(dual_pair(_pair(args)))


def _triple_doc(t: FQuatTriple, args) -> dict:
    rep = validate_triple(t, args.samples, args.seed)
    doc = ser.triple_to_json(t)
    doc["valid"] = rep.ok
    doc["violations"] = list(rep.violations)
    if rep.ok:
        doc["cr_side"] = ser.report_to_json(analyze_pair(cr_side(t)))
        doc["cocr_side"] = ser.report_to_json(analyze_pair(cocr_side(t)))
    return doc


def cmd_ftriple(args):
    if args.frame is not None:
        frame = [[ser.scalar(x) for x in v.split(",")] for v in args.frame.split(";")]
        return _triple_doc(conformal_3d(frame), args)
    if args.l is not None or args.m is not None:
        l, m = args.l or 0, args.m or 0
        if l + m > args.max_dim:
            raise DimensionGuard(f"model exceeds --max-dim {args.max_dim}")
        try:
            t = model_f_triple(l, m)
        except ValueError as exc:
            raise InvalidTriple([str(exc)]) from None
        return _triple_doc(t, args)
    t = ser.triple_from_json(_unwrap(_read(args), "triple"))
    _guard(t.e.dim, args)
    return _triple_doc(t, args)


def cmd_conjugation_recover(args):
    if args.n is not None:
        if args.n < 1 or args.n > args.max_dim:
            raise DimensionGuard(f"n must lie in 1..{args.max_dim}")
        s = quaternionify(args.n)
        t1, t2 = tau(QI, args.n), tau(QJ, args.n)
        if args.disguise:
            phi = random_automorphism(s, args.seed).t
            s = conjugate_structure(s, phi)
            inv = la.inverse(phi)
            t1, t2 = (la.matmul(la.matmul(phi, t), inv) for t in (t1, t2))
    else:
        s, t1, t2 = ser.conjugation_input_from_json(_read(args))
        _guard(s.dim, args)
    rf = recover_real_form(s, t1, t2)
    return {
        "u": ser.subspace_to_json(rf.u),
        "iso": ser.matrix_to_json(rf.iso),
        "axes": [None if a is None else format_quaternion(a) for a in rf.axes],
    }


def cmd_random(args):
    rng = random.Random(args.seed)
    runs = [round_trip(rng.getrandbits(64), args.max_dim) for _ in range(args.count)]
    return {
        "seed": args.seed,
        "max_dim": args.max_dim,
        "cases": [r.to_json() for r in runs],
        "recovered": sum(r.ok for r in runs),
        "total": len(runs),
    }


def cmd_selftest(args):
    return run_selftest(args.seed, args.mutate).to_json()


HANDLERS = {
    "check": cmd_check,
    "splitting": cmd_splitting,
    "classify": cmd_classify,
    "model": cmd_model,
    "dual": cmd_dual,
    "ftriple": cmd_ftriple,
    "conjugation-recover": cmd_conjugation_recover,
    "random": cmd_random,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every sampled choice (u64)")
    common.add_argument("--json", action="store_true", help="JSON output (the default for data verbs)")
    common.add_argument("--max-dim", type=int, default=32, help="largest quaternionic dimension accepted")
    common.add_argument("--samples", type=int, default=25, help="sphere points for pointwise cross-checks")

    parser = argparse.ArgumentParser(prog="qcr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, help_, takes_input=True):
        p = sub.add_parser(name, parents=[common], help=help_)
        if takes_input:
            p.add_argument("input", nargs="?", help="input file (default: stdin)")
        return p

    p = verb("check", "CR / co-CR flags and the full sheaf report of a pair")
    p.add_argument("--kind", choices=("cr", "cocr", "all"), default="all")
    verb("splitting", "splitting type of the sheaf of a (co-)CR pair")
    verb("classify", "model factors of a (co-)CR pair")
    p = verb("model", "direct sum of model pairs", takes_input=False)
    p.add_argument("--factor", action="append", help="TAG:k with TAG in CoV, CoVp, CrV, CrVp; repeatable")
    p.add_argument("--disguise", action="store_true", help="apply a seeded automorphism and representative rotation")
    verb("dual", "dual pair (Ann U, E*)")
    p = verb("ftriple", "f-quaternionic triple: model, conformal frame, or validate a stored one")
    p.add_argument("--l", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--frame", help="three vectors 'a,b,c;d,e,f;g,h,i' for the conformal constructor")
    p = verb("conjugation-recover", "real form from two commuting conjugations")
    p.add_argument("--n", type=int, help="use (H (x) R^n, tau_i, tau_j) instead of reading input")
    p.add_argument("--disguise", action="store_true", help="transport the built example by a seeded automorphism")
    p = verb("random", "seeded classification round trips", takes_input=False)
    p.add_argument("--count", type=int, default=10)
    p = verb("selftest", "run all invariant suites", takes_input=False)
    p.add_argument("--mutate", choices=MUTATIONS, help=argparse.SUPPRESS)
    return parser


def _human(verb: str, doc) -> str:
    if verb == "selftest":
        lines = [f"selftest seed={doc['seed']}: {doc['passed']} passed, {doc['failed']} failed"]
        for f in doc["failures"]:
            lines.append(f"FAIL [{f['module']}] {f['invariant']}: {f['reproducer']}")
        return "\n".join(lines)
    lines = [f"random seed={doc['seed']}: recovered {doc['recovered']}/{doc['total']}"]
    for c in doc["cases"]:
        ins = " ".join(f"{x['tag']}:{x['k']}" for x in c["input"])
        lines.append(f"{'ok ' if c['ok'] else 'BAD'} {ins}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        doc = HANDLERS[args.verb](args)
    except ser.ParseError as exc:
        print(ser.dumps({"error": "ParseError", "module": "cli", "message": str(exc)}))
        return 2
    except UsageError as exc:
        parser.error(str(exc))
    except DimensionGuard as exc:
        print(ser.dumps({"error": "DimensionGuard", "module": "cli", "message": str(exc)}))
        return 1
    except tuple(DOMAIN_ERRORS) as exc:
        module = next(m for cls, m in DOMAIN_ERRORS.items() if isinstance(exc, cls))
        err = {"error": type(exc).__name__, "module": module, "message": str(exc)}
        if isinstance(exc, TorsionDetected):
            err["factors"] = exc.factors
        print(ser.dumps(err))
        return 1
    if args.verb in ("selftest", "random") and not args.json:
        print(_human(args.verb, doc))
        print(f"({time.perf_counter() - start:.2f} s)", file=sys.stderr)
    else:
        print(ser.dumps(doc))
    if args.verb == "selftest":
        return 0 if doc["failed"] == 0 else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
