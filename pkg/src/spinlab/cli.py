"""Command-line front end: ``spinlab construct|verify|roundtrip|quotient|act|selftest``.

Exit codes: 0 success, 1 verification failure or bad flags, 2 sampling
exhaustion, 3 tuple not in the image of the moduli map.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import __version__
from .correspondence import SamplingError
from .io import SUITES, Instance, canonical_json, failing_checks, make_instance, read_instance, verify
from .quadric import ContextError

EXIT_OK, EXIT_FAIL, EXIT_SAMPLING, EXIT_NOT_IN_IMAGE = 0, 1, 2, 3

log = logging.getLogger("spinlab")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_FAIL)


def _field_arg(s: str) -> str:
    if s == "qq":
        return s
    if s.startswith("fp:"):
        try:
            p = int(s[3:])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad prime in {s!r}")
        from sympy import isprime

        if p < 5 or not isprime(p):
            raise argparse.ArgumentTypeError(f"{p} is not a prime >= 5")
        return s
    raise argparse.ArgumentTypeError("field must be fp:P or qq")


def _degree_arg(s: str) -> int:
    try:
        d = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}")
    if d < 3:
        raise argparse.ArgumentTypeError("d must be at least 3")
    return d


def _seed(args) -> int:
    env = os.environ.get("SPINLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(f"SPINLAB_SEED must be an integer, got {env!r}")
    return args.seed


def _emit(obj):
    sys.stdout.write(canonical_json(obj))


# ---------------------------------------------------------------- commands


def cmd_construct(args) -> int:
    seed = _seed(args)
    try:
        ctx = read_instance(args.context).ctx if args.context else None
        inst = make_instance(args.field, args.d, seed, ctx=ctx)
    except (SamplingError, ContextError) as exc:
        print(f"sampling failed: {exc}", file=sys.stderr)
        return EXIT_SAMPLING
    text = inst.dumps()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    from .correspondence import build_correspondence
    from .jacobian import extract_model

    corr = build_correspondence(inst.ctx, inst.R)
    corr.choose_anchor()
    model = extract_model(corr)
    K = inst.ctx.K
    enc = lambda P: [[K.to_json(c) for c in P[0]], [K.to_json(c) for c in P[1]]]
    summary = {
        "d": inst.d,
        "genus": model.g,
        "partition_sizes": [model.U_delta.deg + 1, model.U_deltap.deg],
        "m": enc(corr.m_point),
        "n": enc(corr.n_point),
        "anchor": K.to_json(corr.anchor),
        "seed": seed,
        "out": args.out,
    }
    _emit(summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = read_instance(args.file)
    suites = SUITES if args.suite == "all" else (args.suite,)
    report = verify(inst, suites)
    _emit(report)
    if not report["pass"]:
        for name in failing_checks(report):
            print(f"FAILED: {name}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    from .reconstruction import NotInImage, ReconstructionError, roundtrip

    inst = read_instance(args.file)
    K = inst.ctx.K
    try:
        rt = roundtrip(inst.ctx, inst.R)
    except NotInImage as exc:
        _emit({"accepted": False, "reason": str(exc)})
        return EXIT_NOT_IN_IMAGE
    except ReconstructionError as exc:
        _emit({"accepted": False, "reason": str(exc)})
        return EXIT_FAIL
    rep = rt.reconstruction.to_json(K)
    rep["orbit_match"] = rt.orbit_match
    rep["torus_parameter"] = None if rt.torus_parameter is None else K.to_json(rt.torus_parameter)
    _emit(rep)
    return EXIT_OK if rt.orbit_match else EXIT_FAIL


def cmd_quotient(args) -> int:
    from .symmetry import orbit_equal, quotient_invariants, torus_orbit_equal

    a, b = read_instance(args.file1), read_instance(args.file2)
    same = a.ctx.params_json() == b.ctx.params_json()
    if not same:
        print("warning: instances live on different contexts", file=sys.stderr)
    K = a.ctx.K
    ia, ib = quotient_invariants(a.R), quotient_invariants(b.R)
    c = torus_orbit_equal(a.R, b.R)
    _emit({
        "invariants": [[K.to_json(x) for x in ia], [K.to_json(x) for x in ib]],
        "orbit_equal": same and orbit_equal(a.R, b.R),
        "same_context": same,
        "invariants_equal": ia == ib,
        "torus_parameter": None if (c is None or not same) else K.to_json(c),
    })
    return EXIT_OK


def cmd_act(args) -> int:
    from .symmetry import act_on_ruling_curve

    inst = read_instance(args.file)
    K = inst.ctx.K
    elt = args.element if args.element in ("id", "g") else K.from_json(args.element)
    out = Instance(inst.ctx, act_on_ruling_curve(elt, inst.R).normalized(), inst.seed)
    text = out.dumps()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_selftest(args) -> int:
    """Construct, verify and round-trip a few small instances."""
    from .reconstruction import NotInImage, roundtrip

    seed = _seed(args)
    rows = []
    ok = True
    for field, d in (("fp:101", 3), ("fp:101", 4), ("fp:10007", 5)):
        try:
            inst = make_instance(field, d, seed)
        except (SamplingError, ContextError) as exc:
            rows.append({"field": field, "d": d, "error": str(exc)})
            ok = False
            continue
        rep = verify(inst)
        try:
            rt = roundtrip(inst.ctx, inst.R)
            rt_ok, torus = rt.orbit_match, rt.torus_parameter is not None
        except NotInImage:
            rt_ok, torus = False, False
        rows.append({"field": field, "d": d, "verify": rep["pass"], "roundtrip_orbit": rt_ok,
                     "roundtrip_torus_orbit": torus})
        ok = ok and rep["pass"] and torus
    _emit({"selftest": rows, "pass": ok})
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spinlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"spinlab {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="sample a context and a ruling curve")
    c.add_argument("--d", type=_degree_arg, required=True)
    c.add_argument("--field", type=_field_arg, default="fp:101")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")
    c.add_argument("--context", help="reuse the quadric context of an existing instance file")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="run the invariant suites on an instance")
    v.add_argument("file")
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("roundtrip", help="extract the spin tuple and reconstruct R")
    r.add_argument("file")
    r.set_defaults(func=cmd_roundtrip)

    q = sub.add_parser("quotient", help="compare two instances modulo the symmetry group")
    q.add_argument("file1")
    q.add_argument("file2")
    q.set_defaults(func=cmd_quotient)

    a = sub.add_parser("act", help="apply g, the identity, or a torus parameter to an instance")
    a.add_argument("file")
    a.add_argument("--element", default="g")
    a.add_argument("--out")
    a.set_defaults(func=cmd_act)

    s = sub.add_parser("selftest", help="construct, verify and round-trip small instances")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
