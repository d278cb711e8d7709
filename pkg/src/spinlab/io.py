"""Instance files, canonical JSON and the verification suites behind ``spinlab verify``."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from .correspondence import (RulingCurveR, build_correspondence, check_generality_R, marked_points,
                             random_ruling_curve)
from .field import parse_field
from .quadric import QuadricContext, build_context, sample_context

SUITES = ("branch", "theta", "incidence", "embedding", "symmetry")


def canonical_json(obj) -> str:
    """Sorted keys, fixed separators, trailing newline; floats are refused."""
    _no_floats(obj)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def _no_floats(obj):
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in spinlab JSON")
    if isinstance(obj, dict):
        for v in obj.values():
            _no_floats(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _no_floats(v)


@dataclass
class Instance:
    ctx: QuadricContext
    R: RulingCurveR
    seed: Optional[int] = None

    @property
    def d(self) -> int:
        return self.R.d

    def to_json(self):
        return {
            "context": self.ctx.params_json(),
            "d": self.d,
            "seed": self.seed,
            "R": [self.ctx.K.to_json(c) for c in self.R.coeffs],
        }

    def dumps(self) -> str:
        return canonical_json(self.to_json())

    @classmethod
    def from_json(cls, obj) -> "Instance":
        c = obj["context"]
        base = parse_field(c["field"])
        ctx = build_context(base, base.from_json(c["b0"]), base.from_json(c["b1"]),
                            base.from_json(c["alpha"]))
        coeffs = [ctx.K.from_json(s) for s in obj["R"]]
        d = int(obj["d"])
        if len(coeffs) != 2 * d:
            raise ValueError(f"expected {2 * d} coefficients, got {len(coeffs)}")
        return cls(ctx, RulingCurveR(d, coeffs), obj.get("seed"))

    @classmethod
    def loads(cls, text: str) -> "Instance":
        return cls.from_json(json.loads(text))


def make_instance(field_desc: str, d: int, seed: int, ctx: Optional[QuadricContext] = None) -> Instance:
    """Deterministic: the same (field, d, seed[, ctx]) always gives the same instance."""
    rng = random.Random(seed)
    if ctx is None:
        ctx = sample_context(parse_field(field_desc), rng)
    R, _ = random_ruling_curve(ctx, d, rng=rng)
    return Instance(ctx, R, seed)


def read_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return Instance.loads(fh.read())


def write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(obj))


# ---------------------------------------------------------------- suites


class _Runner:
    def __init__(self):
        self.results: List[Dict] = []

    def check(self, name: str, fn: Callable[[], bool]):
        try:
            ok = bool(fn())
            err = None
        except Exception as exc:  # a crashing check is a failing check
            ok, err = False, f"{type(exc).__name__}: {exc}"
        entry = {"check": name, "pass": ok}
        if err:
            entry["error"] = err
        self.results.append(entry)
        return ok


def _suite_branch(inst, st, run):
    ctx, R = inst.ctx, inst.R
    d = R.d
    corr = st.corr
    model = st.model
    run.check("generality conditions on R", lambda: all(check_generality_R(ctx, R, corr).values()))
    run.check("F has bidegree (d, 2)", lambda: corr.bidegree == (d, 2))
    run.check("discriminant equals b(r, z) b(r, z') up to scalar", corr.branch_matches_weierstrass)
    run.check("2d distinct branch points", lambda: corr.branch.is_squarefree() and corr.branch.n == 2 * d)
    run.check("genus d - 1", lambda: model.g == d - 1)
    run.check("partition sizes (d, d)", lambda: (model.U_delta.deg + 1, model.U_deltap.deg) == (d, d))
    run.check("Weierstrass supports lie in the cones", corr.weierstrass_lines_ok)
    run.check("C(R) is smooth", corr.is_smooth)


def _suite_theta(inst, st, run):
    from .jacobian import effective_in_class, is_ineffective, twice_is_canonical

    model = st.model
    th = model.theta_R()
    run.check("theta(R) is ineffective", lambda: is_ineffective(th))
    run.check("2 theta(R) is canonical", lambda: twice_is_canonical(th))
    run.check("|theta + m| is the fiber over y",
              lambda: effective_in_class(th.divisor + model.m) == model.fiber_y())
    run.check("|theta + n| is the fiber over x",
              lambda: effective_in_class(th.divisor + model.n) == model.fiber_x())


def _suite_incidence(inst, st, run, n_lines=5):
    from .incidence import (incidence_divisor, plucker_conic_check, support_multiplicity,
                            theta_from_incidence)
    from .jacobian import extract_model

    ctx, corr, model = inst.ctx, st.corr, st.model
    d = inst.d
    rng = random.Random(0 if inst.seed is None else inst.seed)
    for k, (ctx2, corr2, u, v) in enumerate(marked_points(ctx, inst.R, corr, rng, n_lines)):
        model2 = model if corr2 is corr else extract_model(corr2)
        th2 = model2.theta_R()

        def thm(ctx2=ctx2, corr2=corr2, model2=model2, th2=th2, u=u, v=v):
            D = theta_from_incidence(ctx2, corr2, model2, u, v)
            return (D - th2.divisor - model2.point_divisor(u, v)).reduced_class().is_identity()

        def deg(ctx2=ctx2, corr2=corr2, model2=model2, u=u, v=v):
            l = (corr2.point(u), ctx2.conic_point(*v))
            return incidence_divisor(ctx2, corr2, model2, l).degree == 2 * d

        run.check(f"marked line {k}: incidence divisor minus the line lies in |theta + [t, a]|", thm)
        run.check(f"marked line {k}: incidence divisor has degree 2d", deg)
    run.check("support multiplicity of l_x is d - 1", lambda: support_multiplicity(ctx, corr, ctx.l_x) == d - 1)
    run.check("support multiplicity of l_y is d - 1", lambda: support_multiplicity(ctx, corr, ctx.l_y) == d - 1)
    run.check("Weierstrass supports are coplanar on a plane conic", lambda: plucker_conic_check(ctx, corr))


def _suite_embedding(inst, st, run):
    from .reconstruction import identify_frames

    emb = st.embedding
    for name, ok in emb.checks.items():
        run.check(name, lambda ok=ok: ok)
    run.check("Lambda-factor frame is consistent for some eps",
              lambda: any(fc.consistent for fc in identify_frames(emb, inst.ctx)))


def _suite_symmetry(inst, st, run):
    from .reconstruction import extract_spin_tuple
    from .symmetry import (act_on_ruling_curve, aut_group, invariant_jacobian_rank, quotient_invariants,
                           spin_tuple_isomorphic)

    ctx, R = inst.ctx, inst.R
    run.check("automorphism matrices: congruence, Klein table, faithful", lambda: bool(aut_group(ctx)))
    gR = act_on_ruling_curve("g", R)
    run.check("g is an involution on coefficients", lambda: act_on_ruling_curve("g", gR).proj_equal(R))
    run.check("quotient invariants agree on R and g R",
              lambda: quotient_invariants(R) == quotient_invariants(gR))
    run.check("invariant map has differential rank 2d - 1",
              lambda: invariant_jacobian_rank(R) == 2 * R.d - 1)
    run.check("tuple of g R is isomorphic to the tuple of R",
              lambda: spin_tuple_isomorphic(st.tuple, extract_spin_tuple(ctx, gR)))


_SUITE_FUNCS = {
    "branch": _suite_branch,
    "theta": _suite_theta,
    "incidence": _suite_incidence,
    "embedding": _suite_embedding,
    "symmetry": _suite_symmetry,
}


class _State:
    """Lazily built shared objects for the suites."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self._corr = self._model = self._tuple = self._emb = None

    @property
    def corr(self):
        if self._corr is None:
            self._corr = build_correspondence(self.inst.ctx, self.inst.R, check=False)
            self._corr.choose_anchor()
        return self._corr

    @property
    def model(self):
        from .jacobian import extract_model

        if self._model is None:
            self._model = extract_model(self.corr)
        return self._model

    @property
    def tuple(self):
        from .reconstruction import extract_spin_tuple

        if self._tuple is None:
            self._tuple = extract_spin_tuple(self.inst.ctx, self.inst.R, self.corr)
        return self._tuple

    @property
    def embedding(self):
        from .reconstruction import product_embedding

        if self._emb is None:
            self._emb = product_embedding(self.tuple)
        return self._emb


def verify(inst: Instance, suites=SUITES) -> Dict:
    """Run the named suites; a suite whose setup fails reports that failure as its only check."""
    st = _State(inst)
    report = {"suites": {}, "pass": True}
    for name in suites:
        run = _Runner()
        try:
            _SUITE_FUNCS[name](inst, st, run)
        except Exception as exc:
            run.results.append({"check": "suite setup", "pass": False, "error": f"{type(exc).__name__}: {exc}"})
        report["suites"][name] = run.results
        if not all(r["pass"] for r in run.results):
            report["pass"] = False
    return report


def failing_checks(report) -> List[str]:
    return [f"{s}: {r['check']}" for s, rs in report["suites"].items() for r in rs if not r["pass"]]
