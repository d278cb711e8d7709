"""Ruling curves R in |(1, d-1)| on Q_H and the marked-line correspondence C(R).

R is cut on the Segre model of Q_H by

    sigma = t0 * A(s) + t1 * B(s),   A = sum a_i s0^i s1^(r-i),  B likewise,

with r = d - 1.  Solving sigma = 0 for t parametrizes R by s = [s0:s1]:
t = [B(s) : -A(s)], a map of degree d into P^4.  C(R) is the curve
F(u, v) = b(r(u), c(v)) = 0 of bidegree (d, 2) on R x q, where u = s.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional

from .field import PrimeField
from .poly import BiPoly, Form, Poly, Residue, roots
from .quadric import QuadricContext, normalize, proj_equal


class SamplingError(RuntimeError):
    pass


class CorrespondenceError(ValueError):
    pass


@dataclass
class RulingCurveR:
    d: int
    coeffs: list  # (a_0..a_r, b_0..b_r)

    def __post_init__(self):
        if self.d < 3:
            raise ValueError("d must be at least 3")
        if len(self.coeffs) != 2 * self.d:
            raise ValueError("need 2d coefficients")

    @property
    def r(self):
        return self.d - 1

    @property
    def K(self):
        return self.coeffs[0].field

    @property
    def A(self) -> Form:
        return Form(self.K, self.r, self.coeffs[: self.d])

    @property
    def B(self) -> Form:
        return Form(self.K, self.r, self.coeffs[self.d:])

    def sigma(self, t, s):
        return t[0] * self.A(s[0], s[1]) + t[1] * self.B(s[0], s[1])

    def normalized(self):
        return RulingCurveR(self.d, normalize(self.coeffs))

    def proj_equal(self, other: "RulingCurveR") -> bool:
        return self.d == other.d and proj_equal(self.coeffs, other.coeffs)

    def to_json(self):
        K = self.K
        return {"d": self.d, "coeffs": [K.to_json(a) for a in self.coeffs]}

    @classmethod
    def from_json(cls, K, obj):
        return cls(int(obj["d"]), [K.from_json(s) for s in obj["coeffs"]])


# ---------------------------------------------------------------- forms of R


def ruling_point_forms(ctx: QuadricContext, R: RulingCurveR) -> List[Form]:
    """The 5 coordinate forms of r(s) in P^4, each of degree d in s."""
    A, B = R.A, R.B
    c0, c1 = B.times_u0(), -A.times_u1()
    c2, c3 = B.times_u1(), -A.times_u0()
    out = []
    for i in range(5):
        f = c0 * ctx.x[i] + c1 * ctx.y[i] + c2 * ctx.Y2[i] + c3 * ctx.Y3[i]
        out.append(f)
    return out


def pair_with(ctx, forms, vec) -> Form:
    """b(r(s), vec) as a form in s."""
    low = ctx.lower(vec)
    acc = None
    for f, c in zip(forms, low):
        if c == 0:
            continue
        t = f * c
        acc = t if acc is None else acc + t
    if acc is None:
        return Form(ctx.K, forms[0].n, [])
    return acc


def quadric_form_identity(ctx, forms) -> bool:
    """b(r(s), r(s)) vanishes identically."""
    B = ctx.gram()
    acc = None
    for i in range(5):
        for j in range(5):
            if B[i][j] != 0:
                t = forms[i] * forms[j] * B[i][j]
                acc = t if acc is None else acc + t
    return acc.is_zero()


def delta_form_coeffs(ctx, vertex):
    """Coefficients (k00, k01, k10, k11) of b(vertex, segre(t, s)) = sum k_ij t_i s_j."""
    return (ctx.bil(vertex, ctx.x), ctx.bil(vertex, ctx.Y2), ctx.bil(vertex, ctx.Y3), ctx.bil(vertex, ctx.y))


# ------------------------------------------------------------- correspondence


class CorrespondenceCurve:
    """C(R) as the biform F with its branch data and special points.

    Attributes of note: ``Fa, Fb, Fc`` (forms of degree d in u, F = Fa v0^2 +
    Fb v0 v1 + Fc v1^2), ``branch`` (form of degree 2d), ``Pz, Pzp``,
    ``fiber_x = A`` and ``fiber_y = B`` (forms of degree d-1), ``F`` as a
    :class:`BiPoly` in the affine coordinates u = s0/s1, v = v0/v1.
    """

    def __init__(self, ctx: QuadricContext, R: RulingCurveR):
        self.ctx = ctx
        self.R = R
        self.d = R.d
        self.g = R.d - 1
        self.K = ctx.K
        self.r_forms = ruling_point_forms(ctx, R)
        self.Fa = pair_with(ctx, self.r_forms, ctx.C20)
        self.Fb = pair_with(ctx, self.r_forms, ctx.C11)
        self.Fc = pair_with(ctx, self.r_forms, ctx.C02)
        self.branch = self.Fb * self.Fb - self.Fa * self.Fc * 4
        self.Pz = pair_with(ctx, self.r_forms, ctx.z)
        self.Pzp = pair_with(ctx, self.r_forms, ctx.zp)
        self.fiber_x = R.A
        self.fiber_y = R.B
        self.F = BiPoly(self.K, [self.Fc.poly(), self.Fb.poly(), self.Fa.poly()], 2)
        self.m_point = ((ctx.K.one(), ctx.K.zero()), (ctx.K.zero(), ctx.K.one()))  # (u, v)
        self.n_point = ((ctx.K.zero(), ctx.K.one()), (ctx.K.one(), ctx.K.zero()))
        self.v_x = (ctx.K.zero(), ctx.K.one())
        self.v_y = (ctx.K.one(), ctx.K.zero())
        self.anchor = None  # rational Weierstrass root s_1 (affine u), see choose_anchor

    # evaluation ---------------------------------------------------------

    def F_at(self, u, v):
        u0, u1 = u
        v0, v1 = v
        return self.Fa(u0, u1) * v0 * v0 + self.Fb(u0, u1) * v0 * v1 + self.Fc(u0, u1) * v1 * v1

    def point(self, u):
        return [f(u[0], u[1]) for f in self.r_forms]

    @property
    def bidegree(self):
        du = max(f.n for f in (self.Fa, self.Fb, self.Fc))
        return du, 2

    # invariants ---------------------------------------------------------

    def branch_matches_weierstrass(self) -> bool:
        return self.branch.proportional(self.Pz * self.Pzp)

    def weierstrass_lines_ok(self) -> bool:
        """At each root of P_z (resp. P_z'), F(s_i, .) has a double root a_i and
        <r(s_i), c(a_i)> lies in Q; checked in K[u]/(P)."""
        for P in (self.Pz, self.Pzp):
            if P.root_at_infinity():
                return False
            m = P.poly().monic()
            fa, fb, fc = (Residue(f.poly(), m) for f in (self.Fa, self.Fb, self.Fc))
            if not (fb * fb - fa * fc * 4).is_zero():
                return False
            v0, v1 = -fb, fa * 2
            rpt = [Residue(f.poly(), m) for f in self.r_forms]
            cpt = [v0 * v0 * a + v0 * v1 * b + v1 * v1 * c for a, b, c in zip(self.ctx.C20, self.ctx.C11, self.ctx.C02)]
            bil = self.ctx.bil
            if not (bil(rpt, cpt).is_zero() and bil(cpt, cpt).is_zero() and bil(rpt, rpt).is_zero()):
                return False
        return True

    def special_points_ok(self) -> bool:
        return self.F_at(*self.m_point) == 0 and self.F_at(*self.n_point) == 0

    def is_smooth(self) -> bool:
        """Jacobian criterion by elimination: no common zero of F, F_u, F_v."""
        return _smooth_by_elimination(self)

    # anchor for the odd model -------------------------------------------

    def rational_weierstrass_roots(self):
        """Finite nonzero rational roots of P_z in the affine coordinate u."""
        p = self.Pz.poly()
        try:
            rts = roots(p)
        except Exception:
            rts = []
        return [r for r in rts if r != 0]

    def choose_anchor(self):
        rts = self.rational_weierstrass_roots()
        if not rts:
            raise CorrespondenceError("no rational Weierstrass point on the Delta_H side")
        self.anchor = rts[0]
        return self.anchor


def _smooth_by_elimination(corr) -> bool:
    """Singular points satisfy F_v = 0, which is linear in v on each chart.

    In the chart v1 = 1, F_v = 0 gives v = -Fb / (2 Fa); substituting into F and
    F_u yields two forms in u whose common zeros (with Fa != 0) are exactly the
    singular points there.  The chart v0 = 1 is treated symmetrically and the
    points with Fa = Fb = 0 (resp. Fc = Fb = 0) separately.
    """
    Fa, Fb, Fc = corr.Fa, corr.Fb, corr.Fc

    def du(f: Form, which: int) -> Form:
        # partial derivative of a binary form w.r.t. u0 (which=0) or u1 (which=1)
        n = f.n
        if which == 0:
            return Form(f.K, n - 1, [f.c[i] * i for i in range(1, n + 1)])
        return Form(f.K, n - 1, [f.c[i] * (n - i) for i in range(n)])

    for which in (0, 1):
        Fau, Fbu, Fcu = du(Fa, which), du(Fb, which), du(Fc, which)
        for A_, B_, C_, Au, Bu, Cu in ((Fa, Fb, Fc, Fau, Fbu, Fcu), (Fc, Fb, Fa, Fcu, Fbu, Fau)):
            # v = -B/(2A): F = (4AC - B^2)/(4A);  F_u = Au v^2 + Bu v + Cu
            e1 = A_ * C_ * 4 - B_ * B_
            e2 = Au * B_ * B_ - Bu * B_ * A_ * 2 + Cu * A_ * A_ * 4
            if _forms_common_root(e1, e2, A_):
                return False
    return True


def _forms_common_root(f: Form, g: Form, nonzero: Form) -> bool:
    """Do f and g share a root [u0:u1] at which ``nonzero`` does not vanish?"""
    from .poly import gcd

    if f.is_zero() or g.is_zero():
        return True
    fp, gp = f.poly(), g.poly()
    h = gcd(fp, gp) if not (fp.is_zero() or gp.is_zero()) else (fp if gp.is_zero() else gp)
    # remove roots where `nonzero` vanishes
    npoly = nonzero.poly()
    while h.deg > 0:
        c = gcd(h, npoly)
        if c.deg == 0:
            break
        h = h.exact_div(c)
    if h.deg > 0:
        return True
    # root at infinity
    if f.root_at_infinity() and g.root_at_infinity() and not nonzero.root_at_infinity():
        return True
    return False


def check_generality_R(ctx: QuadricContext, R: RulingCurveR, corr: Optional[CorrespondenceCurve] = None):
    """Flags (a)-(f) plus irreducibility, smoothness and distinctness.

    Returns a dict name -> bool.
    """
    A, B = R.A, R.B
    flags = {}
    res_AB = _forms_common_root(A, B, Form(ctx.K, 0, [1]))
    flags["irreducible"] = not res_AB and not A.is_zero() and not B.is_zero()
    if not flags["irreducible"]:
        return flags
    corr = corr or CorrespondenceCurve(ctx, R)

    def misses(vertex, t):
        k00, k01, k10, k11 = delta_form_coeffs(ctx, vertex)
        # on the line t = [1:0]: s0 k00 + s1 k01; on t = [0:1]: s0 k10 + s1 k11
        c0, c1 = (k00, k01) if t == 0 else (k10, k11)
        if c0 == 0 and c1 == 0:
            return False
        s = (-c1, c0)
        form = A if t == 0 else B
        return form(*s) != 0

    flags["a"] = misses(ctx.z, 0) and misses(ctx.z, 1)
    flags["b"] = misses(ctx.zp, 0) and misses(ctx.zp, 1)
    flags["c"] = corr.Pz.is_squarefree()
    flags["d"] = corr.Pzp.is_squarefree()
    flags["e"] = A.is_squarefree() and A.n == corr.d - 1
    flags["f"] = B.is_squarefree() and B.n == corr.d - 1
    K = ctx.K
    s0 = Form(K, 1, [0, 1])
    s1 = Form(K, 1, [1, 0])
    allforms = corr.branch * A * B * s0 * s1
    flags["distinct special points"] = allforms.is_squarefree()
    flags["smooth"] = corr.branch.is_squarefree() and corr.is_smooth()
    return flags


def build_correspondence(ctx: QuadricContext, R: RulingCurveR, check=True) -> CorrespondenceCurve:
    corr = CorrespondenceCurve(ctx, R)
    if not check:
        return corr
    if not quadric_form_identity(ctx, corr.r_forms):
        raise CorrespondenceError("R does not lie on Q")
    if corr.bidegree != (corr.d, 2):
        raise CorrespondenceError("F has the wrong bidegree")
    if not corr.branch.is_squarefree() or corr.branch.n != 2 * corr.d:
        raise CorrespondenceError("branch form is not square-free of degree 2d")
    if not corr.branch_matches_weierstrass():
        raise CorrespondenceError("branch form differs from P_z * P_z'")
    if not corr.special_points_ok():
        raise CorrespondenceError("m(R) or n(R) is not on C(R)")
    if not corr.weierstrass_lines_ok():
        raise CorrespondenceError("a Weierstrass marked line fails")
    return corr


def marked_point_pair(corr: CorrespondenceCurve):
    """(m(R), n(R)) as ((u0, u1), (v0, v1)) pairs."""
    return corr.m_point, corr.n_point


# ------------------------------------------------------------------ sampling


def random_ruling_curve(ctx: QuadricContext, d: int, height: Optional[int] = None, seed=None,
                        rng: Optional[random.Random] = None, max_draws: int = 200):
    """Sample R with all generality flags true and a rational Weierstrass root.

    Over F_p the coefficients are drawn uniformly from [-height, height]
    (the whole field when ``height`` is None) and rejected until P_z has a
    finite nonzero root in F_p.  Over Q the vector is drawn in the hyperplane
    of curves through a random rational point of Delta_H, which provides that
    root.  Returns (R, corr).
    """
    if d < 3:
        raise ValueError("d must be at least 3")
    if height is not None and height < 1:
        raise SamplingError("height bound must be positive (no nonzero vectors)")
    rng = rng or random.Random(seed)
    K = ctx.K
    is_fp = isinstance(K, PrimeField)
    last = "none"
    for _ in range(max_draws):
        if is_fp:
            coeffs = [K.random_element(rng, height) for _ in range(2 * d)]
        else:
            coeffs = _sample_through_delta(ctx, d, rng, height or 5)
            if coeffs is None:
                last = "degenerate Delta_H point"
                continue
        if all(c == 0 for c in coeffs):
            last = "zero vector"
            continue
        R = RulingCurveR(d, coeffs)
        flags = check_generality_R(ctx, R)
        if not all(flags.values()):
            last = "generality flags " + ",".join(k for k, v in flags.items() if not v)
            continue
        try:
            corr = build_correspondence(ctx, R)
            corr.choose_anchor()
        except CorrespondenceError as exc:
            last = str(exc)
            continue
        return R, corr
    raise SamplingError(f"retry budget exhausted; last failure: {last}")


def _sample_through_delta(ctx, d, rng, height):
    K = ctx.K
    r = d - 1
    k00, k01, k10, k11 = delta_form_coeffs(ctx, ctx.z)
    s = (K(rng.choice([-1, 1]) * rng.randint(1, height)), K.one())
    t = (s[0] * k10 + s[1] * k11, -(s[0] * k00 + s[1] * k01))
    if t[0] == 0 and t[1] == 0:
        return None
    coeffs = [K(rng.randint(-height, height)) for _ in range(2 * d)]
    # sigma(t, s) = t0 sum a_i s0^i + t1 sum b_i s0^i (s1 = 1) must vanish
    row = [t[0] * s[0] ** i for i in range(d)] + [t[1] * s[0] ** i for i in range(d)]
    j = rng.choice([i for i, c in enumerate(row) if c != 0])
    acc = sum((row[i] * coeffs[i] for i in range(2 * d) if i != j), K.zero())
    coeffs[j] = -acc / row[j]
    _ = r
    return coeffs


def _on_special_fiber(corr, v) -> bool:
    return proj_equal(list(v), list(corr.v_x)) or proj_equal(list(v), list(corr.v_y))


def random_points(corr: CorrespondenceCurve, rng: random.Random, count: int, height: int = 50,
                  max_draws: int = 2000):
    """Distinct rational non-Weierstrass points (u, v) of C(R).

    Avoids m, n, the anchor fiber and the lines ending at x or y, whose
    supports are the (d - 1)-fold lines l_x and l_y.
    """
    K = corr.K
    one = K.one()
    out = []
    seen = set()
    for _ in range(max_draws):
        if len(out) == count:
            return out
        u = (K.random_element(rng, height), one)
        if corr.anchor is not None and u[0] == corr.anchor:
            continue
        q = Poly(K, [corr.Fc(*u), corr.Fb(*u), corr.Fa(*u)])
        if q.deg < 2:
            continue
        rs = roots(q)
        if len(rs) != 2:
            continue
        for r in rs:
            pt = (u, (r, one))
            key = (K.to_json(u[0]), K.to_json(r))
            if key in seen:
                continue
            if any(proj_equal(list(u), list(p[0])) and proj_equal(list(pt[1]), list(p[1]))
                   for p in (corr.m_point, corr.n_point)):
                continue
            if _on_special_fiber(corr, pt[1]):
                continue
            seen.add(key)
            out.append(pt)
            break
    if len(out) < count:
        raise SamplingError("could not find enough rational points on C(R)")
    return out


def base_change(ctx: QuadricContext, R: RulingCurveR, corr: CorrespondenceCurve, K2):
    """Rebuild (ctx, R, corr) over an extension K2 of ctx.K, keeping the anchor."""
    from .quadric import build_context

    ctx2 = build_context(K2, ctx.b0, ctx.b1, ctx.alpha)
    R2 = RulingCurveR(R.d, [ctx2.K.coerce(c) for c in R.coeffs])
    corr2 = build_correspondence(ctx2, R2, check=False)
    corr2.anchor = ctx2.K.coerce(corr.anchor) if corr.anchor is not None else None
    return ctx2, R2, corr2


def marked_points(ctx: QuadricContext, R: RulingCurveR, corr: CorrespondenceCurve, rng: random.Random,
                  count: int, height: int = 50):
    """``count`` non-Weierstrass points (u, v) of C(R), each with the data it lives over.

    Returns tuples (ctx', corr', u, v).  Over F_p the points are rational.
    Over Q a random fiber u rarely splits, so each point is taken over the
    quadratic field generated by its fiber when needed.
    """
    from .field import adjoin_sqrt

    if isinstance(ctx.K, PrimeField):
        return [(ctx, corr, u, v) for u, v in random_points(corr, rng, count, height)]
    K = ctx.K
    out = []
    used = set()
    for _ in range(50 * count):
        if len(out) == count:
            break
        u0 = K.random_element(rng, height)
        key = K.to_json(u0)
        if key in used or (corr.anchor is not None and u0 == corr.anchor):
            continue
        u = (u0, K.one())
        a, b, c = corr.Fa(*u), corr.Fb(*u), corr.Fc(*u)
        disc = b * b - 4 * a * c
        if a == 0 or disc == 0:
            continue
        used.add(key)
        K2, _ = adjoin_sqrt(K, disc)
        if K2 is K:
            ctx2, corr2 = ctx, corr
        else:
            ctx2, _, corr2 = base_change(ctx, R, corr, K2)
        L = ctx2.K
        u2 = (L.coerce(u0), L.one())
        rs = [r for r in roots(Poly(L, [corr2.Fc(*u2), corr2.Fb(*u2), corr2.Fa(*u2)]))
              if not _on_special_fiber(corr2, (r, L.one()))]
        if not rs:
            continue
        out.append((ctx2, corr2, u2, (rs[0], L.one())))
    if len(out) < count:
        raise SamplingError("could not find enough points on C(R)")
    return out
