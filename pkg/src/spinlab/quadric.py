"""The quadric threefold Q, the conic q and the hyperplane H in normal form.

Coordinates are x0..x4 with

    b_Q = b0*x0^2 + x1^2 + x2^2 + b1*x3^2 + 2*alpha*x3*x4 + x4^2,

the plane of q is x0 = x1 = 0 and H = b0*x0 + b1*x3 + alpha*x4.  All derived
anchors (z, z', x, y, the four special lines of Q_H and the Segre frame) are
computed from these three parameters; square roots are adjoined on demand.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import List, Optional

from .field import Field, FieldError, PrimeField, adjoin_sqrt
from .linalg import kernel, rank, solve


class ContextError(ValueError):
    """Raised when (b0, b1, alpha) violates a generality condition."""

    def __init__(self, condition, message=""):
        super().__init__(f"generality condition {condition} fails {message}".strip())
        self.condition = condition


class RulingError(ValueError):
    pass


# ----------------------------------------------------------- vector helpers


def vadd(u, v):
    return [a + b for a, b in zip(u, v)]


def vsub(u, v):
    return [a - b for a, b in zip(u, v)]


def vscale(c, u):
    return [c * a for a in u]


def vcomb(*pairs):
    """Linear combination sum(c_i * v_i) of (coefficient, vector) pairs."""
    out = None
    for c, v in pairs:
        t = [c * a for a in v]
        out = t if out is None else [a + b for a, b in zip(out, t)]
    return out


def normalize(v):
    """Projective normalization: first nonzero coordinate set to 1."""
    for a in v:
        if a != 0:
            inv = 1 / a
            return [c * inv for c in v]
    raise ValueError("zero vector is not a projective point")


def proj_equal(u, v) -> bool:
    """Equality of projective points (all 2x2 minors vanish)."""
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            if u[i] * v[j] - u[j] * v[i] != 0:
                return False
    return any(a != 0 for a in u) and any(a != 0 for a in v)


def wedge2(p, q):
    """Plücker coordinates p_i q_j - p_j q_i, i < j (10 entries in P^4)."""
    n = len(p)
    return [p[i] * q[j] - p[j] * q[i] for i in range(n) for j in range(i + 1, n)]


# ------------------------------------------------------------------ context


@dataclass
class GeneralityReport:
    flags: List[bool]
    extra: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.flags) and all(self.extra.values())

    def violated(self):
        bad = [i + 1 for i, f in enumerate(self.flags) if not f]
        bad += [k for k, v in self.extra.items() if not v]
        return bad


class QuadricContext:
    """The triple (Q, q, H) with anchors and Segre frame.

    Build with :func:`build_context`; attributes are plain lists of field
    elements (vectors of length 5).
    """

    def __init__(self, base: Field, b0, b1, alpha):
        self.base = base
        self.b0, self.b1, self.alpha = base(b0), base(b1), base(alpha)
        self.K = base

    # bilinear form -----------------------------------------------------

    def bil(self, u, v):
        b0, b1, al = self.b0, self.b1, self.alpha
        return (b0 * u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + b1 * u[3] * v[3]
                + al * (u[3] * v[4] + u[4] * v[3]) + u[4] * v[4])

    def quad(self, u):
        return self.bil(u, u)

    def gram(self):
        K = self.base
        z = K.zero()
        B = [[z] * 5 for _ in range(5)]
        B[0][0] = self.b0
        B[1][1] = K.one()
        B[2][2] = K.one()
        B[3][3] = self.b1
        B[3][4] = B[4][3] = self.alpha
        B[4][4] = K.one()
        return B

    def lower(self, u):
        """B u, the functional b(u, .)."""
        b0, b1, al = self.b0, self.b1, self.alpha
        return [b0 * u[0], u[1], u[2], b1 * u[3] + al * u[4], al * u[3] + u[4]]

    def H(self, u):
        return self.b0 * u[0] + self.b1 * u[3] + self.alpha * u[4]

    @property
    def h(self):
        K = self.base
        return [self.b0, K.zero(), K.zero(), self.b1, self.alpha]

    def e(self, i):
        K = self.K
        return [K.one() if j == i else K.zero() for j in range(5)]

    # lines and points ----------------------------------------------------

    def in_plane_of_q(self, p) -> bool:
        return p[0] == 0 and p[1] == 0

    def conic_point(self, v0, v1):
        """c(v) = v0^2 C20 + v0 v1 C11 + v1^2 C02 on q."""
        return vcomb((v0 * v0, self.C20), (v0 * v1, self.C11), (v1 * v1, self.C02))

    def conic_param_of(self, a):
        """The v-parameter [v0:v1] of a point a of q."""
        # c(v) is quadratic; solve using the base point x (v = [0:1]).
        if proj_equal(a, self.x):
            return [self.K.zero(), self.K.one()]
        # b(x, c(v)) = v0^2 b(x, C20) (the other terms vanish) and the line
        # x-a meets q again only at x, so D is proportional to the projection.
        # Use D = v0 y + v1 v2 with c(v) in span(x, D): a - t x lies in span(y, v2).
        M = [[self.y[i], self.v2[i], self.x[i]] for i in range(5)]
        sol = solve(M, list(a))
        if sol is None:
            raise ValueError("point is not on the plane of q")
        return normalize([sol[0], sol[1]])

    def segre(self, t, s):
        t0, t1 = t
        s0, s1 = s
        return vcomb((t0 * s0, self.x), (t1 * s1, self.y), (t0 * s1, self.Y2), (t1 * s0, self.Y3))

    def segre_coords(self, p):
        """Coordinates (c0..c3) of p in H along the basis (x, y, Y2, Y3)."""
        beta = self.beta
        return [self.bil(p, self.y) / beta, self.bil(p, self.x) / beta,
                -self.bil(p, self.Y3) / beta, -self.bil(p, self.Y2) / beta]

    def segre_inverse(self, p):
        c0, c1, c2, c3 = self.segre_coords(p)
        s = [c0, c2] if (c0 != 0 or c2 != 0) else [c3, c1]
        t = [c0, c3] if (c0 != 0 or c3 != 0) else [c2, c1]
        return normalize(t), normalize(s)

    def line_in_quadric(self, p, a) -> bool:
        if proj_equal(p, a):
            raise ValueError("line needs two distinct points")
        return self.quad(p) == 0 and self.quad(a) == 0 and self.bil(p, a) == 0

    def chord_points(self, t):
        """The points a of q with <t, a> inside Q (needs t on Q, off the plane)."""
        if self.in_plane_of_q(t):
            raise ValueError("t lies on the plane of q")
        qa = self.bil(t, self.C20)
        qb = self.bil(t, self.C11)
        qc = self.bil(t, self.C02)
        K = self.K
        if qa == 0:
            # root v = [1:0] plus the linear remainder
            r1 = [K.one(), K.zero()]
            r2 = normalize([-qc, qb]) if qb != 0 else r1
            roots = [r1, r2]
        else:
            disc = qb * qb - 4 * qa * qc
            L, s = adjoin_sqrt(K, disc) if disc != 0 else (K, K.zero())
            roots = [[(-qb + s) / (2 * qa), L.one()], [(-qb - s) / (2 * qa), L.one()]]
        return [self.conic_point(*v) for v in roots], roots

    # pencil of hyperplanes through the plane of q ------------------------

    def pencil_param(self, p):
        """[mu0:mu1] with mu0 x0 + mu1 x1 vanishing on <W, p>."""
        if self.in_plane_of_q(p):
            raise ValueError("point lies on the plane of q")
        return normalize([p[1], -p[0]])

    def singular_members(self):
        return [normalize(self.lower(self.z)[:2]), normalize(self.lower(self.zp)[:2])]

    def is_singular_member(self, mu) -> bool:
        return any(proj_equal(mu, m) for m in self.singular_members())

    # the conic of lines through x (coordinate on Lambda) ------------------

    def tau_of_point(self, p):
        """Coordinate tau of the line <x, p> (p on Q, orthogonal to x, p != x)."""
        sol = solve([[self.x[i], self.Y2[i], self.Y3[i], self.u[i]] for i in range(5)], list(p))
        if sol is None:
            raise ValueError("point not orthogonal to x")
        _, al, be, ga = sol
        if al == 0 and ga == 0:
            if be == 0:
                raise ValueError("point equals x")
            return [self.K.zero(), self.K.one()]
        return normalize([al, ga])

    def tau_point(self, tau):
        t0, t1 = tau
        k, nu = self.kappa, self.nu
        return vcomb((2 * k * t0 * t0, self.Y2), (nu * t1 * t1, self.Y3), (2 * k * t0 * t1, self.u))

    def j_lambda(self, tau):
        M = self.j_matrix
        return normalize([M[0][0] * tau[0] + M[0][1] * tau[1], M[1][0] * tau[0] + M[1][1] * tau[1]])

    def lambda_coordinate(self, P, Qv):
        """Lambda-coordinate of the line <P, Qv> of Q (ruling class through x)."""
        bp, bq = self.bil(self.x, P), self.bil(self.x, Qv)
        if bp == 0 and bq == 0:
            raise ValueError("line lies in the tangent hyperplane of x")
        p = vsub(vscale(bq, P), vscale(bp, Qv))  # the point of the line orthogonal to x
        if proj_equal(p, self.x):
            other = Qv if not proj_equal(Qv, self.x) else P
            return self.tau_of_point(other)
        return self.j_lambda(self.tau_of_point(p))

    def same_ruling(self, l1, l2, mu) -> bool:
        """l1, l2 given as pairs of points; mu the pencil member containing both."""
        if self.is_singular_member(mu):
            raise RulingError("cone has a single ruling")
        for l in (l1, l2):
            for p in l:
                if mu[0] * p[0] + mu[1] * p[1] != 0:
                    raise ValueError("line not contained in the pencil member")
        from .incidence import lines_meet, plucker

        p1, p2 = plucker(*l1), plucker(*l2)
        if proj_equal(p1, p2):
            return True
        return not lines_meet(p1, p2)

    # serialization --------------------------------------------------------

    def params_json(self):
        K = self.base
        return {"field": K.descriptor(), "b0": K.to_json(self.b0), "b1": K.to_json(self.b1),
                "alpha": K.to_json(self.alpha)}

    def __repr__(self):
        return f"QuadricContext(K={self.base!r}, b0={self.b0}, b1={self.b1}, alpha={self.alpha})"


def _rational_conditions(K, b0, b1, al):
    """Conditions 1-6 (exact tests in the parameters)."""
    det_b = b0 * (b1 - al * al)
    flags = [
        b0 + b1 != 0,  # 1: H not tangent to Q (b^{-1}(H, H) = b0 + b1)
        b1 != 0 or al != 0,  # 2: H does not contain the plane of q
        True,  # 3: pole (1,0,0,1,0) has x0 = 1, never in the plane of q
        True,  # 4: pole has x3 = 1, never in span(e0, e1)
        b0 != 0,  # 5: U meets W-perp in the single point e1
        b1 != 0 and al * al != b1,  # 6: W meets <x,y>-perp in one point off q
    ]
    extra = {"Q smooth": det_b != 0, "q smooth": b1 != al * al, "alpha nonzero": al != 0}
    return flags, extra


def check_generality_H(ctx: QuadricContext) -> GeneralityReport:
    flags, extra = _rational_conditions(ctx.base, ctx.b0, ctx.b1, ctx.alpha)
    if hasattr(ctx, "z"):
        pts = [ctx.z, ctx.zp, ctx.x, ctx.y, ctx.v2]
        flags.append(rank(pts) == 5)
        extra["segre frame"] = ctx.beta != 0 and ctx.kappa != 0 and ctx.nu != 0
    else:
        flags.append(False)
    return GeneralityReport(flags, extra)


def build_context(field: Field, b0, b1, alpha) -> QuadricContext:
    """Build (Q, q, H) with every anchor; raises ContextError on failure."""
    ctx = QuadricContext(field, b0, b1, alpha)
    K = field
    b0, b1, al = ctx.b0, ctx.b1, ctx.alpha
    if b0 == 0 or b1 == 0 or al == 0:
        raise ContextError(0, "(parameters must be nonzero)")
    flags, extra = _rational_conditions(K, b0, b1, al)
    for i, f in enumerate(flags):
        if not f:
            raise ContextError(i + 1)
    for k, v in extra.items():
        if not v:
            raise ContextError(k)
    # z, z': tangency points of the singular members of the pencil
    K, rz = adjoin_sqrt(K, -b0)
    ctx.z = [K.one(), rz, K.zero(), K.zero(), K.zero()]
    ctx.zp = [K.one(), -rz, K.zero(), K.zero(), K.zero()]
    # x, y: q meets H; x4 = -b1 x3 / alpha, x2^2 = (b1 - b1^2/alpha^2) x3^2
    rho = b1 - b1 * b1 / (al * al)
    K, rx = adjoin_sqrt(K, rho)
    ctx.rho = rho
    ctx.x = [K.zero(), K.zero(), rx, K.one(), -b1 / al]
    ctx.y = [K.zero(), K.zero(), -rx, K.one(), -b1 / al]
    ctx.K = K
    ctx.pole = [K.one(), K.zero(), K.zero(), K.one(), K.zero()]
    ctx.beta = ctx.bil(ctx.x, ctx.y)
    # v2 = W meet <x, y>-perp
    ctx.v2 = [K.zero(), K.zero(), K.zero(), K.one(), K.zero()]
    # conic parametrization c(v) = q(D) x - 2 b(x, D) D with D = v0 y + v1 v2
    x, y, v2 = ctx.x, ctx.y, ctx.v2
    bxy, bxv, byv = ctx.bil(x, y), ctx.bil(x, v2), ctx.bil(y, v2)
    ctx.C20 = vsub(vscale(ctx.quad(y), x), vscale(2 * bxy, y))
    ctx.C11 = vsub(vsub(vscale(2 * byv, x), vscale(2 * bxy, v2)), vscale(2 * bxv, y))
    ctx.C02 = vsub(vscale(ctx.quad(v2), x), vscale(2 * bxv, v2))
    # Segre frame: P = <x,y>-perp inside ker H, split into isotropic lines
    P = kernel([ctx.lower(x), ctx.lower(y), ctx.h])
    if len(P) != 2:
        raise ContextError("segre frame", "(degenerate complement)")
    P1, P2 = P
    q11, q12, q22 = ctx.quad(P1), ctx.bil(P1, P2), ctx.quad(P2)
    delta = q12 * q12 - q11 * q22
    if delta == 0:
        raise ContextError("segre frame", "(isotropic complement)")
    K, rd = adjoin_sqrt(K, delta)
    ctx.K = K
    if q11 != 0:
        Y2 = vadd(vscale((-q12 + rd) / q11, P1), P2)
        Y3 = vadd(vscale((-q12 - rd) / q11, P1), P2)
    else:
        Y2 = P1
        Y3 = vadd(vscale(-q22, P1), vscale(2 * q12, P2))
    k = ctx.bil(Y2, Y3)
    Y3 = vscale(-ctx.beta / k, Y3)
    ctx.Y2, ctx.Y3 = Y2, Y3
    ctx.kappa = -ctx.bil(Y2, Y3)
    # lines of Q_H through x and y
    ctx.l_x, ctx.m_x = (x, Y2), (x, Y3)
    ctx.l_y, ctx.n_y = (y, Y3), (y, Y2)
    # conic of lines through x: third direction u orthogonal to x, Y2, Y3
    ker = kernel([ctx.lower(x), ctx.lower(Y2), ctx.lower(Y3)])
    u = next(v for v in ker if not proj_equal(v, x) and any(a != 0 for a in v))
    if ctx.bil(u, u) == 0:
        u = vadd(u, ker[0] if u is not ker[0] else ker[1])
    ctx.u = u
    ctx.nu = ctx.quad(u)
    # involution exchanging the rulings on the tau-line
    Q0 = _tau_quadratic(ctx, 0)
    Q1 = _tau_quadratic(ctx, 1)
    v0 = [Q0[2], -Q0[1], Q0[0]]
    v1 = [Q1[2], -Q1[1], Q1[0]]
    a_, b_, c_ = (v0[1] * v1[2] - v0[2] * v1[1], v0[2] * v1[0] - v0[0] * v1[2], v0[0] * v1[1] - v0[1] * v1[0])
    ctx.j_matrix = [[-b_, -c_], [a_, b_]]
    ctx.Q_tau = (Q0, Q1)
    ctx.tau_z = ctx.tau_of_point(ctx.z)
    ctx.tau_zp = ctx.tau_of_point(ctx.zp)
    rep = check_generality_H(ctx)
    if not rep.ok:
        raise ContextError(rep.violated()[0])
    _self_check(ctx)
    return ctx


def _tau_quadratic(ctx, i):
    """Coefficients (a, b, c) of the i-th coordinate of w(tau) = a t0^2 + b t0 t1 + c t1^2."""
    k, nu = ctx.kappa, ctx.nu
    return (2 * k * ctx.Y2[i], 2 * k * ctx.u[i], nu * ctx.Y3[i])


def _self_check(ctx: QuadricContext):
    """Membership identities every context must satisfy."""
    for p in (ctx.z, ctx.zp, ctx.x, ctx.y):
        assert ctx.quad(p) == 0
    for p in (ctx.z, ctx.zp):
        for w in (ctx.x, ctx.y, ctx.v2):
            assert ctx.bil(p, w) == 0
    assert ctx.H(ctx.x) == 0 and ctx.H(ctx.y) == 0
    for v in (ctx.Y2, ctx.Y3):
        assert ctx.quad(v) == 0 and ctx.H(v) == 0
    for P, Qv in (ctx.l_x, ctx.m_x, ctx.l_y, ctx.n_y):
        assert ctx.line_in_quadric(P, Qv) and ctx.H(P) == 0 and ctx.H(Qv) == 0
    assert ctx.j_lambda(ctx.tau_z) == ctx.tau_z or proj_equal(ctx.j_lambda(ctx.tau_z), ctx.tau_z)


def segre_pullback_ok(ctx: QuadricContext) -> bool:
    """Gram matrix of (x, y, Y2, Y3) equals beta * (form of y0 y1 - y2 y3)."""
    E = [ctx.x, ctx.y, ctx.Y2, ctx.Y3]
    G = [[ctx.bil(a, b) for b in E] for a in E]
    be = ctx.beta
    target = [[0, be, 0, 0], [be, 0, 0, 0], [0, 0, 0, -be], [0, 0, -be, 0]]
    return be != 0 and all(G[i][j] == target[i][j] for i in range(4) for j in range(4))


def sample_context(field: Field, rng: random.Random, height: int = 20, max_tries: int = 500,
                   rational_anchors: Optional[bool] = None) -> QuadricContext:
    """Rejection-sample (b0, b1, alpha) until the context builds.

    Over F_p nonsquare radicands are resampled (no extensions of F_p exist in
    this package).  Over Q, ``rational_anchors`` (default True) additionally
    rejects parameters whose anchors would need square roots, keeping every
    later computation over Q.
    """
    is_fp = isinstance(field, PrimeField)
    if rational_anchors is None:
        rational_anchors = True
    last = None
    for _ in range(max_tries):
        if is_fp:
            b0, b1, al = (_fp_nonzero(field, rng) for _ in range(3))
        else:
            if rational_anchors:
                b0, b1, al = _rational_anchor_params(field, rng, height)
            else:
                b0, b1, al = (field.random_nonzero(rng, height) for _ in range(3))
        try:
            if is_fp or rational_anchors:
                ctx = build_context(field, b0, b1, al)
                if ctx.K is not field:
                    last = "anchors need a square root"
                    continue
                return ctx
            return build_context(field, b0, b1, al)
        except (ContextError, FieldError) as exc:
            last = str(exc)
    raise ContextError("sampling", f"(retry budget exhausted: {last})")


def _fp_nonzero(F, rng):
    return F(rng.randrange(1, F.p))


def _rational_anchor_params(Q, rng, height):
    """Parameters over Q whose three anchor radicands are all squares.

    The radicands are -b0, b1 (alpha^2 - b1) / alpha^2 and
    -b1 (b0 + b1) / b0.  With b1 = s^2, b0 = -k^2 they become squares when
    s^2 - k^2 and alpha^2 - s^2 are squares, which the two rational
    parametrizations k = 2 s t1 / (1 + t1^2), alpha = s (1 + t2^2) / (2 t2)
    guarantee.
    """
    from fractions import Fraction

    bound = max(2, min(height, 6))
    s = rng.randint(1, bound)
    t1 = Fraction(rng.randint(1, bound), rng.randint(1, bound))
    t2 = Fraction(rng.randint(1, bound), rng.randint(1, bound))
    k = 2 * s * t1 / (1 + t1 * t1)
    al = s * (1 + t2 * t2) / (2 * t2) * rng.choice([1, -1])
    return Q(-k * k), Q(s * s), Q(al)
