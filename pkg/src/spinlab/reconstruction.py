"""The map R -> (C, theta, m, n) and its inverse.

The inverse runs in three steps:

* embed C in P^1 x P^1 by the two pencils |theta + m + n| and |theta + g12|;
* identify the two factors with the conic q and with the conic Lambda of
  lines through x (the q-factor up to a scaling lam of the conic parameter,
  the Lambda-factor up to the choice eps of which fixed point is Pi_z);
* send the Weierstrass points of each side through the vertex of its cone to
  Delta_H or Delta'_H and interpolate the ruling curve through the 2d points.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .correspondence import CorrespondenceError, RulingCurveR, build_correspondence, check_generality_R
from .jacobian import Divisor, Pencil, PencilError, effective_in_class, extract_model, rr_basis
from .linalg import det, inverse, kernel, mat_mul, solve
from .poly import Form, Poly, gcd, interpolate, roots
from .quadric import QuadricContext, normalize, proj_equal
from .spintuple import SpinTuple, TupleError

log = logging.getLogger(__name__)


class ReconstructionError(RuntimeError):
    pass


class NotInImage(ReconstructionError):
    """The tuple admits no ruling curve (a legitimate outcome for special tuples)."""


# ---------------------------------------------------------------- nu


def extract_spin_tuple(ctx: QuadricContext, R: RulingCurveR, corr=None) -> SpinTuple:
    corr = corr if corr is not None else build_correspondence(ctx, R)
    model = extract_model(corr)
    theta = model.theta_R()
    pts = []
    for D in (model.m, model.n):
        (U, V, k), = D.blocks
        pts.append((-U.coeffs(2)[0], V(model.K.zero())))
    t = SpinTuple(model, theta, pts[0], pts[1])
    try:
        t.validate()
    except TupleError as e:
        raise ReconstructionError(f"non-generic tuple: {e}") from e
    return t


# ------------------------------------------------------- projective helpers


def _proj_point(c1: Poly, c2: Poly, U: Poly):
    """[c1 : c2] as a single point when the ratio is constant modulo U."""
    K = U.K
    z = K.zero()
    a = c1 % U
    b = c2 % U
    if b.is_zero():
        if a.is_zero():
            raise PencilError("value undefined")
        return [K.one(), z]
    if a.is_zero():
        return [z, K.one()]
    # a = r b mod U for a constant r
    from .poly import xgcd_monic

    _, inv, _ = xgcd_monic(b, U)
    r = (a * inv) % U
    if r.deg > 0:
        raise PencilError("value is not constant on the block")
    return normalize([r.coeffs(1)[0], K.one()])


def pencil_value(P: Pencil, D: Divisor):
    """The common value of the pencil on every point of D (raises unless unique)."""
    vals = []
    for U, V, _ in D.normalized().blocks:
        c1, c2 = P.value_at_block(U, V)
        vals.append(_proj_point(c1, c2, U.monic()))
    if D.normalized().n_inf > 0:
        vals.append(normalize(list(P.value_at_infinity())))
    if not vals:
        raise PencilError("empty divisor")
    for v in vals[1:]:
        if not proj_equal(v, vals[0]):
            raise PencilError("pencil is not constant on the divisor")
    return vals[0]


def mobius_from_three(src, dst):
    """The 2x2 matrix M with M src_i ~ dst_i for three distinct points."""

    def frame(p):
        # columns p0, p1 scaled so that p0 + p1 ~ p2
        A = [[p[0][0], p[1][0]], [p[0][1], p[1][1]]]
        c = solve(A, list(p[2]))
        if c is None or c[0] == 0 or c[1] == 0:
            raise ValueError("points are not distinct")
        return [[p[0][0] * c[0], p[1][0] * c[1]], [p[0][1] * c[0], p[1][1] * c[1]]]

    return mat_mul(frame(dst), inverse(frame(src)))


def mob(M, p):
    return normalize([M[0][0] * p[0] + M[0][1] * p[1], M[1][0] * p[0] + M[1][1] * p[1]])


def _proj_mat_equal(A, B):
    return proj_equal([A[0][0], A[0][1], A[1][0], A[1][1]], [B[0][0], B[0][1], B[1][0], B[1][1]])


# ---------------------------------------------------- bivariate biforms


def _mul_pair(C, p, q):
    """(a1 + Y b1)(a2 + Y b2) reduced with Y^2 = f."""
    return (p[0] * q[0] + C.f * p[1] * q[1], p[0] * q[1] + p[1] * q[0])


def _powers(C, p, n):
    K = C.K
    out = [(Poly.const(K, 1), Poly._raw(K, []))]
    for _ in range(n):
        out.append(_mul_pair(C, out[-1], p))
    return out


def image_biform(P1: Pencil, P2: Pencil) -> Dict[tuple, object]:
    """The biform G of bidegree (d1, d2) with G(phi1, phi2) = 0 on C.

    G is a dict {(i, j): c} for the monomial l0^i l1^(d1-i) m0^j m1^(d2-j).
    The kernel of the elimination system must be one-dimensional.
    """
    C = P1.curve
    d1, d2 = P1.degree, P2.degree
    num = [(h.a, h.b) for h in P1.h] + [(h.a, h.b) for h in P2.h]
    pw = [_powers(C, p, max(d1, d2)) for p in num]
    cols = []
    keys = []
    for i in range(d1 + 1):
        left = _mul_pair(C, pw[0][i], pw[1][d1 - i])
        for j in range(d2 + 1):
            right = _mul_pair(C, pw[2][j], pw[3][d2 - j])
            a, b = _mul_pair(C, left, right)
            cols.append((a, b))
            keys.append((i, j))
    na = max((a.deg for a, _ in cols), default=0) + 1
    nb = max((b.deg for _, b in cols), default=0) + 1
    rows = []
    for k in range(na):
        rows.append([a.coeffs(na)[k] for a, _ in cols])
    for k in range(nb):
        rows.append([b.coeffs(nb)[k] for _, b in cols])
    ker = kernel(rows, len(cols), C.K.zero(), C.K.one())
    if len(ker) != 1:
        raise ReconstructionError(f"image biform is not unique (kernel dimension {len(ker)})")
    v = normalize(ker[0])
    return {k: c for k, c in zip(keys, v) if c != 0}


def _form_content_degree(forms, n, K) -> int:
    """Degree of the gcd of binary forms of degree n (given as coefficient lists)."""
    polys = [Poly(K, c) for c in forms if any(x != 0 for x in c)]
    if not polys:
        return n
    g = polys[0]
    for p in polys[1:]:
        g = gcd(g, p)
    at_inf = min(n - p.deg for p in polys)
    return g.deg + at_inf


def biform_bidegree(G, d1, d2, K):
    """Bidegree of the curve G = 0 after removing fibers contained in it."""
    by_j = [[G.get((i, j), K.zero()) for i in range(d1 + 1)] for j in range(d2 + 1)]
    by_i = [[G.get((i, j), K.zero()) for j in range(d2 + 1)] for i in range(d1 + 1)]
    return (d1 - _form_content_degree(by_j, d1, K), d2 - _form_content_degree(by_i, d2, K))


def _binom(n, k):
    from math import comb

    return comb(n, k)


def multiplicity_at(G, d1, d2, pt1, pt2, K) -> int:
    """Multiplicity of the curve G = 0 at ([pt1], [pt2]) in P^1 x P^1."""
    # dehomogenize each factor in a chart containing the point
    def chart(pt):
        # returns (flip, a): coordinate x with the point at x = a;
        # flip False: x = l0 / l1, flip True: x = l1 / l0
        if pt[1] != 0:
            return False, pt[0] / pt[1]
        return True, pt[1] / pt[0]

    f1, a1 = chart(pt1)
    f2, a2 = chart(pt2)
    aff = {}
    for (i, j), c in G.items():
        e1 = (d1 - i) if f1 else i
        e2 = (d2 - j) if f2 else j
        aff[(e1, e2)] = aff.get((e1, e2), K.zero()) + c
    # translate x -> x + a1, y -> y + a2 and find the lowest total degree
    shifted = {}
    for (e1, e2), c in aff.items():
        if c == 0:
            continue
        for k1 in range(e1 + 1):
            t1 = c * _binom(e1, k1) * a1 ** (e1 - k1)
            for k2 in range(e2 + 1):
                t = t1 * _binom(e2, k2) * a2 ** (e2 - k2)
                shifted[(k1, k2)] = shifted.get((k1, k2), K.zero()) + t
    degs = [k1 + k2 for (k1, k2), c in shifted.items() if c != 0]
    if not degs:
        raise ReconstructionError("biform vanishes identically")
    return min(degs)


# ------------------------------------------------------- the embedding


@dataclass
class ProductEmbedding:
    tuple: SpinTuple
    phi1: Pencil  # |theta + m + n|
    phi2: Pencil  # |theta + 2 inf|
    G: Dict[tuple, object]
    d: int
    a_m: tuple  # (phi1(m), phi2(iota n)) = Phi(polyhedron(theta + n))
    a_n: tuple  # (phi1(n), phi2(iota m)) = Phi(polyhedron(theta + m))
    Phi_m: tuple
    Phi_n: tuple
    F_L: list  # phi2 of the theta side
    F_Lp: list  # phi2 of the complementary side
    j_C: list  # 2x2 matrix of the hyperelliptic involution on the second factor
    checks: Dict[str, bool] = field(default_factory=dict)

    def ok(self) -> bool:
        return all(self.checks.values())


def _involution_matrix(P: Pencil):
    """J with [h1(iota P) : h2(iota P)] = J [h1(P) : h2(P)]."""
    (a1, b1), (a2, b2) = [(h.a, h.b) for h in P.h]
    K = P.curve.K
    n = max(a1.deg, a2.deg, b1.deg, b2.deg, 0) + 1
    # iota* h_k = (a_k - Y b_k)/s = J_k1 h_1 + J_k2 h_2
    M = [[c1, c2] for c1, c2 in zip(a1.coeffs(n) + b1.coeffs(n), a2.coeffs(n) + b2.coeffs(n))]
    J = []
    for a, b in ((a1, b1), (a2, b2)):
        rhs = a.coeffs(n) + (-b).coeffs(n)
        sol = _least_solve(M, rhs, K)
        if sol is None:
            raise ReconstructionError("L(theta + g12) is not stable under the involution")
        J.append(sol)
    return J


def _least_solve(M, rhs, K):
    """Solve the overdetermined consistent system M c = rhs exactly."""
    rows = [list(r) + [-v] for r, v in zip(M, rhs)]
    ker = kernel(rows, len(M[0]) + 1, K.zero(), K.one())
    for v in ker:
        if v[-1] != 0:
            return [c / v[-1] for c in v[:-1]]
    return None


def product_embedding(t: SpinTuple) -> ProductEmbedding:
    C = t.curve
    K = C.K
    d = C.g + 1
    m, n = t.m_div, t.n_div
    theta = t.theta.divisor
    P1 = Pencil(theta + m + n)
    D2 = theta + Divisor.infinity(C, 2)
    basis2 = rr_basis(D2)
    P2 = Pencil(D2, basis2)
    G = image_biform(P1, P2)
    # distinguished points
    E_n = effective_in_class(theta + n)
    E_m = effective_in_class(theta + m)
    if E_n is None or E_m is None:
        raise ReconstructionError("empty theta polyhedron")
    a_m = (pencil_value(P1, E_n), pencil_value(P2, E_n))
    a_n = (pencil_value(P1, E_m), pencil_value(P2, E_m))
    Phi_m = (pencil_value(P1, m), pencil_value(P2, m))
    Phi_n = (pencil_value(P1, n), pencil_value(P2, n))
    S, T = t.theta, t.theta.complement()
    side = lambda th: Divisor(C, [(th.U_S, Poly._raw(K, []), 1)] if th.U_S.deg else [],
                              1 if th.with_inf else 0)
    F_L = pencil_value(P2, side(S))
    F_Lp = pencil_value(P2, side(T))
    J = _involution_matrix(P2)
    checks = {}
    checks["bidegree (d, d)"] = biform_bidegree(G, d, d, K) == (d, d) and P1.degree == d and P2.degree == d
    checks["multiplicity d-1 at a_m"] = multiplicity_at(G, d, d, a_m[0], a_m[1], K) == d - 1
    checks["multiplicity d-1 at a_n"] = multiplicity_at(G, d, d, a_n[0], a_n[1], K) == d - 1
    checks["a_m, Phi(m) share the first coordinate"] = proj_equal(a_m[0], Phi_m[0])
    checks["a_n, Phi(n) share the first coordinate"] = proj_equal(a_n[0], Phi_n[0])
    fib_L = P2.fiber(F_L)
    fib_Lp = P2.fiber(F_Lp)
    checks["Weierstrass points fill two fibers"] = (
        not proj_equal(F_L, F_Lp) and fib_L == side(S) and fib_Lp == side(T))
    Jsq = mat_mul(J, J)
    checks["j_C involution"] = (Jsq[0][1] == 0 and Jsq[1][0] == 0 and Jsq[0][0] == Jsq[1][1]
                                and not (J[0][1] == 0 and J[1][0] == 0 and J[0][0] == J[1][1]))
    checks["j_C fixes L and L'"] = proj_equal(mob(J, F_L), F_L) and proj_equal(mob(J, F_Lp), F_Lp)
    checks["j_C swaps a_m, a_n second coordinates with Phi(n), Phi(m)"] = (
        proj_equal(mob(J, a_m[1]), Phi_n[1]) and proj_equal(mob(J, a_n[1]), Phi_m[1]))
    emb = ProductEmbedding(t, P1, P2, G, d, a_m, a_n, Phi_m, Phi_n, F_L, F_Lp, J, checks)
    return emb


# ------------------------------------------------------- frames


@dataclass
class FrameCandidate:
    eps: int  # 0: the theta side goes to Pi_z, 1: to Pi_z'
    T2: list  # Moebius on the second factor (values of phi2 -> Lambda)
    T1_base: list  # Moebius on the first factor at lam = 1 (values of phi1 -> conic parameter)
    checks: Dict[str, bool] = field(default_factory=dict)

    def T1(self, lam):
        (a, b), (c, d) = self.T1_base
        return [[a * lam, b * lam], [c, d]]

    @property
    def consistent(self) -> bool:
        return all(self.checks.values())


def lambda_targets(ctx: QuadricContext):
    """Lambda-coordinates of l_x, m_x, l_y, n_y and of the two cones."""
    return {
        "l_x": ctx.tau_of_point(ctx.l_x[1]),
        "m_x": ctx.tau_of_point(ctx.m_x[1]),
        "l_y": ctx.lambda_coordinate(*ctx.l_y),
        "n_y": ctx.lambda_coordinate(*ctx.n_y),
        "z": normalize(list(ctx.tau_z)),
        "zp": normalize(list(ctx.tau_zp)),
    }


def identify_frames(emb: ProductEmbedding, ctx: QuadricContext) -> List[FrameCandidate]:
    """Both choices of eps, each with its verified Lambda-factor constraints.

    The q-factor identification sends phi1(m) to v_x = [0:1] and phi1(n) to
    v_y = [1:0]; it is fixed only up to v0 -> lam v0.
    """
    tg = lambda_targets(ctx)
    m1, n1 = emb.Phi_m[0], emb.Phi_n[0]
    # v0 = lam * l_m, v1 = l_n with l_p(mu) = p1 mu0 - p0 mu1
    T1_base = [[m1[1], -m1[0]], [n1[1], -n1[0]]]
    out = []
    for eps, (mine, other) in enumerate((("z", "zp"), ("zp", "z"))):
        checks = {}
        try:
            T2 = mobius_from_three([emb.F_L, emb.a_m[1], emb.Phi_m[1]], [tg[mine], tg["l_x"], tg["m_x"]])
        except ValueError:
            checks["three anchor points distinct"] = False
            out.append(FrameCandidate(eps, None, T1_base, checks))
            continue
        conj = mat_mul(mat_mul(T2, emb.j_C), inverse(T2))
        checks["j_C conjugates to j_Lambda"] = _proj_mat_equal(conj, ctx.j_matrix)
        checks["L' goes to the other cone"] = proj_equal(mob(T2, emb.F_Lp), tg[other])
        checks["a_n goes to l_y"] = proj_equal(mob(T2, emb.a_n[1]), tg["l_y"])
        checks["Phi(n) goes to n_y"] = proj_equal(mob(T2, emb.Phi_n[1]), tg["n_y"])
        out.append(FrameCandidate(eps, T2, T1_base, checks))
    return out


# ------------------------------------------------------- third step


def _side_value_form(P1: Pencil, th) -> Form:
    """Binary form in mu vanishing at phi1 of the Weierstrass points of one side."""
    K = P1.curve.K
    F = P1.value_form(th.U_S, Poly._raw(K, [])) if th.U_S.deg else Form(K, 0, [K.one()])
    if th.with_inf:
        p0, p1 = P1.value_at_infinity()
        F = F * Form(K, 1, [-p0, p1])
    return F


def _conic_through_vertex(ctx: QuadricContext, vertex, K):
    """Segre coordinates (c0..c3) of s(w) = H(c(w)) z - H(z) c(w), v = (w, 1), as polys in w."""
    X = Poly.x(K)
    one = Poly.const(K, 1)
    cw = [X * X * a + X * b + one * c for a, b, c in zip(ctx.C20, ctx.C11, ctx.C02)]
    Hc = sum((cw[i] * ctx.h[i] for i in range(5)), Poly._raw(K, []))
    Hz = ctx.H(vertex)
    s = [Hc * vertex[i] - cw[i] * Hz for i in range(5)]
    beta = ctx.beta
    Bl = ctx.gram()

    def pair(vec):
        w = [sum((Bl[i][j] * vec[j] for j in range(5)), K.zero()) for i in range(5)]
        return sum((s[i] * w[i] for i in range(5)), Poly._raw(K, []))

    inv = K.one() / beta
    return [pair(ctx.y) * inv, pair(ctx.x) * inv, -pair(ctx.Y3) * inv, -pair(ctx.Y2) * inv]


def _sigma_columns(d, c, K):
    """For each of the 2d coefficients, sigma(t, s) at t = (c0, c3), s = (c0, c2) (a poly in w)."""
    r = d - 1
    cols = []
    s0, s1 = c[0], c[2]
    p0 = [Poly.const(K, 1)]
    p1 = [Poly.const(K, 1)]
    for _ in range(r):
        p0.append(p0[-1] * s0)
        p1.append(p1[-1] * s1)
    mon = [p0[i] * p1[r - i] for i in range(d)]
    for i in range(d):
        cols.append(c[0] * mon[i])
    for i in range(d):
        cols.append(c[3] * mon[i])
    return cols


@dataclass
class SideSystem:
    rows: List[List[Poly]]  # d rows x 2d columns, entries polys in lam


def side_system(ctx, P1: Pencil, th, vertex, T1_base, d) -> SideSystem:
    """Conditions sigma(s(v)) = 0 at the d roots v of the side form, as polys in lam.

    With T1(lam) = diag(lam, 1) T1(1), the roots are w = lam w' for the roots
    w' of the lam = 1 form P; reducing sigma(lam w') modulo P gives entries
    polynomial in lam of degree at most 2d.
    """
    K = P1.curve.K
    Q = _side_value_form(P1, th)
    if Q.n != d:
        raise ReconstructionError("side form has the wrong degree")
    Tinv = inverse(T1_base)
    X = Poly.x(K)
    one = Poly.const(K, 1)
    P = Q.subs(X * Tinv[0][0] + one * Tinv[0][1], X * Tinv[1][0] + one * Tinv[1][1])
    if P.deg != d:
        raise ReconstructionError("a Weierstrass point shares the first coordinate of n")
    P = P.monic()
    c = _conic_through_vertex(ctx, vertex, K)
    cols = _sigma_columns(d, c, K)
    top = max(col.deg for col in cols)
    red = [(X ** e) % P for e in range(top + 1)]
    rows = [[None] * (2 * d) for _ in range(d)]
    for k, col in enumerate(cols):
        cc = col.coeffs(top + 1)
        for i in range(d):
            rows[i][k] = Poly(K, [cc[e] * red[e].coeffs(d)[i] for e in range(top + 1)])
    return SideSystem(rows)


def _eval_rows(rows, lam):
    return [[p(lam) for p in row] for row in rows]


def lambda_candidates(M, K, d):
    """Classify det M(lam), a polynomial of degree <= 4 d^2.

    Returns ("free", []) when it vanishes identically, else ("determined",
    nonzero roots).  Over a prime field with at most 4 d^2 + 1 elements every
    element is evaluated, which decides both questions directly.
    """
    N = 4 * d * d
    pts = _sample_points(K, N + 1)
    vals = [det(_eval_rows(M, x)) for x in pts]
    if all(v == 0 for v in vals):
        return "free", []
    if len(pts) < N + 1:
        return "determined", [x for x, v in zip(pts, vals) if v == 0 and x != 0]
    D = interpolate(K, pts, vals)
    return "determined", [r for r in roots(D) if r != 0]


def _sample_points(K, n):
    p = getattr(K, "p", None)
    if p is not None and p <= n:
        return [K(i) for i in range(p)]
    return [K(i) for i in range(n)]


@dataclass
class Reconstruction:
    accepted: bool
    eps: Optional[int] = None
    lam: object = None
    lambda_status: Optional[str] = None  # "free" or "determined"
    R: Optional[RulingCurveR] = None
    kernel_dim: Optional[int] = None
    reason: str = ""
    frames: List[FrameCandidate] = field(default_factory=list)

    def to_json(self, K):
        return {
            "accepted": self.accepted,
            "epsilon": self.eps,
            "lambda": None if self.lam is None else K.to_json(self.lam),
            "lambda_status": self.lambda_status,
            "R": None if self.R is None else self.R.to_json(),
            "kernel_dim": self.kernel_dim,
            "reason": self.reason,
        }


def _interpolate_at(M, lam, K, d):
    A = _eval_rows(M, lam)
    ker = kernel(A, 2 * d, K.zero(), K.one())
    return ker


def recover_and_interpolate(t: SpinTuple, ctx: QuadricContext, emb: Optional[ProductEmbedding] = None,
                            check_iso: bool = True) -> Reconstruction:
    """Try eps in (0, 1), then the admissible lam in canonical order; first success wins.

    A candidate is accepted when the interpolated R' passes the generality
    checks and its own tuple is isomorphic to t.
    """
    from .symmetry import spin_tuple_isomorphic

    K = t.K
    d = t.g + 1
    emb = emb if emb is not None else product_embedding(t)
    frames = identify_frames(emb, ctx)
    S, T = t.theta, t.theta.complement()
    reasons = []
    for fc in frames:
        if not fc.consistent:
            reasons.append(f"eps={fc.eps}: Lambda-factor constraints inconsistent")
            continue
        vS, vT = (ctx.z, ctx.zp) if fc.eps == 0 else (ctx.zp, ctx.z)
        M = side_system(ctx, emb.phi1, S, vS, fc.T1_base, d).rows + \
            side_system(ctx, emb.phi1, T, vT, fc.T1_base, d).rows
        status, lams = lambda_candidates(M, K, d)
        if status == "free":
            lams = [K.one()]
        for lam in lams:
            ker = _interpolate_at(M, lam, K, d)
            if len(ker) != 1:
                reasons.append(f"eps={fc.eps}, lam={lam}: kernel dimension {len(ker)}")
                continue
            Rp = RulingCurveR(d, normalize(ker[0]))
            flags = check_generality_R(ctx, Rp)
            if not all(flags.values()):
                bad = [k for k, v in flags.items() if not v]
                reasons.append(f"eps={fc.eps}, lam={lam}: R' fails {bad}")
                continue
            if check_iso:
                try:
                    t2 = extract_spin_tuple(ctx, Rp)
                except (ReconstructionError, CorrespondenceError) as e:
                    reasons.append(f"eps={fc.eps}, lam={lam}: {e}")
                    continue
                if not spin_tuple_isomorphic(t, t2):
                    reasons.append(f"eps={fc.eps}, lam={lam}: tuple of R' is not isomorphic")
                    continue
            return Reconstruction(True, fc.eps, lam, status, Rp, len(ker), "", frames)
    return Reconstruction(False, reason="; ".join(reasons) or "no candidate", frames=frames)


@dataclass
class RoundTrip:
    orbit_match: bool  # R' in {R, g R}
    torus_parameter: object  # c with R' = T_c(R), or None
    reconstruction: Reconstruction

    @property
    def R_prime(self):
        return self.reconstruction.R


def roundtrip(ctx: QuadricContext, R: RulingCurveR, corr=None) -> RoundTrip:
    """nu then its inverse; compares R' with the orbit {R, g R} and with the torus orbit of R."""
    from .symmetry import orbit_equal, torus_orbit_equal

    t = extract_spin_tuple(ctx, R, corr)
    rec = recover_and_interpolate(t, ctx)
    if not rec.accepted:
        raise NotInImage(rec.reason)
    return RoundTrip(orbit_equal(R, rec.R), torus_orbit_equal(R, rec.R), rec)
