"""Supports of marked lines, incidence divisors and the singular model of C(R).

A marked line [t, a] is a point (u, v) of C(R); its support is the line
<r(u), c(v)> of Q.  Two lines of Q meet exactly when the 2x2 matrix of
pairings b(l1_i, l2_j) is singular (a point of l1 orthogonal to l2 spans an
isotropic plane with l2, and Q contains no planes).  On C(R) this determinant
is a biform of bidegree (d, 2) which cuts *twice* the pullback of the
hyperplane section of lines meeting l, so we take the square root of the
eliminant.
"""

from __future__ import annotations

from itertools import combinations

from .jacobian import Divisor, HyperellipticModel, divisor_of_numerator
from .linalg import kernel, rank, det
from .poly import Poly, Residue, gcd, poly_sqrt, quad_resultant, squarefree_decomposition, xgcd_monic
from .quadric import QuadricContext, proj_equal

PAIRS = list(combinations(range(5), 2))


class IncidenceError(ValueError):
    pass


# ---------------------------------------------------------------- Plucker


def plucker(P, Q) -> list:
    """The 10 Plucker coordinates p_ij = P_i Q_j - P_j Q_i, i < j."""
    return [P[i] * Q[j] - P[j] * Q[i] for i, j in PAIRS]


def _pl(p, i, j):
    if i == j:
        return p[0] * 0
    if i < j:
        return p[PAIRS.index((i, j))]
    return -p[PAIRS.index((j, i))]


def _wedge4(p, q):
    """Components of p ^ q in Lambda^4 (one per 4-subset of {0..4})."""
    out = []
    for i, j, k, l in combinations(range(5), 4):
        out.append(_pl(p, i, j) * _pl(q, k, l) - _pl(p, i, k) * _pl(q, j, l) + _pl(p, i, l) * _pl(q, j, k)
                   + _pl(p, j, k) * _pl(q, i, l) - _pl(p, j, l) * _pl(q, i, k) + _pl(p, k, l) * _pl(q, i, j))
    return out


def is_decomposable(p) -> bool:
    return any(c != 0 for c in p) and all(c == 0 for c in _wedge4(p, p))


def line_points(p):
    """Two points spanning the line with Plucker vector p (rows of the skew matrix)."""
    rows = [[_pl(p, i, j) for j in range(5)] for i in range(5)]
    basis = []
    for r in rows:
        if any(c != 0 for c in r) and rank(basis + [r]) > len(basis):
            basis.append(r)
        if len(basis) == 2:
            return basis
    raise IncidenceError("not a line")


def lines_meet(p, q) -> bool:
    """True iff the lines with Plucker vectors p, q meet (or coincide) in P^4."""
    if not (is_decomposable(p) and is_decomposable(q)):
        raise IncidenceError("non-decomposable Plucker vector")
    return all(c == 0 for c in _wedge4(p, q))


def lines_meet_on_quadric(ctx: QuadricContext, l1, l2) -> bool:
    """Meeting test for lines of Q given by point pairs: det b(l1_i, l2_j) = 0."""
    b = ctx.bil
    return b(l1[0], l2[0]) * b(l1[1], l2[1]) - b(l1[0], l2[1]) * b(l1[1], l2[0]) == 0


# ---------------------------------------------------------------- marked lines


def support(ctx: QuadricContext, corr, u, v):
    """Plucker vector of <r(u), c(v)>."""
    return plucker(corr.point(u), ctx.conic_point(*v))


def _incidence_forms(ctx, corr, P, Q):
    """Coefficients (Ga, Gb, Gc) in u of det [[b(r,P), b(r,Q)], [b(c(v),P), b(c(v),Q)]]."""
    from .correspondence import pair_with

    rP = pair_with(ctx, corr.r_forms, P)
    rQ = pair_with(ctx, corr.r_forms, Q)
    out = []
    for C in (ctx.C20, ctx.C11, ctx.C02):
        out.append(rP * ctx.bil(C, Q) - rQ * ctx.bil(C, P))
    return out


def _as_points(l):
    if len(l) == 2:
        return l
    return line_points(l)


def incidence_divisor(ctx: QuadricContext, corr, model: HyperellipticModel, l) -> Divisor:
    """f_R^*(Pi_l) on the model: marked lines whose support meets l (degree 2d).

    ``l`` is a Plucker vector or a pair of points of a line of Q.
    """
    P, Q = _as_points(l)
    if not (ctx.line_in_quadric(P, Q)):
        raise IncidenceError("l is not a line of Q")
    K = model.K
    Ga, Gb, Gc = (G.subs(*model.sub) for G in _incidence_forms(ctx, corr, P, Q))
    Fa, Fb, Fc = model.FaX, model.FbX, model.FcX
    res = quad_resultant(Fa, Fb, Fc, Ga, Gb, Gc)
    if res.is_zero():
        raise IncidenceError("l is the support of infinitely many marked lines")
    deg_total = 4 * corr.d
    n_inf2 = deg_total - res.deg  # multiplicity at X = inf (the point u = s1), doubled
    root = poly_sqrt(res.monic())
    if root is None or n_inf2 % 2:
        raise IncidenceError("eliminant is not a square: non-transversal cut")
    blocks = []
    # minors giving the common root (v0^2 : v0 v1 : v1^2)
    m0 = Fb * Gc - Fc * Gb
    m1 = Fc * Ga - Fa * Gc
    m2 = Fa * Gb - Fb * Ga
    for q, k in squarefree_decomposition(root):
        prop = gcd(gcd(q, m0), gcd(m1, m2))
        if prop.deg > 0:
            blocks.extend(_proportional_blocks(model, (Ga, Gb, Gc), prop))
        rest = q.exact_div(prop).monic() if prop.deg > 0 else q
        if rest.deg == 0:
            continue
        w = gcd(rest, model._fmonic)
        if w.deg > 0:
            blocks.append((w, Poly._raw(K, []), k))
            rest = rest.exact_div(w).monic()
            if rest.deg == 0:
                continue
        # (v0 : v1) = (m0 : m1) where m1 is a unit, else v0 v1 = 0 and
        # v = 0 (m2 a unit) or v = inf (m1 = m2 = 0)
        A = gcd(rest, m1)
        generic = rest.exact_div(A).monic()
        if generic.deg > 0:
            _, inv, _ = xgcd_monic(m1 % generic, generic)
            v = (m0 * inv) % generic
            blocks.append((generic, (Fa * v * 2 + Fb) % generic, k))
        if A.deg > 0:
            B = gcd(A, m2)
            zero_v = A.exact_div(B).monic()
            if zero_v.deg > 0:
                blocks.append((zero_v, Fb % zero_v, k))
            if B.deg > 0:
                blocks.append((B, (-Fb) % B, k))
    D = Divisor(model, blocks, n_inf2 // 2)
    if D.degree != 2 * corr.d:
        raise IncidenceError(f"incidence divisor has degree {D.degree}")
    return D


def _proportional_blocks(model: HyperellipticModel, G, prop: Poly):
    """Incidence blocks over fibers where G(u, .) is proportional to F(u, .).

    Both points of such a fiber meet l, possibly with different multiplicities.
    With v = (Y - Fb, 2 Fa), G becomes A(X) + Y B(X) on the curve; its divisor
    over ``prop`` is twice the incidence divisor there.
    """
    Fa, Fb = model.FaX, model.FbX
    Ga, Gb, Gc = G
    if gcd(prop, Fa).deg > 0:
        raise IncidenceError("proportional fiber over a zero of Fa")
    A = Ga * (model.f + Fb * Fb) - Gb * Fa * Fb * 2 + Gc * Fa * Fa * 4
    B = Gb * Fa * 2 - Ga * Fb * 2
    out = []
    for U, V, n in divisor_of_numerator(model, A, B).normalized().blocks:
        h = gcd(U, prop)
        if h.deg == 0:
            continue
        if n % 2:
            raise IncidenceError("incidence biform does not cut a double divisor")
        out.append((h, None if V is None else V % h, n // 2))
    return out


def v_fiber(corr, model: HyperellipticModel, a) -> Divisor:
    """pi_2^{-1}(a): the d marked lines ending at the point c(a) of q."""
    a0, a1 = a
    form = corr.Fa * (a0 * a0) + corr.Fb * (a0 * a1) + corr.Fc * (a1 * a1)
    return model.fiber_block(form, a)


def theta_from_incidence(ctx: QuadricContext, corr, model: HyperellipticModel, u, v) -> Divisor:
    """D_[t,a] = f^*(Pi_l) - [t, a'] - pi_2^{-1}(a) for l the support of [t, a] = (u, v)."""
    l = (corr.point(u), ctx.conic_point(*v))
    D = incidence_divisor(ctx, corr, model, l)
    pt = model.point_divisor(u, v)
    other = pt.involution()
    res = (D - other - v_fiber(corr, model, v)).normalized()
    if not res.is_effective() or res.degree != corr.d - 1:
        raise IncidenceError("marked line is not generic")
    return res


# ---------------------------------------------------------------- multiplicities


def support_multiplicity(ctx: QuadricContext, corr, l) -> int:
    """Number of points (u, v) of C(R) whose support is the line l.

    The support of (u, v) equals l iff r(u) and c(v) both lie on l.  The u's
    are the common roots of the 3x3 minors of [r(u); P; Q], the v's are the
    parameters of the points of q on l.
    """
    P, Q = _as_points(l)
    rf = corr.r_forms
    g = None
    inf_root = True
    for i, j, k in combinations(range(5), 3):
        f = (rf[i] * (P[j] * Q[k] - P[k] * Q[j]) - rf[j] * (P[i] * Q[k] - P[k] * Q[i])
             + rf[k] * (P[i] * Q[j] - P[j] * Q[i]))
        if f.is_zero():
            continue
        inf_root = inf_root and f.root_at_infinity() > 0
        g = f.poly() if g is None else gcd(g, f.poly())
    if g is None:
        raise IncidenceError("R lies on l")
    # count over the algebraic closure: distinct common roots of g and F(., v)
    count = 0
    for v in _conic_points_on_line(ctx, P, Q):
        Fv = corr.Fa * (v[0] * v[0]) + corr.Fb * (v[0] * v[1]) + corr.Fc * (v[1] * v[1])
        if Fv.is_zero():
            raise IncidenceError("l meets q at a point whose whole fiber lies on l")
        h = gcd(g, Fv.poly())
        if h.deg > 0:
            count += h.deg - gcd(h, h.derivative()).deg
        if inf_root and Fv.root_at_infinity() > 0:
            count += 1
    return count


def _conic_points_on_line(ctx, P, Q):
    """Parameters v of the points of q on the line <P, Q>."""
    K = ctx.K
    # a = s P + t Q with a0 = a1 = 0
    ker = kernel([[P[0], Q[0]], [P[1], Q[1]]], 2, K.zero(), K.one())
    out = []
    for s, t in ker:
        a = [s * p + t * q for p, q in zip(P, Q)]
        if ctx.quad(a) == 0 and any(c != 0 for c in a):
            out.append(tuple(ctx.conic_param_of(a)))
    if len(ker) == 2:
        raise IncidenceError("line lies in the plane of q")
    return out


# ---------------------------------------------------------------- S_q coordinates


def sq_coordinates(ctx: QuadricContext, l):
    """(v of the point a = l cap q, pencil member mu of <W, l>, Lambda-coordinate)."""
    P, Q = _as_points(l)
    vs = _conic_points_on_line(ctx, P, Q)
    if not vs:
        raise IncidenceError("l is disjoint from q")
    a = ctx.conic_point(*vs[0])
    other = P if not proj_equal(P, a) else Q
    mu = ctx.pencil_param(other)
    lam = ctx.lambda_coordinate(P, Q)
    return vs[0], mu, lam


# ---------------------------------------------------------------- conic check


def weierstrass_plucker_rows(ctx: QuadricContext, corr, side: str = "delta"):
    """Coefficient matrix (10 x d) of the Plucker vector of the Weierstrass supports.

    Computed in K[u]/(P) with P = P_z (or P_z'): the support of the point over
    each root s_i is <r(s_i), c(alpha_i)> with alpha_i = [-Fb : 2 Fa](s_i).
    """
    form = corr.Pz if side == "delta" else corr.Pzp
    m = form.poly().monic()
    fa, fb = (Residue(f.poly(), m) for f in (corr.Fa, corr.Fb))
    v0, v1 = -fb, fa * 2
    rpt = [Residue(f.poly(), m) for f in corr.r_forms]
    cpt = [v0 * v0 * a + v0 * v1 * b + v1 * v1 * c for a, b, c in zip(ctx.C20, ctx.C11, ctx.C02)]
    pl = plucker(rpt, cpt)
    n = m.deg
    return [r.p.coeffs(n) for r in pl], m


def plucker_conic_check(ctx: QuadricContext, corr) -> bool:
    """The d Plucker points of each Weierstrass side span a plane and lie on a conic there."""
    if corr.d == 3:
        return True
    for side in ("delta", "delta'"):
        rows, m = weierstrass_plucker_rows(ctx, corr, side)
        if rank(rows) != 3:
            raise IncidenceError(f"Weierstrass supports on side {side} are not coplanar in Plucker space")
        if not _points_on_plane_conic(ctx.K, rows, m):
            return False
    return True


def _points_on_plane_conic(K, rows, m: Poly) -> bool:
    """rows: 10 x n coefficient matrix of rank 3 of points in K[u]/(m)."""
    n = m.deg
    # coordinates in the plane: pick 3 independent rows as a basis of the row space
    basis = []
    for r in rows:
        if rank(basis + [r]) > len(basis):
            basis.append(r)
    ys = [Residue(Poly(K, r), m) for r in basis]
    monos = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    cols = [(ys[i] * ys[j]).p.coeffs(n) for i, j in monos]
    eqs = [[c[k] for c in cols] for k in range(n)]
    ker = kernel(eqs, 6, K.zero(), K.one())
    if not ker:
        return False
    if len(ker) == 1:
        c = ker[0]
        M = [[c[0] * 2, c[1], c[2]], [c[1], c[3] * 2, c[4]], [c[2], c[4], c[5] * 2]]
        return det(M) != 0
    return True
