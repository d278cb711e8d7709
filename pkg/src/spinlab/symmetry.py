"""Symmetries of (Q, q, H), their action on |(1, d-1)| and the quotient.

Besides the four diagonal sign matrices, Aut(Q, q, H) contains the torus
T_a (x -> a x, y -> y / a, identity on <x, y>^perp), which acts on ruling
curves by ``torus_act(a, .)``.  The
involution ``g`` with the sign table a_i -> (-1)^(r-i) a_i,
b_i -> (-1)^(r+1-i) b_i is the torus element c = -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List

from .correspondence import RulingCurveR
from .linalg import mat_mul, rank, transpose
from .poly import Form, Poly, gcd, roots
from .quadric import QuadricContext, proj_equal


class SymmetryError(RuntimeError):
    pass


# ------------------------------------------------------------------ matrices


def _diag(K, signs):
    return [[K(signs[i]) if i == j else K.zero() for j in range(5)] for i in range(5)]


def torus_matrix(ctx: QuadricContext, a):
    """T_a in ambient coordinates: x -> a x, y -> y / a, identity on <x, y>^perp."""
    from .linalg import inverse, kernel

    K = ctx.K
    # basis (x, y, n1, n2, n3) with n_i spanning <x, y>^perp
    perp = kernel([ctx.lower(ctx.x), ctx.lower(ctx.y)], 5, K.zero(), K.one())
    Bcols = [ctx.x, ctx.y] + perp
    Bm = transpose(Bcols)
    D = [[K.zero()] * 5 for _ in range(5)]
    D[0][0] = K(a)
    D[1][1] = K.one() / K(a)
    for i in range(2, 5):
        D[i][i] = K.one()
    return mat_mul(mat_mul(Bm, D), inverse(Bm))


def matrix_preserves(ctx: QuadricContext, M) -> Dict[str, bool]:
    """M^T B M = mu B, M(W) = W and M^T h = nu h (h the functional of H)."""
    B = ctx.gram()
    MtBM = mat_mul(mat_mul(transpose(M), B), M)
    piv = next((i, j) for i in range(5) for j in range(5) if B[i][j] != 0)
    mu = MtBM[piv[0]][piv[1]] / B[piv[0]][piv[1]]
    quad_ok = mu != 0 and all(MtBM[i][j] == mu * B[i][j] for i in range(5) for j in range(5))
    # W = {x0 = x1 = 0}: images of e2, e3, e4 have zero x0, x1
    W_ok = all(M[r][c] == 0 for r in (0, 1) for c in (2, 3, 4))
    h = ctx.h
    hM = [sum((h[i] * M[i][j] for i in range(5)), ctx.K.zero()) for j in range(5)]
    H_ok = proj_equal(hM, h)
    return {"quadric": quad_ok, "plane": W_ok, "hyperplane": H_ok}


def segre_action(ctx: QuadricContext, M):
    """Images of the Segre frame (x, y, Y2, Y3) under M, by name.

    x = seg([1:0],[1:0]), y = seg([0:1],[0:1]), Y2 = seg([1:0],[0:1]) and
    Y3 = seg([0:1],[1:0]), so the permutation tells whether M keeps or
    swaps the two rulings and whether it swaps x and y.
    """
    from .linalg import mat_vec

    imgs = [mat_vec(M, v) for v in (ctx.x, ctx.y, ctx.Y2, ctx.Y3)]
    # each image is a point of Q_H; identify it among the frame points up to scale
    frame = {"x": ctx.x, "y": ctx.y, "Y2": ctx.Y2, "Y3": ctx.Y3}
    names = []
    for p in imgs:
        hit = [k for k, v in frame.items() if proj_equal(p, v)]
        if len(hit) != 1:
            raise SymmetryError("matrix does not permute the Segre frame")
        names.append(hit[0])
    return tuple(names)


@dataclass
class AutAction:
    ctx: QuadricContext
    matrices: List[list]  # Id, e1, e2, e1 e2 (diagonal sign matrices)
    frame_images: List[tuple]  # images of (x, y, Y2, Y3) by name
    g_matrix: list  # the torus element with c = -1
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def h_matrix(self):
        return self.matrices[2]


def aut_group(ctx: QuadricContext) -> AutAction:
    K = ctx.K
    mats = [_diag(K, s) for s in ((1, 1, 1, 1, 1), (1, -1, 1, 1, 1), (1, 1, -1, 1, 1), (1, -1, -1, 1, 1))]
    checks = {}
    for name, M in zip(("Id", "e1", "e2", "e1e2"), mats):
        for k, v in matrix_preserves(ctx, M).items():
            checks[f"{name}:{k}"] = v
    # Klein four-group table, projectively
    klein = True
    for A in mats:
        for Bm in mats:
            P = mat_mul(A, Bm)
            if not any(_proj_mat_equal(P, C) for C in mats):
                klein = False
        if not _proj_mat_equal(mat_mul(A, A), mats[0]):
            klein = False
    checks["klein"] = klein
    frames = [segre_action(ctx, M) for M in mats]
    checks["faithful"] = len(set(frames)) == 4
    g = torus_matrix(ctx, K(-1))
    for k, v in matrix_preserves(ctx, g).items():
        checks[f"g:{k}"] = v
    checks["g involution"] = _proj_mat_equal(mat_mul(g, g), mats[0])
    checks["g not displayed"] = not any(_proj_mat_equal(g, M) for M in mats)
    act = AutAction(ctx, mats, frames, g, checks)
    bad = [k for k, v in checks.items() if not v]
    if bad:
        raise SymmetryError("automorphism checks failed: " + ", ".join(bad))
    return act


def _proj_mat_equal(A, B) -> bool:
    return proj_equal([a for r in A for a in r], [b for r in B for b in r])


# ------------------------------------------------------- action on R


def act_on_ruling_curve(elt, R: RulingCurveR) -> RulingCurveR:
    """Apply an element of G' = <g> ("id" or "g") or a torus parameter c."""
    if elt in ("id", 0, None):
        return RulingCurveR(R.d, list(R.coeffs))
    K = R.K
    c = K(-1) if elt in ("g", 1) else K(elt)
    return torus_act(c, R)


def torus_act(c, R: RulingCurveR) -> RulingCurveR:
    """R -> T(R) for T = ([t0 : c t1], [s0 : c s1]): a_i -> c^(r-i) a_i, b_i -> c^(r+1-i) b_i
    (equivalently the inverse powers, projectively after multiplying by c^(r+1))."""
    r = R.r
    a = [R.coeffs[i] * c ** (r - i) for i in range(R.d)]
    b = [R.coeffs[R.d + i] * c ** (r + 1 - i) for i in range(R.d)]
    return RulingCurveR(R.d, a + b)


def g_signs(d: int) -> List[int]:
    r = d - 1
    return [(-1) ** (r - i) for i in range(d)] + [(-1) ** (r + 1 - i) for i in range(d)]


def orbit_equal(R1: RulingCurveR, R2: RulingCurveR) -> bool:
    """R2 in {R1, g R1} projectively."""
    return R1.proj_equal(R2) or act_on_ruling_curve("g", R1).proj_equal(R2)


def torus_orbit_equal(R1: RulingCurveR, R2: RulingCurveR):
    """Return c with R2 = T_c(R1) projectively, or None."""
    if R1.d != R2.d:
        return None
    K = R1.K
    d, r = R1.d, R1.r
    exps = [r - i for i in range(d)] + [r + 1 - i for i in range(d)]
    u, v = R1.coeffs, R2.coeffs
    if any((x == 0) != (y == 0) for x, y in zip(u, v)):
        return None
    idx = [i for i in range(2 * d) if u[i] != 0]
    i0 = idx[0]
    # v_i / u_i = kappa c^(e_i): c^(e_i - e_i0) = (v_i u_i0) / (u_i v_i0)
    cand = None
    X = Poly.x(K)
    for i in idx[1:]:
        e = exps[i] - exps[i0]
        rho = (v[i] * u[i0]) / (u[i] * v[i0])
        if e == 0:
            if rho != 1:
                return None
            continue
        p = X ** e - rho if e > 0 else X ** (-e) * rho - 1
        cand = p if cand is None else gcd(cand, p)
        if cand.deg == 0:
            return None
    if cand is None:
        return K.one()
    for c in roots(cand):
        if c != 0 and torus_act(c, R1).proj_equal(R2):
            return c
    return None


# ------------------------------------------------------- invariants


def eigenspaces(d: int):
    s = g_signs(d)
    plus = [i for i in range(2 * d) if s[i] == 1]
    minus = [i for i in range(2 * d) if s[i] == -1]
    return plus, minus


def coefficient_names(d: int) -> List[str]:
    return [f"a{i}" for i in range(d)] + [f"b{i}" for i in range(d)]


def raw_invariants(coeffs, d: int):
    plus, minus = eigenspaces(d)
    vals = [coeffs[i] for i in plus]
    for k, i in enumerate(minus):
        for j in minus[k:]:
            vals.append(coeffs[i] * coeffs[j])
    return vals


def invariant_labels(d: int) -> List[str]:
    names = coefficient_names(d)
    plus, minus = eigenspaces(d)
    out = [names[i] for i in plus]
    for k, i in enumerate(minus):
        for j in minus[k:]:
            out.append(names[i] + "*" + names[j])
    return out


def quotient_invariants(R: RulingCurveR):
    """Weighted-projective normalization of (+coords, products of -coords).

    The +1 coordinates have weight 1 and the products weight 2: scale by
    lam = 1/(first nonzero +coordinate), the products by lam^2.  When every
    +coordinate vanishes, divide the products by the first nonzero product.
    """
    d = R.d
    vals = raw_invariants(R.coeffs, d)
    plus, _ = eigenspaces(d)
    npl = len(plus)
    K = R.K
    piv = next((i for i in range(npl) if vals[i] != 0), None)
    if piv is not None:
        lam = K.one() / vals[piv]
        return [v * lam for v in vals[:npl]] + [v * lam * lam for v in vals[npl:]]
    piv = next((i for i in range(npl, len(vals)) if vals[i] != 0), None)
    if piv is None:
        raise ValueError("zero coefficient vector")
    lam = K.one() / vals[piv]
    return vals[:npl] + [v * lam for v in vals[npl:]]


def invariant_jacobian_rank(R: RulingCurveR) -> int:
    """Rank of the differential of the invariant map on the chart where the
    first +coordinate equals 1 (affine coordinates: the other 2d - 1 entries)."""
    d = R.d
    plus, minus = eigenspaces(d)
    K = R.K
    c = list(R.coeffs)
    p0 = plus[0]
    if c[p0] == 0:
        raise ValueError("chart coordinate vanishes")
    c = [x / c[p0] for x in c]
    free = [i for i in range(2 * d) if i != p0]
    rows = []
    # d/dc_k of each invariant; invariants are linear or quadratic monomials
    for i in plus:
        if i == p0:
            continue
        rows.append([K.one() if k == i else K.zero() for k in free])
    for a_, i in enumerate(minus):
        for j in minus[a_:]:
            row = []
            for k in free:
                v = K.zero()
                if k == i:
                    v = v + c[j]
                if k == j:
                    v = v + c[i]
                row.append(v)
            rows.append(row)
    return rank(rows)


# ------------------------------------------------------- tuple isomorphism


def _form_of(p: Poly, n: int) -> Form:
    return Form(p.K, n, p.coeffs(n + 1))


def _mobius_form(F: Form, M) -> Form:
    """F o M, for M = [[a, b], [c, d]] acting on (X0, X1) column vectors."""
    K = F.K
    X = Poly.x(K)
    p0 = X * M[0][0] + M[0][1]
    p1 = X * M[1][0] + M[1][1]
    return Form.from_poly(F.subs(p0, p1), F.n)


def _to_zero_inf(xm, xn, K):
    """Inverse of X' = (X - xm)/(X - xn): X = (xn X' - xm)/(X' - 1)."""
    return [[xn, -xm], [K.one(), -K.one()]]


def _scalings(F1: Form, F2: Form, K):
    """All c in K with F2(X) proportional to F1(c X)."""
    u, v = F1.c, F2.c
    if any((x == 0) != (y == 0) for x, y in zip(u, v)):
        return []
    idx = [i for i in range(len(u)) if u[i] != 0]
    if not idx:
        return []
    i0 = idx[0]
    X = Poly.x(K)
    cand = None
    for i in idx[1:]:
        e = i - i0
        rho = (v[i] * u[i0]) / (u[i] * v[i0])
        p = X ** e - rho
        cand = p if cand is None else gcd(cand, p)
        if cand.deg == 0:
            return []
    if cand is None:
        return [K.one()]
    return [c for c in roots(cand) if c != 0]


def spin_tuple_isomorphic(t1, t2) -> bool:
    """Is there an isomorphism C1 -> C2 carrying theta1 to theta2, m1 to m2 and n1 to n2?

    Both x-lines are normalized by Moebius maps sending x(m) to 0 and x(n) to
    inf; what remains is X -> c X, found from the branch forms.  Each
    candidate c is checked on the theta sides (as an unordered pair) and on
    the sheets of the marked points.
    """
    if t1.g != t2.g:
        return False
    K = t1.K
    g = t1.g
    N = 2 * g + 2
    data = []
    for t in (t1, t2):
        M = _to_zero_inf(t.m[0], t.n[0], K)
        F = _mobius_form(_form_of(t.curve.f, N), M)
        S = t.theta
        Sf = _mobius_form(_form_of(S.U_S, g + 1), M)
        Tc = S.complement()
        Tf = _mobius_form(_form_of(Tc.U_S, g + 1), M)
        data.append((M, F, Sf, Tf))
    (M1, F1, S1, T1), (M2, F2, S2, T2) = data
    for c in _scalings(F1, F2, K):
        D = [[c, K.zero()], [K.zero(), K.one()]]
        S1c = _mobius_form(S1, D)
        T1c = _mobius_form(T1, D)
        if not ((S1c.proportional(S2) and T1c.proportional(T2)) or (S1c.proportional(T2) and T1c.proportional(S2))):
            continue
        # full Moebius X2 = mu(X1): X1 = M1 X', X' -> c X'' ... compose: X1 = M1 D X2' with X2 = M2 X2'
        # sheets: Y2 = kappa Y1 / (den)^(g+1); compare kappa at m and n
        if _sheets_compatible(t1, t2, M1, M2, c, g):
            return True
    return False


def _sheets_compatible(t1, t2, M1, M2, c, g) -> bool:
    """kappa_m == kappa_n for the isomorphism X1 -> X2 determined by (M1, M2, c)."""
    from .linalg import inverse

    K = t1.K
    # X2-line point (as vector) = M2 * diag(1/c, 1) * M1^{-1} * (X1, 1)
    Dinv = [[K.one() / c, K.zero()], [K.zero(), K.one()]]
    T = mat_mul(mat_mul(M2, Dinv), inverse(M1))
    kap = []
    for P1, P2 in ((t1.m, t2.m), (t1.n, t2.n)):
        x1, y1 = P1
        x2, y2 = P2
        num = T[0][0] * x1 + T[0][1]
        den = T[1][0] * x1 + T[1][1]
        if den == 0 or num / den != x2:
            return False
        # homogeneous weights: y transforms with den^(g+1); odd models have a
        # branch point at infinity, so the isomorphism acts on y by kappa / den^(g+1)
        kap.append(y2 * den ** (g + 1) / y1)
    return kap[0] == kap[1]
