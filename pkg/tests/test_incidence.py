"""Plucker incidence, incidence divisors and support multiplicities.

Oracles: two lines of P^4 meet iff the 4 x 5 matrix of spanning points has rank
at most 3 (computed with sympy over GF(p)); the incidence divisor is compared
with a brute-force scan of every rational marked line of C(R).
"""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from spinlab.field import PrimeField
from spinlab.incidence import (IncidenceError, incidence_divisor, is_decomposable, line_points, lines_meet,
                               lines_meet_on_quadric, plucker, plucker_conic_check, support,
                               support_multiplicity, theta_from_incidence, weierstrass_plucker_rows)
from spinlab.jacobian import extract_model, theta_polyhedron
from spinlab.linalg import rank
from spinlab.correspondence import random_points
from spinlab.poly import Poly, roots

from conftest import instance

P = 101
F = PrimeField(P)


def span_rank(*pts):
    rows = [[GF(P)(c.v) for c in p] for p in pts]
    return DomainMatrix(rows, (len(rows), 5), GF(P)).rank()


vec5 = st.lists(st.integers(0, P - 1), min_size=5, max_size=5)


@given(vec5, vec5, vec5, vec5)
def test_lines_meet_matches_rank_oracle(a, b, c, e):
    A, B, C, E = ([F(x) for x in v] for v in (a, b, c, e))
    if span_rank(A, B) < 2 or span_rank(C, E) < 2:
        return
    assert lines_meet(plucker(A, B), plucker(C, E)) == (span_rank(A, B, C, E) <= 3)


@given(vec5, vec5, vec5, st.integers(0, P - 1), st.integers(1, P - 1))
def test_forced_meeting_lines(a, b, c, s, t):
    A, B, C = ([F(x) for x in v] for v in (a, b, c))
    if span_rank(A, B) < 2:
        return
    M = [s * x + t * y for x, y in zip(A, B)]
    if span_rank(M, C) < 2:
        return
    assert lines_meet(plucker(A, B), plucker(M, C))


@given(vec5, vec5)
def test_plucker_vectors_are_decomposable(a, b):
    A, B = [F(x) for x in a], [F(x) for x in b]
    if span_rank(A, B) < 2:
        return
    p = plucker(A, B)
    assert is_decomposable(p)
    C, D = line_points(p)
    assert span_rank(A, B, C, D) == 2


def test_non_decomposable_rejected():
    p = [F(0)] * 10
    p[0] = F(1)  # e0 ^ e1
    p[-1] = F(1)  # + e3 ^ e4
    assert not is_decomposable(p)
    with pytest.raises(IncidenceError):
        lines_meet(p, p)


# ---------------------------------------------------------------- on C(R)


def all_rational_marked_lines(corr):
    K = corr.K
    out = []
    for u0 in range(K.p):
        if corr.anchor is not None and K(u0) == corr.anchor:
            continue
        u = (K(u0), K.one())
        q = Poly(K, [corr.Fc(*u), corr.Fb(*u), corr.Fa(*u)])
        if q.deg < 2:
            continue
        for r in set(roots(q)):
            out.append((u, (r, K.one())))
    return out


@pytest.mark.parametrize("d,seed", [(3, 0), (4, 1)])
def test_supports_meet_consistently(d, seed):
    ctx, R, corr = instance("fp:101", d, seed)
    corr.choose_anchor()
    pts = random_points(corr, random.Random(seed), 8)
    for (u1, v1) in pts:
        for (u2, v2) in pts:
            l1 = (corr.point(u1), ctx.conic_point(*v1))
            l2 = (corr.point(u2), ctx.conic_point(*v2))
            assert ctx.line_in_quadric(*l1)
            oracle = span_rank(*l1, *l2) <= 3
            assert lines_meet(plucker(*l1), plucker(*l2)) == oracle
            assert lines_meet_on_quadric(ctx, l1, l2) == oracle


@pytest.mark.parametrize("d,seed", [(3, 0), (3, 3), (4, 1)])
def test_incidence_divisor_matches_brute_force(d, seed):
    ctx, R, corr = instance("fp:101", d, seed)
    corr.choose_anchor()
    model = extract_model(corr)
    everything = all_rational_marked_lines(corr)
    for u, v in random_points(corr, random.Random(seed + 7), 3):
        l = (corr.point(u), ctx.conic_point(*v))
        D = incidence_divisor(ctx, corr, model, l)
        assert D.is_effective() and D.degree == 2 * d
        for u2, v2 in everything:
            l2 = (corr.point(u2), ctx.conic_point(*v2))
            meets = span_rank(*l, *l2) <= 3
            contained = (D - model.point_divisor(u2, v2)).is_effective()
            assert contained == meets


@pytest.mark.parametrize("desc,d,seed", [("fp:101", 3, 0), ("fp:101", 4, 1), ("fp:10007", 5, 2)])
def test_theta_from_incidence_agrees_with_polyhedron(desc, d, seed):
    ctx, R, corr = instance(desc, d, seed)
    corr.choose_anchor()
    model = extract_model(corr)
    th = model.theta_R()
    for u, v in random_points(corr, random.Random(seed), 5):
        Dt = theta_from_incidence(ctx, corr, model, u, v)
        pt = model.point_divisor(u, v)
        assert (Dt - th.divisor - pt).reduced_class().is_identity()
        assert Dt == theta_polyhedron(th, pt)
        assert Dt.degree == d - 1


@pytest.mark.parametrize("desc,d,seed", [("fp:101", 3, 0), ("fp:101", 4, 1), ("fp:10007", 5, 2)])
def test_support_multiplicities(desc, d, seed):
    ctx, R, corr = instance(desc, d, seed)
    corr.choose_anchor()
    assert support_multiplicity(ctx, corr, ctx.l_x) == d - 1
    assert support_multiplicity(ctx, corr, ctx.l_y) == d - 1
    for u, v in random_points(corr, random.Random(seed), 5):
        assert support_multiplicity(ctx, corr, support(ctx, corr, u, v)) == 1


def test_support_multiplicity_brute_force():
    """Count rational marked lines sharing a support directly."""
    ctx, R, corr = instance("fp:101", 3, 0)
    corr.choose_anchor()
    everything = all_rational_marked_lines(corr)
    for u, v in random_points(corr, random.Random(5), 4):
        l = (corr.point(u), ctx.conic_point(*v))
        same = [1 for u2, v2 in everything
                if span_rank(*l, corr.point(u2), ctx.conic_point(*v2)) == 2]
        assert len(same) == 1


@pytest.mark.parametrize("desc,d,seed", [("fp:101", 4, 1), ("fp:10007", 5, 2), ("fp:10007", 5, 4)])
def test_weierstrass_plucker_points_on_plane_conic(desc, d, seed):
    ctx, R, corr = instance(desc, d, seed)
    for side in ("delta", "delta'"):
        rows, _ = weierstrass_plucker_rows(ctx, corr, side)
        assert rank(rows) == 3
    assert plucker_conic_check(ctx, corr)


def test_incidence_rejects_lines_off_quadric():
    ctx, R, corr = instance("fp:101", 3, 0)
    corr.choose_anchor()
    model = extract_model(corr)
    with pytest.raises(IncidenceError):
        incidence_divisor(ctx, corr, model, ([F(1), F(0), F(0), F(0), F(0)], [F(0), F(1), F(0), F(0), F(0)]))
