"""Automorphisms of (Q, q, H), the action on ruling curves and the quotient invariants."""

import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from spinlab.correspondence import RulingCurveR, build_correspondence, random_ruling_curve
from spinlab.field import PrimeField
from spinlab.linalg import mat_vec
from spinlab.reconstruction import extract_spin_tuple
from spinlab.symmetry import (SymmetryError, act_on_ruling_curve, aut_group, g_signs, invariant_jacobian_rank,
                              matrix_preserves, orbit_equal, quotient_invariants, raw_invariants,
                              segre_action, spin_tuple_isomorphic, torus_act, torus_matrix,
                              torus_orbit_equal)

from conftest import context, instance

F = PrimeField(101)


def random_R(K, d, rng):
    return RulingCurveR(d, [K(rng.randrange(1, K.p)) for _ in range(2 * d)])


@pytest.mark.parametrize("desc,seed", [("fp:101", 0), ("fp:10007", 1), ("qq", 0)])
def test_aut_group_checks(desc, seed):
    act = aut_group(context(desc, seed))
    assert all(act.checks.values())
    assert len(act.matrices) == 4


def test_frame_permutations():
    ctx = context("fp:101", 0)
    act = aut_group(ctx)
    assert act.frame_images[0] == ("x", "y", "Y2", "Y3")
    # e1 fixes x and y and exchanges the two rulings
    assert act.frame_images[1] == ("x", "y", "Y3", "Y2")
    # e2 is ([s1 : s0], [t1 : t0]): it exchanges the rulings, swaps x, y, fixes Y2, Y3
    assert act.frame_images[2] == ("y", "x", "Y2", "Y3")
    # e1 e2 keeps each ruling and swaps x, y
    assert act.frame_images[3] == ("y", "x", "Y3", "Y2")


def test_frame_images_by_hand():
    """Apply the matrices to the frame points and compare with the recorded names."""
    ctx = context("fp:10007", 3)
    act = aut_group(ctx)
    frame = {"x": ctx.x, "y": ctx.y, "Y2": ctx.Y2, "Y3": ctx.Y3}
    for M, names in zip(act.matrices, act.frame_images):
        for src, dst in zip(("x", "y", "Y2", "Y3"), names):
            img = mat_vec(M, frame[src])
            assert ctx.quad(img) == 0
            assert all(img[i] * frame[dst][j] == img[j] * frame[dst][i] for i in range(5) for j in range(5))


def test_non_automorphism_detected():
    ctx = context("fp:101", 0)
    M = [[F(1) if i == j else F(0) for j in range(5)] for i in range(5)]
    M[0][2] = F(1)
    assert not all(matrix_preserves(ctx, M).values())
    with pytest.raises(SymmetryError):
        segre_action(ctx, M)


def test_sign_table_d3():
    assert g_signs(3) == [1, -1, 1, -1, 1, -1]


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_g_is_the_sign_table(d):
    rng = random.Random(d)
    R = random_R(F, d, rng)
    gR = act_on_ruling_curve("g", R)
    assert gR.proj_equal(RulingCurveR(d, [s * c for s, c in zip(g_signs(d), R.coeffs)]))
    assert act_on_ruling_curve("g", gR).proj_equal(R)
    assert act_on_ruling_curve("id", R).proj_equal(R)


@pytest.mark.parametrize("a", [-1, 3, 57])
def test_torus_matrix_moves_points_of_R_onto_the_image_curve(a):
    """Geometric oracle: T_a maps the points r(u) of R onto torus_act(a, R)."""
    ctx, R, corr = instance("fp:101", 4, 2)
    K = ctx.K
    T = torus_matrix(ctx, K(a))
    assert all(matrix_preserves(ctx, T).values())
    image = torus_act(K(a), R)
    for u0 in range(20):
        p = corr.point((K(u0), K.one()))
        q = mat_vec(T, p)
        c = ctx.segre_coords(q)
        assert image.sigma((c[0], c[3]), (c[0], c[2])) == 0
        assert R.sigma(*_segre_pair(ctx.segre_coords(p))) == 0


def _segre_pair(c):
    return (c[0], c[3]), (c[0], c[2])


# ---------------------------------------------------------------- invariants


coeff_strategy = st.integers(3, 5).flatmap(
    lambda d: st.lists(st.integers(1, 100), min_size=2 * d, max_size=2 * d))


@given(coeff_strategy, st.integers(1, 100))
def test_invariants_constant_on_orbits(cs, scale):
    d = len(cs) // 2
    R = RulingCurveR(d, [F(c) for c in cs])
    gR = act_on_ruling_curve("g", R)
    scaled = RulingCurveR(d, [F(scale) * c for c in R.coeffs])
    assert quotient_invariants(R) == quotient_invariants(gR) == quotient_invariants(scaled)
    assert orbit_equal(R, gR) and orbit_equal(R, scaled)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_invariants_separate_non_orbit_pairs(d):
    rng = random.Random(100 + d)
    K = PrimeField(10007)
    for _ in range(50):
        R1, R2 = random_R(K, d, rng), random_R(K, d, rng)
        if orbit_equal(R1, R2):
            continue
        assert quotient_invariants(R1) != quotient_invariants(R2)


def _sympy_rank(R):
    """Differential rank of the invariant map by sympy differentiation, mod p."""
    d, p = R.d, R.K.p
    syms = sympy.symbols(f"c0:{2 * d}")
    plus = [i for i, s in enumerate(g_signs(d)) if s == 1]
    p0 = plus[0]
    chart = list(syms)
    chart[p0] = sympy.Integer(1)
    inv = raw_invariants(chart, d)
    free = [syms[i] for i in range(2 * d) if i != p0]
    J = sympy.Matrix(inv).jacobian(free)
    point = {syms[i]: int((R.coeffs[i] / R.coeffs[p0]).v) for i in range(2 * d) if i != p0}
    Jp = J.subs(point).applyfunc(lambda e: int(e) % p)
    from sympy.polys.domains import GF
    from sympy.polys.matrices import DomainMatrix

    return DomainMatrix.from_Matrix(Jp).convert_to(GF(p)).rank()


@pytest.mark.parametrize("d", [3, 4, 5])
def test_invariant_rank(d):
    rng = random.Random(d)
    K = PrimeField(10007)
    for _ in range(5):
        R = random_R(K, d, rng)
        assert invariant_jacobian_rank(R) == 2 * d - 1
        assert _sympy_rank(R) == 2 * d - 1


def test_torus_orbit_detection():
    rng = random.Random(4)
    K = PrimeField(10007)
    R = random_R(K, 4, rng)
    c = K(1234)
    assert torus_orbit_equal(R, torus_act(c, R)) in (c, -c)
    assert torus_orbit_equal(R, random_R(K, 4, rng)) is None
    assert not orbit_equal(R, torus_act(c, R))


# ---------------------------------------------------------------- spin tuples


@pytest.mark.parametrize("desc,d,seed", [("fp:101", 3, 0), ("fp:101", 4, 1), ("fp:10007", 5, 2), ("qq", 3, 0)])
def test_tuple_of_g_image_is_isomorphic(desc, d, seed):
    ctx, R, corr = instance(desc, d, seed)
    t = extract_spin_tuple(ctx, R, corr)
    assert spin_tuple_isomorphic(t, t)
    assert spin_tuple_isomorphic(t, extract_spin_tuple(ctx, act_on_ruling_curve("g", R)))


@pytest.mark.parametrize("d,seed", [(3, 0), (4, 1)])
def test_tuple_of_torus_image_is_isomorphic(d, seed):
    ctx, R, corr = instance("fp:101", d, seed)
    t = extract_spin_tuple(ctx, R, corr)
    TR = torus_act(ctx.K(3), R)
    build_correspondence(ctx, TR)  # T_3 R is still general
    assert spin_tuple_isomorphic(t, extract_spin_tuple(ctx, TR))


@pytest.mark.parametrize("d", [3, 4])
def test_independent_tuples_are_not_isomorphic(d):
    ctx, R1, corr1 = instance("fp:101", d, 0)
    R2, corr2 = random_ruling_curve(ctx, d, seed=77)
    assert not orbit_equal(R1, R2) and torus_orbit_equal(R1, R2) is None
    assert not spin_tuple_isomorphic(extract_spin_tuple(ctx, R1, corr1), extract_spin_tuple(ctx, R2, corr2))
