"""The context (Q, q, H): anchors, Segre frame, conic and Lambda coordinates."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import context
from spinlab.field import PrimeField, rationals
from spinlab.quadric import (ContextError, build_context, check_generality_H, normalize, proj_equal,
                             sample_context, segre_pullback_ok)

F = PrimeField(101)
CTX = [("fp:101", 1), ("fp:101", 2), ("fp:10007", 3), ("qq", 1)]
pair = st.tuples(st.integers(0, 100), st.integers(0, 100)).filter(lambda p: p != (0, 0))


@pytest.mark.parametrize("desc,seed", CTX)
def test_anchor_identities(desc, seed):
    ctx = context(desc, seed)
    assert check_generality_H(ctx).ok
    for p in (ctx.z, ctx.zp, ctx.x, ctx.y, ctx.Y2, ctx.Y3):
        assert ctx.quad(p) == 0
    assert ctx.H(ctx.x) == ctx.H(ctx.y) == ctx.H(ctx.Y2) == ctx.H(ctx.Y3) == 0
    # z, z' are the vertices of the two singular members of the pencil through W
    for v in (ctx.z, ctx.zp):
        assert all(ctx.bil(v, w) == 0 for w in (ctx.x, ctx.y, ctx.v2))
    assert segre_pullback_ok(ctx)


@pytest.mark.parametrize("desc,seed", CTX)
def test_gram_matrix_matches_bilinear_form(desc, seed):
    ctx = context(desc, seed)
    rng = random.Random(seed)
    K = ctx.K
    B = ctx.gram()
    for _ in range(5):
        u = [K.random_element(rng, 9) for _ in range(5)]
        v = [K.random_element(rng, 9) for _ in range(5)]
        want = sum((u[i] * B[i][j] * v[j] for i in range(5) for j in range(5)), K.zero())
        assert ctx.bil(u, v) == want


@given(pair, pair)
def test_segre_points_lie_on_Q_H_and_invert(t, s):
    ctx = context("fp:101", 1)
    t, s = [F(a) for a in t], [F(a) for a in s]
    p = ctx.segre(t, s)
    assert ctx.quad(p) == 0 and ctx.H(p) == 0
    t2, s2 = ctx.segre_inverse(p)
    assert proj_equal(t2, t) and proj_equal(s2, s)


@given(pair)
def test_ruling_lines_lie_in_Q(t):
    ctx = context("fp:101", 2)
    t = [F(a) for a in t]
    p1 = ctx.segre(t, [F(1), F(0)])
    p2 = ctx.segre(t, [F(0), F(1)])
    assert ctx.line_in_quadric(p1, p2)


@given(pair)
def test_conic_parametrization(v):
    ctx = context("fp:101", 1)
    v = [F(a) for a in v]
    a = ctx.conic_point(*v)
    assert ctx.quad(a) == 0 and ctx.in_plane_of_q(a)
    assert proj_equal(ctx.conic_param_of(a), v)


def test_conic_base_points():
    ctx = context("fp:101", 1)
    K = ctx.K
    assert proj_equal(ctx.conic_point(K.zero(), K.one()), ctx.x)
    assert proj_equal(ctx.conic_point(K.one(), K.zero()), ctx.y)


@given(pair)
def test_lambda_coordinates_invert(tau):
    ctx = context("fp:101", 1)
    tau = normalize([F(a) for a in tau])
    w = ctx.tau_point(tau)
    assert ctx.quad(w) == 0 and ctx.bil(w, ctx.x) == 0
    assert proj_equal(ctx.tau_of_point(w), tau)
    assert proj_equal(ctx.j_lambda(ctx.j_lambda(tau)), tau)


@pytest.mark.parametrize("desc,seed", CTX)
def test_cone_coordinates_are_fixed_by_j(desc, seed):
    ctx = context(desc, seed)
    for tz in (ctx.tau_z, ctx.tau_zp):
        assert proj_equal(ctx.j_lambda(tz), tz)
    assert not proj_equal(ctx.tau_z, ctx.tau_zp)


def test_chord_points_are_on_the_conic():
    ctx = context("fp:101", 2)
    t = ctx.segre([F(1), F(3)], [F(2), F(5)])
    pts, _ = ctx.chord_points(t)
    for a in pts:
        assert ctx.quad(a) == 0 and ctx.line_in_quadric(t, a)


@pytest.mark.parametrize("params,cond", [((1, -1, 2), 1), ((1, 2, 0), 0), ((0, 2, 1), 0), ((-1, 4, 2), 6)])
def test_bad_parameters_are_rejected(params, cond):
    with pytest.raises(ContextError):
        build_context(rationals(), *params)


def test_sampling_is_deterministic():
    a = sample_context(F, random.Random(11)).params_json()
    b = sample_context(F, random.Random(11)).params_json()
    assert a == b


def test_context_over_a_tower():
    ctx = sample_context(rationals(), random.Random(4), rational_anchors=False)
    assert ctx.K.depth >= 1
    assert ctx.quad(ctx.x) == 0 and segre_pullback_ok(ctx)
