"""Spin tuples, the product embedding, frame identification and the inverse map."""

import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinlab.correspondence import check_generality_R
from spinlab.field import PrimeField
from spinlab.jacobian import Divisor
from spinlab.quadric import normalize, proj_equal
from spinlab.reconstruction import (NotInImage, _interpolate_at, extract_spin_tuple, identify_frames,
                                    lambda_candidates, mob, mobius_from_three, pencil_value,
                                    product_embedding, recover_and_interpolate, roundtrip, side_system)
from spinlab.spintuple import SpinTuple, TupleError
from spinlab.symmetry import orbit_equal, spin_tuple_isomorphic, torus_act, torus_orbit_equal
from spinlab.correspondence import RulingCurveR

from conftest import instance

F = PrimeField(10007)

CASES = [("fp:101", 3, 0), ("fp:101", 4, 1), ("fp:10007", 5, 2), ("qq", 3, 0)]
IDS = [f"{c}-d{d}-s{s}" for c, d, s in CASES]


@pytest.fixture(scope="module", params=CASES, ids=IDS)
def case(request):
    desc, d, seed = request.param
    ctx, R, corr = instance(desc, d, seed)
    t = extract_spin_tuple(ctx, R, corr)
    return ctx, R, t, product_embedding(t)


# ---------------------------------------------------------------- Moebius helpers


pt = st.tuples(st.integers(0, 10006), st.integers(0, 10006)).filter(lambda p: p != (0, 0))


@given(st.lists(pt, min_size=6, max_size=6))
def test_mobius_from_three(ps):
    src = [normalize([F(a), F(b)]) for a, b in ps[:3]]
    dst = [normalize([F(a), F(b)]) for a, b in ps[3:]]
    if any(proj_equal(p, q) for L in (src, dst) for i, p in enumerate(L) for q in L[i + 1:]):
        return
    M = mobius_from_three(src, dst)
    for s, t in zip(src, dst):
        assert proj_equal(mob(M, s), t)


# ---------------------------------------------------------------- tuples


def test_tuple_validation(case):
    ctx, R, t, emb = case
    t.validate()
    assert t.g == R.d - 1
    with pytest.raises(TupleError):
        SpinTuple(t.curve, t.theta, t.m, t.m).validate()
    with pytest.raises(TupleError):
        SpinTuple(t.curve, t.theta, t.m, (t.m[0], -t.m[1])).validate()


# ---------------------------------------------------------------- embedding


def test_embedding_checks(case):
    ctx, R, t, emb = case
    assert emb.checks and all(emb.checks.values()), emb.checks


def test_image_biform_vanishes_on_the_curve(case):
    """Evaluate G at (phi1(P), phi2(P)) for the marked points and points found by scanning X."""
    ctx, R, t, emb = case
    C, K, d = t.curve, t.K, emb.d
    pts = [t.m, t.n, (t.m[0], -t.m[1]), (t.n[0], -t.n[1])]
    for x in range(1, 400):
        fx = C.f(K(x))
        if fx != 0 and K.is_square(fx):
            pts.append((K(x), K.sqrt(fx)))
        if len(pts) == 10:
            break
    found = 0
    for X, Y in pts:
        P = Divisor.point(C, X, Y)
        try:
            l, m = pencil_value(emb.phi1, P), pencil_value(emb.phi2, P)
        except ValueError:
            continue
        val = K.zero()
        for (i, j), c in emb.G.items():
            val = val + c * l[0] ** i * l[1] ** (d - i) * m[0] ** j * m[1] ** (d - j)
        assert val == 0
        found += 1
    assert found >= 3


def test_only_eps_zero_is_consistent(case):
    ctx, R, t, emb = case
    frames = identify_frames(emb, ctx)
    assert [fc.eps for fc in frames] == [0, 1]
    assert frames[0].consistent
    assert not frames[1].consistent


def test_lambda_is_free_and_kernel_is_a_line(case):
    """The determinant in lam vanishes identically: every lam gives an R'."""
    ctx, R, t, emb = case
    fc = identify_frames(emb, ctx)[0]
    d = emb.d
    S, T = t.theta, t.theta.complement()
    M = side_system(ctx, emb.phi1, S, ctx.z, fc.T1_base, d).rows + \
        side_system(ctx, emb.phi1, T, ctx.zp, fc.T1_base, d).rows
    status, _ = lambda_candidates(M, t.K, d)
    assert status == "free"
    K = t.K
    sols = []
    for lam in (K.one(), K(2), K(5)):
        ker = _interpolate_at(M, lam, K, d)
        assert len(ker) == 1
        sols.append(RulingCurveR(d, normalize(ker[0])))
    # different lam differ by a torus element
    assert torus_orbit_equal(sols[0], sols[1]) is not None
    assert torus_orbit_equal(sols[0], sols[2]) is not None


# ---------------------------------------------------------------- inverse map


def test_reconstruction_lands_in_the_torus_orbit(case):
    ctx, R, t, emb = case
    rec = recover_and_interpolate(t, ctx, emb)
    assert rec.accepted and rec.eps == 0 and rec.lambda_status == "free" and rec.kernel_dim == 1
    assert all(check_generality_R(ctx, rec.R).values())
    assert spin_tuple_isomorphic(t, extract_spin_tuple(ctx, rec.R))
    c = torus_orbit_equal(R, rec.R)
    assert c is not None
    # R' in {R, g R} exactly when the torus parameter is +-1
    assert orbit_equal(R, rec.R) == (c in (t.K.one(), -t.K.one()))


def test_torus_images_have_isomorphic_tuples(case):
    ctx, R, t, emb = case
    TR = torus_act(t.K(7), R)
    assert spin_tuple_isomorphic(t, extract_spin_tuple(ctx, TR))
    assert not orbit_equal(R, TR)


def test_roundtrip_report(case):
    ctx, R, t, emb = case
    rt = roundtrip(ctx, R)
    assert rt.reconstruction.accepted
    assert rt.torus_parameter is not None
    assert rt.orbit_match == orbit_equal(R, rt.R_prime)
    js = rt.reconstruction.to_json(t.K)
    assert js["accepted"] is True


def _point_off(t, avoid, K):
    C = t.curve
    for x in range(2, 10 ** 4):
        X = K(x)
        fx = C.f(X)
        if fx != 0 and K.is_square(fx) and all(X != a for a in avoid):
            return (X, K.sqrt(fx))
    raise AssertionError("no point found")


@pytest.mark.parametrize("desc,d,seed", [("fp:101", 3, 0), ("fp:101", 4, 1)])
def test_adversarial_tuples_are_rejected(desc, d, seed):
    """With the context fixed, the image of nu is a proper subvariety: a
    generic pair of marked points is not reached, neither is iota(m)."""
    ctx, R, corr = instance(desc, d, seed)
    t = extract_spin_tuple(ctx, R, corr)
    K = t.K
    bad = [
        SpinTuple(t.curve, t.theta, t.m, _point_off(t, [t.m[0], t.n[0]], K)),
        SpinTuple(t.curve, t.theta, (t.m[0], -t.m[1]), t.n),
    ]
    for b in bad:
        rec = recover_and_interpolate(b, ctx)
        assert not rec.accepted and rec.reason


def test_roundtrip_raises_not_in_image(monkeypatch):
    import spinlab.reconstruction as rc

    ctx, R, corr = instance("fp:101", 3, 0)
    monkeypatch.setattr(rc, "recover_and_interpolate",
                        lambda t, ctx: rc.Reconstruction(False, reason="forced"))
    with pytest.raises(NotInImage):
        rc.roundtrip(ctx, R)


@pytest.mark.parametrize("seed", [0, 1])
def test_reconstruction_time_d5(seed):
    ctx, R, corr = instance("fp:10007", 5, seed)
    t0 = time.perf_counter()
    t = extract_spin_tuple(ctx, R, corr)
    rec = recover_and_interpolate(t, ctx)
    elapsed = time.perf_counter() - t0
    assert rec.accepted
    assert elapsed < 10.0
