"""Jacobian arithmetic, Riemann-Roch, theta characteristics and pencils.

The small-field oracles here never call Cantor's algorithm:

* every reduced pair (U, V) over F_p is enumerated by brute force and the count
  is compared with #J(F_p) obtained from point counts over F_p and F_p^2;
* the class of a sum of rational points is computed by interpolating a function
  a(x) + y b(x) through the points (sympy nullspace over GF(p)) and reading off
  the residual divisor of its norm.
"""

import itertools
import random

import pytest
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from spinlab.field import PrimeField
from spinlab.jacobian import (Divisor, HyperellipticCurve, Mumford, Pencil, all_theta_characteristics,
                              divisor_of_numerator, effective_in_class, extract_model, is_ineffective,
                              riemann_roch_expected, rr_basis, theta_from_roots, theta_polyhedron,
                              twice_is_canonical)
from spinlab.poly import Poly, is_squarefree, xgcd

from conftest import instance

# ---------------------------------------------------------------- oracles


def legendre(p, a):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def random_curve(p, g, rng):
    F = PrimeField(p)
    while True:
        cs = [rng.randrange(p) for _ in range(2 * g + 1)] + [rng.randrange(1, p)]
        f = Poly(F, cs)
        if is_squarefree(f):
            return HyperellipticCurve(f)


def int_coeffs(f):
    return [c.v for c in f.coeffs(f.deg + 1)]


def count_points_fp(p, fc):
    """#C(F_p) including the single point at infinity (odd degree model)."""
    ev = lambda x: sum(c * pow(x, i, p) for i, c in enumerate(fc)) % p
    return p + 1 + sum(legendre(p, ev(x)) for x in range(p))


def count_points_fp2(p, fc):
    """#C(F_{p^2}) using F_{p^2} = F_p(sqrt n) and chi(z) = chi_p(norm z)."""
    n = next(a for a in range(2, p) if legendre(p, a) == -1)

    def mul(u, v):
        return ((u[0] * v[0] + n * u[1] * v[1]) % p, (u[0] * v[1] + u[1] * v[0]) % p)

    total = 0
    for a in range(p):
        for b in range(p):
            z = (a, b)
            acc = (0, 0)
            power = (1, 0)
            for c in fc:
                acc = ((acc[0] + c * power[0]) % p, (acc[1] + c * power[1]) % p)
                power = mul(power, z)
            total += legendre(p, acc[0] * acc[0] - n * acc[1] * acc[1])
    return p * p + 1 + total


def jacobian_order(p, g, fc):
    N1 = count_points_fp(p, fc)
    if g == 1:
        return N1
    N2 = count_points_fp2(p, fc)
    return (N1 * N1 + N2) // 2 - p


def enumerate_reduced(C):
    """Every reduced Mumford pair over F_p, by exhaustion over (U, V)."""
    F = C.K
    p = F.p
    out = set()
    for k in range(C.g + 1):
        for low in itertools.product(range(p), repeat=k):
            U = Poly(F, list(low) + [1])
            for vc in itertools.product(range(p), repeat=k):
                V = Poly(F, list(vc))
                if ((V * V - C.f) % U).is_zero():
                    out.add(Mumford(U, V))
    return out


def rational_points(C):
    F = C.K
    pts = []
    for x in range(F.p):
        fx = C.f(F(x))
        for y in range(F.p):
            if F(y) * F(y) == fx:
                pts.append((F(x), F(y)))
    return pts


def interpolation_class(C, pts):
    """Reduced pair of sum(pts) - k inf, via a function through the points.

    Returns None when the residual cannot be read off (b shares a root with it).
    """
    F = C.K
    p = F.p
    g = C.g
    k = len(pts)
    n = k + g
    da = n // 2
    db = (n - 2 * g - 1) // 2 if n >= 2 * g + 1 else -1
    rows = []
    for x, y in pts:
        row = [F(x) ** i for i in range(da + 1)] + [y * F(x) ** j for j in range(db + 1)]
        rows.append([GF(p)(c.v) for c in row])
    M = DomainMatrix(rows, (k, da + db + 2), GF(p))
    ns = M.nullspace().to_Matrix()
    vec = [F(int(c)) for c in ns.row(0)]
    a = Poly(F, vec[:da + 1])
    b = Poly(F, vec[da + 1:])
    if b.is_zero():
        return None
    norm = a * a - C.f * b * b
    E = Poly.from_roots(F, [x for x, _ in pts])
    U, r = norm.divmod(E)
    assert r.is_zero()
    U = U.monic()
    if U.deg == 0:
        return Mumford(U, Poly(F, []))
    gcd_, s, _ = xgcd(b, U)
    if gcd_.deg > 0:
        return None
    inv = s / gcd_.lc()
    return Mumford(U, (a * inv) % U)


SMALL = [(p, g) for p in (7, 11, 13) for g in (1, 2)]


@pytest.fixture(scope="module", params=SMALL, ids=[f"p{p}-g{g}" for p, g in SMALL])
def small_curve(request):
    p, g = request.param
    rng = random.Random(p * 10 + g)
    # enough rational points for the interpolation oracle to have material
    while True:
        C = random_curve(p, g, rng)
        if len({x for x, _ in rational_points(C)}) >= 2 * g + 1:
            return C, enumerate_reduced(C)


# ---------------------------------------------------------------- Cantor vs oracles


def test_enumeration_matches_point_counts(small_curve):
    C, J = small_curve
    assert len(J) == jacobian_order(C.K.p, C.g, int_coeffs(C.f))


def test_cantor_closes_on_enumerated_group(small_curve):
    C, J = small_curve
    rng = random.Random(1)
    elems = sorted(J, key=repr)
    for _ in range(100):
        A, B, D = (rng.choice(elems) for _ in range(3))
        S = C.add(A, B)
        assert S in J
        assert S == C.add(B, A)
        assert C.add(S, D) == C.add(A, C.add(B, D))
        assert C.add(A, C.neg(A)).is_identity()
        assert C.add(A, C.identity()) == A


def test_lagrange_on_random_classes(small_curve):
    C, J = small_curve
    N = len(J)
    rng = random.Random(2)
    elems = sorted(J, key=repr)
    for A in rng.sample(elems, min(100, len(elems))):
        assert C.mul(N, A).is_identity()
        assert C.mul(N + 1, A) == A


def test_cantor_matches_interpolation_oracle(small_curve):
    C, J = small_curve
    pts = rational_points(C)
    rng = random.Random(3)
    checked = 0
    tries = 0
    while checked < 100 and tries < 2000:
        tries += 1
        k = rng.randint(1, 2 * C.g + 1)
        if len({x for x, _ in pts}) < k:
            continue
        chosen = []
        used = set()
        for x, y in rng.sample(pts, len(pts)):
            if x not in used:
                chosen.append((x, y))
                used.add(x)
            if len(chosen) == k:
                break
        expected = interpolation_class(C, chosen)
        if expected is None:
            continue
        acc = C.identity()
        for x, y in chosen:
            acc = C.add(acc, C.point_pair(x, y))
        assert acc == expected
        assert expected in J
        checked += 1
    assert checked >= 50


def test_reduced_class_of_divisor_matches_cantor(small_curve):
    C, _ = small_curve
    pts = rational_points(C)
    rng = random.Random(4)
    for _ in range(30):
        P, Q = rng.choice(pts), rng.choice(pts)
        D = Divisor.point(C, *P) + Divisor.point(C, *Q, n=2)
        assert D.reduced_class() == C.add(C.point_pair(*P), C.mul(2, C.point_pair(*Q)))


def test_point_plus_conjugate_is_trivial(small_curve):
    C, _ = small_curve
    for x, y in rational_points(C):
        assert C.add(C.point_pair(x, y), C.point_pair(x, -y)).is_identity()


def test_is_valid_and_point_pair():
    C = random_curve(13, 2, random.Random(0))
    P = rational_points(C)[0]
    assert C.is_valid(C.point_pair(*P))
    with pytest.raises(ValueError):
        C.point_pair(P[0], P[1] + 1 if P[1] != 0 else 1)


def test_curve_rejects_even_degree():
    F = PrimeField(13)
    with pytest.raises(ValueError):
        HyperellipticCurve(Poly(F, [1, 0, 0, 0, 1]))


# ---------------------------------------------------------------- divisors


def test_normalize_cancels_and_merges():
    C = random_curve(101, 2, random.Random(7))
    P = rational_points(C)
    a, b = P[0], P[1]
    D = Divisor.point(C, *a) + Divisor.point(C, *b) - Divisor.point(C, *a)
    assert D == Divisor.point(C, *b)
    assert (Divisor.point(C, *a) * 3).degree == 3
    both = Divisor.point(C, *a) + Divisor.point(C, a[0], -a[1])
    assert both.is_effective()
    assert not (-both).is_effective()
    assert both.involution() == both


# ---------------------------------------------------------------- Riemann-Roch


def _random_divisor(C, pts, rng, deg_low, deg_high):
    D = Divisor.infinity(C, 0)
    for _ in range(rng.randint(0, 3)):
        D = D + Divisor.point(C, *rng.choice(pts), n=rng.choice([1, 2, -1]))
    target = rng.randint(deg_low, deg_high)
    return D + Divisor.infinity(C, target - D.degree)


def _div_of_function(C, h):
    """div(h) for h = (a + Y b)/s, including the order at infinity."""
    num = divisor_of_numerator(C, h.a, h.b)
    den = Divisor(C, [(h.s, None, 1)], 0, check=False) if h.s.deg > 0 else Divisor.infinity(C, 0)
    pole = max(2 * h.a.deg if not h.a.is_zero() else -1,
               2 * h.b.deg + 2 * C.g + 1 if not h.b.is_zero() else -1)
    return num - den + Divisor.infinity(C, 2 * h.s.deg - pole)


@pytest.mark.parametrize("g", [2, 3])
def test_rr_dimension_matches_riemann_roch(g):
    C = random_curve(101, g, random.Random(g))
    pts = rational_points(C)
    rng = random.Random(10 + g)
    for _ in range(12):
        D = _random_divisor(C, pts, rng, 2 * g - 1, 2 * g + 3)
        basis = rr_basis(D)
        assert len(basis) == riemann_roch_expected(D)
        for h in basis:
            assert (_div_of_function(C, h) + D).is_effective()
            assert _div_of_function(C, h).degree == 0


@pytest.mark.parametrize("g", [2, 3])
def test_rr_at_infinity_follows_gap_sequence(g):
    C = random_curve(101, g, random.Random(20 + g))
    for k in range(0, 4 * g + 2):
        expected = k // 2 + 1 + (max(0, (k - 2 * g - 1) // 2 + 1) if k >= 2 * g + 1 else 0)
        assert len(rr_basis(Divisor.infinity(C, k))) == expected


def test_rr_negative_degree_is_empty():
    C = random_curve(101, 2, random.Random(5))
    assert rr_basis(Divisor.infinity(C, -1)) == []


# ---------------------------------------------------------------- theta census


def _split_genus2_curve(p, rng):
    F = PrimeField(p)
    xs = [F(x) for x in rng.sample(range(p), 5)]
    f = Poly.from_roots(F, xs) * Poly.const(F, rng.randrange(1, p))
    return HyperellipticCurve(f), xs


def test_genus2_theta_census_over_f101():
    C, roots_f = _split_genus2_curve(101, random.Random(0))
    pts = rational_points(C)
    thetas = all_theta_characteristics(C, roots_f)
    assert len(thetas) == 16
    census = {"balanced_ineffective": 0, "singleton_effective": 0, "other": 0}
    for D, T in thetas:
        # brute force: theta has degree 1, so it is effective iff theta ~ P for
        # a rational point P (an effective representative is unique, hence Galois
        # stable) or theta ~ inf.
        candidates = [Divisor.point(C, *P) for P in pts] + [Divisor.infinity(C, 1)]
        effective = any((D - E).reduced_class().is_identity() for E in candidates)
        assert effective == (effective_in_class(D) is not None)
        assert effective == (len(rr_basis(D)) > 0)
        # theta_T = sum_T w + (1 - |T|) inf; |T| in {2, 3} are the balanced
        # partitions, |T| in {0, 1, 4, 5} give a single Weierstrass point.
        kind = "balanced" if len(T) in (2, 3) else "singleton"
        if kind == "balanced" and not effective:
            census["balanced_ineffective"] += 1
        elif kind == "singleton" and effective:
            census["singleton_effective"] += 1
        else:
            census["other"] += 1
        assert (D * 2 - Divisor.infinity(C, 2 * C.g - 2)).reduced_class().is_identity()
    assert census == {"balanced_ineffective": 10, "singleton_effective": 6, "other": 0}


@pytest.mark.parametrize("g", [2, 3, 4])
def test_balanced_thetas_ineffective_over_split_curves(g):
    rng = random.Random(g)
    F = PrimeField(10007)
    xs = [F(x) for x in rng.sample(range(10007), 2 * g + 1)]
    C = HyperellipticCurve(Poly.from_roots(F, xs))
    for S in itertools.combinations(xs, g + 1):
        th = theta_from_roots(C, S, False)
        assert twice_is_canonical(th)
        assert is_ineffective(th)
        assert len(rr_basis(th.divisor)) == 0
    for S in itertools.combinations(xs, g):
        th = theta_from_roots(C, S, True)
        assert is_ineffective(th)


def test_unbalanced_partition_rejected():
    F = PrimeField(101)
    xs = [F(x) for x in (1, 2, 3, 4, 5)]
    C = HyperellipticCurve(Poly.from_roots(F, xs))
    with pytest.raises(ValueError):
        theta_from_roots(C, xs[:2], False)


def test_polyhedron_is_unique_effective_member():
    F = PrimeField(10007)
    xs = [F(x) for x in (3, 17, 29, 101, 555, 999, 1234)]
    C = HyperellipticCurve(Poly.from_roots(F, xs))
    th = theta_from_roots(C, xs[:4], False)
    pts = [(x, y) for x, y in _some_points(C, 6)]
    for P in pts:
        E = theta_polyhedron(th, Divisor.point(C, *P))
        assert E.is_effective() and E.degree == C.g
        assert (E - th.divisor - Divisor.point(C, *P)).reduced_class().is_identity()
        assert len(rr_basis(th.divisor + Divisor.point(C, *P))) == 1


def _some_points(C, count):
    F = C.K
    out = []
    x = 1
    while len(out) < count:
        fx = C.f(F(x))
        if F.is_square(fx) and fx != 0:
            out.append((F(x), F.sqrt(fx)))
        x += 1
    return out


# ---------------------------------------------------------------- pencils and the model


def test_g12_pencil_fibers():
    C = random_curve(101, 2, random.Random(9))
    pen = Pencil(Divisor.infinity(C, 2))
    assert pen.degree == 2
    for lam in [(C.K(1), C.K(0)), (C.K(0), C.K(1)), (C.K(3), C.K(5))]:
        E = pen.fiber(lam)
        assert E.is_effective() and E.degree == 2
        assert (E - Divisor.infinity(C, 2)).reduced_class().is_identity()


@pytest.mark.parametrize("desc,d,seed", [("fp:101", 3, 0), ("fp:101", 4, 1), ("fp:10007", 5, 2)])
def test_model_theta_and_polyhedra(desc, d, seed):
    ctx, R, corr = instance(desc, d, seed)
    corr.choose_anchor()
    model = extract_model(corr)
    assert model.g == d - 1
    th = model.theta_R()
    assert is_ineffective(th)
    assert effective_in_class(th.divisor + model.m) == model.fiber_y()
    assert effective_in_class(th.divisor + model.n) == model.fiber_x()
    assert theta_polyhedron(th, model.n) == model.fiber_x()
    assert model.fiber_x().degree == model.g
