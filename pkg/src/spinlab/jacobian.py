"""Divisor arithmetic on odd hyperelliptic models Y^2 = f(X), deg f = 2g + 1.

Divisors are finite sums of *blocks* ``(U, V, n)``: ``U`` a monic polynomial
and ``V`` a residue with ``U | V^2 - f``, standing for the points
``(X, V(X))`` with ``U(X) = 0``, each counted ``n`` times.  ``V = None`` means
both sheets over the roots of ``U`` (the affine divisor of ``U(X)``).  The
single point at infinity carries its own coefficient.  Reduced classes use
Mumford pairs and Cantor's algorithm; the class of a divisor D of degree k is
the reduced pair of D - k*inf.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .poly import Poly, gcd, squarefree_decomposition, xgcd_monic


class DivisorError(ValueError):
    pass


class ThetaError(ValueError):
    pass


# ---------------------------------------------------------------- Mumford


@dataclass(frozen=True)
class Mumford:
    U: Poly
    V: Poly

    @property
    def weight(self) -> int:
        return self.U.deg

    def is_identity(self) -> bool:
        return self.U.deg == 0

    def __eq__(self, o):
        return isinstance(o, Mumford) and self.U == o.U and self.V == o.V

    def __hash__(self):
        return hash((self.U, self.V))


class HyperellipticCurve:
    """Y^2 = f(X) with f square-free of odd degree 2g + 1 (f need not be monic)."""

    def __init__(self, f: Poly):
        if f.deg % 2 == 0 or f.deg < 3:
            raise ValueError("f must have odd degree >= 3")
        self.f = f
        self.K = f.K
        self.g = (f.deg - 1) // 2
        self._fmonic = f.monic()

    # -- points ---------------------------------------------------------

    def on_curve(self, x, y) -> bool:
        return y * y == self.f(x)

    def identity(self) -> Mumford:
        return Mumford(Poly.const(self.K, 1), Poly._raw(self.K, []))

    def point_pair(self, x, y) -> Mumford:
        if not self.on_curve(x, y):
            raise DivisorError(f"point ({x}, {y}) is not on the curve")
        return Mumford(Poly(self.K, [-x, 1]), Poly.const(self.K, y))

    def is_valid(self, D: Mumford) -> bool:
        U, V = D.U, D.V
        if U.is_zero() or U.lc() != 1:
            return False
        if not V.is_zero() and V.deg >= max(U.deg, 1):
            return False
        return ((V * V - self.f) % U).is_zero()

    # -- Cantor ---------------------------------------------------------

    def compose(self, D1: Mumford, D2: Mumford) -> Mumford:
        U1, V1, U2, V2 = D1.U, D1.V, D2.U, D2.V
        d0, e1, e2 = xgcd_monic(U1, U2)
        d, c1, c2 = xgcd_monic(d0, V1 + V2)
        s1, s2, s3 = c1 * e1, c1 * e2, c2
        U = (U1 * U2).exact_div(d * d)
        V = (s1 * U1 * V2 + s2 * U2 * V1 + s3 * (V1 * V2 + self.f)).exact_div(d) % U
        return Mumford(U.monic(), V)

    def reduce_pair(self, D: Mumford) -> Mumford:
        U, V = D.U, D.V % D.U if D.U.deg > 0 else Poly._raw(self.K, [])
        while U.deg > self.g:
            U = (self.f - V * V).exact_div(U).monic()
            V = (-V) % U
        return Mumford(U.monic(), V)

    def add(self, D1: Mumford, D2: Mumford) -> Mumford:
        return self.reduce_pair(self.compose(D1, D2))

    def neg(self, D: Mumford) -> Mumford:
        return Mumford(D.U, -D.V)

    def mul(self, n: int, D: Mumford) -> Mumford:
        if n < 0:
            return self.mul(-n, self.neg(D))
        acc = self.identity()
        base = D
        while n:
            if n & 1:
                acc = self.add(acc, base)
            base = self.add(base, base)
            n >>= 1
        return acc

    # -- Hensel lift of a sheet ------------------------------------------

    def lift_sheet(self, U: Poly, V: Poly, k: int) -> Poly:
        """V_k with V_k^2 = f mod U^k and V_k = V mod U (U coprime to f)."""
        W = V % U
        g, inv0, _ = xgcd_monic(W, U)
        if g.deg != 0:
            raise DivisorError("sheet value not invertible (Weierstrass point)")
        half = self.K.one() / 2
        prec = 1
        while prec < k:
            prec = min(2 * prec, k)
            mod = U ** prec
            # Newton step W <- (W + f/W)/2 mod U^prec, with 1/W lifted from 1/V mod U
            inv = _lift_inverse(W, inv0, U, prec)
            W = ((W + (self.f % mod) * inv) * half) % mod
        return W % (U ** k)


def _lift_inverse(a: Poly, inv0: Poly, U: Poly, k: int) -> Poly:
    """a^(-1) mod U^k from a^(-1) mod U by Newton iteration."""
    inv = inv0
    prec = 1
    two = Poly.const(a.K, 2)
    while prec < k:
        prec = min(2 * prec, k)
        mod = U ** prec
        inv = (inv * (two - (a % mod) * inv)) % mod
    return inv


# ---------------------------------------------------------------- divisors


Block = Tuple[Poly, Optional[Poly], int]


class Divisor:
    """Formal sum of blocks plus a multiple of the point at infinity."""

    def __init__(self, curve: HyperellipticCurve, blocks: List[Block] = (), n_inf: int = 0, check=True):
        self.curve = curve
        self.blocks = []
        for U, V, n in blocks:
            if n == 0 or U.deg <= 0:
                continue
            U = U.monic()
            if V is not None:
                V = V % U
                if check and not ((V * V - curve.f) % U).is_zero():
                    raise DivisorError("block is not on the curve")
            self.blocks.append((U, V, n))
        self.n_inf = n_inf

    # constructors ------------------------------------------------------

    @classmethod
    def point(cls, curve, x, y, n=1):
        if not curve.on_curve(x, y):
            raise DivisorError(f"point ({x}, {y}) is not on the curve")
        K = curve.K
        return cls(curve, [(Poly(K, [-x, 1]), Poly.const(K, y), n)])

    @classmethod
    def infinity(cls, curve, n=1):
        return cls(curve, [], n)

    @classmethod
    def from_mumford(cls, curve, D: Mumford, n=1):
        return cls(curve, [(D.U, D.V, n)] if D.U.deg > 0 else [])

    # arithmetic --------------------------------------------------------

    @property
    def degree(self) -> int:
        tot = self.n_inf
        for U, V, n in self.blocks:
            tot += n * U.deg * (2 if V is None else 1)
        return tot

    def __add__(self, o: "Divisor"):
        return Divisor(self.curve, self.blocks + o.blocks, self.n_inf + o.n_inf, check=False)

    def __neg__(self):
        return Divisor(self.curve, [(U, V, -n) for U, V, n in self.blocks], -self.n_inf, check=False)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, k: int):
        return Divisor(self.curve, [(U, V, k * n) for U, V, n in self.blocks], k * self.n_inf, check=False)

    __rmul__ = __mul__

    def involution(self):
        return Divisor(self.curve, [(U, None if V is None else -V, n) for U, V, n in self.blocks],
                       self.n_inf, check=False)

    # class -------------------------------------------------------------

    def reduced_class(self) -> Mumford:
        """Reduced Mumford pair of D - deg(D) * inf."""
        C = self.curve
        acc = C.identity()
        for U, V, n in self.blocks:
            if V is None:
                continue
            acc = C.add(acc, C.mul(n, C.reduce_pair(Mumford(U, V))))
        return acc

    # canonical form ----------------------------------------------------

    def normalized(self) -> "Divisor":
        return _normalize(self)

    def is_zero(self) -> bool:
        N = self.normalized()
        return not N.blocks and N.n_inf == 0

    def __eq__(self, o):
        return isinstance(o, Divisor) and (self - o).is_zero()

    def is_effective(self) -> bool:
        N = self.normalized()
        if N.n_inf < 0:
            return False
        return all(n > 0 for _, _, n in N.blocks)

    def affine_support(self) -> Poly:
        """Product of the X-polynomials of the support (squarefree, monic)."""
        p = Poly.const(self.curve.K, 1)
        for U, _, _ in self.normalized().blocks:
            p = p * U
        return p

    def __repr__(self):
        parts = [f"{n}*({U}, {V})" for U, V, n in self.blocks]
        if self.n_inf:
            parts.append(f"{self.n_inf}*inf")
        return "Divisor(" + " + ".join(parts or ["0"]) + ")"


def _sqfree(U: Poly) -> bool:
    return U.deg <= 1 or gcd(U, U.derivative()).deg == 0


def _coprime_base(polys: List[Poly]) -> List[Poly]:
    base = []
    for p in polys:
        if p.deg > 0:
            base.append(p.monic())
    changed = True
    while changed:
        changed = False
        uniq = []
        for p in base:
            if not any(p == q for q in uniq):
                uniq.append(p)
        base = uniq
        for i in range(len(base)):
            for j in range(i + 1, len(base)):
                g = gcd(base[i], base[j])
                if g.deg > 0:
                    a, b = base[i], base[j]
                    new = [g, a.exact_div(g).monic(), b.exact_div(g).monic()]
                    base = [q for k, q in enumerate(base) if k not in (i, j)] + [q for q in new if q.deg > 0]
                    changed = True
                    break
            if changed:
                break
    return base


def _normalize(D: Divisor) -> Divisor:
    """Canonical form: pairwise coprime squarefree U's, with per-sheet counts."""
    C = D.curve
    f = C.f
    entries = []
    for U, V, n in D.blocks:
        if _sqfree(U):
            entries.append((U, V, n))
        else:
            for q, k in squarefree_decomposition(U):
                entries.append((q, None if V is None else V % q, n * k))
    polys = [U for U, _, _ in entries] + [C._fmonic]
    base = _coprime_base(polys)
    base = [b for b in base if any((U % b).is_zero() for U, _, _ in entries)]
    # split base elements so that every sheet value is +-V0 uniformly on it
    changed = True
    while changed:
        changed = False
        for i, b in enumerate(base):
            if (f % b).is_zero():
                continue
            vals = [V % b for U, V, _ in entries if V is not None and (U % b).is_zero()]
            for v1 in vals:
                for v2 in vals:
                    g = gcd(b, v1 - v2)
                    if 0 < g.deg < b.deg:
                        base = base[:i] + [g, b.exact_div(g).monic()] + base[i + 1:]
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    out = []
    for b in base:
        w = (f % b).is_zero()
        both = 0
        plus = 0
        minus = 0
        V0 = None
        for U, V, n in entries:
            if not (U % b).is_zero():
                continue
            if V is None:
                both += n
                continue
            v = V % b
            if w:
                plus += n
                continue
            if V0 is None:
                V0 = v
            if v == V0:
                plus += n
            else:
                minus += n
        if w:
            tot = plus + 2 * both
            if tot:
                out.append((b, Poly._raw(C.K, []), tot))
            continue
        P, M = plus + both, minus + both
        if V0 is None:
            if both:
                out.append((b, None, both))
            continue
        m = min(P, M)
        if m:
            out.append((b, None, m))
        if P > m:
            out.append((b, V0, P - m))
        if M > m:
            out.append((b, (-V0) % b, M - m))
    out.sort(key=lambda e: (e[0].deg, repr(e[0]), e[1] is None, repr(e[1]), e[2]))
    return Divisor(C, out, D.n_inf, check=False)


# ------------------------------------------------------- effectivity & theta


def effective_in_class(D: Divisor) -> Optional[Divisor]:
    """An effective divisor E ~ D (deg D = k with 0 <= k <= g), or None.

    With reduced weight e of D - k*inf, E = (affine part) + (k - e)*inf when
    e <= k; uniqueness of the reduced pair makes the choice canonical.
    """
    C = D.curve
    k = D.degree
    if k < 0 or k > C.g:
        raise DivisorError("effective_in_class needs 0 <= deg D <= g")
    red = D.reduced_class()
    e = red.weight
    if e > k:
        return None
    return Divisor(C, [(red.U, red.V, 1)] if e else [], k - e, check=False)


def h0_positive(D: Divisor) -> bool:
    """h^0(D) > 0 for 0 <= deg D <= g."""
    return effective_in_class(D) is not None


@dataclass
class ThetaChar:
    """theta = sum of the Weierstrass points in S minus g^1_2.

    S is given by the monic factor ``U_S`` of f collecting its finite points
    and the flag ``with_inf``; balanced means |S| = g + 1.
    """

    curve: HyperellipticCurve
    U_S: Poly
    with_inf: bool

    @property
    def size(self) -> int:
        return self.U_S.deg + (1 if self.with_inf else 0)

    @property
    def divisor(self) -> Divisor:
        C = self.curve
        blocks = [(self.U_S, Poly._raw(C.K, []), 1)] if self.U_S.deg > 0 else []
        return Divisor(C, blocks, (1 if self.with_inf else 0) - 2, check=False)

    def complement(self) -> "ThetaChar":
        C = self.curve
        return ThetaChar(C, C._fmonic.exact_div(self.U_S).monic(), not self.with_inf)


def theta_from_partition(curve: HyperellipticCurve, U_S: Poly, with_inf: bool) -> ThetaChar:
    U_S = U_S.monic()
    if not (curve._fmonic % U_S).is_zero():
        raise ThetaError("U_S does not divide f")
    if gcd(U_S, U_S.derivative()).deg > 0:
        raise ThetaError("U_S has repeated roots")
    th = ThetaChar(curve, U_S, with_inf)
    if th.size != curve.g + 1:
        raise ThetaError(f"unbalanced side: |S| = {th.size}, expected {curve.g + 1}")
    return th


def theta_from_roots(curve: HyperellipticCurve, xs, with_inf: bool) -> ThetaChar:
    return theta_from_partition(curve, Poly.from_roots(curve.K, list(xs)), with_inf)


def twice_is_canonical(theta: ThetaChar) -> bool:
    """2 theta ~ K = (g - 1) g^1_2."""
    C = theta.curve
    K_div = Divisor.infinity(C, 2 * (C.g - 1))
    return ((theta.divisor * 2) - K_div).reduced_class().is_identity()


def is_ineffective(theta: ThetaChar) -> bool:
    if not twice_is_canonical(theta):
        raise ThetaError("2 theta is not canonical")
    return effective_in_class(theta.divisor) is None


def theta_polyhedron(theta: ThetaChar, P: Divisor) -> Divisor:
    """The unique effective divisor in |theta + P| (theta ineffective, deg P = 1)."""
    if P.degree != 1:
        raise DivisorError("P must be a single point")
    if effective_in_class(theta.divisor) is not None:
        raise ThetaError("theta is effective, the polyhedron is not unique")
    E = effective_in_class(theta.divisor + P)
    if E is None:
        raise DivisorError("no effective divisor in |theta + P|")
    return E


def all_theta_characteristics(curve: HyperellipticCurve, roots_f):
    """All 2^(2g) theta characteristics over a split f, one divisor per class.

    theta_T = sum_{x in T} (x, 0) + (g - 1 - |T|) inf for subsets T of the finite
    Weierstrass points; T and its complement give the same class.  Returns a
    list of (divisor, T).
    """
    from itertools import combinations

    C = curve
    pts = list(roots_f)
    out = []
    seen = set()
    for size in range(len(pts) + 1):
        for T in combinations(pts, size):
            xs = list(T)
            blocks = [(Poly.from_roots(C.K, xs), Poly._raw(C.K, []), 1)] if xs else []
            D = Divisor(C, blocks, (C.g - 1) - size, check=False)
            key = D.reduced_class()
            if key in seen:
                continue
            seen.add(key)
            out.append((D, T))
    return out


# ---------------------------------------------------------- Riemann-Roch


@dataclass
class RRFunction:
    """(a(X) + Y b(X)) / s(X)."""

    a: Poly
    b: Poly
    s: Poly

    def numerator_at(self, x, y):
        return self.a(x) + y * self.b(x)


def _coeff_rows(polys_mod, modulus: Poly, n_rows: int):
    """Coefficient vectors (length n_rows) of each polynomial reduced mod ``modulus``."""
    out = []
    for p in polys_mod:
        r = p % modulus
        out.append(r.coeffs(n_rows))
    return out


def rr_basis(D: Divisor) -> List[RRFunction]:
    """Basis of L(D) = {h : div h + D >= 0} with h = (a + Y b)/s.

    Poles allowed by D are absorbed in the common denominator s; zeros required
    by negative coefficients become congruences on (a, b).  At a non-Weierstrass
    place with sheet V the order of a + Y b equals the order of a + V_k b as a
    polynomial (V_k the Hensel lift of V).  At a Weierstrass place a and Y b
    have orders of different parity, so they are constrained separately.
    """
    from .linalg import kernel

    C = D.curve
    K = C.K
    N = D.normalized()
    # group by support polynomial
    groups = {}
    order = []
    for U, V, n in N.blocks:
        key = repr(U)
        if key not in groups:
            groups[key] = [U, []]
            order.append(key)
        groups[key][1].append((V, n))
    s = Poly.const(K, 1)
    conds = []  # (kind, modulus, data)
    for key in order:
        U, items = groups[key]
        if (C.f % U).is_zero():
            n = sum(k for _, k in items)
            m = (n + 1) // 2 if n > 0 else 0
            s = s * U ** m
            k = 2 * m - n
            ka, kb = (k + 1) // 2, k // 2  # ceil(k/2), ceil((k-1)/2)
            if ka > 0:
                conds.append(("a", U ** ka, None))
            if kb > 0:
                conds.append(("b", U ** kb, None))
            continue
        both = sum(k for V, k in items if V is None)
        sheet = [(V, k) for V, k in items if V is not None]
        if not sheet:
            m = max(both, 0)
            s = s * U ** m
            k = m - both
            if k > 0:
                conds.append(("a", U ** k, None))
                conds.append(("b", U ** k, None))
            continue
        V0 = sheet[0][0]
        P = both + sum(k for V, k in sheet if V == V0)
        M = both + sum(k for V, k in sheet if V != V0)
        m = max(P, M, 0)
        s = s * U ** m
        kP, kM = m - P, m - M
        kk = max(kP, kM)
        if kk > 0:
            Vk = C.lift_sheet(U, V0, kk)
            if kP > 0:
                conds.append(("sheet", U ** kP, Vk))
            if kM > 0:
                conds.append(("sheet", U ** kM, -Vk))
    budget = D.n_inf + 2 * s.deg
    da = budget // 2 if budget >= 0 else -1
    db = (budget - 2 * C.g - 1) // 2 if budget - 2 * C.g - 1 >= 0 else -1
    na, nb = da + 1, db + 1
    nvar = na + nb
    if nvar == 0:
        return []
    unit = []
    for i in range(nvar):
        if i < na:
            unit.append((Poly._raw(K, [K.zero()] * i + [K.one()]), Poly._raw(K, [])))
        else:
            j = i - na
            unit.append((Poly._raw(K, []), Poly._raw(K, [K.zero()] * j + [K.one()])))
    rows = []
    for kind, mod, Vk in conds:
        cols = []
        for a, b in unit:
            if kind == "a":
                p = a
            elif kind == "b":
                p = b
            else:
                p = a + Vk * b
            cols.append((p % mod).coeffs(mod.deg))
        for r in range(mod.deg):
            rows.append([c[r] for c in cols])
    ker = kernel(rows, nvar, K.zero(), K.one()) if rows else kernel([], nvar, K.zero(), K.one())
    out = []
    for vec in ker:
        a = Poly(K, vec[:na])
        b = Poly(K, vec[na:])
        out.append(RRFunction(a, b, s))
    return out


def riemann_roch_expected(D: Divisor) -> Optional[int]:
    g = D.curve.g
    if D.degree >= 2 * g - 1:
        return D.degree - g + 1
    return None


# ---------------------------------------------------------------- pencils


def divisor_of_numerator(C: HyperellipticCurve, a: Poly, b: Poly) -> Divisor:
    """Affine zero divisor of a(X) + Y b(X) (not both zero)."""
    K = C.K
    if b.is_zero():
        if a.deg <= 0:
            return Divisor(C, [], 0)
        return Divisor(C, [(q, None, k) for q, k in squarefree_decomposition(a)], 0, check=False)
    if a.is_zero():
        c = b.monic()
        blocks = [(q, None, k) for q, k in squarefree_decomposition(c)] if c.deg > 0 else []
        blocks.append((C._fmonic, Poly._raw(K, []), 1))
        return Divisor(C, blocks, 0, check=False)
    c = gcd(a, b)
    blocks = [(q, None, k) for q, k in squarefree_decomposition(c)] if c.deg > 0 else []
    a1, b1 = a.exact_div(c), b.exact_div(c)
    norm = a1 * a1 - C.f * b1 * b1
    for q, k in squarefree_decomposition(norm):
        w = gcd(q, C._fmonic)
        if w.deg > 0:
            blocks.append((w, Poly._raw(K, []), k))
        rest = q.exact_div(w).monic()
        if rest.deg > 0:
            _, inv, _ = xgcd_monic(b1, rest)
            blocks.append((rest, (-a1 * inv) % rest, k))
    return Divisor(C, blocks, 0, check=False)


def sheet_counts(N: Divisor):
    """Per support polynomial of a normalized divisor: (U, V0, P, M, weierstrass).

    P and M count the points on the sheets V0 and -V0 (V0 None when only
    symmetric data is present, then P == M).
    """
    C = N.curve
    out = {}
    order = []
    for U, V, n in N.blocks:
        key = repr(U)
        if key not in out:
            out[key] = [U, None, 0, 0, (C.f % U).is_zero()]
            order.append(key)
        e = out[key]
        if e[4]:
            e[2] += n
            e[3] += n
        elif V is None:
            e[2] += n
            e[3] += n
        elif e[1] is None or V == e[1]:
            if e[1] is None:
                e[1] = V
            e[2] += n
        else:
            e[3] += n
    return [tuple(out[k]) for k in order]


def positive_part(D: Divisor) -> Divisor:
    C = D.curve
    N = D.normalized()
    blocks = []
    for U, V0, P, M, w in sheet_counts(N):
        if w:
            # W blocks were normalized with their full multiplicity
            tot = sum(n for u, v, n in N.blocks if u == U)
            if tot > 0:
                blocks.append((U, Poly._raw(C.K, []), tot))
            continue
        P, M = max(P, 0), max(M, 0)
        m = min(P, M)
        if m:
            blocks.append((U, None, m))
        if P > m:
            blocks.append((U, V0, P - m))
        if M > m:
            blocks.append((U, (-V0) % U, M - m))
    return Divisor(C, blocks, max(N.n_inf, 0), check=False)


def divisor_min(A: Divisor, B: Divisor) -> Divisor:
    return A - positive_part(A - B)


class PencilError(ValueError):
    pass


class Pencil:
    """The map P -> [h1(P) : h2(P)] for a basis (h1, h2) of L(D), dim L(D) = 2."""

    def __init__(self, D: Divisor, basis: Optional[List[RRFunction]] = None, check=True):
        self.D = D
        self.curve = D.curve
        basis = basis if basis is not None else rr_basis(D)
        if len(basis) != 2:
            raise PencilError(f"dim L(D) = {len(basis)}, expected 2")
        self.h = basis
        if not basis[0].s == basis[1].s:
            raise PencilError("basis functions must share the denominator")
        self.s = basis[0].s
        if check:
            bp = self.base_locus()
            if bp.degree:
                raise PencilError(f"base point(s) detected: {bp}")

    @property
    def degree(self) -> int:
        return self.D.degree

    # values ------------------------------------------------------------

    def value_at_infinity(self):
        C = self.curve
        K = C.K
        best = None
        orders = []
        for h in self.h:
            oa = 2 * h.a.deg if not h.a.is_zero() else None
            ob = 2 * C.g + 1 + 2 * h.b.deg if not h.b.is_zero() else None
            orders.append((oa, ob))
            for o in (oa, ob):
                if o is not None and (best is None or o > best):
                    best = o
        vals = []
        for h, (oa, ob) in zip(self.h, orders):
            if best % 2 == 0:
                vals.append(h.a.lc() if oa == best else K.zero())
            else:
                vals.append(h.b.lc() if ob == best else K.zero())
        return tuple(vals)

    def value_at_block(self, U: Poly, V: Optional[Poly]):
        """[h1 : h2] at the points of the block, as residues modulo U.

        Returns polynomials (c1, c2) mod U; for deg U = 1 these are constants.
        Raises if the leading order is not uniform over the roots of U.
        """
        C = self.curve
        U = U.monic()
        w = (C.f % U).is_zero()
        kmax = self.D.degree + 2 * self.s.deg + 2
        digs = []
        if w:
            for h in self.h:
                da = _u_digits(h.a, U, kmax)
                db = _u_digits(h.b, U, kmax)
                terms = {}
                for j, c in enumerate(da):
                    if not c.is_zero():
                        terms[2 * j] = c
                        break
                for j, c in enumerate(db):
                    if not c.is_zero():
                        terms[2 * j + 1] = c
                        break
                digs.append(terms)
        else:
            Vk = C.lift_sheet(U, V, kmax)
            for h in self.h:
                num = (h.a + Vk * h.b) % (U ** kmax)
                dd = _u_digits(num, U, kmax)
                terms = {}
                for j, c in enumerate(dd):
                    if not c.is_zero():
                        terms[j] = c
                        break
                digs.append(terms)
        allord = [o for t in digs for o in t]
        if not allord:
            raise PencilError("both numerators vanish to high order")
        o = min(allord)
        zero = Poly._raw(C.K, [])
        vals = [t.get(o, zero) for t in digs]
        for c in vals:
            if not c.is_zero() and gcd(c, U).deg > 0:
                raise PencilError("leading order is not uniform on the block")
        return tuple(vals)

    def value_at_point(self, P):
        """P is 'inf' or a rational affine point (x, y)."""
        if P == "inf":
            return self.value_at_infinity()
        x, y = P
        K = self.curve.K
        c1, c2 = self.value_at_block(Poly(K, [-x, 1]), Poly.const(K, y))
        return (c1(K.zero()) if c1.deg >= 0 else K.zero(), c2(K.zero()) if c2.deg >= 0 else K.zero())

    def value_form(self, U: Poly, V: Optional[Poly]):
        """Binary form of degree deg U in (l0, l1) vanishing at the values on the block."""
        from .poly import Form, interpolate, poly_resultant

        K = self.curve.K
        c1, c2 = self.value_at_block(U, V)
        e = U.deg
        xs = [K(i) for i in range(e + 1)]
        ys = [poly_resultant(U.monic(), c2 * t - c1) for t in xs]
        p = interpolate(K, xs, ys)
        return Form.from_poly(p, e)

    # fibers ------------------------------------------------------------

    def fiber(self, lam) -> Divisor:
        """Effective divisor of degree deg D over [lam0 : lam1]."""
        C = self.curve
        l0, l1 = lam
        h1, h2 = self.h
        a = h1.a * l1 - h2.a * l0
        b = h1.b * l1 - h2.b * l0
        Z = divisor_of_numerator(C, a, b)
        S = Divisor(C, [(q, None, k) for q, k in squarefree_decomposition(self.s)], 0, check=False) \
            if self.s.deg > 0 else Divisor(C, [], 0)
        E = (self.D + Z - S).normalized()
        E.n_inf = 0
        E.n_inf = self.D.degree - E.degree
        return E

    def base_locus(self) -> Divisor:
        K = self.curve.K
        F0 = self.fiber((K.one(), K.zero()))
        F1 = self.fiber((K.zero(), K.one()))
        return divisor_min(F0, F1).normalized()


def _u_digits(p: Poly, U: Poly, k: int):
    out = []
    for _ in range(k):
        if p.is_zero():
            out.append(p)
            continue
        p, r = p.divmod(U)
        out.append(r)
    return out


# ------------------------------------------------------ model of C(R)


class HyperellipticModel(HyperellipticCurve):
    """Odd model of C(R): X = u1 / (u0 - s1 u1) sends the Weierstrass root s1 to inf.

    On F = 0 the function Y = 2 Fa(X) v + Fb(X) (v = v0/v1) satisfies
    Y^2 = f(X) = Fb^2 - 4 Fa Fc, all forms taken at (u0, u1) = (s1 X + 1, X).
    """

    def __init__(self, corr, s1):
        K = corr.K
        self.corr = corr
        self.s1 = s1
        X = Poly.x(K)
        self.sub = (X * s1 + 1, X)
        self.FaX, self.FbX, self.FcX = (F.subs(*self.sub) for F in (corr.Fa, corr.Fb, corr.Fc))
        f = self.FbX * self.FbX - self.FaX * self.FcX * 4
        super().__init__(f)
        self.rX = [F.subs(*self.sub) for F in corr.r_forms]
        self.U_delta = corr.Pz.subs(*self.sub).monic()
        self.U_deltap = corr.Pzp.subs(*self.sub).monic()

    # transport --------------------------------------------------------

    def X_of_u(self, u):
        u0, u1 = u
        den = u0 - self.s1 * u1
        if den == 0:
            return None
        return u1 / den

    def u_of_X(self, X):
        if X is None:
            return (self.s1, self.K.one())
        return (self.s1 * X + 1, X)

    def point_of_uv(self, u, v):
        """(X, Y) or 'inf' for a point (u, v) of C(R)."""
        X = self.X_of_u(u)
        if X is None:
            return "inf"
        v0, v1 = v
        if v1 != 0:
            Y = (self.FaX(X) * v0 * 2 + self.FbX(X) * v1) / v1
        else:
            Y = -(self.FbX(X) * v0 + self.FcX(X) * v1 * 2) / v0
        if not self.on_curve(X, Y):
            raise DivisorError("point is not on C(R)")
        return (X, Y)

    def uv_of_point(self, P):
        if P == "inf":
            u = self.u_of_X(None)
            c = self.corr
            return u, (-c.Fb(*u), c.Fa(*u) * 2)
        X, Y = P
        u = self.u_of_X(X)
        a, b = self.FaX(X), self.FbX(X)
        if a != 0:
            v = (Y - b, a * 2)
        else:
            v = (-self.FcX(X) * 2, Y + b)
        return u, v

    def point_divisor(self, u, v, n=1) -> Divisor:
        P = self.point_of_uv(u, v)
        if P == "inf":
            return Divisor.infinity(self, n)
        return Divisor.point(self, P[0], P[1], n)

    def fiber_block(self, form, v) -> Divisor:
        """Points (u, v) with form(u) = 0 and a constant v = (v0, v1)."""
        U = form.subs(*self.sub)
        n_inf = form.n - U.deg
        v0, v1 = v
        if v1 != 0:
            V = (self.FaX * v0 * 2 + self.FbX * v1) * (self.K.one() / v1)
        else:
            V = -(self.FbX * v0 + self.FcX * v1 * 2) * (self.K.one() / v0)
        # a root at u = s1 is the Weierstrass point at infinity, the only point
        # of C(R) over s1; the line of constant v meets C(R) transversally there
        return Divisor(self, [(U, V, 1)], n_inf)

    def weierstrass_block(self, form) -> Divisor:
        U = form.subs(*self.sub)
        n_inf = form.n - U.deg
        return Divisor(self, [(U, Poly._raw(self.K, []), 1)], n_inf)

    # distinguished data -------------------------------------------------

    @property
    def m(self) -> Divisor:
        return self.point_divisor(*self.corr.m_point)

    @property
    def n(self) -> Divisor:
        return self.point_divisor(*self.corr.n_point)

    def theta_R(self) -> ThetaChar:
        """theta(R) from the Delta_H side (which contains s1, hence inf)."""
        return theta_from_partition(self, self.U_delta, True)

    def g12(self) -> Divisor:
        return Divisor.infinity(self, 2)

    def fiber_x(self) -> Divisor:
        """sum [x_i, x]: the points over the roots of A with v = v_x."""
        return self.fiber_block(self.corr.fiber_x, self.corr.v_x)

    def fiber_y(self) -> Divisor:
        return self.fiber_block(self.corr.fiber_y, self.corr.v_y)


def extract_model(corr) -> HyperellipticModel:
    if corr.anchor is None:
        corr.choose_anchor()
    M = HyperellipticModel(corr, corr.anchor)
    if M.f.deg != 2 * corr.d - 1:
        raise DivisorError("odd model has the wrong degree")
    if gcd(M.f, M.f.derivative()).deg > 0:
        raise DivisorError("odd model is singular")
    if M.U_delta.deg != M.g or M.U_deltap.deg != M.g + 1:
        raise DivisorError("partition sizes are not (d, d)")
    if not (M.U_delta * M.U_deltap) == M._fmonic:
        raise DivisorError("partition does not cover the branch locus")
    return M
