"""Dense univariate polynomials, binary forms and polynomials in v over K[u].

Coefficient lists are stored low degree first.  All arithmetic is exact and
generic over the field backends of :mod:`spinlab.field`.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .field import Field, FieldError, PrimeField, common_field


def _bigger(f: Field, g: Field) -> Field:
    if f is g:
        return f
    return common_field(f, g)


class Poly:
    """Univariate polynomial with coefficients in ``K`` (low degree first)."""

    __slots__ = ("K", "c")

    def __init__(self, K: Field, coeffs: Iterable = ()):
        self.K = K
        c = [K.coerce(a) if not _is_elt(a) else a for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = c

    # construction helpers

    @classmethod
    def _raw(cls, K, c):
        p = cls.__new__(cls)
        while c and not c[-1]:
            c.pop()
        p.K = K
        p.c = c
        return p

    @classmethod
    def const(cls, K, a):
        return cls(K, [a])

    @classmethod
    def x(cls, K):
        return cls._raw(K, [K.zero(), K.one()])

    @classmethod
    def from_roots(cls, K, roots):
        out = cls.const(K, 1)
        for r in roots:
            out = out * cls._raw(K, [-K.coerce(r) if not _is_elt(r) else -r, K.one()])
        return out

    # basic queries

    @property
    def deg(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lc(self):
        return self.c[-1] if self.c else self.K.zero()

    def __getitem__(self, i):
        if 0 <= i < len(self.c):
            return self.c[i]
        return self.K.zero()

    def coeffs(self, n=None):
        """Coefficient list padded to length ``n``."""
        if n is None:
            return list(self.c)
        return list(self.c) + [self.K.zero()] * (n - len(self.c))

    def __call__(self, a):
        acc = self.K.zero()
        for coef in reversed(self.c):
            acc = acc * a + coef
        return acc

    def __bool__(self):
        return bool(self.c)

    def __len__(self):
        return len(self.c)

    # arithmetic

    def _co(self, o):
        if isinstance(o, Poly):
            return o
        if isinstance(o, (BiPoly, Residue)):
            return NotImplemented
        return Poly._raw(self.K, [self.K.coerce(o)] if not _is_elt(o) else [o])

    def __add__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return o
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return Poly._raw(_bigger(self.K, o.K), out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.K, [-a for a in self.c])

    def __sub__(self, o):
        o = self._co(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, Poly):
            if isinstance(o, (BiPoly, Residue)):
                return NotImplemented
            if o == 0:
                return Poly._raw(self.K, [])
            return Poly._raw(self.K, [a * o for a in self.c])
        a, b = self.c, o.c
        if not a or not b:
            return Poly._raw(self.K, [])
        out = [None] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                t = x * y
                k = i + j
                out[k] = t if out[k] is None else out[k] + t
        z = _bigger(self.K, o.K).zero()
        return Poly._raw(_bigger(self.K, o.K), [z if v is None else v for v in out])

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Poly.const(self.K, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, a):
        return self * a

    def divmod(self, o: "Poly"):
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        K = _bigger(self.K, o.K)
        r = list(self.c)
        dq = len(r) - len(o.c)
        if dq < 0:
            return Poly._raw(K, []), Poly._raw(K, r)
        inv = o.c[-1].inverse() if hasattr(o.c[-1], "inverse") else 1 / o.c[-1]
        q = [K.zero()] * (dq + 1)
        oc = o.c
        n = len(oc) - 1
        for k in range(dq, -1, -1):
            coef = r[k + n]
            if coef:
                t = coef * inv
                q[k] = t
                for j in range(n):
                    r[k + j] = r[k + j] - t * oc[j]
            r[k + n] = K.zero()
        return Poly._raw(K, q), Poly._raw(K, r[:n])

    def __floordiv__(self, o):
        return self.divmod(self._co(o))[0]

    def __mod__(self, o):
        return self.divmod(self._co(o))[1]

    def exact_div(self, o):
        q, r = self.divmod(o)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def __truediv__(self, a):
        """Division by a scalar."""
        if isinstance(a, Poly):
            return self.exact_div(a)
        inv = 1 / self.K.coerce(a) if not _is_elt(a) else a.inverse()
        return self * inv

    def __eq__(self, o):
        if isinstance(o, Poly):
            return len(self.c) == len(o.c) and all(x == y for x, y in zip(self.c, o.c))
        if _is_scalar(o):
            return self == self._co(o)
        return False

    def __hash__(self):
        return hash(tuple(self.c))

    def monic(self):
        if self.is_zero():
            return self
        return self * self.lc().inverse()

    def derivative(self):
        return Poly._raw(self.K, [a * i for i, a in enumerate(self.c)][1:])

    def compose(self, p: "Poly"):
        acc = Poly._raw(p.K, [])
        for coef in reversed(self.c):
            acc = acc * p + coef
        return acc

    def reverse(self, n=None):
        """x^n * self(1/x)."""
        if n is None:
            n = self.deg
        c = self.coeffs(n + 1)
        return Poly._raw(self.K, c[::-1])

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for i, a in enumerate(self.c):
            if a:
                terms.append(f"({a})" + ("" if i == 0 else f"*x^{i}"))
        return " + ".join(terms)


class Residue:
    """Element of K[x]/(m) with operator overloading."""

    __slots__ = ("p", "m")

    def __init__(self, p: Poly, m: Poly):
        self.p = p % m if p.deg >= m.deg else p
        self.m = m

    def _co(self, o):
        if isinstance(o, Residue):
            return o.p
        if isinstance(o, Poly):
            return o
        return Poly.const(self.m.K, o)

    def __add__(self, o):
        return Residue(self.p + self._co(o), self.m)

    __radd__ = __add__

    def __sub__(self, o):
        return Residue(self.p - self._co(o), self.m)

    def __rsub__(self, o):
        return Residue(self._co(o) - self.p, self.m)

    def __mul__(self, o):
        return Residue(self.p * self._co(o), self.m)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.p, self.m)

    def inverse(self):
        g, s, _ = xgcd(self.p, self.m)
        if g.deg != 0:
            raise ZeroDivisionError("residue is not invertible")
        return Residue(s * g.c[0].inverse(), self.m)

    def __truediv__(self, o):
        if isinstance(o, Residue):
            return self * o.inverse()
        if isinstance(o, Poly):
            return self * Residue(o, self.m).inverse()
        return Residue(self.p * (1 / self.m.K.coerce(o)), self.m)

    def __pow__(self, e):
        out = Residue(Poly.const(self.m.K, 1), self.m)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self):
        return self.p.is_zero()

    def __bool__(self):
        return not self.p.is_zero()

    def __eq__(self, o):
        if isinstance(o, Residue):
            return (self.p - o.p).is_zero()
        return (self.p - self._co(o)) % self.m == 0

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return f"[{self.p} mod {self.m}]"


def _is_elt(a) -> bool:
    return hasattr(a, "field") and not isinstance(a, (Poly, Residue))


def _is_scalar(a) -> bool:
    from fractions import Fraction

    return isinstance(a, (int, Fraction)) or _is_elt(a)


# ------------------------------------------------------------- gcd & friends


def gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def xgcd(a: Poly, b: Poly):
    """Return (g, s, t) with s*a + t*b = g (g not normalized)."""
    K = _bigger(a.K, b.K)
    r0, r1 = a, b
    s0, s1 = Poly.const(K, 1), Poly._raw(K, [])
    t0, t1 = Poly._raw(K, []), Poly.const(K, 1)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def xgcd_monic(a: Poly, b: Poly):
    g, s, t = xgcd(a, b)
    if g.is_zero():
        return g, s, t
    inv = g.lc().inverse()
    return g * inv, s * inv, t * inv


def lcm(a: Poly, b: Poly) -> Poly:
    return (a * b).exact_div(gcd(a, b)).monic()


def is_squarefree(p: Poly) -> bool:
    if p.deg <= 0:
        return True
    return gcd(p, p.derivative()).deg == 0


def squarefree_decomposition(p: Poly):
    """Yun's algorithm: list of (factor, multiplicity), factors monic coprime.

    Valid in characteristic zero or when deg p < characteristic.
    """
    out = []
    if p.deg <= 0:
        return out
    a = p.monic()
    b = a.derivative()
    c = gcd(a, b)
    w = a.exact_div(c)
    y = b.exact_div(c)
    z = y - w.derivative()
    i = 1
    while w.deg > 0:
        g = gcd(w, z)
        if g.deg > 0:
            out.append((g, i))
        w = w.exact_div(g)
        y = z.exact_div(g)
        z = y - w.derivative()
        i += 1
    return out


def power_mod(base: Poly, e: int, m: Poly) -> Poly:
    out = Poly.const(m.K, 1)
    base = base % m
    while e:
        if e & 1:
            out = (out * base) % m
        base = (base * base) % m
        e >>= 1
    return out


def poly_sqrt(p: Poly):
    """Exact square root of a polynomial, or None."""
    if p.is_zero():
        return p
    if p.deg % 2:
        return None
    K = p.K
    lead = K.sqrt(p.lc())
    if lead is None:
        return None
    n = p.deg // 2
    # Determine coefficients from the top down.
    r = [K.zero()] * (n + 1)
    r[n] = lead
    two_lead = 2 * lead
    for k in range(n - 1, -1, -1):
        # coefficient of x^(n+k) in r^2
        acc = p[n + k]
        for i in range(k + 1, n):
            j = n + k - i
            if k < j <= n:
                acc = acc - r[i] * r[j]
        r[k] = acc / two_lead
    s = Poly(K, r)
    return s if s * s == p else None


def crt_pair(r1: Poly, m1: Poly, r2: Poly, m2: Poly):
    """x = r1 mod m1, x = r2 mod m2 for coprime moduli."""
    g, s, t = xgcd_monic(m1, m2)
    if g.deg != 0:
        raise ArithmeticError("moduli not coprime")
    m = m1 * m2
    return (r1 * t * m2 + r2 * s * m1) % m, m


def interpolate(K, xs: Sequence, ys: Sequence) -> Poly:
    """Lagrange interpolation through (xs[i], ys[i])."""
    out = Poly._raw(K, [])
    n = len(xs)
    for i in range(n):
        num = Poly.const(K, 1)
        den = K.one()
        for j in range(n):
            if j != i:
                num = num * Poly._raw(K, [-xs[j], K.one()])
                den = den * (xs[i] - xs[j])
        out = out + num * (ys[i] / den)
    return out


# ------------------------------------------------------------- root finding


def roots(p: Poly):
    """Distinct roots of ``p`` lying in its coefficient field, sorted canonically.

    Degrees <= 2 are solved with square roots (works over every tower level);
    higher degrees use sympy factorization over F_p or Q (depth-0 fields).
    """
    K = p.K
    if p.deg <= 0:
        return []
    if p.deg == 1:
        return [-p[0] / p[1]]
    if p.deg == 2:
        a, b, c = p[2], p[1], p[0]
        s = K.sqrt(b * b - 4 * a * c)
        if s is None:
            return []
        r1, r2 = (-b + s) / (2 * a), (-b - s) / (2 * a)
        return [r1] if r1 == r2 else _sort_elts(K, [r1, r2])
    return _sympy_roots(p)


def _sort_elts(K, xs):
    if isinstance(K, PrimeField):
        return sorted(xs, key=lambda a: a.v)
    return sorted(xs, key=lambda a: K.to_json(a))


def _sympy_roots(p: Poly):
    import sympy

    K = p.K
    x = sympy.Symbol("x")
    if isinstance(K, PrimeField):
        sp = sympy.Poly([int(a.v) for a in reversed(p.c)], x, modulus=K.p)
        _, facs = sp.factor_list()
        out = set()
        for fac, _m in facs:
            if fac.degree() == 1:
                c = [int(v) % K.p for v in fac.all_coeffs()]
                out.add((-c[1] * pow(c[0], -1, K.p)) % K.p)
        return [K.coerce(v) for v in sorted(out)]
    if getattr(K, "depth", None) == 0:
        sp = sympy.Poly([sympy.Rational(a.q.numerator, a.q.denominator) for a in reversed(p.c)], x, domain="QQ")
        out = []
        for r in sympy.roots(sp, filter="Q").keys():
            r = sympy.Rational(r)
            out.append(K.coerce(__import__("fractions").Fraction(int(r.p), int(r.q))))
        return sorted(out, key=lambda a: a.q)
    # tower level: only the rational roots of factors over the base are found
    raise FieldError("root finding above degree 2 is unsupported in quadratic towers")


# ------------------------------------------------------------- binary forms


class Form:
    """Binary form sum c_i u0^i u1^(n-i) of formal degree n.

    Dehomogenizing at u1 = 1 gives the polynomial in u = u0/u1 with the same
    coefficient list; a drop of actual degree below n is a root at infinity.
    """

    __slots__ = ("K", "n", "c")

    def __init__(self, K, n: int, coeffs):
        self.K = K
        self.n = n
        c = [K.coerce(a) if not _is_elt(a) else a for a in coeffs]
        if len(c) > n + 1 and any(a != 0 for a in c[n + 1:]):
            raise ValueError("coefficients exceed the formal degree")
        self.c = (c + [K.zero()] * (n + 1))[: n + 1]

    @classmethod
    def from_poly(cls, p: Poly, n: int):
        return cls(p.K, n, p.coeffs(n + 1))

    def poly(self) -> Poly:
        return Poly(self.K, self.c)

    def is_zero(self):
        return all(a == 0 for a in self.c)

    def __add__(self, o):
        assert o.n == self.n
        return Form(_bigger(self.K, o.K), self.n, [a + b for a, b in zip(self.c, o.c)])

    def __sub__(self, o):
        assert o.n == self.n
        return Form(_bigger(self.K, o.K), self.n, [a - b for a, b in zip(self.c, o.c)])

    def __neg__(self):
        return Form(self.K, self.n, [-a for a in self.c])

    def __mul__(self, o):
        if isinstance(o, Form):
            p = self.poly() * o.poly()
            return Form.from_poly(p, self.n + o.n) if not p.is_zero() else Form(self.K, self.n + o.n, [])
        return Form(self.K, self.n, [a * o for a in self.c])

    __rmul__ = __mul__

    def times_u0(self):
        return Form(self.K, self.n + 1, [self.K.zero()] + self.c)

    def times_u1(self):
        return Form(self.K, self.n + 1, self.c + [self.K.zero()])

    def __call__(self, u0, u1):
        """Evaluate at a pair of scalars (or polynomials / residues)."""
        acc = None
        # Horner in u0 with powers of u1 accumulated.
        powers = [None] * (self.n + 1)
        p = 1
        for i in range(self.n + 1):
            powers[self.n - i] = p
            if i < self.n:
                p = p * u1
        for i, coef in enumerate(self.c):
            if not coef:
                continue
            term = powers[i] * coef
            term = term * (u0 ** i) if i else term
            acc = term if acc is None else acc + term
        if acc is None:
            return 0 * u0 if not _is_scalar(u0) else self.K.zero()
        return acc

    def subs(self, p0: Poly, p1: Poly) -> Poly:
        """Substitute polynomials for (u0, u1)."""
        K = _bigger(self.K, p0.K)
        out = Poly._raw(K, [])
        pw0 = [Poly.const(K, 1)]
        pw1 = [Poly.const(K, 1)]
        for _ in range(self.n):
            pw0.append(pw0[-1] * p0)
            pw1.append(pw1[-1] * p1)
        for i, coef in enumerate(self.c):
            if coef:
                out = out + pw0[i] * pw1[self.n - i] * coef
        return out

    def root_at_infinity(self) -> int:
        """Multiplicity of the root [1:0]."""
        k = 0
        for a in reversed(self.c):
            if a != 0:
                break
            k += 1
        return k

    def is_squarefree(self) -> bool:
        if self.is_zero():
            return False
        if self.root_at_infinity() > 1:
            return False
        return is_squarefree(self.poly())

    def proportional(self, o: "Form") -> bool:
        if self.n != o.n:
            return False
        piv = next((i for i, a in enumerate(self.c) if a != 0), None)
        if piv is None or o.c[piv] == 0:
            return False
        lam = o.c[piv] / self.c[piv]
        return all(b == a * lam for a, b in zip(self.c, o.c))

    def __eq__(self, o):
        return isinstance(o, Form) and self.n == o.n and all(a == b for a, b in zip(self.c, o.c))

    def __repr__(self):
        return f"Form(n={self.n}, {self.c})"


# ---------------------------------------------------- polynomials in v over K[u]


class BiPoly:
    """Polynomial in v whose coefficients are Polys in u: sum_j cols[j](u) v^j.

    ``dv`` is the formal degree in v (leading columns may vanish identically).
    """

    __slots__ = ("K", "cols", "dv")

    def __init__(self, K, cols: Sequence[Poly], dv=None):
        self.K = K
        self.cols = [c if isinstance(c, Poly) else Poly.const(K, c) for c in cols]
        self.dv = len(self.cols) - 1 if dv is None else dv
        while len(self.cols) < self.dv + 1:
            self.cols.append(Poly._raw(K, []))

    @classmethod
    def from_rows(cls, K, table):
        """table[i][j] = coefficient of u^i v^j."""
        dv = max(len(r) for r in table) - 1
        cols = [Poly(K, [table[i][j] if j < len(table[i]) else 0 for i in range(len(table))]) for j in range(dv + 1)]
        return cls(K, cols, dv)

    @property
    def du(self) -> int:
        return max((c.deg for c in self.cols), default=-1)

    def bidegree(self):
        dv = max((j for j, c in enumerate(self.cols) if not c.is_zero()), default=-1)
        return self.du, dv

    def coeff(self, i, j):
        return self.cols[j][i] if j < len(self.cols) else self.K.zero()

    def eval_u(self, a) -> Poly:
        return Poly(self.K, [c(a) for c in self.cols])

    def eval_v(self, b) -> Poly:
        out = Poly._raw(self.K, [])
        for c in reversed(self.cols):
            out = out * b + c if not out.is_zero() else c
        return out

    def __call__(self, a, b):
        return self.eval_u(a)(b)

    def diff_u(self):
        return BiPoly(self.K, [c.derivative() for c in self.cols], self.dv)

    def diff_v(self):
        return BiPoly(self.K, [c * j for j, c in enumerate(self.cols)][1:], max(self.dv - 1, 0))

    def __add__(self, o):
        n = max(self.dv, o.dv)
        a = self.cols + [Poly._raw(self.K, [])] * (n + 1 - len(self.cols))
        b = o.cols + [Poly._raw(self.K, [])] * (n + 1 - len(o.cols))
        return BiPoly(_bigger(self.K, o.K), [x + y for x, y in zip(a, b)], n)

    def __sub__(self, o):
        return self + o * (-1)

    def __mul__(self, o):
        if isinstance(o, BiPoly):
            n = self.dv + o.dv
            cols = [Poly._raw(self.K, []) for _ in range(n + 1)]
            for i, a in enumerate(self.cols):
                for j, b in enumerate(o.cols):
                    cols[i + j] = cols[i + j] + a * b
            return BiPoly(_bigger(self.K, o.K), cols, n)
        return BiPoly(self.K, [c * o for c in self.cols], self.dv)

    __rmul__ = __mul__

    def subs_u(self, p: Poly):
        return BiPoly(self.K, [c.compose(p) for c in self.cols], self.dv)

    def __eq__(self, o):
        if not isinstance(o, BiPoly):
            return False
        n = max(len(self.cols), len(o.cols))
        z = Poly._raw(self.K, [])
        a = self.cols + [z] * (n - len(self.cols))
        b = o.cols + [z] * (n - len(o.cols))
        return all(x == y for x, y in zip(a, b))

    def __repr__(self):
        return f"BiPoly(dv={self.dv}, {self.cols})"


def sylvester_det(f: Sequence, g: Sequence):
    """Resultant of two univariate coefficient lists (low first) of formal
    degrees len(f)-1 and len(g)-1, as the Sylvester determinant."""
    from .linalg import det

    m, n = len(f) - 1, len(g) - 1
    size = m + n
    if size == 0:
        return 1
    rows = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    zero = (fr + gr)[0] * 0
    for i in range(n):
        rows.append([zero] * i + fr + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gr + [zero] * (size - n - 1 - i))
    return det(rows)


def _sample_points(K, count, avoid=()):
    pts = []
    k = 0
    while len(pts) < count:
        a = K.coerce(k)
        if k and K.characteristic and k >= K.characteristic:
            raise FieldError("field too small for interpolation")
        if a not in avoid:
            pts.append(a)
        k += 1
    return pts


def resultant_v(f: BiPoly, g: BiPoly) -> Poly:
    """Res_v(f, g) with respect to the formal v-degrees, as a Poly in u.

    Computed by evaluation at enough points and interpolation.
    """
    if all(c.is_zero() for c in f.cols) or all(c.is_zero() for c in g.cols):
        raise ValueError("resultant_v needs nonzero inputs")
    K = _bigger(f.K, g.K)
    bound = f.dv * max(g.du, 0) + g.dv * max(f.du, 0)
    pts = _sample_points(K, bound + 1)
    vals = []
    for a in pts:
        fa = [c(a) for c in f.cols]
        ga = [c(a) for c in g.cols]
        r = sylvester_det(fa, ga)
        vals.append(K.coerce(r) if isinstance(r, int) else r)
    return interpolate(K, pts, vals)


def discriminant_v(f: BiPoly) -> Poly:
    """B^2 - 4AC for f = A v^2 + B v + C."""
    if f.dv != 2:
        raise ValueError("discriminant_v needs v-degree exactly 2")
    C, B, A = f.cols[0], f.cols[1], f.cols[2]
    if A.is_zero():
        raise ValueError("leading v-coefficient vanishes identically")
    return B * B - A * C * 4


def quad_resultant(a0, b0, c0, a1, b1, c1):
    """Resultant of a0 v0^2 + b0 v0 v1 + c0 v1^2 and a1 v0^2 + b1 v0 v1 + c1 v1^2."""
    return (a0 * c1 - a1 * c0) ** 2 - (a0 * b1 - a1 * b0) * (b0 * c1 - b1 * c0)


def poly_resultant(a: Poly, b: Poly):
    """Res(a, b) by the Euclidean algorithm."""
    K = _bigger(a.K, b.K)
    if a.is_zero() or b.is_zero():
        return K.zero()
    res = K.one()
    while b.deg > 0:
        r = a % b
        if r.is_zero():
            return K.zero()
        # Res(a, b) = (-1)^(deg a deg b) lc(b)^(deg a - deg r) Res(b, r)
        if a.deg % 2 and b.deg % 2:
            res = -res
        res = res * b.lc() ** (a.deg - r.deg)
        a, b = b, r
    # b constant
    return res * b.lc() ** a.deg
