"""Exact base fields: prime fields F_p and towers of quadratic extensions of Q.

Elements are small immutable objects with operator overloading.  Mixing an
element with a Python ``int`` or ``Fraction`` coerces the number into the
element's field; elements of a lower tower level are lifted automatically.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import isqrt

from sympy import isprime
from sympy.ntheory import sqrt_mod

DEFAULT_TOWER_DEPTH = 3


class FieldError(ValueError):
    pass


class TowerDepthError(FieldError):
    pass


class Field:
    """Common interface of the two backends."""

    characteristic = 0

    def __call__(self, x):
        return self.coerce(x)

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def random_element(self, rng: random.Random, height: int):
        """Integer in [-height, height], mapped into the field."""
        return self.coerce(rng.randint(-height, height))

    def random_nonzero(self, rng: random.Random, height: int):
        if height < 1:
            raise FieldError("height bound must be positive")
        while True:
            a = self.random_element(rng, height)
            if a != 0:
                return a

    def contains(self, other: "Field") -> bool:
        return other == self


# ---------------------------------------------------------------- prime fields


class PrimeField(Field):
    def __init__(self, p: int):
        if p == 2 or not isprime(p):
            raise FieldError(f"modulus must be an odd prime, got {p}")
        self.p = p
        self.characteristic = p

    def coerce(self, x):
        if isinstance(x, FpElement):
            if x.field is not self and x.field.p != self.p:
                raise FieldError("mixing different prime fields")
            return x
        if isinstance(x, Fraction):
            return FpElement(self, x.numerator * pow(x.denominator, -1, self.p))
        if isinstance(x, int):
            return FpElement(self, x)
        raise TypeError(f"cannot coerce {x!r} into F_{self.p}")

    def is_square(self, a) -> bool:
        a = self.coerce(a)
        return a.v == 0 or pow(a.v, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, a):
        """A square root of ``a`` in the field, or None."""
        a = self.coerce(a)
        if a.v == 0:
            return a
        r = sqrt_mod(a.v, self.p)
        if r is None:
            return None
        return FpElement(self, min(r, self.p - r))

    def random_element(self, rng, height=None):
        if height is None:
            return FpElement(self, rng.randrange(self.p))
        return FpElement(self, rng.randint(-height, height))

    def to_json(self, a):
        return str(self.coerce(a).v)

    def from_json(self, s):
        return FpElement(self, int(s))

    def descriptor(self) -> str:
        return f"fp:{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("fp", self.p))

    def __repr__(self):
        return f"F_{self.p}"


class FpElement:
    __slots__ = ("field", "v")

    def __init__(self, field: PrimeField, v: int):
        self.field = field
        self.v = v % field.p

    def _other(self, o):
        if isinstance(o, FpElement):
            return o.v
        if isinstance(o, int):
            return o
        if isinstance(o, Fraction):
            return self.field.coerce(o).v
        return NotImplemented

    def __add__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return FpElement(self.field, self.v + o)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return FpElement(self.field, self.v - o)

    def __rsub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return FpElement(self.field, o - self.v)

    def __mul__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return FpElement(self.field, self.v * o)

    __rmul__ = __mul__

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return FpElement(self.field, pow(self.v, -1, self.field.p))

    def __truediv__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        o %= self.field.p
        if o == 0:
            raise ZeroDivisionError("division by 0 in F_p")
        return FpElement(self.field, self.v * pow(o, -1, self.field.p))

    def __rtruediv__(self, o):
        return self.field.coerce(o) / self

    def __neg__(self):
        return FpElement(self.field, -self.v)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpElement(self.field, pow(self.v, e, self.field.p))

    def __eq__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.field.p == 0

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}"


# ------------------------------------------------------- rational towers


class RationalTower(Field):
    """Q(r_1, ..., r_k) with r_i^2 = c_i, c_i an element of the previous level.

    Level 0 is Q itself.  An element of level k is a pair (a, b) meaning
    a + b*r_k with a, b in level k-1.
    """

    def __init__(self, parent: "RationalTower | None" = None, radicand=None, max_depth=DEFAULT_TOWER_DEPTH):
        self.parent = parent
        self.max_depth = max_depth
        if parent is None:
            self.depth = 0
            self.radicand = None
        else:
            self.depth = parent.depth + 1
            self.radicand = parent.coerce(radicand)

    # tower bookkeeping

    def levels(self):
        out = []
        f = self
        while f is not None:
            out.append(f)
            f = f.parent
        return out[::-1]

    def radicands(self):
        return [f.radicand for f in self.levels()[1:]]

    def contains(self, other):
        f = self
        while f is not None:
            if f is other:
                return True
            f = f.parent
        return False

    def root(self):
        """The generator r_k of the top level."""
        if self.depth == 0:
            raise FieldError("Q has no adjoined root")
        return TowerElement(self, self.parent.zero(), self.parent.one())

    def coerce(self, x):
        if self.depth == 0:
            if isinstance(x, QQElement):
                return x
            if isinstance(x, (int, Fraction)):
                return QQElement(self, Fraction(x))
            if isinstance(x, str):
                return QQElement(self, Fraction(x))
            raise TypeError(f"cannot coerce {x!r} into Q")
        if isinstance(x, TowerElement) and x.field is self:
            return x
        if isinstance(x, (TowerElement, QQElement)) and not self.contains(x.field):
            raise FieldError("element belongs to an unrelated tower")
        return TowerElement(self, self.parent.coerce(x), self.parent.zero())

    def is_square(self, a) -> bool:
        return self.sqrt(a) is not None

    def sqrt(self, a):
        a = self.coerce(a)
        if self.depth == 0:
            q = a.q
            if q < 0:
                return None
            n, d = q.numerator, q.denominator
            rn, rd = isqrt(n), isqrt(d)
            if rn * rn == n and rd * rd == d:
                return QQElement(self, Fraction(rn, rd))
            return None
        par = self.parent
        c = self.radicand
        x, y = a.a, a.b
        if y == 0:
            s = par.sqrt(x)
            if s is not None:
                return self.coerce(s)
            t = par.sqrt(x / c)
            if t is not None:
                return TowerElement(self, par.zero(), t)
            return None
        n = par.sqrt(x * x - y * y * c)
        if n is None:
            return None
        for cand in ((x + n) / 2, (x - n) / 2):
            u = par.sqrt(cand)
            if u is not None and u != 0:
                return TowerElement(self, u, y / (2 * u))
        return None

    def random_element(self, rng, height):
        return self.coerce(rng.randint(-height, height))

    # serialization: sum of terms "c" or "c*r1*r3"

    def _monomials(self, a):
        """Expand into {tuple of root indices: Fraction}."""
        a = self.coerce(a)
        if self.depth == 0:
            return {(): a.q}
        out = dict(self.parent._monomials(a.a))
        for key, v in self.parent._monomials(a.b).items():
            out[key + (self.depth,)] = out.get(key + (self.depth,), 0) + v
        return {k: v for k, v in out.items() if v != 0}

    def to_json(self, a):
        terms = self._monomials(a)
        if not terms:
            return "0"
        parts = []
        for key in sorted(terms, key=lambda k: (len(k), k)):
            tag = "".join(f"*r{i}" for i in key)
            parts.append(f"{terms[key]}{tag}")
        return " + ".join(parts)

    def from_json(self, s: str):
        roots = {f.depth: f.root() for f in self.levels()[1:]}
        total = self.zero()
        for part in s.split(" + "):
            bits = part.split("*")
            term = self.coerce(Fraction(bits[0]))
            for tag in bits[1:]:
                term = term * roots[int(tag[1:])]
            total = total + term
        return total

    def descriptor(self):
        return "qq"

    def __repr__(self):
        if self.depth == 0:
            return "QQ"
        rads = ", ".join(f"sqrt({self.parent.to_json(c) if False else c})" for c in self.radicands())
        return f"QQ({rads})"


class QQElement:
    __slots__ = ("field", "q")

    def __init__(self, field, q: Fraction):
        self.field = field
        self.q = q

    def _lift(self, o):
        if isinstance(o, QQElement):
            return o.q
        if isinstance(o, (int, Fraction)):
            return o
        return NotImplemented

    def __add__(self, o):
        if isinstance(o, TowerElement):
            return o + self
        v = self._lift(o)
        return v if v is NotImplemented else QQElement(self.field, self.q + v)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, TowerElement):
            return (-o) + self
        v = self._lift(o)
        return v if v is NotImplemented else QQElement(self.field, self.q - v)

    def __rsub__(self, o):
        v = self._lift(o)
        return v if v is NotImplemented else QQElement(self.field, v - self.q)

    def __mul__(self, o):
        if isinstance(o, TowerElement):
            return o * self
        v = self._lift(o)
        return v if v is NotImplemented else QQElement(self.field, self.q * v)

    __rmul__ = __mul__

    def inverse(self):
        if self.q == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return QQElement(self.field, 1 / self.q)

    def __truediv__(self, o):
        if isinstance(o, TowerElement):
            return o.inverse() * self
        v = self._lift(o)
        if v is NotImplemented:
            return v
        if v == 0:
            raise ZeroDivisionError("division by 0 in Q")
        return QQElement(self.field, self.q / v)

    def __rtruediv__(self, o):
        return self.field.coerce(o) / self

    def __neg__(self):
        return QQElement(self.field, -self.q)

    def __pow__(self, e):
        return QQElement(self.field, self.q ** e)

    def __eq__(self, o):
        if isinstance(o, TowerElement):
            return o == self
        v = self._lift(o)
        return False if v is NotImplemented else self.q == v

    def __hash__(self):
        return hash(self.q)

    def __bool__(self):
        return self.q != 0

    def __repr__(self):
        return str(self.q)


class TowerElement:
    __slots__ = ("field", "a", "b")

    def __init__(self, field: RationalTower, a, b):
        self.field = field
        self.a = a
        self.b = b

    def _co(self, o):
        f = self.field
        if isinstance(o, TowerElement):
            if o.field is f:
                return o
            if f.contains(o.field):
                return f.coerce(o)
            if o.field.contains(f):
                return None
            raise FieldError("elements of unrelated towers")
        if isinstance(o, (QQElement, int, Fraction)):
            return f.coerce(o)
        return NotImplemented

    def __add__(self, o):
        c = self._co(o)
        if c is None:
            return o + self
        if c is NotImplemented:
            return c
        return TowerElement(self.field, self.a + c.a, self.b + c.b)

    __radd__ = __add__

    def __sub__(self, o):
        c = self._co(o)
        if c is None:
            return -(o - self)
        if c is NotImplemented:
            return c
        return TowerElement(self.field, self.a - c.a, self.b - c.b)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        c = self._co(o)
        if c is None:
            return o * self
        if c is NotImplemented:
            return c
        a, b, x, y = self.a, self.b, c.a, c.b
        if b == 0:
            return TowerElement(self.field, a * x, a * y)
        if y == 0:
            return TowerElement(self.field, a * x, b * x)
        return TowerElement(self.field, a * x + b * y * self.field.radicand, a * y + b * x)

    __rmul__ = __mul__

    def conjugate(self):
        return TowerElement(self.field, self.a, -self.b)

    def inverse(self):
        n = self.a * self.a - self.b * self.b * self.field.radicand
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in tower")
        ni = n.inverse()
        return TowerElement(self.field, self.a * ni, -(self.b * ni))

    def __truediv__(self, o):
        c = self._co(o)
        if c is None:
            return o.field.coerce(self) / o
        if c is NotImplemented:
            return c
        if c.b == 0:
            return TowerElement(self.field, self.a / c.a, self.b / c.a)
        return self * c.inverse()

    def __rtruediv__(self, o):
        return self.field.coerce(o) / self

    def __neg__(self):
        return TowerElement(self.field, -self.a, -self.b)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, o):
        try:
            c = self._co(o)
        except FieldError:
            return False
        if c is None:
            return o == self
        if c is NotImplemented:
            return False
        return self.a == c.a and self.b == c.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return self.field.to_json(self)


QQ = RationalTower()


def rationals(max_depth: int = DEFAULT_TOWER_DEPTH) -> RationalTower:
    return RationalTower(max_depth=max_depth)


def adjoin_sqrt(field: Field, radicand):
    """Return ``(field', root)`` with root**2 == radicand in field'.

    If the radicand already has a square root the field is returned unchanged.
    Over F_p a nonsquare radicand raises FieldError (no F_p towers).
    """
    radicand = field.coerce(radicand)
    if radicand == 0:
        raise FieldError("radicand must be nonzero")
    r = field.sqrt(radicand)
    if r is not None:
        return field, r
    if isinstance(field, PrimeField):
        raise FieldError(f"{radicand} is not a square in F_{field.p}")
    if field.depth >= field.max_depth:
        raise TowerDepthError(f"tower depth limit {field.max_depth} reached")
    ext = RationalTower(field, radicand, max_depth=field.max_depth)
    return ext, ext.root()


def common_field(*fields: Field) -> Field:
    """The largest field of a chain (towers must be nested)."""
    best = fields[0]
    for f in fields[1:]:
        if best.contains(f):
            continue
        if f.contains(best):
            best = f
        else:
            raise FieldError("fields are not nested")
    return best


def parse_field(descriptor: str, max_depth: int = DEFAULT_TOWER_DEPTH) -> Field:
    if descriptor == "qq":
        return rationals(max_depth)
    if descriptor.startswith("fp:"):
        return PrimeField(int(descriptor[3:]))
    raise FieldError(f"unknown field descriptor {descriptor!r}")
