"""Two-pointed spin hyperelliptic tuples (C, theta, m, n) on an odd model."""

from __future__ import annotations

from dataclasses import dataclass

from .jacobian import (Divisor, HyperellipticCurve, ThetaChar, effective_in_class, is_ineffective,
                       theta_from_partition)
from .poly import Poly


class TupleError(ValueError):
    pass


@dataclass
class SpinTuple:
    curve: HyperellipticCurve
    theta: ThetaChar
    m: tuple  # affine point (x, y)
    n: tuple

    @property
    def g(self) -> int:
        return self.curve.g

    @property
    def K(self):
        return self.curve.K

    def point(self, P) -> Divisor:
        return Divisor.point(self.curve, P[0], P[1])

    @property
    def m_div(self) -> Divisor:
        return self.point(self.m)

    @property
    def n_div(self) -> Divisor:
        return self.point(self.n)

    def validate(self):
        """Raise TupleError unless theta is ineffective and m, n are general."""
        C = self.curve
        for P in (self.m, self.n):
            if not C.on_curve(*P):
                raise TupleError("marked point not on the curve")
            if P[1] == 0:
                raise TupleError("marked point is a Weierstrass point")
        if self.m == self.n:
            raise TupleError("marked points coincide")
        if self.m[0] == self.n[0]:
            raise TupleError("m + n is a g^1_2 divisor")
        if not is_ineffective(self.theta):
            raise TupleError("theta is effective")
        return self

    def polyhedron(self, P) -> Divisor:
        E = effective_in_class(self.theta.divisor + self.point(P))
        if E is None:
            raise TupleError("empty |theta + P|")
        return E

    # JSON ---------------------------------------------------------------

    def to_json(self):
        K = self.K
        enc = K.to_json
        S, T = self.theta, self.theta.complement()
        return {
            "field": K.descriptor(),
            "g": self.g,
            "f": [enc(c) for c in self.curve.f.coeffs(self.curve.f.deg + 1)],
            "partition": [
                {"poly": [enc(c) for c in S.U_S.coeffs(S.U_S.deg + 1)], "inf": S.with_inf},
                {"poly": [enc(c) for c in T.U_S.coeffs(T.U_S.deg + 1)], "inf": T.with_inf},
            ],
            "m": {"x": enc(self.m[0]), "y": enc(self.m[1])},
            "n": {"x": enc(self.n[0]), "y": enc(self.n[1])},
        }

    @classmethod
    def from_json(cls, K, obj):
        dec = K.from_json
        f = Poly(K, [dec(c) for c in obj["f"]])
        C = HyperellipticCurve(f)
        side = obj["partition"][0]
        theta = theta_from_partition(C, Poly(K, [dec(c) for c in side["poly"]]), bool(side["inf"]))
        m = (dec(obj["m"]["x"]), dec(obj["m"]["y"]))
        n = (dec(obj["n"]["x"]), dec(obj["n"]["y"]))
        if int(obj.get("g", C.g)) != C.g:
            raise TupleError("genus does not match f")
        return cls(C, theta, m, n)
