"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A value at level N is a coordinate vector of length phi(N) in the power basis
1, z, ..., z^(phi(N)-1) of a primitive N-th root of unity z, reduced modulo
the N-th cyclotomic polynomial. Level 1 holds the rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational


def _polydiv_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + dn]
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _polydiv_exact(num, cyclotomic_poly(d))
    return tuple(num)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Coordinates of z^k for k = 0..n-1 at level n."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    cur = [1] + [0] * (deg - 1)
    rows = []
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


def totient(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class Cyclotomic:
    __slots__ = ("level", "coords")

    def __init__(self, level: int, coords):
        coords = tuple(_as_fraction(c) for c in coords)
        if len(coords) != totient(level):
            raise ValueError(f"level {level} needs {totient(level)} coordinates, got {len(coords)}")
        self.level = level
        self.coords = coords

    # -- constructors

    @classmethod
    def rational(cls, q, level: int = 1) -> "Cyclotomic":
        q = _as_fraction(q)
        return cls(level, (q,) + (Fraction(0),) * (totient(level) - 1))

    @classmethod
    def from_exponents(cls, level: int, terms) -> "Cyclotomic":
        """sum of c * z^k over (k, c) pairs; k taken modulo level."""
        table = _power_table(level)
        acc = [Fraction(0)] * totient(level)
        for k, c in terms:
            if not c:
                continue
            row = table[k % level]
            for i, r in enumerate(row):
                if r:
                    acc[i] += c * r
        return cls(level, acc)

    @classmethod
    def zeta(cls, level: int, k: int = 1) -> "Cyclotomic":
        return cls.from_exponents(level, [(k, 1)])

    @staticmethod
    def lift(x, level: int = 1) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x.to_level(math.lcm(x.level, level))
        return Cyclotomic.rational(x, level)

    # -- structure

    def to_level(self, level: int) -> "Cyclotomic":
        if level == self.level:
            return self
        if level % self.level:
            raise ValueError(f"cannot move level {self.level} to level {level}")
        step = level // self.level
        return Cyclotomic.from_exponents(level, ((k * step, c) for k, c in enumerate(self.coords)))

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coords[0]

    def is_integral(self) -> bool:
        """In Z[z]: the power basis is an integral basis since Phi_N is monic."""
        return all(c.denominator == 1 for c in self.coords)

    def conjugate(self) -> "Cyclotomic":
        n = self.level
        return Cyclotomic.from_exponents(n, ((-k, c) for k, c in enumerate(self.coords)))

    def _pair(self, other) -> tuple["Cyclotomic", "Cyclotomic"]:
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other, self.level)
        if other.level == self.level:
            return self, other
        n = math.lcm(self.level, other.level)
        return self.to_level(n), other.to_level(n)

    # -- arithmetic

    def __add__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return Cyclotomic(a.level, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.level, [-x for x in self.coords])

    def __sub__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return Cyclotomic(a.level, [x - y for x, y in zip(a.coords, b.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.level, [x * other for x in self.coords])
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        n = a.level
        prod: dict[int, Fraction] = {}
        for i, x in enumerate(a.coords):
            if not x:
                continue
            for j, y in enumerate(b.coords):
                if y:
                    k = (i + j) % n
                    prod[k] = prod.get(k, 0) + x * y
        return Cyclotomic.from_exponents(n, prod.items())

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Cyclotomic):
            other = other.to_fraction()
        q = _as_fraction(other)
        return Cyclotomic(self.level, [x / q for x in self.coords])

    def __bool__(self) -> bool:
        return any(self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Cyclotomic, int, Fraction)):
            return NotImplemented
        a, b = self._pair(other)
        return a.coords == b.coords

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        raise TypeError("non-rational cyclotomic values are not hashable")

    def __repr__(self) -> str:
        if self.is_rational():
            return f"Cyclotomic({self.level}, {self.coords[0]})"
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coords) if c]
        return f"Cyclotomic({self.level}, {' + '.join(terms)})"

    def __complex__(self) -> complex:
        z = complex(math.cos(2 * math.pi / self.level), math.sin(2 * math.pi / self.level))
        return sum((float(c) * z**k for k, c in enumerate(self.coords)), 0j)
