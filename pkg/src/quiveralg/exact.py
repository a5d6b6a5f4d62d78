"""Exact scalars: rationals (``fractions.Fraction``) and cyclotomic numbers.

A :class:`Cyclotomic` lives in Q(zeta_m) and is stored in the power basis
1, zeta, ..., zeta^(phi(m)-1), always reduced modulo the m-th cyclotomic
polynomial.  Binary operations between different conductors lift both sides
to the lcm conductor.
"""
from __future__ import annotations

import operator
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Union

Rational = Fraction
Scalar = Union[int, Fraction, "Cyclotomic"]


class NotRationalError(ValueError):
    pass


def rational(x) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, ints and Fractions into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, Cyclotomic):
        return x.to_rational()
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fmt_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


_OPS = {"+": operator.add, "-": operator.sub, "−": operator.sub,
        "*": operator.mul, "×": operator.mul, "/": operator.truediv, "÷": operator.truediv}


def rat_arith(a, b, op: str) -> Fraction:
    """Exact rational arithmetic; division by zero raises ZeroDivisionError."""
    a, b = rational(a), rational(b)
    if op in ("/", "÷") and b == 0:
        raise ZeroDivisionError("rational division by zero")
    return _OPS[op](a, b)


# -- number theory helpers -------------------------------------------------

def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in _divisors(m)[:-1]:
        num = _exact_divide(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1]  # den is monic
        q[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    assert not any(num[: len(den) - 1]), "non-exact cyclotomic division"
    return q


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row k holds zeta_m^k (0 <= k < m) in the power basis."""
    phi = euler_phi(m)
    poly = cyclotomic_polynomial(m)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(Fraction(c) for c in cur))
        # multiply by zeta and reduce
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, poly)]
    return tuple(rows)


@lru_cache(maxsize=None)
def _ramanujan_ratio(m: int, k: int) -> Fraction:
    # trace of zeta_m^k over Q divided by phi(m); invariant under lifting
    d = m // gcd(k, m)
    return Fraction(_mobius(d), euler_phi(d))


class Cyclotomic:
    """Element of Q(zeta_m), immutable."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: Iterable = ()):
        if m < 1:
            raise ValueError("conductor must be positive")
        self.m = m
        self.coeffs = _reduce(m, coeffs)

    # construction -----------------------------------------------------
    @classmethod
    def _raw(cls, m: int, coeffs: tuple) -> "Cyclotomic":
        obj = object.__new__(cls)
        obj.m = m
        obj.coeffs = coeffs
        return obj

    @classmethod
    def from_rational(cls, x, m: int = 1) -> "Cyclotomic":
        phi = euler_phi(m)
        return cls._raw(m, (Fraction(x),) + (Fraction(0),) * (phi - 1))

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "Cyclotomic":
        return cls._raw(m, _power_table(m)[k % m])

    # conversions --------------------------------------------------------
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise NotRationalError(f"not rational: {self!r}")
        return self.coeffs[0]

    def lift(self, M: int) -> "Cyclotomic":
        if M == self.m:
            return self
        if M % self.m:
            raise ValueError(f"cannot lift conductor {self.m} to {M}")
        step = M // self.m
        table = _power_table(M)
        phi = euler_phi(M)
        acc = [Fraction(0)] * phi
        for k, c in enumerate(self.coeffs):
            if c:
                row = table[(k * step) % M]
                for j in range(phi):
                    if row[j]:
                        acc[j] += c * row[j]
        return Cyclotomic._raw(M, tuple(acc))

    def conj(self) -> "Cyclotomic":
        """Complex conjugation zeta -> zeta^-1."""
        return self.galois(-1)

    def galois(self, k: int) -> "Cyclotomic":
        """The automorphism zeta_m -> zeta_m^k, gcd(k, m) = 1."""
        m = self.m
        if gcd(k, m) != 1:
            raise ValueError(f"{k} is not a unit modulo {m}")
        table = _power_table(m)
        phi = euler_phi(m)
        acc = [Fraction(0)] * phi
        for j, c in enumerate(self.coeffs):
            if c:
                row = table[(j * k) % m]
                for i in range(phi):
                    if row[i]:
                        acc[i] += c * row[i]
        return Cyclotomic._raw(m, tuple(acc))

    def lies_in(self, d: int) -> bool:
        """True iff the element belongs to the subfield Q(zeta_d), d | m."""
        m = self.m
        if m % d:
            x = self.lift(m * d // gcd(m, d))
            return x.lies_in(d)
        return all(self.galois(k) == self for k in range(1, m + 1)
                   if gcd(k, m) == 1 and k % d == 1 % d)

    def normalized_trace(self) -> Fraction:
        return sum((c * _ramanujan_ratio(self.m, k) for k, c in enumerate(self.coeffs) if c),
                   Fraction(0))

    def norm(self) -> Fraction:
        prod = Cyclotomic.from_rational(1, self.m)
        for k in range(2, self.m + 1):
            if gcd(k, self.m) == 1:
                prod = prod * self.galois(k)
        return (prod * self).to_rational()

    def inverse(self) -> "Cyclotomic":
        if not any(self.coeffs):
            raise ZeroDivisionError("cyclotomic division by zero")
        if self.is_rational():
            return Cyclotomic.from_rational(1 / self.coeffs[0], self.m)
        prod = Cyclotomic.from_rational(1, self.m)
        for k in range(2, self.m + 1):
            if gcd(k, self.m) == 1:
                prod = prod * self.galois(k)
        n = (prod * self).to_rational()
        return prod * Fraction(1, 1) / n

    # arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.m == self.m:
                return self, other
            M = self.m * other.m // gcd(self.m, other.m)
            return self.lift(M), other.lift(M)
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.from_rational(other, self.m)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic._raw(a.m, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.m, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return Cyclotomic._raw(a.m, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic._raw(self.m, tuple(x * other for x in self.coeffs))
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        phi = len(a.coeffs)
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic._raw(a.m, _reduce(a.m, prod))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("cyclotomic division by zero")
            return Cyclotomic._raw(self.m, tuple(x / other for x in self.coeffs))
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyclotomic.from_rational(1, self.m)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash(("cyc", self.normalized_trace()))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "" if k == 0 else (f"z{self.m}" if k == 1 else f"z{self.m}^{k}")
                if not mono:
                    terms.append(fmt_rational(c))
                elif c == 1:
                    terms.append(mono)
                else:
                    terms.append(f"{fmt_rational(c)}*{mono}")
        return " + ".join(terms) if terms else "0"

    # serialization ---------------------------------------------------
    def to_json(self) -> dict:
        return {"m": self.m, "coeffs": [fmt_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "Cyclotomic":
        return cls(int(data["m"]), [rational(c) for c in data["coeffs"]])


def _reduce(m: int, coeffs) -> tuple:
    """Reduce an arbitrary-length coefficient list modulo Phi_m."""
    phi = euler_phi(m)
    c = [Fraction(x) for x in coeffs]
    if len(c) > m:
        folded = [Fraction(0)] * m
        for k, x in enumerate(c):
            folded[k % m] += x
        c = folded
    if len(c) <= phi:
        return tuple(c) + (Fraction(0),) * (phi - len(c))
    poly = cyclotomic_polynomial(m)
    for k in range(len(c) - 1, phi - 1, -1):
        top = c[k]
        if top:
            base = k - phi
            for j in range(phi):
                if poly[j]:
                    c[base + j] -= top * poly[j]
    return tuple(c[:phi])


def cyc_embed(m: int, k: int) -> Cyclotomic:
    if m < 1:
        raise ValueError("conductor must be positive")
    return Cyclotomic.zeta(m, k)


def cyc_conj(x: Cyclotomic) -> Cyclotomic:
    return x.conj()


def cyc_to_rational(x: Cyclotomic) -> Fraction:
    return x.to_rational()
