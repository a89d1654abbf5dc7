"""Exact coefficient domains: rationals, prime fields, CRT and rational reconstruction.

Rationals are :class:`fractions.Fraction` throughout; it already keeps
numerator and denominator coprime with a positive denominator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence, Tuple

from .errors import InvalidInput, ReconstructionFailure, UnluckyPrime

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings such as ``"-3/7"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise InvalidInput(f"not a rational number: {x!r}") from exc
    raise InvalidInput(f"cannot interpret {x!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    """Serialize as ``p/q``, or ``p`` when the denominator is one."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PrimeFieldElem:
    """Residue modulo a word-size prime."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise InvalidInput("modulus must be a prime >= 2")
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElem):
            if other.modulus != self.modulus:
                raise InvalidInput("arithmetic between different prime fields")
            return other.value
        if isinstance(other, int):
            return other % self.modulus
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem((self.value + o) % self.modulus, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem((self.value - o) % self.modulus, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem((o - self.value) % self.modulus, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeFieldElem(self.value * o % self.modulus, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElem(-self.value % self.modulus, self.modulus)

    def inverse(self) -> "PrimeFieldElem":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse in a prime field")
        return PrimeFieldElem(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * PrimeFieldElem(o, self.modulus).inverse()

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value


def mod_reduce(x, p: int) -> int:
    """Image of a rational in F_p as an integer in ``[0, p)``.

    Raises UnluckyPrime when p divides the denominator.
    """
    x = as_rational(x)
    den = x.denominator % p
    if den == 0:
        raise UnluckyPrime(f"denominator {x.denominator} vanishes modulo {p}")
    return x.numerator * pow(den, -1, p) % p


def crt_combine(residues: Iterable[Tuple[int, int]]) -> Tuple[int, int]:
    """Combine ``(value, modulus)`` pairs with pairwise coprime moduli."""
    value, modulus = 0, 1
    seen = False
    for a, m in residues:
        seen = True
        if m < 1:
            raise InvalidInput(f"modulus must be positive, got {m}")
        if gcd(modulus, m) != 1:
            raise InvalidInput(f"moduli {modulus} and {m} are not coprime")
        # value + modulus * t = a (mod m)
        t = (a - value) * pow(modulus, -1, m) % m
        value += modulus * t
        modulus *= m
    if not seen:
        raise InvalidInput("crt_combine needs at least one residue")
    return value % modulus, modulus


def reconstruction_bound(m: int) -> int:
    return isqrt((m - 1) // 2)


def rational_reconstruct(a: int, m: int) -> Fraction:
    """Recover p/q with p*q^-1 = a (mod m) and |p|, q <= floor(sqrt((m-1)/2)).

    Half-extended Euclid on (m, a); stops at the first remainder within the bound.
    """
    if m < 2:
        raise InvalidInput("modulus must be at least 2")
    a %= m
    bound = reconstruction_bound(m)
    r0, r1 = m, a
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(abs(t1), m) != 1:
        raise ReconstructionFailure(f"no rational reconstruction of {a} mod {m} within bound {bound}")
    if t1 < 0:
        r1, t1 = -r1, -t1
    return Fraction(r1, t1)


def reconstruct_vector(residue_vectors: Sequence[Sequence[int]], primes: Sequence[int]) -> list:
    """Coefficientwise CRT followed by rational reconstruction."""
    out = []
    for column in zip(*residue_vectors):
        value, modulus = crt_combine(zip(column, primes))
        out.append(rational_reconstruct(value, modulus))
    return out
