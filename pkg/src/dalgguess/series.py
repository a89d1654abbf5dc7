"""Truncated power series with explicit exactness horizons, and evaluation of
ansatz monomials on data.

A series over Q stores Fractions in a list; over F_p it stores residues in an
int64 array (``modulus`` set).  ``exact_to`` is the last index whose
coefficient is trusted.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .errors import InsufficientData, InvalidInput
from .monomials import Monomial, canonical


class TruncSeries:
    __slots__ = ("coeffs", "exact_to", "modulus")

    def __init__(self, coeffs, exact_to: Optional[int] = None, modulus: Optional[int] = None):
        if exact_to is None:
            exact_to = len(coeffs) - 1
        if modulus is None:
            coeffs = [Fraction(c) for c in list(coeffs)[: exact_to + 1]]
        else:
            coeffs = np.asarray(coeffs, dtype=np.int64)[: exact_to + 1] % modulus
        if len(coeffs) != exact_to + 1:
            raise InvalidInput(f"need {exact_to + 1} coefficients, got {len(coeffs)}")
        self.coeffs = coeffs
        self.exact_to = exact_to
        self.modulus = modulus

    def __len__(self):
        return self.exact_to + 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def to_list(self) -> list:
        if self.modulus is None:
            return list(self.coeffs)
        return [int(c) for c in self.coeffs]

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.modulus == other.modulus and self.exact_to == other.exact_to and self.to_list() == other.to_list()

    def __repr__(self):
        field = "QQ" if self.modulus is None else f"GF({self.modulus})"
        return f"TruncSeries({self.to_list()!r}, exact_to={self.exact_to}, {field})"


def _empty(modulus):
    return TruncSeries([], -1, modulus)


def series_derivative(a: TruncSeries) -> TruncSeries:
    if a.exact_to < 1:
        raise InsufficientData("derivative of a series trusted only at x^0 has no trusted coefficients")
    if a.modulus is None:
        return TruncSeries([(n + 1) * a.coeffs[n + 1] for n in range(a.exact_to)], a.exact_to - 1)
    p = a.modulus
    idx = np.arange(1, a.exact_to + 1, dtype=np.int64) % p
    return TruncSeries(idx * a.coeffs[1:] % p, a.exact_to - 1, p)


def _conv_qq(a, b, n):
    out = []
    for k in range(n):
        s = 0
        for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
            x = a[i]
            if x:
                y = b[k - i]
                if y:
                    s += x * y
        out.append(Fraction(s))
    return out


def series_multiply(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    if a.modulus != b.modulus:
        raise InvalidInput("series over different fields")
    top = min(a.exact_to, b.exact_to)
    if top < 0:
        return _empty(a.modulus)
    if a.modulus is None:
        return TruncSeries(_conv_qq(a.coeffs, b.coeffs, top + 1), top)
    return TruncSeries(kernels.conv_mod(a.coeffs, b.coeffs, top + 1, a.modulus), top, a.modulus)


def shift_up(a: TruncSeries, e: int) -> TruncSeries:
    """x^e * a."""
    if e == 0 or a.exact_to < 0:
        return a
    if a.modulus is None:
        return TruncSeries([Fraction(0)] * e + a.coeffs, a.exact_to + e)
    return TruncSeries(np.concatenate([np.zeros(e, dtype=np.int64), a.coeffs]), a.exact_to + e, a.modulus)


class MonomialEvaluator:
    """Evaluates derivative monomials on one data series, caching derivatives and
    partial products so that a whole ansatz costs one convolution per monomial."""

    def __init__(self, data: TruncSeries):
        self.data = data
        self.N = data.exact_to
        self._derivs = [data]
        self._products: Dict[Monomial, TruncSeries] = {}

    def derivative(self, j: int) -> TruncSeries:
        while len(self._derivs) <= j:
            prev = self._derivs[-1]
            if prev.exact_to < 1:
                self._derivs.append(_empty(self.data.modulus))
            else:
                self._derivs.append(series_derivative(prev))
        return self._derivs[j]

    def product(self, m: Monomial) -> TruncSeries:
        m = canonical(m)
        hit = self._products.get(m)
        if hit is not None:
            return hit
        if not m:
            one_len = self.N + 1
            if self.data.modulus is None:
                res = TruncSeries([Fraction(1)] + [Fraction(0)] * (one_len - 1), self.N)
            else:
                z = np.zeros(one_len, dtype=np.int64)
                z[0] = 1
                res = TruncSeries(z, self.N, self.data.modulus)
        elif len(m) == 1:
            res = self.derivative(m[0])
        else:
            res = series_multiply(self.product(m[:-1]), self.derivative(m[-1]))
        self._products[m] = res
        return res

    def horizon(self, m: Monomial, e: int) -> int:
        if not m:
            # the constant monomial is exact at every index; cap at the data length
            return self.N + e
        return max(self.N - m[0] + e, -1)

    def evaluate(self, m: Monomial, e: int = 0) -> TruncSeries:
        return shift_up(self.product(m), e)


def eval_monomial(data: TruncSeries, m: Monomial, e: int = 0) -> TruncSeries:
    """Truncated series of x^e * prod(y^(j) for j in m) at the data series."""
    if e < 0:
        raise InvalidInput("x-power must be nonnegative")
    return MonomialEvaluator(data).evaluate(canonical(m), e)


def build_constraint_matrix(data, columns: Sequence[Tuple[int, Monomial]], rows: Iterable[int], evaluator: Optional[MonomialEvaluator] = None):
    """Row n, column t: coefficient of x^n in x^e * m evaluated at the data.

    Returns a list of Fraction rows over Q, an int64 array over F_p.
    """
    ev = evaluator or MonomialEvaluator(data)
    rows = list(rows)
    modulus = ev.data.modulus
    if not rows:
        if modulus is None:
            return []
        return np.zeros((0, len(columns)), dtype=np.int64)
    last = max(rows)
    cols = []
    for e, m in columns:
        h = ev.horizon(m, e)
        if last > h:
            raise InsufficientData(f"row {last} lies beyond the exactness horizon {h} of column x^{e}*{m}")
        cols.append((ev.product(m), e))
    if modulus is None:
        zero = Fraction(0)
        return [[(s.coeffs[n - e] if n - e >= 0 else zero) for s, e in cols] for n in rows]
    out = np.zeros((len(rows), len(cols)), dtype=np.int64)
    idx = np.asarray(rows, dtype=np.int64)
    for t, (s, e) in enumerate(cols):
        src = idx - e
        ok = src >= 0
        out[ok, t] = s.coeffs[src[ok]]
    return out


def _rising(a: int, n: int) -> int:
    out = 1
    for i in range(n):
        out *= a + i
    return out


def rewrite_deg2_term(i: int, j1: int, j2: int, n: int, data: Sequence) -> Fraction:
    """Closed-form recurrence term of x^i * y^(j1) * y^(j2) at index n (j2 = -1 for
    a linear monomial); terms with negative index read as zero."""
    if n < 0:
        raise InvalidInput("row index must be nonnegative")

    def s(t):
        return Fraction(data[t]) if 0 <= t < len(data) else Fraction(0)

    if j2 == -1:
        return _rising(n + 1 - i, j1) * s(n + j1 - i)
    total = Fraction(0)
    for k in range(0, n - i + 1):
        total += _rising(k + 1, j1) * _rising(n - i - k + 1, j2) * s(k + j1) * s(n - i - k + j2)
    return total
