"""Built-in data for the worked examples, and readers/writers for term files."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, isqrt, log
from typing import Callable, Dict, List, Tuple

from .errors import InvalidInput
from .exact import as_rational, format_rational

__all__ = [
    "TermList",
    "BUILTINS",
    "builtin_terms",
    "parse_bfile",
    "parse_terms_file",
    "emit_bfile",
    "emit_terms_file",
    "bernoulli_numbers",
]


@dataclass(frozen=True)
class TermList:
    offset: int
    terms: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.offset < 0:
            raise InvalidInput("offset must be nonnegative")
        if not self.terms:
            raise InvalidInput("a term list needs at least one term")
        object.__setattr__(self, "terms", tuple(as_rational(t) for t in self.terms))

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def __iter__(self):
        return iter(self.terms)

    def head(self, n: int) -> "TermList":
        return TermList(self.offset, self.terms[:n])


# ---------------------------------------------------------------- generators


def _catalan(count):
    out, c = [], 1
    for n in range(count):
        out.append(c)
        c = c * (4 * n + 2) // (n + 2)
    return out


def _fibonacci(count):
    out, a, b = [], 0, 1
    for _ in range(count):
        out.append(a)
        a, b = b, a + b
    return out


def _fib_pow2(count):
    out = []
    a, b = 1, 1  # F_m, F_{m+1} with m = 1
    for _ in range(count):
        out.append(a)
        a, b = a * (2 * b - a), a * a + b * b  # m -> 2m
    return out


def _catalan_over_fib(count):
    cat = _catalan(count + 1)
    fib = _fibonacci(count + 1)
    return [Fraction(cat[n], fib[n]) for n in range(1, count + 1)]


def _catalan3_partial_sums(count):
    cat = _catalan(3 * count)
    out, s = [], 0
    for n in range(count):
        s += cat[3 * n]
        out.append(s)
    return out


def _catalan_multisection(d):
    if d < 1:
        raise InvalidInput("multisection step must be positive")

    def gen(count):
        cat = _catalan(d * (count - 1) + 1)
        return cat[::d][:count]

    return gen


def _primes_upto(limit):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


def _odd_indexed_primes(count):
    need = 2 * count
    limit = max(30, int(need * (log(need) + log(log(need)) + 2)) if need > 5 else 30)
    primes = _primes_upto(limit)
    while len(primes) < need:
        limit *= 2
        primes = _primes_upto(limit)
    return primes[1:need:2]


def _labelled_rooted_trees(count):
    u = [Fraction(0), Fraction(1)]
    for n in range(1, count):
        u.append(sum((k + 1) * u[k + 1] * u[n - k] for k in range(n)) / n)
    return u[:count]


def bernoulli_numbers(n: int) -> List[Fraction]:
    """B_0..B_n with B_1 = -1/2."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return B


def _zeta_even_scaled(count):
    B = bernoulli_numbers(2 * count)
    return [(-1) ** n * B[2 * n + 2] * 2 ** (2 * n + 1) / factorial(2 * n + 2) for n in range(count)]


def _arctan_over_sincos(count):
    # y1: 2x y' + (x^2 + 1) y'' = 0, y1(0) = 0, y1'(0) = 1
    a = [Fraction(0)] * (count + 2)
    a[1] = Fraction(1)
    for n in range(count):
        a[n + 2] = -n * a[n] / (n + 2)
    # y2: y + y'' = 0, y2(0) = y2'(0) = 1
    b = [Fraction(0)] * (count + 2)
    b[0] = b[1] = Fraction(1)
    for n in range(count):
        b[n + 2] = -b[n] / ((n + 1) * (n + 2))
    q: List[Fraction] = []
    for n in range(count):
        q.append((a[n] - sum(q[i] * b[n - i] for i in range(n))) / b[0])
    return q


BUILTINS: Dict[str, Tuple[Callable[[int], list], int]] = {
    "catalan": (_catalan, 0),
    "fibonacci": (_fibonacci, 0),
    "catalan_over_fib": (_catalan_over_fib, 1),
    "fib_pow2": (_fib_pow2, 0),
    "catalan3_partial_sums": (_catalan3_partial_sums, 0),
    "odd_indexed_primes": (_odd_indexed_primes, 0),
    "labelled_rooted_trees": (_labelled_rooted_trees, 0),
    "zeta_even_scaled": (_zeta_even_scaled, 0),
    "arctan_over_sincos": (_arctan_over_sincos, 0),
}


def builtin_terms(name: str, count: int) -> TermList:
    """First ``count`` terms of a named built-in sequence.

    ``catalan_multisection`` takes its step after a colon, e.g.
    ``catalan_multisection:4`` for C_{4n}.
    """
    if count < 1:
        raise InvalidInput("count must be at least 1")
    base, _, arg = name.partition(":")
    if base == "catalan_multisection":
        try:
            step = int(arg or "2")
        except ValueError:
            raise InvalidInput(f"bad multisection step {arg!r}") from None
        return TermList(0, tuple(_catalan_multisection(step)(count)))
    if base not in BUILTINS or arg:
        raise InvalidInput(f"unknown built-in sequence {name!r}")
    gen, offset = BUILTINS[base]
    return TermList(offset, tuple(gen(count)))


# ----------------------------------------------------------------------- I/O


def parse_bfile(text: str) -> TermList:
    offset = None
    terms = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidInput(f"line {lineno}: expected 'index value', got {line!r}")
        try:
            idx, val = int(parts[0]), int(parts[1])
        except ValueError:
            raise InvalidInput(f"line {lineno}: non-integer field in {line!r}") from None
        if offset is None:
            offset = idx
        elif idx != offset + len(terms):
            raise InvalidInput(f"line {lineno}: index {idx} breaks the run starting at {offset}")
        terms.append(val)
    if offset is None:
        raise InvalidInput("b-file has no data lines")
    if offset < 0:
        raise InvalidInput("negative starting index")
    return TermList(offset, tuple(terms))


def _parse_rational(s, where: str) -> Fraction:
    try:
        return as_rational(s if not isinstance(s, str) else s.strip())
    except (ValueError, TypeError, ZeroDivisionError, InvalidInput):
        raise InvalidInput(f"{where}: cannot read {s!r} as a rational") from None


def parse_terms_file(text: str) -> TermList:
    """Rationals separated by whitespace or commas, or JSON.

    JSON may be a bare list or {"offset": n0, "terms": ["p/q", ...]}.
    """
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"line {exc.lineno}: {exc.msg}") from None
        stripped = json.dumps({"terms": doc})
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"line {exc.lineno}: {exc.msg}") from None
        if not isinstance(doc, dict) or "terms" not in doc:
            raise InvalidInput("structured terms file needs a 'terms' field")
        offset = doc.get("offset", 0)
        if not isinstance(offset, int) or isinstance(offset, bool):
            raise InvalidInput("'offset' must be an integer")
        terms = [_parse_rational(t, f"term {i}") for i, t in enumerate(doc["terms"])]
        return TermList(offset, tuple(terms))
    terms = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        terms.extend(_parse_rational(tok, f"line {lineno}") for tok in line.replace(",", " ").split())
    if not terms:
        raise InvalidInput("terms file is empty")
    return TermList(0, tuple(terms))


def emit_bfile(tl: TermList) -> str:
    if any(t.denominator != 1 for t in tl.terms):
        raise InvalidInput("b-files hold integers only")
    return "".join(f"{tl.offset + i} {t.numerator}\n" for i, t in enumerate(tl.terms))


def emit_terms_file(tl: TermList, structured: bool = False) -> str:
    if structured or tl.offset:
        return json.dumps({"offset": tl.offset, "terms": [format_rational(t) for t in tl.terms]}) + "\n"
    return "".join(format_rational(t) + "\n" for t in tl.terms)
