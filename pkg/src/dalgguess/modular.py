"""Multi-prime guessing: run the guessers over several prime fields, align the
modular solutions, lift them to Q by CRT and rational reconstruction, and
refit over Q on a fixed support.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple

import gmpy2

from .errors import InsufficientData, InvalidInput, ReconstructionFailure, SupportMismatch, VerificationFailure
from .exact import as_rational, crt_combine, rational_reconstruct
from .guess import GuessConfig, GuessResult, _prepare, _SequenceContext, _FunctionContext, _System, _result, verify_candidate
from .guess import guess_function, guess_function_fixed_order, guess_sequence
from .kernels import MAX_MODULUS
from .linsolve import canonical_basis, nullspace, restrict_by_rows
from .monomials import Monomial
from .polys import ADEPoly, DiffPoly, SeqPoly

log = logging.getLogger(__name__)

__all__ = [
    "PrimeRunReport",
    "prime_ladder",
    "pivot_key",
    "guess_modular",
    "multi_prime_reconstruct",
    "support_refit",
]

Key = Tuple[int, Monomial]


@dataclass(frozen=True)
class PrimeRunReport:
    prime: int
    result: Optional[GuessResult]
    support: Tuple[Key, ...]
    pivot: Optional[Key]
    poly: Optional[ADEPoly] = None


def prime_ladder(count: int, below: int = MAX_MODULUS) -> List[int]:
    """The ``count`` largest primes below ``below``, descending."""
    out = []
    n = below - 1
    while len(out) < count and n > 1:
        if gmpy2.is_prime(n):
            out.append(n)
        n -= 1
    return out


def check_prime(p: int) -> int:
    if not isinstance(p, int) or p < 2 or not gmpy2.is_prime(p):
        raise InvalidInput(f"{p!r} is not a prime")
    if p >= MAX_MODULUS:
        raise InvalidInput(f"prime {p} too large; moduli must stay below 2**31")
    return p


def pivot_key(support: Iterable[Key]) -> Key:
    """Greatest monomial, and among its keys the lowest x-degree."""
    support = list(support)
    if not support:
        raise InvalidInput("empty support has no pivot")
    top = max(m for _, m in support)
    return min(e for e, m in support if m == top), top


def _normalize_at(p: ADEPoly, key: Key) -> ADEPoly:
    c = p.coeffs()[key]
    if p.modulus is None:
        return p.scale(1 / c)
    return p.scale(pow(int(c), -1, p.modulus))


def guess_modular(data, p: int, cfg: GuessConfig, order: Optional[int] = None) -> PrimeRunReport:
    """Run the guesser for ``cfg.kind`` over F_p."""
    check_prime(p)
    if cfg.kind == "sequence":
        res = guess_sequence(data, cfg, modulus=p)
    elif order is not None:
        res = guess_function_fixed_order(data, cfg, order, modulus=p)
    else:
        res = guess_function(data, cfg, modulus=p)
    if res is None:
        return PrimeRunReport(p, None, (), None)
    support = tuple(sorted({k for q in res.basis for k in q.support()}, key=lambda k: (k[1], k[0])))
    if res.dim != 1:
        return PrimeRunReport(p, res, support, None)
    piv = pivot_key(support)
    return PrimeRunReport(p, res, support, piv, _normalize_at(res.basis[0], piv))


def _clear_denominators(poly_cls, keys, values) -> ADEPoly:
    den = lcm(*(v.denominator for v in values))
    nums = [int(v * den) for v in values]
    g = 0
    for x in nums:
        g = gcd(g, x)
    return poly_cls({k: Fraction(x // g) for k, x in zip(keys, nums)})


def multi_prime_reconstruct(data, primes: Sequence[int], cfg: GuessConfig, order: Optional[int] = None, reports=None) -> ADEPoly:
    """Lift a 1-dimensional modular solution to Q.

    Every prime must give a 1-dimensional space with the same support.  The
    coefficients, normalized at the pivot key, are combined by CRT and
    rational reconstruction; the result is cleared of denominators and
    verified on the data over Q.
    """
    primes = list(primes)
    if len(primes) < 2:
        raise InvalidInput("multi-prime reconstruction needs at least two primes")
    if len(set(primes)) != len(primes):
        raise InvalidInput("primes must be distinct")
    if reports is None:
        reports = [guess_modular(data, p, cfg, order) for p in primes]
    supports = {r.prime: r.support for r in reports}
    for r in reports:
        if r.result is None:
            raise ReconstructionFailure(f"no equation found modulo {r.prime}")
        if r.result.dim != 1:
            raise SupportMismatch(f"solution space modulo {r.prime} has dimension {r.result.dim}", supports)
    if len({r.support for r in reports}) != 1:
        raise SupportMismatch("supports differ between primes: " + ", ".join(f"{p}: {len(s)} terms" for p, s in supports.items()), supports)
    keys = reports[0].support
    values = []
    for key in keys:
        value, modulus = crt_combine((int(r.poly.coeffs()[key]), r.prime) for r in reports)
        values.append(rational_reconstruct(value, modulus))
    cls = SeqPoly if cfg.kind == "sequence" else DiffPoly
    poly = _clear_denominators(cls, keys, values).normalized()
    terms = [as_rational(x) for x in getattr(data, "terms", data)][cfg.offset :]
    rep = verify_candidate(poly, terms)
    if not rep.holds:
        raise VerificationFailure(f"reconstructed equation fails over Q at row {rep.first_failure}; try other primes")
    return poly


def support_refit(data, support: Iterable[Key], kind: str, offset: int = 0) -> GuessResult:
    """Solve over Q for the coefficients of an ansatz restricted to ``support``.

    The system is solved on the first 2u - 1 trusted rows (u unknowns), or
    all of them if fewer, and the solution is checked on the rest.
    """
    columns = sorted(set((int(e), tuple(m)) for e, m in support), key=lambda k: (k[1], k[0]))
    if not columns:
        raise InvalidInput("empty support")
    u = len(columns)
    cfg = GuessConfig(kind=kind, k=max(1, max(len(m) for _, m in columns)), d=max(e for e, _ in columns), offset=offset)
    terms = _prepare(data, cfg, None)
    if kind == "sequence":
        if any(e for e, _ in columns):
            raise InvalidInput("sequence supports carry no x-degrees")
        ctx = _SequenceContext(terms, None)
        last = ctx.N - max(max(m) if m else 0 for _, m in columns)
        system = _System("sequence", columns, last, ctx.build, None)
        payload = (terms, "sequence")
    else:
        ctx = _FunctionContext(terms, cfg.k, None)
        last = min(ctx.ev.horizon(m, e) for e, m in columns)
        system = _System("function", columns, last, ctx.build, None)
        payload = (ctx.series, "function")
    n_rows = system.n_rows
    if n_rows < u:
        raise InsufficientData(f"{n_rows} trusted rows for {u} unknowns", min_terms=len(terms) + u - n_rows + offset)
    solve_rows = min(n_rows, 2 * u - 1)
    basis = nullspace(system.rows(0, solve_rows), ncols=u)
    if basis.dim and solve_rows < n_rows:
        basis = restrict_by_rows(basis, system.rows(solve_rows, n_rows), u)
    if basis.dim == 0:
        return None
    basis = canonical_basis(basis.vectors, u)
    top = max(m for _, m in columns)
    return _result(
        system,
        (basis, solve_rows, n_rows - solve_rows),
        order=max(top) if top else -1,
        delta_order=-1,
        degrees=(),
        method="support-refit",
        data=payload,
    )
