"""Guessing algebraic differential equations for generating functions and
algebraic difference equations for sequences.

``guess_function`` walks the ansatz indices of the graded ordering with
uniform coefficient degrees and falls through to ``guess_function_fixed_order``;
``guess_sequence`` does the same walk for difference polynomials with constant
coefficients.  Every solve is followed by verification on the remaining
trusted rows, and every returned polynomial is re-checked against its data.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .errors import InsufficientData, InvalidInput
from .exact import as_rational, mod_reduce
from .linsolve import NullspaceBasis, canonical_basis, nullspace, restrict_by_rows
from .monomials import CONSTANT, Monomial, block_bounds, delta_monomial, monomials_upto
from .polys import ADEPoly, DiffPoly, SeqPoly, polynomial_from_vector, separant, seq_initial_and_rationalizing
from .series import MonomialEvaluator, TruncSeries, build_constraint_matrix

log = logging.getLogger(__name__)

__all__ = [
    "GuessConfig",
    "GuessResult",
    "VerifyReport",
    "max_admissible_order",
    "guess_function",
    "guess_function_fixed_order",
    "guess_sequence",
    "degree_tuples",
    "verify_candidate",
    "separant",
    "separant_nonzero",
    "seq_initial_and_rationalizing",
    "shift_offset",
]

# rows per verification chunk; keeps the rational path from building every row up front
_VERIFY_CHUNK = 64


@dataclass(frozen=True)
class GuessConfig:
    kind: str = "function"
    k: int = 2
    d: int = 2
    r_min: int = 0
    all_poly_deg: bool = False
    offset: int = 0
    affine: bool = True

    def __post_init__(self):
        if self.kind not in ("function", "sequence"):
            raise InvalidInput(f"kind must be 'function' or 'sequence', not {self.kind!r}")
        if self.k < 1 or self.d < 0 or self.r_min < 0 or self.offset < 0:
            raise InvalidInput("need k >= 1, d >= 0, r_min >= 0, offset >= 0")


@dataclass(frozen=True)
class GuessResult:
    basis: Tuple[ADEPoly, ...]
    kind: str
    order: int
    delta_order: int
    degrees: Tuple[int, ...]
    rows_solved: int
    rows_verified: int
    modulus: Optional[int] = None
    method: str = ""
    columns: Tuple[Tuple[int, Monomial], ...] = field(default=(), repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def field(self) -> str:
        return "QQ" if self.modulus is None else f"GF({self.modulus})"

    def to_json(self) -> dict:
        return {
            "kind": "differential" if self.kind == "function" else "difference",
            "field": "QQ" if self.modulus is None else self.modulus,
            "order": self.order,
            "delta_order": self.delta_order,
            "degrees": list(self.degrees),
            "rows_solved": self.rows_solved,
            "rows_verified": self.rows_verified,
            "method": self.method,
            "basis": [p.to_json() for p in self.basis],
        }


@dataclass(frozen=True)
class VerifyReport:
    holds: bool
    rows_checked: int
    first_failure: Optional[int] = None


# --------------------------------------------------------------------- bounds


def max_admissible_order(kind: str, N: int, k: int, d: int = 0) -> int:
    """Largest order r whose full ansatz still gives a square or overdetermined system."""
    if N < 0:
        raise InvalidInput("N must be nonnegative")
    if kind == "function":
        ok = lambda r: (comb(r + k, k) + 1) * (d + 1) + r <= N + 2  # noqa: E731
    elif kind == "sequence":
        ok = lambda r: comb(r + k, k) + r <= N + 1  # noqa: E731
    else:
        raise InvalidInput(f"unknown kind {kind!r}")
    r = -1
    while ok(r + 1):
        r += 1
    return r


def degree_tuples(d: int, D_star: int, r_delta_star: int, row_budget: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Coefficient-degree tuples (d_0, ..., d_{r_delta_star}) with maximum d and
    sum D_star, in descending lexicographic order."""
    n = r_delta_star + 1
    if d < 0 or D_star < 0 or (row_budget is not None and D_star > row_budget):
        return
    if D_star > n * d:
        return

    def rec(prefix, left, remaining, hit):
        if remaining == 0:
            if left == 0 and hit:
                yield tuple(prefix)
            return
        lo = max(0, left - (remaining - 1) * d)
        for v in range(min(d, left), lo - 1, -1):
            prefix.append(v)
            yield from rec(prefix, left - v, remaining - 1, hit or v == d)
            prefix.pop()

    yield from rec([], D_star, n, False)


# ----------------------------------------------------------------- data prep


def shift_offset(data: Sequence, n0: int, kind: str = "function") -> list:
    """Drop the first n0 terms.

    For a generating function this is (f - sum_{n<n0} s_n x^n) / x^n0; for a
    sequence it passes to a sequence of the same germ.
    """
    if n0 < 0:
        raise InvalidInput("offset must be nonnegative")
    if n0 > len(data) - 1:
        raise InvalidInput(f"offset {n0} exceeds the last index {len(data) - 1}")
    return list(data[n0:])


def _terms_of(data) -> list:
    terms = getattr(data, "terms", data)
    return list(terms)


def _prepare(data, cfg: GuessConfig, modulus: Optional[int]):
    terms = [as_rational(x) for x in _terms_of(data)]
    terms = shift_offset(terms, cfg.offset, cfg.kind)
    if len(terms) < 2:
        raise InsufficientData("need at least two terms", min_terms=2)
    if not any(terms):
        raise InvalidInput("all-zero data is annihilated by every monomial")
    if modulus is None:
        return terms
    from .modular import check_prime

    check_prime(modulus)
    return [mod_reduce(x, modulus) for x in terms]


# ------------------------------------------------------------- solve + verify


class _System:
    """Rows of one ansatz over the data, built lazily."""

    def __init__(self, kind, columns, last_row, builder, modulus):
        self.kind = kind
        self.columns = list(columns)
        self.last_row = last_row
        self.builder = builder
        self.modulus = modulus

    @property
    def n_rows(self):
        return self.last_row + 1

    def rows(self, lo, hi):
        return self.builder(self.columns, range(lo, hi))


def _solve(system: _System) -> Optional[Tuple[NullspaceBasis, int, int]]:
    """Solve on the first cols+1 rows, then cut the solution space down with the rest."""
    ncols = len(system.columns)
    if system.n_rows < ncols:
        return None
    solve_rows = min(ncols + 1, system.n_rows)
    basis = nullspace(system.rows(0, solve_rows), ncols=ncols, modulus=system.modulus)
    if basis.dim == 0:
        return None
    lo = solve_rows
    while lo < system.n_rows and basis.dim:
        hi = min(lo + _VERIFY_CHUNK, system.n_rows)
        basis = restrict_by_rows(basis, system.rows(lo, hi), ncols, system.modulus)
        lo = hi
    if basis.dim == 0:
        return None
    basis = canonical_basis(basis.vectors, ncols, system.modulus)
    return basis, solve_rows, system.n_rows - solve_rows


def _result(system: _System, solved, *, order, delta_order, degrees, method, data) -> Optional[GuessResult]:
    """Wrap a solved system; basis vectors that fail on rows beyond the ansatz
    horizon (possible when their support has lower order) are dropped."""
    basis, rows_solved, rows_verified = solved
    kind = "differential" if system.kind == "function" else "difference"
    polys = []
    for v in basis.vectors:
        p = polynomial_from_vector(kind, system.columns, v, system.modulus).normalized()
        rep = verify_candidate(p, data, prepared=True)
        if rep.holds:
            polys.append(p)
        else:
            log.debug("dropping %s: fails at row %s", p, rep.first_failure)
    if not polys:
        return None
    return GuessResult(
        basis=tuple(polys),
        kind=system.kind,
        order=order,
        delta_order=delta_order,
        degrees=tuple(degrees),
        rows_solved=rows_solved,
        rows_verified=rows_verified,
        modulus=system.modulus,
        method=method,
        columns=tuple(system.columns),
    )


# ------------------------------------------------------------------ functions


class _FunctionContext:
    def __init__(self, terms, k, modulus):
        self.terms = terms
        self.k = k
        self.modulus = modulus
        self.N = len(terms) - 1
        self.series = TruncSeries(terms, self.N, modulus)
        self.ev = MonomialEvaluator(self.series)

    def build(self, columns, rows):
        return build_constraint_matrix(self.series, columns, rows, self.ev)

    def system(self, degrees: Sequence[int]) -> _System:
        monos = monomials_upto(self.k, len(degrees) - 1)
        columns = [(e, m) for m, dj in zip(monos, degrees) for e in range(dj + 1)]
        last = self.N - monos[-1][0]
        return _System("function", columns, last, self.build, self.modulus)


def _try_function(ctx: _FunctionContext, degrees, method) -> Tuple[Optional[GuessResult], bool]:
    """Returns (result, determined)."""
    system = ctx.system(degrees)
    if system.n_rows < len(system.columns):
        return None, False
    solved = _solve(system)
    if solved is None:
        return None, True
    r_delta = len(degrees) - 1
    return _result(
        system,
        solved,
        order=delta_monomial(ctx.k, r_delta)[0],
        delta_order=r_delta,
        degrees=degrees,
        method=method,
        data=(ctx.series, "function"),
    ), True


def guess_function(data, cfg: GuessConfig, modulus: Optional[int] = None) -> Optional[GuessResult]:
    """Search an ADE for the generating function of the data, walking ansatz indices
    with all coefficient degrees equal to ``cfg.d``."""
    if cfg.kind != "function":
        cfg = GuessConfig(**{**cfg.__dict__, "kind": "function"})
    terms = _prepare(data, cfg, modulus)
    ctx = _FunctionContext(terms, cfg.k, modulus)
    k, d, N = cfg.k, cfg.d, ctx.N
    r_max = max_admissible_order("function", N, k, d)
    if r_max < 0:
        need = 2 * (d + 1) - 1
        raise InsufficientData(f"{N + 1} terms admit no ansatz with coefficient degree {d}; need at least {need}", min_terms=need)
    start = block_bounds(k, cfg.r_min)[1]
    stop = block_bounds(k, r_max)[0]
    tried = start - 1
    if cfg.r_min <= r_max:
        for r_delta in range(start, stop + 1):
            res, determined = _try_function(ctx, (d,) * (r_delta + 1), "uniform")
            tried = r_delta
            if res is not None:
                return res
    r = max(cfg.r_min, r_max)
    return _fixed_order(ctx, cfg, r, tried + 1)


def guess_function_fixed_order(data, cfg: GuessConfig, r: int, modulus: Optional[int] = None) -> Optional[GuessResult]:
    """Search an ADE of order r, first with uniform coefficient degrees up to the
    index where the system turns underdetermined, then over degree tuples."""
    if r < 0:
        raise InvalidInput("order must be nonnegative")
    terms = _prepare(data, cfg, modulus)
    ctx = _FunctionContext(terms, cfg.k, modulus)
    return _fixed_order(ctx, cfg, r, 0)


def _fixed_order(ctx: _FunctionContext, cfg: GuessConfig, r: int, start: int) -> Optional[GuessResult]:
    k, d = cfg.k, cfg.d
    lo = block_bounds(k, r)[0]
    hi = block_bounds(k, r + 1)[0]
    r_star = None
    for r_delta in range(max(lo, start), hi + 1):
        res, determined = _try_function(ctx, (d,) * (r_delta + 1), "uniform-extended")
        if res is not None:
            return res
        if not determined:
            r_star = r_delta
            break
    if r_star is None or not cfg.all_poly_deg:
        return None
    last = ctx.N - delta_monomial(k, r_star)[0]
    rows = last + 1
    D_star = rows - (r_star + 1)
    found_any = False
    for tup in degree_tuples(d, D_star, r_star, row_budget=D_star):
        found_any = True
        res, _ = _try_function(ctx, tup, "degree-tuples")
        if res is not None:
            return res
    if not found_any:
        raise InsufficientData(
            f"no coefficient-degree tuple with maximum {d} fits {rows} rows at ansatz index {r_star}",
            min_terms=ctx.N + 1 + (r_star + 1) * (d + 1) - rows,
        )
    return None


# ------------------------------------------------------------------ sequences


class _SequenceContext:
    def __init__(self, terms, modulus):
        self.terms = terms
        self.modulus = modulus
        self.N = len(terms) - 1
        self._cache = {}
        if modulus is not None:
            self._u = np.asarray(terms, dtype=np.int64)

    def column(self, m: Monomial):
        """Values of the monomial at windows n = 0..N - order(m)."""
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        N = self.N
        if not m:
            col = [Fraction(1)] * (N + 1) if self.modulus is None else np.ones(N + 1, dtype=np.int64)
        else:
            length = N - m[0] + 1
            j = m[-1]
            if len(m) == 1:
                col = self.terms[j : j + length] if self.modulus is None else self._u[j : j + length]
            else:
                head = self.column(m[:-1])
                if self.modulus is None:
                    u = self.terms
                    col = [head[n] * u[n + j] for n in range(length)]
                else:
                    col = head[:length] * self._u[j : j + length] % self.modulus
        self._cache[m] = col
        return col

    def build(self, columns, rows):
        rows = list(rows)
        cols = [self.column(m) for _, m in columns]
        if self.modulus is None:
            return [[c[n] for c in cols] for n in rows]
        if not rows:
            return np.zeros((0, len(cols)), dtype=np.int64)
        idx = np.asarray(rows, dtype=np.int64)
        return np.stack([c[idx] for c in cols], axis=1) if cols else np.zeros((len(rows), 0), dtype=np.int64)


def guess_sequence(data, cfg: GuessConfig, modulus: Optional[int] = None) -> Optional[GuessResult]:
    """Search an algebraic difference equation with constant coefficients."""
    if cfg.kind != "sequence":
        cfg = GuessConfig(**{**cfg.__dict__, "kind": "sequence"})
    terms = _prepare(data, cfg, modulus)
    ctx = _SequenceContext(terms, modulus)
    k, N = cfg.k, ctx.N
    r_max = max_admissible_order("sequence", N, k)
    if cfg.r_min > r_max:
        need = comb(cfg.r_min + k, k) + cfg.r_min
        raise InsufficientData(f"order {cfg.r_min} with degree {k} needs at least {need} terms, got {N + 1}", min_terms=need)
    start = block_bounds(k, cfg.r_min)[1] if cfg.r_min > 0 else block_bounds(k, 0)[1]
    stop = block_bounds(k, r_max)[0]
    r_theta = start
    while True:
        monos = monomials_upto(k, r_theta)
        order = monos[-1][0]
        columns = ([(0, CONSTANT)] if cfg.affine else []) + [(0, m) for m in monos]
        system = _System("sequence", columns, N - order, ctx.build, modulus)
        if system.n_rows < len(columns):
            if r_theta < stop:
                r_theta += 1
                continue
            return None
        solved = _solve(system)
        if solved is not None:
            res = _result(
                system,
                solved,
                order=order,
                delta_order=r_theta,
                degrees=(0,) * (r_theta + 1),
                method="uniform" if r_theta <= stop else "uniform-extended",
                data=(terms, "sequence"),
            )
            if res is not None:
                return res
        r_theta += 1


# --------------------------------------------------------------- verification


def verify_candidate(p: ADEPoly, data, prepared: bool = False) -> VerifyReport:
    """Check p against every trusted row of the data.

    ``data`` is a list of terms (or a TermList).  Internally the guessers pass
    already reduced data as ``(series_or_terms, kind)`` with ``prepared=True``.
    """
    if prepared:
        payload, _ = data
    else:
        terms = [as_rational(x) for x in _terms_of(data)]
        if p.modulus is not None:
            terms = [mod_reduce(x, p.modulus) for x in terms]
        payload = terms
    if isinstance(p, SeqPoly):
        terms = payload
        N = len(terms) - 1
        last = N - max(p.order(), 0)
        ctx = _SequenceContext(terms, p.modulus)
        if last < 0 or p.is_zero():
            return VerifyReport(True, max(last + 1, 0))
        rows = list(range(last + 1))
        M = ctx.build([k for k, _ in p.terms], rows)
        return _check_rows(M, [c for _, c in p.terms], p.modulus, len(rows))
    series = payload if isinstance(payload, TruncSeries) else TruncSeries(payload, len(payload) - 1, p.modulus)
    ev = MonomialEvaluator(series)
    if p.is_zero():
        return VerifyReport(True, series.exact_to + 1)
    last = min(ev.horizon(m, e) for (e, m), _ in p.terms)
    last = min(last, series.exact_to + max(e for (e, _), _ in p.terms))
    if last < 0:
        return VerifyReport(True, 0)
    rows = list(range(last + 1))
    M = build_constraint_matrix(series, [k for k, _ in p.terms], rows, ev)
    return _check_rows(M, [c for _, c in p.terms], p.modulus, len(rows))


def _check_rows(M, coeffs, modulus, n_rows) -> VerifyReport:
    if modulus is None:
        for n, row in enumerate(M):
            if sum(a * c for a, c in zip(row, coeffs) if a):
                return VerifyReport(False, n_rows, n)
        return VerifyReport(True, n_rows)
    from .linsolve import apply

    vals = apply(M, coeffs, modulus)
    for n, v in enumerate(vals):
        if v:
            return VerifyReport(False, n_rows, n)
    return VerifyReport(True, n_rows)


def separant_nonzero(p: DiffPoly, data) -> bool:
    """Whether the separant of p, evaluated at the data series, is nonzero on the trusted range."""
    sep = separant(p)
    if sep.is_zero():
        return False
    terms = [as_rational(x) for x in _terms_of(data)]
    if p.modulus is not None:
        terms = [mod_reduce(x, p.modulus) for x in terms]
    series = TruncSeries(terms, len(terms) - 1, p.modulus)
    ev = MonomialEvaluator(series)
    last = min(ev.horizon(m, e) for (e, m), _ in sep.terms)
    if last < 0:
        return True
    M = build_constraint_matrix(series, [k for k, _ in sep.terms], range(last + 1), ev)
    rep = _check_rows(M, [c for _, c in sep.terms], p.modulus, last + 1)
    return not rep.holds
