"""Differential and difference polynomials: the objects the guessers return."""
from __future__ import annotations

import json
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, Optional, Tuple

from .errors import InvalidInput
from .exact import as_rational, format_rational
from .monomials import Monomial, canonical, render_monomial

Key = Tuple[int, Monomial]

KINDS = ("differential", "difference")


def term_key(key: Key):
    e, m = key
    return (m, e)


class ADEPoly:
    """Sparse polynomial sum(c * x^e * m) with Q or F_p coefficients.

    Terms are kept in canonical order: monomials ascending under the graded
    ordering, then ascending x-degree.
    """

    kind = "differential"

    def __init__(self, terms, modulus: Optional[int] = None):
        acc: Dict[Key, object] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for item in items:
            if len(item) == 2:
                (e, m), c = item
            else:
                e, m, c = item
            key = (int(e), canonical(m))
            if key[0] < 0:
                raise InvalidInput("negative x-degree")
            c = as_rational(c) if modulus is None else int(c) % modulus
            acc[key] = acc.get(key, 0) + c
            if modulus is not None:
                acc[key] %= modulus
        self.modulus = modulus
        self.terms: Tuple[Tuple[Key, object], ...] = tuple(
            (k, acc[k]) for k in sorted(acc, key=term_key) if acc[k]
        )
        if self.kind == "difference" and any(e for (e, _), _ in self.terms):
            raise InvalidInput("difference polynomials have constant coefficients")

    # -- basic queries ---------------------------------------------------
    def coeffs(self) -> Dict[Key, object]:
        return dict(self.terms)

    def support(self) -> Tuple[Key, ...]:
        return tuple(k for k, _ in self.terms)

    def order(self) -> int:
        return max((m[0] for (_, m), _ in self.terms if m), default=-1)

    def degree(self) -> int:
        return max((len(m) for (_, m), _ in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return type(self) is type(other) and self.modulus == other.modulus and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.modulus, self.terms))

    # -- arithmetic helpers ----------------------------------------------
    def scale(self, c) -> "ADEPoly":
        if self.modulus is None:
            c = as_rational(c)
            return type(self)({k: v * c for k, v in self.terms})
        return type(self)({k: v * c for k, v in self.terms}, self.modulus)

    def normalized(self) -> "ADEPoly":
        """Integer, content-free, with positive coefficient on the greatest term.

        Over F_p: greatest term scaled to 1.
        """
        if not self.terms:
            return self
        lead = self.terms[-1][1]
        if self.modulus is not None:
            return self.scale(pow(int(lead), -1, self.modulus))
        den = lcm(*(v.denominator for _, v in self.terms))
        nums = [int(v * den) for _, v in self.terms]
        g = 0
        for x in nums:
            g = gcd(g, x)
        s = 1 if lead > 0 else -1
        return type(self)({k: Fraction(s * x // g) for (k, _), x in zip(self.terms, nums)})

    def proportional_to(self, other: "ADEPoly") -> bool:
        if self.support() != other.support() or self.modulus != other.modulus:
            return False
        if not self.terms:
            return True
        a0, b0 = self.terms[0][1], other.terms[0][1]
        if self.modulus is None:
            return all(a * b0 == b * a0 for (_, a), (_, b) in zip(self.terms, other.terms))
        p = self.modulus
        return all((a * b0 - b * a0) % p == 0 for (_, a), (_, b) in zip(self.terms, other.terms))

    def reduce_mod(self, p: int) -> "ADEPoly":
        from .exact import mod_reduce

        return type(self)({k: mod_reduce(v, p) for k, v in self.terms}, p)

    # -- rendering ---------------------------------------------------------
    def _factor_text(self, e: int, m: Monomial) -> str:
        parts = []
        if e == 1:
            parts.append("x")
        elif e > 1:
            parts.append(f"x^{e}")
        if m:
            parts.append(render_monomial(m, shifts=self.kind == "difference"))
        return "*".join(parts)

    def render(self) -> str:
        if not self.terms:
            return "0 = 0"
        pieces = []
        for i, ((e, m), c) in enumerate(self.terms):
            body = self._factor_text(e, m)
            if self.modulus is not None:
                neg, mag = False, str(c)
                unit = c == 1
            else:
                neg, mag = c < 0, format_rational(abs(c))
                unit = abs(c) == 1
            if not body:
                text = mag
            elif unit:
                text = body
            else:
                text = f"{mag}*{body}"
            if i == 0:
                pieces.append(f"-{text}" if neg else text)
            else:
                pieces.append(f" - {text}" if neg else f" + {text}")
        return "".join(pieces) + " = 0"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"{type(self).__name__}({self.render()!r})"

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "terms": [
                {
                    "xdeg": e,
                    "orders": list(m),
                    "coeff": format_rational(c) if self.modulus is None else str(c),
                }
                for (e, m), c in self.terms
            ],
        }
        if self.modulus is not None:
            out["modulus"] = self.modulus
        return out

    def dumps(self) -> str:
        return dump_json(self.to_json())


class DiffPoly(ADEPoly):
    kind = "differential"


class SeqPoly(ADEPoly):
    kind = "difference"


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def poly_from_json(obj) -> ADEPoly:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        kind = obj["kind"]
        raw = obj["terms"]
    except (KeyError, TypeError) as exc:
        raise InvalidInput("equation JSON needs 'kind' and 'terms'") from exc
    if kind not in KINDS:
        raise InvalidInput(f"unknown equation kind {kind!r}")
    modulus = obj.get("modulus")
    cls = DiffPoly if kind == "differential" else SeqPoly
    terms = []
    for t in raw:
        c = t["coeff"]
        c = as_rational(str(c)) if modulus is None else int(c)
        terms.append(((int(t.get("xdeg", 0)), tuple(t["orders"])), c))
    return cls(terms, modulus)


def separant(p: ADEPoly) -> ADEPoly:
    """Formal partial derivative with respect to the highest derivative (or shift)."""
    r = p.order()
    if r < 0:
        return type(p)({}, p.modulus)
    out = {}
    for (e, m), c in p.terms:
        mult = m.count(r)
        if mult == 0:
            continue
        rest = list(m)
        rest.remove(r)
        key = (e, tuple(rest))
        out[key] = out.get(key, 0) + c * mult
    return type(p)(out, p.modulus)


def seq_initial_and_rationalizing(p: SeqPoly) -> Tuple[SeqPoly, bool]:
    """Leading coefficient of p as a polynomial in its highest shift, and whether
    p is linear in that shift."""
    r = p.order()
    if r < 0:
        return SeqPoly(p.terms, p.modulus), False
    top = max(m.count(r) for (_, m), _ in p.terms)
    init = {}
    for (e, m), c in p.terms:
        if m.count(r) == top:
            init[(e, tuple(j for j in m if j != r))] = c
    return SeqPoly(init, p.modulus), top == 1


def polynomial_from_vector(kind: str, columns: Iterable[Key], vector, modulus: Optional[int] = None) -> ADEPoly:
    cls = DiffPoly if kind == "differential" else SeqPoly
    return cls([(k, c) for k, c in zip(columns, vector) if c], modulus)
