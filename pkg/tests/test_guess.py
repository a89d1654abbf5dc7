from fractions import Fraction
from itertools import product
from math import comb, factorial

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dalgguess import (
    DiffPoly,
    GuessConfig,
    InsufficientData,
    InvalidInput,
    SeqPoly,
    builtin_terms,
    degree_tuples,
    guess_function,
    guess_function_fixed_order,
    guess_sequence,
    max_admissible_order,
    separant_nonzero,
    shift_offset,
    verify_candidate,
)

ZETA_P = DiffPoly({(0, (0, 0)): -2, (0, (1,)): 5, (1, (1, 0)): -4, (1, (2,)): 2})
TREES_P = DiffPoly({(0, (0,)): 1, (1, (1,)): -1, (1, (1, 0)): 1})


def in_span(target, basis):
    keys = sorted({k for p in (target, *basis) for k in p.support()})
    rows = [[p.coeffs().get(k, 0) for k in keys] for p in basis]
    m = sympy.Matrix(rows)
    return sympy.Matrix(rows + [[target.coeffs().get(k, 0) for k in keys]]).rank() == m.rank()


# ---------------------------------------------------------------- bounds


def test_max_admissible_order_examples():
    assert max_admissible_order("function", 14, 2, 1) == 2
    assert max_admissible_order("sequence", 86, 6) == 3
    for N in range(0, 40):
        assert max_admissible_order("sequence", N, 1) == N // 2
    assert max_admissible_order("function", 2, 2, 1) == 0
    assert max_admissible_order("function", 1, 2, 1) == -1


def test_degree_tuples_example():
    assert list(degree_tuples(1, 2, 2)) == [(1, 1, 0), (1, 0, 1), (0, 1, 1)]
    assert list(degree_tuples(0, 0, 3)) == [(0, 0, 0, 0)]
    assert list(degree_tuples(0, 1, 3)) == []
    assert list(degree_tuples(2, 5, 2, row_budget=4)) == []


@given(st.integers(0, 3), st.integers(0, 10), st.integers(0, 4))
def test_degree_tuples_match_brute_force(d, D, r):
    brute = sorted(
        (t for t in product(range(d + 1), repeat=r + 1) if max(t) == d and sum(t) == D),
        reverse=True,
    )
    assert list(degree_tuples(d, D, r)) == brute


def test_degree_tuple_count_versus_closed_form():
    # the closed-form count r*C(D-d+r-2, r-2) is not what enumeration gives
    assert len(list(degree_tuples(1, 2, 2))) == 3
    assert 2 * comb(2 - 1 + 2 - 2, 2 - 2) == 2


def test_shift_offset():
    assert shift_offset([0, 0, 1, 1], 2) == [1, 1]
    assert shift_offset([1, 2, 3], 0) == [1, 2, 3]
    with pytest.raises(InvalidInput):
        shift_offset([1, 2], 3)


# -------------------------------------------------------------- functions


def test_rooted_trees():
    res = guess_function(builtin_terms("labelled_rooted_trees", 9), GuessConfig(k=2, d=1, all_poly_deg=True))
    assert res.dim == 1 and res.basis[0].proportional_to(TREES_P)


def test_zeta_fixed_order_with_ten_terms():
    res = guess_function_fixed_order(builtin_terms("zeta_even_scaled", 10), GuessConfig(k=2, d=1, all_poly_deg=True), 2)
    assert res is not None and res.dim == 1 and res.basis[0].proportional_to(ZETA_P)


def test_zeta_p_verifies_and_has_nonzero_separant():
    data = builtin_terms("zeta_even_scaled", 30)
    rep = verify_candidate(ZETA_P, data)
    assert rep.holds and rep.rows_checked == 30 - 2 + 1
    assert separant_nonzero(ZETA_P, data)


def test_r_min_above_r_max_uses_fixed_order():
    data = builtin_terms("zeta_even_scaled", 15)
    res = guess_function(data, GuessConfig(k=2, d=1, r_min=3))
    assert res is None or res.order >= 3


def test_constant_coefficients():
    exp_series = [Fraction(1, factorial(n)) for n in range(12)]
    res = guess_function(exp_series, GuessConfig(k=1, d=0))
    assert res.basis[0].proportional_to(DiffPoly({(0, (1,)): 1, (0, (0,)): -1}))


def test_degree_zero_tuple_search_is_empty():
    # with d = 0 the only tuple is all zeros, which is never below the critical row count
    with pytest.raises(InsufficientData):
        guess_function([1] * 12, GuessConfig(k=1, d=0, all_poly_deg=True))


def test_errors():
    with pytest.raises(InvalidInput):
        guess_function([0] * 10, GuessConfig(k=1, d=1))
    with pytest.raises(InsufficientData) as exc:
        guess_function([1, 2, 3], GuessConfig(k=2, d=2))
    assert exc.value.min_terms == 5
    with pytest.raises(InvalidInput):
        GuessConfig(k=0)
    with pytest.raises(InvalidInput):
        guess_sequence([1, 2, 3, 4], GuessConfig(kind="sequence", k=1), modulus=100)


# -------------------------------------------------------------- sequences


def test_fibonacci():
    res = guess_sequence(builtin_terms("fibonacci", 20), GuessConfig(kind="sequence", k=1))
    assert res.basis[0].proportional_to(SeqPoly({(0, (2,)): 1, (0, (1,)): -1, (0, (0,)): -1}))


def test_catalan_span_contains_rational_recursion():
    res = guess_sequence(builtin_terms("catalan", 30), GuessConfig(kind="sequence", k=2))
    target = SeqPoly({(0, (2, 0)): 10, (0, (2, 1)): -1, (0, (1, 0)): -16, (0, (1, 1)): -2})
    assert verify_candidate(target, builtin_terms("catalan", 30)).holds
    assert in_span(target, res.basis)


T, S = sympy.symbols("t s")  # t = s(n+1), s = s(n)


def _printed_primes_equation():
    big = (
        -4413259179869935469 * T**2 * S**2 + 9018202756736673077 * T * S**3 - 4605857486207652970 * S**4
        + 17613028825077611962910 * T**3 - 49894515590732679680380 * T**2 * S + 46888011363592541300913 * T * S**2
        - 14608471402583429770869 * S**3 - 1352963324244298950066469 * T**2 + 2681855784524737400584915 * T * S
        - 1327176208257158948463120 * S**2 + 21624567546730578358641529 * T - 21970446172359255395471255 * S
        - 64805493224537500905120572
    )
    expr = sympy.expand((T - S - 6) * (T - S - 8) * (T - S - 10) * (T - S - 12) * big)
    terms = {}
    for (a, b), c in sympy.Poly(expr, T, S).terms():
        terms[(0, (1,) * a + (0,) * b)] = int(c)
    return SeqPoly(terms)


def _as_sympy(p):
    return sum(sympy.Rational(c.numerator, c.denominator) * T ** m.count(1) * S ** m.count(0) for (_, m), c in p.terms)


def test_printed_primes_equation_fails_inside_the_data():
    # the published quartic factor does not vanish at the window (577, 593),
    # although it does at the earlier window (541, 557) with the same gap
    p = _printed_primes_equation()
    rep = verify_candidate(p, builtin_terms("odd_indexed_primes", 55))
    assert not rep.holds and rep.first_failure == 52


def test_primes_space_is_two_dimensional_with_gap_factors():
    data = builtin_terms("odd_indexed_primes", 55)
    res = guess_sequence(data, GuessConfig(kind="sequence", k=8, r_min=1))
    assert res.dim == 2 and res.order == 1
    for q in res.basis:
        e = _as_sympy(q)
        for g in (6, 8, 10, 12):
            assert sympy.div(e, T - S - g, T, S)[1] == 0
        rep = verify_candidate(q, builtin_terms("odd_indexed_primes", 100))
        assert verify_candidate(q, data).holds and not rep.holds and rep.first_failure >= 54
    assert not in_span(_printed_primes_equation(), res.basis)


def test_zero_polynomial_verifies():
    assert verify_candidate(SeqPoly({}), [1, 2, 3]).holds


# ------------------------------------------------------------- properties


@settings(max_examples=30)
@given(
    st.integers(-4, 4).filter(bool),
    st.integers(-4, 4).filter(bool),
    st.integers(-5, 5),
    st.integers(-5, 5),
)
def test_linear_recurrences_recovered(a, b, u0, u1):
    assume((u0, u1) != (0, 0))
    u = [u0, u1]
    for _ in range(20):
        u.append(a * u[-1] + b * u[-2])
    # rule out degenerate sequences satisfying a shorter recurrence
    assume(u[0] * u[2] != u[1] * u[1])
    res = guess_sequence(u, GuessConfig(kind="sequence", k=1, affine=False))
    assert res.dim == 1
    assert res.basis[0].proportional_to(SeqPoly({(0, (2,)): 1, (0, (1,)): -a, (0, (0,)): -b}))


data_strategy = st.lists(st.integers(-3, 3), min_size=8, max_size=16)


@settings(max_examples=40)
@given(data_strategy, st.integers(1, 3), st.sampled_from([None, 101]))
def test_sequence_guesses_are_sound_and_monotone(u, k, p):
    assume(any(u[:-2]))
    cfg = GuessConfig(kind="sequence", k=k)
    short = guess_sequence(u[:-2], cfg, modulus=p)
    long = guess_sequence(u, cfg, modulus=p)
    for res, data in ((short, u[:-2]), (long, u)):
        if res is not None:
            assert all(verify_candidate(q, data).holds for q in res.basis)
    if short is not None and long is not None:
        assert long.delta_order >= short.delta_order
        if long.delta_order == short.delta_order:
            assert long.dim <= short.dim


@settings(max_examples=25)
@given(st.lists(st.integers(-3, 3), min_size=6, max_size=12), st.integers(1, 2), st.integers(0, 1))
def test_function_guesses_are_sound(u, k, d):
    assume(any(u))
    try:
        res = guess_function(u, GuessConfig(k=k, d=d, all_poly_deg=True))
    except InsufficientData:
        return
    if res is not None:
        assert all(verify_candidate(q, u).holds for q in res.basis)
