import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fanovol.arith import (
    bound_B,
    bound_B_bracket,
    bracket_less,
    bracket_mul,
    dirichlet_monomial_integral,
    format_rational,
    kmm_bound,
    multinomial,
    parse_rational,
    simplex_power_integral,
    sylvester,
    sylvester_bracket,
    theorem_bound,
)


def test_sylvester_values():
    assert [sylvester(n) for n in range(1, 7)] == [2, 3, 7, 43, 1807, 3263443]


def test_sylvester_product_recurrence():
    prod = 1
    for n in range(1, 19):
        assert sylvester(n) == prod + 1
        prod *= sylvester(n)


def test_sylvester_rejects_zero():
    with pytest.raises(ValueError):
        sylvester(0)


@pytest.mark.parametrize("n,expected", [(1, 2), (2, 9), (3, 72), (4, 3528), (5, 6523272)])
def test_bound_B(n, expected):
    assert bound_B(n) == expected


def test_theorem_bound_differs_from_B_only_in_dim_two():
    assert theorem_bound(2) == 8 and bound_B(2) == 9
    assert all(theorem_bound(n) == bound_B(n) for n in range(3, 9))


@pytest.mark.parametrize("parts,expected", [([3, 3], 20), ([2, 2, 2], 90), ([4, 3], 35), ([], 1), ([0, 5], 1)])
def test_multinomial(parts, expected):
    assert multinomial(parts) == expected


@given(st.lists(st.integers(0, 6), max_size=5))
def test_multinomial_factorial_formula(parts):
    expected = math.factorial(sum(parts))
    for p in parts:
        expected //= math.factorial(p)
    assert multinomial(parts) == expected


@pytest.mark.parametrize("a,b,expected", [(1, 0, 1), (2, 0, Fraction(1, 2)), (2, 2, Fraction(1, 12))])
def test_simplex_power_integral(a, b, expected):
    assert simplex_power_integral(a, b) == expected


def _sympy_simplex_integral(exponents):
    k0, rest = exponents[0], exponents[1:]
    xs = sympy.symbols(f"x0:{len(rest)}")
    expr = (1 - sum(xs)) ** k0
    for x, k in zip(xs, rest):
        expr *= x**k
    # iterated integral over the unit simplex, innermost variable last
    for i in reversed(range(len(xs))):
        expr = sympy.integrate(expr, (xs[i], 0, 1 - sum(xs[:i])))
    return Fraction(str(sympy.nsimplify(expr)))


@pytest.mark.parametrize("exponents", [(0, 0), (2, 0, 0), (1, 2, 0), (3, 1, 1), (0, 2, 1, 1), (2, 0, 3, 1)])
def test_dirichlet_against_symbolic_integration(exponents):
    assert dirichlet_monomial_integral(exponents) == _sympy_simplex_integral(exponents)


def test_kmm_bound():
    assert kmm_bound(1) == 12
    assert kmm_bound(2) == 31381059609
    with pytest.warns(UserWarning):
        kmm_bound(9)


@pytest.mark.parametrize("text", ["0", "-7", "3/4", "-12/5"])
def test_rational_round_trip(text):
    assert format_rational(parse_rational(text)) == text


def test_parse_rational_reduces_and_rejects_zero_denominator():
    assert parse_rational("6/4") == Fraction(3, 2)
    with pytest.raises(ValueError):
        parse_rational("1/0")


@pytest.mark.parametrize("n", [17, 18, 19, 20, 21])
def test_sylvester_bracket_contains_exact_value(n):
    lo, hi, e = sylvester_bracket(n)
    s = sylvester(n)
    assert lo << e <= s <= hi << e


def test_bound_bracket_contains_exact_value():
    lo, hi, e = bound_B_bracket(21)
    b = bound_B(21)
    assert lo << e <= b <= hi << e


def test_bracket_comparison():
    assert bracket_less((1, 2, 0), (3, 4, 0)) is True
    assert bracket_less((5, 6, 0), (3, 4, 0)) is False
    assert bracket_less((1, 5, 0), (3, 4, 0)) is None
    big = bracket_mul(bound_B_bracket(21), (2, 2, 0))
    assert bracket_less(bound_B_bracket(21), big) is True
    assert bracket_less(bound_B_bracket(22), bound_B_bracket(21)) is False
