"""Exact integer and rational helpers.

Python ``int`` is the big-integer type and :class:`fractions.Fraction` the
rational type; both are immutable and always reduced.
"""

from __future__ import annotations

import functools
import math
import warnings
from fractions import Fraction
from typing import Iterable, Sequence

SYLVESTER_TABLE_SIZE = 16


def _build_sylvester_table(n: int) -> tuple[int, ...]:
    values = [2]
    while len(values) < n:
        s = values[-1]
        values.append(s * s - s + 1)
    return tuple(values)


_SYLVESTER = _build_sylvester_table(SYLVESTER_TABLE_SIZE)


def sylvester(n: int) -> int:
    """Return the n-th Sylvester number (s_1 = 2, s_{n+1} = s_n^2 - s_n + 1)."""
    if n < 1:
        raise ValueError("Sylvester index must be >= 1")
    if n <= SYLVESTER_TABLE_SIZE:
        return _SYLVESTER[n - 1]
    s = _SYLVESTER[-1]
    for _ in range(n - SYLVESTER_TABLE_SIZE):
        s = s * s - s + 1
    return s


@functools.lru_cache(maxsize=64)
def bound_B(n: int) -> int:
    """Upper bound on the normalised dual volume of an n-dimensional
    canonical Fano simplex: 9 for n = 2, else 2(s_n - 1)^2."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if n == 2:
        return 9
    return 2 * (sylvester(n) - 1) ** 2


def theorem_bound(d: int) -> int:
    """2(s_d - 1)^2, the bound on the normalised dual volume in dimension d."""
    return 2 * (sylvester(d) - 1) ** 2


# -- rigorous brackets for huge Sylvester numbers ---------------------------------
#
# A bracket (lo, hi, e) means lo * 2**e <= x <= hi * 2**e with lo, hi >= 0 and
# e >= 0. Mantissas are truncated outward so every comparison stays exact.

BRACKET_BITS = 256
EXACT_INDEX_LIMIT = 20


def _trim(lo: int, hi: int, e: int, bits: int = BRACKET_BITS) -> tuple[int, int, int]:
    k = max(0, hi.bit_length() - bits)
    if k:
        lo >>= k
        hi = -((-hi) >> k)
    return lo, hi, e + k


@functools.lru_cache(maxsize=64)
def sylvester_bracket(n: int) -> tuple[int, int, int]:
    if n <= SYLVESTER_TABLE_SIZE:
        s = sylvester(n)
        return s, s, 0
    lo, hi, e = _SYLVESTER[-1], _SYLVESTER[-1], 0
    for _ in range(n - SYLVESTER_TABLE_SIZE):
        # x^2 - x + 1 is increasing for x >= 1; with x = m 2^e:
        # 2^(2e)(m^2 - m) <= x^2 - x + 1 <= 2^(2e)(m^2 + 1)
        lo, hi, e = _trim(lo * lo - lo, hi * hi + 1, 2 * e)
    return lo, hi, e


@functools.lru_cache(maxsize=64)
def bound_B_bracket(n: int) -> tuple[int, int, int]:
    if n <= EXACT_INDEX_LIMIT:
        b = bound_B(n)
        return b, b, 0
    lo, hi, e = sylvester_bracket(n)
    # (m 2^e - 1) lies in [(m - 1) 2^e, m 2^e]
    return _trim(2 * (lo - 1) ** 2, 2 * hi * hi, 2 * e)


def bracket_mul(a: tuple[int, int, int], b: tuple[int, int, int]) -> tuple[int, int, int]:
    return _trim(a[0] * b[0], a[1] * b[1], a[2] + b[2])


def _le_scaled(a: int, x: int, b: int, y: int) -> bool:
    """a 2^x <= b 2^y for nonnegative a, b."""
    if a == 0:
        return True
    if b == 0:
        return False
    if x >= y:
        shift = x - y
        if shift > b.bit_length():
            return False
        return a << shift <= b
    shift = y - x
    if shift > a.bit_length():
        return True
    return a <= b << shift


def bracket_less(a: tuple[int, int, int], b: tuple[int, int, int]) -> bool | None:
    """True if every value in a is < every value in b, False if every value
    in a is >= every value in b, None when the brackets overlap."""
    if _le_scaled(a[1], a[2], b[0], b[2]) and not _le_scaled(b[0], b[2], a[1], a[2]):
        return True
    if _le_scaled(b[1], b[2], a[0], a[2]):
        return False
    return None


def multinomial(parts: Iterable[int]) -> int:
    parts = list(parts)
    if any(p < 0 for p in parts):
        raise ValueError("parts must be nonnegative")
    result = 1
    total = 0
    for p in parts:
        total += p
        result *= math.comb(total, p)
    return result


def simplex_power_integral(a: int, b: int) -> Fraction:
    """Integral of (1 - x_1 - ... - x_a)^b over the unit a-simplex: b!/(a+b)!."""
    if a < 0 or b < 0:
        raise ValueError("a and b must be nonnegative")
    return Fraction(math.factorial(b), math.factorial(a + b))


def dirichlet_monomial_integral(exponents: Sequence[int]) -> Fraction:
    """Integral over the unit simplex of prod x_i^{k_i} times (1 - sum x)^{k_0}.

    ``exponents`` is (k_0, k_1, ..., k_a): the first entry is the power of
    the slack coordinate. Value: prod k_i! / (a + sum k_i)!.
    """
    a = len(exponents) - 1
    num = 1
    for k in exponents:
        num *= math.factorial(k)
    return Fraction(num, math.factorial(a + sum(exponents)))


def kmm_bound(d: int) -> int:
    """(3(2^d - 1)(d + 1)^{(d+1)(2^d-1)})^d, the degree bound for smooth Fano d-folds."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if d > 8:
        warnings.warn(f"kmm_bound({d}) has an astronomically large value", stacklevel=2)
    e = 2**d - 1
    return (3 * e * (d + 1) ** ((d + 1) * e)) ** d


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        p, q = text.split("/")
        q = int(q)
        if q == 0:
            raise ValueError("zero denominator")
        return Fraction(int(p), q)
    return Fraction(int(text))


def format_rational(x) -> str:
    """Decimal "p/q", or "p" when the denominator is 1."""
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def lcm_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, v)
    return g


def is_integral(x) -> bool:
    return Fraction(x).denominator == 1
