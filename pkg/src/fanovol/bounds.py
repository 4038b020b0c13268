"""Inequality machinery: multinomial product bounds, exception scans, and the
slicing integral for decompositions into two simplices.

All comparisons are exact. The slicing integral is evaluated by
triangulating its polyhedral domain and integrating the expanded
polynomial integrand monomial by monomial.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Iterable, Sequence

from .arith import (
    EXACT_INDEX_LIMIT,
    bound_B,
    bound_B_bracket,
    bracket_less,
    bracket_mul,
    dirichlet_monomial_integral,
    format_rational,
    sylvester,
    theorem_bound,
)
from .construct import GlueResult, barycentric_of_points, face_volume_F
from .hull import vertices_from_inequalities
from .lattice import Sublattice, det, lattice_index
from .polytope import hull, triangulation


class BoundError(ValueError):
    pass


@dataclass(frozen=True)
class BoundReport:
    case: str
    lhs: Fraction | int
    rhs: Fraction | int
    holds: bool

    @classmethod
    def strict(cls, case: str, lhs, rhs) -> "BoundReport":
        return cls(case, lhs, rhs, lhs < rhs)

    def to_dict(self) -> dict:
        return {"case": self.case, "lhs": format_rational(self.lhs), "rhs": format_rational(self.rhs), "holds": self.holds}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def reports_to_jsonl(reports: Iterable[BoundReport]) -> str:
    return "".join(r.to_json() + "\n" for r in reports)


# -- multinomial product bound ------------------------------------------------------


def provet3_lhs(dims: Sequence[int]) -> int:
    """(sum d_i)! / prod d_i! * prod B_{d_i}."""
    if any(d < 1 for d in dims):
        raise BoundError("simplex dimensions must be positive")
    out = math.factorial(sum(dims))
    for d in dims:
        out //= math.factorial(d)
    for d in dims:
        out *= bound_B(d)
    return out


def provet3_holds(d: int, dims: Sequence[int]) -> bool:
    if max([d, *dims]) <= EXACT_INDEX_LIMIT:
        return provet3_lhs(dims) < bound_B(d)
    if any(x < 1 for x in dims):
        raise BoundError("simplex dimensions must be positive")
    # huge indices: compare outward-rounded brackets, exact fallback on overlap
    coeff = math.factorial(sum(dims))
    for x in dims:
        coeff //= math.factorial(x)
    lhs = (coeff, coeff, 0)
    for x in dims:
        lhs = bracket_mul(lhs, bound_B_bracket(x))
    verdict = bracket_less(lhs, bound_B_bracket(d))
    if verdict is None:
        return provet3_lhs(dims) < bound_B(d)
    return verdict


def admissible_dims(d: int, t: int) -> Iterable[tuple[int, ...]]:
    """Tuples d_1 >= ... >= d_t >= 1 with d_i <= d - t + 1 and sum >= d."""
    top = d - t + 1
    if top < 1:
        return
    for combo in combinations_with_replacement(range(top, 0, -1), t):
        if sum(combo) >= d:
            yield combo


def scan_exceptions(d_range: Iterable[int], t_range: Iterable[int]) -> list[tuple[int, tuple[int, ...]]]:
    """All admissible (d, dims) where the multinomial bound fails, sorted by (t, d, dims)."""
    t_values = sorted(set(t_range))
    out = []
    for t in t_values:
        for d in sorted(set(d_range)):
            for dims in admissible_dims(d, t):
                if not provet3_holds(d, dims):
                    out.append((d, dims))
    return out


def staged_bound_lhs(d: int, d_t: int) -> int:
    return math.comb(d - 1 + d_t, d_t) * bound_B(d - 1) * bound_B(d_t)


def staged_bound_holds(d: int, d_t: int) -> bool:
    """(d-1+d_t)!/((d-1)! d_t!) * B_{d-1} * B_{d_t} < B_d."""
    if not 1 <= d_t <= d - 1:
        raise BoundError("need 1 <= d_t <= d - 1")
    return staged_bound_lhs(d, d_t) < bound_B(d)


# -- Sylvester product inequality ---------------------------------------------------


def sylvester_vector(n: int) -> tuple[Fraction, ...]:
    """(1/s_1, ..., 1/s_{n-1}, 1/(s_n - 1)), summing to 1."""
    return tuple(Fraction(1, sylvester(i)) for i in range(1, n)) + (Fraction(1, sylvester(n) - 1),)


def unit_fraction_bound_check(beta: Sequence) -> tuple[bool, bool]:
    """(1/prod beta <= (s_n - 1)^2, sorted beta equals the Sylvester vector)
    for n = len(beta)."""
    beta = [Fraction(b) for b in beta]
    if sum(beta) != 1 or any(b <= 0 for b in beta):
        raise BoundError("beta must be positive and sum to 1")
    n = len(beta)
    recip = Fraction(1)
    for b in beta:
        recip /= b
    holds = recip <= (sylvester(n) - 1) ** 2
    equality = tuple(sorted(beta, reverse=True)) == sylvester_vector(n)
    return holds, equality


# -- slicing data -------------------------------------------------------------------


@dataclass(frozen=True)
class SlicingData:
    """Two simplices sharing q vertices.

    ``shared[0][k]`` and ``shared[1][k]`` are the indices of the k-th common
    vertex in simplex 1 and simplex 2. ``excluded[i]`` is the unshared
    vertex of simplex i left out of the lattice basis.
    """

    betas: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    shared: tuple[tuple[int, ...], tuple[int, ...]]
    excluded: tuple[int, int]

    def __post_init__(self):
        betas = tuple(tuple(Fraction(b) for b in beta) for beta in self.betas)
        object.__setattr__(self, "betas", betas)
        if len(betas) != 2 or len(self.shared) != 2 or len(self.excluded) != 2:
            raise BoundError("slicing data needs exactly two simplices")
        if len(self.shared[0]) != len(self.shared[1]):
            raise BoundError("shared vertex lists must be aligned")
        for i in range(2):
            if sum(betas[i]) != 1 or any(b <= 0 for b in betas[i]):
                raise BoundError(f"beta_{i + 1} must be positive and sum to 1")
            if len(set(self.shared[i])) != len(self.shared[i]):
                raise BoundError("repeated shared vertex")
            if self.excluded[i] in self.shared[i]:
                raise BoundError("the excluded vertex must not be shared")
            if not all(0 <= v < len(betas[i]) for v in self.shared[i] + (self.excluded[i],)):
                raise BoundError("vertex index out of range")

    @property
    def q(self) -> int:
        return len(self.shared[0])

    @property
    def dims(self) -> tuple[int, int]:
        return (len(self.betas[0]) - 1, len(self.betas[1]) - 1)

    def basis(self, i: int) -> list[int]:
        return [v for v in range(len(self.betas[i])) if v != self.excluded[i]]

    def free(self, i: int) -> list[int]:
        """Basis vertices that are not shared."""
        sh = set(self.shared[i])
        return [v for v in self.basis(i) if v not in sh]

    def face_volume(self, i: int) -> Fraction:
        return face_volume_F(self.betas[i], self.basis(i), self.shared[i])

    @classmethod
    def from_glue(cls, result: GlueResult, excluded: tuple[int, int] | None = None) -> "SlicingData":
        """Slicing data of a two-simplex gluing. By default each simplex excludes
        its unshared vertex with the smallest barycentric coordinate."""
        if result.spec.t != 2:
            raise BoundError("slicing data needs t = 2")
        betas = tuple(barycentric_of_points(s) for s in result.simplices)
        for beta, w in zip(betas, result.spec.weights):
            if beta != w.barycentric():
                raise BoundError("embedded simplex does not have its prescribed weights")
        pairs = sorted(result.spec.closed_matchings().get((0, 1), ()))
        shared = (tuple(a for a, _ in pairs), tuple(b for _, b in pairs))
        if excluded is None:
            excluded = tuple(
                min((v for v in range(len(betas[i])) if v not in shared[i]), key=lambda v: (betas[i][v], v))
                for i in range(2)
            )
        return cls(betas, shared, excluded)


def _check_q(data: SlicingData) -> None:
    if any(data.q >= di for di in data.dims):
        raise BoundError("need q < d_i for both simplices")


def int5_bound(data: SlicingData) -> Fraction:
    """The averaged upper bound for the sliced dual volume."""
    _check_q(data)
    q = data.q
    total = Fraction(0)
    for i in range(2):
        k = data.dims[i] - q
        term = Fraction(math.factorial(2 * k), math.factorial(q + 2 * k) * math.factorial(k) ** 2)
        beta = data.betas[i]
        for v in data.shared[i]:
            term /= beta[v]
        for v in data.free(i):
            term /= beta[v] ** 2
        total += term
    return total / 2


def lastcase_bound(beta1: Sequence, beta2: Sequence, shared=None) -> Fraction:
    """(1/d!) * sum_i prod_j 1/beta_{i,j} for two (d-1)-simplices sharing d-2 vertices.

    ``shared``, if given, is a pair of index lists used to check that each
    simplex has exactly two unshared vertices.
    """
    beta1 = [Fraction(b) for b in beta1]
    beta2 = [Fraction(b) for b in beta2]
    if len(beta1) != len(beta2) or len(beta1) < 3:
        raise BoundError("both simplices must have dimension d - 1 >= 2")
    for beta in (beta1, beta2):
        if sum(beta) != 1 or any(b <= 0 for b in beta):
            raise BoundError("beta must be positive and sum to 1")
    d = len(beta1)
    if shared is not None:
        for beta, sh in zip((beta1, beta2), shared):
            if len(set(sh)) != d - 2 or not all(0 <= v < d for v in sh):
                raise BoundError("each simplex must share exactly d - 2 vertices")
    total = Fraction(0)
    for beta in (beta1, beta2):
        p = Fraction(1)
        for b in beta:
            p /= b
        total += p
    return total / math.factorial(d)


# -- exact polynomial integration ---------------------------------------------------

Poly = dict  # exponent tuple -> Fraction


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _poly_pow(a: Poly, k: int, n: int) -> Poly:
    out: Poly = {(0,) * n: Fraction(1)}
    for _ in range(k):
        out = _poly_mul(out, a)
    return out


def integrate_affine_powers(simplex: Sequence[Sequence], factors: Sequence[tuple[Fraction, Sequence, int]]) -> Fraction:
    """Integral over a full-dimensional simplex of prod (c + a.x)^k for
    (c, a, k) in ``factors``.

    Each affine factor is linear in the barycentric coordinates of the
    simplex, so the integrand expands into monomials integrated by the
    Dirichlet formula, scaled by the volume Jacobian.
    """
    pts = [[Fraction(x) for x in p] for p in simplex]
    q = len(pts) - 1
    if q == 0:
        out = Fraction(1)
        for c, a, k in factors:
            out *= Fraction(c) ** k
        return out
    jac = abs(det([[p[j] - pts[0][j] for j in range(q)] for p in pts[1:]]))
    if jac == 0:
        return Fraction(0)
    n = q + 1
    integrand: Poly = {(0,) * n: Fraction(1)}
    for c, a, k in factors:
        lin: Poly = {}
        for idx, p in enumerate(pts):
            val = Fraction(c) + sum(Fraction(x) * y for x, y in zip(a, p))
            if val:
                e = [0] * n
                e[idx] = 1
                lin[tuple(e)] = val
        integrand = _poly_mul(integrand, _poly_pow(lin, k, n))
    total = Fraction(0)
    for e, coeff in integrand.items():
        total += coeff * dirichlet_monomial_integral(e)
    return total * jac


def slicing_domain(data: SlicingData) -> list[tuple[Fraction, ...]]:
    """Vertices of D_1 ∩ D_2 in the shared-coordinate space R^q."""
    q = data.q
    rows = []
    for k in range(q):
        rows.append((Fraction(1), [Fraction(int(j == k)) for j in range(q)]))
    for i in range(2):
        bs = [data.betas[i][v] for v in data.shared[i]]
        rows.append((1 - sum(bs), [-b for b in bs]))
    scaled = []
    for c, a in rows:
        m = math.lcm(*(x.denominator for x in [c, *a]))
        scaled.append((int(c * m), [int(x * m) for x in a]))
    return vertices_from_inequalities(scaled)


def slicing_dual_volume(data: SlicingData) -> Fraction:
    """Exact value of the integral over D_1 ∩ D_2 of vol(H_1) vol(H_2)."""
    _check_q(data)
    q = data.q
    factors = []
    const = Fraction(1)
    for i in range(2):
        const *= data.face_volume(i)
        bs = [data.betas[i][v] for v in data.shared[i]]
        # 1 - sum beta_v (lambda_v + 1)
        factors.append((1 - sum(bs), [-b for b in bs], data.dims[i] - q))
    if q == 0:
        return const
    verts = slicing_domain(data)
    if len(verts) < q + 1:
        return Fraction(0)
    D = hull(verts, q)
    if D.dim < q:
        return Fraction(0)
    total = Fraction(0)
    for simplex in triangulation(D):
        total += integrate_affine_powers([D.vertices[j] for j in simplex], factors)
    return const * total


def coarse_lattice_index(result: GlueResult, data: SlicingData) -> int:
    """[N : N''] where N'' is generated by the images of both lattice bases."""
    gens = [result.simplices[i][v] for i in range(2) for v in data.basis(i)]
    d = result.profile.d
    coarse = Sublattice.from_generators(gens, d)
    if coarse.rank != d:
        raise BoundError("basis images do not span the ambient space")
    return lattice_index(Sublattice.full(d), coarse)


# -- external barycentric data ------------------------------------------------------


def load_barycentric_file(path: str | os.PathLike) -> list[tuple[Fraction, ...]]:
    """One barycentric vector per line: whitespace- or comma-separated
    rationals, or a JSON list. Blank lines and '#' comments are ignored."""
    out = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            items = json.loads(line)
        else:
            items = line.replace(",", " ").split()
        out.append(tuple(Fraction(str(x)) for x in items))
    return out


def int5_from_barycentrics(beta1, beta2, shared, excluded) -> Fraction:
    return int5_bound(SlicingData((tuple(beta1), tuple(beta2)), shared, excluded))


def bulk_check_two_simplices(d: int, vectors_a: Sequence[Sequence], vectors_b: Sequence[Sequence]) -> list[BoundReport]:
    """For every pair (beta_1 of dimension d-1, beta_2 of dimension d-2) and every
    choice of shared vertices, the best int5 bound over excluded-vertex choices
    must lie strictly below 2(s_d - 1)^2 / d!.

    A bound that fails for some sharing pattern is reported, not raised: such
    a pattern may still be impossible geometrically.
    """
    from itertools import combinations, permutations

    rhs = Fraction(theorem_bound(d), math.factorial(d))
    reports = []
    for b1 in vectors_a:
        for b2 in vectors_b:
            if len(b1) != d or len(b2) != d - 1:
                raise BoundError("barycentric vectors have the wrong length")
            q = (d - 1) + (d - 2) - d
            worst = Fraction(0)
            for s1 in combinations(range(d), q):
                for s2 in permutations(range(d - 1), q):
                    best = None
                    for e1 in (v for v in range(d) if v not in s1):
                        for e2 in (v for v in range(d - 1) if v not in s2):
                            val = int5_from_barycentrics(b1, b2, (s1, s2), (e1, e2))
                            best = val if best is None else min(best, val)
                    worst = max(worst, best)
            case = f"d={d} beta1={[format_rational(x) for x in b1]} beta2={[format_rational(x) for x in b2]}"
            reports.append(BoundReport.strict(case, worst, rhs))
    return reports


def external_data_path() -> Path | None:
    root = os.environ.get("FANO_DATA_DIR")
    if not root:
        return None
    return Path(root)

