"""Named Fano constructions: Sylvester simplices, weight systems, gluing.

Gluing builds a polytope from t weighted simplices and a choice of
identified vertices. The simplices live in the coordinate blocks of
Z^(d_1+1) + ... + Z^(d_t+1); the weight vectors and the differences of
identified basis vectors span a sublattice whose saturation K is
quotiented out. The images of the standard basis vectors generate the
quotient lattice and their hull is the glued polytope.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .arith import sylvester
from .lattice import LatticeProjection, Sublattice, is_primitive, nullspace, quotient_projection, saturate
from .polytope import RationalPolytope, hull


class ConstructionError(ValueError):
    pass


class GlueError(ConstructionError):
    """Raised for degenerate or inadmissible gluing data."""


# -- weight systems -----------------------------------------------------------------


@dataclass(frozen=True, order=True)
class WeightSystem:
    """Reduced, well-formed weights, stored sorted ascending."""

    weights: tuple[int, ...]

    def __init__(self, weights: Sequence[int], check: bool = True):
        w = tuple(sorted(int(x) for x in weights))
        object.__setattr__(self, "weights", w)
        if check:
            if len(w) < 2 or any(x <= 0 for x in w):
                raise ConstructionError(f"weights must be at least two positive integers: {w}")
            if not self.is_reduced:
                raise ConstructionError(f"weights {w} are not reduced")
            if not self.is_well_formed:
                raise ConstructionError(f"weights {w} are not well-formed")

    @property
    def dim(self) -> int:
        return len(self.weights) - 1

    @property
    def total(self) -> int:
        return sum(self.weights)

    @property
    def is_reduced(self) -> bool:
        return math.gcd(*self.weights) == 1

    @property
    def is_well_formed(self) -> bool:
        w = self.weights
        return all(math.gcd(*(w[:i] + w[i + 1 :])) == 1 for i in range(len(w)))

    def barycentric(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.total) for x in self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def __repr__(self) -> str:
        return f"WeightSystem{self.weights}"


def barycentric_of_points(points: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """Barycentric coordinates of the origin w.r.t. affinely independent points
    whose relative interior contains it."""
    n = len(points)
    cols = [[Fraction(p[j]) for p in points] for j in range(len(points[0]))]
    cols.append([Fraction(1)] * n)
    # solve sum beta_i p_i = 0 and sum beta_i = 1
    ker = nullspace(cols[:-1], n)
    if len(ker) != 1:
        raise ConstructionError("points are not the vertices of a simplex around the origin")
    beta = ker[0]
    s = sum(beta)
    if s == 0:
        raise ConstructionError("origin is not in the affine hull")
    beta = [b / s for b in beta]
    if any(b <= 0 for b in beta):
        raise ConstructionError("origin is not in the relative interior")
    return tuple(beta)


def barycentric(S: RationalPolytope) -> tuple[Fraction, ...]:
    """Barycentric coordinates of the origin in the simplex S, in vertex order."""
    if S.n_vertices != S.dim + 1:
        raise ConstructionError("not a simplex")
    if not S.full_dim or not S.origin_interior:
        raise ConstructionError("origin must be strictly interior to a full-dimensional simplex")
    return barycentric_of_points(S.vertices)


def weights_in_order(beta: Sequence[Fraction]) -> tuple[int, ...]:
    k = 1
    for b in beta:
        k = math.lcm(k, Fraction(b).denominator)
    ints = [int(b * k) for b in beta]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)


def weights(S: RationalPolytope) -> WeightSystem:
    """Reduced weights of a simplex with the origin in its interior."""
    w = weights_in_order(barycentric(S))
    primitive = S.is_lattice and all(is_primitive(v) for v in S.integer_vertices())
    return WeightSystem(w, check=primitive)


# -- Sylvester simplices ------------------------------------------------------------


def sylvester_simplex(d: int) -> RationalPolytope:
    """conv{0, 2(s_d - 1) e_d, s_{d-1} e_{d-1}, ..., s_1 e_1}."""
    if d < 2:
        raise ConstructionError("Sylvester simplex needs d >= 2")
    pts = [tuple([0] * d)]
    for i in range(1, d + 1):
        scale = 2 * (sylvester(d) - 1) if i == d else sylvester(i)
        pts.append(tuple(scale if j == i - 1 else 0 for j in range(d)))
    return hull(pts, d)


def reflexive_R(d: int) -> RationalPolytope:
    """The Sylvester simplex translated by -(e_1 + ... + e_d)."""
    S = sylvester_simplex(d)
    return hull([tuple(x - 1 for x in v) for v in S.vertices], d)


def sylvester_weights(d: int) -> WeightSystem:
    """(1, 1, 2(s_d-1)/s_{d-1}, ..., 2(s_d-1)/s_1)."""
    top = 2 * (sylvester(d) - 1)
    return WeightSystem([1, 1] + [top // sylvester(i) for i in range(1, d)])


# -- gluing -------------------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionProfile:
    """(d, t, d_i, r_i) of a decomposition into t simplices."""

    d: int
    t: int
    dims: tuple[int, ...]
    shared: tuple[int, ...]

    @property
    def r(self) -> int:
        return sum(self.shared)

    @property
    def n_vertices(self) -> int:
        return self.d + self.t

    def violations(self) -> list[str]:
        out = []
        if sum(self.dims) != self.d + self.r:
            out.append(f"sum of dims {sum(self.dims)} != d + r = {self.d + self.r}")
        if self.shared and self.shared[0] != 0:
            out.append("r_1 must be 0")
        for i, (di, ri) in enumerate(zip(self.dims, self.shared), start=1):
            if not ri < di:
                out.append(f"r_{i} = {ri} is not < d_{i} = {di}")
            if not di <= self.d - self.t + 1:
                out.append(f"d_{i} = {di} exceeds d - t + 1 = {self.d - self.t + 1}")
        return out

    def check(self) -> None:
        bad = self.violations()
        if bad:
            raise GlueError("decomposition constraints violated: " + "; ".join(bad))


@dataclass(frozen=True)
class GluingSpec:
    """t weight systems and vertex identifications between pairs of simplices.

    ``matchings[(i, j)]`` (0-based simplex indices, i < j) is a set of pairs
    (a, b): vertex a of simplex i is identified with vertex b of simplex j.
    Vertex a of simplex i carries weight ``weights[i][a]``.
    """

    weights: tuple[WeightSystem, ...]
    matchings: Mapping[tuple[int, int], frozenset[tuple[int, int]]] = field(default_factory=dict)

    def __post_init__(self):
        ws = tuple(w if isinstance(w, WeightSystem) else WeightSystem(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        clean = {}
        for (i, j), pairs in dict(self.matchings).items():
            if not 0 <= i < j < len(ws):
                raise GlueError(f"bad simplex pair {(i, j)}")
            pairs = frozenset((int(a), int(b)) for a, b in pairs)
            if len({a for a, _ in pairs}) != len(pairs) or len({b for _, b in pairs}) != len(pairs):
                raise GlueError(f"matching {(i, j)} is not a bijection")
            for a, b in pairs:
                if not (0 <= a <= ws[i].dim and 0 <= b <= ws[j].dim):
                    raise GlueError(f"vertex index out of range in matching {(i, j)}")
            if pairs:
                clean[(i, j)] = pairs
        object.__setattr__(self, "matchings", dict(sorted(clean.items())))

    @property
    def t(self) -> int:
        return len(self.weights)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(w.dim for w in self.weights)

    def vertex_classes(self) -> list[list[tuple[int, int]]]:
        """Transitive closure of the identifications, as lists of (simplex, vertex)."""
        parent: dict[tuple[int, int], tuple[int, int]] = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, w in enumerate(self.weights):
            for a in range(w.dim + 1):
                find((i, a))
        for (i, j), pairs in self.matchings.items():
            for a, b in pairs:
                ra, rb = find((i, a)), find((j, b))
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        groups: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for key in sorted(parent):
            groups.setdefault(find(key), []).append(key)
        return sorted(groups.values())

    def closed_matchings(self) -> dict[tuple[int, int], frozenset[tuple[int, int]]]:
        out: dict[tuple[int, int], set[tuple[int, int]]] = {}
        for cls in self.vertex_classes():
            for x in range(len(cls)):
                for y in range(x + 1, len(cls)):
                    (i, a), (j, b) = cls[x], cls[y]
                    if i == j:
                        raise GlueError("two vertices of one simplex are identified")
                    if i > j:
                        (i, a), (j, b) = (j, b), (i, a)
                    out.setdefault((i, j), set()).add((a, b))
        return {k: frozenset(v) for k, v in sorted(out.items())}

    def shared_counts(self, order: Sequence[int] | None = None) -> tuple[int, ...]:
        """r_i: vertices of simplex i identified with a vertex of an earlier
        simplex, listed along ``order`` (default: the given order)."""
        order = list(range(self.t)) if order is None else list(order)
        rank = {i: k for k, i in enumerate(order)}
        r = [0] * self.t
        for cls in self.vertex_classes():
            first = min(rank[i] for i, _ in cls)
            for i, _ in cls:
                if rank[i] != first:
                    r[rank[i]] += 1
        return tuple(r)

    def shared_vertices(self, i: int) -> frozenset[int]:
        """Vertices of simplex i identified with a vertex of any other simplex."""
        out = set()
        for cls in self.vertex_classes():
            if len(cls) > 1:
                out |= {a for j, a in cls if j == i}
        return frozenset(out)

    def is_irredundant(self) -> bool:
        return all(len(self.shared_vertices(i)) < w.dim + 1 for i, w in enumerate(self.weights))

    def to_dict(self) -> dict:
        return {
            "weights": [list(w.weights) for w in self.weights],
            "matchings": {
                f"{i + 1},{j + 1}": sorted([a, b] for a, b in pairs) for (i, j), pairs in self.matchings.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "GluingSpec":
        ws = tuple(WeightSystem(w) for w in data["weights"])
        for w, raw in zip(ws, data["weights"]):
            if list(w.weights) != [int(x) for x in raw]:
                raise GlueError("weights must be listed in ascending order")
        matchings = {}
        for key, pairs in data.get("matchings", {}).items():
            i, j = (int(x) - 1 for x in key.split(","))
            matchings[(i, j)] = frozenset((int(a), int(b)) for a, b in pairs)
        return cls(ws, matchings)

    @classmethod
    def from_json(cls, text: str) -> "GluingSpec":
        return cls.from_dict(json.loads(text))


@dataclass
class GlueResult:
    polytope: RationalPolytope
    profile: DecompositionProfile
    # simplices[i][a]: image of vertex a of simplex i
    simplices: list[list[tuple[int, ...]]]
    projection: LatticeProjection
    spec: GluingSpec


def _offsets(spec: GluingSpec) -> list[int]:
    out, acc = [], 0
    for w in spec.weights:
        out.append(acc)
        acc += w.dim + 1
    return out


def _profile(spec: GluingSpec, d: int) -> DecompositionProfile:
    """Profile along the first simplex ordering that satisfies the
    decomposition constraints; the given order if none does."""
    fallback = None
    for order in itertools.permutations(range(spec.t)):
        prof = DecompositionProfile(d, spec.t, tuple(spec.dims[i] for i in order), spec.shared_counts(order))
        if fallback is None:
            fallback = prof
        if not prof.violations():
            return prof
    return fallback


def glue(spec: GluingSpec, check_profile: bool = True) -> GlueResult:
    """Quotient construction of a polytope from weighted simplices.

    Raises GlueError for inadmissible profiles and degenerate outputs
    (dimension deficit, coincident or non-primitive vertices).
    """
    if not spec.is_irredundant():
        raise GlueError("every simplex needs a vertex that is not identified")
    closed = spec.closed_matchings()
    offs = _offsets(spec)
    m = offs[-1] + spec.weights[-1].dim + 1
    gens = []
    for i, w in enumerate(spec.weights):
        row = [0] * m
        for a, x in enumerate(w.weights):
            row[offs[i] + a] = x
        gens.append(row)
    for (i, j), pairs in closed.items():
        for a, b in sorted(pairs):
            row = [0] * m
            row[offs[i] + a] += 1
            row[offs[j] + b] -= 1
            gens.append(row)
    K = saturate(Sublattice.from_generators(gens, m))
    proj = quotient_projection(K)
    d = proj.rank
    profile = _profile(spec, d)
    if check_profile:
        profile.check()
    images = proj.image_of_basis()
    simplices = [[images[offs[i] + a] for a in range(w.dim + 1)] for i, w in enumerate(spec.weights)]
    classes = spec.vertex_classes()
    class_points = []
    for cls in classes:
        pts = {simplices[i][a] for i, a in cls}
        if len(pts) != 1:
            raise GlueError("internal error: identified vertices have distinct images")
        class_points.append(pts.pop())
    if len(set(class_points)) != len(class_points):
        raise GlueError("degenerate gluing: distinct vertices have coincident images")
    if any(all(x == 0 for x in p) for p in class_points):
        raise GlueError("degenerate gluing: a vertex maps to the origin")
    if not all(is_primitive(p) for p in class_points):
        raise GlueError("degenerate gluing: non-primitive vertex")
    Q = hull(class_points, d)
    if Q.dim < d or d != sum(spec.dims) - profile.r:
        raise GlueError("degenerate gluing: dimension deficit")
    return GlueResult(Q, profile, simplices, proj, spec)


def simplex_from_weights(w: WeightSystem | Sequence[int]) -> RationalPolytope:
    """Lattice simplex with barycentric coordinates proportional to w whose
    vertices generate the ambient lattice (vertex a carries weight w[a])."""
    if not isinstance(w, WeightSystem):
        w = WeightSystem(w)
    return glue(GluingSpec((w,), {})).polytope


# -- explicit duals of weighted simplices -----------------------------------------


def _check_beta(beta: Sequence[Fraction]) -> list[Fraction]:
    beta = [Fraction(b) for b in beta]
    if sum(beta) != 1:
        raise ConstructionError("barycentric coordinates must sum to 1")
    if any(b <= 0 for b in beta):
        raise ConstructionError("barycentric coordinates must be positive")
    return beta


def dual_simplex_vertices(beta, basis, shared, excluded) -> list[tuple[Fraction, ...]]:
    """Vertices of the dual of a simplex written in the lattice basis given by
    the vertices ``basis`` (all vertices except ``excluded``).

    Coordinates refer to the dual basis, in the order of ``basis``. The first
    vertex is opposite ``excluded``; then one vertex opposite each basis
    vertex w, with coordinate 1/beta_w - 1 at w and -1 elsewhere.
    ``shared`` must be a subset of ``basis``; it does not change the result.
    """
    beta = _check_beta(beta)
    basis = list(basis)
    if excluded in basis:
        raise ConstructionError("excluded vertex must not be in the basis")
    if not set(shared) <= set(basis):
        raise ConstructionError("shared vertices must lie in the basis")
    if sorted(basis + [excluded]) != list(range(len(beta))):
        raise ConstructionError("basis and excluded vertex must cover all vertices")
    k = len(basis)
    out = [tuple(Fraction(-1) for _ in range(k))]
    for pos, w in enumerate(basis):
        out.append(tuple((1 / beta[w] - 1) if p == pos else Fraction(-1) for p in range(k)))
    return out


def face_volume_F(beta, basis, shared) -> Fraction:
    """Relative volume of the face of the dual simplex where every shared
    coordinate equals -1: prod over non-shared basis vertices of 1/beta,
    divided by (d_i - q)!."""
    beta = [Fraction(b) for b in beta]
    basis = list(basis)
    shared = set(shared)
    if not shared <= set(basis):
        raise ConstructionError("shared vertices must lie in the basis")
    k = len(basis) - len(shared)
    out = Fraction(1, math.factorial(k))
    for v in basis:
        if v not in shared:
            out /= beta[v]
    return out
