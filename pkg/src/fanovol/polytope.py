"""Exact rational polytopes.

A :class:`RationalPolytope` carries both descriptions eagerly: an irredundant
vertex list and an irredundant facet list, plus the affine-hull equations
when it is not full-dimensional. Facets are stored as ``(normal, offset)``
meaning ``<normal, x> >= offset``; when the origin is strictly interior the
offset is -1 (so the dual is a transposition of data), otherwise the normal
is a primitive integer vector.
"""

from __future__ import annotations

import itertools
import json
import math
from fractions import Fraction
from typing import Iterable, Sequence

from . import kernels
from .arith import format_rational, parse_rational
from .hull import convex_hull
from .lattice import (
    Sublattice,
    det,
    hermite_normal_form,
    integer_inverse,
    inverse,
    rank,
    saturate,
    smith_normal_form,
    solve_left,
    vecmat,
)

Vector = tuple[Fraction, ...]


class PolytopeError(ValueError):
    pass


class RationalPolytope:
    """Immutable polytope with exact rational vertices and facets."""

    __slots__ = (
        "ambient_dim",
        "dim",
        "vertices",
        "facets",
        "facet_rows",
        "incidence",
        "equations",
        "_cache",
    )

    def __init__(self, ambient_dim, dim, vertices, facet_rows, incidence, equations):
        self.ambient_dim = ambient_dim
        self.dim = dim
        self.vertices: tuple[Vector, ...] = tuple(tuple(Fraction(x) for x in v) for v in vertices)
        self.facet_rows: tuple[tuple[int, tuple[int, ...]], ...] = tuple(
            (int(c), tuple(int(x) for x in a)) for c, a in facet_rows
        )
        self.incidence: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in incidence)
        self.equations = tuple(equations)
        self._cache: dict = {}
        full = dim == ambient_dim
        origin_inside = full and all(c > 0 for c, _ in self.facet_rows)
        facets = []
        for c, a in self.facet_rows:
            if origin_inside:
                facets.append((tuple(Fraction(x, c) for x in a), Fraction(-1)))
            else:
                g = 0
                for x in a:
                    g = math.gcd(g, x)
                facets.append((tuple(Fraction(x // g) for x in a), Fraction(-c, g)))
        self.facets: tuple[tuple[Vector, Fraction], ...] = tuple(facets)

    # -- basic predicates ---------------------------------------------------------

    @property
    def full_dim(self) -> bool:
        return self.dim == self.ambient_dim

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def is_lattice(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    @property
    def origin_interior(self) -> bool:
        """True iff 0 lies in the (full-dimensional) interior."""
        return self.full_dim and all(c > 0 for c, _ in self.facet_rows)

    def integer_vertices(self) -> list[tuple[int, ...]]:
        if not self.is_lattice:
            raise PolytopeError("polytope has rational vertices")
        return [tuple(int(x) for x in v) for v in self.vertices]

    def _value(self, row, x) -> Fraction:
        c, a = row
        return c + sum(ai * xi for ai, xi in zip(a, x))

    def contains(self, x) -> bool:
        x = [Fraction(v) for v in x]
        if any(self._value(e, x) != 0 for e in self.equations):
            return False
        return all(self._value(r, x) >= 0 for r in self.facet_rows)

    def contains_relative_interior(self, x) -> bool:
        x = [Fraction(v) for v in x]
        if any(self._value(e, x) != 0 for e in self.equations):
            return False
        return all(self._value(r, x) > 0 for r in self.facet_rows)

    def sorted_vertices(self) -> tuple[Vector, ...]:
        return tuple(sorted(self.vertices))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalPolytope):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.sorted_vertices() == other.sorted_vertices()

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.sorted_vertices()))

    def __repr__(self) -> str:
        verts = ", ".join("(" + ",".join(format_rational(x) for x in v) + ")" for v in self.vertices)
        return f"RationalPolytope(dim={self.dim}, ambient={self.ambient_dim}, vertices=[{verts}])"

    # -- serialization --------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.ambient_dim,
            "vertices": [[format_rational(x) for x in v] for v in self.vertices],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "RationalPolytope":
        verts = [[parse_rational(str(x)) for x in v] for v in data["vertices"]]
        d = int(data["dim"])
        if any(len(v) != d for v in verts):
            raise PolytopeError("vertex length does not match 'dim'")
        P = hull(verts, ambient_dim=d)
        if P.n_vertices != len(verts):
            raise PolytopeError("vertex list is redundant")
        return P

    @classmethod
    def from_json(cls, text: str) -> "RationalPolytope":
        return cls.from_dict(json.loads(text))


# -- construction -----------------------------------------------------------------


def hull(points: Iterable[Sequence], ambient_dim: int | None = None) -> RationalPolytope:
    """Convex hull of a nonempty finite set of rational points."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if not pts:
        raise PolytopeError("hull of an empty point set")
    d = len(pts[0]) if ambient_dim is None else ambient_dim
    if d == 0:
        return RationalPolytope(0, 0, [()], [], [], [])
    h = convex_hull(pts)
    return RationalPolytope(d, h.dim, h.vertices, h.facet_rows, h.incidence, h.equations)


def standard_simplex(q: int) -> RationalPolytope:
    """conv{0, e_1, ..., e_q}."""
    if q < 0:
        raise PolytopeError("q must be nonnegative")
    pts = [tuple([0] * q)] + [tuple(int(i == j) for j in range(q)) for i in range(q)]
    return hull(pts, ambient_dim=q)


def transform(P: RationalPolytope, G) -> RationalPolytope:
    """Image of P under x -> G x."""
    return hull([tuple(sum(g * x for g, x in zip(row, v)) for row in G) for v in P.vertices], P.ambient_dim)


def translate(P: RationalPolytope, t) -> RationalPolytope:
    return hull([tuple(x + Fraction(s) for x, s in zip(v, t)) for v in P.vertices], P.ambient_dim)


def dual(P: RationalPolytope) -> RationalPolytope:
    """Polar {y : <y, x> >= -1 for all x in P}."""
    if not P.origin_interior:
        raise PolytopeError("dual unbounded: the origin is not an interior point")
    verts = [normal for normal, _ in P.facets]
    rows = []
    for v in P.vertices:
        den = 1
        for x in v:
            den = math.lcm(den, x.denominator)
        a = [int(x * den) for x in v]
        g = den
        for x in a:
            g = math.gcd(g, x)
        rows.append((den // g, tuple(x // g for x in a)))
    n = P.n_vertices
    incidence = [frozenset(j for j, fs in enumerate(P.incidence) if i in fs) for i in range(n)]
    return RationalPolytope(P.ambient_dim, P.ambient_dim, verts, rows, incidence, [])


def free_sum(P: RationalPolytope, Q: RationalPolytope) -> RationalPolytope:
    zp = [0] * P.ambient_dim
    zq = [0] * Q.ambient_dim
    if not P.contains(zp) or not Q.contains(zq):
        raise PolytopeError("free sum requires both polytopes to contain the origin")
    pts = [tuple(v) + tuple(zq) for v in P.vertices] + [tuple(zp) + tuple(w) for w in Q.vertices]
    return hull(pts, P.ambient_dim + Q.ambient_dim)


def product(P: RationalPolytope, Q: RationalPolytope) -> RationalPolytope:
    pts = [tuple(v) + tuple(w) for v in P.vertices for w in Q.vertices]
    return hull(pts, P.ambient_dim + Q.ambient_dim)


# -- faces, triangulation and volume ----------------------------------------------


def _subfaces(face: frozenset[int], facets: Sequence[frozenset[int]]) -> list[frozenset[int]]:
    cands = {face & f for f in facets}
    cands.discard(face)
    cands.discard(frozenset())
    return [c for c in cands if not any(c < o for o in cands)]


def triangulation(P: RationalPolytope, pivot: str = "min") -> list[tuple[int, ...]]:
    """Pulling triangulation of P as tuples of vertex indices.

    ``pivot`` picks the apex of each face: its smallest ("min") or largest
    ("max") vertex index. Both give valid triangulations.
    """
    choose = min if pivot == "min" else max
    facets = P.incidence
    memo: dict[frozenset[int], list[tuple[int, ...]]] = {}

    def tri(face: frozenset[int], k: int) -> list[tuple[int, ...]]:
        if face in memo:
            return memo[face]
        if len(face) == k + 1:
            out = [tuple(sorted(face))]
        else:
            apex = choose(face)
            out = []
            for sub in _subfaces(face, facets):
                if apex in sub:
                    continue
                for s in tri(sub, k - 1):
                    out.append((apex,) + s)
        memo[face] = out
        return out

    return tri(frozenset(range(P.n_vertices)), P.dim)


def _affine_lattice_coords(P: RationalPolytope) -> list[list[Fraction]]:
    """Vertex coordinates (relative to vertex 0) in a basis of the lattice
    lin(P - P) cap Z^n."""
    v0 = P.vertices[0]
    diffs = [[a - b for a, b in zip(v, v0)] for v in P.vertices]
    if P.full_dim:
        return diffs
    gens = []
    for row in diffs[1:]:
        den = 1
        for x in row:
            den = math.lcm(den, x.denominator)
        gens.append([int(x * den) for x in row])
    L = saturate(Sublattice.from_generators(gens, P.ambient_dim))
    coords = solve_left(L.rows(), diffs)
    if coords is None:
        raise PolytopeError("internal error: vertices outside their affine lattice")
    return coords


def normalized_volume(P: RationalPolytope, pivot: str = "min") -> Fraction:
    """Normalised lattice volume dim(P)! * vol(P) in the affine lattice of P."""
    if P.dim == 0:
        return Fraction(1)
    coords = _affine_lattice_coords(P)
    total = Fraction(0)
    for simplex in triangulation(P, pivot):
        base = coords[simplex[0]]
        M = [[a - b for a, b in zip(coords[i], base)] for i in simplex[1:]]
        total += abs(det(M))
    return total


def volume(P: RationalPolytope, pivot: str = "min") -> Fraction:
    """Relative lattice volume of P."""
    return normalized_volume(P, pivot) / math.factorial(P.dim)


# -- lattice points ---------------------------------------------------------------


def _bounding_box(P: RationalPolytope) -> tuple[list[int], list[int]]:
    lo = [math.ceil(min(v[j] for v in P.vertices)) for j in range(P.ambient_dim)]
    hi = [math.floor(max(v[j] for v in P.vertices)) for j in range(P.ambient_dim)]
    return lo, hi


def _scan(P: RationalPolytope, strict_facets: bool) -> list[tuple[int, ...]]:
    lo, hi = _bounding_box(P)
    if any(a > b for a, b in zip(lo, hi)):
        return []
    offsets, normals, strict = [], [], []
    for c, a in P.facet_rows:
        offsets.append(c)
        normals.append(list(a))
        strict.append(strict_facets)
    for e0, e in P.equations:
        offsets += [e0, -e0]
        normals += [list(e), [-x for x in e]]
        strict += [False, False]
    return kernels.box_scan(offsets, normals, strict, lo, hi)


def simplex_lattice_points(verts: Sequence[Sequence[int]]) -> set[tuple[int, ...]]:
    """Lattice points of a full-dimensional lattice simplex, one coset
    representative of Z^d / <edges> at a time.

    Cost is proportional to the normalised volume, so this is an independent
    cross-check of the box scan rather than the default path.
    """
    u0 = tuple(verts[0])
    W = [[a - b for a, b in zip(v, u0)] for v in verts[1:]]
    S, _, V = smith_normal_form(W)
    diag = [S[i][i] for i in range(len(W))]
    Vinv = integer_inverse(V)
    Winv = inverse(W)
    out = {tuple(v) for v in verts}
    for y in itertools.product(*[range(x) for x in diag]):
        z = vecmat(y, Vinv)
        lam = vecmat(z, Winv)
        frac = [x - math.floor(x) for x in lam]
        if sum(frac) <= 1:
            p = vecmat(frac, W)
            out.add(tuple(int(a + b) for a, b in zip(u0, p)))
    return out


def lattice_points(P: RationalPolytope) -> tuple[tuple[int, ...], ...]:
    """All integer points of P, sorted lexicographically."""
    if "points" not in P._cache:
        P._cache["points"] = tuple(_scan(P, strict_facets=False))
    return P._cache["points"]


def interior_lattice_points(P: RationalPolytope) -> tuple[tuple[int, ...], ...]:
    """Integer points of the relative interior of P, sorted."""
    if "interior" not in P._cache:
        if "points" in P._cache or not P.facet_rows:
            result = tuple(p for p in lattice_points(P) if P.contains_relative_interior(p))
        else:
            result = tuple(_scan(P, strict_facets=True))
        P._cache["interior"] = result
    return P._cache["interior"]


# -- Fano predicates --------------------------------------------------------------


def is_canonical_fano(P: RationalPolytope) -> bool:
    """Full-dimensional lattice polytope whose only interior lattice point is 0."""
    if not P.full_dim or not P.is_lattice or not P.origin_interior:
        return False
    return interior_lattice_points(P) == (tuple([0] * P.ambient_dim),)


def _canonical_given_points(Q: RationalPolytope, pts: Sequence[tuple[int, ...]]) -> bool:
    # pts must be exactly the lattice points of Q
    if not Q.full_dim or not Q.origin_interior:
        return False
    origin = tuple([0] * Q.ambient_dim)
    return not any(p != origin and Q.contains_relative_interior(p) for p in pts)


def is_minimal(P: RationalPolytope) -> bool:
    """No vertex v has conv(P cap N minus v) a full-dimensional canonical Fano polytope."""
    if not is_canonical_fano(P):
        raise PolytopeError("minimality is only defined for canonical Fano polytopes")
    pts = lattice_points(P)
    for v in P.integer_vertices():
        rest = [p for p in pts if p != v]
        Q = hull(rest, P.ambient_dim)
        if _canonical_given_points(Q, rest):
            return False
    return True


def is_reflexive(P: RationalPolytope) -> bool:
    if not is_canonical_fano(P):
        raise PolytopeError("reflexivity is only defined for canonical Fano polytopes")
    return dual(P).is_lattice


# -- unimodular normal form -------------------------------------------------------


def pairing_matrix(P: RationalPolytope) -> list[list[int]]:
    """Entry (i, j): lattice distance of vertex i from facet j."""
    verts = P.integer_vertices()
    out = []
    for v in verts:
        out.append([c + sum(a * x for a, x in zip(row, v)) for c, row in P.facet_rows])
    return out


def _rank_colors(sigs: list) -> list[int]:
    order = {s: i for i, s in enumerate(sorted(set(sigs)))}
    return [order[s] for s in sigs]


def _refine(M, rc: list[int], cc: list[int]) -> tuple[list[int], list[int]]:
    n, f = len(M), len(M[0])
    while True:
        nr, nc = len(set(rc)), len(set(cc))
        rc = _rank_colors([(rc[i], tuple(sorted((M[i][j], cc[j]) for j in range(f)))) for i in range(n)])
        cc = _rank_colors([(cc[j], tuple(sorted((M[i][j], rc[i]) for i in range(n)))) for j in range(f)])
        if len(set(rc)) == nr and len(set(cc)) == nc:
            return rc, cc


def _leaf_orders(M) -> list[tuple[int, ...]]:
    """Canonical vertex orderings by individualisation and refinement."""
    n, f = len(M), len(M[0])
    leaves: list[tuple[int, ...]] = []

    def search(rc, cc):
        rc, cc = _refine(M, rc, cc)
        if len(set(rc)) == n:
            leaves.append(tuple(sorted(range(n), key=lambda i: rc[i])))
            return
        sizes: dict[int, int] = {}
        for c in rc:
            sizes[c] = sizes.get(c, 0) + 1
        target = min(c for c, s in sizes.items() if s > 1)
        for i in range(n):
            if rc[i] == target:
                new = [2 * c + (0 if (k == i or c != target) else 1) for k, c in enumerate(rc)]
                search(_rank_colors(new), cc)

    search([0] * n, [0] * f)
    return leaves


def normal_form(P: RationalPolytope) -> bytes:
    """GL(Z)-invariant key of a lattice polytope with the origin in its interior."""
    if not P.is_lattice:
        raise PolytopeError("normal form requires lattice vertices")
    if not P.origin_interior:
        raise PolytopeError("normal form requires the origin in the interior")
    if "nf" in P._cache:
        return P._cache["nf"]
    M = pairing_matrix(P)
    verts = P.integer_vertices()
    f = len(M[0])
    best_pm = None
    best_orders: list[tuple[int, ...]] = []
    for order in _leaf_orders(M):
        cols = sorted((tuple(M[i][j] for i in order) for j in range(f)), reverse=True)
        key = tuple(cols)
        if best_pm is None or key > best_pm:
            best_pm, best_orders = key, [order]
        elif key == best_pm:
            best_orders.append(order)
    best_h = None
    d = P.ambient_dim
    for order in best_orders:
        mat = [[verts[i][r] for i in order] for r in range(d)]
        H, _ = hermite_normal_form(mat)
        h = tuple(tuple(row) for row in H)
        if best_h is None or h < best_h:
            best_h = h
    key = json.dumps(
        {"d": d, "n": P.n_vertices, "pm": [list(c) for c in best_pm], "hnf": [list(r) for r in best_h]},
        separators=(",", ":"),
    ).encode()
    P._cache["nf"] = key
    return key


def equivalent(P: RationalPolytope, Q: RationalPolytope) -> bool:
    return normal_form(P) == normal_form(Q)


def unimodular_map(P: RationalPolytope, Q: RationalPolytope):
    """Search for G in GL_d(Z) with G(vert P) = vert Q by matching vertices.

    Independent of :func:`normal_form`; exponential in the vertex count, so
    only meant for small polytopes. Returns G or None.
    """
    if P.ambient_dim != Q.ambient_dim or P.n_vertices != Q.n_vertices:
        return None
    d = P.ambient_dim
    vp = P.integer_vertices()
    vq = set(Q.integer_vertices())
    vq_list = Q.integer_vertices()
    basis_idx: list[int] = []
    for i in range(len(vp)):
        trial = [vp[j] for j in basis_idx + [i]]
        if len(trial) <= d and _rank(trial) == len(trial):
            basis_idx.append(i)
        if len(basis_idx) == d:
            break
    B = [list(vp[i]) for i in basis_idx]
    Binv = inverse(B)
    for images in itertools.permutations(range(len(vq_list)), d):
        Bp = [list(vq_list[k]) for k in images]
        # rows: v G^T = v'  =>  G^T = B^{-1} B'
        Gt = [[sum(Binv[i][k] * Bp[k][j] for k in range(d)) for j in range(d)] for i in range(d)]
        if any(x.denominator != 1 for row in Gt for x in row):
            continue
        Gt = [[int(x) for x in row] for row in Gt]
        if abs(det(Gt)) != 1:
            continue
        mapped = {tuple(vecmat(v, Gt)) for v in vp}
        if mapped == vq:
            return [list(col) for col in zip(*Gt)]
    return None


def _rank(vectors) -> int:
    return rank([list(v) for v in vectors])


def lattice_points_to_json(points) -> str:
    return json.dumps([list(p) for p in points])
