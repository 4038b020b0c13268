"""Double description method on integer data.

``extreme_rays`` computes the extreme rays of the pointed cone
{x : A x >= 0}; the same routine converts vertices to facets (rows are
homogenised points) and inequalities to vertices (rows are homogenised
inequalities).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .lattice import inverse, nullspace, row_echelon


class HullError(ValueError):
    pass


def _primitive_int(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g > 1:
        return [x // g for x in v]
    return v


def _independent_rows(rows: list[list[int]], n: int) -> list[int]:
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for b, p in zip(basis, pivots):
            if v[p]:
                f = v[p] / b[p]
                v = [a - f * c for a, c in zip(v, b)]
        p = next((j for j, x in enumerate(v) if x), None)
        if p is None:
            continue
        basis.append(v)
        pivots.append(p)
        chosen.append(idx)
        if len(chosen) == n:
            break
    return chosen


def extreme_rays(rows: list[list[int]]) -> list[tuple[list[int], int]]:
    """Extreme rays of {x : row . x >= 0 for all rows} as (ray, zero-set bitmask).

    The rows must have full column rank so the cone is pointed. Rays are
    primitive integer vectors; bit i of the mask is set iff row i vanishes
    on the ray.
    """
    if not rows:
        raise HullError("no constraints")
    n = len(rows[0])
    init = _independent_rows(rows, n)
    if len(init) < n:
        raise HullError("constraint matrix does not have full column rank")
    inv = inverse([rows[i] for i in init])
    rays: list[list[int]] = []
    masks: list[int] = []
    full_init = 0
    for i in init:
        full_init |= 1 << i
    for j in range(n):
        col = [inv[r][j] for r in range(n)]
        den = 1
        for x in col:
            den = math.lcm(den, x.denominator)
        rays.append(_primitive_int([int(x * den) for x in col]))
        masks.append(full_init & ~(1 << init[j]))
    # rows outside the initial basis may already vanish on initial rays
    init_set = set(init)
    order = [i for i in range(len(rows)) if i not in init_set]
    for idx in order:
        a = rows[idx]
        bit = 1 << idx
        vals = [sum(x * y for x, y in zip(a, r)) for r in rays]
        pos = [k for k, s in enumerate(vals) if s > 0]
        neg = [k for k, s in enumerate(vals) if s < 0]
        zero = [k for k, s in enumerate(vals) if s == 0]
        if not neg:
            for k in zero:
                masks[k] |= bit
            continue
        new_rays: list[list[int]] = []
        new_masks: list[int] = []
        if pos:
            need = n - 2
            for p in pos:
                mp = masks[p]
                for q in neg:
                    common = mp & masks[q]
                    if common.bit_count() < need:
                        continue
                    adjacent = True
                    for k in range(len(rays)):
                        if k != p and k != q and (masks[k] & common) == common:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    sp, sq = vals[p], vals[q]
                    rp, rq = rays[p], rays[q]
                    r = [sp * y - sq * x for x, y in zip(rp, rq)]
                    new_rays.append(_primitive_int(r))
                    new_masks.append(common | bit)
        keep = pos + zero
        zero_set = set(zero)
        rays = [rays[k] for k in keep] + new_rays
        masks = [masks[k] | (bit if k in zero_set else 0) for k in keep] + new_masks
    return list(zip(rays, masks))


@dataclass
class HullData:
    """Raw convex hull output in the caller's coordinates."""

    dim: int
    vertices: list[tuple[Fraction, ...]]
    # (c, a) integer rows: c + a.x >= 0 on the hull, tight on a facet
    facet_rows: list[tuple[int, tuple[int, ...]]]
    # facet -> frozenset of vertex indices
    incidence: list[frozenset[int]]
    # (e0, e) integer rows: e0 + e.x == 0 on the affine hull
    equations: list[tuple[int, tuple[int, ...]]]


def _integer_row(c: Fraction, a: list[Fraction]) -> tuple[int, tuple[int, ...]]:
    den = c.denominator
    for x in a:
        den = math.lcm(den, x.denominator)
    ints = [int(c * den)] + [int(x * den) for x in a]
    ints = _primitive_int(ints)
    return ints[0], tuple(ints[1:])


def convex_hull(points) -> HullData:
    """Irredundant vertices and facets of the convex hull of rational points."""
    pts: list[tuple[Fraction, ...]] = []
    seen = set()
    for p in points:
        q = tuple(Fraction(x) for x in p)
        if q not in seen:
            seen.add(q)
            pts.append(q)
    if not pts:
        raise HullError("empty point set")
    d = len(pts[0])
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    if diffs:
        _, pivots = row_echelon(diffs)
    else:
        pivots = []
    k = len(pivots)
    eq_basis = nullspace(diffs, d) if diffs else [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    equations = []
    for e in eq_basis:
        off = -sum(x * y for x, y in zip(e, p0))
        equations.append(_integer_row(off, e))
    if k == 0:
        return HullData(0, [p0], [], [], equations)
    proj = [[p[c] for c in pivots] for p in pts]
    rows = []
    for q in proj:
        den = 1
        for x in q:
            den = math.lcm(den, x.denominator)
        rows.append([den] + [int(x * den) for x in q])
    rays = extreme_rays(rows)
    npts = len(pts)
    facet_rows = []
    facet_masks = []
    for ray, mask in rays:
        c, a = ray[0], ray[1:]
        full = [0] * d
        for c_idx, val in zip(pivots, a):
            full[c_idx] = val
        facet_rows.append((c, tuple(full)))
        facet_masks.append(mask)
    # a point is a vertex iff the facets through it have normals of rank k
    vertex_idx = []
    for i in range(npts):
        bit = 1 << i
        through = [ray[1:] for (ray, mask) in rays if mask & bit]
        if len(through) >= k and len(row_echelon(through)[1]) == k:
            vertex_idx.append(i)
    remap = {old: new for new, old in enumerate(vertex_idx)}
    incidence = []
    for mask in facet_masks:
        incidence.append(frozenset(remap[i] for i in vertex_idx if mask & (1 << i)))
    vertices = [pts[i] for i in vertex_idx]
    return HullData(k, vertices, facet_rows, incidence, equations)


def vertices_from_inequalities(rows) -> list[tuple[Fraction, ...]]:
    """Vertices of the bounded polyhedron {x : c + a.x >= 0 for (c, a) in rows}.

    Returns an empty list if the polyhedron is empty. Raises HullError if it
    is unbounded.
    """
    rows = [[int(c)] + [int(x) for x in a] for c, a in rows]
    n = len(rows[0])
    # homogenising constraint x0 >= 0
    cone_rows = rows + [[1] + [0] * (n - 1)]
    try:
        rays = extreme_rays(cone_rows)
    except HullError:
        return []
    out = []
    seen = set()
    for ray, _ in rays:
        if ray[0] == 0:
            if any(ray[1:]):
                raise HullError("polyhedron is unbounded")
            continue
        v = tuple(Fraction(x, ray[0]) for x in ray[1:])
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out
