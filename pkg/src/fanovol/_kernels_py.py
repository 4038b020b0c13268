"""Pure-Python implementations of the hot kernels.

Same signatures as the compiled ``_kernels_c`` module; used when the
extension is not built or when values would overflow 64-bit integers.
"""

from __future__ import annotations


def box_scan(offsets, normals, strict, lo, hi):
    """Integer points x in the box [lo, hi] with offsets[i] + normals[i].x >= 0
    (> 0 where strict[i]) for every row i.

    Coordinates are scanned lexicographically with interval pruning: at each
    level the remaining coordinates' best case is checked before descending,
    and the last coordinate's range is solved exactly per row.
    """
    d = len(lo)
    m = len(offsets)
    if d == 0:
        ok = all((c > 0) if s else (c >= 0) for c, s in zip(offsets, strict))
        return [()] if ok else []
    # tail_best[k][i]: max of sum_{j >= k} normals[i][j] x_j over the box
    tail_best = [[0] * m for _ in range(d + 1)]
    for k in range(d - 1, -1, -1):
        for i in range(m):
            a = normals[i][k]
            tail_best[k][i] = tail_best[k + 1][i] + (a * hi[k] if a > 0 else a * lo[k])
    need = [1 if s else 0 for s in strict]
    out: list[tuple[int, ...]] = []
    prefix = [0] * d
    partial = list(offsets)

    def last(partial):
        k = d - 1
        low, high = lo[k], hi[k]
        for i in range(m):
            a = normals[i][k]
            rhs = need[i] - partial[i]  # need a*x >= rhs
            if a > 0:
                b = -((-rhs) // a)
                if b > low:
                    low = b
            elif a < 0:
                b = (-rhs) // (-a)  # x <= floor(-rhs / -a)
                if b < high:
                    high = b
            elif rhs > 0:
                return
            if low > high:
                return
        for x in range(low, high + 1):
            prefix[k] = x
            out.append(tuple(prefix))

    def rec(k, partial):
        if k == d - 1:
            last(partial)
            return
        tb = tail_best[k + 1]
        for x in range(lo[k], hi[k] + 1):
            nxt = [p + row[k] * x for p, row in zip(partial, normals)]
            if any(p + t < n for p, t, n in zip(nxt, tb, need)):
                continue
            prefix[k] = x
            rec(k + 1, nxt)

    rec(0, partial)
    return out
