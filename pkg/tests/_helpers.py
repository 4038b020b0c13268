import random

from fanovol.lattice import det


def random_unimodular(rng: random.Random, d: int, steps: int = 12):
    """Product of random elementary matrices and signed permutations."""
    G = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(steps):
        i, j = rng.sample(range(d), 2) if d > 1 else (0, 0)
        if d > 1 and rng.random() < 0.8:
            c = rng.choice([-2, -1, 1, 2])
            G[i] = [a + c * b for a, b in zip(G[i], G[j])]
        elif d > 1:
            G[i], G[j] = G[j], G[i]
        else:
            G[0] = [-G[0][0]]
    assert abs(det(G)) == 1
    return G


def simplex_in_basis(beta, basis, excluded):
    """The simplex with barycentric coordinates beta, written in the lattice
    basis formed by the vertices in ``basis``: vertex w -> e_w, and the
    excluded vertex -> -sum beta_w / beta_excluded e_w."""
    from fanovol.polytope import hull

    k = len(basis)
    pts = [tuple(int(p == q) for q in range(k)) for p in range(k)]
    pts.append(tuple(-beta[w] / beta[excluded] for w in basis))
    return hull(pts, k)


def admissible_choices(n):
    """(basis, shared, excluded) for a simplex with n vertices: one excluded
    vertex and any proper subset of the rest as shared vertices."""
    import itertools

    for excluded in range(n):
        basis = [v for v in range(n) if v != excluded]
        for q in range(len(basis)):
            for shared in itertools.combinations(basis, q):
                yield basis, list(shared), excluded
