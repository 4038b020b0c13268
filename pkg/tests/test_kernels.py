import itertools
import random

import pytest

from fanovol import kernels
from fanovol._kernels_py import box_scan as py_scan


def brute(offsets, normals, strict, lo, hi):
    out = []
    for x in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        ok = True
        for c, row, s in zip(offsets, normals, strict):
            v = c + sum(a * b for a, b in zip(row, x))
            if v < 0 or (s and v == 0):
                ok = False
                break
        if ok:
            out.append(x)
    return out


def random_instance(rng, d):
    m = rng.randint(1, 6)
    offsets = [rng.randint(-3, 8) for _ in range(m)]
    normals = [[rng.randint(-3, 3) for _ in range(d)] for _ in range(m)]
    strict = [rng.random() < 0.3 for _ in range(m)]
    lo = [rng.randint(-4, 0) for _ in range(d)]
    hi = [a + rng.randint(0, 5) for a in lo]
    return offsets, normals, strict, lo, hi


backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])


@pytest.mark.parametrize("backend", backends)
def test_box_scan_matches_brute_force(backend):
    rng = random.Random(11)
    for _ in range(300):
        d = rng.randint(1, 4)
        inst = random_instance(rng, d)
        assert list(kernels.box_scan(*inst, backend=backend)) == brute(*inst)


def test_backends_agree_on_large_box():
    offsets = [10, 10, 10, 10, 10]
    normals = [[1, 0, 0, 0], [-1, 0, 0, 0], [0, 1, 1, 0], [0, -1, -1, 1], [0, 0, 0, -1]]
    strict = [False, True, False, False, True]
    lo, hi = [-10] * 4, [10] * 4
    ref = py_scan(offsets, normals, strict, lo, hi)
    assert list(kernels.box_scan(offsets, normals, strict, lo, hi)) == list(ref)


def test_zero_dimensional_scan():
    assert list(py_scan([1], [[]], [True], [], [])) == [()]
    assert list(py_scan([0], [[]], [True], [], [])) == []


def test_huge_values_fall_back_to_python():
    big = 1 << 70
    out = kernels.box_scan([big], [[1]], [False], [-2], [2])
    assert list(out) == [(-2,), (-1,), (0,), (1,), (2,)]


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
