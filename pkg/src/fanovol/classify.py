"""Classification of minimal polytopes glued from minimal simplices.

A case fixes the dimension d, the number t of simplices and their
dimensions. Every gluing specification is built, filtered to minimal
canonical Fano polytopes with d + t vertices, and deduplicated by normal
form. Specifications are pruned up to relabelling symmetries first.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from multiprocessing import get_context
from typing import Iterable, Iterator, Sequence

from .arith import bound_B, format_rational, theorem_bound
from .bounds import BoundReport
from .construct import GluingSpec, GlueError, WeightSystem, glue, reflexive_R, simplex_from_weights
from .lattice import Sublattice, lattice_index
from .polytope import (
    PolytopeError,
    RationalPolytope,
    dual,
    equivalent,
    is_canonical_fano,
    is_minimal,
    normal_form,
    normalized_volume,
)


class ClassificationError(ValueError):
    pass


# -- bundled weight tables ----------------------------------------------------------

_MINIMAL_WEIGHTS = {
    1: [(1, 1)],
    2: [(1, 1, 1), (1, 1, 2)],
    3: [
        (1, 1, 1, 1),
        (1, 1, 1, 2),
        (1, 1, 1, 3),
        (1, 1, 2, 2),
        (1, 1, 2, 3),
        (1, 1, 2, 4),
        (1, 1, 3, 4),
        (1, 1, 3, 5),
        (1, 1, 4, 6),
        (1, 2, 3, 5),
        (1, 3, 4, 5),
        (2, 3, 5, 7),
        (3, 4, 5, 7),
    ],
}

# listed as minimal in older tables; such a simplex contains a (1,1,1,3) sub-simplex
NON_MINIMAL_WEIGHTS = [(2, 2, 3, 5)]


def minimal_simplex_weights(dim: int) -> list[WeightSystem]:
    """Weights of the minimal canonical Fano simplices of dimension 1, 2 or 3."""
    if dim not in _MINIMAL_WEIGHTS:
        raise ClassificationError(f"no bundled weight table in dimension {dim}; external data required")
    return [WeightSystem(w) for w in _MINIMAL_WEIGHTS[dim]]


@dataclass(frozen=True)
class WeightCheck:
    weights: WeightSystem
    canonical: bool
    minimal: bool
    dual_volume: Fraction


def check_weight_system(w: WeightSystem | Sequence[int]) -> WeightCheck:
    S = simplex_from_weights(w)
    canonical = is_canonical_fano(S)
    minimal = canonical and is_minimal(S)
    return WeightCheck(WeightSystem(w), canonical, minimal, normalized_volume(dual(S)) if canonical else Fraction(0))


def verify_weight_table(dim: int) -> list[WeightCheck]:
    return [check_weight_system(w) for w in minimal_simplex_weights(dim)]


# -- cases --------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationCase:
    name: str
    d: int
    t: int
    dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.dims) != self.t:
            raise ClassificationError("need one dimension per simplex")
        if any(not 1 <= x <= self.d - self.t + 1 for x in self.dims):
            raise ClassificationError("simplex dimensions must lie in [1, d - t + 1]")
        if self.r < 0:
            raise ClassificationError("simplex dimensions sum to less than d")

    @property
    def r(self) -> int:
        return sum(self.dims) - self.d

    def weight_lists(self) -> list[list[WeightSystem]]:
        return [minimal_simplex_weights(x) for x in self.dims]


CASES = {
    "dim3-two-triangles": ClassificationCase("dim3-two-triangles", 3, 2, (2, 2)),
    "dim4-three-triangles": ClassificationCase("dim4-three-triangles", 4, 3, (2, 2, 2)),
    "dim4-tetrahedron-triangle": ClassificationCase("dim4-tetrahedron-triangle", 4, 2, (3, 2)),
    "dim4-two-tetrahedra": ClassificationCase("dim4-two-tetrahedra", 4, 2, (3, 3)),
}


def get_case(name: str) -> ClassificationCase:
    try:
        return CASES[name]
    except KeyError:
        raise ClassificationError(f"unknown case {name!r}; known: {', '.join(sorted(CASES))}") from None


# -- spec enumeration ---------------------------------------------------------------


def _compositions(r: int, dims: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """(0, r_2, ..., r_t) with 0 <= r_i < d_i summing to r."""

    def rec(i, left):
        if i == len(dims):
            if left == 0:
                yield ()
            return
        for ri in range(min(left, dims[i] - 1) + 1):
            for rest in rec(i + 1, left - ri):
                yield (ri,) + rest

    for rest in rec(1, r):
        yield (0,) + rest


def _run_perms(w: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Vertex permutations preserving a sorted weight tuple."""
    runs, start = [], 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] != w[start]:
            runs.append(range(start, k))
            start = k
    out = []
    for combo in product(*(permutations(r) for r in runs)):
        perm = [0] * len(w)
        for run, image in zip(runs, combo):
            for a, b in zip(run, image):
                perm[a] = b
        out.append(tuple(perm))
    return out


def spec_key(spec: GluingSpec) -> tuple:
    """Canonical form of a spec under reordering simplices and permuting
    vertices of equal weight."""
    ws = [w.weights for w in spec.weights]
    classes = [c for c in spec.vertex_classes() if len(c) > 1]
    perms = [_run_perms(w) for w in ws]
    best = None
    for pi in permutations(range(spec.t)):
        new_ws = tuple(ws[i] for i in pi)
        if best is not None and new_ws > best[0]:
            continue
        pos = {old: p for p, old in enumerate(pi)}
        for choice in product(*perms):
            mapped = tuple(sorted(tuple(sorted((pos[i], choice[i][a]) for i, a in cls)) for cls in classes))
            key = (new_ws, mapped)
            if best is None or key < best:
                best = key
    return best


def spec_from_key(key: tuple) -> GluingSpec:
    ws, classes = key
    matchings: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for cls in classes:
        (i, a) = cls[0]
        for j, b in cls[1:]:
            matchings.setdefault((i, j), set()).add((a, b))
    return GluingSpec(tuple(WeightSystem(w) for w in ws), {k: frozenset(v) for k, v in matchings.items()})


def _attachments(classes: list[list[tuple[int, int]]], i: int, n_vertices: int, r_i: int):
    """All ways to identify r_i vertices of simplex i with distinct existing classes."""
    for verts in combinations(range(n_vertices), r_i):
        for targets in permutations(range(len(classes)), r_i):
            new = [list(c) for c in classes]
            for a, c in zip(verts, targets):
                new[c].append((i, a))
            for a in range(n_vertices):
                if a not in verts:
                    new.append([(i, a)])
            yield new


def enumerate_gluing_specs(case: ClassificationCase):
    """Yield one GluingSpec per symmetry class of gluing data for the case.

    The generator returns (via StopIteration.value) the number of raw specs
    before symmetry pruning.
    """
    seen = set()
    raw = 0
    weight_lists = case.weight_lists()
    for ws in product(*weight_lists):
        for comp in _compositions(case.r, case.dims):
            stack = [(1, [[(0, a)] for a in range(ws[0].dim + 1)])]
            while stack:
                i, classes = stack.pop()
                if i == case.t:
                    raw += 1
                    spec = spec_from_key((tuple(w.weights for w in ws), tuple(tuple(c) for c in classes if len(c) > 1)))
                    key = spec_key(spec)
                    if key not in seen:
                        seen.add(key)
                        yield spec_from_key(key)
                    continue
                for new in _attachments(classes, i, ws[i].dim + 1, comp[i]):
                    stack.append((i + 1, new))
    return raw


def count_raw_specs(case: ClassificationCase) -> tuple[int, int]:
    """(raw specs, specs after symmetry pruning)."""
    gen = enumerate_gluing_specs(case)
    unique = 0
    while True:
        try:
            next(gen)
            unique += 1
        except StopIteration as stop:
            return stop.value, unique


# -- per-spec pipeline --------------------------------------------------------------

STAGES = ("degenerate", "dimension", "vertex_count", "not_canonical", "not_minimal", "ok")


def process_spec(spec_json: str, d: int, t: int) -> tuple[str, str | None, str]:
    """(stage, normal form or None, spec JSON) for one spec; pure, picklable."""
    spec = GluingSpec.from_json(spec_json)
    try:
        res = glue(spec)
    except GlueError:
        return "degenerate", None, spec_json
    Q = res.polytope
    if Q.dim != d:
        return "dimension", None, spec_json
    if Q.n_vertices != d + t:
        return "vertex_count", None, spec_json
    if not is_canonical_fano(Q):
        return "not_canonical", None, spec_json
    if not is_minimal(Q):
        return "not_minimal", None, spec_json
    return "ok", normal_form(Q).decode(), spec_json


def _process_packed(args):
    return process_spec(*args)


@dataclass
class ClassRecord:
    key: str
    normal_form: str
    spec: GluingSpec
    polytope: RationalPolytope
    n_specs: int
    volume: Fraction
    dual_volume: Fraction
    bound: int
    holds: bool
    generates_lattice: bool

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "normal_form": self.normal_form,
            "spec": self.spec.to_dict(),
            "polytope": self.polytope.to_dict(),
            "n_specs": self.n_specs,
            "volume": format_rational(self.volume),
            "dual_volume": format_rational(self.dual_volume),
            "bound": str(self.bound),
            "holds": self.holds,
            "generates_lattice": self.generates_lattice,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClassRecord":
        return cls(
            key=data["key"],
            normal_form=data["normal_form"],
            spec=GluingSpec.from_dict(data["spec"]),
            polytope=RationalPolytope.from_dict(data["polytope"]),
            n_specs=int(data["n_specs"]),
            volume=Fraction(data["volume"]),
            dual_volume=Fraction(data["dual_volume"]),
            bound=int(data["bound"]),
            holds=bool(data["holds"]),
            generates_lattice=bool(data["generates_lattice"]),
        )


@dataclass
class ClassificationReport:
    case: ClassificationCase
    raw_specs: int
    candidates: int
    stage_counts: dict[str, int]
    classes: list[ClassRecord] = field(default_factory=list)

    @property
    def survivors(self) -> int:
        return self.stage_counts.get("ok", 0)

    @property
    def passed(self) -> bool:
        return all(c.holds and c.generates_lattice for c in self.classes)

    def summary(self) -> dict:
        return {
            "case": self.case.name,
            "d": self.case.d,
            "t": self.case.t,
            "dims": list(self.case.dims),
            "raw_specs": self.raw_specs,
            "candidates": self.candidates,
            "stage_counts": {k: self.stage_counts.get(k, 0) for k in STAGES},
            "survivors": self.survivors,
            "classes": len(self.classes),
            "max_dual_volume": format_rational(max((c.dual_volume for c in self.classes), default=0)),
            "bound": str(bound_B(self.case.d)),
            "passed": self.passed,
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps({"summary": self.summary()}, sort_keys=True)]
        lines += [json.dumps({"class": c.to_dict()}, sort_keys=True) for c in self.classes]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "ClassificationReport":
        summary = None
        classes = []
        for line in text.splitlines():
            if not line.strip():
                continue
            row = json.loads(line)
            if "summary" in row:
                summary = row["summary"]
            elif "class" in row:
                classes.append(ClassRecord.from_dict(row["class"]))
        if summary is None:
            raise ClassificationError("report has no summary line")
        case = CASES.get(summary["case"]) or ClassificationCase(
            summary["case"], summary["d"], summary["t"], tuple(summary["dims"])
        )
        return cls(case, summary["raw_specs"], summary["candidates"], dict(summary["stage_counts"]), classes)

    def table(self) -> str:
        s = self.summary()
        out = [
            f"case {s['case']}: d={s['d']} t={s['t']} dims={tuple(s['dims'])}",
            f"  specs raw={s['raw_specs']} after symmetry={s['candidates']} survivors={s['survivors']} classes={s['classes']}",
            "  " + " ".join(f"{k}={v}" for k, v in s["stage_counts"].items()),
            f"  max Vol(P*)={s['max_dual_volume']} bound={s['bound']} passed={s['passed']}",
        ]
        return "\n".join(out)


def _record(nf: str, specs: list[str], d: int) -> ClassRecord:
    spec = GluingSpec.from_json(min(specs))
    Q = glue(spec).polytope
    vol = normalized_volume(Q)
    dvol = normalized_volume(dual(Q))
    gens = Sublattice.from_generators([list(v) for v in Q.integer_vertices()], d)
    generates = gens.rank == d and lattice_index(Sublattice.full(d), gens) == 1
    bound = theorem_bound(d)
    return ClassRecord(
        key=hashlib.sha256(nf.encode()).hexdigest()[:16],
        normal_form=nf,
        spec=spec,
        polytope=Q,
        n_specs=len(specs),
        volume=vol,
        dual_volume=dvol,
        bound=bound,
        holds=dvol < bound,
        generates_lattice=generates,
    )


def classify(case: ClassificationCase | str, jobs: int = 1, chunksize: int = 8) -> ClassificationReport:
    """Run the full pipeline for a case. Output is independent of ``jobs``."""
    if isinstance(case, str):
        case = get_case(case)
    raw, specs = 0, []
    gen = enumerate_gluing_specs(case)
    while True:
        try:
            specs.append(next(gen).to_json())
        except StopIteration as stop:
            raw = stop.value
            break
    args = [(s, case.d, case.t) for s in specs]
    if jobs > 1:
        with get_context("spawn").Pool(jobs) as pool:
            results = pool.map(_process_packed, args, chunksize=chunksize)
    else:
        results = [process_spec(*a) for a in args]
    stage_counts = {k: 0 for k in STAGES}
    by_nf: dict[str, list[str]] = {}
    for stage, nf, spec_json in results:
        stage_counts[stage] += 1
        if nf is not None:
            by_nf.setdefault(nf, []).append(spec_json)
    classes = [_record(nf, by_nf[nf], case.d) for nf in sorted(by_nf)]
    return ClassificationReport(case, raw, len(specs), stage_counts, classes)


# -- verification -------------------------------------------------------------------

STAGED_COEFF = math.comb(7, 3)


def staged_verify_dim5(report: ClassificationReport | Iterable[ClassRecord]) -> list[BoundReport]:
    """35 * Vol(P'*) * B_3 < B_5 for every 4-dimensional class P' and every
    3-dimensional minimal weight system completing it."""
    classes = report.classes if isinstance(report, ClassificationReport) else list(report)
    rhs = bound_B(5)
    out = []
    for rec in classes:
        lhs = STAGED_COEFF * Fraction(rec.dual_volume) * bound_B(3)
        for w in minimal_simplex_weights(3):
            case = f"{rec.key} + {','.join(map(str, w.weights))}"
            out.append(BoundReport.strict(case, lhs, rhs))
    return out


@dataclass
class TheoremCheck:
    index: int
    d: int
    dual_volume: Fraction | None
    bound: int | None
    strict: bool
    equality: bool
    extremal: bool
    applicable: bool
    error: str | None = None

    @property
    def ok(self) -> bool:
        if self.error is not None:
            return False
        if not self.applicable:
            return True
        if self.d == 3:
            return self.dual_volume <= self.bound
        return self.strict or (self.equality and self.extremal)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "d": self.d,
            "dual_volume": None if self.dual_volume is None else format_rational(self.dual_volume),
            "bound": None if self.bound is None else str(self.bound),
            "strict": self.strict,
            "equality": self.equality,
            "extremal": self.extremal,
            "applicable": self.applicable,
            "ok": self.ok,
            "error": self.error,
        }


def verify_theorem(polytopes: Sequence[RationalPolytope]) -> list[TheoremCheck]:
    """Vol(P*) against 2(s_d - 1)^2 for each canonical Fano input.

    The inequality is asserted for d >= 4, with equality only for the dual
    of the reflexive Sylvester simplex. In dimension 3 the same bound holds
    but two inequivalent simplices attain it; below dimension 3 the bound
    does not apply.
    """
    out = []
    for k, P in enumerate(polytopes):
        d = P.dim
        try:
            if not P.full_dim or not P.is_lattice or not is_canonical_fano(P):
                raise ClassificationError("input is not a canonical Fano polytope")
            dvol = normalized_volume(dual(P))
            bound = theorem_bound(d) if d >= 2 else None
            equality = bound is not None and dvol == bound
            extremal = False
            if equality and d >= 3:
                extremal = equivalent(P, dual(reflexive_R(d)))
            out.append(TheoremCheck(k, d, dvol, bound, bound is not None and dvol < bound, equality, extremal, d >= 3))
        except (ClassificationError, PolytopeError) as exc:
            out.append(TheoremCheck(k, d, None, None, False, False, False, d >= 3, str(exc)))
    return out
