import json
from fractions import Fraction

import pytest

from fanovol.arith import bound_B
from fanovol.classify import (
    CASES,
    NON_MINIMAL_WEIGHTS,
    ClassificationCase,
    ClassificationError,
    ClassificationReport,
    ClassRecord,
    check_weight_system,
    classify,
    count_raw_specs,
    enumerate_gluing_specs,
    get_case,
    minimal_simplex_weights,
    process_spec,
    spec_from_key,
    spec_key,
    staged_verify_dim5,
    verify_theorem,
    verify_weight_table,
)
from fanovol.construct import GluingSpec, glue, reflexive_R
from fanovol.lattice import Sublattice, lattice_index
from fanovol.polytope import dual, hull, normal_form

P1113 = hull([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -3)])


def test_weight_tables():
    assert [w.weights for w in minimal_simplex_weights(1)] == [(1, 1)]
    assert [w.weights for w in minimal_simplex_weights(2)] == [(1, 1, 1), (1, 1, 2)]
    dim3 = minimal_simplex_weights(3)
    assert len(dim3) == 13 and (3, 4, 5, 7) in [w.weights for w in dim3]
    with pytest.raises(ClassificationError):
        minimal_simplex_weights(4)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_bundled_weights_give_minimal_canonical_simplices(dim):
    assert all(c.canonical and c.minimal for c in verify_weight_table(dim))


def test_excluded_weight_system_is_canonical_but_not_minimal():
    (w,) = NON_MINIMAL_WEIGHTS
    c = check_weight_system(w)
    assert c.canonical and not c.minimal


def test_case_validation():
    assert get_case("dim4-two-tetrahedra").r == 2
    with pytest.raises(ClassificationError):
        get_case("nope")
    with pytest.raises(ClassificationError):
        ClassificationCase("bad", 4, 2, (4, 1))
    with pytest.raises(ClassificationError):
        ClassificationCase("bad", 4, 2, (2,))


def test_three_triangles_specs_share_one_vertex_each():
    specs = list(enumerate_gluing_specs(get_case("dim4-three-triangles")))
    assert specs and all(glue(s).profile.shared == (0, 1, 1) for s in specs)


def test_two_tetrahedra_specs_share_two_vertices():
    specs = list(enumerate_gluing_specs(get_case("dim4-two-tetrahedra")))
    assert all(len(s.matchings[(0, 1)]) == 2 for s in specs)
    raw, unique = count_raw_specs(get_case("dim4-two-tetrahedra"))
    assert unique == len(specs)
    assert 10**3 <= unique <= raw <= 10**5


def test_spec_key_is_a_symmetry_invariant():
    a = GluingSpec(((1, 1, 1, 3), (1, 1, 1, 2)), {(0, 1): {(0, 3), (3, 0)}})
    b = GluingSpec(((1, 1, 1, 2), (1, 1, 1, 3)), {(0, 1): {(3, 0), (0, 3)}})
    c = GluingSpec(((1, 1, 1, 3), (1, 1, 1, 2)), {(0, 1): {(2, 3), (3, 1)}})
    assert spec_key(a) == spec_key(b) == spec_key(c)
    assert spec_key(spec_from_key(spec_key(a))) == spec_key(a)
    d = GluingSpec(((1, 1, 1, 3), (1, 1, 1, 2)), {(0, 1): {(0, 0), (1, 1)}})
    assert spec_key(d) != spec_key(a)


def test_process_spec_stages():
    good = GluingSpec(((1, 1, 1), (1, 1, 1)), {(0, 1): {(0, 0)}}).to_json()
    stage, nf, _ = process_spec(good, 3, 2)
    assert stage == "ok" and nf
    bad = GluingSpec(((1, 1, 1), (1, 1, 1)), {(0, 1): {(0, 0), (1, 1)}}).to_json()
    assert process_spec(bad, 3, 2)[0] == "degenerate"


@pytest.mark.parametrize(
    "name,count,max_dual",
    [("dim3-two-triangles", 3, 64), ("dim4-three-triangles", 4, 768), ("dim4-tetrahedron-triangle", 40, 864)],
)
def test_small_case_counts(name, count, max_dual):
    rep = classify(name)
    assert len(rep.classes) == count
    assert max(c.dual_volume for c in rep.classes) == max_dual
    assert rep.passed


def _check_report_invariants(rep):
    case = rep.case
    assert len(rep.classes) <= rep.survivors <= rep.candidates <= rep.raw_specs
    assert sum(rep.stage_counts.values()) == rep.candidates
    assert sum(c.n_specs for c in rep.classes) == rep.survivors
    nfs = [c.normal_form for c in rep.classes]
    assert nfs == sorted(nfs) and len(set(nfs)) == len(nfs)
    d = case.d
    for c in rep.classes:
        Q = c.polytope
        res = glue(c.spec)
        prof = res.profile
        assert sum(prof.dims) == d + prof.r
        assert all(ri < di <= d - case.t + 1 for ri, di in zip(prof.shared, prof.dims))
        assert Q.n_vertices == d + case.t <= 2 * d
        # re-gluing from the recorded spec reproduces the class
        assert normal_form(res.polytope).decode() == c.normal_form
        gens = Sublattice.from_generators([list(v) for v in Q.integer_vertices()], d)
        assert lattice_index(Sublattice.full(d), gens) == 1 and c.generates_lattice
        assert c.dual_volume < bound_B(d) and c.holds


def test_report_invariants_small(triangles_report, tet_tri_report):
    _check_report_invariants(triangles_report)
    _check_report_invariants(tet_tri_report)


def test_report_invariants_two_tetrahedra(tetrahedra_report):
    assert len(tetrahedra_report.classes) == 147
    _check_report_invariants(tetrahedra_report)


def test_parallel_run_is_identical(triangles_report):
    assert classify("dim4-three-triangles", jobs=2).to_jsonl() == triangles_report.to_jsonl()


def test_report_jsonl_round_trip(triangles_report):
    text = triangles_report.to_jsonl()
    back = ClassificationReport.from_jsonl(text)
    assert back.to_jsonl() == text
    assert json.loads(text.splitlines()[0])["summary"]["classes"] == 4
    with pytest.raises(ClassificationError):
        ClassificationReport.from_jsonl(text.split("\n", 1)[1])


def test_report_table(triangles_report):
    table = triangles_report.table()
    assert "classes=4" in table and "passed=True" in table


def test_staged_dim5(tetrahedra_report):
    reports = staged_verify_dim5(tetrahedra_report)
    assert len(reports) == 147 * 13
    assert all(r.holds for r in reports)
    assert max(r.lhs for r in reports) == 35 * 1728 * 72


def test_staged_dim5_rejects_large_dual_volume(triangles_report):
    rec = triangles_report.classes[0]
    threshold = Fraction(bound_B(5), 35 * 72)
    fake = ClassRecord.from_dict({**rec.to_dict(), "dual_volume": str(threshold)})
    assert not any(r.holds for r in staged_verify_dim5([fake]))
    ok = ClassRecord.from_dict({**rec.to_dict(), "dual_volume": str(threshold - Fraction(1, 10**6))})
    assert all(r.holds for r in staged_verify_dim5([ok]))


def test_verify_theorem_examples():
    cross4 = hull([tuple(s * int(i == j) for j in range(4)) for i in range(4) for s in (1, -1)])
    not_fano = hull([(0, 0), (1, 0), (0, 1)])
    checks = verify_theorem([dual(reflexive_R(4)), P1113, cross4, not_fano, hull([(-1,), (1,)])])
    r4, p, c, bad, seg = checks
    assert r4.equality and r4.extremal and r4.ok and not r4.strict
    assert p.d == 3 and p.dual_volume == 72 and p.equality and p.ok
    assert c.strict and c.ok and c.dual_volume == 384
    assert bad.error and not bad.ok
    assert seg.ok and not seg.applicable


def test_all_cases_registered():
    assert set(CASES) == {"dim3-two-triangles", "dim4-three-triangles", "dim4-tetrahedron-triangle", "dim4-two-tetrahedra"}
