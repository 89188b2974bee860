from dataclasses import replace

import pytest

from src.category import (
    Functor,
    MorphismClass,
    WaldhausenStructure,
    comor_structure,
    coslice_cof_structure,
    is_exact,
    mor_structure,
    product_structure,
    slice_structure,
    verify_waldhausen,
)
from src.category.waldhausen import AXIOMS, EXIT_CODES


def test_pset1_passes_exhaustively(pset1):
    report = verify_waldhausen(pset1)
    assert report.status == "pass"
    assert report.exit_code == 0
    assert report.exhaustive
    assert set(report.results) == set(AXIOMS)


def test_vect21_passes_with_pushouts_beyond_bound(vect21):
    report = verify_waldhausen(vect21)
    assert report.status == "pass"
    # 0 -> 1 pushed out along itself needs a plane
    assert report['C3'].beyond_bound > 0


def test_explicit_structure_passes(arrow_structure):
    assert verify_waldhausen(arrow_structure).passed


def test_missing_identity_cofibration_fails(arrow):
    E = WaldhausenStructure(arrow, MorphismClass(arrow, [0, 2]), MorphismClass.all_morphisms(arrow), 0)
    report = verify_waldhausen(E)
    assert report.status == "fail"
    assert report.exit_code == EXIT_CODES["fail"] == 1
    assert report['C1'].witnesses == [{'morphism': 1}]
    assert 'C3' in [r.name for r in report.failures()]


def test_wrong_initial_object(arrow):
    E = WaldhausenStructure(arrow, MorphismClass.all_morphisms(arrow), MorphismClass.isomorphisms(arrow), 1)
    report = verify_waldhausen(E)
    assert report['initial'].status == "fail"
    assert report['initial'].witnesses == [{'initial': 1}]


def test_zero_budget_makes_every_axiom_inconclusive(pset1):
    report = verify_waldhausen(pset1, budget=0)
    assert report.status == "inconclusive"
    assert report.exit_code == 2
    assert all(r.status == "inconclusive" for r in report.results.values())
    assert not report.exhaustive


def test_small_budget_still_reports_failures(arrow):
    E = WaldhausenStructure(arrow, MorphismClass(arrow, [0, 2]), MorphismClass.all_morphisms(arrow), 0)
    report = verify_waldhausen(E, budget=2)
    assert report['C1'].status == "fail"
    assert report.status == "fail"


def test_witnesses_are_capped(arrow):
    E = WaldhausenStructure(arrow, MorphismClass(arrow, [2]), MorphismClass(arrow, [2]), 0)
    report = verify_waldhausen(E, max_witnesses=1)
    assert report['C1'].failures == 2
    assert len(report['C1'].witnesses) == 1


def test_check_universality(pset1):
    assert verify_waldhausen(pset1, check_universality=True).passed


def test_undetermined_memberships_count_as_beyond(pset1):
    E = replace(pset1, undetermined=frozenset({1}))
    assert E.is_cofibration(1) is None
    report = verify_waldhausen(E)
    assert report['C2'].beyond_bound == 1
    assert report['C2'].checked == 1
    assert report.status == "pass"


def test_records(pset1):
    records = verify_waldhausen(pset1).to_records()
    assert [r['axiom'] for r in records] == list(AXIOMS)
    assert all(r['witness'] is None for r in records)


def test_mor_structure(pset1):
    mor = mor_structure(pset1)
    cat = mor.category
    assert list(cat.objects) == [0, 1, 2, 3, 4]
    assert mor.initial == pset1.category.identity(0)
    for m in cat.morphism_ids:
        a, u = cat.data(m)
        assert (m in mor.cof) == (a in pset1.cof and u in pset1.cof)
        assert (m in mor.we) == (a in pset1.we and u in pset1.we)
    assert verify_waldhausen(mor).passed


@pytest.mark.parametrize("backend", ["pset1", "vect21"])
def test_mor_category_has_every_commutative_square(request, backend):
    E = request.getfixturevalue(backend)
    base = E.category
    squares = sum(
        1
        for f in base.morphism_ids for g in base.morphism_ids
        for a in base.hom(base.source(f), base.source(g))
        for u in base.hom(base.target(f), base.target(g))
        if base.compose(u, f) == base.compose(g, a)
    )
    assert len(mor_structure(E).category.morphism_ids) == squares


def test_comor_structure(pset1):
    comor = comor_structure(pset1)
    assert list(comor.category.objects) == [0, 1, 3]
    assert not comor.undetermined or comor.extras['induced']
    assert verify_waldhausen(comor).status != "fail"


def test_slice_structure(pset1):
    S = slice_structure(pset1, 1)
    assert sorted(S.category.objects) == [1, 3, 4]
    assert S.initial == 1
    assert verify_waldhausen(S).passed


def test_coslice_structure(pset1):
    S = coslice_cof_structure(pset1, 0)
    assert list(S.category.objects) == [0, 1]
    assert S.initial == 0
    assert verify_waldhausen(S).passed


def test_product_structure(pset1):
    P = product_structure([pset1, pset1])
    assert len(P.category.objects) == 4
    assert len(P.category.morphism_ids) == 25
    assert P.category.label(P.initial) == (0, 0)
    assert len(P.cof) == 9 and len(P.we) == 4


def test_identity_is_exact(pset1):
    cat = pset1.category
    F = Functor(cat, cat, {o: o for o in cat.objects}, {m: m for m in cat.morphism_ids})
    assert is_exact(F, pset1, pset1).valid


def test_functor_losing_cofibrations_is_not_exact(arrow_structure):
    arrow = arrow_structure.category
    target = WaldhausenStructure(arrow, MorphismClass.isomorphisms(arrow), MorphismClass.isomorphisms(arrow), 0)
    F = Functor(arrow, arrow, {0: 0, 1: 1}, {0: 0, 1: 1, 2: 2})
    report = is_exact(F, arrow_structure, target)
    assert not report.valid
    assert "cofibration 2 is sent to 2, which is not a cofibration" in report.violations


@pytest.mark.slow
def test_pset3_passes_exhaustively():
    from src.category import pset_category
    report = verify_waldhausen(pset_category(3))
    assert report.status == "pass"
    assert report.exhaustive


@pytest.mark.slow
def test_vect22_passes_exhaustively():
    from src.category import vect_category
    report = verify_waldhausen(vect_category(2, 2))
    assert report.status == "pass"
    assert report.exhaustive
