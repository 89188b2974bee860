import pytest
from hypothesis import given, settings, strategies as st

from src.category import (
    FinCategory,
    Functor,
    Morphism,
    coproduct,
    find_initial,
    inverse,
    is_coproduct,
    is_iso,
    is_pushout,
    product_category,
    pushout,
    validate_category,
    validate_functor,
)
from src.core.exceptions import CompositionError


def test_arrow_category_is_valid(arrow):
    report = validate_category(arrow)
    assert report.valid
    assert report.to_dict()['success'] is True


def test_backend_categories_are_valid(pset1, vect21):
    assert validate_category(pset1.category).valid
    assert validate_category(vect21.category).valid


def test_missing_composite_is_reported():
    morphisms = [Morphism(0, 0, 0), Morphism(1, 1, 1), Morphism(2, 2, 2),
                 Morphism(3, 0, 1), Morphism(4, 1, 2)]
    table = {(0, 0): 0, (1, 1): 1, (2, 2): 2, (3, 0): 3, (1, 3): 3, (4, 1): 4, (2, 4): 4}
    cat = FinCategory([0, 1, 2], morphisms, {0: 0, 1: 1, 2: 2}, composition=table)

    report = validate_category(cat)

    assert not report.valid
    assert any("missing composite for composable pair (4, 3)" in v for v in report.violations)


def test_compose_rejects_non_composable(pset1):
    cat = pset1.category
    zero_to_one = cat.lookup(0, 1, ())
    with pytest.raises(CompositionError):
        cat.compose(zero_to_one, zero_to_one)


def test_identity_first_in_hom_sets(pset2):
    cat = pset2.category
    for obj in cat.objects:
        assert cat.hom(obj, obj)[0] == cat.identity(obj)


def test_compose_path_runs_right_to_left(pset1):
    cat = pset1.category
    f = cat.lookup(0, 1, ())
    g = cat.lookup(1, 0, (0,))
    assert cat.compose_path(g, f) == cat.compose(g, f) == cat.identity(0)
    assert cat.compose_path(f, g) == cat.lookup(1, 1, (0,))


@settings(deadline=None)
@given(data=st.data())
def test_composition_is_associative(pset2, data):
    cat = pset2.category
    f = data.draw(st.sampled_from(cat.morphism_ids))
    g = data.draw(st.sampled_from(cat.out_of(cat.target(f))))
    h = data.draw(st.sampled_from(cat.out_of(cat.target(g))))
    assert cat.compose(h, cat.compose(g, f)) == cat.compose(cat.compose(h, g), f)


def test_initial_objects(arrow, pset1):
    assert find_initial(arrow) == 0
    assert find_initial(pset1.category) == 0


def test_isomorphisms(arrow, pset1):
    assert is_iso(arrow, 0) and is_iso(arrow, 1)
    assert not is_iso(arrow, 2)
    cat = pset1.category
    assert inverse(cat, cat.identity(1)) == cat.identity(1)
    assert inverse(cat, cat.lookup(1, 1, (0,))) is None


def test_pushout_tie_break_prefers_identity_legs(arrow):
    po = pushout(arrow, 0, 2)
    assert po.apex == 1
    assert (po.leg_from_B, po.leg_from_C) == (2, 1)
    assert is_pushout(arrow, 0, 2, po.leg_from_B, po.leg_from_C)


def test_pushout_rejects_span_without_common_source(arrow):
    with pytest.raises(ValueError):
        pushout(arrow, 0, 1)


def test_non_universal_square_is_not_a_pushout(pset2):
    cat = pset2.category
    f = cat.lookup(0, 1, ())
    # both legs into 1: commutes, but the apex is too small to be universal
    leg = cat.identity(1)
    assert not is_pushout(cat, f, f, leg, leg)


@settings(deadline=None, max_examples=60)
@given(data=st.data())
def test_provider_pushouts_are_universal(pset2, vect21, data):
    E = data.draw(st.sampled_from([pset2, vect21]))
    cat = E.category
    f = data.draw(st.sampled_from(cat.morphism_ids))
    g = data.draw(st.sampled_from(cat.out_of(cat.source(f))))
    po = cat.colimits.pushout(f, g)
    if po is not None:
        assert is_pushout(cat, f, g, po.leg_from_B, po.leg_from_C)


def test_provider_coproduct_is_universal(pset2):
    cat = pset2.category
    cop = cat.colimits.coproduct((1, 1))
    assert cop.apex == 2
    assert is_coproduct(cat, (1, 1), cop.apex, cop.injections)


def test_empty_coproduct_is_initial(pset1):
    result = coproduct(pset1.category, ())
    assert result.apex == 0
    assert result.injections == ()


def test_coproduct_beyond_truncation(pset1):
    assert pset1.category.colimits.coproduct((1, 1)) is None


def test_product_category(arrow):
    square = product_category([arrow, arrow])
    assert len(square.objects) == 4
    assert len(square.morphism_ids) == 9
    assert validate_category(square).valid
    assert find_initial(square) is not None


def test_identity_functor_is_valid(arrow):
    F = Functor(arrow, arrow, {0: 0, 1: 1}, {0: 0, 1: 1, 2: 2})
    assert F.is_total
    assert validate_functor(F).valid


def test_functor_breaking_endpoints(arrow):
    F = Functor(arrow, arrow, {0: 0, 1: 1}, {0: 0, 1: 1, 2: 1})
    report = validate_functor(F)
    assert not report.valid
    assert "morphism 2 is not sent between the images of its endpoints" in report.violations


def test_partial_functor(arrow):
    F = Functor(arrow, arrow, {0: 0}, {0: 0})
    assert not F.is_total
    assert not validate_functor(F).valid
    assert validate_functor(F, partial=True).valid


def test_full_subcategory_keeps_ids(pset2):
    cat = pset2.category
    sub = cat.full_subcategory([0, 2])
    assert set(sub.morphism_ids) == set(cat.hom(0, 0) + cat.hom(0, 2) + cat.hom(2, 0) + cat.hom(2, 2))
    assert validate_category(sub).valid
