import numpy as np
import pytest

from src.category import (
    PSetBackend,
    VectBackend,
    backend_from_spec,
    decode_morphism,
    encode_morphism,
    is_wfs,
    pset_category,
    rlp_class,
    structure_from_spec,
    vect_category,
)
from src.category.backends import null_space, rank, rref
from src.core.exceptions import ParseError


def test_pset_counts(pset1, pset2):
    assert len(pset1.category.morphism_ids) == 5
    assert len(pset2.category.morphism_ids) == 23
    # injections 0->0, 0->1, 0->2, 1->1, 1->2 (two), 2->2 (two)
    assert len(pset2.cof) == 8
    assert len(pset2.we) == 4


def test_vect_counts(vect21):
    assert len(vect21.category.morphism_ids) == 5
    assert len(vect21.cof) == 3
    assert len(vect21.we) == 2


def test_pset_encoding():
    backend = PSetBackend(2)
    assert backend.encode((1, 0), 2, 1) == "1->1 2->*"
    assert backend.encode((), 0, 2) == "-"
    assert backend.decode("1->* 2->1", 2, 1) == (0, 1)
    assert backend.decode("-", 0, 1) == ()
    assert backend.decode("2->1 1->2 *->*", 2, 2) == (2, 1)


def test_vect_encoding():
    backend = VectBackend(3, 2)
    assert backend.encode(((1, 0), (2, 1)), 2, 2) == "1 0 / 2 1"
    assert backend.decode("1 0 / 2 1", 2, 2) == ((1, 0), (2, 1))
    assert backend.encode(((), ()), 0, 2) == "-"
    assert backend.decode("-", 0, 2) == ((), ())


def test_pset_parse_error_points_at_token():
    with pytest.raises(ParseError) as exc_info:
        PSetBackend(2).decode("1->1 1->1", 2, 1, line=4)
    assert exc_info.value.line == 4
    assert exc_info.value.column == 6
    assert "mapped twice" in exc_info.value.message


@pytest.mark.parametrize("text,message", [
    ("1->2", "outside"),
    ("*->1", "basepoint"),
    ("1-1", "expected 'x->y'"),
    ("a->1", "invalid point"),
    ("", "no image given for point 1"),
])
def test_pset_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        PSetBackend(1).decode(text, 1, 1)


def test_vect_entry_must_be_reduced():
    with pytest.raises(ParseError) as exc_info:
        VectBackend(2, 1).decode("1 2", 2, 1)
    assert exc_info.value.column == 3


@pytest.mark.parametrize("text,message", [
    ("1 0", "expected 2 rows"),
    ("1 / 0 1", "row 1 has 1 entries"),
    ("1 x / 0 1", "invalid matrix entry"),
])
def test_vect_parse_errors(text, message):
    with pytest.raises(ParseError, match=message):
        VectBackend(2, 2).decode(text, 2, 2)


def test_encode_decode_through_structure(pset2):
    backend = backend_from_spec("pset:2")
    cat = pset2.category
    for m in cat.morphism_ids:
        text = encode_morphism(pset2, backend, m)
        assert decode_morphism(pset2, backend, text, cat.source(m), cat.target(m)) == m


def test_decode_morphism_rejects_objects_beyond_bound(pset1):
    with pytest.raises(ParseError, match="outside pset:1"):
        decode_morphism(pset1, backend_from_spec("pset:1"), "-", 0, 2)


def test_rref_and_rank():
    reduced, pivots = rref(np.array([[2, 4], [1, 1]]), 5)
    assert pivots == [0, 1]
    assert reduced.tolist() == [[1, 0], [0, 1]]
    assert rank(np.array([[1, 1], [1, 1]]), 2) == 1
    assert rank(np.array([[1, 2], [2, 1]]), 3) == 1
    assert rank(np.zeros((0, 2), dtype=np.int64), 2) == 0


def test_null_space():
    assert null_space(np.array([[1, 1]]), 2).tolist() == [[1, 1]]
    assert null_space(np.array([[1, 0]]), 3).tolist() == [[0, 1]]
    basis = null_space(np.array([[1, 2, 0], [0, 0, 1]]), 3)
    assert basis.shape == (1, 3)
    assert ((np.array([[1, 2, 0], [0, 0, 1]]) @ basis.T) % 3 == 0).all()


def test_pset_pushout_data():
    backend = PSetBackend(2)
    assert backend.pushout_data((1,), (1,), 1, 1, 1) == (1, (1,), (1,))
    # collapsing the point of B to the basepoint
    assert backend.pushout_data((1,), (0,), 1, 1, 1) == (1, (0,), (1,))
    assert backend.pushout_data((), (), 0, 1, 1) == (2, (2,), (1,))


def test_vect_pushout_data():
    backend = VectBackend(2, 2)
    assert backend.pushout_data(((1,),), ((1,),), 1, 1, 1) == (1, ((1,),), ((1,),))
    assert backend.pushout_data(((1,),), ((0,),), 1, 1, 1) == (1, ((0,),), ((1,),))


def test_pushouts_beyond_bound(pset1, vect21):
    for E in (pset1, vect21):
        cat = E.category
        f = cat.hom(0, 1)[0]
        assert cat.colimits.pushout(f, f) is None


def test_backend_pushout_rejects_bad_span(pset1):
    cat = pset1.category
    with pytest.raises(ValueError, match="do not share a source"):
        cat.colimits.pushout(cat.hom(0, 1)[0], cat.hom(1, 0)[0])


def test_backend_specs():
    assert backend_from_spec("pset:3").spec == "pset:3"
    assert backend_from_spec("vect:2:1").spec == "vect:2:1"
    assert structure_from_spec("pset:1") is pset_category(1)
    assert structure_from_spec("vect:2:1") is vect_category(2, 1)


@pytest.mark.parametrize("spec", ["pset", "pset:x", "vect:2", "vect:4:1", "set:2", "pset:-1"])
def test_invalid_backend_specs(spec):
    with pytest.raises(ValueError):
        backend_from_spec(spec)


def test_injections_and_surjections_form_a_wfs(pset2):
    report = is_wfs(pset2.cof, rlp_class(pset2.cof))
    assert report.holds
    assert report.status in ("pass", "inconclusive")


@pytest.mark.slow
def test_vect22_wfs():
    E = vect_category(2, 2)
    assert len(E.category.morphism_ids) == 31
    assert is_wfs(E.cof, rlp_class(E.cof)).holds


@pytest.mark.slow
def test_pset3_wfs():
    E = pset_category(3)
    assert is_wfs(E.cof, rlp_class(E.cof)).holds
