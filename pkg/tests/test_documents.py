import pytest

from src.category import validate_opfibration
from src.category.quiver import quiver_from_edges
from src.cli.documents import (
    UNLIMITED,
    build_category,
    build_morphism_class,
    build_opfibration,
    build_quiver,
    build_rep_morphism,
    build_representation,
    emit_document,
    parse_document,
)
from src.core.exceptions import NaturalityError, ParseError
from src.utils.file_handler import FileHandler

CHAIN2 = quiver_from_edges([(1, 2)], name="chain2")


def load(name):
    return FileHandler.read_document(FileHandler.fixture_path(name))


def parse_error(text):
    with pytest.raises(ParseError) as exc_info:
        parse_document(text)
    return exc_info.value


def test_header_sections_and_comments():
    doc = parse_document("# leading comment\nkind: quiver\nname: q  # trailing\n\nVERTICES\n  1 2\nARROWS\n0 1 2\n")
    assert doc.kind == "quiver"
    assert doc.name == "q"
    assert doc.header_lines == {'kind': 2, 'name': 3}
    row = doc.rows('VERTICES')[0]
    assert (row.line, row.column, row.text) == (6, 3, "1 2")
    assert row.tokens() == [("1", 3), ("2", 5)]
    assert doc.rows('MISSING') == []


def test_missing_kind():
    error = parse_error("name: nothing\n")
    assert (error.line, error.column) == (1, 1)


def test_unknown_kind():
    error = parse_error("kind: widget\n")
    assert (error.line, error.column) == (1, 7)
    assert "unknown kind 'widget'" in error.message


def test_duplicate_section_and_header():
    assert parse_error("kind: quiver\nVERTICES\n1\nVERTICES\n").line == 4
    assert "appears twice" in parse_error("kind: quiver\nkind: quiver\n").message


def test_malformed_header():
    error = parse_error("kind quiver\n")
    assert "expected 'key: value'" in error.message


def test_emit_is_canonical():
    doc = parse_document("kind:   quiver\nname: q\nVERTICES\n 1    2\n\nARROWS\n0  1 2\n")
    assert emit_document(doc) == "kind: quiver\nname: q\n\nVERTICES\n1 2\n\nARROWS\n0 1 2\n"
    assert emit_document(parse_document(emit_document(doc))) == emit_document(doc)


def test_row_field_count():
    doc = parse_document("kind: quiver\nARROWS\n0 1\n")
    with pytest.raises(ParseError, match="expected 3 fields, got 2"):
        build_quiver(doc)


def test_explicit_category_document():
    document = build_category(load("arrow.cat"))
    E = document.structure
    assert E.name == "arrow"
    assert len(E.cof) == 3
    assert E.we.members == {0, 1}
    assert E.initial == 0
    assert document.budget is None
    assert document.backend is None


def test_backend_category_document():
    document = build_category(load("starved.cat"))
    assert document.budget == 0
    assert document.backend.spec == "pset:1"
    assert len(document.structure.category.morphism_ids) == 5
    assert build_category(load("pset3.cat")).budget == UNLIMITED


def test_category_without_classes_defaults_to_isomorphisms():
    text = "kind: category\nOBJECTS\n0 1\nMORPHISMS\n0 0 0\n1 1 1\n2 0 1\nIDENTITIES\n0 0\n1 1\n"
    E = build_category(parse_document(text)).structure
    assert E.cof.members == E.we.members == {0, 1}
    assert E.initial == 0


@pytest.mark.parametrize("extra,message", [
    ("COMPOSE\n9 0 2\n", "unknown morphism 9"),
    ("CLASSES\nX all\n", "start with C or W"),
    ("CLASSES\nC 0 9\n", "'9' is not a morphism id"),
])
def test_explicit_category_errors(extra, message):
    text = "kind: category\nOBJECTS\n0 1\nMORPHISMS\n0 0 0\n1 1 1\n2 0 1\nIDENTITIES\n0 0\n1 1\n" + extra
    with pytest.raises(ParseError, match=message):
        build_category(parse_document(text))


def test_missing_composite_is_not_a_category():
    text = ("kind: category\nOBJECTS\n0 1 2\nMORPHISMS\n0 0 0\n1 1 1\n2 2 2\n3 0 1\n4 1 2\n"
            "IDENTITIES\n0 0\n1 1\n2 2\n")
    with pytest.raises(ParseError, match="not a category: missing composite"):
        build_category(parse_document(text))


def test_initial_header_must_name_an_object():
    doc = parse_document("kind: category\ninitial: 5\nbackend: pset:1\n")
    with pytest.raises(ParseError, match="initial object 5") as exc_info:
        build_category(doc)
    assert exc_info.value.line == 2


def test_bad_backend_header():
    doc = parse_document("kind: category\nbackend: pset:x\n")
    with pytest.raises(ParseError) as exc_info:
        build_category(doc)
    assert (exc_info.value.line, exc_info.value.column) == (2, 10)


def test_wrong_kind_for_builder():
    with pytest.raises(ParseError, match="expected a quiver document"):
        build_quiver(load("arrow.cat"))


def test_quiver_documents():
    Q = build_quiver(load("chain3.qv"))
    assert Q.name == "chain3"
    assert Q.vertices == (1, 2, 3)
    assert [(a.source, a.target) for a in Q.arrows] == [(1, 2), (2, 3)]
    assert build_quiver(load("empty.qv")).vertices == ()


def test_morphism_class_document():
    E, C = build_morphism_class(load("injections.cls"))
    assert E.name == "pset:1"
    assert C.members == {0, 1, 3}
    assert C == E.cof


def test_morphism_class_needs_a_backend():
    doc = parse_document("kind: morphism-class\nMEMBERS\n0 0 -\n")
    with pytest.raises(ParseError, match="names no backend"):
        build_morphism_class(doc)
    E, C = build_morphism_class(doc, "pset:1")
    assert C.members == {0}


def test_representation_document():
    text = "kind: representation\nbackend: pset:2\nON_VERTICES\n1 1\n2 2\nON_ARROWS\n0 1->2\n"
    E, X = build_representation(parse_document(text), CHAIN2)
    assert X.objects == (1, 2)
    assert E.category.data(X.along(0)) == (2,)


def test_parse_error_inside_a_morphism_points_at_the_document():
    text = "kind: representation\nname: bad\nbackend: pset:2\n\nON_VERTICES\n1 1\n2 2\nON_ARROWS\n0 1->3\n"
    with pytest.raises(ParseError) as exc_info:
        build_representation(parse_document(text), CHAIN2)
    assert (exc_info.value.line, exc_info.value.column) == (9, 3)


def test_representation_missing_pieces():
    no_vertex = "kind: representation\nbackend: pset:2\nON_VERTICES\n1 1\nON_ARROWS\n"
    with pytest.raises(ParseError, match="no object for vertex 2"):
        build_representation(parse_document(no_vertex), CHAIN2)
    no_arrow = "kind: representation\nbackend: pset:2\nON_VERTICES\n1 1\n2 2\nON_ARROWS\n"
    with pytest.raises(ParseError, match="no map for arrow 0"):
        build_representation(parse_document(no_arrow), CHAIN2)


def test_morphism_documents():
    E, backend, f = build_rep_morphism(load("identity-a2.rmor"), CHAIN2)
    assert backend.spec == "vect:2:2"
    assert f.source == f.target
    assert all(E.category.is_identity(c) for c in f.components)


def test_unnatural_morphism_document():
    with pytest.raises(NaturalityError) as exc_info:
        build_rep_morphism(load("unnatural.rmor"), CHAIN2)
    assert exc_info.value.arrow == 0


def test_opfibration_document():
    builtin, E, op = build_opfibration(load("corrupted-cleavage.opf"))
    assert builtin == "codomain"
    assert E.name == "pset:1"
    assert op.cleavage[(3, 4)] == (4, op.total.lookup(4, 4, (4, 3)))
    assert not validate_opfibration(op).valid


def test_opfibration_document_errors():
    with pytest.raises(ParseError, match="no 'builtin' header"):
        build_opfibration(parse_document("kind: opfibration\nbackend: pset:1\n"))
    with pytest.raises(ParseError, match="unknown builtin"):
        build_opfibration(parse_document("kind: opfibration\nbuiltin: fibred\nbackend: pset:1\n"))
    bad_square = "kind: opfibration\nbuiltin: codomain\nbackend: pset:1\nCLEAVAGE\n3 4 1 4 3\n"
    with pytest.raises(ParseError, match="is not a square"):
        build_opfibration(parse_document(bad_square))
