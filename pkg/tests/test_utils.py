import pytest

from src.category.quiver import quiver_from_edges
from src.core.exceptions import ParseError
from src.utils import FileHandler, Validators


def test_validate_file_path(fixture_path, fixtures_dir, tmp_path):
    assert Validators.validate_file_path(fixture_path("arrow.cat")) == (True, None)
    assert not Validators.validate_file_path("")[0]
    assert "does not exist" in Validators.validate_file_path(str(tmp_path / "nope.cat"))[1]
    assert "directory" in Validators.validate_file_path(str(fixtures_dir))[1]


@pytest.mark.parametrize("spec,valid", [
    ("pset:2", True),
    ("vect:3:1", True),
    ("", False),
    ("pset", False),
    ("vect:4:1", False),
])
def test_validate_backend_spec(spec, valid):
    assert Validators.validate_backend_spec(spec)[0] is valid


def test_validate_budget():
    assert Validators.validate_budget(None) == (True, None)
    assert Validators.validate_budget(0) == (True, None)
    assert not Validators.validate_budget(-1)[0]


def test_validate_quiver_limits():
    Q = quiver_from_edges([(1, 2), (2, 3), (1, 3)])
    assert Validators.validate_quiver_limits(Q, {'max_vertices': 4, 'max_arrows': 4}) == (True, None)
    assert "Too many vertices" in Validators.validate_quiver_limits(Q, {'max_vertices': 2})[1]
    assert "Too many arrows" in Validators.validate_quiver_limits(Q, {'max_arrows': 2})[1]


def test_validate_output_format():
    assert Validators.validate_output_format("records")[0]
    assert not Validators.validate_output_format("pdf")[0]


def test_documents_in_fixtures(fixtures_dir):
    quivers = FileHandler.get_documents_from_folder(str(fixtures_dir), "qv")
    assert [p.rsplit("/", 1)[-1] for p in quivers] == [
        "chain2.qv", "chain3.qv", "cycle3.qv", "double.qv", "empty.qv", "fork.qv"]
    assert len(FileHandler.get_documents_from_folder(str(fixtures_dir), "cat")) == 4
    assert FileHandler.get_documents_from_folder(str(fixtures_dir), "png") == []
    with pytest.raises(FileNotFoundError):
        FileHandler.get_documents_from_folder(str(fixtures_dir / "missing"), "cat")


@pytest.mark.parametrize("extension,kind", [
    ("cat", "category"),
    ("qv", "quiver"),
    ("rmor", "morphism"),
    ("cls", "morphism-class"),
    ("opf", "opfibration"),
])
def test_every_fixture_parses_with_its_usual_kind(fixtures_dir, extension, kind):
    paths = FileHandler.get_documents_from_folder(str(fixtures_dir), extension)
    assert paths
    for path in paths:
        assert FileHandler.read_document(path).kind == kind


def test_read_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        FileHandler.read_text(str(tmp_path / "gone.qv"))
    bad = tmp_path / "bad.qv"
    bad.write_text("VERTICES\n1\n")
    with pytest.raises(ParseError, match="no 'kind' header"):
        FileHandler.read_document(str(bad))
