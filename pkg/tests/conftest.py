import pytest

from src.category import FinCategory, Morphism, MorphismClass, WaldhausenStructure
from src.category.backends import pset_category, vect_category
from src.core.config import BUDGET_ENV_VAR
from src.utils.file_handler import FileHandler


@pytest.fixture(scope="session", autouse=True)
def _clean_budget_env():
    with pytest.MonkeyPatch.context() as mp:
        mp.delenv(BUDGET_ENV_VAR, raising=False)
        yield


@pytest.fixture(scope="session")
def pset1() -> WaldhausenStructure:
    return pset_category(1)


@pytest.fixture(scope="session")
def pset2() -> WaldhausenStructure:
    return pset_category(2)


@pytest.fixture(scope="session")
def vect21() -> WaldhausenStructure:
    return vect_category(2, 1)


def make_arrow_category() -> FinCategory:
    """0 -> 1 with ids 0 = id_0, 1 = id_1, 2 = the arrow"""
    morphisms = [Morphism(0, 0, 0, 0), Morphism(1, 1, 1, 1), Morphism(2, 0, 1, 2)]
    table = {(0, 0): 0, (1, 1): 1, (2, 0): 2, (1, 2): 2}
    return FinCategory([0, 1], morphisms, {0: 0, 1: 1}, composition=table, name="arrow")


@pytest.fixture
def arrow() -> FinCategory:
    return make_arrow_category()


@pytest.fixture
def arrow_structure(arrow) -> WaldhausenStructure:
    return WaldhausenStructure(arrow, MorphismClass.all_morphisms(arrow),
                               MorphismClass.isomorphisms(arrow), 0, name="arrow")


@pytest.fixture(scope="session")
def fixtures_dir():
    return FileHandler.get_fixtures_dir()


@pytest.fixture(scope="session")
def fixture_path():
    return FileHandler.fixture_path
