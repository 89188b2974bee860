import pytest
from hypothesis import given, settings, strategies as st

from src.category import (
    Quiver,
    is_acyclic,
    is_left_rooted,
    new_vertices,
    rooted_sequence,
    stage_of,
    subquiver,
)
from src.category.quiver import quiver_from_edges, require_left_rooted
from src.core.exceptions import NotLeftRootedError, QuiverError


@pytest.fixture
def chain3():
    return quiver_from_edges([(1, 2), (2, 3)], name="chain3")


def test_chain_stages(chain3):
    sequence = rooted_sequence(chain3)
    assert sequence.zeta == 3
    assert sequence.stages == (frozenset(), frozenset({1}), frozenset({1, 2}), frozenset({1, 2, 3}))
    assert is_left_rooted(chain3)


def test_chain_subquivers(chain3):
    assert subquiver(chain3, 0).vertices == ()
    sub = subquiver(chain3, 2)
    assert sub.vertices == (1, 2)
    assert [a.id for a in sub.arrows] == [0]
    assert sub.name == "chain3_2"
    assert subquiver(chain3, 3).vertices == chain3.vertices


def test_new_vertices_and_stage_of(chain3):
    assert new_vertices(chain3, 0) == [1]
    assert new_vertices(chain3, 1) == [2]
    assert new_vertices(chain3, 3) == []
    assert [stage_of(chain3, v) for v in (1, 2, 3)] == [1, 2, 3]


def test_fork_enters_in_two_stages():
    fork = quiver_from_edges([(1, 3), (2, 3)])
    assert rooted_sequence(fork).stages == (frozenset(), frozenset({1, 2}), frozenset({1, 2, 3}))
    assert new_vertices(fork, 0) == [1, 2]


def test_parallel_arrows():
    double = quiver_from_edges([(1, 2), (1, 2)])
    assert rooted_sequence(double).zeta == 2
    assert [a.id for a in double.incoming(2)] == [0, 1]
    assert [a.id for a in double.outgoing(1)] == [0, 1]


def test_cycle_never_enters():
    cycle = quiver_from_edges([(1, 2), (2, 3), (3, 1)], name="cycle3")
    assert rooted_sequence(cycle).zeta == 0
    assert not is_left_rooted(cycle)
    assert not is_acyclic(cycle)
    assert stage_of(cycle, 2) is None
    with pytest.raises(NotLeftRootedError, match="never enter"):
        require_left_rooted(cycle)


def test_downstream_of_a_cycle_never_enters():
    Q = quiver_from_edges([(1, 2), (2, 1), (2, 3)], vertices=[0, 1, 2, 3])
    assert rooted_sequence(Q).limit == frozenset({0})


def test_loop():
    Q = Quiver.build([1], [(0, 1, 1)])
    assert not is_left_rooted(Q)
    assert not is_acyclic(Q)


def test_empty_quiver():
    Q = Quiver.build([])
    assert rooted_sequence(Q).zeta == 0
    assert is_left_rooted(Q)
    assert subquiver(Q, 0).vertices == ()


@pytest.mark.parametrize("vertices,arrows,message", [
    ([1, 1], [], "duplicate vertex"),
    ([1, 2], [(0, 1, 2), (0, 2, 1)], "duplicate arrow id"),
    ([1], [(0, 1, 2)], "outside the vertex set"),
])
def test_malformed_quivers(vertices, arrows, message):
    with pytest.raises(QuiverError, match=message):
        Quiver.build(vertices, arrows)


def test_stage_out_of_range(chain3):
    with pytest.raises(QuiverError, match="outside 0..3"):
        subquiver(chain3, 4)
    with pytest.raises(QuiverError):
        new_vertices(chain3, -1)


def test_unknown_vertex_and_arrow(chain3):
    with pytest.raises(QuiverError):
        stage_of(chain3, 9)
    with pytest.raises(QuiverError):
        chain3.arrow(9)


@st.composite
def quivers(draw):
    n = draw(st.integers(min_value=0, max_value=5))
    if n == 0:
        return Quiver.build([])
    vertex = st.integers(min_value=0, max_value=n - 1)
    edges = draw(st.lists(st.tuples(vertex, vertex), max_size=8))
    return quiver_from_edges(edges, vertices=range(n))


@settings(max_examples=1000, deadline=None)
@given(Q=quivers())
def test_left_rooted_iff_acyclic(Q):
    assert is_left_rooted(Q) == is_acyclic(Q)


@settings(deadline=None)
@given(Q=quivers())
def test_stages_grow_strictly_until_the_limit(Q):
    stages = rooted_sequence(Q).stages
    assert stages[0] == frozenset()
    for smaller, larger in zip(stages, stages[1:]):
        assert smaller < larger
    for mu, stage in enumerate(stages[1:]):
        for v in stage:
            assert all(a.source in stages[mu] for a in Q.incoming(v))
