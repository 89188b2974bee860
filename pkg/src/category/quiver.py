"""
Finite quivers, their rooted sequences V_0 ⊆ V_1 ⊆ ... and stage subquivers.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from ..core.exceptions import NotLeftRootedError, QuiverError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Arrow:
    id: int
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    """
    A finite quiver. Parallel arrows and loops are allowed; arrows are
    identified by id, never by their endpoints.
    """
    vertices: Tuple[int, ...]
    arrows: Tuple[Arrow, ...] = ()
    name: str = ""

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError(f"duplicate vertex in {list(self.vertices)}")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise QuiverError(f"duplicate arrow id in {ids}")
        known = set(self.vertices)
        for a in self.arrows:
            if a.source not in known or a.target not in known:
                raise QuiverError(f"arrow {a.id} has an endpoint outside the vertex set")

    @classmethod
    def build(cls, vertices: Iterable[int], arrows: Iterable[Tuple[int, int, int]] = (),
              name: str = "") -> 'Quiver':
        """Quiver from vertex ids and (id, source, target) triples"""
        return cls(tuple(vertices), tuple(Arrow(*a) for a in sorted(arrows)), name)

    def arrow(self, arrow_id: int) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise QuiverError(f"no arrow {arrow_id} in quiver {self.name!r}")

    def incoming(self, vertex: int) -> List[Arrow]:
        """Γ(•, i), ordered by arrow id"""
        return sorted((a for a in self.arrows if a.target == vertex), key=lambda a: a.id)

    def outgoing(self, vertex: int) -> List[Arrow]:
        return sorted((a for a in self.arrows if a.source == vertex), key=lambda a: a.id)

    def spanned(self, vertices: Iterable[int], name: str = "") -> 'Quiver':
        """The full subquiver on ``vertices``"""
        keep = set(vertices)
        return Quiver(tuple(v for v in self.vertices if v in keep),
                      tuple(a for a in self.arrows if a.source in keep and a.target in keep),
                      name or self.name)


@dataclass(frozen=True)
class RootedSequence:
    stages: Tuple[FrozenSet[int], ...]

    @property
    def zeta(self) -> int:
        return len(self.stages) - 1

    @property
    def limit(self) -> FrozenSet[int]:
        return self.stages[-1]


def rooted_sequence(Q: Quiver) -> RootedSequence:
    """V_0 = ∅ and V_{μ+1} = {i | every arrow into i starts in V_μ}, up to the fixpoint"""
    stages = [frozenset()]
    while True:
        current = stages[-1]
        following = frozenset(i for i in Q.vertices if all(a.source in current for a in Q.incoming(i)))
        if following == current:
            break
        stages.append(following)
    logger.debug("rooted sequence of %s stabilizes after %d stages", Q.name, len(stages) - 1)
    return RootedSequence(tuple(stages))


def is_left_rooted(Q: Quiver) -> bool:
    return rooted_sequence(Q).limit == frozenset(Q.vertices)


def is_acyclic(Q: Quiver) -> bool:
    """No oriented cycle (loops included), by Kahn's topological sort"""
    in_degree = {v: 0 for v in Q.vertices}
    adjacency = {v: [] for v in Q.vertices}
    for a in Q.arrows:
        in_degree[a.target] += 1
        adjacency[a.source].append(a.target)
    queue = deque(v for v in Q.vertices if in_degree[v] == 0)
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for neighbor in adjacency[v]:
            in_degree[neighbor] -= 1
            if in_degree[neighbor] == 0:
                queue.append(neighbor)
    return len(order) == len(Q.vertices)


def _check_stage(Q: Quiver, mu: int, sequence: Optional[RootedSequence] = None) -> RootedSequence:
    sequence = sequence or rooted_sequence(Q)
    if not 0 <= mu <= sequence.zeta:
        raise QuiverError(f"stage {mu} is outside 0..{sequence.zeta} for quiver {Q.name!r}")
    return sequence


def subquiver(Q: Quiver, mu: int) -> Quiver:
    """Q_μ, the subquiver spanned by V_μ"""
    sequence = _check_stage(Q, mu)
    return Q.spanned(sequence.stages[mu], name=f"{Q.name}_{mu}")


def stage_of(Q: Quiver, vertex: int) -> Optional[int]:
    """Least μ with the vertex in V_μ, or None if it never enters"""
    if vertex not in Q.vertices:
        raise QuiverError(f"no vertex {vertex} in quiver {Q.name!r}")
    for mu, stage in enumerate(rooted_sequence(Q).stages):
        if vertex in stage:
            return mu
    return None


def new_vertices(Q: Quiver, mu: int) -> List[int]:
    """V_{μ+1} ∖ V_μ in vertex order; empty at the last stage"""
    sequence = _check_stage(Q, mu)
    if mu == sequence.zeta:
        return []
    added = sequence.stages[mu + 1] - sequence.stages[mu]
    return [v for v in Q.vertices if v in added]


def require_left_rooted(Q: Quiver) -> RootedSequence:
    sequence = rooted_sequence(Q)
    if sequence.limit != frozenset(Q.vertices):
        stuck = sorted(set(Q.vertices) - sequence.limit)
        raise NotLeftRootedError(f"quiver {Q.name!r} is not left rooted; vertices {stuck} never enter")
    return sequence


def quiver_from_edges(edges: Sequence[Tuple[int, int]], vertices: Optional[Iterable[int]] = None,
                      name: str = "") -> Quiver:
    """Quiver whose arrow ids follow the order of ``edges``"""
    if vertices is None:
        vertices = sorted({v for edge in edges for v in edge})
    return Quiver.build(vertices, [(k, s, t) for k, (s, t) in enumerate(edges)], name)
