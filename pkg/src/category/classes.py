"""
Morphism classes, the lifting-property solver, weak factorization systems and
the passage from a weak factorization system to a Waldhausen structure.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Tuple, Union

from .fincat import FinCategory, find_initial, is_iso

logger = logging.getLogger(__name__)


class MorphismClass:
    """A set of morphism ids of one category"""

    def __init__(self, category: FinCategory, members: Iterable[int], name: str = ""):
        self.category = category
        self.members = frozenset(members)
        self.name = name
        unknown = [m for m in self.members if not category.has_morphism(m)]
        if unknown:
            raise ValueError(f"Class {name!r} has morphisms outside the category: {sorted(unknown)[:5]}")

    @classmethod
    def where(cls, category: FinCategory, predicate: Callable[[int], bool], name: str = "") -> 'MorphismClass':
        return cls(category, (m for m in category.morphism_ids if predicate(m)), name)

    @classmethod
    def all_morphisms(cls, category: FinCategory) -> 'MorphismClass':
        return cls(category, category.morphism_ids, "all")

    @classmethod
    def isomorphisms(cls, category: FinCategory) -> 'MorphismClass':
        return cls.where(category, lambda m: is_iso(category, m), "isos")

    def __contains__(self, m: int) -> bool:
        return m in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MorphismClass):
            return NotImplemented
        return self.category is other.category and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.category), self.members))

    def __repr__(self) -> str:
        return f"MorphismClass({self.name!r}, {len(self.members)} morphisms)"

    def _check_same(self, other: 'MorphismClass') -> None:
        if other.category is not self.category:
            raise ValueError("Morphism classes live in different categories")

    def intersection(self, other: 'MorphismClass') -> 'MorphismClass':
        self._check_same(other)
        return MorphismClass(self.category, self.members & other.members, f"{self.name}&{other.name}")

    def difference(self, other: 'MorphismClass') -> 'MorphismClass':
        self._check_same(other)
        return MorphismClass(self.category, self.members - other.members, f"{self.name}-{other.name}")

    def issubset(self, other: 'MorphismClass') -> bool:
        self._check_same(other)
        return self.members <= other.members

    def out_of(self, obj: int) -> List[int]:
        return [m for m in self.category.out_of(obj) if m in self.members]

    def hom(self, a: int, b: int) -> List[int]:
        return [m for m in self.category.hom(a, b) if m in self.members]

    def composition_witness(self) -> Optional[Tuple[int, int]]:
        """A composable pair of members whose composite is not a member"""
        cat = self.category
        for f in sorted(self.members):
            for g in self.out_of(cat.target(f)):
                if cat.compose(g, f) not in self.members:
                    return (g, f)
        return None

    def is_closed_under_composition(self) -> bool:
        return self.composition_witness() is None

    def missing_isomorphism(self) -> Optional[int]:
        cat = self.category
        for m in cat.morphism_ids:
            if m not in self.members and is_iso(cat, m):
                return m
        return None

    def contains_isomorphisms(self) -> bool:
        return self.missing_isomorphism() is None


@dataclass(frozen=True)
class LiftingSquare:
    """
    Commutative square r∘f = g∘l::

        A --f--> X
        |        |
        l        r
        v        v
        B --g--> Y
    """
    l: int
    r: int
    f: int
    g: int

    def commutes(self, cat: FinCategory) -> bool:
        return (cat.source(self.l) == cat.source(self.f)
                and cat.target(self.f) == cat.source(self.r)
                and cat.target(self.l) == cat.source(self.g)
                and cat.target(self.g) == cat.target(self.r)
                and cat.compose(self.r, self.f) == cat.compose(self.g, self.l))


def find_lift(cat: FinCategory, sq: LiftingSquare) -> Optional[int]:
    """Lowest-id t: B -> X with t∘l = f and r∘t = g"""
    if not sq.commutes(cat):
        raise ValueError(f"Lifting square {sq} does not commute")
    for t in cat.hom(cat.target(sq.l), cat.source(sq.r)):
        if cat.compose(t, sq.l) == sq.f and cat.compose(sq.r, t) == sq.g:
            return t
    return None


def lifting_obstruction(cat: FinCategory, l: int, r: int) -> Optional[LiftingSquare]:
    """A commutative square with sides l, r that has no lift, or None"""
    A, B = cat.source(l), cat.target(l)
    X, Y = cat.source(r), cat.target(r)
    lifted = {(cat.compose(t, l), cat.compose(r, t)) for t in cat.hom(B, X)}
    by_composite: Dict[int, List[int]] = {}
    for g in cat.hom(B, Y):
        by_composite.setdefault(cat.compose(g, l), []).append(g)
    for f in cat.hom(A, X):
        for g in by_composite.get(cat.compose(r, f), ()):
            if (f, g) not in lifted:
                return LiftingSquare(l, r, f, g)
    return None


def has_llp(cat: FinCategory, l: int, r: int) -> bool:
    """l has the left lifting property with respect to r"""
    return lifting_obstruction(cat, l, r) is None


def rlp_class(C: MorphismClass) -> MorphismClass:
    """C^□: morphisms with the right lifting property against every member of C"""
    cat = C.category
    lefts = list(C)
    members = [r for r in cat.morphism_ids if all(has_llp(cat, l, r) for l in lefts)]
    return MorphismClass(cat, members, f"rlp({C.name})")


def llp_class(F: MorphismClass) -> MorphismClass:
    """^□F: morphisms with the left lifting property against every member of F"""
    cat = F.category
    rights = list(F)
    members = [l for l in cat.morphism_ids if all(has_llp(cat, l, r) for r in rights)]
    return MorphismClass(cat, members, f"llp({F.name})")


def _first_obstruction(cat: FinCategory, lefts: Iterable[int], r: int) -> Optional[LiftingSquare]:
    for l in lefts:
        sq = lifting_obstruction(cat, l, r)
        if sq is not None:
            return sq
    return None


def factorizations(C: MorphismClass, F: MorphismClass) -> Dict[int, Tuple[int, int]]:
    """Lowest (apex, c, f) factorization α = f∘c with c ∈ C, f ∈ F, per morphism"""
    cat = C.category
    found: Dict[int, Tuple[int, int]] = {}
    for A in cat.objects:
        for M in sorted(cat.objects):
            for c in C.hom(A, M):
                for f in F.out_of(M):
                    found.setdefault(cat.compose(f, c), (c, f))
    return found


@dataclass
class WfsReport:
    """Result of checking whether (C, F) is a weak factorization system"""
    left_matches: bool
    right_matches: bool
    counterexamples: List[Dict[str, Any]] = field(default_factory=list)
    inconclusive: List[int] = field(default_factory=list)
    factorizations: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        """No counterexample exists inside the truncation"""
        return not self.counterexamples

    @property
    def status(self) -> str:
        if self.counterexamples:
            return "fail"
        if self.inconclusive:
            return "inconclusive"
        return "pass"

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> Dict[str, Any]:
        return {
            'status': self.status,
            'rlp_of_left_equals_right': self.right_matches,
            'llp_of_right_equals_left': self.left_matches,
            'factorized': len(self.factorizations),
            'inconclusive_at_bound': list(self.inconclusive),
            'counterexamples': list(self.counterexamples),
        }


def is_wfs(C: MorphismClass, F: MorphismClass) -> WfsReport:
    """Verify C^□ = F, ^□F = C and the factorization axiom by enumeration"""
    C._check_same(F)
    cat = C.category
    counterexamples: List[Dict[str, Any]] = []

    rlp = rlp_class(C)
    for r in sorted(F.members - rlp.members):
        sq = _first_obstruction(cat, C, r)
        counterexamples.append({'kind': 'rlp', 'morphism': r, 'reason': 'in F but fails to lift',
                                'square': _square_dict(sq)})
    for r in sorted(rlp.members - F.members):
        counterexamples.append({'kind': 'rlp', 'morphism': r, 'reason': 'lifts against C but not in F'})

    llp = llp_class(F)
    for l in sorted(C.members - llp.members):
        sq = next((s for s in (lifting_obstruction(cat, l, r) for r in F) if s is not None), None)
        counterexamples.append({'kind': 'llp', 'morphism': l, 'reason': 'in C but fails to lift',
                                'square': _square_dict(sq)})
    for l in sorted(llp.members - C.members):
        counterexamples.append({'kind': 'llp', 'morphism': l, 'reason': 'lifts against F but not in C'})

    found = factorizations(C, F)
    inconclusive = []
    for alpha in cat.morphism_ids:
        if alpha in found:
            continue
        if cat.truncated:
            inconclusive.append(alpha)
        else:
            counterexamples.append({'kind': 'factorization', 'morphism': alpha,
                                    'reason': 'no C-then-F factorization'})
    if inconclusive:
        logger.info("%d morphisms of %s have no factorization inside the truncation",
                    len(inconclusive), cat.name)
    return WfsReport(
        left_matches=llp.members == C.members,
        right_matches=rlp.members == F.members,
        counterexamples=counterexamples,
        inconclusive=inconclusive,
        factorizations=found,
    )


def _square_dict(sq: Optional[LiftingSquare]) -> Optional[Dict[str, int]]:
    if sq is None:
        return None
    return {'l': sq.l, 'r': sq.r, 'f': sq.f, 'g': sq.g}


def two_out_of_three_witness(W: MorphismClass) -> Optional[Tuple[int, int]]:
    """A composable pair (g, f) where exactly two of f, g, g∘f lie in W"""
    cat = W.category
    for f in cat.morphism_ids:
        for g in cat.out_of(cat.target(f)):
            count = (f in W) + (g in W) + (cat.compose(g, f) in W)
            if count == 2:
                return (g, f)
    return None


def pushout_closure_witness(K: MorphismClass) -> Optional[Dict[str, int]]:
    """A member k and a map g out of its source whose pushout leg leaves K.

    Spans whose pushout lies beyond a truncation are skipped.
    """
    cat = K.category
    provider = cat.colimits
    for k in K:
        for g in cat.out_of(cat.source(k)):
            po = provider.pushout(k, g)
            if po is None:
                if not cat.truncated:
                    return {'member': k, 'along': g, 'pushout': None}
                continue
            if po.leg_from_C not in K:
                return {'member': k, 'along': g, 'leg': po.leg_from_C}
    return None


def coproduct_of_morphisms(cat: FinCategory, f1: int, f2: int) -> Optional[int]:
    """f1 ⊔ f2 between the chosen binary coproducts"""
    provider = cat.colimits
    src = provider.coproduct((cat.source(f1), cat.source(f2)))
    tgt = provider.coproduct((cat.target(f1), cat.target(f2)))
    if src is None or tgt is None:
        return None
    maps = (cat.compose(tgt.injections[0], f1), cat.compose(tgt.injections[1], f2))
    return provider.copair(src, maps, tgt.apex)


def coproduct_closure_witness(K: MorphismClass) -> Optional[Tuple[int, int]]:
    cat = K.category
    for f1 in K:
        for f2 in K:
            h = coproduct_of_morphisms(cat, f1, f2)
            if h is not None and h not in K:
                return (f1, f2)
    return None


@dataclass
class HypothesisFailure:
    """A failed hypothesis of the WFS-to-Waldhausen construction"""
    hypothesis: int
    description: str
    witness: Any = None

    def to_dict(self) -> Dict[str, Any]:
        return {'hypothesis': self.hypothesis, 'description': self.description, 'witness': self.witness}


HYPOTHESES = {
    1: "C^□ is contained in W",
    2: "W contains all isomorphisms and satisfies 2-out-of-3",
    3: "C ∩ W is closed under pushouts",
    4: "0 -> X is in C for every object X",
}


def wfs_to_waldhausen(C: MorphismClass, W: MorphismClass) -> Union['WaldhausenStructure', HypothesisFailure]:
    """Turn (C, W) into a Waldhausen structure after checking the hypotheses"""
    from .waldhausen import WaldhausenStructure

    C._check_same(W)
    cat = C.category
    initial = find_initial(cat)
    if initial is None:
        raise ValueError(f"Category {cat.name!r} has no initial object")

    for r in rlp_class(C):
        if r not in W:
            sq = _first_obstruction(cat, C, r)
            return HypothesisFailure(1, HYPOTHESES[1], {'morphism': r, 'square': _square_dict(sq)})

    missing = W.missing_isomorphism()
    if missing is not None:
        return HypothesisFailure(2, HYPOTHESES[2], {'isomorphism': missing})
    pair = two_out_of_three_witness(W)
    if pair is not None:
        return HypothesisFailure(2, HYPOTHESES[2], {'g': pair[0], 'f': pair[1]})

    witness = pushout_closure_witness(C.intersection(W))
    if witness is not None:
        return HypothesisFailure(3, HYPOTHESES[3], witness)

    for X in cat.objects:
        zero_map = cat.hom(initial, X)[0]
        if zero_map not in C:
            return HypothesisFailure(4, HYPOTHESES[4], {'object': X, 'morphism': zero_map})

    logger.info("hypotheses hold on %s; building Waldhausen structure", cat.name)
    return WaldhausenStructure(cat, C, W, initial, name=f"wfs({cat.name})")


@dataclass(frozen=True)
class Cylinder:
    """Fold-map factorization X ⊔ X -> apex -> X"""
    apex: int
    inclusion: int
    projection: int
    coproduct_apex: int


def cylinder_object(C: MorphismClass, F: MorphismClass, X: int) -> Optional[Cylinder]:
    """Factor the fold map X ⊔ X -> X as a member of C followed by a member of F"""
    cat = C.category
    provider = cat.colimits
    cop = provider.coproduct((X, X))
    if cop is None:
        return None
    identity = cat.identity(X)
    fold = provider.copair(cop, (identity, identity), X)
    if fold is None:
        return None
    for M in sorted(cat.objects):
        for c in C.hom(cop.apex, M):
            for d in F.hom(M, X):
                if cat.compose(d, c) == fold:
                    return Cylinder(M, c, d, cop.apex)
    return None
