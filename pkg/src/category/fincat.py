"""
Finite categories with explicit morphism lists, functors between them, and the
enumeration oracles for initial objects, coproducts and pushouts.

Large categories (all pointed sets, all F_p spaces) only ever appear here as
finite skeletal truncations; an oracle that finds no universal cocone inside
the truncation returns None instead of guessing.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from ..core.exceptions import CompositionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Morphism:
    id: int
    source: int
    target: int
    data: Hashable = None


@dataclass(frozen=True)
class PushoutResult:
    """Pushout of the span (f: A -> B, g: A -> C)"""
    apex: int
    leg_from_B: int
    leg_from_C: int
    span: Tuple[int, int]
    witness: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class CoproductResult:
    apex: int
    injections: Tuple[int, ...]
    summands: Tuple[int, ...]


@dataclass
class ValidationReport:
    """Violations found while validating a category or functor"""
    violations: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            'success': self.valid,
            'error': None if self.valid else f"{len(self.violations)} violation(s)",
            'data': list(self.violations),
        }


Composer = Callable[[Morphism, Morphism], Hashable]


class FinCategory:
    """
    An explicit finite category.

    Composition comes from one of three places: an explicit table
    ``{(g, f): g∘f}``, a ``composer`` computing the data of ``g∘f`` from the
    data of ``g`` and ``f`` (looked up back into an id), or a ``parent``
    category this one is a subcategory of.
    """

    def __init__(self,
                 objects: Sequence[int],
                 morphisms: Sequence[Morphism],
                 identities: Dict[int, int],
                 composition: Optional[Dict[Tuple[int, int], int]] = None,
                 composer: Optional[Composer] = None,
                 parent: Optional['FinCategory'] = None,
                 name: str = "",
                 truncated: bool = False,
                 colimits: Optional[Callable[['FinCategory'], Any]] = None,
                 object_labels: Optional[Dict[int, Any]] = None):
        self.name = name
        self.truncated = truncated
        self.object_labels = dict(object_labels or {})
        self._objects = tuple(objects)
        self._object_set = frozenset(self._objects)
        self._identities = dict(identities)
        self._identity_set = frozenset(self._identities.values())
        self._table = composition
        self._composer = composer
        self._parent = parent
        self._colimits_factory = colimits
        self._colimits = None

        self._by_id: Dict[int, Morphism] = {}
        self._index: Dict[Tuple[int, int, Hashable], int] = {}
        hom: Dict[Tuple[int, int], List[int]] = {}
        out: Dict[int, List[int]] = {o: [] for o in self._objects}
        into: Dict[int, List[int]] = {o: [] for o in self._objects}
        for m in morphisms:
            self._by_id[m.id] = m
            self._index[(m.source, m.target, m.data)] = m.id
            hom.setdefault((m.source, m.target), []).append(m.id)
            out.setdefault(m.source, []).append(m.id)
            into.setdefault(m.target, []).append(m.id)
        self._hom = {key: tuple(ids) for key, ids in hom.items()}
        self._out = {key: tuple(ids) for key, ids in out.items()}
        self._into = {key: tuple(ids) for key, ids in into.items()}

    @classmethod
    def from_data(cls,
                  objects: Sequence[int],
                  arrows: Iterable[Tuple[int, int, Hashable]],
                  identity_data: Dict[int, Hashable],
                  composer: Composer,
                  **kwargs) -> 'FinCategory':
        """Build a category from (source, target, data) triples.

        Ids are assigned in canonical order: by source, then target, with the
        identity first inside its hom-set, then by data.
        """
        def key(arrow):
            s, t, data = arrow
            is_id = s == t and identity_data.get(s) == data
            return (s, t, not is_id, data)

        morphisms = []
        identities = {}
        for new_id, (s, t, data) in enumerate(sorted(arrows, key=key)):
            morphisms.append(Morphism(new_id, s, t, data))
            if s == t and identity_data.get(s) == data:
                identities[s] = new_id
        return cls(objects, morphisms, identities, composer=composer, **kwargs)

    def __repr__(self) -> str:
        return f"FinCategory({self.name!r}, objects={len(self._objects)}, morphisms={len(self._by_id)})"

    @property
    def objects(self) -> Tuple[int, ...]:
        return self._objects

    @property
    def morphism_ids(self) -> List[int]:
        return sorted(self._by_id)

    @property
    def morphisms(self) -> List[Morphism]:
        return [self._by_id[m] for m in sorted(self._by_id)]

    @property
    def colimits(self):
        """The colimit provider for this category"""
        if self._colimits is None:
            if self._colimits_factory is not None:
                self._colimits = self._colimits_factory(self)
            else:
                from .colimits import EnumerationColimits
                self._colimits = EnumerationColimits(self)
        return self._colimits

    def has_object(self, obj: int) -> bool:
        return obj in self._object_set

    def has_morphism(self, m: int) -> bool:
        return m in self._by_id

    def morphism(self, m: int) -> Morphism:
        try:
            return self._by_id[m]
        except KeyError:
            raise KeyError(f"Unknown morphism {m} in category {self.name!r}")

    def source(self, m: int) -> int:
        return self.morphism(m).source

    def target(self, m: int) -> int:
        return self.morphism(m).target

    def data(self, m: int) -> Hashable:
        return self.morphism(m).data

    def label(self, obj: int) -> Any:
        return self.object_labels.get(obj, obj)

    def identity(self, obj: int) -> int:
        try:
            return self._identities[obj]
        except KeyError:
            raise KeyError(f"Object {obj} has no identity in category {self.name!r}")

    def is_identity(self, m: int) -> bool:
        return m in self._identity_set

    def hom(self, a: int, b: int) -> Tuple[int, ...]:
        return self._hom.get((a, b), ())

    def out_of(self, a: int) -> Tuple[int, ...]:
        return self._out.get(a, ())

    def into(self, b: int) -> Tuple[int, ...]:
        return self._into.get(b, ())

    def lookup(self, source: int, target: int, data: Hashable) -> Optional[int]:
        return self._index.get((source, target, data))

    def composition_entry(self, g: int, f: int) -> Optional[int]:
        """Raw composite of composable (g, f), or None if the table has no entry"""
        if self._table is not None:
            return self._table.get((g, f))
        if self._composer is not None:
            fm, gm = self._by_id[f], self._by_id[g]
            return self._index.get((fm.source, gm.target, self._composer(gm, fm)))
        if self._parent is not None:
            h = self._parent.composition_entry(g, f)
            return h if h in self._by_id else None
        return None

    def compose(self, g: int, f: int) -> int:
        """Return g∘f"""
        fm, gm = self.morphism(f), self.morphism(g)
        if fm.target != gm.source:
            raise CompositionError(
                f"Cannot compose {g} after {f}: target {fm.target} != source {gm.source}")
        if self._table is None:
            if f in self._identity_set:
                return g
            if g in self._identity_set:
                return f
        h = self.composition_entry(g, f)
        if h is None:
            raise CompositionError(f"Composite of {g} after {f} is not in category {self.name!r}")
        return h

    def compose_path(self, *ms: int) -> int:
        """Compose right-to-left: compose_path(h, g, f) = h∘g∘f"""
        result = ms[-1]
        for m in reversed(ms[:-1]):
            result = self.compose(m, result)
        return result

    def subcategory(self, objects: Iterable[int], morphism_ids: Iterable[int],
                    name: str = "", colimits=None, object_labels=None) -> 'FinCategory':
        """Subcategory sharing this category's ids; composites must stay inside"""
        wanted = set(objects)
        objects = [o for o in self._objects if o in wanted]
        keep = set(morphism_ids)
        morphs = [self._by_id[m] for m in sorted(keep)]
        identities = {o: self._identities[o] for o in objects}
        labels = object_labels if object_labels is not None else {
            o: self.object_labels[o] for o in objects if o in self.object_labels}
        return FinCategory(objects, morphs, identities, parent=self,
                           name=name or f"sub({self.name})", truncated=self.truncated,
                           colimits=colimits, object_labels=labels)

    def full_subcategory(self, objects: Iterable[int], name: str = "",
                         colimits=None) -> 'FinCategory':
        objects = set(objects)
        ids = [m.id for m in self._by_id.values() if m.source in objects and m.target in objects]
        return self.subcategory(objects, ids, name=name, colimits=colimits)


@dataclass
class Functor:
    """A functor given by explicit object and morphism maps.

    Partial functors (used for reindexing inside a truncation) simply omit
    the objects whose image lies beyond the bound.
    """
    source: FinCategory
    target: FinCategory
    object_map: Dict[int, int]
    morphism_map: Dict[int, int]
    name: str = ""

    def map_object(self, obj: int) -> int:
        return self.object_map[obj]

    def map_morphism(self, m: int) -> int:
        return self.morphism_map[m]

    def __call__(self, m: int) -> int:
        return self.morphism_map[m]

    @property
    def is_total(self) -> bool:
        return (len(self.object_map) == len(self.source.objects)
                and len(self.morphism_map) == len(self.source.morphism_ids))


def validate_category(cat: FinCategory) -> ValidationReport:
    """Check endpoints, identities, closure and associativity by full enumeration"""
    report = ValidationReport()
    for obj in cat.objects:
        try:
            i = cat.identity(obj)
        except KeyError:
            report.violations.append(f"object {obj} has no identity")
            continue
        m = cat.morphism(i)
        if m.source != obj or m.target != obj:
            report.violations.append(f"identity {i} of object {obj} is not an endomorphism of {obj}")

    for m in cat.morphisms:
        if not cat.has_object(m.source) or not cat.has_object(m.target):
            report.violations.append(f"morphism {m.id} has an endpoint outside the object list")

    for m in cat.morphisms:
        for side, other in (("left", cat._identities.get(m.target)), ("right", cat._identities.get(m.source))):
            if other is None:
                continue
            entry = cat.composition_entry(other, m.id) if side == "left" else cat.composition_entry(m.id, other)
            if entry != m.id:
                report.violations.append(f"identity is not {side} neutral for morphism {m.id}")

    composite: Dict[Tuple[int, int], int] = {}
    for f in cat.morphisms:
        for g in cat.out_of(f.target):
            h = cat.composition_entry(g, f.id)
            if h is None:
                report.violations.append(f"missing composite for composable pair ({g}, {f.id})")
                continue
            hm = cat._by_id.get(h)
            if hm is None:
                report.violations.append(f"composite of ({g}, {f.id}) is {h}, not a morphism")
                continue
            if hm.source != f.source or hm.target != cat.target(g):
                report.violations.append(f"composite of ({g}, {f.id}) has wrong endpoints")
                continue
            composite[(g, f.id)] = h

    for e in cat.morphisms:
        for f in cat.out_of(e.target):
            fe = composite.get((f, e.id))
            if fe is None:
                continue
            for g in cat.out_of(cat.target(f)):
                gf = composite.get((g, f))
                if gf is None:
                    continue
                left = composite.get((g, fe))
                right = composite.get((gf, e.id))
                if left is not None and right is not None and left != right:
                    report.violations.append(
                        f"associativity fails on triple ({g}, {f}, {e.id}): {left} != {right}")
    return report


def validate_functor(F: Functor, partial: bool = False) -> ValidationReport:
    """Check that F preserves endpoints, identities and composites"""
    report = ValidationReport()
    src, tgt = F.source, F.target
    if not partial:
        for obj in src.objects:
            if obj not in F.object_map:
                report.violations.append(f"object {obj} has no image")
        for m in src.morphism_ids:
            if m not in F.morphism_map:
                report.violations.append(f"morphism {m} has no image")
    for m, image in F.morphism_map.items():
        mm = src.morphism(m)
        if mm.source not in F.object_map or mm.target not in F.object_map:
            report.violations.append(f"morphism {m} is mapped but an endpoint is not")
            continue
        if not tgt.has_morphism(image):
            report.violations.append(f"image {image} of morphism {m} is not in the target")
            continue
        if tgt.source(image) != F.object_map[mm.source] or tgt.target(image) != F.object_map[mm.target]:
            report.violations.append(f"morphism {m} is not sent between the images of its endpoints")
    for obj, image in F.object_map.items():
        i = src.identity(obj)
        if i in F.morphism_map and F.morphism_map[i] != tgt.identity(image):
            report.violations.append(f"identity of object {obj} is not preserved")
    if report.violations:
        return report
    for f, Ff in F.morphism_map.items():
        for g in src.out_of(src.target(f)):
            if g not in F.morphism_map:
                continue
            gf = src.compose(g, f)
            if gf not in F.morphism_map:
                continue
            if tgt.compose(F.morphism_map[g], Ff) != F.morphism_map[gf]:
                report.violations.append(f"composite of ({g}, {f}) is not preserved")
    return report


def is_initial(cat: FinCategory, obj: int) -> bool:
    return all(len(cat.hom(obj, b)) == 1 for b in cat.objects)


def find_initial(cat: FinCategory) -> Optional[int]:
    """Lowest-id object with exactly one morphism to every object"""
    for obj in sorted(cat.objects):
        if is_initial(cat, obj):
            return obj
    return None


def inverse(cat: FinCategory, f: int) -> Optional[int]:
    m = cat.morphism(f)
    for g in cat.hom(m.target, m.source):
        if cat.compose(g, f) == cat.identity(m.source) and cat.compose(f, g) == cat.identity(m.target):
            return g
    return None


def is_iso(cat: FinCategory, f: int) -> bool:
    return inverse(cat, f) is not None


def _pushout_cocones(cat: FinCategory, f: int, g: int, apex: int) -> List[Tuple[int, int]]:
    B, C = cat.target(f), cat.target(g)
    by_composite: Dict[int, List[int]] = {}
    for c in cat.hom(C, apex):
        by_composite.setdefault(cat.compose(c, g), []).append(c)
    cocones = []
    for b in cat.hom(B, apex):
        for c in by_composite.get(cat.compose(b, f), ()):
            cocones.append((b, c))
    return cocones


def _factors_uniquely(cat: FinCategory, legs: Sequence[int], apex: int, counts: Dict[int, int]) -> bool:
    """True iff h -> (h∘leg_k) is a bijection hom(apex, D) -> cocones into D.

    Images always lie among the cocones, so comparing sizes suffices.
    """
    for D in cat.objects:
        homs = cat.hom(apex, D)
        if len(homs) != counts[D]:
            return False
        image = {tuple(cat.compose(h, leg) for leg in legs) for h in homs}
        if len(image) != len(homs):
            return False
    return True


def is_pushout(cat: FinCategory, f: int, g: int, leg_b: int, leg_c: int) -> bool:
    """Independent universality check for a candidate pushout square"""
    if cat.source(f) != cat.source(g):
        return False
    if cat.source(leg_b) != cat.target(f) or cat.source(leg_c) != cat.target(g):
        return False
    if cat.target(leg_b) != cat.target(leg_c):
        return False
    if cat.compose(leg_b, f) != cat.compose(leg_c, g):
        return False
    counts = {D: len(_pushout_cocones(cat, f, g, D)) for D in cat.objects}
    return _factors_uniquely(cat, (leg_b, leg_c), cat.target(leg_b), counts)


def pushout(cat: FinCategory, f: int, g: int) -> Optional[PushoutResult]:
    """Pushout of (f: A -> B, g: A -> C) by cocone enumeration.

    Canonical choice: lowest apex id, then cocones with an identity leg, then
    lowest (leg_from_B, leg_from_C).
    """
    if cat.source(f) != cat.source(g):
        raise ValueError(f"Span legs {f} and {g} do not share a source")
    cocones = {D: _pushout_cocones(cat, f, g, D) for D in cat.objects}
    counts = {D: len(c) for D, c in cocones.items()}
    checked = 0
    for apex in sorted(cat.objects):
        if any(len(cat.hom(apex, D)) != counts[D] for D in cat.objects):
            continue
        ranked = sorted(cocones[apex],
                        key=lambda bc: (not (cat.is_identity(bc[0]) or cat.is_identity(bc[1])), bc))
        for b, c in ranked:
            checked += 1
            if _factors_uniquely(cat, (b, c), apex, counts):
                return PushoutResult(apex, b, c, (f, g), {'cocones_checked': checked})
    logger.debug("no universal cocone for span (%s, %s) in %s", f, g, cat.name)
    return None


def is_coproduct(cat: FinCategory, objs: Sequence[int], apex: int, injections: Sequence[int]) -> bool:
    if len(objs) != len(injections):
        return False
    for obj, inj in zip(objs, injections):
        if cat.source(inj) != obj or cat.target(inj) != apex:
            return False
    counts = {D: _product_size(cat, objs, D) for D in cat.objects}
    return _factors_uniquely(cat, tuple(injections), apex, counts)


def _product_size(cat: FinCategory, objs: Sequence[int], D: int) -> int:
    size = 1
    for obj in objs:
        size *= len(cat.hom(obj, D))
    return size


def coproduct(cat: FinCategory, objs: Sequence[int]) -> Optional[CoproductResult]:
    """Coproduct by enumeration; the empty list gives the initial object"""
    objs = tuple(objs)
    if not objs:
        initial = find_initial(cat)
        return None if initial is None else CoproductResult(initial, (), ())
    counts = {D: _product_size(cat, objs, D) for D in cat.objects}
    for apex in sorted(cat.objects):
        if any(len(cat.hom(apex, D)) != counts[D] for D in cat.objects):
            continue
        for injections in product(*(cat.hom(obj, apex) for obj in objs)):
            if _factors_uniquely(cat, injections, apex, counts):
                return CoproductResult(apex, tuple(injections), objs)
    logger.debug("no coproduct of %s in %s", objs, cat.name)
    return None


def product_category(cats: Sequence[FinCategory], name: str = "") -> FinCategory:
    """Finite product of categories; data of a morphism is its tuple of components"""
    cats = list(cats)
    object_tuples = list(product(*(c.objects for c in cats)))
    object_ids = {t: i for i, t in enumerate(object_tuples)}
    arrows = []
    for comps in product(*(c.morphism_ids for c in cats)):
        s = object_ids[tuple(c.source(m) for c, m in zip(cats, comps))]
        t = object_ids[tuple(c.target(m) for c, m in zip(cats, comps))]
        arrows.append((s, t, tuple(comps)))
    identity_data = {object_ids[t]: tuple(c.identity(o) for c, o in zip(cats, t)) for t in object_tuples}

    def composer(g: Morphism, f: Morphism):
        return tuple(c.compose(gi, fi) for c, gi, fi in zip(cats, g.data, f.data))

    return FinCategory.from_data(
        list(range(len(object_tuples))), arrows, identity_data, composer,
        name=name or "product", truncated=any(c.truncated for c in cats),
        object_labels={i: t for t, i in object_ids.items()})
