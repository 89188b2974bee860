"""
Waldhausen structures: the record, the exhaustive axiom verifier and the
derived structures on Mor(E), coMor(E), E/A and the co-slice of cofibrations
under A.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from .classes import MorphismClass
from . import fincat
from .colimits import ColimitProvider
from .fincat import (
    CoproductResult,
    FinCategory,
    Functor,
    PushoutResult,
    ValidationReport,
    is_initial,
    is_iso,
    is_pushout,
)

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
BEYOND = "beyond"

EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}


@dataclass
class WaldhausenStructure:
    """A finite category with cofibrations, weak equivalences and an initial object.

    Morphisms in ``undetermined`` could not be classified because a colimit
    they need lies beyond the truncation; they belong to neither class.
    """
    category: FinCategory
    cof: MorphismClass
    we: MorphismClass
    initial: Optional[int]
    name: str = ""
    undetermined: FrozenSet[int] = frozenset()
    extras: Dict[str, Any] = field(default_factory=dict)

    def is_cofibration(self, m: int) -> Optional[bool]:
        if m in self.undetermined:
            return None
        return m in self.cof

    def is_weak_equivalence(self, m: int) -> Optional[bool]:
        if m in self.undetermined:
            return None
        return m in self.we

    def classification(self) -> Dict[str, FrozenSet[int]]:
        return {
            'cofibrations': self.cof.members,
            'weak_equivalences': self.we.members,
            'undetermined': frozenset(self.undetermined),
        }

    def same_classification(self, other: 'WaldhausenStructure') -> bool:
        return self.classification() == other.classification()

    def zero_map(self, obj: int) -> Optional[int]:
        """The unique morphism from the initial object to ``obj``"""
        if self.initial is None:
            return None
        homs = self.category.hom(self.initial, obj)
        return homs[0] if len(homs) == 1 else None


@dataclass
class AxiomResult:
    name: str
    description: str
    status: str = PASS
    checked: int = 0
    beyond_bound: int = 0
    failures: int = 0
    exhausted: bool = True
    witnesses: List[Dict[str, Any]] = field(default_factory=list)

    def to_record(self) -> Dict[str, Any]:
        return {
            'axiom': self.name,
            'description': self.description,
            'status': self.status,
            'checked': self.checked,
            'beyond_bound': self.beyond_bound,
            'failures': self.failures,
            'exhaustive': self.exhausted,
            'witness': self.witnesses[0] if self.witnesses else None,
        }


@dataclass
class AxiomReport:
    structure: str
    results: Dict[str, AxiomResult]
    budget: Optional[int]

    @property
    def status(self) -> str:
        statuses = [r.status for r in self.results.values()]
        if FAIL in statuses:
            return FAIL
        if INCONCLUSIVE in statuses:
            return INCONCLUSIVE
        return PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def has_failures(self) -> bool:
        return self.status == FAIL

    @property
    def exhaustive(self) -> bool:
        return all(r.exhausted for r in self.results.values())

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    @property
    def instances_checked(self) -> int:
        return sum(r.checked + r.beyond_bound for r in self.results.values())

    def failures(self) -> List[AxiomResult]:
        return [r for r in self.results.values() if r.status == FAIL]

    def __getitem__(self, name: str) -> AxiomResult:
        return self.results[name]

    def to_records(self) -> List[Dict[str, Any]]:
        return [r.to_record() for r in self.results.values()]


AXIOMS = {
    'initial': "the designated object is initial",
    'C1': "all isomorphisms are cofibrations",
    'W1': "all isomorphisms are weak equivalences",
    'C2': "0 -> A is a cofibration for every object A",
    'C3': "pushouts along cofibrations exist and the opposite leg is a cofibration",
    'W2': "gluing lemma",
    'C-comp': "cofibrations are closed under composition",
    'W-comp': "weak equivalences are closed under composition",
}

Outcome = Tuple[str, Optional[Dict[str, Any]]]


def _run_axiom(name: str, instances: Iterable[Any], check: Callable[[Any], Outcome],
               budget: Optional[int], max_witnesses: int) -> AxiomResult:
    result = AxiomResult(name, AXIOMS[name])
    for instance in instances:
        if budget is not None and result.checked + result.beyond_bound >= budget:
            result.exhausted = False
            break
        outcome, witness = check(instance)
        if outcome == BEYOND:
            result.beyond_bound += 1
            continue
        result.checked += 1
        if outcome == FAIL:
            result.failures += 1
            if len(result.witnesses) < max_witnesses:
                result.witnesses.append(witness)
    if result.failures:
        result.status = FAIL
    elif not result.exhausted:
        result.status = INCONCLUSIVE
    logger.info("axiom %s: %s (%d checked, %d beyond bound)",
                name, result.status, result.checked, result.beyond_bound)
    return result


def _membership(value: Optional[bool], witness: Dict[str, Any]) -> Outcome:
    if value is None:
        return BEYOND, None
    return (PASS, None) if value else (FAIL, witness)


class _Gluing:
    """Enumerates and checks the instances of the gluing lemma"""

    def __init__(self, E: WaldhausenStructure):
        self.E = E
        self.cat = E.category
        self.provider = E.category.colimits
        self._pushouts: Dict[Tuple[int, int], Optional[PushoutResult]] = {}
        self._we_hom: Dict[Tuple[int, int], List[int]] = {}

    def pushout(self, f: int, g: int) -> Optional[PushoutResult]:
        key = (f, g)
        if key not in self._pushouts:
            self._pushouts[key] = self.provider.pushout(f, g)
        return self._pushouts[key]

    def we_hom(self, a: int, b: int) -> List[int]:
        key = (a, b)
        if key not in self._we_hom:
            self._we_hom[key] = self.E.we.hom(a, b)
        return self._we_hom[key]

    def instances(self) -> Iterator[Tuple[int, ...]]:
        cat, E = self.cat, self.E
        for f in E.cof:
            A, B = cat.source(f), cat.target(f)
            for g in cat.out_of(A):
                C = cat.target(g)
                for wa in E.we.out_of(A):
                    A2 = cat.target(wa)
                    for f2 in E.cof.out_of(A2):
                        top_right = cat.compose(f2, wa)
                        wbs = [wb for wb in self.we_hom(B, cat.target(f2)) if cat.compose(wb, f) == top_right]
                        if not wbs:
                            continue
                        for g2 in cat.out_of(A2):
                            top_left = cat.compose(g2, wa)
                            for wc in self.we_hom(C, cat.target(g2)):
                                if cat.compose(wc, g) != top_left:
                                    continue
                                for wb in wbs:
                                    yield (f, g, wa, f2, g2, wb, wc)

    def check(self, instance: Tuple[int, ...]) -> Outcome:
        f, g, wa, f2, g2, wb, wc = instance
        cat = self.cat
        top, bottom = self.pushout(f, g), self.pushout(f2, g2)
        if top is None or bottom is None:
            return BEYOND, None
        x = cat.compose(bottom.leg_from_B, wb)
        y = cat.compose(bottom.leg_from_C, wc)
        h = self.provider.induced(top, x, y)
        witness = {'f': f, 'g': g, 'w_A': wa, 'f_prime': f2, 'g_prime': g2, 'w_B': wb, 'w_C': wc}
        if h is None:
            witness['induced'] = None
            return FAIL, witness
        witness['induced'] = h
        return _membership(self.E.is_weak_equivalence(h), witness)


def verify_waldhausen(E: WaldhausenStructure, budget: Optional[int] = None,
                      check_universality: bool = False, max_witnesses: int = 5) -> AxiomReport:
    """Check the Waldhausen axioms by enumeration, at most ``budget`` instances per axiom"""
    cat = E.category
    provider = cat.colimits
    results: Dict[str, AxiomResult] = {}
    logger.info("verifying %s (%d objects, %d morphisms)", E.name or cat.name,
                len(cat.objects), len(cat.morphism_ids))

    def check_initial(obj):
        if obj is None:
            return (FAIL, {'initial': None}) if cat.objects else (PASS, None)
        return (PASS, None) if is_initial(cat, obj) else (FAIL, {'initial': obj})

    results['initial'] = _run_axiom('initial', [E.initial], check_initial, budget, max_witnesses)

    isos = [m for m in cat.morphism_ids if is_iso(cat, m)]
    results['C1'] = _run_axiom(
        'C1', isos, lambda m: _membership(E.is_cofibration(m), {'morphism': m}), budget, max_witnesses)
    results['W1'] = _run_axiom(
        'W1', isos, lambda m: _membership(E.is_weak_equivalence(m), {'morphism': m}), budget, max_witnesses)

    def check_c2(A):
        zero = E.zero_map(A)
        if zero is None:
            return FAIL, {'object': A, 'morphism': None}
        return _membership(E.is_cofibration(zero), {'object': A, 'morphism': zero})

    objects = cat.objects if E.initial is not None else ()
    results['C2'] = _run_axiom('C2', objects, check_c2, budget, max_witnesses)

    def c3_instances():
        for f in E.cof:
            for g in cat.out_of(cat.source(f)):
                yield (f, g)

    def check_c3(span):
        f, g = span
        po = provider.pushout(f, g)
        if po is None:
            if cat.truncated:
                return BEYOND, None
            return FAIL, {'cofibration': f, 'map': g, 'pushout': None}
        if check_universality and not is_pushout(cat, f, g, po.leg_from_B, po.leg_from_C):
            return FAIL, {'cofibration': f, 'map': g, 'pushout': po.apex, 'universal': False}
        return _membership(E.is_cofibration(po.leg_from_C),
                           {'cofibration': f, 'map': g, 'leg': po.leg_from_C})

    results['C3'] = _run_axiom('C3', c3_instances(), check_c3, budget, max_witnesses)

    gluing = _Gluing(E)
    results['W2'] = _run_axiom('W2', gluing.instances(), gluing.check, budget, max_witnesses)

    for name, cls, member in (('C-comp', E.cof, E.is_cofibration), ('W-comp', E.we, E.is_weak_equivalence)):
        def pairs(cls=cls):
            for f in cls:
                for g in cls.out_of(cat.target(f)):
                    yield (g, f)

        def check_pair(pair, member=member):
            g, f = pair
            gf = cat.compose(g, f)
            return _membership(member(gf), {'g': g, 'f': f, 'composite': gf})

        results[name] = _run_axiom(name, pairs(), check_pair, budget, max_witnesses)

    report = AxiomReport(E.name or cat.name, results, budget)
    logger.info("verification of %s: %s", report.structure, report.status)
    return report


def is_exact(F: Functor, source: WaldhausenStructure, target: WaldhausenStructure,
             budget: Optional[int] = None) -> ValidationReport:
    """Check that F preserves the initial object, C, W and pushouts along cofibrations.

    Morphisms or squares that F does not map (partial functors) are skipped.
    """
    report = ValidationReport()
    src, tgt = source.category, target.category
    if source.initial is not None and source.initial in F.object_map:
        if not is_initial(tgt, F.object_map[source.initial]):
            report.violations.append(f"initial object {source.initial} is not sent to an initial object")
    for m, image in sorted(F.morphism_map.items()):
        for label, mine, theirs in (("cofibration", source.is_cofibration, target.is_cofibration),
                                    ("weak equivalence", source.is_weak_equivalence, target.is_weak_equivalence)):
            if mine(m) and theirs(image) is False:
                report.violations.append(f"{label} {m} is sent to {image}, which is not a {label}")
    checked = 0
    for f in source.cof:
        for g in src.out_of(src.source(f)):
            if budget is not None and checked >= budget:
                return report
            po = src.colimits.pushout(f, g)
            if po is None:
                continue
            square = (f, g, po.leg_from_B, po.leg_from_C)
            if not all(m in F.morphism_map for m in square):
                continue
            checked += 1
            Ff, Fg, Fb, Fc = (F.morphism_map[m] for m in square)
            if not is_pushout(tgt, Ff, Fg, Fb, Fc):
                report.violations.append(f"pushout square of ({f}, {g}) is not preserved")
    return report


def _classify(category: FinCategory, decide: Callable[[int], Optional[Tuple[bool, bool]]],
              ) -> Tuple[List[int], List[int], List[int]]:
    cof, we, unknown = [], [], []
    for m in category.morphism_ids:
        verdict = decide(m)
        if verdict is None:
            unknown.append(m)
            continue
        if verdict[0]:
            cof.append(m)
        if verdict[1]:
            we.append(m)
    return cof, we, unknown


def _structure(category: FinCategory, decide, initial: Optional[int], name: str,
               extras: Optional[Dict[str, Any]] = None) -> WaldhausenStructure:
    cof, we, unknown = _classify(category, decide)
    if unknown:
        logger.debug("%d morphisms of %s left undetermined at the bound", len(unknown), name)
    return WaldhausenStructure(
        category,
        MorphismClass(category, cof, "C"),
        MorphismClass(category, we, "W"),
        initial,
        name=name,
        undetermined=frozenset(unknown),
        extras=extras or {},
    )


def _both(E: WaldhausenStructure, first: int, second: int) -> Optional[Tuple[bool, bool]]:
    c1, c2 = E.is_cofibration(first), E.is_cofibration(second)
    w1, w2 = E.is_weak_equivalence(first), E.is_weak_equivalence(second)
    if None in (c1, c2, w1, w2):
        return None
    return (c1 and c2, w1 and w2)


class MorColimits(ColimitProvider):
    """Colimits in (full subcategories of) Mor(E), computed componentwise"""

    def __init__(self, category: FinCategory, base: FinCategory):
        super().__init__(category)
        self.base = base

    def pushout(self, f: int, g: int) -> Optional[PushoutResult]:
        cat, base = self.category, self.base
        a1, u1 = cat.data(f)
        a2, u2 = cat.data(g)
        g1, g2 = cat.target(f), cat.target(g)
        dom = base.colimits.pushout(a1, a2)
        cod = base.colimits.pushout(u1, u2)
        if dom is None or cod is None:
            return None
        h = base.colimits.induced(dom, base.compose(cod.leg_from_B, g1), base.compose(cod.leg_from_C, g2))
        if h is None or not cat.has_object(h):
            return None
        leg_b = cat.lookup(g1, h, (dom.leg_from_B, cod.leg_from_B))
        leg_c = cat.lookup(g2, h, (dom.leg_from_C, cod.leg_from_C))
        if leg_b is None or leg_c is None:
            return None
        return PushoutResult(h, leg_b, leg_c, (f, g))

    def coproduct(self, objs) -> Optional[CoproductResult]:
        cat, base = self.category, self.base
        objs = tuple(objs)
        dom = base.colimits.coproduct(tuple(base.source(o) for o in objs))
        cod = base.colimits.coproduct(tuple(base.target(o) for o in objs))
        if dom is None or cod is None:
            return None
        maps = [base.compose(inj, o) for inj, o in zip(cod.injections, objs)]
        h = base.colimits.copair(dom, maps, cod.apex)
        if h is None or not cat.has_object(h):
            return None
        injections = []
        for o, di, ci in zip(objs, dom.injections, cod.injections):
            inj = cat.lookup(o, h, (di, ci))
            if inj is None:
                return None
            injections.append(inj)
        return CoproductResult(h, tuple(injections), objs)


def _morphism_category(E: WaldhausenStructure, objects: List[int], name: str) -> FinCategory:
    base = E.category
    arrows = []
    for f in objects:
        X, A = base.source(f), base.target(f)
        for g in objects:
            Y, B = base.source(g), base.target(g)
            by_composite: Dict[int, List[int]] = {}
            for u in base.hom(A, B):
                by_composite.setdefault(base.compose(u, f), []).append(u)
            for a in base.hom(X, Y):
                for u in by_composite.get(base.compose(g, a), ()):
                    arrows.append((f, g, (a, u)))
    identity_data = {f: (base.identity(base.source(f)), base.identity(base.target(f))) for f in objects}

    def composer(second, first):
        return (base.compose(second.data[0], first.data[0]), base.compose(second.data[1], first.data[1]))

    cat = FinCategory.from_data(
        objects, arrows, identity_data, composer, name=name, truncated=base.truncated,
        colimits=lambda c: MorColimits(c, base),
        object_labels={f: (base.source(f), base.target(f)) for f in objects})
    logger.info("materialized %s: %d objects, %d morphisms", name, len(objects), len(arrows))
    return cat


def _ordered_morphisms(base: FinCategory, ids: Iterable[int]) -> List[int]:
    return sorted(ids, key=lambda m: (base.source(m), base.target(m), m))


def mor_structure(E: WaldhausenStructure) -> WaldhausenStructure:
    """Mor(E): objects are morphisms of E, morphisms are commutative squares (a, u).

    A square is a cofibration (weak equivalence) iff both components are.
    """
    base = E.category
    name = f"Mor({E.name or base.name})"
    cat = _morphism_category(E, _ordered_morphisms(base, base.morphism_ids), name)
    initial = base.identity(E.initial) if E.initial is not None else None
    return _structure(cat, lambda m: _both(E, *cat.data(m)), initial, name)


def comor_structure(E: WaldhausenStructure) -> WaldhausenStructure:
    """coMor(E): the full subcategory of Mor(E) on cofibrations.

    A square (u, a): (f: A >-> X) -> (g: B >-> Y) is a cofibration (weak
    equivalence) iff u and the induced h: B ⊔_A X -> Y both are.
    """
    base = E.category
    name = f"coMor({E.name or base.name})"
    objects = _ordered_morphisms(base, E.cof)
    cat = _morphism_category(E, objects, name)
    induced: Dict[int, Optional[int]] = {}

    def decide(m):
        u, a = cat.data(m)
        f, g = cat.source(m), cat.target(m)
        po = base.colimits.pushout(f, u)
        if po is None:
            induced[m] = None
            return None
        h = base.colimits.induced(po, a, g)
        induced[m] = h
        if h is None:
            return None
        return _both(E, u, h)

    initial = base.identity(E.initial) if E.initial is not None else None
    return _structure(cat, decide, initial, name, extras={'induced': induced})


class SliceColimits(ColimitProvider):
    """Colimits in E/A: colimits of E with the induced structure map"""

    def __init__(self, category: FinCategory, base: FinCategory):
        super().__init__(category)
        self.base = base

    def pushout(self, f: int, g: int) -> Optional[PushoutResult]:
        cat, base = self.category, self.base
        po = base.colimits.pushout(cat.data(f), cat.data(g))
        if po is None:
            return None
        structure = base.colimits.induced(po, cat.target(f), cat.target(g))
        if structure is None or not cat.has_object(structure):
            return None
        leg_b = cat.lookup(cat.target(f), structure, po.leg_from_B)
        leg_c = cat.lookup(cat.target(g), structure, po.leg_from_C)
        if leg_b is None or leg_c is None:
            return None
        return PushoutResult(structure, leg_b, leg_c, (f, g))

    def coproduct(self, objs) -> Optional[CoproductResult]:
        cat, base = self.category, self.base
        objs = tuple(objs)
        cop = base.colimits.coproduct(tuple(base.source(o) for o in objs))
        if cop is None:
            return None
        if objs:
            structure = base.colimits.copair(cop, objs, base.target(objs[0]))
        else:
            structure = base.colimits.from_initial(self._anchor())
        if structure is None or not cat.has_object(structure):
            return None
        injections = tuple(cat.lookup(o, structure, inj) for o, inj in zip(objs, cop.injections))
        if None in injections:
            return None
        return CoproductResult(structure, injections, objs)

    def _anchor(self) -> int:
        any_object = self.category.objects[0]
        return self.base.target(any_object)


class CosliceColimits(ColimitProvider):
    """Pushouts in the co-slice of cofibrations under A"""

    def __init__(self, category: FinCategory, base: FinCategory):
        super().__init__(category)
        self.base = base

    def pushout(self, f: int, g: int) -> Optional[PushoutResult]:
        cat, base = self.category, self.base
        po = base.colimits.pushout(cat.data(f), cat.data(g))
        if po is None:
            return None
        structure = base.compose(po.leg_from_B, cat.target(f))
        if not cat.has_object(structure):
            return None
        leg_b = cat.lookup(cat.target(f), structure, po.leg_from_B)
        leg_c = cat.lookup(cat.target(g), structure, po.leg_from_C)
        if leg_b is None or leg_c is None:
            return None
        return PushoutResult(structure, leg_b, leg_c, (f, g))

    def coproduct(self, objs) -> Optional[CoproductResult]:
        return fincat.coproduct(self.category, objs)


def _inherit(E: WaldhausenStructure):
    def decide(m_data):
        c, w = E.is_cofibration(m_data), E.is_weak_equivalence(m_data)
        if c is None or w is None:
            return None
        return (c, w)
    return decide


def slice_structure(E: WaldhausenStructure, A: int) -> WaldhausenStructure:
    """E/A with classes inherited from E and initial object 0 -> A"""
    base = E.category
    objects = _ordered_morphisms(base, base.into(A))
    arrows = []
    for f in objects:
        for g in objects:
            for k in base.hom(base.source(f), base.source(g)):
                if base.compose(g, k) == f:
                    arrows.append((f, g, k))
    identity_data = {f: base.identity(base.source(f)) for f in objects}
    name = f"{E.name or base.name}/{A}"
    cat = FinCategory.from_data(
        objects, arrows, identity_data, lambda g, f: base.compose(g.data, f.data),
        name=name, truncated=base.truncated, colimits=lambda c: SliceColimits(c, base),
        object_labels={f: base.source(f) for f in objects})
    inherit = _inherit(E)
    return _structure(cat, lambda m: inherit(cat.data(m)), E.zero_map(A), name)


def coslice_cof_structure(E: WaldhausenStructure, A: int) -> WaldhausenStructure:
    """The co-slice under A restricted to cofibrations A >-> X; initial object id_A"""
    base = E.category
    objects = _ordered_morphisms(base, E.cof.out_of(A))
    arrows = []
    for f in objects:
        for g in objects:
            for k in base.hom(base.target(f), base.target(g)):
                if base.compose(k, f) == g:
                    arrows.append((f, g, k))
    identity_data = {f: base.identity(base.target(f)) for f in objects}
    name = f"{A}/{E.name or base.name}"
    cat = FinCategory.from_data(
        objects, arrows, identity_data, lambda g, f: base.compose(g.data, f.data),
        name=name, truncated=base.truncated, colimits=lambda c: CosliceColimits(c, base),
        object_labels={f: base.target(f) for f in objects})
    inherit = _inherit(E)
    initial = base.identity(A)
    return _structure(cat, lambda m: inherit(cat.data(m)), initial if cat.has_object(initial) else None, name)


def product_structure(structures: List[WaldhausenStructure], name: str = "") -> WaldhausenStructure:
    """Componentwise structure on the product of the underlying categories"""
    cat = fincat.product_category([S.category for S in structures],
                                  name=name or " x ".join(S.name for S in structures) or "point")

    def decide(m):
        comps = cat.data(m)
        cofs = [S.is_cofibration(x) for S, x in zip(structures, comps)]
        wes = [S.is_weak_equivalence(x) for S, x in zip(structures, comps)]
        if None in cofs or None in wes:
            return None
        return (all(cofs), all(wes))

    initial = None
    if all(S.initial is not None for S in structures):
        wanted = tuple(S.initial for S in structures)
        initial = next((o for o in cat.objects if cat.label(o) == wanted), None)
    return _structure(cat, decide, initial, cat.name)
