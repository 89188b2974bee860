"""
Grothendieck opfibrations p: T -> B with explicit cleavages, the
factorization f = f_▷ ∘ λ, reindexing functors, and the Waldhausen structure
on the total category glued from a base structure and structures on fibers.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from ..core.exceptions import CleavageError, TruncationOverflow
from . import fincat
from .classes import MorphismClass
from .colimits import ColimitProvider
from .fincat import CoproductResult, FinCategory, Functor, PushoutResult, ValidationReport, is_iso
from .waldhausen import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    AxiomReport,
    WaldhausenStructure,
    comor_structure,
    is_exact,
    mor_structure,
    verify_waldhausen,
)

logger = logging.getLogger(__name__)

Lift = Tuple[int, int]
FiberBuilder = Callable[[FinCategory, int], WaldhausenStructure]


@dataclass
class OpfibrationData:
    """An opfibration with a chosen cleavage ``(u, X) -> (u_!(X), λ_{u,X})``.

    ``fiber_builder`` turns the fiber category over A into its Waldhausen
    structure. Cleavage entries whose lift lies beyond a truncation are absent.
    """
    p: Functor
    cleavage: Dict[Tuple[int, int], Lift]
    fiber_builder: Optional[FiberBuilder] = None
    name: str = ""
    _fibers: Dict[int, FinCategory] = field(default_factory=dict, init=False, repr=False)
    _fiber_structures: Dict[int, WaldhausenStructure] = field(default_factory=dict, init=False, repr=False)

    @property
    def total(self) -> FinCategory:
        return self.p.source

    @property
    def base(self) -> FinCategory:
        return self.p.target

    def lift(self, u: int, X: int) -> Lift:
        try:
            return self.cleavage[(u, X)]
        except KeyError:
            raise CleavageError(f"no cleavage entry for ({u}, {X})") from None

    def has_lift(self, u: int, X: int) -> bool:
        return (u, X) in self.cleavage

    def is_vertical(self, m: int) -> bool:
        return self.base.is_identity(self.p(m))

    def fiber(self, A: int) -> FinCategory:
        if A not in self._fibers:
            self._fibers[A] = fiber(self.p, A)
        return self._fibers[A]

    def fiber_structure(self, A: int) -> WaldhausenStructure:
        if A not in self._fiber_structures:
            if self.fiber_builder is None:
                raise CleavageError(f"opfibration {self.name!r} has no fiber structures")
            self._fiber_structures[A] = self.fiber_builder(self.fiber(A), A)
        return self._fiber_structures[A]

    def with_cleavage(self, cleavage: Mapping[Tuple[int, int], Lift], name: str = "") -> 'OpfibrationData':
        return OpfibrationData(self.p, dict(cleavage), self.fiber_builder, name or self.name)


@dataclass(frozen=True)
class FactoredMorphism:
    morphism: int
    u: int
    lifting: int
    fiber_part: int


def is_cocartesian(p: Functor, f: int) -> bool:
    """Every g with p(g) = v∘p(f) factors as h∘f for a unique h above v"""
    T, B = p.source, p.target
    X, Y = T.source(f), T.target(f)
    u = p(f)
    for Z in T.objects:
        by_image: Dict[int, List[int]] = {}
        for h in T.hom(Y, Z):
            by_image.setdefault(p(h), []).append(h)
        vs = B.hom(B.target(u), p.map_object(Z))
        for g in T.hom(X, Z):
            pg = p(g)
            for v in vs:
                if B.compose(v, u) != pg:
                    continue
                matches = sum(1 for h in by_image.get(v, ()) if T.compose(h, f) == g)
                if matches != 1:
                    logger.debug("%s is not cocartesian: %d factorizations of %s above %s", f, matches, g, v)
                    return False
    return True


class FiberColimits(ColimitProvider):
    """Colimits in a fiber: the total category's colimits when their legs are vertical"""

    def __init__(self, category: FinCategory, total: FinCategory, p: Functor):
        super().__init__(category)
        self.total = total
        self.p = p

    def _vertical(self, m: Optional[int]) -> bool:
        return m is not None and self.category.has_morphism(m)

    def pushout(self, f: int, g: int) -> Optional[PushoutResult]:
        po = self.total.colimits.pushout(f, g)
        if po is not None and self._vertical(po.leg_from_B) and self._vertical(po.leg_from_C):
            return po
        return fincat.pushout(self.category, f, g)

    def coproduct(self, objs) -> Optional[CoproductResult]:
        return fincat.coproduct(self.category, objs)


def fiber(p: Functor, A: int) -> FinCategory:
    """Objects above A and morphisms above id_A, keeping the ids of T"""
    T, B = p.source, p.target
    identity = B.identity(A)
    objects = [X for X in T.objects if p.map_object(X) == A]
    morphisms = [m for m in T.morphism_ids if p(m) == identity]
    return T.subcategory(objects, morphisms, name=f"{T.name}_{A}",
                         colimits=lambda c: FiberColimits(c, T, p))


def factor(op: OpfibrationData, f: int) -> FactoredMorphism:
    """Split f as f_▷ ∘ λ_{p(f), source(f)} with f_▷ vertical"""
    T = op.total
    u = op.p(f)
    _, lam = op.lift(u, T.source(f))
    candidates = [h for h in T.hom(T.target(lam), T.target(f))
                  if op.is_vertical(h) and T.compose(h, lam) == f]
    if len(candidates) != 1:
        raise CleavageError(
            f"morphism {f} has {len(candidates)} vertical factorizations through lift {lam}")
    return FactoredMorphism(f, u, lam, candidates[0])


def reindex(op: OpfibrationData, u: int) -> Functor:
    """u_!: T_A -> T_B, partial where the cleavage has no entry"""
    B, T = op.base, op.total
    A, A2 = B.source(u), B.target(u)
    source, target = op.fiber(A), op.fiber(A2)
    object_map = {X: op.cleavage[(u, X)][0] for X in source.objects if op.has_lift(u, X)}
    morphism_map = {}
    for k in source.morphism_ids:
        X, X2 = source.source(k), source.target(k)
        if X not in object_map or X2 not in object_map:
            continue
        _, lam = op.cleavage[(u, X2)]
        morphism_map[k] = factor(op, T.compose(lam, k)).fiber_part
    return Functor(source, target, object_map, morphism_map, name=f"{u}_!")


def validate_opfibration(op: OpfibrationData) -> ValidationReport:
    """Every cleavage entry sits above u, starts at X and is cocartesian"""
    report = ValidationReport()
    T, B, p = op.total, op.base, op.p
    for (u, X), (Y, lam) in sorted(op.cleavage.items()):
        if p.map_object(X) != B.source(u):
            report.violations.append(f"entry ({u}, {X}): {X} is not above the source of {u}")
            continue
        if not T.has_morphism(lam) or T.source(lam) != X or T.target(lam) != Y:
            report.violations.append(f"entry ({u}, {X}): {lam} is not a morphism {X} -> {Y}")
            continue
        if p(lam) != u:
            report.violations.append(f"entry ({u}, {X}): {lam} lies above {p(lam)}, not {u}")
            continue
        if not is_cocartesian(p, lam):
            report.violations.append(f"entry ({u}, {X}): {lam} is not cocartesian")
    for message in report.violations:
        logger.warning("cleavage of %s: %s", op.name, message)
    return report


def cleavage_coherence(op: OpfibrationData, u: int, v: int, X: int) -> Optional[int]:
    """The vertical isomorphism θ with θ∘λ_{v∘u,X} = λ_{v,u_!X}∘λ_{u,X}, or None"""
    T, B = op.total, op.base
    vu = B.compose(v, u)
    if not (op.has_lift(u, X) and op.has_lift(vu, X)):
        return None
    Y, lam_u = op.cleavage[(u, X)]
    if not op.has_lift(v, Y):
        return None
    Z, lam_v = op.cleavage[(v, Y)]
    W, lam_vu = op.cleavage[(vu, X)]
    composite = T.compose(lam_v, lam_u)
    for theta in T.hom(W, Z):
        if op.is_vertical(theta) and T.compose(theta, lam_vu) == composite:
            return theta if is_iso(T, theta) else None
    return None


CLEAVAGE_RULES = ("first", "last", "parity")


def reselect_cleavage(op: OpfibrationData, rule: str = "last") -> OpfibrationData:
    """Another valid cleavage: each lift post-composed with a chosen vertical isomorphism"""
    if rule not in CLEAVAGE_RULES:
        raise ValueError(f"unknown cleavage rule {rule!r}; expected one of {CLEAVAGE_RULES}")
    T = op.total
    cleavage = {}
    for (u, X), (Y, lam) in op.cleavage.items():
        isos = sorted(h for h in T.out_of(Y) if op.is_vertical(h) and is_iso(T, h))
        if rule == "first":
            theta = isos[0]
        elif rule == "last":
            theta = isos[-1]
        else:
            theta = isos[-1] if (u + X) % 2 else isos[0]
        cleavage[(u, X)] = (T.target(theta), T.compose(theta, lam))
    return op.with_cleavage(cleavage, name=f"{op.name}[{rule}]")


def override_cleavage(op: OpfibrationData, entries: Mapping[Tuple[int, int], Lift]) -> OpfibrationData:
    cleavage = dict(op.cleavage)
    cleavage.update(entries)
    return op.with_cleavage(cleavage, name=f"{op.name}*")


@dataclass
class OpfibReport:
    fiber_reports: Dict[int, AxiomReport]
    exactness: Dict[int, ValidationReport]
    cleavage: ValidationReport

    @property
    def status(self) -> str:
        if not self.cleavage.valid or any(not r.valid for r in self.exactness.values()):
            return FAIL
        statuses = {r.status for r in self.fiber_reports.values()}
        if FAIL in statuses:
            return FAIL
        return INCONCLUSIVE if INCONCLUSIVE in statuses else PASS

    @property
    def exit_code(self) -> int:
        return {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}[self.status]

    def failures(self) -> List[Dict[str, Any]]:
        found = []
        for A, report in self.fiber_reports.items():
            for result in report.failures():
                found.append({'fiber': A, 'axiom': result.name, 'witness': result.witnesses[:1]})
        for u, report in self.exactness.items():
            for violation in report.violations:
                found.append({'reindexing': u, 'violation': violation})
        for violation in self.cleavage.violations:
            found.append({'cleavage': violation})
        return found

    def to_records(self) -> List[Dict[str, Any]]:
        records = []
        for A, report in self.fiber_reports.items():
            for record in report.to_records():
                records.append({'fiber': A, **record})
        for u, report in self.exactness.items():
            records.append({'reindexing': u, 'exact': report.valid, 'violations': report.violations})
        records.append({'cleavage_valid': self.cleavage.valid, 'violations': self.cleavage.violations})
        return records


def check_waldhausen_opfib(op: OpfibrationData, budget: Optional[int] = None,
                          fiber_structures: Optional[Mapping[int, WaldhausenStructure]] = None,
                          ) -> OpfibReport:
    """Verify every fiber and the exactness of every reindexing functor"""
    structures = dict(fiber_structures or {})
    for A in op.base.objects:
        structures.setdefault(A, op.fiber_structure(A))
    fiber_reports = {A: verify_waldhausen(structures[A], budget) for A in op.base.objects}
    exactness = {}
    for u in op.base.morphism_ids:
        B = op.base
        exactness[u] = is_exact(reindex(op, u), structures[B.source(u)], structures[B.target(u)], budget)
    report = OpfibReport(fiber_reports, exactness, validate_opfibration(op))
    logger.info("opfibration %s: %s", op.name, report.status)
    return report


class TotalColimits(ColimitProvider):
    """Pushouts in the total category: base pushout, then a pushout in the fiber over its apex"""

    def __init__(self, category: FinCategory, op: OpfibrationData, base: WaldhausenStructure):
        super().__init__(category)
        self.op = op
        self.base = base

    def _vertical_iso(self, source: int, target: int, first: int, second: int) -> Optional[int]:
        T = self.op.total
        for h in T.hom(source, target):
            if self.op.is_vertical(h) and T.compose(h, first) == second:
                return h
        return None

    def pushout(self, f: int, g: int) -> Optional[PushoutResult]:
        op, T = self.op, self.op.total
        X, Y, Z = T.source(f), T.target(f), T.target(g)
        u, v = op.p(f), op.p(g)
        base_po = self.base.category.colimits.pushout(u, v)
        if base_po is None:
            return None
        u_bar, v_bar = base_po.leg_from_B, base_po.leg_from_C
        needed = [(u, X), (v, X), (u_bar, Y), (v_bar, Z)]
        if not all(op.has_lift(*key) for key in needed):
            return None
        fact_f, fact_g = factor(op, f), factor(op, g)
        uX, vX = T.target(fact_f.lifting), T.target(fact_g.lifting)
        if not (op.has_lift(u_bar, uX) and op.has_lift(v_bar, vX)):
            return None
        uuX, lam_uuX = op.cleavage[(u_bar, uX)]
        vvX, lam_vvX = op.cleavage[(v_bar, vX)]
        _, lam_Y = op.cleavage[(u_bar, Y)]
        _, lam_Z = op.cleavage[(v_bar, Z)]
        theta = self._vertical_iso(uuX, vvX, T.compose(lam_uuX, fact_f.lifting),
                                   T.compose(lam_vvX, fact_g.lifting))
        if theta is None:
            logger.debug("no comparison isomorphism for span (%s, %s)", f, g)
            return None
        s1 = factor(op, T.compose(lam_Y, fact_f.fiber_part)).fiber_part
        s2 = T.compose(factor(op, T.compose(lam_Z, fact_g.fiber_part)).fiber_part, theta)
        fiber_po = op.fiber_structure(base_po.apex).category.colimits.pushout(s1, s2)
        if fiber_po is None:
            return None
        return PushoutResult(fiber_po.apex,
                             T.compose(fiber_po.leg_from_B, lam_Y),
                             T.compose(fiber_po.leg_from_C, lam_Z),
                             (f, g),
                             {'base_apex': base_po.apex, 'comparison': theta})

    def coproduct(self, objs) -> Optional[CoproductResult]:
        return fincat.coproduct(self.category, objs)


def total_structure(op: OpfibrationData, base: WaldhausenStructure) -> WaldhausenStructure:
    """Cofibrations lie above cofibrations with a cofibration as fiber part; same for W"""
    B = base.category
    if not B.truncated:
        for u in base.cof:
            for v in B.out_of(B.source(u)):
                if B.colimits.pushout(u, v) is None:
                    raise TruncationOverflow(f"base {base.name!r} has no pushout of ({u}, {v})")
    T = op.total
    view = T.subcategory(T.objects, T.morphism_ids, name=f"total({op.name or T.name})",
                         colimits=lambda c: TotalColimits(c, op, base))
    cof, we, unknown = [], [], []
    fiber_parts: Dict[int, int] = {}
    for f in T.morphism_ids:
        u = op.p(f)
        if not op.has_lift(u, T.source(f)):
            unknown.append(f)
            continue
        part = factor(op, f).fiber_part
        fiber_parts[f] = part
        S = op.fiber_structure(op.p.map_object(T.target(f)))
        c = (base.is_cofibration(u), S.is_cofibration(part))
        w = (base.is_weak_equivalence(u), S.is_weak_equivalence(part))
        if None in c or None in w:
            unknown.append(f)
            continue
        if all(c):
            cof.append(f)
        if all(w):
            we.append(f)
    initial = op.fiber_structure(base.initial).initial if base.initial is not None else None
    logger.info("total structure on %s: %d cofibrations, %d weak equivalences, %d undetermined",
                view.name, len(cof), len(we), len(unknown))
    return WaldhausenStructure(view, MorphismClass(view, cof, "C"), MorphismClass(view, we, "W"),
                               initial, name=view.name, undetermined=frozenset(unknown),
                               extras={'fiber_parts': fiber_parts})


def restrict_structure(S: WaldhausenStructure, sub: FinCategory, initial: Optional[int],
                       name: str = "") -> WaldhausenStructure:
    """The classes of S cut down to a subcategory sharing its ids"""
    members = set(sub.morphism_ids)
    return replace(
        S, category=sub,
        cof=MorphismClass(sub, (m for m in S.cof if m in members), "C"),
        we=MorphismClass(sub, (m for m in S.we if m in members), "W"),
        initial=initial, name=name or sub.name,
        undetermined=frozenset(m for m in S.undetermined if m in members),
        extras={})


def codomain_opfib(E: WaldhausenStructure) -> OpfibrationData:
    """cod: Mor(E) -> E with u_!(f) = u∘f and λ = (id, u)"""
    base = E.category
    mor = mor_structure(E)
    T = mor.category
    p = Functor(T, base, {f: base.target(f) for f in T.objects},
                {m: T.data(m)[1] for m in T.morphism_ids}, name="cod")
    cleavage = {}
    for u in base.morphism_ids:
        for f in base.into(base.source(u)):
            uf = base.compose(u, f)
            lam = T.lookup(f, uf, (base.identity(base.source(f)), u))
            cleavage[(u, f)] = (uf, lam)

    def builder(sub: FinCategory, A: int) -> WaldhausenStructure:
        return restrict_structure(mor, sub, E.zero_map(A))

    return OpfibrationData(p, cleavage, builder, name=f"cod({E.name or base.name})")


def domain_opfib(E: WaldhausenStructure) -> OpfibrationData:
    """dom: coMor(E) -> E with u_!(f) the pushout of f along u"""
    base = E.category
    comor = comor_structure(E)
    T = comor.category
    p = Functor(T, base, {f: base.source(f) for f in T.objects},
                {m: T.data(m)[0] for m in T.morphism_ids}, name="dom")
    cleavage = {}
    for u in base.morphism_ids:
        for f in T.objects:
            if base.source(f) != base.source(u):
                continue
            po = base.colimits.pushout(f, u)
            if po is None or not T.has_object(po.leg_from_C):
                continue
            lam = T.lookup(f, po.leg_from_C, (u, po.leg_from_B))
            cleavage[(u, f)] = (po.leg_from_C, lam)

    def builder(sub: FinCategory, A: int) -> WaldhausenStructure:
        return restrict_structure(comor, sub, base.identity(A))

    return OpfibrationData(p, cleavage, builder, name=f"dom({E.name or base.name})")
