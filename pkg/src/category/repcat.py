"""
Representations of a left rooted quiver in the cofibrations of a Waldhausen
category E.

Rep(Q, coE) is materialized on representations whose arrow maps and
latching maps φ_i: L_i(X) -> X_i are cofibrations and whose vertex objects
(latching objects included) stay within the component bound. A morphism f is
a cofibration (weak equivalence) iff every ρ_i: X_i ⊔_{L_i(X)} L_i(Y) -> Y_i
is one.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..core.exceptions import NaturalityError, RepresentationError, TruncationOverflow
from .classes import MorphismClass
from .colimits import ColimitProvider
from .fincat import CoproductResult, FinCategory, Functor, PushoutResult, validate_functor
from .opfib import (
    OpfibrationData,
    OpfibReport,
    check_waldhausen_opfib,
    total_structure,
)
from .quiver import Arrow, Quiver, new_vertices, require_left_rooted, rooted_sequence, subquiver
from .waldhausen import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    AxiomReport,
    WaldhausenStructure,
    coslice_cof_structure,
    product_structure,
    verify_waldhausen,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Representation:
    """Vertex objects and arrow maps, aligned with the quiver's vertex and arrow order"""
    quiver: Quiver
    objects: Tuple[int, ...]
    arrows: Tuple[int, ...]

    @property
    def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return (self.objects, self.arrows)

    def at(self, vertex: int) -> int:
        return self.objects[self.quiver.vertices.index(vertex)]

    def along(self, arrow_id: int) -> int:
        for a, m in zip(self.quiver.arrows, self.arrows):
            if a.id == arrow_id:
                return m
        raise RepresentationError(f"no arrow {arrow_id} in quiver {self.quiver.name!r}")

    def restrict(self, sub: Quiver) -> 'Representation':
        return Representation(sub, tuple(self.at(v) for v in sub.vertices),
                              tuple(self.along(a.id) for a in sub.arrows))


@dataclass(frozen=True)
class RepMorphism:
    source: Representation
    target: Representation
    components: Tuple[int, ...]

    def component(self, vertex: int) -> int:
        return self.components[self.source.quiver.vertices.index(vertex)]


@dataclass(frozen=True)
class LatchingData:
    vertex: int
    coproduct: CoproductResult
    phi: int
    arrows: Tuple[int, ...]

    @property
    def obj(self) -> int:
        return self.coproduct.apex

    @property
    def injections(self) -> Tuple[int, ...]:
        return self.coproduct.injections


@dataclass(frozen=True)
class RhoData:
    vertex: int
    pushout: PushoutResult
    rho: int
    latching_map: int


@dataclass(frozen=True)
class Classification:
    is_cofibration: Optional[bool]
    is_weak_equivalence: Optional[bool]

    @property
    def determined(self) -> bool:
        return self.is_cofibration is not None


def _provider(E: WaldhausenStructure, colimits: Optional[ColimitProvider]) -> ColimitProvider:
    return colimits if colimits is not None else E.category.colimits


def _latching_coproduct(provider: ColimitProvider, X: Representation, arrows: Sequence[Arrow]) -> CoproductResult:
    cop = provider.coproduct([X.at(a.source) for a in arrows])
    if cop is None:
        raise TruncationOverflow(f"latching coproduct over arrows {[a.id for a in arrows]} is beyond the bound")
    return cop


def _latching_map(provider: ColimitProvider, source: CoproductResult, target: CoproductResult,
                  components: Sequence[int]) -> int:
    cat = provider.category
    maps = [cat.compose(inj, c) for inj, c in zip(target.injections, components)]
    return provider.copair(source, maps, target.apex)


def latching(E: WaldhausenStructure, X: Representation, i: int,
             colimits: Optional[ColimitProvider] = None) -> LatchingData:
    """L_i(X) = ⊕_{α: s -> i} X_s with φ_i^X ∘ ι_α = X_α, summands ordered by arrow id"""
    provider = _provider(E, colimits)
    arrows = X.quiver.incoming(i)
    cop = _latching_coproduct(provider, X, arrows)
    phi = provider.copair(cop, [X.along(a.id) for a in arrows], X.at(i))
    if phi is None:
        raise TruncationOverflow(f"no latching map at vertex {i}")
    return LatchingData(i, cop, phi, tuple(a.id for a in arrows))


def latching_map(E: WaldhausenStructure, f: RepMorphism, i: int,
                 colimits: Optional[ColimitProvider] = None) -> int:
    """L_i(f): L_i(X) -> L_i(Y)"""
    provider = _provider(E, colimits)
    arrows = f.source.quiver.incoming(i)
    return _latching_map(provider, _latching_coproduct(provider, f.source, arrows),
                         _latching_coproduct(provider, f.target, arrows),
                         [f.component(a.source) for a in arrows])


LatchingLookup = Callable[[Representation, int], LatchingData]


def rho(E: WaldhausenStructure, f: RepMorphism, i: int,
        colimits: Optional[ColimitProvider] = None,
        latch: Optional[LatchingLookup] = None) -> Optional[RhoData]:
    """ρ_i out of the pushout of (φ_i^X, L_i(f)); None when the pushout is beyond the bound.

    ``latch`` supplies cached latching data, as RepCategory.latching does.
    """
    provider = _provider(E, colimits)
    if latch is None:
        def latch(X: Representation, v: int) -> LatchingData:
            return latching(E, X, v, provider)
    lx = latch(f.source, i)
    ly = latch(f.target, i)
    lf = _latching_map(provider, lx.coproduct, ly.coproduct,
                       [f.component(a.source) for a in f.source.quiver.incoming(i)])
    po = provider.pushout(lx.phi, lf)
    if po is None:
        return None
    r = provider.induced(po, f.component(i), ly.phi)
    if r is None:
        return None
    return RhoData(i, po, r, lf)


def classify(E: WaldhausenStructure, f: RepMorphism,
             colimits: Optional[ColimitProvider] = None,
             latch: Optional[LatchingLookup] = None) -> Classification:
    cof, we = True, True
    for i in f.source.quiver.vertices:
        data = rho(E, f, i, colimits, latch)
        if data is None:
            return Classification(None, None)
        c, w = E.is_cofibration(data.rho), E.is_weak_equivalence(data.rho)
        if c is None or w is None:
            return Classification(None, None)
        cof, we = cof and c, we and w
    return Classification(cof, we)


def check_representation(E: WaldhausenStructure, X: Representation) -> None:
    """Raise RepresentationError unless every arrow map and latching map is a cofibration"""
    cat = E.category
    for a, m in zip(X.quiver.arrows, X.arrows):
        if cat.source(m) != X.at(a.source) or cat.target(m) != X.at(a.target):
            raise RepresentationError(f"arrow {a.id} is sent to a map with the wrong endpoints")
        if not E.is_cofibration(m):
            raise RepresentationError(f"arrow {a.id} is sent to {m}, which is not a cofibration")
    for i in X.quiver.vertices:
        phi = latching(E, X, i).phi
        if not E.is_cofibration(phi):
            raise RepresentationError(f"latching map at vertex {i} is not a cofibration")


def check_naturality(E: WaldhausenStructure, f: RepMorphism) -> None:
    cat = E.category
    for v in f.source.quiver.vertices:
        c = f.component(v)
        if cat.source(c) != f.source.at(v) or cat.target(c) != f.target.at(v):
            raise RepresentationError(f"component at vertex {v} has the wrong endpoints")
    for a in f.source.quiver.arrows:
        left = cat.compose(f.component(a.target), f.source.along(a.id))
        right = cat.compose(f.target.along(a.id), f.component(a.source))
        if left != right:
            raise NaturalityError(a.id)


def rep_from_family(E: WaldhausenStructure, A: Representation, family: Mapping[int, int],
                    quiver: Quiver) -> Representation:
    """Extend A from its quiver to ``quiver`` by X_β = φ_{t(β)} ∘ ι_β on the new vertices"""
    cat = E.category
    provider = E.category.colimits
    added = [v for v in quiver.vertices if v not in A.quiver.vertices]
    if sorted(family) != sorted(added):
        raise RepresentationError(f"family is indexed by {sorted(family)}, new vertices are {sorted(added)}")
    objects = {v: A.at(v) for v in A.quiver.vertices}
    arrows = {a.id: A.along(a.id) for a in A.quiver.arrows}
    for i in added:
        phi = family[i]
        if not E.is_cofibration(phi):
            raise RepresentationError(f"family map {phi} at vertex {i} is not a cofibration")
        incoming = quiver.incoming(i)
        if any(a.source not in objects for a in incoming):
            raise RepresentationError(f"vertex {i} has an incoming arrow from outside the old stage")
        cop = _latching_coproduct(provider, A, incoming)
        if cat.source(phi) != cop.apex:
            raise RepresentationError(f"family map at vertex {i} does not start at the latching object")
        objects[i] = cat.target(phi)
        for a, inj in zip(incoming, cop.injections):
            arrows[a.id] = cat.compose(phi, inj)
    return Representation(quiver, tuple(objects[v] for v in quiver.vertices),
                          tuple(arrows[a.id] for a in quiver.arrows))


def extract_family(E: WaldhausenStructure, X: Representation, mu: int) -> Dict[int, int]:
    """{φ_i^X} over the vertices entering at stage μ+1"""
    return {i: latching(E, X, i).phi for i in new_vertices(X.quiver, mu)}


def _reedy_cofibrant(E: WaldhausenStructure, X: Representation, bound: Optional[int]) -> bool:
    provider = E.category.colimits
    for i in X.quiver.vertices:
        arrows = X.quiver.incoming(i)
        cop = provider.coproduct([X.at(a.source) for a in arrows])
        if cop is None or (bound is not None and cop.apex > bound):
            return False
        phi = provider.copair(cop, [X.along(a.id) for a in arrows], X.at(i))
        if phi is None or not E.is_cofibration(phi):
            return False
    return True


def materialize_representations(Q: Quiver, E: WaldhausenStructure,
                                bound: Optional[int] = None) -> List[Representation]:
    """All representations in coE with vertex objects <= bound whose latching maps are cofibrations"""
    objects = [o for o in E.category.objects if bound is None or o <= bound]
    found = []
    for assignment in product(objects, repeat=len(Q.vertices)):
        at = dict(zip(Q.vertices, assignment))
        choices = [E.cof.hom(at[a.source], at[a.target]) for a in Q.arrows]
        for maps in product(*choices):
            X = Representation(Q, assignment, maps)
            if _reedy_cofibrant(E, X, bound):
                found.append(X)
    return found


class RepColimits(ColimitProvider):
    """Vertexwise colimits, kept when the result is a materialized representation"""

    def __init__(self, category: FinCategory, reps: 'RepCategory'):
        super().__init__(category)
        self.reps = reps

    def _arrow_maps(self, build) -> Optional[Tuple[int, ...]]:
        maps = []
        for a in self.reps.quiver.arrows:
            m = build(a)
            if m is None:
                return None
            maps.append(m)
        return tuple(maps)

    def pushout(self, f: int, g: int) -> Optional[PushoutResult]:
        reps, cat = self.reps, self.category
        base = reps.E.category
        provider = base.colimits
        F, G = reps.morphism(f), reps.morphism(g)
        pos = {}
        for v in reps.quiver.vertices:
            po = provider.pushout(F.component(v), G.component(v))
            if po is None:
                return None
            pos[v] = po

        def arrow_map(a):
            top = pos[a.target]
            x = base.compose(top.leg_from_B, F.target.along(a.id))
            y = base.compose(top.leg_from_C, G.target.along(a.id))
            return provider.induced(pos[a.source], x, y)

        arrows = self._arrow_maps(arrow_map)
        if arrows is None:
            return None
        vertices = reps.quiver.vertices
        apex = reps.object_id(Representation(reps.quiver, tuple(pos[v].apex for v in vertices), arrows))
        if apex is None:
            return None
        leg_b = cat.lookup(cat.target(f), apex, tuple(pos[v].leg_from_B for v in vertices))
        leg_c = cat.lookup(cat.target(g), apex, tuple(pos[v].leg_from_C for v in vertices))
        if leg_b is None or leg_c is None:
            return None
        return PushoutResult(apex, leg_b, leg_c, (f, g))

    def coproduct(self, objs) -> Optional[CoproductResult]:
        reps, cat = self.reps, self.category
        base = reps.E.category
        provider = base.colimits
        objs = tuple(objs)
        summands = [reps.representation(o) for o in objs]
        cops = {}
        for v in reps.quiver.vertices:
            cop = provider.coproduct([X.at(v) for X in summands])
            if cop is None:
                return None
            cops[v] = cop

        def arrow_map(a):
            source, target = cops[a.source], cops[a.target]
            maps = [base.compose(inj, X.along(a.id)) for inj, X in zip(target.injections, summands)]
            return provider.copair(source, maps, target.apex)

        arrows = self._arrow_maps(arrow_map)
        if arrows is None:
            return None
        vertices = reps.quiver.vertices
        apex = reps.object_id(Representation(reps.quiver, tuple(cops[v].apex for v in vertices), arrows))
        if apex is None:
            return None
        injections = tuple(cat.lookup(o, apex, tuple(cops[v].injections[k] for v in vertices))
                           for k, o in enumerate(objs))
        if None in injections:
            return None
        return CoproductResult(apex, injections, objs)


class RepCategory:
    """Rep(Q, coE) materialized within a component bound"""

    def __init__(self, Q: Quiver, E: WaldhausenStructure, bound: Optional[int] = None, name: str = ""):
        self.quiver = Q
        self.E = E
        self.bound = bound
        self.name = name or f"Rep({Q.name or 'Q'}, co{E.name or E.category.name})"
        self.representations = materialize_representations(Q, E, bound)
        self._ids = {X.key: k for k, X in enumerate(self.representations)}
        self._latching: Dict[Tuple[Any, int], LatchingData] = {}
        self._structure: Optional[WaldhausenStructure] = None
        self.category = self._materialize()

    def _natural_transformations(self, X: Representation, Y: Representation) -> Iterator[Tuple[int, ...]]:
        base = self.E.category
        vertices = self.quiver.vertices
        position = {v: k for k, v in enumerate(vertices)}
        checks: Dict[int, List[Arrow]] = {k: [] for k in range(len(vertices))}
        for a in self.quiver.arrows:
            checks[max(position[a.source], position[a.target])].append(a)
        prefix: List[int] = []

        def natural(a: Arrow) -> bool:
            fs, ft = prefix[position[a.source]], prefix[position[a.target]]
            return base.compose(ft, X.along(a.id)) == base.compose(Y.along(a.id), fs)

        def extend() -> Iterator[Tuple[int, ...]]:
            k = len(prefix)
            if k == len(vertices):
                yield tuple(prefix)
                return
            v = vertices[k]
            for c in base.hom(X.at(v), Y.at(v)):
                prefix.append(c)
                if all(natural(a) for a in checks[k]):
                    yield from extend()
                prefix.pop()

        return extend()

    def _materialize(self) -> FinCategory:
        base = self.E.category
        reps = self.representations
        arrows = []
        for s, X in enumerate(reps):
            for t, Y in enumerate(reps):
                for comps in self._natural_transformations(X, Y):
                    arrows.append((s, t, comps))
        identity_data = {k: tuple(base.identity(o) for o in X.objects) for k, X in enumerate(reps)}

        def composer(g, f):
            return tuple(base.compose(gi, fi) for gi, fi in zip(g.data, f.data))

        cat = FinCategory.from_data(
            list(range(len(reps))), arrows, identity_data, composer, name=self.name,
            truncated=base.truncated or self.bound is not None,
            colimits=lambda c: RepColimits(c, self),
            object_labels={k: X.key for k, X in enumerate(reps)})
        logger.info("materialized %s: %d representations, %d morphisms", self.name, len(reps), len(arrows))
        return cat

    def object_id(self, X: Representation) -> Optional[int]:
        return self._ids.get(X.key)

    def representation(self, obj: int) -> Representation:
        return self.representations[obj]

    def morphism(self, m: int) -> RepMorphism:
        cat = self.category
        return RepMorphism(self.representations[cat.source(m)], self.representations[cat.target(m)], cat.data(m))

    def morphism_id(self, f: RepMorphism) -> Optional[int]:
        s, t = self.object_id(f.source), self.object_id(f.target)
        if s is None or t is None:
            return None
        return self.category.lookup(s, t, tuple(f.components))

    def latching(self, X: Representation, i: int) -> LatchingData:
        key = (X.key, i)
        if key not in self._latching:
            self._latching[key] = latching(self.E, X, i)
        return self._latching[key]

    def zero(self) -> Optional[int]:
        E = self.E
        if E.initial is None:
            return None
        identity = E.category.identity(E.initial)
        return self.object_id(Representation(self.quiver, (E.initial,) * len(self.quiver.vertices),
                                             (identity,) * len(self.quiver.arrows)))

    def structure(self) -> WaldhausenStructure:
        """Classes of Rep(Q, coE) through ρ, with the zero representation as initial object"""
        if self._structure is None:
            cat = self.category
            cof, we, unknown = [], [], []
            for m in cat.morphism_ids:
                verdict = classify(self.E, self.morphism(m), latch=self.latching)
                if not verdict.determined:
                    unknown.append(m)
                    continue
                if verdict.is_cofibration:
                    cof.append(m)
                if verdict.is_weak_equivalence:
                    we.append(m)
            self._structure = WaldhausenStructure(
                cat, MorphismClass(cat, cof, "C"), MorphismClass(cat, we, "W"), self.zero(),
                name=self.name, undetermined=frozenset(unknown))
        return self._structure


def rep_category(Q: Quiver, E: WaldhausenStructure, bound: Optional[int] = None) -> RepCategory:
    return RepCategory(Q, E, bound)


def restriction_functor(upper: RepCategory, lower: RepCategory) -> Functor:
    """Restriction along the inclusion of the lower quiver into the upper one"""
    object_map = {}
    for k, X in enumerate(upper.representations):
        image = lower.object_id(X.restrict(lower.quiver))
        if image is None:
            raise RepresentationError(f"restriction of representation {k} is not materialized")
        object_map[k] = image
    positions = [upper.quiver.vertices.index(v) for v in lower.quiver.vertices]
    morphism_map = {}
    for m in upper.category.morphism_ids:
        comps = upper.category.data(m)
        morphism_map[m] = lower.category.lookup(
            object_map[upper.category.source(m)], object_map[upper.category.target(m)],
            tuple(comps[p] for p in positions))
    return Functor(upper.category, lower.category, object_map, morphism_map, name="restrict")


def stage_categories(Q: Quiver, mu: int, E: WaldhausenStructure, bound: Optional[int]
                      ) -> Tuple[RepCategory, RepCategory]:
    zeta = rooted_sequence(Q).zeta
    lower = RepCategory(subquiver(Q, mu), E, bound)
    upper = RepCategory(subquiver(Q, min(mu + 1, zeta)), E, bound)
    return lower, upper


def restriction_opfib(Q: Quiver, mu: int, E: WaldhausenStructure, bound: Optional[int] = None,
                      lower: Optional[RepCategory] = None, upper: Optional[RepCategory] = None,
                      ) -> OpfibrationData:
    """Restriction Rep(Q_{μ+1}, coE) -> Rep(Q_μ, coE) with the stagewise pushout cleavage.

    u_!(X) keeps u's target on the old vertices and pushes φ_i^X out along
    L_i(u) on the new ones; λ has components u_j and the pushout legs θ_i.
    """
    require_left_rooted(Q)
    if lower is None or upper is None:
        lower, upper = stage_categories(Q, mu, E, bound)
    p = restriction_functor(upper, lower)
    provider = E.category.colimits
    old = set(lower.quiver.vertices)
    added = [v for v in upper.quiver.vertices if v not in old]
    cleavage = {}
    for u in lower.category.morphism_ids:
        uu = lower.morphism(u)
        A, A2 = lower.category.source(u), lower.category.target(u)
        for X_id in upper.category.objects:
            if p.object_map[X_id] != A:
                continue
            X = upper.representation(X_id)
            family, thetas = {}, {}
            for i in added:
                arrows = upper.quiver.incoming(i)
                lat = upper.latching(X, i)
                target = provider.coproduct([uu.target.at(a.source) for a in arrows])
                if target is None:
                    break
                lu = _latching_map(provider, lat.coproduct, target, [uu.component(a.source) for a in arrows])
                po = provider.pushout(lat.phi, lu)
                if po is None:
                    break
                family[i], thetas[i] = po.leg_from_C, po.leg_from_B
            else:
                X2 = rep_from_family(E, uu.target, family, upper.quiver)
                X2_id = upper.object_id(X2)
                if X2_id is None:
                    continue
                comps = tuple(uu.component(v) if v in old else thetas[v] for v in upper.quiver.vertices)
                lam = upper.category.lookup(X_id, X2_id, comps)
                if lam is not None:
                    cleavage[(u, X_id)] = (X2_id, lam)

    def builder(fiber_cat: FinCategory, A: int) -> WaldhausenStructure:
        positions = [upper.quiver.vertices.index(i) for i in added]

        def members(test):
            return [m for m in fiber_cat.morphism_ids
                    if all(test(fiber_cat.data(m)[k]) for k in positions)]

        initial = None
        rep_A = lower.representation(A)
        try:
            family = {i: E.category.identity(_latching_coproduct(provider, rep_A, upper.quiver.incoming(i)).apex)
                      for i in added}
            initial = upper.object_id(rep_from_family(E, rep_A, family, upper.quiver))
        except TruncationOverflow:
            logger.debug("fiber over %s has no initial object within the bound", A)
        return WaldhausenStructure(
            fiber_cat, MorphismClass(fiber_cat, members(E.is_cofibration), "C"),
            MorphismClass(fiber_cat, members(E.is_weak_equivalence), "W"),
            initial, name=fiber_cat.name)

    logger.info("restriction opfibration at stage %d: %d cleavage entries", mu, len(cleavage))
    return OpfibrationData(p, cleavage, builder, name=f"restrict({upper.name} -> {lower.name})")


@dataclass
class FiberIsoReport:
    functor: Functor
    violations: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            'valid': self.valid,
            'fiber_objects': len(self.functor.source.objects),
            'fiber_morphisms': len(self.functor.source.morphism_ids),
            'product_objects': len(self.functor.target.objects),
            'product_morphisms': len(self.functor.target.morphism_ids),
            'violations': list(self.violations),
        }


def fiber_iso(Q: Quiver, mu: int, E: WaldhausenStructure, A: Representation,
              bound: Optional[int] = None, lower: Optional[RepCategory] = None,
              upper: Optional[RepCategory] = None, op: Optional[OpfibrationData] = None) -> FiberIsoReport:
    """The functor X -> {φ_i^X}, f -> {f_i} from the fiber over A to ∏ co-slices under L_i(A)"""
    if lower is None or upper is None:
        lower, upper = stage_categories(Q, mu, E, bound)
    if op is None:
        op = restriction_opfib(Q, mu, E, bound, lower, upper)
    A_id = lower.object_id(A)
    if A_id is None:
        raise RepresentationError(f"representation {A.key} is not materialized at stage {mu}")
    fiber_structure = op.fiber_structure(A_id)
    fiber_cat = fiber_structure.category
    provider = E.category.colimits
    added = [v for v in upper.quiver.vertices if v not in lower.quiver.vertices]
    positions = [upper.quiver.vertices.index(i) for i in added]
    cops = [_latching_coproduct(provider, A, upper.quiver.incoming(i)) for i in added]
    coslices = [coslice_cof_structure(E, cop.apex) for cop in cops]
    target = product_structure(coslices, name=f"prod_{mu}")
    target_cat = target.category
    by_label = {target_cat.label(o): o for o in target_cat.objects}

    object_map = {}
    violations = []
    for X_id in fiber_cat.objects:
        X = upper.representation(X_id)
        label = tuple(upper.latching(X, i).phi for i in added)
        if label not in by_label:
            violations.append(f"object {X_id} has no image")
            continue
        object_map[X_id] = by_label[label]
    morphism_map = {}
    for m in fiber_cat.morphism_ids:
        s, t = fiber_cat.source(m), fiber_cat.target(m)
        if s not in object_map or t not in object_map:
            continue
        comps = fiber_cat.data(m)
        slots = [S.category.lookup(S_src, S_tgt, comps[p]) for S, S_src, S_tgt, p in
                 zip(coslices, target_cat.label(object_map[s]), target_cat.label(object_map[t]), positions)]
        image = None if None in slots else target_cat.lookup(object_map[s], object_map[t], tuple(slots))
        if image is None:
            violations.append(f"morphism {m} has no image")
            continue
        morphism_map[m] = image
    F = Functor(fiber_cat, target_cat, object_map, morphism_map, name="R")

    if len(set(object_map.values())) != len(object_map) or len(object_map) != len(target_cat.objects):
        violations.append("object map is not a bijection")
    if len(set(morphism_map.values())) != len(morphism_map) or len(morphism_map) != len(target_cat.morphism_ids):
        violations.append("morphism map is not a bijection")
    violations.extend(validate_functor(F, partial=True).violations)
    for m, image in morphism_map.items():
        if fiber_structure.is_cofibration(m) != target.is_cofibration(image):
            violations.append(f"cofibration status of {m} is not transported")
        if fiber_structure.is_weak_equivalence(m) != target.is_weak_equivalence(image):
            violations.append(f"weak equivalence status of {m} is not transported")
    if fiber_structure.initial is not None and object_map.get(fiber_structure.initial) != target.initial:
        violations.append("initial object is not transported")
    return FiberIsoReport(F, violations)


@dataclass
class StageReplay:
    mu: int
    opfib: OpfibReport
    mismatches: List[int]

    @property
    def agrees(self) -> bool:
        return not self.mismatches

    @property
    def status(self) -> str:
        if not self.agrees:
            return FAIL
        return self.opfib.status


@dataclass
class RepWaldhausenResult:
    structure: WaldhausenStructure
    report: AxiomReport
    stages: List[StageReplay] = field(default_factory=list)

    @property
    def status(self) -> str:
        statuses = [self.report.status] + [s.status for s in self.stages]
        if FAIL in statuses:
            return FAIL
        return INCONCLUSIVE if INCONCLUSIVE in statuses else PASS

    @property
    def exit_code(self) -> int:
        return {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}[self.status]

    def to_records(self) -> List[Dict[str, Any]]:
        records = self.report.to_records()
        for stage in self.stages:
            records.append({'stage': stage.mu, 'status': stage.status,
                            'opfibration': stage.opfib.status, 'mismatches': stage.mismatches})
        return records


def _mismatches(total: WaldhausenStructure, direct: WaldhausenStructure) -> List[int]:
    differ = set()
    for key, members in direct.classification().items():
        differ |= members ^ total.classification()[key]
    return sorted(differ)


def rep_waldhausen(Q: Quiver, E: WaldhausenStructure, bound: Optional[int] = None,
                   budget: Optional[int] = None, replay: bool = True,
                   check_universality: bool = False) -> RepWaldhausenResult:
    """Materialize and verify Rep(Q, coE), then replay the stagewise induction"""
    sequence = require_left_rooted(Q)
    full = RepCategory(Q, E, bound)
    structure = full.structure()
    report = verify_waldhausen(structure, budget, check_universality)
    result = RepWaldhausenResult(structure, report)
    if not replay:
        return result
    stages = [RepCategory(subquiver(Q, mu), E, bound) for mu in range(sequence.zeta)] + [full]
    for mu in range(sequence.zeta):
        op = restriction_opfib(Q, mu, E, bound, stages[mu], stages[mu + 1])
        opfib_report = check_waldhausen_opfib(op, budget)
        total = total_structure(op, stages[mu].structure())
        mismatches = _mismatches(total, stages[mu + 1].structure())
        if mismatches:
            logger.warning("stage %d: total and direct classifications differ on %s", mu, mismatches[:5])
        result.stages.append(StageReplay(mu, opfib_report, mismatches))
    logger.info("Rep(%s) over %s: %s", Q.name, E.name, result.status)
    return result
