from abc import ABC, abstractmethod
from typing import Dict, Optional, Sequence, Tuple
import logging

from .fincat import FinCategory, PushoutResult, CoproductResult, find_initial
from . import fincat

logger = logging.getLogger(__name__)


class ColimitProvider(ABC):
    """Abstract base class for colimit constructions on a category"""

    def __init__(self, category: FinCategory):
        self.category = category

    @abstractmethod
    def pushout(self, f: int, g: int) -> Optional[PushoutResult]:
        """Pushout of the span (f: A -> B, g: A -> C), or None beyond the bound"""
        pass

    @abstractmethod
    def coproduct(self, objs: Sequence[int]) -> Optional[CoproductResult]:
        """Coproduct of a list of objects, or None beyond the bound"""
        pass

    def initial(self) -> Optional[int]:
        return find_initial(self.category)

    def from_initial(self, obj: int) -> Optional[int]:
        """The unique morphism 0 -> obj"""
        initial = self.initial()
        if initial is None:
            return None
        homs = self.category.hom(initial, obj)
        return homs[0] if len(homs) == 1 else None

    def copair(self, cop: CoproductResult, maps: Sequence[int], target: int) -> Optional[int]:
        """The map out of a coproduct restricting to ``maps`` on the summands"""
        cat = self.category
        for h in cat.hom(cop.apex, target):
            if all(cat.compose(h, inj) == m for inj, m in zip(cop.injections, maps)):
                return h
        return None

    def induced(self, po: PushoutResult, x: int, y: int) -> Optional[int]:
        """The map h out of the pushout apex with h∘leg_from_B = x and h∘leg_from_C = y"""
        cat = self.category
        for h in cat.hom(po.apex, cat.target(x)):
            if cat.compose(h, po.leg_from_B) == x and cat.compose(h, po.leg_from_C) == y:
                return h
        return None


class EnumerationColimits(ColimitProvider):
    """Colimits found by the universality oracle, cached per span"""

    def __init__(self, category: FinCategory):
        super().__init__(category)
        self._pushouts: Dict[Tuple[int, int], Optional[PushoutResult]] = {}
        self._coproducts: Dict[Tuple[int, ...], Optional[CoproductResult]] = {}

    def pushout(self, f: int, g: int) -> Optional[PushoutResult]:
        key = (f, g)
        if key not in self._pushouts:
            self._pushouts[key] = fincat.pushout(self.category, f, g)
        return self._pushouts[key]

    def coproduct(self, objs: Sequence[int]) -> Optional[CoproductResult]:
        key = tuple(objs)
        if key not in self._coproducts:
            self._coproducts[key] = fincat.coproduct(self.category, key)
        return self._coproducts[key]
