"""
Concrete Waldhausen categories at desk scale.

``pset:n`` is the skeleton of pointed finite sets {*, 1..k} for k <= n, with
cofibrations the injections and weak equivalences the bijections.
``vect:p:d`` is the skeleton of F_p vector spaces of dimension <= d, with
cofibrations the injective matrices and weak equivalences the invertible ones.
Both are truncations, so colimits whose apex exceeds the bound are reported
as beyond the bound.
"""

import logging
import re
from abc import ABC, abstractmethod
from functools import lru_cache
from itertools import product
from typing import Hashable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import ParseError
from .classes import MorphismClass
from .colimits import ColimitProvider
from .fincat import CoproductResult, FinCategory, Morphism, PushoutResult
from .waldhausen import WaldhausenStructure

logger = logging.getLogger(__name__)

PushoutData = Tuple[int, Hashable, Hashable]


class Backend(ABC):
    """Raw operations on morphism data shared by the materialized category"""

    kind = ""

    @property
    @abstractmethod
    def bound(self) -> int:
        pass

    @property
    def spec(self) -> str:
        return f"{self.kind}:{self.bound}"

    def objects(self) -> List[int]:
        return list(range(self.bound + 1))

    @abstractmethod
    def hom_data(self, a: int, b: int) -> Iterator[Hashable]:
        pass

    @abstractmethod
    def identity(self, a: int) -> Hashable:
        pass

    @abstractmethod
    def compose(self, g: Hashable, f: Hashable, a: int, b: int, c: int) -> Hashable:
        """Data of g∘f for f: a -> b and g: b -> c"""
        pass

    @abstractmethod
    def is_cof(self, f: Hashable, a: int, b: int) -> bool:
        pass

    @abstractmethod
    def is_we(self, f: Hashable, a: int, b: int) -> bool:
        pass

    @abstractmethod
    def encode(self, f: Hashable, a: int, b: int) -> str:
        pass

    @abstractmethod
    def decode(self, text: str, a: int, b: int, line: int = 1) -> Hashable:
        pass

    @abstractmethod
    def pushout_data(self, f: Hashable, g: Hashable, a: int, b: int, c: int) -> Optional[PushoutData]:
        pass

    @abstractmethod
    def coproduct_data(self, dims: Sequence[int]) -> Optional[Tuple[int, Tuple[Hashable, ...]]]:
        pass

    def copair_data(self, maps: Sequence[Hashable], dims: Sequence[int], target: int) -> Optional[Hashable]:
        return None

    def induced_data(self, po: PushoutData, x: Hashable, y: Hashable, b: int, c: int,
                     target: int) -> Optional[Hashable]:
        return None

    def category(self) -> FinCategory:
        objects = self.objects()
        arrows = [(a, b, data) for a in objects for b in objects for data in self.hom_data(a, b)]

        def composer(g: Morphism, f: Morphism):
            return self.compose(g.data, f.data, f.source, f.target, g.target)

        cat = FinCategory.from_data(
            objects, arrows, {a: self.identity(a) for a in objects}, composer,
            name=self.spec, truncated=True, colimits=lambda c: BackendColimits(c, self))
        logger.info("materialized %s: %d objects, %d morphisms", self.spec, len(objects), len(arrows))
        return cat

    def structure(self) -> WaldhausenStructure:
        cat = self.category()

        def classify(test):
            return lambda m: test(cat.data(m), cat.source(m), cat.target(m))

        return WaldhausenStructure(
            cat,
            MorphismClass.where(cat, classify(self.is_cof), "C"),
            MorphismClass.where(cat, classify(self.is_we), "W"),
            0,
            name=self.spec,
        )


class BackendColimits(ColimitProvider):
    """Constructive colimits computed on morphism data"""

    def __init__(self, category: FinCategory, backend: Backend):
        super().__init__(category)
        self.backend = backend

    def initial(self) -> Optional[int]:
        return 0

    def pushout(self, f: int, g: int) -> Optional[PushoutResult]:
        cat = self.category
        a, b, c = cat.source(f), cat.target(f), cat.target(g)
        if cat.source(g) != a:
            raise ValueError(f"Span legs {f} and {g} do not share a source")
        computed = self.backend.pushout_data(cat.data(f), cat.data(g), a, b, c)
        if computed is None:
            logger.debug("pushout of (%s, %s) lies beyond %s", f, g, self.backend.spec)
            return None
        apex, leg_b, leg_c = computed
        return PushoutResult(apex, cat.lookup(b, apex, leg_b), cat.lookup(c, apex, leg_c), (f, g))

    def coproduct(self, objs: Sequence[int]) -> Optional[CoproductResult]:
        objs = tuple(objs)
        computed = self.backend.coproduct_data(objs)
        if computed is None:
            logger.debug("coproduct of %s lies beyond %s", objs, self.backend.spec)
            return None
        apex, injections = computed
        ids = tuple(self.category.lookup(o, apex, inj) for o, inj in zip(objs, injections))
        return CoproductResult(apex, ids, objs)

    def copair(self, cop: CoproductResult, maps: Sequence[int], target: int) -> Optional[int]:
        cat = self.category
        data = self.backend.copair_data([cat.data(m) for m in maps], cop.summands, target)
        if data is None:
            return super().copair(cop, maps, target)
        return cat.lookup(cop.apex, target, data)

    def induced(self, po: PushoutResult, x: int, y: int) -> Optional[int]:
        cat = self.category
        computed = (po.apex, cat.data(po.leg_from_B), cat.data(po.leg_from_C))
        target = cat.target(x)
        data = self.backend.induced_data(computed, cat.data(x), cat.data(y),
                                         cat.source(x), cat.source(y), target)
        if data is None:
            return super().induced(po, x, y)
        return cat.lookup(po.apex, target, data)


def _tokens(text: str) -> Iterator[Tuple[str, int]]:
    for match in re.finditer(r"\S+", text):
        yield match.group(), match.start() + 1


class PSetBackend(Backend):
    """Pointed sets {*, 1..k}; a map is the tuple of images of 1..k, 0 for *"""

    kind = "pset"

    def __init__(self, n_max: int):
        if n_max < 0:
            raise ValueError(f"pset bound must be non-negative, got {n_max}")
        self.n_max = n_max

    @property
    def bound(self) -> int:
        return self.n_max

    def hom_data(self, a: int, b: int) -> Iterator[Tuple[int, ...]]:
        return product(range(b + 1), repeat=a)

    def identity(self, a: int) -> Tuple[int, ...]:
        return tuple(range(1, a + 1))

    def compose(self, g, f, a, b, c):
        return tuple(0 if x == 0 else g[x - 1] for x in f)

    def is_cof(self, f, a, b) -> bool:
        return 0 not in f and len(set(f)) == len(f)

    def is_we(self, f, a, b) -> bool:
        return a == b and self.is_cof(f, a, b)

    def encode(self, f, a, b) -> str:
        if not f:
            return "-"
        return " ".join(f"{x}->{y if y else '*'}" for x, y in enumerate(f, start=1))

    def decode(self, text: str, a: int, b: int, line: int = 1) -> Tuple[int, ...]:
        images = {}
        tokens = list(_tokens(text))
        if [t for t, _ in tokens] == ["-"]:
            tokens = []
        for token, column in tokens:
            parts = token.split("->")
            if len(parts) != 2:
                raise ParseError(f"expected 'x->y', got {token!r}", line, column)
            x, y = (0 if part == "*" else self._point(part, line, column) for part in parts)
            if x == 0:
                if y != 0:
                    raise ParseError("the basepoint must map to the basepoint", line, column)
                continue
            if x > a or y > b:
                raise ParseError(f"{token!r} is outside {a} -> {b}", line, column)
            if x in images:
                raise ParseError(f"point {x} is mapped twice", line, column)
            images[x] = y
        missing = [x for x in range(1, a + 1) if x not in images]
        if missing:
            raise ParseError(f"no image given for point {missing[0]}", line, 1)
        return tuple(images[x] for x in range(1, a + 1))

    @staticmethod
    def _point(part: str, line: int, column: int) -> int:
        if not part.isdigit():
            raise ParseError(f"invalid point {part!r}", line, column)
        return int(part)

    def pushout_data(self, f, g, a, b, c) -> Optional[PushoutData]:
        parent = {}

        def find(node):
            parent.setdefault(node, node)
            while parent[node] != node:
                parent[node] = parent[parent[node]]
                node = parent[node]
            return node

        def union(u, v):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[rv] = ru

        union(('B', 0), ('C', 0))
        for x in range(a):
            union(('B', f[x]), ('C', g[x]))
        base = find(('B', 0))
        numbering = {base: 0}
        nodes = [('C', y) for y in range(1, c + 1)] + [('B', y) for y in range(1, b + 1)]
        for node in nodes:
            root = find(node)
            if root not in numbering:
                numbering[root] = len(numbering)
        apex = len(numbering) - 1
        if apex > self.n_max:
            return None
        leg_b = tuple(numbering[find(('B', y))] for y in range(1, b + 1))
        leg_c = tuple(numbering[find(('C', y))] for y in range(1, c + 1))
        return apex, leg_b, leg_c

    def coproduct_data(self, dims):
        apex = sum(dims)
        if apex > self.n_max:
            return None
        injections, offset = [], 0
        for k in dims:
            injections.append(tuple(range(offset + 1, offset + k + 1)))
            offset += k
        return apex, tuple(injections)

    def copair_data(self, maps, dims, target):
        return tuple(y for m in maps for y in m)

    def induced_data(self, po, x, y, b, c, target):
        apex, leg_b, leg_c = po
        table = [None] * apex
        for legs, values in ((leg_b, x), (leg_c, y)):
            for point, value in zip(legs, values):
                if point == 0:
                    if value != 0:
                        return None
                    continue
                if table[point - 1] not in (None, value):
                    return None
                table[point - 1] = value
        if None in table:
            return None
        return tuple(table)


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def rref(matrix: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over F_p and the pivot columns"""
    m = np.array(matrix, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for col in range(cols):
        if r == rows:
            break
        candidates = np.nonzero(m[r:, col])[0]
        if candidates.size == 0:
            continue
        pivot = r + int(candidates[0])
        m[[r, pivot]] = m[[pivot, r]]
        m[r] = (m[r] * pow(int(m[r, col]), p - 2, p)) % p
        for other in range(rows):
            if other != r and m[other, col]:
                m[other] = (m[other] - m[other, col] * m[r]) % p
        pivots.append(col)
        r += 1
    return m, pivots


def rank(matrix: np.ndarray, p: int) -> int:
    if matrix.size == 0:
        return 0
    return len(rref(matrix, p)[1])


def null_space(matrix: np.ndarray, p: int) -> np.ndarray:
    """Basis of {v : matrix @ v = 0} over F_p, one vector per row, ordered by free column"""
    rows, cols = matrix.shape
    reduced, pivots = rref(matrix, p) if rows else (np.zeros((0, cols), dtype=np.int64), [])
    free = [j for j in range(cols) if j not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, j in enumerate(free):
        basis[k, j] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-reduced[i, j]) % p
    return basis


class VectBackend(Backend):
    """F_p^k for k <= d_max; a map F_p^a -> F_p^b is a b x a matrix stored as a tuple of rows"""

    kind = "vect"

    def __init__(self, p: int, d_max: int):
        if not is_prime(p):
            raise ValueError(f"vect characteristic must be prime, got {p}")
        if d_max < 0:
            raise ValueError(f"vect bound must be non-negative, got {d_max}")
        self.p = p
        self.d_max = d_max

    @property
    def bound(self) -> int:
        return self.d_max

    @property
    def spec(self) -> str:
        return f"vect:{self.p}:{self.d_max}"

    @staticmethod
    def to_matrix(f, a: int, b: int) -> np.ndarray:
        return np.array(f, dtype=np.int64).reshape(b, a)

    @staticmethod
    def from_matrix(m: np.ndarray) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in row) for row in m)

    def hom_data(self, a, b):
        for entries in product(range(self.p), repeat=a * b):
            yield tuple(tuple(entries[i * a:(i + 1) * a]) for i in range(b))

    def identity(self, a):
        return self.from_matrix(np.eye(a, dtype=np.int64))

    def compose(self, g, f, a, b, c):
        return self.from_matrix((self.to_matrix(g, b, c) @ self.to_matrix(f, a, b)) % self.p)

    def is_cof(self, f, a, b) -> bool:
        return rank(self.to_matrix(f, a, b), self.p) == a

    def is_we(self, f, a, b) -> bool:
        return a == b and self.is_cof(f, a, b)

    def encode(self, f, a, b) -> str:
        if a == 0 or b == 0:
            return "-"
        return " / ".join(" ".join(str(v) for v in row) for row in f)

    def decode(self, text: str, a: int, b: int, line: int = 1) -> Tuple[Tuple[int, ...], ...]:
        stripped = text.strip()
        if a == 0 or b == 0:
            if stripped not in ("", "-"):
                raise ParseError(f"a {b}x{a} matrix is written '-'", line, 1)
            return tuple(() for _ in range(b))
        rows: List[List[int]] = [[]]
        for token, column in _tokens(text):
            if token == "/":
                rows.append([])
                continue
            if not re.fullmatch(r"-?\d+", token):
                raise ParseError(f"invalid matrix entry {token!r}", line, column)
            value = int(token)
            if not 0 <= value < self.p:
                raise ParseError(f"entry {value} is not reduced mod {self.p}", line, column)
            rows[-1].append(value)
        if len(rows) != b:
            raise ParseError(f"expected {b} rows, got {len(rows)}", line, 1)
        for i, row in enumerate(rows, start=1):
            if len(row) != a:
                raise ParseError(f"row {i} has {len(row)} entries, expected {a}", line, 1)
        return tuple(tuple(row) for row in rows)

    def pushout_data(self, f, g, a, b, c) -> Optional[PushoutData]:
        # quotient of B + C by the image of [f; -g]
        span = np.vstack([self.to_matrix(f, a, b), (-self.to_matrix(g, a, c)) % self.p])
        quotient = null_space(span.T, self.p) if a else np.eye(b + c, dtype=np.int64)
        apex = quotient.shape[0]
        if apex > self.d_max:
            return None
        return apex, self.from_matrix(quotient[:, :b]), self.from_matrix(quotient[:, b:])

    def coproduct_data(self, dims):
        apex = sum(dims)
        if apex > self.d_max:
            return None
        injections, offset = [], 0
        for k in dims:
            inj = np.zeros((apex, k), dtype=np.int64)
            inj[offset:offset + k, :] = np.eye(k, dtype=np.int64)
            injections.append(self.from_matrix(inj))
            offset += k
        return apex, tuple(injections)

    def copair_data(self, maps, dims, target):
        blocks = [self.to_matrix(m, k, target) for m, k in zip(maps, dims)]
        if not blocks:
            return self.from_matrix(np.zeros((target, 0), dtype=np.int64))
        return self.from_matrix(np.hstack(blocks))


def _parse_int(value: str, spec: str) -> int:
    if not value.isdigit():
        raise ValueError(f"invalid backend spec {spec!r}: {value!r} is not a non-negative integer")
    return int(value)


@lru_cache(maxsize=None)
def _backend(spec: str) -> Backend:
    parts = spec.strip().split(":")
    if parts[0] == "pset" and len(parts) == 2:
        return PSetBackend(_parse_int(parts[1], spec))
    if parts[0] == "vect" and len(parts) == 3:
        return VectBackend(_parse_int(parts[1], spec), _parse_int(parts[2], spec))
    raise ValueError(f"invalid backend spec {spec!r}; expected 'pset:n' or 'vect:p:d'")


def backend_from_spec(spec: str) -> Backend:
    """Parse 'pset:n' or 'vect:p:d'"""
    return _backend(spec)


@lru_cache(maxsize=None)
def pset_category(n_max: int) -> WaldhausenStructure:
    return PSetBackend(n_max).structure()


@lru_cache(maxsize=None)
def vect_category(p: int, d_max: int) -> WaldhausenStructure:
    return VectBackend(p, d_max).structure()


def structure_from_spec(spec: str) -> WaldhausenStructure:
    backend = backend_from_spec(spec)
    if isinstance(backend, PSetBackend):
        return pset_category(backend.n_max)
    return vect_category(backend.p, backend.d_max)


def encode_morphism(E: WaldhausenStructure, backend: Backend, m: int) -> str:
    cat = E.category
    return backend.encode(cat.data(m), cat.source(m), cat.target(m))


def decode_morphism(E: WaldhausenStructure, backend: Backend, text: str, source: int, target: int,
                    line: int = 1) -> int:
    """Id of the morphism source -> target written as ``text``"""
    cat = E.category
    for obj in (source, target):
        if not cat.has_object(obj):
            raise ParseError(f"object {obj} is outside {backend.spec}", line, 1)
    data = backend.decode(text, source, target, line)
    m = cat.lookup(source, target, data)
    if m is None:
        raise ParseError(f"{text!r} is not a morphism {source} -> {target}", line, 1)
    return m
