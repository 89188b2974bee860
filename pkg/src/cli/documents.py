"""
Line-oriented text documents read and written by the waldcheck CLI.

A document is a ``key: value`` header followed by sections. A section
starts with an upper-case name on its own line and holds one whitespace
separated row per line. ``#`` starts a comment; blank lines are ignored.

    kind: category
    name: arrow

    OBJECTS
    0 1

    MORPHISMS
    0 0 0
    ...
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

from ..category import (
    FinCategory,
    Morphism,
    MorphismClass,
    OpfibrationData,
    Quiver,
    RepMorphism,
    Representation,
    WaldhausenStructure,
    codomain_opfib,
    domain_opfib,
    find_initial,
    override_cleavage,
    validate_category,
)
from ..category.backends import Backend, backend_from_spec, decode_morphism, structure_from_spec
from ..category.repcat import check_naturality, check_representation
from ..core.exceptions import ParseError

logger = logging.getLogger(__name__)

UNLIMITED = "unlimited"
KINDS = ("category", "quiver", "representation", "morphism", "morphism-class", "opfibration")
BUILTIN_OPFIBRATIONS = ("codomain", "domain")

_SECTION = re.compile(r"[A-Z][A-Z_]*")
_HEADER = re.compile(r"([a-z][a-z0-9_-]*):\s*(.*)")


@dataclass(frozen=True)
class Row:
    """One section line; ``column`` is the 1-based column of its first character"""
    line: int
    text: str
    column: int = 1

    def tokens(self) -> List[Tuple[str, int]]:
        return [(m.group(), self.column + m.start()) for m in re.finditer(r"\S+", self.text)]

    def ints(self, count: Optional[int] = None) -> List[int]:
        tokens = self.tokens()
        if count is not None and len(tokens) != count:
            raise ParseError(f"expected {count} fields, got {len(tokens)}", self.line, self.column)
        values = []
        for token, column in tokens:
            if not token.isdigit():
                raise ParseError(f"expected an unsigned integer, got {token!r}", self.line, column)
            values.append(int(token))
        return values

    def head(self, count: int) -> Tuple[List[str], str, int]:
        """The first ``count`` tokens, then the rest of the row and its column"""
        tokens = self.tokens()
        if len(tokens) <= count:
            raise ParseError(f"expected at least {count + 1} fields", self.line, self.column)
        rest_column = tokens[count][1]
        return [t for t, _ in tokens[:count]], self.text[rest_column - self.column:], rest_column

    def canonical(self) -> str:
        return " ".join(t for t, _ in self.tokens())


@dataclass
class Document:
    kind: str
    header: Dict[str, str] = field(default_factory=dict)
    sections: Dict[str, List[Row]] = field(default_factory=dict)
    header_lines: Dict[str, int] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.header.get('name', '')

    def rows(self, section: str) -> List[Row]:
        return self.sections.get(section, [])

    def require(self, section: str) -> List[Row]:
        if section not in self.sections:
            raise ParseError(f"{self.kind} document has no {section} section")
        return self.sections[section]

    def header_int(self, key: str) -> Optional[int]:
        if key not in self.header:
            return None
        value = self.header[key]
        if not value.isdigit():
            raise ParseError(f"{key} must be an unsigned integer, got {value!r}",
                             self.header_lines.get(key), len(key) + 3)
        return int(value)


def parse_document(text: str) -> Document:
    header: Dict[str, str] = {}
    header_lines: Dict[str, int] = {}
    sections: Dict[str, List[Row]] = {}
    current: Optional[str] = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        stripped = content.lstrip()
        if not stripped:
            continue
        column = len(content) - len(stripped) + 1
        if _SECTION.fullmatch(stripped):
            if stripped in sections:
                raise ParseError(f"section {stripped} appears twice", line_no, column)
            current = stripped
            sections[current] = []
            continue
        if current is None:
            match = _HEADER.fullmatch(stripped)
            if match is None:
                raise ParseError(f"expected 'key: value', got {stripped!r}", line_no, column)
            key, value = match.group(1), match.group(2).strip()
            if key in header:
                raise ParseError(f"header key {key!r} appears twice", line_no, column)
            header[key] = value
            header_lines[key] = line_no
            continue
        sections[current].append(Row(line_no, stripped, column))
    kind = header.get('kind')
    if kind is None:
        raise ParseError("document has no 'kind' header", 1, 1)
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}",
                         header_lines['kind'], 7)
    return Document(kind, header, sections, header_lines)


def emit_document(doc: Document) -> str:
    """Canonical text: header lines, then each section after a blank line"""
    lines = [f"{key}: {value}" if value else f"{key}:" for key, value in doc.header.items()]
    for name, rows in doc.sections.items():
        lines.append("")
        lines.append(name)
        lines.extend(row.canonical() for row in rows)
    return "\n".join(lines) + "\n"


def _expect_kind(doc: Document, *kinds: str) -> None:
    if doc.kind not in kinds:
        raise ParseError(f"expected a {' or '.join(kinds)} document, got kind {doc.kind!r}",
                         doc.header_lines.get('kind'), 7)


def document_backend(doc: Document, fallback: Optional[str] = None) -> Backend:
    """The backend named in the header, or ``fallback`` when the header has none"""
    spec = doc.header.get('backend', fallback)
    if spec is None:
        raise ParseError(f"{doc.kind} document names no backend")
    try:
        return backend_from_spec(spec)
    except ValueError as e:
        raise ParseError(str(e), doc.header_lines.get('backend'), 10) from e


def _uint(row: Row, token: str) -> int:
    if not token.isdigit():
        raise ParseError(f"expected an unsigned integer, got {token!r}", row.line, row.column)
    return int(token)


def _decode(E: WaldhausenStructure, backend: Backend, row: Row, text: str, column: int,
            source: int, target: int) -> int:
    try:
        return decode_morphism(E, backend, text, source, target, row.line)
    except ParseError as e:
        raise ParseError(e.message, row.line, column + (e.column or 1) - 1) from e


# Categories

@dataclass
class CategoryDocument:
    structure: WaldhausenStructure
    budget: Union[int, str, None] = None
    backend: Optional[Backend] = None


def _explicit_category(doc: Document) -> FinCategory:
    objects = [o for row in doc.require('OBJECTS') for o in row.ints()]
    morphisms = []
    for row in doc.require('MORPHISMS'):
        m, s, t = row.ints(3)
        morphisms.append(Morphism(m, s, t, m))
    identities = {}
    for row in doc.require('IDENTITIES'):
        obj, m = row.ints(2)
        identities[obj] = m
    table: Dict[Tuple[int, int], int] = {}
    ends = {m.id: (m.source, m.target) for m in morphisms}
    for m in morphisms:
        if m.target in identities:
            table[(identities[m.target], m.id)] = m.id
        if m.source in identities:
            table[(m.id, identities[m.source])] = m.id
    for row in doc.rows('COMPOSE'):
        g, f, h = row.ints(3)
        for m in (g, f, h):
            if m not in ends:
                raise ParseError(f"unknown morphism {m}", row.line, row.column)
        if table.get((g, f), h) != h:
            raise ParseError(f"composite of {g} after {f} is given twice", row.line, row.column)
        table[(g, f)] = h
    cat = FinCategory(objects, morphisms, identities, composition=table, name=doc.name or "category")
    report = validate_category(cat)
    if not report.valid:
        raise ParseError(f"not a category: {report.violations[0]}")
    return cat


def _class_members(cat: FinCategory, row: Row) -> Tuple[str, MorphismClass]:
    tokens = row.tokens()
    label = tokens[0][0]
    if label not in ("C", "W"):
        raise ParseError(f"class rows start with C or W, got {label!r}", row.line, tokens[0][1])
    rest = [t for t, _ in tokens[1:]]
    if rest == ["all"]:
        return label, MorphismClass.all_morphisms(cat)
    if rest == ["isos"]:
        return label, MorphismClass.isomorphisms(cat)
    members = []
    for token, column in tokens[1:]:
        if not token.isdigit() or not cat.has_morphism(int(token)):
            raise ParseError(f"{token!r} is not a morphism id", row.line, column)
        members.append(int(token))
    return label, MorphismClass(cat, members, label)


def build_category(doc: Document) -> CategoryDocument:
    """A backend category (``backend:`` header) or an explicitly tabulated one"""
    _expect_kind(doc, "category")
    backend = None
    if 'backend' in doc.header:
        backend = document_backend(doc)
        base = structure_from_spec(backend.spec)
        cat, classes, initial = base.category, {'C': base.cof, 'W': base.we}, base.initial
    else:
        cat = _explicit_category(doc)
        classes = {'C': MorphismClass.isomorphisms(cat), 'W': MorphismClass.isomorphisms(cat)}
        initial = find_initial(cat)
    for row in doc.rows('CLASSES'):
        label, members = _class_members(cat, row)
        classes[label] = members
    explicit_initial = doc.header_int('initial')
    if explicit_initial is not None:
        if not cat.has_object(explicit_initial):
            raise ParseError(f"initial object {explicit_initial} is not an object",
                             doc.header_lines['initial'], 10)
        initial = explicit_initial
    structure = WaldhausenStructure(cat, classes['C'], classes['W'], initial, name=doc.name or cat.name)
    logger.debug("category document %s: %d objects, %d morphisms",
                 structure.name, len(cat.objects), len(cat.morphism_ids))
    budget = UNLIMITED if doc.header.get('budget') == UNLIMITED else doc.header_int('budget')
    return CategoryDocument(structure, budget, backend)


def build_morphism_class(doc: Document, fallback_backend: Optional[str] = None
                         ) -> Tuple[WaldhausenStructure, MorphismClass]:
    """A class of backend morphisms listed as ``source target encoding`` rows"""
    _expect_kind(doc, "morphism-class")
    backend = document_backend(doc, fallback_backend)
    E = structure_from_spec(backend.spec)
    members = []
    for row in doc.require('MEMBERS'):
        ends, text, column = row.head(2)
        s, t = (_uint(row, token) for token in ends)
        members.append(_decode(E, backend, row, text, column, s, t))
    return E, MorphismClass(E.category, members, doc.header.get('class', 'C'))


# Quivers and representations

def build_quiver(doc: Document) -> Quiver:
    _expect_kind(doc, "quiver")
    vertices = [v for row in doc.rows('VERTICES') for v in row.ints()]
    arrows = [tuple(row.ints(3)) for row in doc.rows('ARROWS')]
    return Quiver.build(vertices, arrows, name=doc.name or "Q")


def _representation(doc: Document, Q: Quiver, E: WaldhausenStructure, backend: Backend,
                    vertices_section: str, arrows_section: str) -> Representation:
    on_vertices: Dict[int, int] = {}
    for row in doc.require(vertices_section):
        v, obj = row.ints(2)
        if v not in Q.vertices:
            raise ParseError(f"vertex {v} is not in quiver {Q.name!r}", row.line, row.column)
        if not E.category.has_object(obj):
            raise ParseError(f"object {obj} is outside {backend.spec}", row.line, row.column)
        on_vertices[v] = obj
    missing = [v for v in Q.vertices if v not in on_vertices]
    if missing:
        raise ParseError(f"{vertices_section} gives no object for vertex {missing[0]}")
    on_arrows: Dict[int, int] = {}
    for row in doc.rows(arrows_section):
        (arrow_id,), text, column = row.head(1)
        if _uint(row, arrow_id) not in [a.id for a in Q.arrows]:
            raise ParseError(f"{arrow_id!r} is not an arrow of quiver {Q.name!r}", row.line, row.column)
        a = Q.arrow(int(arrow_id))
        on_arrows[a.id] = _decode(E, backend, row, text, column, on_vertices[a.source], on_vertices[a.target])
    missing = [a.id for a in Q.arrows if a.id not in on_arrows]
    if missing:
        raise ParseError(f"{arrows_section} gives no map for arrow {missing[0]}")
    return Representation(Q, tuple(on_vertices[v] for v in Q.vertices),
                          tuple(on_arrows[a.id] for a in Q.arrows))


def build_representation(doc: Document, Q: Quiver, fallback_backend: Optional[str] = None
                         ) -> Tuple[WaldhausenStructure, Representation]:
    _expect_kind(doc, "representation")
    backend = document_backend(doc, fallback_backend)
    E = structure_from_spec(backend.spec)
    X = _representation(doc, Q, E, backend, 'ON_VERTICES', 'ON_ARROWS')
    check_representation(E, X)
    return E, X


def build_rep_morphism(doc: Document, Q: Quiver, fallback_backend: Optional[str] = None
                       ) -> Tuple[WaldhausenStructure, Backend, RepMorphism]:
    """Source, target and components; raises NaturalityError on a failing square"""
    _expect_kind(doc, "morphism")
    backend = document_backend(doc, fallback_backend)
    E = structure_from_spec(backend.spec)
    X = _representation(doc, Q, E, backend, 'SOURCE_VERTICES', 'SOURCE_ARROWS')
    Y = _representation(doc, Q, E, backend, 'TARGET_VERTICES', 'TARGET_ARROWS')
    check_representation(E, X)
    check_representation(E, Y)
    components: Dict[int, int] = {}
    for row in doc.require('COMPONENTS'):
        (vertex,), text, column = row.head(1)
        if _uint(row, vertex) not in Q.vertices:
            raise ParseError(f"{vertex!r} is not a vertex of quiver {Q.name!r}", row.line, row.column)
        v = int(vertex)
        components[v] = _decode(E, backend, row, text, column, X.at(v), Y.at(v))
    missing = [v for v in Q.vertices if v not in components]
    if missing:
        raise ParseError(f"COMPONENTS gives no map at vertex {missing[0]}")
    f = RepMorphism(X, Y, tuple(components[v] for v in Q.vertices))
    check_naturality(E, f)
    return E, backend, f


# Opfibrations

def builtin_opfibration(builtin: str, E: WaldhausenStructure) -> OpfibrationData:
    if builtin == "codomain":
        return codomain_opfib(E)
    if builtin == "domain":
        return domain_opfib(E)
    raise ParseError(f"unknown builtin opfibration {builtin!r}; expected one of {BUILTIN_OPFIBRATIONS}")


def _cleavage_entries(doc: Document, op: OpfibrationData) -> Iterator[Tuple[Tuple[int, int], Tuple[int, int]]]:
    T, B = op.total, op.base
    for row in doc.rows('CLEAVAGE'):
        u, X, Y, a, b = row.ints(5)
        if not B.has_morphism(u):
            raise ParseError(f"{u} is not a base morphism", row.line, row.column)
        if not (T.has_object(X) and T.has_object(Y)):
            raise ParseError(f"{X} -> {Y} is not a pair of total objects", row.line, row.column)
        lam = T.lookup(X, Y, (a, b))
        if lam is None:
            raise ParseError(f"({a}, {b}) is not a square {X} -> {Y}", row.line, row.column)
        yield (u, X), (Y, lam)


def build_opfibration(doc: Document, fallback_backend: Optional[str] = None
                      ) -> Tuple[str, WaldhausenStructure, OpfibrationData]:
    """A builtin opfibration over a backend, with CLEAVAGE rows ``u X Y a b`` replacing entries.

    ``(a, b)`` is the square λ: X -> Y given by its two components in the base.
    """
    _expect_kind(doc, "opfibration")
    builtin = doc.header.get('builtin')
    if builtin is None:
        raise ParseError("opfibration document has no 'builtin' header")
    backend = document_backend(doc, fallback_backend)
    E = structure_from_spec(backend.spec)
    op = builtin_opfibration(builtin, E)
    entries = dict(_cleavage_entries(doc, op))
    if entries:
        op = override_cleavage(op, entries)
    return builtin, E, op
