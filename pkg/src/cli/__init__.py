from .documents import (
    Document,
    Row,
    parse_document,
    emit_document,
    build_category,
    build_quiver,
    build_representation,
    build_rep_morphism,
    build_morphism_class,
    build_opfibration,
)

__all__ = [
    'Document', 'Row', 'parse_document', 'emit_document', 'build_category', 'build_quiver',
    'build_representation', 'build_rep_morphism', 'build_morphism_class', 'build_opfibration',
]
