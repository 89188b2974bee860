"""
Subcommand bodies of waldcheck. Each command returns a CommandResult: the
process exit code and a report dict rendered by the output handlers.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Union

from ..category import (
    WaldhausenStructure,
    comor_structure,
    is_wfs,
    mor_structure,
    rlp_class,
    slice_structure,
    coslice_cof_structure,
    verify_waldhausen,
    wfs_to_waldhausen,
)
from ..category.backends import backend_from_spec, encode_morphism, structure_from_spec
from ..category.classes import HypothesisFailure
from ..category.opfib import total_structure, validate_opfibration
from ..category.quiver import Quiver, require_left_rooted, rooted_sequence, subquiver
from ..category.repcat import classify, fiber_iso, restriction_opfib, rho, rep_waldhausen, stage_categories
from ..category.waldhausen import EXIT_CODES, FAIL, INCONCLUSIVE, PASS, AxiomReport
from ..core.config import ConfigManager
from ..core.exceptions import (
    NaturalityError,
    ParseError,
    QuiverError,
    RepresentationError,
    TruncationOverflow,
)
from ..utils.file_handler import FileHandler
from ..utils.validators import Validators
from .documents import (
    BUILTIN_OPFIBRATIONS,
    UNLIMITED,
    Document,
    build_category,
    build_morphism_class,
    build_opfibration,
    build_quiver,
    build_representation,
    build_rep_morphism,
    builtin_opfibration,
)

logger = logging.getLogger(__name__)

EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_NO_INPUT = 66

QUIVER_ACTIONS = ("rooted-seq", "is-left-rooted", "subquiver")
DERIVED = ("mor", "comor", "slice", "coslice")


@dataclass
class Settings:
    """Configuration resolved for one run; CLI flags win over documents, documents over config"""
    config: ConfigManager = field(default_factory=lambda: ConfigManager(None))
    budget_flag: Optional[int] = None
    backend_flag: Optional[str] = None

    def budget(self, document_budget: Union[int, str, None] = None) -> Optional[int]:
        if self.budget_flag is not None:
            budget = self.budget_flag
        elif document_budget == UNLIMITED:
            budget = None
        elif document_budget is not None:
            budget = document_budget
        else:
            budget = self.config.get_budget()
        valid, message = Validators.validate_budget(budget)
        if not valid:
            raise ValueError(message)
        return budget

    @property
    def backend(self) -> str:
        spec = self.backend_flag or self.config.get_default_backend()
        valid, message = Validators.validate_backend_spec(spec)
        if not valid:
            raise ValueError(message)
        return spec

    @property
    def check_universality(self) -> bool:
        return self.config.check_universality()

    @property
    def max_witnesses(self) -> int:
        return self.config.get_max_witnesses()


@dataclass
class CommandResult:
    exit_code: int
    report: Dict[str, Any]


def _report(command: str, status: str, exit_code: int, summary: Optional[Dict[str, Any]] = None,
            tables: Optional[Dict[str, List[Dict[str, Any]]]] = None,
            records: Optional[List[Dict[str, Any]]] = None) -> CommandResult:
    return CommandResult(exit_code, {
        'command': command,
        'status': status,
        'exit_code': exit_code,
        'summary': summary or {},
        'tables': tables or {},
        'records': records or [],
    })


def _combine(*statuses: str) -> str:
    if FAIL in statuses:
        return FAIL
    return INCONCLUSIVE if INCONCLUSIVE in statuses else PASS


def _verdict(value: Optional[bool]) -> str:
    if value is None:
        return "undetermined"
    return "true" if value else "false"


def _read(path: str) -> Document:
    valid, message = Validators.validate_file_path(path)
    if not valid:
        raise FileNotFoundError(message)
    return FileHandler.read_document(path)


def _axiom_rows(report: AxiomReport) -> List[Dict[str, Any]]:
    return [{
        'axiom': r.name,
        'status': r.status,
        'checked': r.checked,
        'beyond_bound': r.beyond_bound,
        'failures': r.failures,
        'witness': r.witnesses[0] if r.witnesses else None,
    } for r in report.results.values()]


def _structure_summary(E: WaldhausenStructure) -> Dict[str, Any]:
    cat = E.category
    return {
        'structure': E.name or cat.name,
        'objects': len(cat.objects),
        'morphisms': len(cat.morphism_ids),
        'cofibrations': len(E.cof),
        'weak_equivalences': len(E.we),
        'undetermined': len(E.undetermined),
        'initial': E.initial,
    }


def _verification_summary(report: AxiomReport) -> Dict[str, Any]:
    return {
        'budget': report.budget,
        'instances': report.instances_checked,
        'exhaustive': report.exhaustive,
    }


def _quiver(path: str, settings: Settings, for_representations: bool = True) -> Quiver:
    Q = build_quiver(_read(path))
    if for_representations:
        valid, message = Validators.validate_quiver_limits(Q, settings.config.get_quiver_limits())
        if not valid:
            raise ParseError(message)
    return Q


def _derived(E: WaldhausenStructure, derived: str) -> WaldhausenStructure:
    name, _, arg = derived.partition(":")
    if name not in DERIVED:
        raise ParseError(f"unknown derived structure {derived!r}; expected mor, comor, slice:K or coslice:K")
    if name == "mor":
        return mor_structure(E)
    if name == "comor":
        return comor_structure(E)
    if not arg.isdigit() or not E.category.has_object(int(arg)):
        raise ParseError(f"{name} needs an object of {E.name or E.category.name}, got {arg!r}")
    if name == "slice":
        return slice_structure(E, int(arg))
    return coslice_cof_structure(E, int(arg))


def cmd_verify_waldhausen(path: str, settings: Settings, derived: Optional[str] = None) -> CommandResult:
    document = build_category(_read(path))
    E = document.structure
    if derived:
        E = _derived(E, derived)
    report = verify_waldhausen(E, settings.budget(document.budget), settings.check_universality,
                               settings.max_witnesses)
    summary = {**_structure_summary(E), **_verification_summary(report)}
    return _report("verify-waldhausen", report.status, report.exit_code, summary,
                   {'axioms': _axiom_rows(report)}, report.to_records())


def cmd_verify_folder(folder: str, settings: Settings, derived: Optional[str] = None) -> CommandResult:
    """verify-waldhausen over every ``*.cat`` document of a folder; a document error counts as a failure"""
    paths = FileHandler.get_documents_from_folder(folder, "cat")
    if not paths:
        raise FileNotFoundError(f"No category documents in {folder}")
    rows, statuses = [], []
    for path in paths:
        result = execute("verify-waldhausen", lambda: cmd_verify_waldhausen(path, settings, derived))
        status = result.report['status']
        statuses.append(FAIL if status == "error" else status)
        summary = result.report['summary']
        rows.append({'document': path, 'status': status, 'exit_code': result.exit_code,
                     'instances': summary.get('instances'), 'error': summary.get('error')})
        logger.info("%s: %s", path, status)
    status = _combine(*statuses)
    summary = {'folder': folder, 'documents': len(paths),
               'failed': sum(1 for s in statuses if s == FAIL)}
    return _report("verify-waldhausen", status, EXIT_CODES[status], summary, {'documents': rows})


def cmd_check_wfs(path: str, settings: Settings, weak_equivalences: bool = False) -> CommandResult:
    """(C, C^□) as a weak factorization system; optionally the Waldhausen structure it induces with W"""
    doc = _read(path)
    if doc.kind == "morphism-class":
        E, C = build_morphism_class(doc, settings.backend)
    else:
        E = build_category(doc).structure
        C = E.cof
    F = rlp_class(C)
    wfs = is_wfs(C, F)
    summary: Dict[str, Any] = {
        'category': E.category.name,
        'left_class': len(C),
        'right_class': len(F),
        'wfs': wfs.holds,
        'rlp_of_left_equals_right': wfs.right_matches,
        'llp_of_right_equals_left': wfs.left_matches,
        'inconclusive_at_bound': len(wfs.inconclusive),
    }
    tables = {'counterexamples': [{'kind': c['kind'], 'morphism': c['morphism'], 'reason': c['reason']}
                                  for c in wfs.counterexamples]}
    records = [wfs.to_dict()]
    status = wfs.status
    if weak_equivalences:
        structure = wfs_to_waldhausen(C, E.we)
        if isinstance(structure, HypothesisFailure):
            summary['hypothesis_failure'] = structure.hypothesis
            summary['hypothesis'] = structure.description
            records.append(structure.to_dict())
            status = FAIL
        else:
            report = verify_waldhausen(structure, settings.budget(), settings.check_universality,
                                       settings.max_witnesses)
            summary['waldhausen'] = report.status
            tables['axioms'] = _axiom_rows(report)
            records.extend(report.to_records())
            status = _combine(status, report.status)
    return _report("check-wfs", status, EXIT_CODES[status], summary, tables, records)


def cmd_quiver(path: str, action: str, settings: Settings, mu: Optional[int] = None) -> CommandResult:
    Q = _quiver(path, settings, for_representations=False)
    if action not in QUIVER_ACTIONS:
        raise ParseError(f"unknown quiver action {action!r}; expected one of {', '.join(QUIVER_ACTIONS)}")
    sequence = rooted_sequence(Q)
    left_rooted = sequence.limit == frozenset(Q.vertices)
    summary: Dict[str, Any] = {'quiver': Q.name, 'vertices': len(Q.vertices), 'arrows': len(Q.arrows)}
    tables = {}
    if action == "rooted-seq":
        summary['zeta'] = sequence.zeta
        summary['left_rooted'] = "true" if left_rooted else "false"
        # V_0 is always empty
        tables['stages'] = [{'stage': k, 'vertices': sorted(stage)}
                            for k, stage in enumerate(sequence.stages) if k > 0]
    elif action == "is-left-rooted":
        summary['left_rooted'] = "true" if left_rooted else "false"
    else:
        if mu is None:
            raise QuiverError("subquiver needs a stage (--mu)")
        sub = subquiver(Q, mu)
        summary['stage'] = mu
        summary['subquiver_vertices'] = list(sub.vertices)
        tables['arrows'] = [{'arrow': a.id, 'source': a.source, 'target': a.target} for a in sub.arrows]
    records = [dict(summary)] + [{'stage': k, 'vertices': sorted(stage)}
                                 for k, stage in enumerate(sequence.stages)]
    return _report("quiver", PASS, 0, summary, tables, records)


def cmd_rep_classify(quiver_path: str, morphism_path: str, settings: Settings) -> CommandResult:
    """Per-vertex ρ_i and the cofibration / weak equivalence verdict of one morphism"""
    Q = _quiver(quiver_path, settings)
    require_left_rooted(Q)
    E, backend, f = build_rep_morphism(_read(morphism_path), Q, settings.backend)
    rows = []
    for i in Q.vertices:
        data = rho(E, f, i)
        if data is None:
            rows.append({'vertex': i, 'pushout': None, 'rho': None, 'cofibration': 'undetermined',
                         'weak_equivalence': 'undetermined'})
            continue
        rows.append({
            'vertex': i,
            'pushout': data.pushout.apex,
            'rho': encode_morphism(E, backend, data.rho),
            'cofibration': _verdict(E.is_cofibration(data.rho)),
            'weak_equivalence': _verdict(E.is_weak_equivalence(data.rho)),
        })
    verdict = classify(E, f)
    componentwise = all(E.is_weak_equivalence(f.component(v)) for v in Q.vertices)
    summary = {
        'quiver': Q.name,
        'backend': backend.spec,
        'cofibration': _verdict(verdict.is_cofibration),
        'weak_equivalence': _verdict(verdict.is_weak_equivalence),
        'componentwise_weak_equivalence': componentwise,
    }
    status = PASS if verdict.determined else INCONCLUSIVE
    return _report("rep-classify", status, EXIT_CODES[status], summary, {'rho': rows}, rows + [summary])


def _rep_bound(settings: Settings, spec: str) -> int:
    return settings.config.get_component_bound(backend_from_spec(spec).kind)


def cmd_rep_verify(quiver_path: str, settings: Settings, replay: bool = True) -> CommandResult:
    Q = _quiver(quiver_path, settings)
    spec = settings.backend
    bound = _rep_bound(settings, spec)
    result = rep_waldhausen(Q, structure_from_spec(spec), bound, settings.budget(), replay,
                            settings.check_universality)
    summary = {
        'quiver': Q.name,
        'backend': spec,
        'component_bound': bound,
        **_structure_summary(result.structure),
        **_verification_summary(result.report),
        'stages_agree': all(stage.agrees for stage in result.stages),
    }
    tables = {
        'axioms': _axiom_rows(result.report),
        'stages': [{'stage': s.mu, 'status': s.status, 'opfibration': s.opfib.status,
                    'mismatches': s.mismatches[:5]} for s in result.stages],
    }
    return _report("rep-verify", result.status, result.exit_code, summary, tables, result.to_records())


def cmd_total(target: str, settings: Settings) -> CommandResult:
    """Total structure of a builtin opfibration, or of an opfibration document"""
    if target in BUILTIN_OPFIBRATIONS:
        builtin = target
        E = structure_from_spec(settings.backend)
        op = builtin_opfibration(builtin, E)
    else:
        builtin, E, op = build_opfibration(_read(target), settings.backend)
    summary: Dict[str, Any] = {'opfibration': op.name, 'base': E.name, 'cleavage_entries': len(op.cleavage)}
    cleavage = validate_opfibration(op)
    summary['cleavage_valid'] = cleavage.valid
    if not cleavage.valid:
        rows = [{'violation': v} for v in cleavage.violations]
        return _report("total", FAIL, EXIT_CODES[FAIL], summary, {'cleavage': rows}, [cleavage.to_dict()])

    total = total_structure(op, E)
    report = verify_waldhausen(total, settings.budget(), settings.check_universality, settings.max_witnesses)
    reference = mor_structure(E) if builtin == "codomain" else comor_structure(E)
    identical = total.same_classification(reference)
    summary.update(_structure_summary(total))
    summary.update(_verification_summary(report))
    summary['reference'] = reference.name
    summary['identical'] = identical
    T = total.category
    rows = [{
        'morphism': m,
        'source': T.source(m),
        'target': T.target(m),
        'base': op.p(m),
        'cofibration': _verdict(total.is_cofibration(m)),
        'weak_equivalence': _verdict(total.is_weak_equivalence(m)),
    } for m in T.morphism_ids]
    status = _combine(report.status, PASS if identical else FAIL)
    return _report("total", status, EXIT_CODES[status], summary,
                   {'classification': rows, 'axioms': _axiom_rows(report)}, report.to_records())


def cmd_fiber_iso(quiver_path: str, mu: int, settings: Settings, base_path: Optional[str] = None) -> CommandResult:
    """The fiber isomorphism at stage μ over one base representation, or over all of them"""
    Q = _quiver(quiver_path, settings)
    require_left_rooted(Q)
    if base_path is not None:
        E, A = build_representation(_read(base_path), subquiver(Q, mu), settings.backend)
        spec = E.name
    else:
        spec = settings.backend
        E = structure_from_spec(spec)
    bound = _rep_bound(settings, spec)
    lower, upper = stage_categories(Q, mu, E, bound)
    op = restriction_opfib(Q, mu, E, bound, lower, upper)
    bases = [A] if base_path is not None else lower.representations
    rows = []
    for base in bases:
        result = fiber_iso(Q, mu, E, base, bound, lower, upper, op)
        rows.append({'base': lower.object_id(base), **result.to_dict()})
    valid = all(row['valid'] for row in rows)
    summary = {'quiver': Q.name, 'stage': mu, 'backend': spec, 'component_bound': bound,
               'fibers': len(rows), 'isomorphisms': valid}
    status = PASS if valid else FAIL
    table = [{k: row[k] for k in ('base', 'fiber_objects', 'fiber_morphisms', 'product_objects',
                                  'product_morphisms', 'valid')} for row in rows]
    return _report("fiber-iso", status, EXIT_CODES[status], summary, {'fibers': table}, rows)


def execute(command: str, body: Callable[[], CommandResult]) -> CommandResult:
    """Run a command body and turn errors into exit codes"""
    try:
        return body()
    except FileNotFoundError as e:
        code, error = EXIT_NO_INPUT, e
    except (NaturalityError, RepresentationError) as e:
        code, error = EXIT_DATA, e
    except TruncationOverflow as e:
        logger.warning("%s: %s", command, e)
        return _report(command, INCONCLUSIVE, EXIT_CODES[INCONCLUSIVE], {'truncation': str(e)})
    except (ParseError, QuiverError, ValueError) as e:
        code, error = EXIT_USAGE, e
    logger.debug("%s failed with %s", command, type(error).__name__)
    summary = {'error': str(error), 'error_type': type(error).__name__}
    if isinstance(error, NaturalityError):
        summary['arrow'] = error.arrow
    return _report(command, "error", code, summary)
