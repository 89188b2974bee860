#!/usr/bin/env python3
"""
waldcheck - exhaustive verification of Waldhausen structures on finite categories
"""

import argparse
import os
import sys
from typing import List, Optional

from src.cli.commands import (
    DERIVED,
    EXIT_USAGE,
    QUIVER_ACTIONS,
    Settings,
    cmd_check_wfs,
    cmd_fiber_iso,
    cmd_quiver,
    cmd_rep_classify,
    cmd_rep_verify,
    cmd_total,
    cmd_verify_folder,
    cmd_verify_waldhausen,
    execute,
)
from src.core.config import ConfigManager
from src.core.logging_setup import configure_logging
from src.output import get_handler
from src.utils.validators import OUTPUT_FORMATS, Validators


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="waldcheck",
        description="Verify Waldhausen structures, weak factorization systems, opfibrations and quiver representations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python waldcheck.py verify-waldhausen fixtures/pset3.cat
  python waldcheck.py --backend pset:1 verify-waldhausen fixtures/arrow.cat --derived mor
  python waldcheck.py quiver fixtures/chain3.qv rooted-seq
  python waldcheck.py rep-classify fixtures/chain2.qv fixtures/a2-vect.rmor
  python waldcheck.py --backend pset:2 total codomain
  python waldcheck.py --format records fiber-iso fixtures/chain2.qv --mu 1
        """
    )

    parser.add_argument('--budget', type=int, default=None,
                        help='Instances checked per axiom (default: WALDCHECK_BUDGET or config)')
    parser.add_argument('--backend', default=None,
                        help="Backend category, 'pset:n' or 'vect:p:d' (default: from config)")
    parser.add_argument('--format', choices=OUTPUT_FORMATS, default=None,
                        help='Report format (default: from config)')
    parser.add_argument('--config', default='config.yaml',
                        help='Configuration file (default: config.yaml)')
    parser.add_argument('-o', '--output', default=None,
                        help='Write the report to this file instead of stdout')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for INFO logging, -vv for DEBUG')

    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('verify-waldhausen', help='Check the Waldhausen axioms on a category document')
    p.add_argument('document', help='Category document, or a folder of *.cat documents')
    p.add_argument('--derived', default=None,
                   help=f"Verify a derived structure instead: {', '.join(DERIVED[:2])}, slice:K or coslice:K")

    p = sub.add_parser('check-wfs', help='Check (C, C^rlp) as a weak factorization system')
    p.add_argument('document')
    p.add_argument('--weak-equivalences', action='store_true',
                   help="Also build and verify the Waldhausen structure with the document's W")

    p = sub.add_parser('quiver', help='Rooted sequence and stage subquivers of a quiver')
    p.add_argument('document')
    p.add_argument('action', choices=QUIVER_ACTIONS)
    p.add_argument('--mu', type=int, default=None, help='Stage for subquiver')

    p = sub.add_parser('rep-classify', help='Classify a morphism of representations')
    p.add_argument('quiver')
    p.add_argument('morphism')

    p = sub.add_parser('rep-verify', help='Verify Rep(Q, coE) and replay the stagewise construction')
    p.add_argument('quiver')
    p.add_argument('--no-replay', action='store_true', help='Skip the stagewise opfibration replay')

    p = sub.add_parser('total', help='Total structure of an opfibration')
    p.add_argument('target', help="'codomain', 'domain' or an opfibration document")

    p = sub.add_parser('fiber-iso', help='Check the fiber isomorphism at a stage')
    p.add_argument('quiver')
    p.add_argument('--mu', type=int, required=True)
    p.add_argument('--base', default=None, help='Representation document selecting one fiber')

    return parser


def dispatch(args: argparse.Namespace, settings: Settings):
    if args.command == 'verify-waldhausen':
        if os.path.isdir(args.document):
            return lambda: cmd_verify_folder(args.document, settings, args.derived)
        return lambda: cmd_verify_waldhausen(args.document, settings, args.derived)
    if args.command == 'check-wfs':
        return lambda: cmd_check_wfs(args.document, settings, args.weak_equivalences)
    if args.command == 'quiver':
        return lambda: cmd_quiver(args.document, args.action, settings, args.mu)
    if args.command == 'rep-classify':
        return lambda: cmd_rep_classify(args.quiver, args.morphism, settings)
    if args.command == 'rep-verify':
        return lambda: cmd_rep_verify(args.quiver, settings, not args.no_replay)
    if args.command == 'total':
        return lambda: cmd_total(args.target, settings)
    return lambda: cmd_fiber_iso(args.quiver, args.mu, settings, args.base)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        config = ConfigManager(args.config)
        logging_config = config.get_logging_config()
        level = {0: logging_config.get('level', 'WARNING'), 1: 'INFO'}.get(args.verbose, 'DEBUG')
        configure_logging(level, logging_config.get('format'))
    except (FileNotFoundError, ValueError) as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    output_format = args.format or config.get_output_format()
    valid, message = Validators.validate_output_format(output_format)
    if not valid:
        print(f"❌ Error: {message}", file=sys.stderr)
        return EXIT_USAGE

    settings = Settings(config, args.budget, args.backend)
    result = execute(args.command, dispatch(args, settings))

    handler = get_handler(output_format)
    if args.output:
        handler.save(result.report, args.output)
        print(f"📁 Report saved to: {args.output}")
    else:
        sys.stdout.write(handler.to_string(result.report))

    if result.report['status'] == 'error':
        print(f"❌ Error: {result.report['summary'].get('error')}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
