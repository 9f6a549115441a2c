"""
Command-line front end
Subcommands: report, check, rings
"""

import argparse
import csv
import io
import json
import logging
import sys
from typing import Dict, List, Optional, TextIO

from algebra.ringkit import build_ring
from cli.checks import CRITERIA, CSV_COLUMNS, family_rings, run_suite
from cli.report import ReportBuilder, SECTIONS, parse_checks, render_json, run_report
from config.config import Config
from config.dynamic_config import configure, get_config
from database.db_manager import ResultStore
from utils.errors import E2HomLabError, RingSpecError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='e2homlab',
        description='Low-dimensional homology of E_2(A) over finite commutative rings'
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {Config.ARTIFACT_VERSION}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--cap', type=int, help='ring size cap (overrides E2HOMLAB_CAP)')
    sub = parser.add_subparsers(dest='command', required=True)

    report = sub.add_parser('report', parents=[common], help='JSON report for one ring')
    report.add_argument('--ring', required=True, help='ring spec, e.g. "GF(5)" or "Z/4 x GF(3)"')
    report.add_argument('--deg', type=int, choices=range(0, 5), help='top degree of Y (default 4)')
    report.add_argument('--checks', help=f"comma-separated sections: all, {', '.join(SECTIONS)}")
    report.add_argument('--out', help='write to a file instead of standard output')
    report.add_argument('--timing', action='store_true', help='add the timing section')

    check = sub.add_parser('check', parents=[common], help='acceptance suite over a ring family, CSV output')
    check.add_argument('--family', default='all',
                       help=f"all, {', '.join(Config.families())}")
    check.add_argument('--checks', help='comma-separated criterion ids (default all)')
    check.add_argument('--jobs', type=int, help='worker processes')
    check.add_argument('--out', help='write the CSV to a file')
    check.add_argument('--db', help='store the run in this SQLite file')

    rings = sub.add_parser('rings', parents=[common], help='list ring families or describe one ring')
    rings.add_argument('--ring', help='describe this ring')
    rings.add_argument('--history', action='store_true', help='show stored check runs')
    rings.add_argument('--db', help='results store for --history')
    rings.add_argument('--limit', type=int, default=10)
    return parser


def _open_out(path: Optional[str]) -> TextIO:
    return open(path, 'w', encoding='utf-8', newline='') if path else sys.stdout


def _write(text: str, path: Optional[str]):
    out = _open_out(path)
    try:
        out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_report(args) -> int:
    checks = parse_checks(args.checks)
    report = run_report(args.ring, args.deg, checks, timing=args.timing)
    _write(render_json(report), args.out)
    return 0


def _selected_criteria(text: Optional[str]) -> Optional[List[str]]:
    if not text:
        return None
    chosen = []
    for item in text.split(','):
        item = item.strip()
        matches = [k for k in CRITERIA if k == item or k.split('-', 1)[0] == item]
        if not matches:
            raise ValueError(f"unknown criterion {item!r}; choose from {', '.join(CRITERIA)}")
        chosen.extend(m for m in matches if m not in chosen)
    return [k for k in CRITERIA if k in chosen]


def render_csv(rows) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, extrasaction='ignore', lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow(row.to_dict())
    return buffer.getvalue()


def check_suite(family: str = 'all', checks: Optional[str] = None, jobs: Optional[int] = None,
                out: Optional[str] = None, db: Optional[str] = None,
                overrides: Optional[Dict] = None) -> int:
    """Run the acceptance suite over a family, write the CSV, return the exit status"""
    settings = get_config()
    jobs = jobs or settings.DEFAULT_JOBS
    family_rings(family)
    selected = _selected_criteria(checks)

    store, run_id = None, None
    db_path = db or settings.DATABASE_PATH
    if db_path:
        store = ResultStore(db_path)
        if store.initialize():
            run_id = store.start_run(family, jobs, settings.ARTIFACT_VERSION)
        else:
            logger.warning(f"Results store at {db_path} unavailable; not recording")
            store = None

    rows = run_suite(family, jobs, selected, overrides)
    _write(render_csv(rows), out)

    failed = sorted({f"{row.ring}:{row.criterion}" for row in rows if row.failed})
    if store:
        store.record_results(run_id, (row.to_dict() for row in rows))
        store.finish_run(run_id, 'fail' if failed else 'pass')
    if failed:
        print(f"failing criteria: {' '.join(failed)}", file=sys.stderr)
        return 4
    return 0


def cmd_rings(args) -> int:
    if args.history:
        db_path = args.db or get_config().DATABASE_PATH
        if not db_path:
            raise ValueError("--history needs --db or E2HOMLAB_DB")
        store = ResultStore(db_path)
        store.initialize()
        _write(json.dumps(store.latest_runs(args.limit), indent=2, sort_keys=True) + "\n", None)
        return 0
    if args.ring:
        ring = build_ring(args.ring)
        section = ReportBuilder(ring, 0).ring_section()
        section['spec'] = ring.name
        _write(render_json(section), None)
        return 0
    for family, specs in Config.families().items():
        print(f"{family}: {', '.join(specs)}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {'ring_size_cap': args.cap}
    if getattr(args, 'db', None):
        overrides['database_path'] = args.db
    if getattr(args, 'jobs', None):
        overrides['default_jobs'] = args.jobs
    configure(overrides)

    try:
        if args.command == 'report':
            return cmd_report(args)
        if args.command == 'check':
            return check_suite(args.family, args.checks, args.jobs, args.out, args.db, overrides)
        return cmd_rings(args)
    except RingSpecError as e:
        logger.error(f"Invalid ring spec: {e}")
        print(f"e2homlab: invalid ring spec: {e}", file=sys.stderr)
        return e.exit_code
    except E2HomLabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"e2homlab: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        print(f"e2homlab: {e}", file=sys.stderr)
        return 2
