"""
Command-line package for the E2 homology workbench
JSON reports, the acceptance suite and ring listings
"""

from .checks import CRITERIA, CheckRow, run_ring, run_suite
from .commands import build_parser, check_suite, main
from .report import ReportBuilder, run_report

__all__ = [
    'CRITERIA',
    'CheckRow',
    'run_ring',
    'run_suite',
    'build_parser',
    'check_suite',
    'main',
    'ReportBuilder',
    'run_report'
]
