"""
Results store for check-suite runs
Keeps every run and its per-criterion verdicts in SQLite
"""

import logging
import os
import sqlite3
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Dict, Iterable, List, Optional

from config.dynamic_config import get_config
from database.migrations import MigrationManager


class ResultStore:
    """Manages all database operations for check-suite results"""

    def __init__(self, db_path: str = None):
        self.db_path = db_path or get_config().DATABASE_PATH
        if not self.db_path:
            raise ValueError("no database path configured")
        self.logger = logging.getLogger(__name__)

        # Ensure data directory exists
        directory = os.path.dirname(self.db_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

    @contextmanager
    def get_connection(self):
        """Context manager for database connections"""
        conn = None
        try:
            conn = sqlite3.connect(self.db_path)
            conn.row_factory = sqlite3.Row
            yield conn
        except Exception as e:
            if conn:
                conn.rollback()
            self.logger.error(f"Database error: {e}")
            raise
        finally:
            if conn:
                conn.close()

    def initialize(self) -> bool:
        """Create or upgrade the schema through the migration steps"""
        if not MigrationManager(self.db_path).apply_migrations():
            self.logger.error(f"Failed to initialize results store at {self.db_path}")
            return False
        self.logger.info(f"Results store ready at {self.db_path}")
        return True

    # Runs
    def start_run(self, family: str, jobs: int, version: str) -> int:
        """Open a run and return its id"""
        with self.get_connection() as conn:
            cursor = conn.execute(
                "INSERT INTO runs (started_at, family, jobs, version) VALUES (?, ?, ?, ?)",
                (datetime.now().isoformat(timespec='seconds'), family, jobs, version)
            )
            conn.commit()
            self.logger.debug(f"Started run {cursor.lastrowid} for family {family}")
            return cursor.lastrowid

    def record_results(self, run_id: int, rows: Iterable[Dict[str, Any]]) -> int:
        """Store result rows (ring, criterion, expected, got, verdict, millis)"""
        rows = list(rows)
        with self.get_connection() as conn:
            conn.executemany(
                """INSERT INTO check_results
                   (run_id, ring, criterion, expected, got, verdict, millis, detail)
                   VALUES (?, ?, ?, ?, ?, ?, ?, ?)""",
                [(run_id, r['ring'], r['criterion'], str(r.get('expected', '')), str(r.get('got', '')),
                  r['verdict'], int(r.get('millis', 0)), r.get('detail', '')) for r in rows]
            )
            conn.commit()
        return len(rows)

    def finish_run(self, run_id: int, status: str) -> bool:
        """Close a run with its overall status"""
        try:
            with self.get_connection() as conn:
                cursor = conn.execute(
                    "UPDATE runs SET status = ?, finished_at = ? WHERE id = ?",
                    (status, datetime.now().isoformat(timespec='seconds'), run_id)
                )
                conn.commit()
                return cursor.rowcount > 0
        except sqlite3.Error:
            return False

    # Queries
    def get_run(self, run_id: int) -> Optional[Dict]:
        with self.get_connection() as conn:
            row = conn.execute("SELECT * FROM runs WHERE id = ?", (run_id,)).fetchone()
            return dict(row) if row else None

    def get_run_results(self, run_id: int) -> List[Dict]:
        """Result rows of one run in suite order"""
        with self.get_connection() as conn:
            cursor = conn.execute(
                """SELECT ring, criterion, expected, got, verdict, millis, detail
                   FROM check_results WHERE run_id = ? ORDER BY id""",
                (run_id,)
            )
            return [dict(row) for row in cursor.fetchall()]

    def latest_runs(self, limit: int = 10) -> List[Dict]:
        """Most recent runs with pass/fail counts"""
        with self.get_connection() as conn:
            cursor = conn.execute(
                """SELECT r.id, r.started_at, r.finished_at, r.family, r.jobs, r.version, r.status,
                          SUM(CASE WHEN c.verdict = 'pass' THEN 1 ELSE 0 END) AS passed,
                          SUM(CASE WHEN c.verdict = 'fail' THEN 1 ELSE 0 END) AS failed,
                          SUM(CASE WHEN c.verdict = 'skipped' THEN 1 ELSE 0 END) AS skipped
                   FROM runs r LEFT JOIN check_results c ON c.run_id = r.id
                   GROUP BY r.id ORDER BY r.id DESC LIMIT ?""",
                (limit,)
            )
            return [dict(row) for row in cursor.fetchall()]

    def compare_runs(self, first: int, second: int) -> List[Dict]:
        """Rows whose verdict or value differs between two runs"""
        def keyed(run_id):
            return {(r['ring'], r['criterion']): r for r in self.get_run_results(run_id)}

        a, b = keyed(first), keyed(second)
        differences = []
        for key in sorted(set(a) | set(b)):
            ra, rb = a.get(key), b.get(key)
            if ra is None or rb is None or (ra['verdict'], ra['got']) != (rb['verdict'], rb['got']):
                differences.append({
                    'ring': key[0],
                    'criterion': key[1],
                    'first': ra['verdict'] if ra else None,
                    'second': rb['verdict'] if rb else None,
                })
        return differences
