"""
Schema migrations for the results store
Each step is a list of SQL statements applied in one transaction
"""

import logging
import sqlite3
from dataclasses import dataclass
from typing import List, Sequence, Tuple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Migration:
    version: int
    description: str
    statements: Tuple[str, ...]


MIGRATIONS: Tuple[Migration, ...] = (
    Migration(1, "Runs and check results", (
        """CREATE TABLE IF NOT EXISTS runs (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            started_at DATETIME NOT NULL,
            finished_at DATETIME,
            family TEXT NOT NULL,
            jobs INTEGER DEFAULT 1,
            version TEXT NOT NULL,
            status TEXT DEFAULT 'running'
        )""",
        """CREATE TABLE IF NOT EXISTS check_results (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            run_id INTEGER NOT NULL,
            ring TEXT NOT NULL,
            criterion TEXT NOT NULL,
            expected TEXT,
            got TEXT,
            verdict TEXT NOT NULL,
            millis INTEGER DEFAULT 0,
            FOREIGN KEY (run_id) REFERENCES runs(id)
        )""",
        "CREATE INDEX IF NOT EXISTS idx_results_run ON check_results(run_id)",
        "CREATE INDEX IF NOT EXISTS idx_runs_family ON runs(family)",
    )),
    Migration(2, "Failure detail column", (
        "ALTER TABLE check_results ADD COLUMN detail TEXT DEFAULT ''",
    )),
    Migration(3, "Ring and criterion index", (
        "CREATE INDEX IF NOT EXISTS idx_results_ring_criterion ON check_results(ring, criterion)",
    )),
)


class MigrationManager:
    """Brings a results database up to the latest schema version"""

    def __init__(self, db_path: str, migrations: Sequence[Migration] = MIGRATIONS):
        self.db_path = db_path
        self.migrations: List[Migration] = sorted(migrations, key=lambda m: m.version)

    @property
    def latest_version(self) -> int:
        return self.migrations[-1].version if self.migrations else 0

    @staticmethod
    def _ensure_migrations_table(conn: sqlite3.Connection):
        conn.execute("""
            CREATE TABLE IF NOT EXISTS migrations (
                version INTEGER PRIMARY KEY,
                description TEXT NOT NULL,
                applied_at DATETIME DEFAULT CURRENT_TIMESTAMP
            )
        """)

    def get_current_version(self) -> int:
        try:
            with sqlite3.connect(self.db_path) as conn:
                self._ensure_migrations_table(conn)
                row = conn.execute("SELECT MAX(version) FROM migrations").fetchone()
                return row[0] or 0
        except sqlite3.Error as e:
            logger.error(f"Cannot read schema version of {self.db_path}: {e}")
            return 0

    def apply_migrations(self) -> bool:
        """Apply pending steps in version order; stops at the first failing step"""
        current = self.get_current_version()
        pending = [m for m in self.migrations if m.version > current]
        if not pending:
            logger.debug(f"{self.db_path} is at schema version {current}")
            return True
        conn = sqlite3.connect(self.db_path)
        try:
            self._ensure_migrations_table(conn)
            for migration in pending:
                logger.info(f"Applying migration {migration.version}: {migration.description}")
                try:
                    for statement in migration.statements:
                        conn.execute(statement)
                    conn.execute("INSERT INTO migrations (version, description) VALUES (?, ?)",
                                 (migration.version, migration.description))
                    conn.commit()
                except sqlite3.Error as e:
                    conn.rollback()
                    logger.error(f"Migration {migration.version} failed: {e}")
                    return False
            return True
        finally:
            conn.close()
