"""Results store: battery reports and simulation runs in sqlite."""

import json
import logging
import sqlite3
from typing import Any, Dict, List, Optional, Tuple

from skewer_lab.database.models import RunRecord, StatReport

logger = logging.getLogger(__name__)

REPORT_COLUMNS = (
    "test_name",
    "statistic",
    "n_samples",
    "reference",
    "provenance",
    "tolerance",
    "passed",
    "runtime_seconds",
    "seed",
    "n_paths",
    "details",
)


class DatabaseError(Exception):
    """A results-store operation failed."""


class DatabaseManager:
    """Manages the sqlite results store."""

    def __init__(self, db_path: str = "skewer_lab.db", dry_run: bool = False):
        """Open a results store.

        Args:
            db_path: sqlite file holding reports and runs
            dry_run: print statements instead of executing them; nothing is written
        """
        self.db_path = db_path
        self.conn = None
        self.cursor = None
        self.dry_run = dry_run

    def _execute(self, sql: str, params: Optional[Tuple[Any, ...]] = None) -> None:
        """Execute SQL, or print it in dry run mode."""
        if self.dry_run:
            if params:
                sql_formatted = sql.replace("?", "%r")
                print(f"[DRY RUN] Would execute: {sql_formatted % params}")
            else:
                print(f"[DRY RUN] Would execute: {sql}")
            return

        if not self.conn or not self.cursor:
            self.connect()

        if params:
            self.cursor.execute(sql, params)
        else:
            self.cursor.execute(sql)

    def _commit(self) -> None:
        if self.dry_run:
            print("Would commit transaction")
            return
        self.conn.commit()

    def connect(self) -> None:
        """Connect to the database."""
        try:
            self.conn = sqlite3.connect(self.db_path)
            self.conn.row_factory = sqlite3.Row
            self.cursor = self.conn.cursor()
        except sqlite3.Error as e:
            raise DatabaseError(f"Failed to connect to database: {e}") from e

    def close(self) -> None:
        if self.conn:
            self.conn.close()
        self.conn = None
        self.cursor = None

    def init_database(self, reset: bool = False) -> None:
        """Create the tables; ``reset`` drops existing ones first."""
        try:
            if reset:
                self._execute("DROP TABLE IF EXISTS reports")
                self._execute("DROP TABLE IF EXISTS runs")

            self._execute(
                """
                CREATE TABLE IF NOT EXISTS runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    command TEXT NOT NULL,
                    config_json TEXT NOT NULL,
                    n_paths INTEGER NOT NULL,
                    seed INTEGER NOT NULL,
                    output_path TEXT,
                    created_at TEXT NOT NULL
                )
                """
            )
            self._execute(
                """
                CREATE TABLE IF NOT EXISTS reports (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER,
                    test_name TEXT NOT NULL,
                    statistic REAL NOT NULL,
                    n_samples INTEGER NOT NULL,
                    reference REAL NOT NULL,
                    provenance TEXT NOT NULL,
                    tolerance REAL NOT NULL,
                    passed INTEGER NOT NULL,
                    runtime_seconds REAL NOT NULL,
                    seed INTEGER NOT NULL,
                    n_paths INTEGER NOT NULL,
                    details TEXT,
                    FOREIGN KEY (run_id) REFERENCES runs(id)
                )
                """
            )
            self._commit()
        except sqlite3.Error as e:
            raise DatabaseError(f"Failed to initialize database: {e}") from e

    def create_indices(self) -> None:
        try:
            self._execute("CREATE INDEX IF NOT EXISTS reports_test_name_idx ON reports(test_name)")
            self._execute("CREATE INDEX IF NOT EXISTS reports_run_id_idx ON reports(run_id)")
            self._execute("CREATE INDEX IF NOT EXISTS runs_command_idx ON runs(command)")
            self._commit()
            logger.info("Created indices on %s", self.db_path)
        except sqlite3.Error as e:
            raise DatabaseError(f"Failed to create indices: {e}") from e

    def list_tables(self) -> List[str]:
        """List all tables in the database."""
        try:
            self._execute("SELECT name FROM sqlite_master WHERE type='table'")
            return [row[0] for row in self.cursor.fetchall()]
        except sqlite3.Error as e:
            raise DatabaseError(f"Failed to list tables: {e}") from e

    def store_run(self, record: RunRecord) -> Optional[int]:
        """Insert a run and return its id (``None`` in dry run mode)."""
        try:
            self._execute(
                """
                INSERT INTO runs (command, config_json, n_paths, seed, output_path, created_at)
                VALUES (?, ?, ?, ?, ?, ?)
                """,
                (
                    record.command,
                    record.config_json,
                    record.n_paths,
                    record.seed,
                    record.output_path,
                    record.created_at,
                ),
            )
            self._commit()
            return None if self.dry_run else self.cursor.lastrowid
        except sqlite3.Error as e:
            raise DatabaseError(f"Failed to store run: {e}") from e

    def store_report(self, report: StatReport, run_id: Optional[int] = None) -> None:
        try:
            placeholders = ", ".join("?" for _ in range(len(REPORT_COLUMNS) + 1))
            self._execute(
                f"INSERT INTO reports (run_id, {', '.join(REPORT_COLUMNS)}) "
                f"VALUES ({placeholders})",
                (
                    run_id,
                    report.test_name,
                    float(report.statistic),
                    int(report.n_samples),
                    float(report.reference),
                    report.provenance,
                    float(report.tolerance),
                    int(bool(report.passed)),
                    float(report.runtime_seconds),
                    int(report.seed),
                    int(report.n_paths),
                    json.dumps(report.details, sort_keys=True),
                ),
            )
            self._commit()
        except sqlite3.Error as e:
            raise DatabaseError(f"Failed to store report {report.test_name}: {e}") from e

    def get_reports(self, test_name: Optional[str] = None) -> List[StatReport]:
        """Stored reports, oldest first, optionally for one test."""
        try:
            query = f"SELECT {', '.join(REPORT_COLUMNS)} FROM reports"
            params: Tuple[Any, ...] = ()
            if test_name:
                query += " WHERE test_name = ?"
                params = (test_name,)
            query += " ORDER BY id"
            self._execute(query, params or None)
            if self.dry_run:
                return []
            return [StatReport.from_row(row) for row in self.cursor.fetchall()]
        except sqlite3.Error as e:
            raise DatabaseError(f"Failed to get reports: {e}") from e

    def get_runs(self) -> List[Dict[str, Any]]:
        try:
            self._execute("SELECT * FROM runs ORDER BY id")
            if self.dry_run:
                return []
            return [dict(row) for row in self.cursor.fetchall()]
        except sqlite3.Error as e:
            raise DatabaseError(f"Failed to get runs: {e}") from e

    def count_reports(self, test_name: Optional[str] = None) -> int:
        try:
            if test_name:
                self._execute("SELECT COUNT(*) FROM reports WHERE test_name = ?", (test_name,))
            else:
                self._execute("SELECT COUNT(*) FROM reports")
            return 0 if self.dry_run else self.cursor.fetchone()[0]
        except sqlite3.Error as e:
            raise DatabaseError(f"Failed to count reports: {e}") from e

    def clear_reports(self) -> None:
        try:
            self._execute("DELETE FROM reports")
            self._commit()
        except sqlite3.Error as e:
            raise DatabaseError(f"Failed to clear reports: {e}") from e
