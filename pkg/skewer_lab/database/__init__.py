"""Results store for skewer-lab."""

from .db_manager import DatabaseError, DatabaseManager
from .models import Construction, ExperimentConfig, InitialLaw, RunRecord, StatReport

__all__ = [
    "DatabaseError",
    "DatabaseManager",
    "Construction",
    "ExperimentConfig",
    "InitialLaw",
    "RunRecord",
    "StatReport",
]
