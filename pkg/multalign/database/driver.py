# Licensed under the MIT License.
"""
Provide a class for managing the results database and exporting its tables
"""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
import pandas as pd
import sqlalchemy
import sqlalchemy.exc
import sqlalchemy.orm

from multalign.database.model import Base, OrderingPoint, RecoveryTrial
from multalign.exceptions import MultalignDatabaseError


LOGGER = logging.getLogger(__name__)

RECOVERY_COLUMNS = ("p", "q", "m", "method", "trial", "recovery")
SUMMARY_COLUMNS = ("p", "q", "m", "method", "mean", "p10", "p90")
ORDERING_COLUMNS = ("measure", "modes_used", "overlap")


class ResultsDatabase:
    """
    SQLite store for experiment records
    """

    def __init__(self, path: Path, echo: bool = False):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        LOGGER.info("Using local SQLite database at '%s'.", path)

        try:
            engine = sqlalchemy.create_engine(f"sqlite:///{path}", echo=echo)
            Base.metadata.create_all(engine)
        except sqlalchemy.exc.SQLAlchemyError as e:
            raise MultalignDatabaseError(f"Unable to open results database '{path}': {e}") from e

        self.engine = engine
        self.session_factory = sqlalchemy.orm.sessionmaker(bind=engine)

    @contextmanager
    def get_session(self) -> sqlalchemy.orm.session.Session:
        """
        Context manager for getting a database session
        """

        session = self.session_factory()

        try:
            yield session
            session.commit()
        except sqlalchemy.exc.SQLAlchemyError as e:
            session.rollback()
            raise MultalignDatabaseError(f"Database operation failed: {e}") from e
        except Exception:
            session.rollback()
            raise
        finally:
            session.close()

    def clear(self, experiment: str) -> None:
        """
        Remove previous records of an experiment so a rerun replaces them
        """

        with self.get_session() as session:
            for table in (RecoveryTrial, OrderingPoint):
                deleted = (
                    session.query(table)
                    .filter_by(experiment=experiment)
                    .delete(synchronize_session=False)
                )
                if deleted:
                    LOGGER.info(
                        "Deleted %d old %s rows for %s", deleted, table.__name__, experiment
                    )

    def add_recovery_records(self, experiment: str, records: Iterable) -> None:
        """
        Store every trial of every RecoveryRecord
        """

        with self.get_session() as session:
            session.add_all(
                RecoveryTrial(
                    experiment=experiment,
                    p=record.p,
                    q=record.q,
                    modes=record.modes,
                    method=record.method,
                    trial=trial,
                    recovery=value,
                )
                for record in records
                for trial, value in enumerate(record.recoveries)
            )

    def add_ordering_points(self, experiment: str, points: Iterable) -> None:
        """
        Store mode-ordering curve points
        """

        with self.get_session() as session:
            session.add_all(
                OrderingPoint(
                    experiment=experiment,
                    measure=point.measure,
                    modes_used=point.modes_used,
                    overlap=point.overlap,
                )
                for point in points
            )

    def recovery_frame(self, experiment: Optional[str] = None) -> pd.DataFrame:
        """
        Per-trial recoveries in long format
        """

        with self.get_session() as session:
            query = session.query(
                RecoveryTrial.p,
                RecoveryTrial.q,
                RecoveryTrial.modes.label("m"),
                RecoveryTrial.method,
                RecoveryTrial.trial,
                RecoveryTrial.recovery,
            ).order_by(RecoveryTrial.id)
            if experiment is not None:
                query = query.filter(RecoveryTrial.experiment == experiment)
            return pd.DataFrame([tuple(row) for row in query], columns=list(RECOVERY_COLUMNS))

    def summary_frame(self, experiment: Optional[str] = None) -> pd.DataFrame:
        """
        Mean and 10th/90th percentile recovery per cell and method
        """

        frame = self.recovery_frame(experiment)
        if frame.empty:
            return pd.DataFrame(columns=list(SUMMARY_COLUMNS))

        grouped = frame.groupby(["p", "q", "m", "method"], sort=False)["recovery"]
        summary = grouped.agg(
            mean="mean",
            p10=lambda values: np.percentile(values, 10),
            p90=lambda values: np.percentile(values, 90),
        )
        return summary.reset_index().reindex(columns=list(SUMMARY_COLUMNS))

    def ordering_frame(self, experiment: Optional[str] = None) -> pd.DataFrame:
        """
        Mode-ordering curves
        """

        with self.get_session() as session:
            query = session.query(
                OrderingPoint.measure, OrderingPoint.modes_used, OrderingPoint.overlap
            ).order_by(OrderingPoint.id)
            if experiment is not None:
                query = query.filter(OrderingPoint.experiment == experiment)
            return pd.DataFrame([tuple(row) for row in query], columns=list(ORDERING_COLUMNS))
