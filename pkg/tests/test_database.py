# Licensed under the MIT License.
"""
Tests for the results database
"""

import pytest

from multalign.database.driver import ResultsDatabase
from multalign.experiments import RecoveryRecord
from multalign.experiments.runner import OrderingPoint


@pytest.fixture
def database(tmp_path):
    """Empty results database in a temporary directory"""
    return ResultsDatabase(tmp_path / "nested" / "results.db")


def records():
    """Two cells of three trials each"""
    return [
        RecoveryRecord(0.0, 0.1, 6, "msd", (1.0, 0.5, 0.75)),
        RecoveryRecord(0.0, 0.1, 6, "pairwise", (0.5, 0.5, 0.5)),
        RecoveryRecord(0.2, 0.1, 6, "msd", (0.25, 0.25, 1.0)),
    ]


def test_recovery_round_trip(database):
    database.add_recovery_records("grid", records())
    frame = database.recovery_frame("grid")

    assert list(frame.columns) == ["p", "q", "m", "method", "trial", "recovery"]
    assert len(frame) == 9
    assert frame.trial.tolist()[:3] == [0, 1, 2]
    assert frame.recovery.tolist()[:3] == [1.0, 0.5, 0.75]
    assert set(frame.m) == {6}


def test_summary(database):
    database.add_recovery_records("grid", records())
    summary = database.summary_frame("grid")

    assert list(summary.columns) == ["p", "q", "m", "method", "mean", "p10", "p90"]
    assert summary.method.tolist() == ["msd", "pairwise", "msd"]
    assert summary["mean"].tolist() == pytest.approx([0.75, 0.5, 0.5])
    assert summary.p10.iloc[1] == pytest.approx(0.5)
    assert summary.p90.iloc[0] == pytest.approx(0.95)


def test_empty_summary(database):
    assert database.summary_frame().empty
    assert database.ordering_frame().empty


def test_clear_keeps_other_experiments(database):
    database.add_recovery_records("grid", records())
    database.add_recovery_records("modes", records()[:1])
    database.add_ordering_points("ordering", [OrderingPoint("density", 1, 10)])

    database.clear("grid")
    assert database.recovery_frame("grid").empty
    assert len(database.recovery_frame("modes")) == 3
    assert len(database.recovery_frame()) == 3
    assert len(database.ordering_frame("ordering")) == 1


def test_ordering_round_trip(database):
    points = [OrderingPoint("edge_count", 1, 12), OrderingPoint("edge_count", 2, 20)]
    database.add_ordering_points("ordering", points)
    frame = database.ordering_frame("ordering")

    assert list(frame.columns) == ["measure", "modes_used", "overlap"]
    assert frame.values.tolist() == [["edge_count", 1, 12], ["edge_count", 2, 20]]


def test_reopen(tmp_path):
    path = tmp_path / "results.db"
    ResultsDatabase(path).add_recovery_records("grid", records())
    assert len(ResultsDatabase(path).recovery_frame()) == 9
