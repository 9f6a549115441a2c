import sqlite3

import pytest

from database.db_manager import ResultStore
from database.migrations import MIGRATIONS, Migration, MigrationManager


def _row(ring, criterion, verdict, got='x'):
    return {'ring': ring, 'criterion': criterion, 'expected': 'x', 'got': got,
            'verdict': verdict, 'millis': 3}


@pytest.fixture
def store(tmp_path):
    result_store = ResultStore(str(tmp_path / 'data' / 'results.db'))
    assert result_store.initialize()
    return result_store


def test_store_needs_a_path():
    with pytest.raises(ValueError):
        ResultStore('')


def test_migrations_are_recorded(store):
    manager = MigrationManager(store.db_path)
    assert manager.get_current_version() == manager.latest_version == 3
    # a second pass is a no-op
    assert manager.apply_migrations()
    assert store.initialize()


def test_first_migration_creates_schema(tmp_path):
    db = str(tmp_path / 'step1.db')
    manager = MigrationManager(db, MIGRATIONS[:1])
    assert manager.apply_migrations()
    with sqlite3.connect(db) as conn:
        tables = {row[0] for row in conn.execute("SELECT name FROM sqlite_master WHERE type='table'")}
        columns = {row[1] for row in conn.execute("PRAGMA table_info(check_results)")}
    assert {'runs', 'check_results', 'migrations'} <= tables
    assert 'detail' not in columns
    # the remaining steps upgrade in place
    assert MigrationManager(db).apply_migrations()
    assert MigrationManager(db).get_current_version() == 3


def test_failing_step_stops_the_upgrade(tmp_path):
    db = str(tmp_path / 'broken.db')
    steps = MIGRATIONS[:1] + (Migration(2, "Broken step", ("ALTER TABLE nowhere ADD COLUMN x TEXT",)),)
    manager = MigrationManager(db, steps)
    assert not manager.apply_migrations()
    assert manager.get_current_version() == 1


def test_detail_column_exists(store):
    with sqlite3.connect(store.db_path) as conn:
        columns = {row[1] for row in conn.execute("PRAGMA table_info(check_results)")}
    assert 'detail' in columns


def test_run_lifecycle(store):
    run_id = store.start_run('fields-small', 2, '0.3.0')
    assert store.record_results(run_id, [_row('GF(2)', '1-h0', 'pass'),
                                         _row('GF(2)', '7-cycles', 'skipped')]) == 2
    assert store.finish_run(run_id, 'pass')
    run = store.get_run(run_id)
    assert run['status'] == 'pass'
    assert run['finished_at']
    results = store.get_run_results(run_id)
    assert [r['criterion'] for r in results] == ['1-h0', '7-cycles']
    assert results[0]['detail'] == ''


def test_missing_run(store):
    assert store.get_run(42) is None
    assert not store.finish_run(42, 'pass')


def test_latest_runs_counts_verdicts(store):
    first = store.start_run('products', 1, '0.3.0')
    store.record_results(first, [_row('Z/6', '1-h0', 'pass'), _row('Z/6', '2-h1', 'fail')])
    second = store.start_run('products', 1, '0.3.0')
    runs = store.latest_runs()
    assert [r['id'] for r in runs] == [second, first]
    assert (runs[1]['passed'], runs[1]['failed'], runs[1]['skipped']) == (1, 1, 0)
    assert len(store.latest_runs(limit=1)) == 1


def test_compare_runs(store):
    first = store.start_run('local-char2', 1, '0.3.0')
    store.record_results(first, [_row('Z/4', '1-h0', 'pass'), _row('Z/4', '2-h1', 'pass', '[4]')])
    second = store.start_run('local-char2', 1, '0.3.0')
    store.record_results(second, [_row('Z/4', '1-h0', 'pass'), _row('Z/4', '2-h1', 'fail', '[2]'),
                                  _row('Z/8', '1-h0', 'pass')])
    differences = store.compare_runs(first, second)
    assert differences == [
        {'ring': 'Z/4', 'criterion': '2-h1', 'first': 'pass', 'second': 'fail'},
        {'ring': 'Z/8', 'criterion': '1-h0', 'first': None, 'second': 'pass'},
    ]
