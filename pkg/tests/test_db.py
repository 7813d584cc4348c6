import pytest

from src.consts import Scenario
from src.db import db_funcs, db_session
from src.mms import NORMS, ErrorReport, LevelErrors, convergence_rates
from src.scenarios import default_config
from src.utils.solver.exceptions import ConfigError


@pytest.fixture
def results_db(tmp_path):
    path = tmp_path / 'db' / 'results.db'
    db_session.global_init(path)
    return path


@pytest.fixture
def report():
    return ErrorReport([
        LevelErrors(0, 0.35, 0.33, 0.25, 0.33, dict.fromkeys(NORMS, 0.2), 1.0),
        LevelErrors(1, 0.18, 0.17, 0.125, 0.17, dict.fromkeys(NORMS, 0.1), 2.5),
    ])


def test_save_and_read_convergence_report(results_db, report):
    cfg = default_config(Scenario.EXAMPLE1)._replace(levels=2)
    run_id = db_funcs.save_convergence_report(
        cfg, report, convergence_rates(report)
    )

    run = db_funcs.get_run(run_id)
    assert results_db.is_file()
    assert run.scenario == 'example1'
    assert run.levels == 2
    assert run.convection_on is True
    assert run.dt == cfg.dt

    results = db_funcs.get_level_results(run_id)
    assert len(results) == 2 * len(NORMS)
    assert [r.level for r in results] == sorted(r.level for r in results)


def test_level_results_by_field(results_db, report):
    cfg = default_config(Scenario.CUSTOM)
    run_id = db_funcs.save_convergence_report(
        cfg, report, convergence_rates(report)
    )
    results = db_funcs.get_level_results(run_id, field='u_f')

    assert [r.level for r in results] == [0, 1]
    assert results[0].rate is None
    assert results[1].rate == pytest.approx(1.0, rel=0.2)
    assert results[1].error == pytest.approx(0.1)
    assert results[1].iterations == pytest.approx(2.5)


def test_list_runs_by_scenario(results_db, report):
    rates = convergence_rates(report)
    first = db_funcs.save_convergence_report(
        default_config(Scenario.EXAMPLE1), report, rates
    )
    second = db_funcs.save_convergence_report(
        default_config(Scenario.CUSTOM), report, rates
    )

    assert [run.id for run in db_funcs.list_runs()] == [first, second]
    assert [run.id for run in db_funcs.list_runs('custom')] == [second]
    assert db_funcs.list_runs('example2') == []
    assert db_funcs.get_run(second + 100) is None


def test_report_without_rates(results_db, report):
    run_id = db_funcs.save_convergence_report(
        default_config(Scenario.EXAMPLE1), report, {}
    )

    assert all(r.rate is None for r in db_funcs.get_level_results(run_id))


@pytest.mark.parametrize('path', ['', '   '])
def test_empty_database_path_rejected(path):
    with pytest.raises(ConfigError):
        db_session.global_init(path)


def test_export_run(results_db, report):
    run_id = db_funcs.save_convergence_report(
        default_config(Scenario.EXAMPLE1), report, convergence_rates(report)
    )
    exported = db_funcs.export_run(run_id)

    assert exported['id'] == run_id
    assert exported['scenario'] == 'example1'
    assert len(exported['results']) == 2 * len(NORMS)
    assert exported['results'][0]['run_id'] == run_id
    assert db_funcs.export_run(run_id + 1) is None
    assert repr(db_funcs.get_run(run_id)).startswith(f'<Run(id={run_id}, ')
