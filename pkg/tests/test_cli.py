import csv
import io
import json
from pathlib import Path

import pytest

from cli.checks import CRITERIA, family_rings, run_ring, run_suite
from cli.commands import build_parser, check_suite, main, render_csv
from cli import report as report_module
from cli.report import parse_checks, render_json, run_report
from utils.errors import DomainError

SCHEMA = Path(__file__).resolve().parent.parent / 'docs' / 'report_schema.json'


@pytest.fixture(autouse=True)
def small_degree(monkeypatch):
    monkeypatch.setenv('E2HOMLAB_DEGREE', '2')
    monkeypatch.delenv('E2HOMLAB_DB', raising=False)


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestReport:
    def test_report_to_stdout(self, capsys):
        assert main(['report', '--ring', 'GF(3)', '--deg', '1', '--checks', 'ring,complex']) == 0
        report = json.loads(capsys.readouterr().out)
        assert report['ring']['spec'] == 'GF(3)'
        assert report['ring']['size'] == 3
        assert report['complex']['degree'] == 1
        assert report['complex']['sizes'] == [4, 12]
        assert 'gw' not in report

    def test_report_to_file(self, tmp_path):
        out = tmp_path / 'gf5.json'
        assert main(['report', '--ring', 'GF(5)', '--deg', '2', '--checks', 'ring,gw',
                     '--out', str(out)]) == 0
        report = json.loads(out.read_text(encoding='utf-8'))
        assert report['ring']['square_classes'] == ['1', '2']
        assert 'gw' in report
        assert set(report['gw']['bar']['comparison']) == {'well_defined', 'surjective', 'bijective'}

    def test_keys_follow_schema(self):
        schema = json.loads(SCHEMA.read_text(encoding='utf-8'))
        report = run_report('GF(3)', 2, ('ring', 'complex', 'h1', 'cycles'), timing=True)
        assert set(schema['required']) <= set(report)
        assert set(report) <= set(schema['properties'])
        assert set(report['ring']) <= set(schema['properties']['ring']['properties'])
        assert set(report['h1']) <= set(schema['properties']['h1']['properties'])

    def test_tilde_mu_of_cyclic_units(self):
        section = run_report('GF(7)', 1, ('ring',))['ring']['tilde_mu']
        assert section == {'mu': [6], 'group': [12]}

    def test_tilde_mu_needs_cyclic_units(self):
        section = run_report('Z/8', 1, ('ring',))['ring']['tilde_mu']
        assert section['mu'] == [2, 2]
        assert section['group'] is None
        assert 'not cyclic' in section['reason']

    def test_cycles_are_spelled_in_generators(self):
        cycles = run_report('GF(3)', 2, ('cycles',))['cycles']
        f = cycles['representatives']['F']
        assert f['arguments'] == ['2', '2']
        words = [w for term in f['terms'] for w in term['words']]
        assert words
        assert all(w == '1' or w.startswith(('E12(', 'E21(')) for w in words)
        assert all(len(term['matrices']) == 2 for term in f['terms'])
        assert cycles['F']['passed'] == cycles['F']['total']

    def test_shuffle_errors_outside_the_domain_propagate(self, monkeypatch):
        def fail(error):
            def shuffle(c, z):
                raise error
            return shuffle

        monkeypatch.setattr(report_module, 'shuffle_product', fail(DomainError("generators do not commute")))
        assert report_module._shuffles(None, None) is False
        monkeypatch.setattr(report_module, 'shuffle_product', fail(ZeroDivisionError("integer division")))
        with pytest.raises(ZeroDivisionError):
            report_module._shuffles(None, None)

    def test_timing_is_opt_in(self):
        plain = run_report('GF(2)', 1, ('ring',))
        timed = run_report('GF(2)', 1, ('ring',), timing=True)
        assert 'timing' not in plain
        assert timed['timing']['rss_bytes'] > 0

    def test_render_is_deterministic(self):
        checks = ('ring', 'complex', 'h1')
        assert render_json(run_report('Z/4', 2, checks)) == render_json(run_report('Z/4', 2, checks))

    def test_invalid_spec_exits_2(self, capsys):
        assert main(['report', '--ring', 'GF(6)']) == 2
        assert 'invalid ring spec' in capsys.readouterr().err

    def test_ring_over_cap_exits_3(self):
        assert main(['report', '--ring', 'GF(5)', '--cap', '4']) == 3

    def test_degree_out_of_range(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(['report', '--ring', 'GF(5)', '--deg', '5'])

    def test_unknown_section_exits_2(self):
        assert main(['report', '--ring', 'GF(5)', '--checks', 'ring,nope']) == 2

    def test_check_aliases(self):
        assert parse_checks('d1,d2') == ('differentials',)
        assert parse_checks('all') == parse_checks(None)
        assert parse_checks('gw,ring') == ('ring', 'gw')


class TestRings:
    def test_family_listing(self, capsys):
        assert main(['rings']) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith('fields-small: GF(2), GF(3)')
        assert len(lines) == 4

    def test_describe_ring(self, capsys):
        assert main(['rings', '--ring', 'Z/4']) == 0
        section = json.loads(capsys.readouterr().out)
        assert section['spec'] == 'Z/4'
        assert section['universal']
        assert not section['two_invertible']

    def test_history_needs_store(self):
        assert main(['rings', '--history']) == 2


class TestCheck:
    def test_family_csv(self, tmp_path):
        out = tmp_path / 'checks.csv'
        code = main(['check', '--family', 'local-char2', '--checks', '2,4,7', '--out', str(out)])
        text = out.read_text(encoding='utf-8')
        assert text.splitlines()[0] == 'ring,criterion,expected,got,verdict,millis'
        rows = _rows(text)
        assert len(rows) == 9
        assert [r['ring'] for r in rows[:3]] == ['Z/4'] * 3
        assert {r['verdict'] for r in rows if r['criterion'] == '7-cycles'} == {'skipped'}
        assert code == 0

    def test_stored_run(self, tmp_path, capsys):
        db = tmp_path / 'results.db'
        assert main(['check', '--family', 'local-char2', '--checks', '4', '--db', str(db)]) == 0
        capsys.readouterr()
        assert main(['rings', '--history', '--db', str(db)]) == 0
        (run,) = json.loads(capsys.readouterr().out)
        assert run['status'] == 'pass'
        assert run['passed'] == 3

    def test_unknown_criterion(self):
        assert main(['check', '--family', 'local-char2', '--checks', '99']) == 2

    def test_unknown_family(self):
        assert main(['check', '--family', 'nope']) == 2


class TestSuite:
    def test_criteria_are_numbered(self):
        assert len(CRITERIA) == 13
        assert list(CRITERIA)[0] == '1-h0'
        assert list(CRITERIA)[-1] == '13-determinism'

    def test_run_ring(self):
        rows = run_ring('GF(3)', ['1-h0', '2-h1', '7-cycles'])
        assert [r.verdict for r in rows] == ['pass', 'pass', 'pass']

    def test_capped_ring_is_skipped(self, testing_config):
        testing_config.update_value('ring_size_cap', 2)
        rows = run_ring('GF(5)', ['2-h1'])
        assert rows[0].verdict == 'skipped'

    def test_render_csv_drops_detail(self):
        rows = run_ring('GF(2)', ['7-cycles'])
        assert rows[0].verdict == 'skipped'
        assert 'detail' not in render_csv(rows).splitlines()[0]

    def test_serial_and_parallel_rows_agree(self, testing_config):
        selected = ['2-h1', '4-d1']
        serial = [(r.ring, r.criterion, r.got, r.verdict) for r in run_suite('local-char2', 1, selected)]
        parallel = [(r.ring, r.criterion, r.got, r.verdict)
                    for r in run_suite('local-char2', 2, selected, testing_config.overrides)]
        assert serial == parallel

    def test_family_rings(self):
        assert family_rings('local-odd') == ['Z/9', 'Z/25', 'Z/27']
        assert len(family_rings('all')) == 17
        with pytest.raises(ValueError):
            family_rings('nope')


def test_check_suite_direct(tmp_path):
    out = tmp_path / 'd1.csv'
    assert check_suite('local-odd', '4', out=str(out)) == 0
    assert [r['ring'] for r in _rows(out.read_text(encoding='utf-8'))] == ['Z/9', 'Z/25', 'Z/27']
