"""
Tests for the ql command line

Run with: pytest tests/ -v
"""

import json

import pytest

from quarticlines.interfaces.cli.main import build_parser, run


@pytest.fixture(autouse=True)
def environment(monkeypatch, tmp_path):
    monkeypatch.setenv('QL_JOBS', '1')
    monkeypatch.setenv('QL_CHECKPOINT_DIR', str(tmp_path))
    monkeypatch.delenv('REDIS_URL', raising=False)


def _json(capsys, argv):
    assert run(['--format', 'json'] + argv) == 0
    return json.loads(capsys.readouterr().out)


class TestParser:
    """Subcommands and global flags"""

    @pytest.mark.parametrize('argv', [
        ['lattice', '--lattice', 'A2'],
        ['vec', '--lattice', 'A2', '--class', 'zero'],
        ['bnd', '--lattice', 'A2', '--class', 'zero'],
        ['classify', '--lattice', 'A2'],
        ['pipeline', '--series', 'X'],
        ['elkies', '--series', 'T'],
        ['betti', '--series', 'T'],
        ['tseries', '--config', 'V19'],
        ['report'],
        ['regress'],
    ])
    def test_subcommands(self, argv):
        assert build_parser().parse_args(argv).command == argv[0]

    def test_no_command_prints_help(self, capsys):
        assert run([]) == 2
        assert 'usage' in capsys.readouterr().out

    def test_bad_choice_is_a_usage_error(self):
        assert run(['--format', 'yaml', 'betti', '--series', 'T']) == 2


class TestCommands:
    """Each subcommand on a small input"""

    def test_lattice(self, capsys):
        data = _json(capsys, ['lattice', '--lattice', 'E7'])
        assert data['rank'] == 7
        assert data['order'] == 2

    def test_lattice_candidates(self, capsys):
        data = _json(capsys, ['lattice', '--candidates', 'T'])
        assert {row['lattice']: row['lambda_count'] for row in data} == {
            'A11': 12, 'E8+A2+D1': 3, 'D9+A2': 0}

    def test_vec_d4_lambda(self, capsys):
        data = _json(capsys, ['vec', '--lattice', 'D4', '--class', 'lambda', '--series', 'X2,0'])
        assert data['count'] == 8

    def test_vec_roots_as_csv(self, capsys):
        assert run(['--format', 'csv', 'vec', '--lattice', 'A2', '--class', 'zero']) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert out[0] == 'coords,norm'
        assert len(out) == 7

    def test_bnd(self, capsys):
        assert run(['bnd', '--lattice', 'A2', '--class', 'zero']) == 0
        assert capsys.readouterr().out.strip() == '3'

    def test_classify(self, capsys):
        data = _json(capsys, ['classify', '--lattice', 'A2', '--class', 'zero'])
        assert data['vectors'] == 6
        assert all(s['size'] == 3 for s in data['sets'])
        assert [s['shape']['dynkin'] for s in data['shapes']] == ['~A2']

    def test_classify_dot(self, capsys):
        assert run(['--format', 'dot', 'classify', '--lattice', 'A2', '--class', 'zero']) == 0
        assert capsys.readouterr().out.startswith('graph shape_1 {')

    def test_elkies_series(self, capsys):
        data = _json(capsys, ['elkies', '--series', 'T'])
        assert data['total'] == 34

    def test_elkies_direct(self, capsys):
        assert run(['elkies', '--n', '11', '--q0=-9/4']) == 0
        assert capsys.readouterr().out.strip() == '22 → 22'

    def test_betti(self, capsys):
        assert run(['betti', '--series', 'T']) == 0
        assert capsys.readouterr().out.strip() == '13'
        assert run(['betti', '--singularities', 'X9', 'X9', '--q', '1']) == 0
        assert capsys.readouterr().out.strip() == '6'

    def test_tseries_analyze(self, capsys):
        data = _json(capsys, ['tseries', '--config', 'V19', '--analyze'])
        assert data['snf']['rank'] == 11
        assert data['sum_relation'] is True

    def test_tseries_realize_one_group(self, capsys):
        data = _json(capsys, ['tseries', '--config', 'V19', '--realize', '--group', 'Ga'])
        assert [v['status'] for v in data['verdicts']] == ['impossible-distinct']

    def test_report_csv(self, capsys):
        assert run(['--format', 'csv', 'report', '--table', '1', '--no-bounds']) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert len(out) == 5

    def test_report_runs(self, capsys):
        data = _json(capsys, ['report', '--runs'])
        assert data['runs'] == []

    def test_regress_fast(self, capsys, tmp_path):
        manifest = tmp_path / 'manifest.json'
        assert run(['regress', '--manifest', str(manifest)]) == 0
        assert 'checks' in capsys.readouterr().out
        assert json.loads(manifest.read_text())


class TestErrors:
    """Usage errors exit with 2 and a message on stderr"""

    @pytest.mark.parametrize('argv', [
        ['bnd', '--lattice', 'X5', '--class', 'zero'],
        ['elkies', '--n', '3'],
        ['elkies', '--series', 'T', '--singularities', 'nonsense'],
        ['lattice'],
        ['pipeline', '--series', 'T'],
        ['--format', 'dot', 'betti', '--series', 'T'],
        ['tseries', '--config', 'V99'],
        ['classify', '--lattice', 'A2', '--class', 'zero', '--strategy', 'largest-first'],
    ])
    def test_exit_code(self, capsys, argv):
        assert run(argv) == 2
        assert capsys.readouterr().err.startswith('❌')
