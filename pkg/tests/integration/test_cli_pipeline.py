"""Integration tests for the command-line pipelines end to end."""
import json
import os
import tempfile

import pytest
import yaml

from main import main
from src.cli.commands import cmd_verify_sphere
from src.cli.run_config import RunConfig, SphereSettings
from src.ncalg.laurent import q_power
from src.ncalg.rewriting import RULES, corrupt_rule

SMALL_SPHERE = {
    'n1': 10,
    'n2': 10,
    'words': 20,
    'word_length': 4,
    'confluence_words': 30,
    'confluence_length': 6,
    'relation_pairs': 5,
}


def without_wall_time(data):
    data = dict(data)
    data.pop('wall_time')
    return data


@pytest.mark.integration
class TestCommandLine:
    """main() from argv to exit code and rendered report."""

    @pytest.fixture
    def config_path(self):
        """Temporary config with a small sphere grid and no log file."""
        config = {
            'run': {'k': 1, 'l': 2, 'd': 2, 'q': 0.5, 'dim': 300, 'seed': 7},
            'sphere': SMALL_SPHERE,
            'logging': {'level': 'WARNING', 'log_dir': None},
        }
        with tempfile.NamedTemporaryFile(mode='w', suffix='.yaml', delete=False) as f:
            yaml.dump(config, f)
            path = f.name

        yield path

        if os.path.exists(path):
            os.remove(path)

    def test_non_coprime_weights_are_a_usage_error(self, config_path, capsys):
        assert main(['bundle-check', '-k', '2', '-l', '4', '--config', config_path]) == 2
        assert 'not coprime' in capsys.readouterr().err

    def test_invalid_config_file_is_a_usage_error(self, tmp_path):
        path = tmp_path / 'bad.yaml'
        path.write_text(yaml.dump({'run': {'q': 1.5}}))
        assert main(['pairing', '--config', str(path)]) == 2

    def test_verify_sphere_passes(self, config_path, capsys):
        assert main(['verify-sphere', '--config', config_path]) == 0
        out = capsys.readouterr().out
        assert out.startswith('verify-sphere: PASS (exit 0)')
        assert '[PASS] confluence' in out

    def test_term_budget_from_config_is_uncertified(self, tmp_path, capsys):
        path = tmp_path / 'tight.yaml'
        path.write_text(yaml.dump({
            'run': {'k': 1, 'l': 2, 'd': 2},
            'ncalg': {'max_terms': 1},
            'logging': {'level': 'WARNING', 'log_dir': None},
        }))
        assert main(['bundle-check', '--format', 'json', '--config', str(path)]) == 3
        data = json.loads(capsys.readouterr().out)
        partition = next(c for c in data['checks'] if c['name'] == 'partition_of_unity')
        assert partition['status'] == 'error'
        assert partition['detail'].startswith('ResourceLimitError: ')
        assert data['config']['k'] == 1

    def test_malformed_thread_cap_is_a_usage_error(self, config_path, monkeypatch, capsys):
        monkeypatch.setenv('QNC_THREADS', 'abc')
        assert main(['pairing', '--config', config_path]) == 2
        assert 'QNC_THREADS' in capsys.readouterr().err

    @pytest.mark.parametrize('seed', [1, 2, 3, 11])
    def test_verify_sphere_passes_for_other_seeds(self, config_path, seed):
        assert main(['verify-sphere', '--seed', str(seed), '--config', config_path]) == 0

    def test_bundle_check_passes(self, config_path, capsys):
        assert main(['bundle-check', '--format', 'json', '--config', config_path]) == 0
        data = json.loads(capsys.readouterr().out)
        names = {check['name'] for check in data['checks']}
        assert {'partition_of_unity', 'power_certificate', 'idempotent_plus',
                'idempotent_minus', 'lens_membership'} <= names
        assert data['status'] == 'pass'

    def test_pairing_passes(self, config_path, capsys):
        assert main(['pairing', '--format', 'json', '--config', config_path]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data['details']['M'] == [[1, 0, 0], [1, 1, 0], [1, 0, 1]]

    def test_pairing_at_small_dimension_is_uncertified(self, config_path, capsys):
        code = main(['pairing', '--dim', '32', '--q', '0.9', '--format', 'json',
                     '--config', config_path])
        assert code == 3
        data = json.loads(capsys.readouterr().out)
        assert data['exit_code'] == 3
        assert any(check['status'] == 'error' for check in data['checks'])

    def test_kgroups_closed_form_to_file(self, config_path, tmp_path):
        out = tmp_path / 'reports' / 'kgroups.json'
        code = main(['kgroups', '--closed-form', '-l', '3', '-k', '2', '-d', '3',
                     '--format', 'json', '--out', str(out), '--config', config_path])
        assert code == 0
        data = json.loads(out.read_text(encoding='utf-8'))
        assert data['details']['K0'] == 'Z^3 ⊕ Z/3'
        assert data['details']['K1_hom'] == 'Z^3 ⊕ Z/3'
        assert data['config']['closed_form'] is True

    def test_kgroups_from_certified_matrix(self, config_path, capsys):
        assert main(['kgroups', '-d', '4', '--config', config_path]) == 0
        out = capsys.readouterr().out
        assert '[PASS] kgroups: M from certified' in out

    def test_text_and_json_verdicts_agree(self, config_path, capsys):
        main(['kgroups', '--closed-form', '--config', config_path])
        text = capsys.readouterr().out
        main(['kgroups', '--closed-form', '--format', 'json', '--config', config_path])
        data = json.loads(capsys.readouterr().out)
        for check in data['checks']:
            assert f"[{check['status'].upper()}] {check['name']}" in text

    @pytest.mark.slow
    def test_report_is_deterministic(self, config_path, tmp_path):
        first, second = tmp_path / 'first.json', tmp_path / 'second.json'
        assert main(['report', '--format', 'json', '--out', str(first), '--config', config_path]) == 0
        assert main(['report', '--format', 'json', '--out', str(second), '--config', config_path]) == 0
        a = json.loads(first.read_text(encoding='utf-8'))
        b = json.loads(second.read_text(encoding='utf-8'))
        assert without_wall_time(a) == without_wall_time(b)
        assert {check['name'].split('.')[0] for check in a['checks']} == {
            'sphere', 'bundle', 'pairing', 'kgroups'}


@pytest.mark.integration
class TestCorruptedRewriting:
    """A broken rule must be caught and named."""

    def test_corrupted_rule_fails_verify_sphere(self):
        run = RunConfig(k=1, l=2, sphere=SphereSettings(**SMALL_SPHERE))
        report = cmd_verify_sphere(run, corrupt_rule(RULES, 'z1_z0', q_power(1)))
        soundness = next(r for r in report.records if r.name == 'rule_soundness')
        assert soundness.status == 'fail'
        assert 'z1_z0' in soundness.detail
        assert report.exit_code == 1


@pytest.mark.integration
@pytest.mark.slow
class TestFullScaleSphere:
    """verify-sphere with the default word suites and oracle grid."""

    def test_default_suites_pass(self):
        run = RunConfig(k=1, l=2)
        report = cmd_verify_sphere(run)
        by_name = {r.name: r for r in report.records}

        assert report.exit_code == 0
        assert run.sphere.confluence_words == 500
        assert run.sphere.words == 200
        assert by_name['confluence'].evidence['failures'] == 0
        assert by_name['numeric_oracle'].evidence['max_residual'] < 1e-9
