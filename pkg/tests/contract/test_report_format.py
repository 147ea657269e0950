"""Contract tests for the JSON and text report formats."""
import json

import pytest

from src.cli.commands import cmd_kgroups
from src.cli.report import SCHEMA
from src.cli.run_config import RunConfig


@pytest.fixture
def kgroups_report():
    """Closed-form kgroups report for the (2, 3, 3) lens space."""
    return cmd_kgroups(RunConfig(k=2, l=3, d=3, closed_form=True))


@pytest.mark.contract
def test_report_top_level_keys(kgroups_report):
    """Test that a JSON report carries exactly the documented keys."""
    # Execute
    data = json.loads(kgroups_report.to_json())

    # Assert
    assert set(data) == {'schema', 'command', 'config', 'checks', 'details',
                         'status', 'exit_code', 'wall_time'}
    assert data['schema'] == SCHEMA
    assert data['command'] == 'kgroups'
    assert data['status'] in ('pass', 'fail')
    assert isinstance(data['wall_time'], float)


@pytest.mark.contract
def test_check_record_keys(kgroups_report):
    """Test that every check record has name, status, detail, evidence and exit code."""
    data = json.loads(kgroups_report.to_json())

    for check in data['checks']:
        assert set(check) == {'name', 'status', 'detail', 'evidence', 'exit_code'}
        assert check['status'] in ('pass', 'fail', 'error')
        assert check['exit_code'] in (0, 1, 2, 3)

    names = [check['name'] for check in data['checks']]
    assert names == sorted(names)


@pytest.mark.contract
def test_config_echo(kgroups_report):
    """Test that the run configuration is echoed into the report."""
    config = json.loads(kgroups_report.to_json())['config']

    assert (config['k'], config['l'], config['d']) == (2, 3, 3)
    assert config['closed_form'] is True
    assert {'sphere', 'certification', 'q', 'N', 'seed'} <= set(config)


@pytest.mark.contract
def test_json_is_canonical(kgroups_report):
    """Test that JSON output uses sorted keys, two-space indent and a trailing newline."""
    text = kgroups_report.to_json()

    assert text.endswith('\n') and not text.endswith('\n\n')
    assert text.startswith('{\n  "checks": [')
    assert text == json.dumps(json.loads(text), indent=2, sort_keys=True, ensure_ascii=False) + '\n'


@pytest.mark.contract
def test_kgroups_evidence_shape(kgroups_report):
    """Test that K-group evidence is rank plus torsion invariants."""
    data = json.loads(kgroups_report.to_json())
    record = next(c for c in data['checks'] if c['name'] == 'kgroups')

    assert record['evidence']['computed']['K0'] == {'rank': 3, 'torsion': [3]}
    assert record['evidence']['expected']['K1'] == {'rank': 3, 'torsion': []}
    assert data['details']['K0'] == 'Z^3 ⊕ Z/3'


@pytest.mark.contract
def test_text_header_and_footer(kgroups_report):
    """Test that the text report starts with the verdict and ends with the wall time."""
    lines = kgroups_report.to_text().splitlines()

    assert lines[0] == 'kgroups: PASS (exit 0)'
    assert lines[-1].startswith('  wall time ')
    assert lines[-1].endswith(' s')
