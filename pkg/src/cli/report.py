"""Check records, reports and their text/JSON rendering."""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional
import json
import logging
import time

from src.errors import (
    CertificationError, PairingMismatchError, QncError, ResourceLimitError, UsageError,
)

logger = logging.getLogger(__name__)

SCHEMA = 'qnc-report/1'

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CERTIFICATION = 3

PASS = 'pass'
FAIL = 'fail'
ERROR = 'error'


@dataclass
class CheckRecord:
    name: str
    status: str
    detail: str = ''
    evidence: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = EXIT_PASS

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'status': self.status, 'detail': self.detail,
                'evidence': self.evidence, 'exit_code': self.exit_code}


@dataclass
class Report:
    command: str
    config: Dict[str, Any]
    records: List[CheckRecord] = field(default_factory=list)
    wall_time: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed: bool, detail: str = '', **evidence) -> CheckRecord:
        record = CheckRecord(name, PASS if passed else FAIL, detail, evidence,
                             EXIT_PASS if passed else EXIT_FAIL)
        self.records.append(record)
        if passed:
            logger.info(f"Check {name} passed {detail}".rstrip())
        else:
            logger.error(f"Check {name} failed: {detail}")
        return record

    def run_check(self, name: str, check: Callable[[], Optional[CheckRecord]]):
        """
        Run one check, turning library errors into records.

        CertificationError and ResourceLimitError -> error/3 (value not
        determined), UsageError -> error/2, PairingMismatchError -> fail/1,
        any other QncError -> error/1.
        """
        try:
            check()
        except CertificationError as e:
            self._error(name, str(e), EXIT_CERTIFICATION)
        except ResourceLimitError as e:
            self._error(name, f"{type(e).__name__}: {e}", EXIT_CERTIFICATION)
        except UsageError as e:
            self._error(name, f"{type(e).__name__}: {e}", EXIT_USAGE)
        except PairingMismatchError as e:
            self.records.append(CheckRecord(name, FAIL, str(e), {}, EXIT_FAIL))
            logger.error(f"Check {name} failed: {e}")
        except QncError as e:
            self._error(name, f"{type(e).__name__}: {e}", EXIT_FAIL)

    def _error(self, name: str, message: str, code: int):
        self.records.append(CheckRecord(name, ERROR, message, {}, code))
        logger.error(f"Check {name} errored: {message}")

    def merge(self, other: 'Report', prefix: str):
        for record in other.records:
            self.records.append(CheckRecord(f'{prefix}.{record.name}', record.status, record.detail,
                                            record.evidence, record.exit_code))
        if other.details:
            self.details[prefix] = other.details

    @property
    def passed(self) -> bool:
        return all(r.status == PASS for r in self.records)

    @property
    def exit_code(self) -> int:
        return max((r.exit_code for r in self.records), default=EXIT_PASS)

    def sorted_records(self) -> List[CheckRecord]:
        return sorted(self.records, key=lambda r: r.name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema': SCHEMA,
            'command': self.command,
            'config': self.config,
            'checks': [r.to_dict() for r in self.sorted_records()],
            'details': self.details,
            'status': PASS if self.passed else FAIL,
            'exit_code': self.exit_code,
            'wall_time': round(self.wall_time, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + '\n'

    def to_text(self) -> str:
        lines = [f"{self.command}: {'PASS' if self.passed else 'FAIL'} (exit {self.exit_code})"]
        for record in self.sorted_records():
            line = f"  [{record.status.upper()}] {record.name}"
            if record.detail:
                line += f": {record.detail}"
            lines.append(line)
        for section, values in sorted(self.details.items()):
            if not isinstance(values, dict):
                lines.append(f"  {section} = {values}")
                continue
            lines.append(f"  {section}:")
            for key, value in sorted(values.items()):
                lines.append(f"    {key} = {value}")
        lines.append(f"  wall time {self.wall_time:.2f} s")
        return '\n'.join(lines) + '\n'

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == 'json' else self.to_text()


class Stopwatch:
    """Context manager recording wall time into a report."""

    def __init__(self, report: Report):
        self.report = report

    def __enter__(self):
        self.start = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.wall_time = time.perf_counter() - self.start
        return False
