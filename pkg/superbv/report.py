import json
import logging
import time
from dataclasses import dataclass, field

import pandas as pd

log = logging.getLogger(__file__)


@dataclass
class CheckResult:
    """
        Outcome of one exact verification.

        # Parameters
            name: basestring
                unique check name, e.g. `atlas.inverse.U0-U1`.
            passed: bool
                verdict.
            anchor: basestring
                the statement the check verifies.
            residual: basestring
                exact residual in the textual scalar syntax (empty when zero).
            data: dict
                JSON-serializable payload (classes, witnesses, tables).
            elapsed: float
                wall time in seconds.
    """
    name: str
    passed: bool
    anchor: str = ''
    residual: str = ''
    data: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def to_dict(self):
        return {'name': self.name, 'status': 'pass' if self.passed else 'fail', 'anchor': self.anchor,
                'residual': self.residual, 'data': self.data, 'elapsed': round(self.elapsed, 6)}


def timed(fn, *args, **kwargs):
    """
        Runs a checker returning a `CheckResult` (or a list of them) and stamps the elapsed time.
    """
    start = time.perf_counter()
    results = fn(*args, **kwargs)
    elapsed = time.perf_counter() - start
    many = isinstance(results, (list, tuple))
    results = list(results) if many else [results]
    for result in results:
        result.elapsed = elapsed / max(len(results), 1)
    return results if many else results[0]


class Report:
    """
        Collection of check records with the configuration echo and the tool version.

        The overall verdict is `pass` iff every record passes. Records are kept sorted by name.
    """

    def __init__(self, command, config=None, version=None):
        from . import __version__
        self.command = command
        self.config = dict(config or {})
        self.version = version or __version__
        self._checks = {}

    def add(self, result):
        if result.name in self._checks:
            raise ValueError('Duplicate check name "{}".'.format(result.name))
        self._checks[result.name] = result
        log.info('{}: {}'.format(result.name, 'pass' if result.passed else 'FAIL'))
        return result

    def extend(self, results):
        for result in results:
            self.add(result)

    def merge(self, other):
        self.extend(other.checks)

    @property
    def checks(self):
        return [self._checks[name] for name in sorted(self._checks)]

    def __getitem__(self, name):
        return self._checks[name]

    def __contains__(self, name):
        return name in self._checks

    @property
    def passed(self):
        return all(check.passed for check in self._checks.values())

    def to_dict(self):
        return {'tool': 'superbv', 'version': self.version, 'command': self.command, 'config': self.config,
                'status': 'pass' if self.passed else 'fail', 'checks': [check.to_dict() for check in self.checks]}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_frame(self):
        rows = [{'check': c.name, 'status': 'pass' if c.passed else 'FAIL', 'residual': c.residual or '0',
                 'anchor': c.anchor} for c in self.checks]
        return pd.DataFrame(rows, columns=['check', 'status', 'residual', 'anchor'])

    def to_text(self):
        lines = ['superbv {} {}: {}'.format(self.version, self.command, 'PASS' if self.passed else 'FAIL')]
        if self._checks:
            lines.append(self.to_frame().to_string(index=False))
        for check in self.checks:
            if check.data:
                lines.append('{}: {}'.format(check.name, json.dumps(check.data, sort_keys=True)))
        return '\n'.join(lines)
