"""
Console view: human-readable summaries on standard output
"""

import json
import sys
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

import pandas as pd

from src.models.enumeration_models import EnumOutcome
from src.models.quandle_models import FiniteQuandle


class ConsoleView:
    """Renders results for the command line"""

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream or sys.stdout

    def write(self, text: str = ''):
        self.stream.write(text + '\n')

    def show_json(self, data: Any):
        self.write(json.dumps(data, indent=2, default=str))

    def show_table_json(self, q: FiniteQuandle):
        """Single-line table JSON, readable by the table commands"""
        self.write(json.dumps(q.to_dict()))

    def show_quandle(self, q: FiniteQuandle, orbits: Optional[Sequence[Tuple[int, ...]]] = None,
                     show_table: bool = False):
        title = q.name or 'quandle'
        self.write(f"{title}: {q.size} elements")
        if orbits is not None:
            sizes = sorted(len(o) for o in orbits)
            self.write(f"  orbits: {len(orbits)} (sizes {sizes})")
        if show_table and q.size <= 16:
            width = len(str(q.size - 1))
            for row in q.table:
                self.write('  ' + ' '.join(str(int(v)).rjust(width) for v in row))

    def show_validation(self, q: FiniteQuandle):
        self.write(f"valid quandle of size {q.size}")

    def show_outcome(self, outcome: EnumOutcome, kind: str = 'quandle'):
        if outcome.finished:
            if kind == 'quandle':
                self.write(f"finished: {outcome.size} elements ({outcome.rows} rows defined)")
            else:
                self.write(f"finished: order {outcome.size} ({outcome.rows} cosets defined)")
        else:
            self.write(f"overflow: cap of {outcome.cap} reached ({outcome.rows} rows defined)")

    def show_mapping(self, mapping: Optional[List[int]], q1: FiniteQuandle, q2: FiniteQuandle):
        if mapping is None:
            self.write('Absent')
            return
        self.write('isomorphic')
        for x, image in enumerate(mapping):
            self.write(f"  {q1.label(x)} -> {q2.label(image)}")

    def show_profile(self, profile: Dict[int, int], q: FiniteQuandle):
        for x, nu in profile.items():
            self.write(f"{q.label(x)}: {nu}")

    def show_orbits(self, orbits: Iterable[Tuple[int, ...]], q: FiniteQuandle):
        for i, orbit in enumerate(orbits):
            self.write(f"orbit {i}: " + ' '.join(q.label(x) for x in orbit))

    def show_report(self, report: Dict[str, Any]):
        verdict = report.get('equal', report.get('holds', report.get('ok')))
        if verdict is not None:
            self.write(f"{'PASS' if verdict else 'FAIL'}")
        self.show_json(report)

    def show_suite(self, frame: pd.DataFrame, summary: Dict[str, Any]):
        with pd.option_context('display.max_rows', None, 'display.max_colwidth', 60,
                               'display.width', 160):
            self.write(frame[['criterion', 'check', 'observed', 'passed', 'seconds']]
                       .to_string(index=False))
        self.write()
        self.write(f"{summary['passed']}/{summary['checks']} checks passed "
                   f"in {summary['seconds']:.1f}s")
