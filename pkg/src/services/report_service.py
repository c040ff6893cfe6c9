"""
Report service: the theorem-instance suite and its tabular export
"""

import logging
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.models.presentation_models import Gen, Op, QExpr, QuandlePresentation
from src.models.quandle_models import FiniteQuandle
from src.services.enumeration_service import EnumerationService
from src.services.group_service import GroupService
from src.services.presentation_service import PresentationService
from src.services.quandle_service import QuandleService
from src.services.symplectic_service import SymplecticService
from src.utils.config import Config

Check = Tuple[Any, Any, bool]

COLUMNS = ['criterion', 'check', 'expected', 'observed', 'passed', 'seconds']


class ReportService:
    """Runs the acceptance checks and collects them in a DataFrame"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()
        self.logger = logging.getLogger(__name__)
        self.quandles = QuandleService(self.config)
        self.presentations = PresentationService(self.config)
        self.enumeration = EnumerationService(self.config)
        self.groups = GroupService(self.config)
        self.symplectic = SymplecticService(self.config)

    def run_suite(self, quick: bool = False) -> pd.DataFrame:
        rows = []
        for criterion, name, check in self._checks(quick):
            start = time.perf_counter()
            try:
                expected, observed, passed = check()
            except Exception as e:
                self.logger.error(f"Check '{name}' raised {type(e).__name__}: {e}")
                expected, observed, passed = '-', f"{type(e).__name__}: {e}", False
            rows.append({
                'criterion': criterion,
                'check': name,
                'expected': str(expected),
                'observed': str(observed),
                'passed': bool(passed),
                'seconds': round(time.perf_counter() - start, 3),
            })
            self.logger.info(f"[{'ok' if passed else 'FAIL'}] {name}")
        return pd.DataFrame(rows, columns=COLUMNS)

    def export_csv(self, frame: pd.DataFrame, path: Optional[str] = None) -> str:
        target = Path(path) if path else Path(self.config.reports_dir) / 'suite.csv'
        frame.to_csv(target, index=False)
        self.logger.info(f"Suite results written to {target}")
        return str(target)

    @staticmethod
    def summary(frame: pd.DataFrame) -> Dict[str, Any]:
        return {
            'checks': int(len(frame)),
            'passed': int(frame['passed'].sum()) if len(frame) else 0,
            'failed': int((~frame['passed']).sum()) if len(frame) else 0,
            'seconds': float(frame['seconds'].sum()) if len(frame) else 0.0,
        }

    def _checks(self, quick: bool) -> List[Tuple[int, str, Callable[[], Check]]]:
        trefoil_sizes = [2, 3, 4] if quick else [2, 3, 4, 5]
        genus_range = [1, 2, 3] if quick else [1, 2, 3, 4]
        lemma_cases = [(1, 2), (1, 3), (1, 5), (2, 2)] + ([] if quick else [(2, 3)])
        checks = [(1, 'trefoil 2-quandle is P(1,2)', self._trefoil_involutory)]
        checks += [(2, f"trefoil {n}-quandle finishes and audits", self._trefoil_n(n))
                   for n in trefoil_sizes]
        if not quick:
            checks.append((2, 'trefoil 6-quandle overflows', self._trefoil_overflow))
        checks += [(3, f"artin({t}) 2-quandle is coxeter quandle", self._artin_vs_coxeter(t))
                   for t in ('A2', 'A3', 'I2(4)')]
        checks.append((4, 'D(S5, transpositions) and its smallest quotient', self._dehn_s5))
        checks += [(5, f"P({g},2) size, involutory, connected", self._p_family(g))
                   for g in genus_range]
        checks.append((5, 'P(2,3) size and 3-quandle', self._p23))
        checks += [(6, f"smallest quotient of P({g},2)", self._p_min_quotient(g)) for g in (1, 2)]
        checks += [(7, f"centralizer shape Sp({2 * g},{p})", self._lemma_shape(g, p))
                   for g, p in lemma_cases]
        checks += [(8, f"centralizer generators Sp({2 * g},{p})", self._lemma_generators(g, p))
                   for g, p in lemma_cases]
        checks += [(8, f"coupling matrices g={g} p={p}", self._coupling(g, p))
                   for g in (2, 3) for p in (2, 3)]
        checks += [(9, f"braid(3) with s^{k}", self._braid_power(k, order))
                   for k, order in ((2, 6), (3, 24))]
        checks.append((10, 'normal form preserves evaluation',
                       self._normal_form_property(1000 if quick else 10_000)))
        trefoil_4 = self.presentations.augment_n(self.presentations.trefoil_quandle(), 4)
        for name, presentation in (('trefoil 4-quandle', trefoil_4),
                                   ('coxeter(A2)', self.presentations.coxeter_quandle('A2')),
                                   ('coxeter(A3)', self.presentations.coxeter_quandle('A3'))):
            checks.append((10, f"quotient consistency, {name} n=2",
                           self._consistency(presentation, 2)))
        checks.append((10, 'Dehn recipe relations hold in D(S3)', self._dehn_recipe))
        return checks

    # Individual checks
    def _trefoil_involutory(self) -> Check:
        outcome = self.enumeration.enumerate_quandle(
            self.presentations.augment_n(self.presentations.trefoil_quandle(), 2))
        target = self.symplectic.p_quandle(1, 2)
        iso = (outcome.finished
               and self.quandles.find_isomorphism(outcome.quandle, target) is not None)
        return '3, iso', f"{outcome.size}, {'iso' if iso else 'no iso'}", outcome.size == 3 and iso

    def _trefoil_n(self, n: int) -> Callable[[], Check]:
        def check() -> Check:
            trefoil = self.presentations.augment_n(self.presentations.trefoil_quandle(), n)
            outcome = self.enumeration.enumerate_quandle(trefoil)
            if not outcome.finished:
                return 'finished', outcome.to_dict(), False
            audit = self.enumeration.audit(trefoil, outcome, n)
            passed = audit['ok'] and audit['orbits'] == 1
            return 'finished, audited, connected', f"size {audit['size']}, audit {audit}", passed
        return check

    def _trefoil_overflow(self) -> Check:
        trefoil = self.presentations.augment_n(self.presentations.trefoil_quandle(), 6)
        outcome = self.enumeration.enumerate_quandle(trefoil)
        return 'overflow', outcome.status, not outcome.finished

    def _artin_vs_coxeter(self, type_name: str) -> Callable[[], Check]:
        def check() -> Check:
            outcome = self.enumeration.enumerate_quandle(
                self.presentations.coxeter_quandle(type_name))
            realized = self.groups.coxeter_quandle(type_name)
            iso = (outcome.finished
                   and self.quandles.find_isomorphism(outcome.quandle, realized) is not None)
            return realized.size, f"{outcome.size}, {'iso' if iso else 'no iso'}", iso
        return check

    def _dehn_s5(self) -> Check:
        s5 = self.groups.symmetric_group(5)
        q = self.quandles.dehn_quandle(s5, self.groups.parse_subset(s5, 'transpositions'))
        smallest = self.quandles.smallest_quotient_size(q)
        passed = q.size == 10 and smallest == 10 and self.groups.sympy_order(s5) == s5.order
        return '10, 10', f"{q.size}, {smallest}", passed

    def _p_family(self, g: int) -> Callable[[], Check]:
        def check() -> Check:
            q = self.symplectic.p_quandle(g, 2)
            involutory = self.quandles.is_n_quandle(q, 2)
            connected = self.quandles.is_connected(q)
            valid = self.quandles.check_axioms(q.table) is None
            expected = 2 ** (2 * g) - 1
            return expected, q.size, q.size == expected and involutory and connected and valid
        return check

    def _p23(self) -> Check:
        q = self.symplectic.p_quandle(2, 3)
        return '40, 3-quandle', f"{q.size}, {self.quandles.is_n_quandle(q, 3)}", (
            q.size == 40 and self.quandles.is_n_quandle(q, 3))

    def _p_min_quotient(self, g: int) -> Callable[[], Check]:
        def check() -> Check:
            q = self.symplectic.p_quandle(g, 2)
            smallest = self.quandles.smallest_quotient_size(q)
            expected = 2 ** (2 * g) - 1
            return expected, smallest, smallest == expected
        return check

    def _lemma_shape(self, g: int, p: int) -> Callable[[], Check]:
        def check() -> Check:
            report = self.symplectic.check_centralizer_shape(g, p)
            passed = report['equal'] and report['group_order'] == report['order_formula']
            return (f"order {report['order_formula']}, equal",
                    f"order {report['group_order']}, centralizer {report['centralizer_order']}, "
                    f"equal={report['equal']}", passed)
        return check

    def _lemma_generators(self, g: int, p: int) -> Callable[[], Check]:
        def check() -> Check:
            report = self.symplectic.check_centralizer_generators(g, p)
            return ('equal', f"generated {report['generated_order']}, "
                    f"centralizer {report['centralizer_order']}", report['equal'])
        return check

    def _coupling(self, g: int, p: int) -> Callable[[], Check]:
        def check() -> Check:
            results = self.symplectic.coupling_matrices(g, p)
            passed = all(r['M_matches'] and r['N_matches'] for r in results)
            return 'all match', [(r['i'], r['M_matches'], r['N_matches']) for r in results], passed
        return check

    def _braid_power(self, power: int, order: int) -> Callable[[], Check]:
        def check() -> Check:
            group = self.presentations.with_powers(self.presentations.braid_group(3), power)
            outcome = self.enumeration.enumerate_group(group)
            independent = self.groups.presentation_order(group)
            passed = outcome.order == order and independent == order
            if power == 2:
                passed = passed and self.groups.sympy_order(self.groups.symmetric_group(3)) == order
            return order, f"{outcome.order}, sympy {independent}", passed
        return check

    def _consistency(self, presentation: QuandlePresentation, n: int) -> Callable[[], Check]:
        def check() -> Check:
            report = self.enumeration.quotient_consistency(presentation, n)
            if report['status'] != 'finished':
                return 'both finish, isomorphic', report['status'], False
            return ('isomorphic', f"{report['quotient_size']}, iso={report['isomorphic']}",
                    report['isomorphic'])
        return check

    def _dehn_recipe(self) -> Check:
        s3 = self.presentations.with_powers(self.presentations.braid_group(3), 2)
        candidate = self.presentations.dehn_presentation_from_group(s3)
        group = self.groups.symmetric_group(3)
        realized = self.quandles.dehn_quandle(group, list(group.generators))
        position = {label: i for i, label in enumerate(realized.labels)}
        assignment = [position[group.describe(s)] for s in group.generators]
        result = self.presentations.check_candidate_relations(candidate, realized, assignment)
        return 'holds', result['holds'], result['holds']

    def _normal_form_property(self, count: int) -> Callable[[], Check]:
        def check() -> Check:
            failures = self.normal_form_failures(count, self.config.seed)
            return 0, failures, failures == 0
        return check

    # Randomized normal form checks
    def corpus(self) -> List[FiniteQuandle]:
        s3 = self.groups.symmetric_group(3)
        return [
            self.quandles.trivial_quandle(3),
            self.quandles.dihedral_quandle(3),
            self.quandles.dihedral_quandle(5),
            self.quandles.alexander_quandle(5, 2),
            self.quandles.alexander_quandle(4, 3),
            self.quandles.conjugation_quandle(s3),
        ]

    @staticmethod
    def random_expression(rng: np.random.Generator, depth: int, generators: int) -> QExpr:
        if depth == 0 or rng.random() < 0.3:
            return Gen(int(rng.integers(generators)))
        left = ReportService.random_expression(rng, depth - 1, generators)
        right = ReportService.random_expression(rng, depth - 1, generators)
        return Op(left, right, 1 if rng.random() < 0.5 else -1)

    def normal_form_failures(self, count: int, seed: int = 0) -> int:
        rng = np.random.default_rng(seed)
        corpus = self.corpus()
        failures = 0
        for _ in range(count):
            q = corpus[int(rng.integers(len(corpus)))]
            expr = self.random_expression(rng, 4, 3)
            assignment = [int(v) for v in rng.integers(q.size, size=3)]
            word = self.presentations.normalize(expr)
            if (self.presentations.evaluate_expression(expr, q, assignment)
                    != self.presentations.evaluate(word, q, assignment)):
                failures += 1
        return failures
