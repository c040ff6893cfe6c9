"""
Randomized property tests and the suite bookkeeping
"""

import os
import sys
import tempfile
import unittest
from itertools import permutations, product
from unittest import mock

import numpy as np
import pandas as pd

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.models.presentation_models import QWord
from src.models.quandle_models import Congruence, FiniteQuandle
from src.services.enumeration_service import EnumerationService
from src.services.group_service import GroupService
from src.services.presentation_service import PresentationService
from src.services.quandle_service import QuandleService
from src.services.report_service import COLUMNS, ReportService


class TestNormalFormProperty(unittest.TestCase):
    """Normal forms evaluate like the trees they came from"""

    def setUp(self):
        self.reports = ReportService()
        self.presentations = PresentationService()

    def test_random_expressions(self):
        for seed in (0, 1, 2):
            self.assertEqual(self.reports.normal_form_failures(500, seed), 0, seed)

    def test_relation_storage_is_idempotent(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            left = self.presentations.normalize(self.reports.random_expression(rng, 4, 3))
            right = self.presentations.normalize(self.reports.random_expression(rng, 4, 3))
            once = self.presentations.normalize_relation(left, right)
            self.assertEqual(self.presentations.normalize_relation(*once), once)

    def test_reduced_words_evaluate_alike(self):
        rng = np.random.default_rng(5)
        for q in self.reports.corpus():
            for _ in range(50):
                word = self.presentations.normalize(self.reports.random_expression(rng, 4, 3))
                assignment = [int(v) for v in rng.integers(q.size, size=3)]
                self.assertEqual(
                    self.presentations.evaluate(word, q, assignment),
                    self.presentations.evaluate(self.presentations.reduce_word(word), q,
                                                assignment))


class TestCorpusProperties(unittest.TestCase):
    """Axioms and derived tables on the random corpus"""

    def setUp(self):
        self.reports = ReportService()
        self.quandles = QuandleService()

    def test_axioms(self):
        for q in self.reports.corpus():
            self.assertTrue(self.quandles.is_quandle(q.table), q.name)

    def test_inverse_table(self):
        for q in self.reports.corpus():
            for x in range(q.size):
                for y in range(q.size):
                    self.assertEqual(q.inv_op(q.op(x, y), y), x)

    def test_nu_divides_inner_order(self):
        for q in self.reports.corpus():
            inner = self.quandles.inner_group(q)
            for nu in self.quandles.nu_profile(q).values():
                self.assertEqual(inner.order % nu, 0, q.name)


class TestEnumerationProperties(unittest.TestCase):
    """Finished enumerations satisfy their presentations"""

    def setUp(self):
        self.presentations = PresentationService()
        self.enumeration = EnumerationService()
        self.quandles = QuandleService()

    def test_augmented_outputs_are_n_quandles(self):
        for source, n in (('trefoil', 2), ('trefoil', 3), ('trefoil', 4), ('artin(A3)', 2),
                          ('artin(I2(5))', 2)):
            presentation = self.presentations.augment_n(self.presentations.load(source), n)
            outcome = self.enumeration.enumerate_quandle(presentation)
            self.assertTrue(outcome.finished, source)
            self.assertTrue(self.quandles.is_n_quandle(outcome.quandle, n), (source, n))
            self.assertTrue(self.enumeration.relations_hold(presentation, outcome), (source, n))
            self.assertTrue(self.enumeration.representatives_hold(outcome), (source, n))

    def test_augmented_relations_are_normalized(self):
        presentation = self.presentations.augment_n(self.presentations.trefoil_quandle(), 3)
        for left, right in presentation.relations:
            self.assertEqual(self.presentations.normalize_relation(left, right), (left, right))

    def test_quotient_consistency(self):
        trefoil_4 = self.presentations.augment_n(self.presentations.trefoil_quandle(), 4)
        for presentation, size in ((self.presentations.coxeter_quandle('A2'), 3),
                                   (trefoil_4, 3)):
            report = self.enumeration.quotient_consistency(presentation, 2)
            self.assertEqual(report['status'], 'finished')
            self.assertEqual(report['quotient_size'], size)
            self.assertTrue(report['isomorphic'])

    def test_dehn_recipe_holds_in_s3(self):
        reports = ReportService()
        passed = reports._dehn_recipe()[2]
        self.assertTrue(passed)

    def test_generators_generate(self):
        presentation = self.presentations.augment_n(self.presentations.trefoil_quandle(), 3)
        outcome = self.enumeration.enumerate_quandle(presentation)
        gens = list(outcome.generator_elements)
        self.assertEqual(len(set(gens)), 2)
        closure = self.quandles.subquandle_closure(outcome.quandle, gens)
        self.assertEqual(len(closure), outcome.quandle.size)
        for word, element in zip(outcome.representatives, range(outcome.quandle.size)):
            self.assertIn(word.base, (0, 1))
            self.assertEqual(self.presentations.evaluate(word, outcome.quandle, gens), element)
        self.assertEqual(self.presentations.evaluate(QWord(1), outcome.quandle, gens), gens[1])


def set_partitions(n: int):
    """Every partition of range(n) as a restricted growth label list"""
    labels = [0] * n

    def extend(i: int, blocks: int):
        if i == n:
            yield list(labels)
            return
        for label in range(blocks + 1):
            labels[i] = label
            yield from extend(i + 1, max(blocks, label + 1))

    if n:
        yield from extend(1, 1)


def compatible(q, labels) -> bool:
    """The partition is compatible with the operation"""
    n = q.size
    L = np.asarray(labels, dtype=np.int64)
    keys = (L[:, None] * n + L[None, :]).ravel()
    values = L[q.table].ravel()
    first = np.full(n * n, -1, dtype=np.int64)
    first[keys] = values
    return bool(np.all(first[keys] == values))


def small_quandles(size: int):
    """All quandle tables on range(size), columns ranging over permutations fixing their index"""
    options = []
    for y in range(size):
        options.append([p for p in permutations(range(size)) if p[y] == y])
    for columns in product(*options):
        yield np.array(columns, dtype=np.int64).T


class TestQuotientInvariants(unittest.TestCase):
    """Quotient searches agree with exhaustive search over partitions"""

    def setUp(self):
        self.quandles = QuandleService()
        self.groups = GroupService()
        self.enumeration = EnumerationService()
        s4 = self.groups.symmetric_group(4)
        self.small = [
            self.quandles.trivial_quandle(2),
            self.quandles.trivial_quandle(4),
            self.quandles.dihedral_quandle(3),
            self.quandles.dihedral_quandle(4),
            self.quandles.dihedral_quandle(5),
            self.quandles.dihedral_quandle(6),
            self.quandles.alexander_quandle(5, 2),
            self.quandles.alexander_quandle(4, 3),
            self.quandles.conjugation_quandle(self.groups.symmetric_group(3)),
            self.quandles.dehn_quandle(s4, self.groups.parse_subset(s4, 'transpositions')),
        ]
        self.medium = self.small + [
            self.quandles.alexander_quandle(7, 3),
            self.quandles.dihedral_quandle(8),
            self.quandles.trivial_quandle(7),
        ]

    def test_finite_n_quotient_is_the_largest_n_quotient(self):
        for q in self.small:
            for n in (2, 3, 4):
                reduced = self.quandles.finite_n_quotient(q, n)
                self.assertTrue(self.quandles.is_n_quandle(reduced, n), (q.name, n))
                largest = 0
                for labels in set_partitions(q.size):
                    if not compatible(q, labels):
                        continue
                    image = self.quandles.quotient(q, Congruence.from_labels(labels))
                    if self.quandles.is_n_quandle(image, n):
                        largest = max(largest, image.size)
                self.assertEqual(reduced.size, largest, (q.name, n))

    def test_smallest_quotient_matches_exhaustive_search(self):
        for q in self.medium:
            sizes = [len(set(labels)) for labels in set_partitions(q.size)
                     if 2 <= len(set(labels)) < q.size and compatible(q, labels)]
            expected = min(sizes) if sizes else None
            self.assertEqual(self.quandles.smallest_nontrivial_quotient(q), expected, q.name)

    def test_smallest_quotients_are_quandles(self):
        for q in self.medium:
            congruence = self.quandles.smallest_quotient(q)
            if congruence is None:
                continue
            image = self.quandles.quotient(q, congruence)
            validated = self.quandles.validate_quandle(image.table)
            self.assertEqual(validated.size, congruence.num_blocks, q.name)

    def test_fq_presentation_is_finite_up_to_size_four(self):
        counts = {}
        for size in (1, 2, 3, 4):
            classes = []
            for table in small_quandles(size):
                if not self.quandles.is_quandle(table):
                    continue
                q = FiniteQuandle(table)
                if any(self.quandles.find_isomorphism(q, r) is not None for r in classes):
                    continue
                classes.append(q)
                outcome = self.enumeration.enumerate_group(self.quandles.fq_presentation(q))
                self.assertTrue(outcome.finished, table.tolist())
                self.assertGreaterEqual(outcome.order, 1)
            counts[size] = len(classes)
        self.assertEqual(counts, {1: 1, 2: 1, 3: 3, 4: 7})


class TestSuiteBookkeeping(unittest.TestCase):
    """Summaries and CSV export of suite results"""

    def setUp(self):
        self.reports = ReportService()
        self.frame = pd.DataFrame([
            {'criterion': 9, 'check': 'a', 'expected': '6', 'observed': '6',
             'passed': True, 'seconds': 0.5},
            {'criterion': 9, 'check': 'b', 'expected': '24', 'observed': '12',
             'passed': False, 'seconds': 1.0},
        ], columns=COLUMNS)

    def test_summary(self):
        summary = self.reports.summary(self.frame)
        self.assertEqual(summary['checks'], 2)
        self.assertEqual(summary['passed'], 1)
        self.assertEqual(summary['failed'], 1)
        self.assertAlmostEqual(summary['seconds'], 1.5)

    def test_empty_summary(self):
        summary = self.reports.summary(pd.DataFrame(columns=COLUMNS))
        self.assertEqual(summary['checks'], 0)
        self.assertEqual(summary['failed'], 0)

    def test_export_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = self.reports.export_csv(self.frame, os.path.join(tmp, 'suite.csv'))
            loaded = pd.read_csv(target)
            self.assertEqual(list(loaded.columns), COLUMNS)
            self.assertEqual(loaded['passed'].tolist(), [True, False])

    def test_check_list_covers_every_criterion(self):
        criteria = {criterion for criterion, _, _ in self.reports._checks(quick=True)}
        self.assertEqual(criteria, set(range(1, 11)))

    def test_consistency_check_needs_both_routes(self):
        presentations = PresentationService()
        trefoil_4 = presentations.augment_n(presentations.trefoil_quandle(), 4)
        _, observed, passed = self.reports._consistency(trefoil_4, 2)()
        self.assertTrue(passed)
        self.assertEqual(observed, '3, iso=True')
        overflow = {'status': 'overflow', 'isomorphic': None}
        with mock.patch.object(self.reports.enumeration, 'quotient_consistency',
                               return_value=overflow):
            self.assertFalse(self.reports._consistency(trefoil_4, 2)()[2])

    def test_consistency_cases_in_check_list(self):
        names = [name for _, name, _ in self.reports._checks(quick=True)
                 if name.startswith('quotient consistency')]
        self.assertEqual(len(names), 3)


if __name__ == '__main__':
    unittest.main()
