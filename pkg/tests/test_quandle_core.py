"""
Tests for finite quandles: axioms, constructions, isomorphisms and congruences
"""

import json
import os
import sys
import tempfile
import unittest

import numpy as np

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.models.errors import AxiomViolation, GroupTooLarge, InvalidQuandleFile
from src.models.quandle_models import Congruence, FiniteQuandle
from src.services.group_service import GroupService
from src.services.quandle_service import QuandleService
from src.utils.config import Config


class TestAxioms(unittest.TestCase):
    """validate_quandle and check_axioms"""

    def setUp(self):
        self.service = QuandleService()

    def test_dihedral_is_valid(self):
        r3 = self.service.dihedral_quandle(3)
        q = self.service.validate_quandle(r3.table)
        self.assertEqual(q.size, 3)
        self.assertEqual(q.table.tolist(), [[0, 2, 1], [2, 1, 0], [1, 0, 2]])

    def test_trivial_is_valid(self):
        self.assertTrue(self.service.is_quandle(self.service.trivial_quandle(4).table))

    def test_idempotency_violation(self):
        table = self.service.dihedral_quandle(3).table.copy()
        table[0][0] = 1
        with self.assertRaises(AxiomViolation) as ctx:
            self.service.validate_quandle(table)
        self.assertEqual(ctx.exception.axiom, 'idempotency')
        self.assertEqual(ctx.exception.witness, (0,))

    def test_bijectivity_violation(self):
        violation = self.service.check_axioms([[0, 0], [0, 1]])
        self.assertEqual(violation.axiom, 'right-bijectivity')
        self.assertEqual(violation.witness, (0, 1, 0))

    def test_distributivity_violation(self):
        table = [[0, 2, 0], [2, 1, 1], [1, 0, 2]]
        violation = self.service.check_axioms(table)
        self.assertEqual(violation.axiom, 'right-distributivity')
        self.assertEqual(violation.witness, (0, 1, 0))

    def test_distributivity_on_generator_columns(self):
        table = [[0, 2, 0], [2, 1, 1], [1, 0, 2]]
        # column 2 alone does not generate, so checking it alone misses the violation
        self.assertIsNone(self.service.check_axioms(table, generators=[2]))
        self.assertEqual(self.service.check_axioms(table, generators=[0]).axiom,
                         'right-distributivity')
        r5 = self.service.dihedral_quandle(5)
        self.assertIsNone(self.service.check_axioms(r5.table, generators=[0, 1]))
        q = self.service.validate_quandle(r5.table, generators=[0, 1])
        self.assertTrue(q.same_table(r5))

    def test_out_of_range(self):
        with self.assertRaises(InvalidQuandleFile):
            self.service.validate_quandle([[0, 5], [1, 1]])
        with self.assertRaises(ValueError):
            FiniteQuandle(np.array([[0, 1, 2]]))

    def test_alexander_quandles(self):
        for n, t in ((5, 2), (5, 3), (4, 3), (7, 3)):
            self.assertTrue(self.service.is_quandle(self.service.alexander_quandle(n, t).table))
        with self.assertRaises(ValueError):
            self.service.alexander_quandle(4, 2)

    def test_inverse_table(self):
        q = self.service.alexander_quandle(5, 2)
        for x in range(5):
            for y in range(5):
                self.assertEqual(q.op(q.inv_op(x, y), y), x)
                self.assertEqual(q.power_op(q.power_op(x, y, 3), y, -3), x)


class TestGroupQuandles(unittest.TestCase):
    """Conjugation and Dehn quandles"""

    def setUp(self):
        self.service = QuandleService()
        self.groups = GroupService()
        self.s3 = self.groups.symmetric_group(3)

    def test_conjugation_quandle_of_s3(self):
        q = self.service.conjugation_quandle(self.s3)
        self.assertEqual(q.size, 6)
        self.assertTrue(self.service.is_quandle(q.table))
        self.assertEqual(sorted(len(o) for o in self.service.orbits(q)), [1, 2, 3])

    def test_conjugation_quandle_of_trivial_group(self):
        q = self.service.conjugation_quandle(self.groups.symmetric_group(1))
        self.assertEqual(q.size, 1)

    def test_abelian_conjugation_is_trivial(self):
        q = self.service.conjugation_quandle(self.groups.cyclic_group(4))
        self.assertEqual(q.size, 4)
        self.assertTrue(np.all(q.table == np.arange(4)[:, None]))

    def test_conjugation_cap(self):
        config = Config()
        config.override(max_quandle_size=100)
        with self.assertRaises(GroupTooLarge):
            QuandleService(config).conjugation_quandle(self.groups.symmetric_group(5))

    def test_dehn_quandle_of_transpositions(self):
        s5 = self.groups.symmetric_group(5)
        q = self.service.dehn_quandle(s5, self.groups.parse_subset(s5, 'transpositions'))
        self.assertEqual(q.size, 10)
        self.assertTrue(self.service.is_connected(q))

    def test_dehn_quandle_single_transposition(self):
        q = self.service.dehn_quandle(self.s3, [self.s3.generators[0]])
        self.assertEqual(q.size, 3)
        self.assertIsNotNone(self.service.find_isomorphism(q, self.service.dihedral_quandle(3)))

    def test_dehn_quandle_of_identity(self):
        q = self.service.dehn_quandle(self.s3, [self.s3.identity()])
        self.assertEqual(q.size, 1)

    def test_dehn_quandle_rejects_bad_subset(self):
        with self.assertRaises(ValueError):
            self.service.dehn_quandle(self.s3, [])
        with self.assertRaises(ValueError):
            self.service.dehn_quandle(self.s3, [(1, 0, 2, 3)])


class TestColumnsAndOrbits(unittest.TestCase):
    """n-quandles, nu profiles, inner groups and orbits"""

    def setUp(self):
        self.service = QuandleService()
        self.r3 = self.service.dihedral_quandle(3)
        self.conj = self.service.conjugation_quandle(GroupService().symmetric_group(3))

    def test_is_n_quandle(self):
        self.assertTrue(self.service.is_n_quandle(self.r3, 2))
        self.assertTrue(self.service.is_n_quandle(self.service.trivial_quandle(3), 5))
        self.assertFalse(self.service.is_n_quandle(self.conj, 2))
        self.assertTrue(self.service.is_n_quandle(self.conj, 6))

    def test_nu_profile(self):
        self.assertEqual(set(self.service.nu_profile(self.r3).values()), {2})
        self.assertEqual(set(self.service.nu_profile(self.service.trivial_quandle(3)).values()),
                         {1})
        self.assertEqual(sorted(self.service.nu_profile(self.conj).values()), [1, 2, 2, 2, 3, 3])

    def test_inner_group(self):
        inner = self.service.inner_group(self.r3)
        self.assertEqual(inner.order, 6)
        for y, column in enumerate(inner.generators):
            self.assertEqual(column[y], y)
        self.assertEqual(self.service.inner_group(self.service.trivial_quandle(3)).order, 1)

    def test_orbits(self):
        self.assertEqual(self.service.orbits(self.r3), [(0, 1, 2)])
        self.assertEqual(len(self.service.orbits(self.service.trivial_quandle(3))), 3)
        self.assertEqual(len(self.service.orbits(self.conj)), 3)


class TestIsomorphism(unittest.TestCase):
    """find_isomorphism"""

    def setUp(self):
        self.service = QuandleService()
        self.r3 = self.service.dihedral_quandle(3)

    def test_self_isomorphism_is_identity(self):
        self.assertEqual(self.service.find_isomorphism(self.r3, self.r3), [0, 1, 2])

    def test_isomorphism_is_a_bijective_homomorphism(self):
        s4 = GroupService().symmetric_group(4)
        q = self.service.dehn_quandle(s4, list(s4.generators))
        shuffled_order = [5, 3, 0, 4, 1, 2]
        inverse = np.argsort(shuffled_order)
        table = inverse[q.table[np.ix_(shuffled_order, shuffled_order)]]
        shuffled = FiniteQuandle(table)
        mapping = self.service.find_isomorphism(q, shuffled)
        self.assertIsNotNone(mapping)
        self.assertEqual(sorted(mapping), list(range(6)))
        self.assertTrue(self.service.is_homomorphism(q, shuffled, mapping))

    def test_non_isomorphic(self):
        self.assertIsNone(self.service.find_isomorphism(self.r3, self.service.trivial_quandle(3)))
        self.assertIsNone(self.service.find_isomorphism(self.r3, self.service.trivial_quandle(4)))

    def test_symmetric(self):
        a = self.service.alexander_quandle(5, 2)
        b = self.service.alexander_quandle(5, 3)
        c = self.service.dihedral_quandle(5)
        for first, second in ((a, b), (a, c), (b, c)):
            forward = self.service.find_isomorphism(first, second) is not None
            backward = self.service.find_isomorphism(second, first) is not None
            self.assertEqual(forward, backward)


class TestCongruences(unittest.TestCase):
    """Congruence closure, quotients and the smallest quotient search"""

    def setUp(self):
        self.service = QuandleService()
        self.r3 = self.service.dihedral_quandle(3)
        self.t3 = self.service.trivial_quandle(3)

    def test_empty_pairs_give_discrete(self):
        self.assertTrue(self.service.congruence_generated_by(self.r3, []).is_discrete)

    def test_connected_simple_collapses(self):
        self.assertTrue(self.service.congruence_generated_by(self.r3, [(0, 1)]).is_total)

    def test_trivial_quandle_keeps_pair(self):
        theta = self.service.congruence_generated_by(self.t3, [(0, 1)])
        self.assertEqual(theta.blocks, ((0, 1), (2,)))

    def test_quotient_of_r4(self):
        r4 = self.service.dihedral_quandle(4)
        parity = Congruence.from_labels([0, 1, 0, 1])
        self.assertTrue(self.service.is_congruence(r4, parity))
        quotient = self.service.quotient(r4, parity)
        self.assertEqual(quotient.table.tolist(), [[0, 0], [1, 1]])
        self.assertFalse(self.service.is_congruence(self.r3, Congruence.from_labels([0, 0, 1])))

    def test_smallest_quotient_trivial(self):
        self.assertEqual(self.service.smallest_nontrivial_quotient(self.service.trivial_quandle(4)),
                         2)

    def test_smallest_quotient_r4(self):
        r4 = self.service.dihedral_quandle(4)
        self.assertEqual(self.service.smallest_nontrivial_quotient(r4), 2)

    def test_smallest_quotient_simple(self):
        self.assertIsNone(self.service.smallest_nontrivial_quotient(self.r3))
        self.assertEqual(self.service.smallest_quotient_size(self.r3), 3)

    def test_smallest_quotient_transpositions(self):
        groups = GroupService()
        s5 = groups.symmetric_group(5)
        q = self.service.dehn_quandle(s5, groups.parse_subset(s5, 'transpositions'))
        self.assertIsNone(self.service.smallest_nontrivial_quotient(q))
        self.assertEqual(self.service.smallest_quotient_size(q), 10)

    def test_principal_congruences_with_threads(self):
        config = Config()
        config.override(jobs=3)
        threaded = QuandleService(config)
        q = self.service.alexander_quandle(4, 3)
        self.assertEqual(threaded.principal_congruences(q), self.service.principal_congruences(q))

    def test_finite_n_quotient(self):
        self.assertTrue(self.service.finite_n_quotient(self.r3, 2).same_table(self.r3))
        self.assertTrue(self.service.finite_n_quotient(self.t3, 3).same_table(self.t3))

    def test_finite_n_quotient_of_s3(self):
        conj = self.service.conjugation_quandle(GroupService().symmetric_group(3))
        reduced = self.service.finite_n_quotient(conj, 2)
        # the transpositions merge; the two 3-cycles stay apart
        self.assertEqual(reduced.size, 4)
        self.assertTrue(self.service.is_n_quandle(reduced, 2))
        self.assertTrue(self.service.is_quandle(reduced.table))


class TestQuandleFiles(unittest.TestCase):
    """JSON table files"""

    def setUp(self):
        self.service = QuandleService()

    def test_save_and_load(self):
        q = self.service.dihedral_quandle(5)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'r5.json')
            self.service.save_quandle(q, path)
            loaded = self.service.load_quandle(path)
        self.assertTrue(loaded.same_table(q))

    def test_bad_files(self):
        with self.assertRaises(InvalidQuandleFile):
            self.service.quandle_from_dict({'size': 2, 'table': [[0, 1]]})
        with self.assertRaises(InvalidQuandleFile):
            self.service.quandle_from_dict([[0]])
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'broken.json')
            with open(path, 'w') as f:
                f.write('{"table": [[0')
            with self.assertRaises(InvalidQuandleFile):
                self.service.load_quandle(path)

    def test_unchecked_load(self):
        data = {'size': 2, 'table': [[1, 1], [0, 0]]}
        with self.assertRaises(AxiomViolation):
            self.service.quandle_from_dict(data)
        self.assertEqual(self.service.quandle_from_dict(data, unchecked=True).size, 2)

    def test_labels_round_trip(self):
        q = self.service.conjugation_quandle(GroupService().symmetric_group(3))
        data = json.loads(json.dumps(q.to_dict()))
        self.assertEqual(self.service.quandle_from_dict(data).labels, q.labels)


if __name__ == '__main__':
    unittest.main()
