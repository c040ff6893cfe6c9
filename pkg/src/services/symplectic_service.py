"""
Symplectic service: Sp(2g, Z_p), transvections of twist curves, the
centralizer checks for the transvection of a_1, and the projective
primitive homological quandles P_{g,n}
"""

import logging
from math import gcd
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.models.errors import CapExceeded, ClosureTooLarge, NonPrimitive
from src.models.group_models import MatGroup
from src.models.quandle_models import FiniteQuandle
from src.models.symplectic_models import PrimClass, SympMatrix, form_matrix
from src.utils.config import Config


class SymplecticService:
    """Service for symplectic matrices over Z_p and homological quandles"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()
        self.logger = logging.getLogger(__name__)

    # Form and transvections
    def form(self, x: Sequence[int], y: Sequence[int], modulus: Optional[int] = None) -> int:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if len(x) != len(y) or len(x) % 2:
            raise ValueError("vectors must have the same even length")
        value = int(x @ form_matrix(len(x) // 2) @ y)
        return value % modulus if modulus else value

    @staticmethod
    def is_primitive(v: Sequence[int], modulus: int) -> bool:
        common = modulus
        for entry in v:
            common = gcd(common, int(entry) % modulus)
        return common == 1

    def transvection(self, v: Sequence[int], p: int) -> SympMatrix:
        """x -> x + form(x, v) v, so that the class of a_1 gives I - E_{1,2}"""
        v = np.asarray(v, dtype=np.int64) % p
        if not self.is_primitive(v, p):
            raise NonPrimitive(f"{v.tolist()} is not primitive mod {p}")
        g = len(v) // 2
        J = form_matrix(g)
        entries = np.eye(2 * g, dtype=np.int64) + np.outer(v, J @ v)
        return SympMatrix(g, p, entries)

    @staticmethod
    def _unit(g: int, k: int) -> np.ndarray:
        """e_k, 1-based"""
        e = np.zeros(2 * g, dtype=np.int64)
        e[k - 1] = 1
        return e

    def curve_classes(self, g: int) -> Dict[str, np.ndarray]:
        """Homology classes of the twist curves a_i, b_i, c_i and d_i"""
        if g < 1:
            raise ValueError("genus must be positive")
        classes = {}
        for i in range(1, g + 1):
            classes[f"a{i}"] = self._unit(g, 2 * i - 1)
            classes[f"b{i}"] = self._unit(g, 2 * i)
        for i in range(1, g):
            classes[f"c{i}"] = self._unit(g, 2 * i - 1) - self._unit(g, 2 * i + 1)
            classes[f"d{i}"] = self._unit(g, 1) - self._unit(g, 2 * i + 1)
        return classes

    def twist_images(self, g: int, p: int) -> Dict[str, SympMatrix]:
        return {name: self.transvection(v, p) for name, v in self.curve_classes(g).items()}

    @staticmethod
    def _elementary(g: int, p: int, entries: Dict[tuple, int]) -> np.ndarray:
        """I plus the given 1-based (row, column) entries"""
        matrix = np.eye(2 * g, dtype=np.int64)
        for (row, col), value in entries.items():
            matrix[row - 1, col - 1] += value
        return matrix % p

    def coupling_matrices(self, g: int, p: int) -> List[Dict[str, Any]]:
        """
        For i = 1..g-1 the composites M_i = T(d_i) T(a_1)^-1 T(a_{i+1})^-1 and
        N_i = X^-1 M_i X with X = T(a_{i+1}) T(b_{i+1}) T(a_{i+1}), next to
        their closed forms I + E_{2i+1,2} + E_{1,2i+2} and I - E_{2i+2,2} + E_{1,2i+1}.
        """
        twists = self.twist_images(g, p)
        a1 = twists['a1']
        results = []
        for i in range(1, g):
            a_next, b_next = twists[f"a{i + 1}"], twists[f"b{i + 1}"]
            M = twists[f"d{i}"] @ a1.inverse() @ a_next.inverse()
            X = a_next @ b_next @ a_next
            N = M.conjugate_by(X)
            expected_M = self._elementary(g, p, {(2 * i + 1, 2): 1, (1, 2 * i + 2): 1})
            expected_N = self._elementary(g, p, {(2 * i + 2, 2): -1, (1, 2 * i + 1): 1})
            results.append({
                'i': i,
                'M': M.tolist(),
                'M_matches': bool(np.array_equal(M.entries, expected_M)),
                'N': N.tolist(),
                'N_matches': bool(np.array_equal(N.entries, expected_N)),
            })
        return results

    # Centralizer of the a_1 transvection
    def centralizer_form_predicate(self, A: SympMatrix) -> bool:
        """First column (a,0,...,0), second row (0,a,0,...,0), a = +-1"""
        return bool(self._predicate_mask(A.entries[None, :, :], A.p)[0])

    @staticmethod
    def _predicate_mask(mats: np.ndarray, p: int) -> np.ndarray:
        a = mats[:, 0, 0]
        unit = (a == 1 % p) | (a == (p - 1) % p)
        column = np.all(mats[:, 1:, 0] == 0, axis=1)
        row = (mats[:, 1, 1] == a) & np.all(mats[:, 1, 2:] == 0, axis=1)
        return unit & column & row

    @staticmethod
    def order_formula(g: int, p: int) -> int:
        """p^(g^2) * prod_{i=1..g} (p^(2i) - 1)"""
        order = p ** (g * g)
        for i in range(1, g + 1):
            order *= p ** (2 * i) - 1
        return order

    def symplectic_group(self, g: int, p: int, cap: Optional[int] = None) -> MatGroup:
        """Sp(2g, Z_p) generated by the transvections of all a_i, b_i and c_i"""
        cap = cap or self.config.max_group_size
        expected = self.order_formula(g, p)
        if expected > cap:
            raise CapExceeded(f"Sp({2 * g},{p}) of order {expected}", cap)
        twists = self.twist_images(g, p)
        gens = [twists[name].entries for name in sorted(twists) if name[0] in 'abc']
        group = MatGroup(gens, p, cap=cap, name=f"Sp({2 * g},{p})")
        if group.order != expected:
            self.logger.warning(f"{group.name}: enumerated {group.order} elements, "
                                f"order formula gives {expected}")
        return group

    def _centralizer_mask(self, group: MatGroup, g: int, p: int) -> np.ndarray:
        t = self.transvection(self._unit(g, 1), p).entries
        mats = group.matrices
        left = np.matmul(mats, t) % p
        right = np.matmul(t, mats) % p
        return np.all(left == right, axis=(1, 2))

    def check_centralizer_shape(self, g: int, p: int, cap: Optional[int] = None) -> Dict[str, Any]:
        """The brute-force centralizer of T(a_1) equals the set picked out by the shape predicate"""
        group = self.symplectic_group(g, p, cap)
        commuting = self._centralizer_mask(group, g, p)
        shaped = self._predicate_mask(group.matrices, p)
        differ = np.nonzero(commuting != shaped)[0]
        report = {
            'lemma': 'centralizer-shape',
            'g': g,
            'p': p,
            'group_order': group.order,
            'order_formula': self.order_formula(g, p),
            'centralizer_order': int(commuting.sum()),
            'predicate_order': int(shaped.sum()),
            'equal': len(differ) == 0 and group.order == self.order_formula(g, p),
        }
        if len(differ):
            report['counterexample'] = group.matrices[differ[0]].tolist()
        self.logger.info(f"Centralizer shape check Sp({2 * g},{p}): equal={report['equal']}")
        return report

    def centralizer_generators(self, g: int, p: int) -> List[SympMatrix]:
        """T(a_i) for all i, T(b_i) for i >= 2, T(c_i), and -I"""
        twists = self.twist_images(g, p)
        gens = [twists[f"a{i}"] for i in range(1, g + 1)]
        gens += [twists[f"b{i}"] for i in range(2, g + 1)]
        gens += [twists[f"c{i}"] for i in range(1, g)]
        gens.append(-SympMatrix.identity(g, p))
        return gens

    def check_centralizer_generators(self, g: int, p: int,
                                     cap: Optional[int] = None) -> Dict[str, Any]:
        """The subgroup generated by centralizer_generators equals the brute-force centralizer"""
        group = self.symplectic_group(g, p, cap)
        commuting = self._centralizer_mask(group, g, p)
        centralizer = {group.elements[i] for i in np.nonzero(commuting)[0]}
        generated = MatGroup([m.entries for m in self.centralizer_generators(g, p)], p,
                             cap=group.order, name=f"<S, -I> in Sp({2 * g},{p})")
        report = {
            'lemma': 'centralizer-generators',
            'g': g,
            'p': p,
            'group_order': group.order,
            'order_formula': self.order_formula(g, p),
            'centralizer_order': len(centralizer),
            'generated_order': generated.order,
            'equal': (set(generated.elements) == centralizer
                      and group.order == self.order_formula(g, p)),
        }
        self.logger.info(f"Centralizer generation check Sp({2 * g},{p}): equal={report['equal']}")
        return report

    # Projective primitive homological quandles
    def primitive_classes(self, g: int, n: int) -> np.ndarray:
        """Canonical representatives of primitive vectors of Z_n^{2g} up to sign, by code"""
        d = 2 * g
        total = n ** d
        if total > self.config.max_group_size:
            raise CapExceeded(f"Z_{n}^{d} with {total} vectors", self.config.max_group_size)
        vectors = np.indices((n,) * d).reshape(d, -1).T.astype(np.int64)
        weights = n ** np.arange(d - 1, -1, -1, dtype=np.int64)
        with_modulus = np.concatenate([vectors, np.full((total, 1), n, dtype=np.int64)], axis=1)
        primitive = np.gcd.reduce(with_modulus, axis=1) == 1
        codes = vectors @ weights
        negated = ((-vectors) % n) @ weights
        canonical = primitive & (codes <= negated)
        return vectors[canonical]

    def p_quandle(self, g: int, n: int) -> FiniteQuandle:
        """P_{g,n}: primitive classes mod +-1 with x*y = x + form(x, y) y"""
        if n < 2:
            raise ValueError("n must be at least 2")
        reps = self.primitive_classes(g, n)
        size = len(reps)
        if size > self.config.max_quandle_size:
            raise ClosureTooLarge(f"P_{g},{n}", self.config.max_quandle_size)
        d = 2 * g
        weights = n ** np.arange(d - 1, -1, -1, dtype=np.int64)
        rep_codes = reps @ weights
        F = reps @ form_matrix(g) @ reps.T % n
        products = (reps[:, None, :] + F[:, :, None] * reps[None, :, :]) % n
        codes = np.minimum(products @ weights, ((-products) % n) @ weights)
        table = np.searchsorted(rep_codes, codes)
        labels = tuple('(' + ','.join(str(int(c)) for c in v) + ')' for v in reps)
        self.logger.info(f"P_{g},{n}: {size} elements")
        return FiniteQuandle(table, labels, f"P({g},{n})")

    def reduce_mod(self, v: Sequence[int], n: int) -> PrimClass:
        """Class of an integral primitive vector in P_{g,n}"""
        common = 0
        for entry in v:
            common = gcd(common, int(entry))
        if common != 1:
            raise NonPrimitive(f"{list(v)} is not primitive over the integers")
        return PrimClass.of(v, n)

    def integral_op(self, x: Sequence[int], y: Sequence[int]) -> np.ndarray:
        """x + form(x, y) y over the integers"""
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return x + self.form(x, y) * y

    def class_op(self, x: PrimClass, y: PrimClass) -> PrimClass:
        n = x.modulus
        return PrimClass.of(self.integral_op(x.vector, y.vector) % n, n)
