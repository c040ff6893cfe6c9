"""
Quandle service: axioms, constructions, congruences and isomorphism search
"""

import json
import logging
import sys
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from math import gcd
from pathlib import Path
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.models.errors import (AxiomViolation, BudgetExceeded, ClosureTooLarge, GroupTooLarge,
                               InvalidQuandleFile)
from src.models.group_models import FiniteGroup, PermGroup, cycle_type, permutation_order
from src.models.presentation_models import GroupPresentation, GroupWord
from src.models.quandle_models import Congruence, FiniteQuandle, InnerGroup
from src.utils.config import Config
from src.utils.union_find import UnionFind, find_orbits

Pair = Tuple[int, int]


class QuandleService:
    """Service for finite quandles given by operation tables"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()
        self.logger = logging.getLogger(__name__)

    # Axioms
    def check_axioms(self, table: Union[np.ndarray, Sequence[Sequence[int]]],
                     generators: Optional[Sequence[int]] = None) -> Optional[AxiomViolation]:
        """
        Return the first violated axiom with a witness, or None.

        With ``generators``, right-distributivity is only checked against those
        columns. That suffices when every element is a word in the generators,
        since each right translation then lies in the group the generator
        translations generate.
        """
        T = np.asarray(table, dtype=np.int64)
        n = T.shape[0]
        identity = np.arange(n)

        bad = np.nonzero(np.diagonal(T) != identity)[0]
        if len(bad):
            return AxiomViolation('idempotency', (bad[0],))

        for y in range(n):
            column = T[:, y]
            if len(np.unique(column)) != n:
                first: Dict[int, int] = {}
                for x, v in enumerate(column.tolist()):
                    if v in first:
                        return AxiomViolation('right-bijectivity', (first[v], x, y))
                    first[v] = x

        for z in (range(n) if generators is None else sorted(set(generators))):
            column = T[:, z]
            left = column[T]                      # (x*y)*z
            right = T[column[:, None], column[None, :]]  # (x*z)*(y*z)
            mismatch = np.argwhere(left != right)
            if len(mismatch):
                x, y = mismatch[0]
                return AxiomViolation('right-distributivity', (x, y, z))
        return None

    def validate_quandle(self, table: Union[np.ndarray, Sequence[Sequence[int]]],
                         labels: Optional[Sequence[str]] = None,
                         name: str = '',
                         generators: Optional[Sequence[int]] = None) -> FiniteQuandle:
        """Build a FiniteQuandle, raising AxiomViolation if the table is not a quandle"""
        T = np.asarray(table, dtype=np.int64)
        if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
            raise InvalidQuandleFile(f"table must be a non-empty square, got shape {T.shape}")
        if T.min() < 0 or T.max() >= T.shape[0]:
            raise InvalidQuandleFile(f"table entries must lie in [0, {T.shape[0]})")
        violation = self.check_axioms(T, generators)
        if violation is not None:
            self.logger.debug(f"Rejected table: {violation}")
            raise violation
        return FiniteQuandle(T, tuple(labels) if labels else None, name)

    def is_quandle(self, table) -> bool:
        try:
            self.validate_quandle(table)
        except (AxiomViolation, InvalidQuandleFile):
            return False
        return True

    # Small families
    def trivial_quandle(self, n: int) -> FiniteQuandle:
        table = np.repeat(np.arange(n)[:, None], n, axis=1)
        return FiniteQuandle(table, name=f"T{n}")

    def alexander_quandle(self, n: int, t: int) -> FiniteQuandle:
        """Z_n with x*y = t*x + (1-t)*y; t must be a unit mod n"""
        if gcd(t, n) != 1:
            raise ValueError(f"{t} is not a unit mod {n}")
        x = np.arange(n)[:, None]
        y = np.arange(n)[None, :]
        return FiniteQuandle((t * x + (1 - t) * y) % n, name=f"Alex({n},{t})")

    def dihedral_quandle(self, n: int) -> FiniteQuandle:
        """R_n: i*j = 2j - i mod n"""
        q = self.alexander_quandle(n, n - 1)
        return FiniteQuandle(q.table, name=f"R{n}")

    # Group constructions
    def conjugation_quandle(self, group: FiniteGroup) -> FiniteQuandle:
        if group.order > self.config.max_quandle_size:
            raise GroupTooLarge(f"conjugation quandle of {group.name}",
                                self.config.max_quandle_size)
        return self._conjugation_table(group, list(group.elements), f"Conj({group.name})")

    def dehn_quandle(self, group: FiniteGroup, subset: Iterable[Hashable]) -> FiniteQuandle:
        """D(A^G): the union of the conjugacy classes of A, under x*y = y x y^-1"""
        seeds = list(subset)
        if not seeds:
            raise ValueError("the subset A must be non-empty")
        for a in seeds:
            if a not in group:
                raise ValueError(f"{a!r} is not an element of {group.name}")
        cap = self.config.max_quandle_size
        members = set()
        for a in seeds:
            for g in group.elements:
                members.add(group.conjugate(a, g))
                if len(members) > cap:
                    raise ClosureTooLarge(f"Dehn quandle in {group.name}", cap)
        ordered = sorted(members, key=group.index.__getitem__)
        self.logger.debug(f"Dehn quandle in {group.name}: {len(ordered)} elements")
        return self._conjugation_table(group, ordered, f"D({group.name})")

    def _conjugation_table(self, group: FiniteGroup, elements: List[Hashable],
                           name: str) -> FiniteQuandle:
        position = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        table = np.empty((n, n), dtype=np.int64)
        for j, y in enumerate(elements):
            y_inv = group.inverse(y)
            for i, x in enumerate(elements):
                table[i, j] = position[group.multiply(group.multiply(y, x), y_inv)]
        labels = tuple(group.describe(e) for e in elements)
        return FiniteQuandle(table, labels, name)

    # Columns and inner group
    def power_table(self, q: FiniteQuandle, n: int) -> np.ndarray:
        """Entry (x, y) is x *^n y"""
        size = q.size
        cols = np.broadcast_to(np.arange(size)[None, :], (size, size))
        current = np.broadcast_to(np.arange(size)[:, None], (size, size)).copy()
        source = q.table if n >= 0 else q.inverse_table
        for _ in range(abs(n)):
            current = source[current, cols]
        return current

    def is_n_quandle(self, q: FiniteQuandle, n: int) -> bool:
        if n < 1:
            raise ValueError("n must be positive")
        powered = self.power_table(q, n)
        return bool(np.all(powered == np.arange(q.size)[:, None]))

    def nu_profile(self, q: FiniteQuandle) -> Dict[int, int]:
        """x -> order of the right translation S_x"""
        return {x: permutation_order(q.columns[x]) for x in range(q.size)}

    def inner_group(self, q: FiniteQuandle) -> InnerGroup:
        unique = sorted(set(q.columns))
        group = PermGroup(unique, degree=q.size, cap=self.config.max_group_size,
                          name=f"Inn({q.name})")
        return InnerGroup(q.columns, group)

    def orbits(self, q: FiniteQuandle) -> List[Tuple[int, ...]]:
        return find_orbits(set(q.columns), q.size)

    def is_connected(self, q: FiniteQuandle) -> bool:
        return len(self.orbits(q)) == 1

    # Homomorphisms
    def is_homomorphism(self, q1: FiniteQuandle, q2: FiniteQuandle,
                        mapping: Sequence[int]) -> bool:
        phi = np.asarray(mapping, dtype=np.int64)
        if phi.shape != (q1.size,):
            return False
        return bool(np.array_equal(phi[q1.table], q2.table[phi[:, None], phi[None, :]]))

    def subquandle_closure(self, q: FiniteQuandle, seeds: Iterable[int]) -> List[int]:
        members: List[int] = []
        inside = set()
        queue = deque()
        for s in seeds:
            if s not in inside:
                inside.add(s)
                members.append(s)
                queue.append(s)
        T, I = q.table, q.inverse_table
        while queue:
            a = queue.popleft()
            for b in list(members):
                for z in (T[a, b], T[b, a], I[a, b], I[b, a]):
                    z = int(z)
                    if z not in inside:
                        inside.add(z)
                        members.append(z)
                        queue.append(z)
        return members

    def generating_set(self, q: FiniteQuandle) -> List[int]:
        generators: List[int] = []
        covered = set()
        for x in range(q.size):
            if x not in covered:
                generators.append(x)
                covered = set(self.subquandle_closure(q, generators))
        return generators

    def _element_invariants(self, q: FiniteQuandle) -> List[Tuple]:
        orbit_size = {}
        for orbit in self.orbits(q):
            for x in orbit:
                orbit_size[x] = len(orbit)
        return [(orbit_size[x], cycle_type(q.columns[x])) for x in range(q.size)]

    def find_isomorphism(self, q1: FiniteQuandle, q2: FiniteQuandle) -> Optional[List[int]]:
        """A bijection phi with phi(x*y) = phi(x)*phi(y), or None when none exists"""
        if q1.size != q2.size:
            return None
        inv1 = self._element_invariants(q1)
        inv2 = self._element_invariants(q2)
        if sorted(inv1) != sorted(inv2):
            self.logger.debug("Isomorphism ruled out by orbit sizes / column cycle types")
            return None

        generators = self.generating_set(q1)
        candidates = {g: [y for y in range(q2.size) if inv2[y] == inv1[g]] for g in generators}
        n = q1.size

        def search(level: int, mapping: List[int], used: set) -> Optional[List[int]]:
            if level == len(generators):
                return mapping if len(used) == n else None
            g = generators[level]
            for image in candidates[g]:
                if image in used:
                    continue
                extended = self._extend_mapping(q1, q2, mapping, used, g, image)
                if extended is None:
                    continue
                found = search(level + 1, *extended)
                if found is not None:
                    return found
            return None

        result = search(0, [-1] * n, set())
        if result is not None and not self.is_homomorphism(q1, q2, result):
            # cannot happen if the closure checks are right
            self.logger.error("Isomorphism search produced a non-homomorphism")
            return None
        return result

    def _extend_mapping(self, q1: FiniteQuandle, q2: FiniteQuandle, mapping: List[int],
                        used: set, x: int, image: int):
        mapping = list(mapping)
        used = set(used)
        T1, I1, T2, I2 = q1.table, q1.inverse_table, q2.table, q2.inverse_table
        known = [a for a in range(q1.size) if mapping[a] != -1]
        mapping[x] = image
        used.add(image)
        known.append(x)
        queue = deque([x])
        while queue:
            a = queue.popleft()
            for b in list(known):
                for src, dst, u, v in ((T1, T2, a, b), (T1, T2, b, a),
                                       (I1, I2, a, b), (I1, I2, b, a)):
                    z = int(src[u, v])
                    w = int(dst[mapping[u], mapping[v]])
                    if mapping[z] == -1:
                        if w in used:
                            return None
                        mapping[z] = w
                        used.add(w)
                        known.append(z)
                        queue.append(z)
                    elif mapping[z] != w:
                        return None
        return mapping, used

    # Congruences
    def congruence_generated_by(self, q: FiniteQuandle, pairs: Iterable[Pair]) -> Congruence:
        """Least congruence containing the pairs (union-find closure with cancellation)"""
        n = q.size
        T = q.table.tolist()
        I = q.inverse_table.tolist()
        uf = UnionFind(n)
        queue = deque()
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"pair ({a}, {b}) out of range for size {n}")
            if uf.union(a, b):
                queue.append((a, b))
        while queue:
            a, b = queue.popleft()
            Ta, Tb, Ia, Ib = T[a], T[b], I[a], I[b]
            for y in range(n):
                Ty = T[y]
                for u, v in ((Ta[y], Tb[y]), (Ty[a], Ty[b]), (Ia[y], Ib[y])):
                    if uf.union(u, v):
                        queue.append((u, v))
        return Congruence.from_labels(uf.labels())

    def join(self, q: FiniteQuandle, first: Congruence, second: Congruence) -> Congruence:
        pairs = [(x, r) for x, r in enumerate(first.representative) if x != r]
        pairs += [(x, r) for x, r in enumerate(second.representative) if x != r]
        return self.congruence_generated_by(q, pairs)

    def is_congruence(self, q: FiniteQuandle, congruence: Congruence) -> bool:
        block = congruence.block_index()
        T = q.table
        # x*y must only depend on the blocks of x and y
        image = block[T]
        reps = np.array(congruence.representative)
        return bool(np.array_equal(image, block[T[reps[:, None], reps[None, :]]]))

    def quotient(self, q: FiniteQuandle, congruence: Congruence) -> FiniteQuandle:
        block = congruence.block_index()
        reps = np.array(sorted(set(congruence.representative)), dtype=np.int64)
        table = block[q.table[reps[:, None], reps[None, :]]]
        labels = tuple(q.label(int(r)) for r in reps) if q.labels else None
        return FiniteQuandle(table, labels, f"{q.name}/~" if q.name else '')

    @staticmethod
    def _transport(congruence: Congruence, perm: Sequence[int]) -> Congruence:
        labels = [0] * congruence.size
        for x, rep in enumerate(congruence.representative):
            labels[perm[x]] = perm[rep]
        return Congruence.from_labels(labels)

    def principal_congruences(self, q: FiniteQuandle) -> List[Congruence]:
        """The distinct congruences generated by a single pair, in a fixed order"""
        n = q.size
        automorphisms = sorted(set(q.columns))
        parent: Dict[Pair, Optional[Tuple[Pair, Tuple[int, ...]]]] = {}
        order: List[Pair] = []
        roots: List[Pair] = []
        for a in range(n):
            for b in range(a + 1, n):
                if (a, b) in parent:
                    continue
                parent[(a, b)] = None
                roots.append((a, b))
                order.append((a, b))
                stack = [(a, b)]
                while stack:
                    u, v = stack.pop()
                    for s in automorphisms:
                        key = (min(s[u], s[v]), max(s[u], s[v]))
                        if key not in parent:
                            parent[key] = ((u, v), s)
                            order.append(key)
                            stack.append(key)

        self.logger.debug(f"{len(roots)} Inn-orbits on {len(order)} pairs")
        with ThreadPoolExecutor(max_workers=self.config.jobs) as pool:
            closures = list(pool.map(lambda pair: self.congruence_generated_by(q, [pair]), roots))

        congruence_of: Dict[Pair, Congruence] = dict(zip(roots, closures))
        for pair in order:
            if pair not in congruence_of:
                source, s = parent[pair]
                congruence_of[pair] = self._transport(congruence_of[source], s)
        return sorted(set(congruence_of.values()), key=lambda c: c.representative)

    def smallest_quotient(self, q: FiniteQuandle, budget: Optional[int] = None
                          ) -> Optional[Congruence]:
        """Non-discrete congruence with the fewest blocks among those with at least 2 blocks"""
        budget = budget if budget is not None else self.config.lattice_budget
        if q.size < 3:
            return None
        principals = [c for c in self.principal_congruences(q) if not c.is_total]
        best: Optional[Congruence] = None
        seen = set(principals)
        frontier = list(principals)
        explored = len(principals)
        while frontier:
            following = []
            for theta in frontier:
                if best is None or theta.num_blocks < best.num_blocks:
                    best = theta
                    if best.num_blocks == 2:
                        return best
                for pi in principals:
                    if pi.refines(theta):
                        continue
                    joined = self.join(q, theta, pi)
                    if joined.is_total or joined in seen:
                        continue
                    seen.add(joined)
                    following.append(joined)
                    explored += 1
                    if explored > budget:
                        raise BudgetExceeded("congruence lattice search", budget)
            frontier = following
        self.logger.info(f"Congruence lattice search visited {explored} congruences")
        return best

    def smallest_nontrivial_quotient(self, q: FiniteQuandle,
                                     budget: Optional[int] = None) -> Optional[int]:
        best = self.smallest_quotient(q, budget)
        return best.num_blocks if best is not None else None

    def smallest_quotient_size(self, q: FiniteQuandle, budget: Optional[int] = None) -> int:
        """Smallest quandle with at least 2 elements that q maps onto, q itself included"""
        if q.size < 2:
            return q.size
        smallest = self.smallest_nontrivial_quotient(q, budget)
        return smallest if smallest is not None else q.size

    def finite_n_quotient(self, q: FiniteQuandle, n: int) -> FiniteQuandle:
        """(Q)_n: the quotient by x *^n y = x"""
        if n < 2:
            raise ValueError("n must be at least 2")
        powered = self.power_table(q, n)
        xs, ys = np.nonzero(powered != np.arange(q.size)[:, None])
        pairs = [(int(x), int(powered[x, y])) for x, y in zip(xs, ys)]
        congruence = self.congruence_generated_by(q, pairs)
        result = self.quotient(q, congruence)
        return FiniteQuandle(result.table, result.labels, f"({q.name})_{n}" if q.name else '')

    def fq_presentation(self, q: FiniteQuandle) -> GroupPresentation:
        """F(Q) = Env(Q)/Z(Q) on generators e_x"""
        names = tuple(f"e{x}" for x in range(q.size))
        relators = []
        T = q.table
        for x in range(q.size):
            for y in range(q.size):
                # e_y e_x e_y^-1 e_{x*y}^-1
                relators.append(GroupWord(((y, 1), (x, 1), (y, -1), (int(T[x, y]), -1))))
        for x, nu in self.nu_profile(q).items():
            relators.append(GroupWord.power(x, nu))
        return GroupPresentation(names, relators, f"F({q.name})")

    # JSON files
    def quandle_from_dict(self, data: Dict[str, Any], unchecked: bool = False) -> FiniteQuandle:
        if not isinstance(data, dict) or 'table' not in data:
            raise InvalidQuandleFile("expected an object with a 'table' entry")
        table = data['table']
        size = data.get('size', len(table))
        if (not isinstance(table, list) or len(table) != size
                or any(not isinstance(row, list) or len(row) != size for row in table)):
            raise InvalidQuandleFile(f"'table' must be a {size}x{size} list of lists")
        labels = data.get('labels')
        if labels is not None and len(labels) != size:
            raise InvalidQuandleFile("'labels' must have one entry per element")
        name = data.get('name', '')
        if unchecked:
            try:
                return FiniteQuandle(np.array(table), labels, name)
            except ValueError as e:
                raise InvalidQuandleFile(str(e))
        return self.validate_quandle(table, labels, name)

    def load_quandle(self, path: Union[str, Path], unchecked: bool = False) -> FiniteQuandle:
        try:
            if str(path) == '-':
                data = json.load(sys.stdin)
            else:
                with open(path, 'r') as f:
                    data = json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidQuandleFile(f"{path}: {e}")
        return self.quandle_from_dict(data, unchecked)

    def save_quandle(self, q: FiniteQuandle, path: Union[str, Path]) -> str:
        text = json.dumps(q.to_dict())
        if str(path) == '-':
            sys.stdout.write(text + '\n')
        else:
            with open(path, 'w') as f:
                f.write(text + '\n')
            self.logger.info(f"Saved quandle of size {q.size} to {path}")
        return text
