"""
Group service: permutation realizations of finite groups, conjugacy and
Coxeter quandles
"""

import json
import logging
import re
from typing import Hashable, List, Optional, Sequence, Tuple

from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from src.models.coxeter_models import CoxeterType, classify_matrix, coxeter_matrix, parse_type
from src.models.errors import UnsupportedType
from src.models.group_models import FiniteGroup, PermGroup, Permutation, cycle_type, parse_cycles
from src.models.presentation_models import GroupPresentation
from src.models.quandle_models import FiniteQuandle
from src.services.quandle_service import QuandleService
from src.utils.config import Config

_GROUP_SPEC = re.compile(r'^\s*([A-Za-z]+)\s*\(?\s*(\d+)\s*\)?\s*$')


class GroupService:
    """Service for finite groups realized as permutation groups"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()
        self.logger = logging.getLogger(__name__)
        self.quandles = QuandleService(self.config)

    @staticmethod
    def _swap(degree: int, *pairs: Tuple[int, int]) -> Permutation:
        images = list(range(degree))
        for a, b in pairs:
            images[a], images[b] = b, a
        return tuple(images)

    def symmetric_group(self, n: int) -> PermGroup:
        """Sigma_n generated by the adjacent transpositions (i i+1)"""
        if n < 1:
            raise ValueError("n must be positive")
        gens = [self._swap(n, (i, i + 1)) for i in range(n - 1)]
        return PermGroup(gens, degree=n, cap=self.config.max_group_size, name=f"S{n}")

    def cyclic_group(self, n: int) -> PermGroup:
        if n < 1:
            raise ValueError("n must be positive")
        rotation = tuple((i + 1) % n for i in range(n))
        return PermGroup([rotation], degree=n, cap=self.config.max_group_size, name=f"Z{n}")

    def dihedral_group(self, m: int) -> PermGroup:
        """Symmetries of the m-gon, generated by the reflections i -> -i and i -> 1 - i"""
        if m < 3:
            raise ValueError("the dihedral group needs m >= 3")
        s0 = tuple((-i) % m for i in range(m))
        s1 = tuple((1 - i) % m for i in range(m))
        return PermGroup([s0, s1], degree=m, cap=self.config.max_group_size, name=f"D{m}")

    def signed_permutation_group(self, n: int) -> PermGroup:
        """
        The hyperoctahedral group B_n acting on the 2n points +1..+n, -1..-n
        (point i is +(i+1) and point n+i is -(i+1)). Generator 0 flips the sign
        of the first coordinate, generator i swaps coordinates i and i+1.
        """
        if n < 1:
            raise ValueError("n must be positive")
        gens = [self._swap(2 * n, (0, n))]
        for i in range(1, n):
            gens.append(self._swap(2 * n, (i - 1, i), (n + i - 1, n + i)))
        return PermGroup(gens, degree=2 * n, cap=self.config.max_group_size, name=f"B{n}")

    def group_from_spec(self, spec: str) -> PermGroup:
        """'S5', 'Z4', 'D4' (dihedral of order 8), 'B3', or 'perm:[[...], ...]' generators"""
        text = spec.strip()
        if text.startswith('perm:'):
            try:
                gens = json.loads(text[len('perm:'):])
            except json.JSONDecodeError as e:
                raise ValueError(f"bad generator list in '{spec}': {e}")
            return PermGroup(gens, cap=self.config.max_group_size, name='G')
        match = _GROUP_SPEC.match(text)
        if not match:
            raise ValueError(f"unknown group '{spec}'")
        family, n = match.group(1).upper(), int(match.group(2))
        builders = {'S': self.symmetric_group, 'SYM': self.symmetric_group,
                    'Z': self.cyclic_group, 'C': self.cyclic_group,
                    'D': self.dihedral_group, 'DIH': self.dihedral_group,
                    'B': self.signed_permutation_group}
        if family not in builders:
            raise ValueError(f"unknown group family '{family}'")
        return builders[family](n)

    def parse_subset(self, group: PermGroup, spec: str) -> List[Permutation]:
        """'generators', 'transpositions', 'all' or ';'-separated cycle notation"""
        text = spec.strip().lower()
        if text == 'generators':
            return list(group.generators)
        if text == 'all':
            return list(group.elements)
        if text == 'transpositions':
            return [e for e in group.elements if cycle_type(e)[:2] == (2, 1) or
                    cycle_type(e) == (2,)]
        elements = [parse_cycles(chunk, group.degree) for chunk in spec.split(';') if chunk.strip()]
        missing = [e for e in elements if e not in group]
        if missing:
            raise ValueError(f"{len(missing)} listed elements are not in {group.name}")
        return elements

    # Independent order checks
    def sympy_order(self, group: PermGroup) -> int:
        """Order of the group as computed by sympy's Schreier-Sims"""
        return int(group.to_sympy().order())

    def presentation_order(self, presentation: GroupPresentation) -> int:
        """
        Order of a finite group presentation from sympy's own coset
        enumeration. Does not terminate on infinite groups.
        """
        free, *gens = free_group(','.join(f"x{i}" for i in range(presentation.rank)))
        relators = []
        for word in presentation.relators:
            element = free.identity
            for gen, sign in word.letters:
                element = element * gens[gen] ** sign
            relators.append(element)
        order = FpGroup(free, relators).order()
        self.logger.info(f"sympy order of {presentation.name or 'presentation'}: {order}")
        return int(order)

    # Conjugacy
    def conjugacy_class(self, group: FiniteGroup, x: Hashable) -> List[Hashable]:
        members = {group.conjugate(x, g) for g in group.elements}
        return sorted(members, key=group.index.__getitem__)

    def centralizer(self, group: FiniteGroup, x: Hashable) -> List[Hashable]:
        return [g for g in group.elements if group.multiply(g, x) == group.multiply(x, g)]

    def conjugacy_classes(self, group: FiniteGroup) -> List[List[Hashable]]:
        classes = []
        covered = set()
        for x in group.elements:
            if x not in covered:
                cls = self.conjugacy_class(group, x)
                covered.update(cls)
                classes.append(cls)
        return classes

    # Coxeter systems
    def coxeter_system(self, coxeter_type: CoxeterType) -> Tuple[PermGroup, Sequence[Permutation]]:
        """Permutation realization W with its simple reflections, in matrix order"""
        family, rank = coxeter_type.family, coxeter_type.rank
        if family == 'A':
            group = self.symmetric_group(rank + 1)
        elif family == 'B':
            if rank > 4:
                raise UnsupportedType(f"B{rank} is only realized up to rank 4")
            group = self.signed_permutation_group(rank)
        elif family == 'I':
            if coxeter_type.m < 3:
                raise UnsupportedType("I2(2) is reducible; use A1 x A1 directly")
            group = self.dihedral_group(coxeter_type.m)
        else:
            raise UnsupportedType(f"no finite realization for type {coxeter_type.name}")
        return group, list(group.generators)

    def coxeter_quandle(self, spec: str) -> FiniteQuandle:
        """D(S^W) for a type name ('A3', 'B2', 'I2(4)') or a JSON Coxeter matrix"""
        text = spec.strip()
        if text.startswith('['):
            coxeter_type = classify_matrix(coxeter_matrix(text))
        else:
            coxeter_type = parse_type(text)
        group, reflections = self.coxeter_system(coxeter_type)
        quandle = self.quandles.dehn_quandle(group, reflections)
        self.logger.info(f"Coxeter quandle {coxeter_type.name}: {quandle.size} reflections")
        return FiniteQuandle(quandle.table, quandle.labels, f"coxeter({coxeter_type.name})")
