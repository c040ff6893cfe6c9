"""
Finite group models: permutation groups and mod-p matrix groups

Products compose left to right: ``multiply(a, b)`` means "apply a, then b".
For permutations this gives ``(a*b)[i] = b[a[i]]``, the same convention as
sympy's ``Permutation`` product; for matrices acting on row vectors it is the
ordinary product ``a @ b``.
"""

from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation as SymPermutation
from sympy.combinatorics import PermutationGroup

from src.models.errors import GroupTooLarge

Permutation = Tuple[int, ...]


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply p, then q"""
    return tuple(q[i] for i in p)


def invert(p: Permutation) -> Permutation:
    inverse = [0] * len(p)
    for i, image in enumerate(p):
        inverse[image] = i
    return tuple(inverse)


def as_sympy(p: Sequence[int]) -> SymPermutation:
    return SymPermutation([int(i) for i in p])


def cycle_type(p: Sequence[int]) -> Tuple[int, ...]:
    """Cycle lengths in decreasing order, fixed points included"""
    structure = as_sympy(p).cycle_structure
    return tuple(sorted((length for length, count in structure.items()
                         for _ in range(count)), reverse=True))


def permutation_order(p: Sequence[int]) -> int:
    return int(as_sympy(p).order())


def cycle_notation(p: Sequence[int]) -> str:
    """1-based cycle notation, e.g. ``(1 2)(3 4)``; the identity is ``()``"""
    parts = as_sympy(p).cyclic_form
    if not parts:
        return '()'
    return ''.join('(' + ' '.join(str(x + 1) for x in c) + ')' for c in parts)


def parse_cycles(text: str, degree: int) -> Permutation:
    """Inverse of :func:`cycle_notation`"""
    cycles = []
    body = text.replace(' ', ',').strip()
    for chunk in body.split(')'):
        chunk = chunk.strip(',(')
        if not chunk:
            continue
        points = [int(tok) - 1 for tok in chunk.split(',') if tok]
        if any(not 0 <= pt < degree for pt in points) or len(set(points)) != len(points):
            raise ValueError(f"bad cycle '({chunk})' for degree {degree}")
        cycles.append(points)
    return tuple(int(i) for i in SymPermutation(cycles, size=degree).array_form)


class FiniteGroup:
    """
    A finite group given by generators, enumerated by breadth-first search.

    Elements are hashable keys; ``elements[0]`` is the identity and the rest
    follow BFS order from right multiplication by the generators.
    """

    name = 'group'

    def __init__(self, generators: Iterable[Hashable], cap: int = 1_000_000,
                 name: Optional[str] = None):
        if name:
            self.name = name
        self.generators: Tuple[Hashable, ...] = tuple(generators)
        self.cap = cap
        self.elements: List[Hashable] = []
        self.index: Dict[Hashable, int] = {}
        self._enumerate()

    # subclasses provide the arithmetic
    def identity(self) -> Hashable:
        raise NotImplementedError

    def multiply(self, a: Hashable, b: Hashable) -> Hashable:
        raise NotImplementedError

    def inverse(self, a: Hashable) -> Hashable:
        raise NotImplementedError

    def _enumerate(self):
        identity = self.identity()
        self.elements = [identity]
        self.index = {identity: 0}
        position = 0
        while position < len(self.elements):
            current = self.elements[position]
            position += 1
            for gen in self.generators:
                product = self.multiply(current, gen)
                if product not in self.index:
                    if len(self.elements) >= self.cap:
                        raise GroupTooLarge(f"group {self.name}", self.cap)
                    self.index[product] = len(self.elements)
                    self.elements.append(product)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, element: Hashable) -> bool:
        return element in self.index

    def conjugate(self, x: Hashable, y: Hashable) -> Hashable:
        """y x y^-1"""
        return self.multiply(self.multiply(y, x), self.inverse(y))

    def element_order(self, x: Hashable) -> int:
        identity = self.identity()
        power, order = x, 1
        while power != identity:
            power = self.multiply(power, x)
            order += 1
        return order

    def describe(self, x: Hashable) -> str:
        return str(self.index[x])

    def __repr__(self):
        return f"{self.__class__.__name__}({self.name}, order={self.order})"


class PermGroup(FiniteGroup):
    """Permutation group on the points 0..degree-1"""

    def __init__(self, generators: Iterable[Sequence[int]], degree: Optional[int] = None,
                 cap: int = 1_000_000, name: Optional[str] = None):
        gens = [tuple(int(i) for i in g) for g in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree is required for a group without generators")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise ValueError(f"{g} is not a permutation of degree {degree}")
        self.degree = degree
        super().__init__(gens, cap=cap, name=name)

    def identity(self) -> Permutation:
        return tuple(range(self.degree))

    def multiply(self, a: Permutation, b: Permutation) -> Permutation:
        return compose(a, b)

    def inverse(self, a: Permutation) -> Permutation:
        return invert(a)

    def describe(self, x: Permutation) -> str:
        return cycle_notation(x)

    def to_sympy(self) -> PermutationGroup:
        """The same group as a sympy ``PermutationGroup``, built independently of the BFS"""
        if not self.generators:
            return PermutationGroup([SymPermutation(self.degree - 1)])
        return PermutationGroup([as_sympy(g) for g in self.generators])


class MatGroup(FiniteGroup):
    """Group of invertible dim x dim matrices over Z_p"""

    def __init__(self, generators: Iterable[np.ndarray], modulus: int,
                 cap: int = 1_000_000, name: Optional[str] = None):
        mats = [np.asarray(g, dtype=np.int64) % modulus for g in generators]
        if not mats:
            raise ValueError("a matrix group needs at least one generator")
        self.dim = mats[0].shape[0]
        self.modulus = modulus
        self._generator_arrays = mats
        self._stack: Optional[np.ndarray] = None
        super().__init__([self.key(m) for m in mats], cap=cap, name=name)

    def key(self, matrix: np.ndarray) -> bytes:
        return np.ascontiguousarray(matrix, dtype=np.int64).tobytes()

    def matrix(self, key: bytes) -> np.ndarray:
        return np.frombuffer(key, dtype=np.int64).reshape(self.dim, self.dim)

    def identity(self) -> bytes:
        return self.key(np.eye(self.dim, dtype=np.int64))

    def multiply(self, a: bytes, b: bytes) -> bytes:
        return self.key(self.matrix(a) @ self.matrix(b) % self.modulus)

    def inverse(self, a: bytes) -> bytes:
        # the inverse is the last power before the identity
        identity = self.identity()
        previous, power = identity, a
        while power != identity:
            previous, power = power, self.multiply(power, a)
        return previous

    def _enumerate(self):
        # batched BFS: multiply the whole frontier by each generator at once
        p = self.modulus
        identity = np.eye(self.dim, dtype=np.int64)
        self.elements = [self.key(identity)]
        self.index = {self.elements[0]: 0}
        blocks = [identity[None, :, :]]
        frontier = identity[None, :, :]
        while len(frontier):
            fresh = []
            for gen in self._generator_arrays:
                products = np.matmul(frontier, gen) % p
                for mat in products:
                    k = self.key(mat)
                    if k not in self.index:
                        if len(self.elements) >= self.cap:
                            raise GroupTooLarge(f"matrix group {self.name}", self.cap)
                        self.index[k] = len(self.elements)
                        self.elements.append(k)
                        fresh.append(mat)
            frontier = np.array(fresh, dtype=np.int64).reshape(-1, self.dim, self.dim)
            if len(frontier):
                blocks.append(frontier)
        self._stack = np.concatenate(blocks, axis=0)

    @property
    def matrices(self) -> np.ndarray:
        """All elements as an (order, dim, dim) array, in ``elements`` order"""
        return self._stack

    def describe(self, x: bytes) -> str:
        return str(self.matrix(x).tolist())
