"""
Symplectic matrices over Z_p and primitive homology classes mod +-1

Basis order is a_1, b_1, a_2, b_2, ..., a_g, b_g and the form is
x^T J y with J block diagonal, one [[0, 1], [-1, 0]] block per handle.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np


@lru_cache(maxsize=None)
def _form_matrix(g: int) -> np.ndarray:
    block = np.array([[0, 1], [-1, 0]], dtype=np.int64)
    J = np.kron(np.eye(g, dtype=np.int64), block)
    J.setflags(write=False)
    return J


def form_matrix(g: int) -> np.ndarray:
    return _form_matrix(g)


def vector_code(vector: Sequence[int], modulus: int) -> int:
    """Base-modulus integer, most significant coordinate first"""
    code = 0
    for entry in vector:
        code = code * modulus + int(entry) % modulus
    return code


@dataclass(frozen=True, eq=False)
class SympMatrix:
    g: int
    p: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.int64) % self.p
        if entries.shape != (2 * self.g, 2 * self.g):
            raise ValueError(f"expected a {2 * self.g}x{2 * self.g} matrix, got {entries.shape}")
        J = form_matrix(self.g)
        if not np.array_equal(entries.T @ J @ entries % self.p, J % self.p):
            raise ValueError("matrix does not preserve the symplectic form")
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def identity(cls, g: int, p: int) -> 'SympMatrix':
        return cls(g, p, np.eye(2 * g, dtype=np.int64))

    def __matmul__(self, other: 'SympMatrix') -> 'SympMatrix':
        return SympMatrix(self.g, self.p, self.entries @ other.entries)

    def __neg__(self) -> 'SympMatrix':
        return SympMatrix(self.g, self.p, -self.entries)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SympMatrix) and self.p == other.p
                and np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash((self.p, self.entries.tobytes()))

    def inverse(self) -> 'SympMatrix':
        # A^-1 = J^-1 A^T J and J^-1 = -J
        J = form_matrix(self.g)
        return SympMatrix(self.g, self.p, -J @ self.entries.T @ J)

    def conjugate_by(self, other: 'SympMatrix') -> 'SympMatrix':
        """other^-1 @ self @ other"""
        return other.inverse() @ self @ other

    def apply(self, vector: Sequence[int]) -> np.ndarray:
        return self.entries @ np.asarray(vector, dtype=np.int64) % self.p

    def tolist(self):
        return self.entries.tolist()


@dataclass(frozen=True)
class PrimClass:
    """A primitive vector of Z_n^{2g} up to sign, stored by its canonical representative"""

    vector: Tuple[int, ...]
    modulus: int

    @classmethod
    def of(cls, vector: Sequence[int], modulus: int) -> 'PrimClass':
        v = tuple(int(x) % modulus for x in vector)
        neg = tuple((-x) % modulus for x in v)
        return cls(min(v, neg), modulus)

    @property
    def code(self) -> int:
        return vector_code(self.vector, self.modulus)

    def label(self) -> str:
        return '(' + ','.join(str(x) for x in self.vector) + ')'
