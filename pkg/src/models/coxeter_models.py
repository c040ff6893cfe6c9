"""
Coxeter types and Coxeter matrices
"""

import json
import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.models.errors import UnsupportedType

INFINITY = 0  # m_ij = 0 encodes "no relation"

_TYPE_PATTERN = re.compile(r'^\s*([A-Za-z])\s*_?\s*(\d+)\s*(?:\(\s*(\d+)\s*\))?\s*$')


@dataclass(frozen=True)
class CoxeterType:
    """Family letter, rank and, for I2, the dihedral parameter m"""

    family: str
    rank: int
    m: Optional[int] = None

    @property
    def name(self) -> str:
        if self.family == 'I':
            return f"I2({self.m})"
        return f"{self.family}{self.rank}"

    def matrix(self) -> Tuple[Tuple[int, ...], ...]:
        n = self.rank
        M = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        if self.family == 'I':
            M[0][1] = M[1][0] = self.m
        else:
            for i in range(n - 1):
                M[i][i + 1] = M[i + 1][i] = 3
            if self.family == 'B' and n >= 2:
                # s_0 is the sign change
                M[0][1] = M[1][0] = 4
            elif self.family == 'D' and n >= 4:
                M[0][1] = M[1][0] = 2
                M[0][2] = M[2][0] = 3
        return tuple(tuple(row) for row in M)


def parse_type(text: str) -> CoxeterType:
    """'A3', 'A_3', 'B3', 'I2(4)', 'D4' ..."""
    match = _TYPE_PATTERN.match(text)
    if not match:
        raise UnsupportedType(f"cannot read Coxeter type '{text}'")
    family, rank, m = match.group(1).upper(), int(match.group(2)), match.group(3)
    if family == 'I':
        if rank != 2 or m is None or int(m) < 2:
            raise UnsupportedType(f"dihedral type must look like I2(m) with m >= 2, got '{text}'")
        return CoxeterType('I', 2, int(m))
    if rank < 1:
        raise UnsupportedType(f"rank must be positive in '{text}'")
    return CoxeterType(family, rank)


def validate_matrix(matrix: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    n = len(matrix)
    M = tuple(tuple(int(v) for v in row) for row in matrix)
    if n == 0 or any(len(row) != n for row in M):
        raise UnsupportedType("Coxeter matrix must be square and non-empty")
    for i in range(n):
        if M[i][i] != 1:
            raise UnsupportedType("Coxeter matrix needs 1 on the diagonal")
        for j in range(n):
            if M[i][j] != M[j][i]:
                raise UnsupportedType("Coxeter matrix must be symmetric")
            if i != j and M[i][j] != INFINITY and M[i][j] < 2:
                raise UnsupportedType(f"off-diagonal entry {M[i][j]} must be >= 2 or 0")
    return M


def classify_matrix(matrix: Sequence[Sequence[int]]) -> CoxeterType:
    """Recognise A_n, B_n and I2(m) in the generator order used by CoxeterType.matrix"""
    M = validate_matrix(matrix)
    n = len(M)
    if n == 2 and M[0][1] not in (INFINITY, 3, 4):
        return CoxeterType('I', 2, M[0][1])
    for family in ('A', 'B'):
        candidate = CoxeterType(family, n)
        if candidate.matrix() == M:
            return candidate
    raise UnsupportedType(f"no finite realization for the Coxeter matrix {list(map(list, M))}")


def coxeter_matrix(spec: str) -> Tuple[Tuple[int, ...], ...]:
    """A type name or a JSON matrix"""
    text = spec.strip()
    if text.startswith('['):
        try:
            return validate_matrix(json.loads(text))
        except (json.JSONDecodeError, TypeError) as e:
            raise UnsupportedType(f"bad Coxeter matrix '{spec}': {e}")
    return parse_type(text).matrix()


def matrix_pairs(M: Sequence[Sequence[int]]) -> List[Tuple[int, int, int]]:
    """(i, j, m_ij) for i < j with a finite m_ij"""
    n = len(M)
    return [(i, j, M[i][j]) for i in range(n) for j in range(i + 1, n) if M[i][j] != INFINITY]
