"""
Finite quandle models: operation tables, congruences and inner groups

Convention used everywhere: ``table[x][y]`` is ``x * y`` (row x, column y),
so column y is the right translation S_y : x -> x * y.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.models.group_models import PermGroup, Permutation


@dataclass(frozen=True, eq=False)
class FiniteQuandle:
    """A size x size operation table; construction does not check the axioms"""

    table: np.ndarray
    labels: Optional[Tuple[str, ...]] = None
    name: str = ''

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise ValueError(f"operation table must be a non-empty square, got {table.shape}")
        if table.min() < 0 or table.max() >= table.shape[0]:
            raise ValueError("operation table entries out of range")
        table.setflags(write=False)
        object.__setattr__(self, 'table', table)
        if self.labels is not None:
            labels = tuple(str(label) for label in self.labels)
            if len(labels) != table.shape[0]:
                raise ValueError("one label per element is required")
            object.__setattr__(self, 'labels', labels)

    @property
    def size(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.size

    def op(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def inv_op(self, x: int, y: int) -> int:
        """The unique z with z * y = x"""
        return int(self.inverse_table[x, y])

    def power_op(self, x: int, y: int, exponent: int) -> int:
        """x *^k y for any integer k"""
        column = self.table[:, y] if exponent >= 0 else self.inverse_table[:, y]
        for _ in range(abs(exponent)):
            x = int(column[x])
        return x

    @cached_property
    def inverse_table(self) -> np.ndarray:
        n = self.size
        inverse = np.empty_like(self.table)
        rows = np.repeat(np.arange(n), n).reshape(n, n)
        cols = np.tile(np.arange(n), n).reshape(n, n)
        inverse[self.table, cols] = rows
        inverse.setflags(write=False)
        return inverse

    @cached_property
    def columns(self) -> Tuple[Permutation, ...]:
        """Right translations S_y as image tuples"""
        return tuple(tuple(int(v) for v in self.table[:, y]) for y in range(self.size))

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def same_table(self, other: 'FiniteQuandle') -> bool:
        return self.size == other.size and bool(np.array_equal(self.table, other.table))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'size': self.size}
        if self.labels:
            data['labels'] = list(self.labels)
        data['table'] = self.table.tolist()
        return data

    def __repr__(self):
        title = self.name or 'quandle'
        return f"FiniteQuandle({title}, size={self.size})"


@dataclass(frozen=True)
class Congruence:
    """Partition of element indices; ``representative[x]`` is the least member of x's block"""

    representative: Tuple[int, ...]

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> 'Congruence':
        least: Dict[int, int] = {}
        for x, label in enumerate(labels):
            least.setdefault(int(label), x)
        return cls(tuple(least[int(label)] for label in labels))

    @classmethod
    def discrete(cls, size: int) -> 'Congruence':
        return cls(tuple(range(size)))

    @property
    def size(self) -> int:
        return len(self.representative)

    @cached_property
    def blocks(self) -> Tuple[Tuple[int, ...], ...]:
        grouped: Dict[int, List[int]] = {}
        for x, rep in enumerate(self.representative):
            grouped.setdefault(rep, []).append(x)
        return tuple(tuple(members) for _, members in sorted(grouped.items()))

    @property
    def num_blocks(self) -> int:
        return len(set(self.representative))

    @property
    def is_discrete(self) -> bool:
        return self.num_blocks == self.size

    @property
    def is_total(self) -> bool:
        return self.num_blocks == 1

    def block_index(self) -> np.ndarray:
        """Element -> block number, blocks numbered by least member"""
        reps = sorted(set(self.representative))
        position = {rep: i for i, rep in enumerate(reps)}
        return np.array([position[r] for r in self.representative], dtype=np.int64)

    def refines(self, other: 'Congruence') -> bool:
        """Every block of self lies inside a block of other"""
        return all(other.representative[x] == other.representative[self.representative[x]]
                   for x in range(self.size))


@dataclass(frozen=True)
class InnerGroup:
    """Inn(Q): the permutation group generated by the right translations"""

    generators: Tuple[Permutation, ...]
    group: PermGroup = field(repr=False)

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def degree(self) -> int:
        return self.group.degree
