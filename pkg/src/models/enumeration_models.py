"""
Outcome of a coset enumeration run
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from src.models.presentation_models import GroupWord, QWord
from src.models.quandle_models import FiniteQuandle

FINISHED = 'finished'
OVERFLOW = 'overflow'


@dataclass(frozen=True, eq=False)
class EnumOutcome:
    """
    Either a finished enumeration or an overflow.

    A finished quandle run carries ``quandle`` and one representative QWord
    per element; a finished group run carries ``order``, the compressed coset
    table (one column per generator and per inverse) and a representative
    GroupWord per coset. ``rows`` counts every row ever defined.
    """

    status: str
    cap: int
    rows: int
    quandle: Optional[FiniteQuandle] = None
    order: Optional[int] = None
    coset_table: Optional[np.ndarray] = None
    representatives: Tuple[Union[QWord, GroupWord], ...] = ()
    generator_elements: Tuple[int, ...] = ()

    @property
    def finished(self) -> bool:
        return self.status == FINISHED

    @property
    def size(self) -> Optional[int]:
        if not self.finished:
            return None
        return self.quandle.size if self.quandle is not None else self.order

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'status': self.status}
        if self.finished:
            data['size'] = self.size
        else:
            data['cap'] = self.cap
        data['rows'] = self.rows
        return data
