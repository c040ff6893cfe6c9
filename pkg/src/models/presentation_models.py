"""
Words and presentations for quandles and groups

A quandle word ``QWord(base, tail)`` stands for the left-associated product
``base *^e1 g1 *^e2 g2 ...`` where ``tail = ((g1, e1), (g2, e2), ...)``.
Group words are sequences of ``(generator, exponent)`` letters with
exponent +1 or -1, read left to right.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

Letter = Tuple[int, int]


def free_reduce(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    """Cancel adjacent x x^-1 pairs"""
    stack: List[Letter] = []
    for gen, sign in letters:
        if stack and stack[-1][0] == gen and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((gen, sign))
    return tuple(stack)


def invert_letters(letters: Sequence[Letter]) -> Tuple[Letter, ...]:
    """Reverse the word and flip every sign"""
    return tuple((gen, -sign) for gen, sign in reversed(letters))


def _check_letters(letters: Sequence[Letter]):
    for gen, sign in letters:
        if sign not in (1, -1):
            raise ValueError(f"letter exponent must be +1 or -1, got {sign}")
        if gen < 0:
            raise ValueError(f"negative generator id {gen}")


@dataclass(frozen=True)
class QWord:
    base: int
    tail: Tuple[Letter, ...] = ()

    def __post_init__(self):
        tail = tuple((int(g), int(s)) for g, s in self.tail)
        _check_letters(tail)
        object.__setattr__(self, 'tail', tail)

    def __len__(self) -> int:
        return len(self.tail)

    def act(self, gen: int, sign: int = 1) -> 'QWord':
        return QWord(self.base, self.tail + ((gen, sign),))

    def generators(self) -> Tuple[int, ...]:
        return tuple(sorted({self.base} | {g for g, _ in self.tail}))

    def operator(self) -> Tuple[Letter, ...]:
        """Right translation by this element, as generator letters in action order"""
        return invert_letters(self.tail) + ((self.base, 1),) + self.tail

    def format(self, names: Sequence[str]) -> str:
        parts = [names[self.base]]
        for gen, sign in self.tail:
            parts.append(('*' if sign > 0 else '*-') + ' ' + names[gen])
        return ' '.join(parts)


@dataclass(frozen=True)
class Gen:
    """Leaf of a quandle expression tree"""

    index: int


@dataclass(frozen=True)
class Op:
    """left *^sign right"""

    left: 'QExpr'
    right: 'QExpr'
    sign: int = 1


QExpr = Union[Gen, Op]

Relation = Tuple[QWord, QWord]


@dataclass(frozen=True)
class QuandlePresentation:
    generators: Tuple[str, ...]
    relations: Tuple[Relation, ...] = ()
    name: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'generators', tuple(self.generators))
        object.__setattr__(self, 'relations', tuple(tuple(r) for r in self.relations))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator names must be distinct")
        k = len(self.generators)
        for left, right in self.relations:
            for gen in left.generators() + right.generators():
                if gen >= k:
                    raise ValueError(f"generator id {gen} out of range for {k} generators")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def format(self) -> str:
        rels = ' ; '.join(f"{l.format(self.generators)} = {r.format(self.generators)}"
                          for l, r in self.relations)
        gens = ', '.join(self.generators)
        return f"quandle< {gens} | {rels} >" if rels else f"quandle< {gens} | >"


@dataclass(frozen=True)
class GroupWord:
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        letters = tuple((int(g), int(s)) for g, s in self.letters)
        _check_letters(letters)
        object.__setattr__(self, 'letters', letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: 'GroupWord') -> 'GroupWord':
        return GroupWord(free_reduce(self.letters + other.letters))

    def inverse(self) -> 'GroupWord':
        return GroupWord(invert_letters(self.letters))

    def reduced(self) -> 'GroupWord':
        return GroupWord(free_reduce(self.letters))

    @classmethod
    def power(cls, gen: int, exponent: int) -> 'GroupWord':
        sign = 1 if exponent >= 0 else -1
        return cls(((gen, sign),) * abs(exponent))

    def format(self, names: Sequence[str]) -> str:
        if not self.letters:
            return '1'
        parts = []
        i = 0
        while i < len(self.letters):
            gen, sign = self.letters[i]
            run = 1
            while i + run < len(self.letters) and self.letters[i + run] == (gen, sign):
                run += 1
            exponent = run * sign
            parts.append(names[gen] if exponent == 1 else f"{names[gen]}^{exponent}")
            i += run
        return ' '.join(parts)


@dataclass(frozen=True)
class GroupPresentation:
    """Generators and freely reduced, non-empty relators"""

    generators: Tuple[str, ...]
    relators: Tuple[GroupWord, ...] = ()
    name: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'generators', tuple(self.generators))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator names must be distinct")
        reduced = []
        for word in self.relators:
            word = word.reduced()
            if any(gen >= len(self.generators) for gen, _ in word.letters):
                raise ValueError("relator mentions an unknown generator")
            if word.letters:
                reduced.append(word)
        object.__setattr__(self, 'relators', tuple(reduced))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def with_relators(self, extra: Iterable[GroupWord], name: Optional[str] = None
                      ) -> 'GroupPresentation':
        return GroupPresentation(self.generators, self.relators + tuple(extra),
                                 name if name is not None else self.name)

    def format(self) -> str:
        rels = ' ; '.join(w.format(self.generators) for w in self.relators)
        gens = ', '.join(self.generators)
        return f"group< {gens} | {rels} >" if rels else f"group< {gens} | >"
