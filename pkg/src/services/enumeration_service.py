"""
Enumeration service: coset enumeration for quandle and group presentations

Both enumerators share one HLT coset table. Column ``2*g`` holds the action
of generator g and column ``2*g + 1`` its inverse. For quandles the rows are
quandle elements and the columns are the right translations by the
generators; for groups the rows are cosets of the trivial subgroup.
"""

import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.models.enumeration_models import FINISHED, OVERFLOW, EnumOutcome
from src.models.presentation_models import (GroupPresentation, GroupWord, Letter,
                                            QuandlePresentation, QWord, free_reduce,
                                            invert_letters)
from src.models.quandle_models import FiniteQuandle
from src.services.presentation_service import PresentationService
from src.services.quandle_service import QuandleService
from src.utils.config import Config

# above this size distributivity is checked against the generator columns only
VALIDATION_LIMIT = 512


class _Overflow(Exception):
    pass


def _columns(letters: Iterable[Letter]) -> List[int]:
    return [2 * gen + (0 if sign > 0 else 1) for gen, sign in letters]


def _letter(column: int) -> Letter:
    return column // 2, 1 if column % 2 == 0 else -1


class CosetTable:
    """
    Relator-based (HLT) coset table with coincidence handling by union-find.

    Every row remembers a root (the generator it grew from, or 0 for groups)
    and the column word leading from that root, recorded when it was defined.
    """

    def __init__(self, num_generators: int, cap: int, progress_interval: int = 10_000,
                 logger: Optional[logging.Logger] = None):
        self.width = 2 * num_generators
        self.cap = cap
        self.progress_interval = max(1, progress_interval)
        self.logger = logger or logging.getLogger(__name__)
        self.table: List[List[int]] = []
        self.parent: List[int] = []
        self.roots: List[int] = []
        self.words: List[Tuple[int, ...]] = []
        self.merged = 0

    def new_row(self, root: int, word: Tuple[int, ...] = ()) -> int:
        if len(self.table) >= self.cap:
            raise _Overflow()
        beta = len(self.table)
        self.table.append([-1] * self.width)
        self.parent.append(beta)
        self.roots.append(root)
        self.words.append(word)
        if beta and beta % self.progress_interval == 0:
            self.logger.info(f"{beta} rows defined, {self.merged} merged, "
                             f"{beta - self.merged} live")
        return beta

    def define(self, alpha: int, x: int):
        beta = self.new_row(self.roots[alpha], self.words[alpha] + (x,))
        self.table[alpha][x] = beta
        self.table[beta][x ^ 1] = alpha

    def rep(self, k: int) -> int:
        p = self.parent
        lam = k
        while p[lam] != lam:
            lam = p[lam]
        while p[k] != lam:
            p[k], k = lam, p[k]
        return lam

    def is_live(self, alpha: int) -> bool:
        return self.parent[alpha] == alpha

    def _merge(self, k: int, lam: int, queue: List[int]):
        phi, psi = self.rep(k), self.rep(lam)
        if phi != psi:
            mu, v = min(phi, psi), max(phi, psi)
            self.parent[v] = mu
            self.merged += 1
            queue.append(v)

    def coincidence(self, alpha: int, beta: int):
        table = self.table
        queue: List[int] = []
        self._merge(alpha, beta, queue)
        i = 0
        while i < len(queue):
            gamma = queue[i]
            i += 1
            for x in range(self.width):
                delta = table[gamma][x]
                if delta == -1:
                    continue
                table[delta][x ^ 1] = -1
                mu, nu = self.rep(gamma), self.rep(delta)
                if table[mu][x] != -1:
                    self._merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] != -1:
                    self._merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan_and_fill(self, alpha: int, word: Sequence[int], target: Optional[int] = None):
        """Trace word from alpha (to target, default alpha), defining rows to close the gap"""
        table = self.table
        f = alpha
        b = alpha if target is None else target
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] != -1:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] != -1:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])

    def run(self, equations: Sequence[Tuple[int, Sequence[int], int]],
            relators: Sequence[Sequence[int]]):
        """Scan the equations once, then every relator at every live row (HLT)"""
        for start, word, end in equations:
            self.scan_and_fill(self.rep(start), word, self.rep(end))
        alpha = 0
        while alpha < len(self.table):
            if self.is_live(alpha):
                for word in relators:
                    self.scan_and_fill(alpha, word)
                    if not self.is_live(alpha):
                        break
                if self.is_live(alpha):
                    for x in range(self.width):
                        if self.table[alpha][x] == -1:
                            self.define(alpha, x)
            alpha += 1

    def compress(self) -> Tuple[List[int], np.ndarray]:
        """Live rows in order and the table renumbered onto them"""
        live = [r for r in range(len(self.table)) if self.is_live(r)]
        position = {r: i for i, r in enumerate(live)}
        compact = np.empty((len(live), self.width), dtype=np.int64)
        for i, r in enumerate(live):
            for x in range(self.width):
                entry = self.table[r][x]
                if entry == -1:
                    raise RuntimeError(f"coset table incomplete at row {r}, column {x}")
                compact[i, x] = position[self.rep(entry)]
        return live, compact


class EnumerationService:
    """Service for enumerating finitely presented quandles and groups"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()
        self.logger = logging.getLogger(__name__)
        self.quandles = QuandleService(self.config)
        self.presentations = PresentationService(self.config)

    # Quandles
    def enumerate_quandle(self, presentation: QuandlePresentation, cap: Optional[int] = None,
                          validate: bool = True) -> EnumOutcome:
        cap = cap or self.config.quandle_row_cap
        k = presentation.rank
        self.logger.info(f"Enumerating quandle {presentation.name or ''} "
                         f"({k} generators, {len(presentation.relations)} relations, cap {cap})")
        if k == 0:
            raise ValueError("a quandle presentation needs at least one generator")

        equations = []
        for g in range(k):
            # g * g = g
            equations.append((g, _columns([(g, 1)]), g))
        relators = []
        for left, right in presentation.relations:
            # element equation: base1 . tail1 . tail2^-1 = base2
            path = free_reduce(left.tail + invert_letters(right.tail))
            equations.append((left.base, _columns(path), right.base))
            # the two sides must also act identically everywhere
            relator = free_reduce(left.operator() + invert_letters(right.operator()))
            if relator:
                relators.append(_columns(relator))

        coset_table = CosetTable(k, cap, self.config.progress_interval, self.logger)
        for g in range(k):
            coset_table.new_row(g)
        try:
            coset_table.run(equations, relators)
        except _Overflow:
            self.logger.info(f"Quandle enumeration overflowed at {cap} rows")
            return EnumOutcome(OVERFLOW, cap, len(coset_table.table))

        live, compact = coset_table.compress()
        representatives = tuple(
            QWord(coset_table.roots[r], tuple(_letter(c) for c in coset_table.words[r]))
            for r in live)
        position = {r: i for i, r in enumerate(live)}
        generator_elements = tuple(position[coset_table.rep(g)] for g in range(k))
        table = self._operation_table(compact, representatives)
        labels = tuple(word.format(presentation.generators) for word in representatives)
        if validate and len(live) <= VALIDATION_LIMIT:
            quandle = self.quandles.validate_quandle(table, labels, presentation.name)
        elif validate:
            self.logger.info(f"Validating {len(live)} elements against the {k} generator columns")
            quandle = self.quandles.validate_quandle(table, labels, presentation.name,
                                                     generators=generator_elements)
        else:
            quandle = FiniteQuandle(table, labels, presentation.name)
        self.logger.info(f"Quandle enumeration finished: {quandle.size} elements, "
                         f"{len(coset_table.table)} rows defined")
        return EnumOutcome(FINISHED, cap, len(coset_table.table), quandle=quandle,
                           representatives=representatives,
                           generator_elements=generator_elements)

    @staticmethod
    def _operation_table(compact: np.ndarray, representatives: Sequence[QWord]) -> np.ndarray:
        n = compact.shape[0]
        table = np.empty((n, n), dtype=np.int64)
        for y, word in enumerate(representatives):
            # x * y = x traced along the right translation of y
            image = np.arange(n)
            for column in _columns(word.operator()):
                image = compact[image, column]
            table[:, y] = image
        return table

    # Groups
    def enumerate_group(self, presentation: GroupPresentation,
                        cap: Optional[int] = None) -> EnumOutcome:
        """Todd-Coxeter over the trivial subgroup"""
        cap = cap or self.config.group_coset_cap
        k = presentation.rank
        self.logger.info(f"Enumerating group {presentation.name or ''} "
                         f"({k} generators, {len(presentation.relators)} relators, cap {cap})")
        coset_table = CosetTable(k, cap, self.config.progress_interval, self.logger)
        coset_table.new_row(0)
        relators = [_columns(w.letters) for w in presentation.relators]
        try:
            coset_table.run([], relators)
        except _Overflow:
            self.logger.info(f"Group enumeration overflowed at {cap} cosets")
            return EnumOutcome(OVERFLOW, cap, len(coset_table.table))
        live, compact = coset_table.compress()
        representatives = tuple(GroupWord(tuple(_letter(c) for c in coset_table.words[r]))
                                for r in live)
        self.logger.info(f"Group enumeration finished: order {len(live)}")
        return EnumOutcome(FINISHED, cap, len(coset_table.table), order=len(live),
                           coset_table=compact, representatives=representatives)

    # Checks on finished runs
    def relations_hold(self, presentation: QuandlePresentation, outcome: EnumOutcome) -> bool:
        check = self.presentations.check_candidate_relations(
            presentation, outcome.quandle, outcome.generator_elements)
        return check['holds']

    def representatives_hold(self, outcome: EnumOutcome) -> bool:
        """Every representative word evaluates back to its own element"""
        gens = outcome.generator_elements
        return all(self.presentations.evaluate(word, outcome.quandle, gens) == i
                   for i, word in enumerate(outcome.representatives))

    def audit(self, presentation: QuandlePresentation, outcome: EnumOutcome,
              n: Optional[int] = None) -> Dict[str, Any]:
        """Independent checks of a finished quandle enumeration"""
        q = outcome.quandle
        report = {
            'size': q.size,
            'axioms': self.quandles.check_axioms(q.table) is None,
            'relations': self.relations_hold(presentation, outcome),
            'representatives': self.representatives_hold(outcome),
            'orbits': len(self.quandles.orbits(q)),
        }
        if n is not None:
            report['n_quandle'] = self.quandles.is_n_quandle(q, n)
        report['ok'] = all(v for key, v in report.items() if key not in ('size', 'orbits'))
        return report

    # Experiments
    def quotient_consistency(self, presentation: QuandlePresentation, n: int,
                             cap: Optional[int] = None) -> Dict[str, Any]:
        """(Q)_n computed from Q agrees with the enumeration of the n-augmented presentation"""
        if n < 2:
            raise ValueError("n must be at least 2")
        base = self.enumerate_quandle(presentation, cap)
        augmented = self.enumerate_quandle(self.presentations.augment_n(presentation, n), cap)
        report: Dict[str, Any] = {'n': n, 'base': base.to_dict(), 'augmented': augmented.to_dict()}
        if not (base.finished and augmented.finished):
            report['status'] = OVERFLOW
            report['isomorphic'] = None
            return report
        reduced = self.quandles.finite_n_quotient(base.quandle, n)
        mapping = self.quandles.find_isomorphism(reduced, augmented.quandle)
        report['status'] = FINISHED
        report['quotient_size'] = reduced.size
        report['isomorphic'] = mapping is not None
        return report

    def divisor_finiteness(self, presentation: QuandlePresentation, n: int,
                           cap: Optional[int] = None) -> Dict[str, Any]:
        """When the n-quandle quotient is finite so is the d-quandle one for d | n"""
        top = self.enumerate_quandle(self.presentations.augment_n(presentation, n), cap)
        divisors = {}
        for d in range(2, n):
            if n % d == 0:
                outcome = self.enumerate_quandle(self.presentations.augment_n(presentation, d), cap)
                divisors[d] = outcome.to_dict()
        holds = (not top.finished) or all(v['status'] == FINISHED for v in divisors.values())
        return {'n': n, 'top': top.to_dict(), 'divisors': divisors, 'holds': holds}

    def surjection_probe(self, presentation: QuandlePresentation, group: GroupPresentation,
                         n: int, cap: Optional[int] = None) -> Dict[str, Any]:
        """|G_n| divides |F((Q)_n)| when F((Q)_n) maps onto G_n"""
        outcome = self.enumerate_quandle(self.presentations.augment_n(presentation, n), cap)
        report: Dict[str, Any] = {'n': n, 'quandle': outcome.to_dict()}
        g_n = self.enumerate_group(self.presentations.with_powers(group, n))
        report['g_n_order'] = g_n.order
        if not outcome.finished:
            report['divides'] = None
            return report
        fq = self.enumerate_group(self.quandles.fq_presentation(outcome.quandle))
        report['fq_order'] = fq.order
        report['divides'] = (fq.finished and g_n.finished and fq.order % g_n.order == 0)
        return report

    def env_quotient_probe(self, presentation: QuandlePresentation, n: int,
                           cap: Optional[int] = None) -> Dict[str, Any]:
        """|Inn((Q)_n)| divides the order of Env((Q)_n) / <<e_x^n>>"""
        augmented = self.presentations.augment_n(presentation, n)
        outcome = self.enumerate_quandle(augmented, cap)
        report: Dict[str, Any] = {'n': n, 'quandle': outcome.to_dict()}
        if not outcome.finished:
            report['divides'] = None
            return report
        env = self.presentations.env_presentation(augmented, n)
        env_n = self.enumerate_group(self.presentations.with_powers(env, n))
        inner = self.quandles.inner_group(outcome.quandle)
        report['env_order'] = env_n.order
        report['inner_order'] = inner.order
        report['divides'] = env_n.finished and env_n.order % inner.order == 0
        return report
