"""
Presentation service: the presentation language, normal forms and
presentation transforms (n-augmentation, enveloping groups, Dehn recipe)
"""

import logging
import re
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence, Union

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedInput, VisitError

from src.models.coxeter_models import coxeter_matrix, matrix_pairs
from src.models.errors import PresentationSyntaxError, UnknownGenerator
from src.models.presentation_models import (Gen, GroupPresentation, GroupWord, Op, QExpr,
                                            QuandlePresentation, QWord, Relation, free_reduce,
                                            invert_letters)
from src.models.quandle_models import FiniteQuandle
from src.utils.config import Config

Presentation = Union[QuandlePresentation, GroupPresentation]

GRAMMAR = r"""
    start: quandle_pres | group_pres

    quandle_pres: "quandle" "<" gen_list "|" [qrel_list] ">"
    group_pres: "group" "<" gen_list "|" [grel_list] ">"

    gen_list: NAME ("," NAME)*

    qrel_list: qrel (";" qrel)*
    qrel: qexpr "=" qexpr
    ?qexpr: qexpr STAR qatom    -> qop
          | qatom
    ?qatom: NAME                -> qgen
          | "(" qexpr ")"

    grel_list: grel (";" grel)*
    grel: gword ["=" gword]
    gword: gfactor+
    gfactor: NAME [POWER]

    STAR: /\*-?/
    POWER: /\^\s*[+-]?\d+/
    NAME: /[A-Za-z_][A-Za-z0-9_]*/

    COMMENT: /#[^\n]*/
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_BUILTIN_TREFOIL = re.compile(r'^trefoil(-quandle)?$')
_BUILTIN_BRAID = re.compile(r'^braid\(\s*(\d+)\s*\)$')
_BUILTIN_ARTIN = re.compile(r'^artin\((.+)\)$')
_BUILTIN_COXETER = re.compile(r'^coxeter\((.+)\)$')

_parser: Optional[Lark] = None


def _get_parser() -> Lark:
    global _parser
    if _parser is None:
        _parser = Lark(GRAMMAR, parser='lalr', maybe_placeholders=True)
    return _parser


class _PresentationTransformer(Transformer):
    """Turns the parse tree into name-level tuples; names are resolved afterwards"""

    def gen_list(self, items):
        return list(items)

    def qgen(self, items):
        return items[0]

    def qop(self, items):
        left, star, right = items
        return ('op', left, -1 if str(star) == '*-' else 1, right)

    def qrel(self, items):
        return (items[0], items[1])

    def qrel_list(self, items):
        return list(items)

    def gfactor(self, items):
        name, power = items
        exponent = 1 if power is None else int(str(power)[1:].strip())
        return (name, exponent)

    def gword(self, items):
        return list(items)

    def grel(self, items):
        return (items[0], items[1])

    def grel_list(self, items):
        return list(items)

    def quandle_pres(self, items):
        return ('quandle', items[0], items[1] or [])

    def group_pres(self, items):
        return ('group', items[0], items[1] or [])

    def start(self, items):
        return items[0]


class PresentationService:
    """Service for quandle and group presentations"""

    def __init__(self, config: Optional[Config] = None):
        self.config = config or Config()
        self.logger = logging.getLogger(__name__)

    # Parsing and printing
    def parse(self, text: str) -> Presentation:
        try:
            tree = _get_parser().parse(text)
            kind, gen_tokens, raw_relations = _PresentationTransformer().transform(tree)
        except UnexpectedInput as e:
            line = getattr(e, 'line', None)
            column = getattr(e, 'column', None)
            if line is not None and line < 0:
                line = column = None
            token = getattr(e, 'token', None) or getattr(e, 'char', None)
            what = f"unexpected {str(token)!r}" if token else "unexpected end of input"
            raise PresentationSyntaxError(what, line, column)
        except VisitError as e:
            raise PresentationSyntaxError(str(e.orig_exc))

        names = [str(t) for t in gen_tokens]
        if len(set(names)) != len(names):
            duplicate = next(t for i, t in enumerate(gen_tokens) if str(t) in names[:i])
            raise PresentationSyntaxError(f"generator '{duplicate}' listed twice",
                                          duplicate.line, duplicate.column)
        index = {name: i for i, name in enumerate(names)}

        if kind == 'quandle':
            relations = [self.normalize_relation(self.normalize(self._resolve_expr(l, index)),
                                                 self.normalize(self._resolve_expr(r, index)))
                         for l, r in raw_relations]
            return QuandlePresentation(tuple(names), tuple(relations))

        relators = []
        for left, right in raw_relations:
            word = self._resolve_gword(left, index)
            if right is not None:
                word = word * self._resolve_gword(right, index).inverse()
            relators.append(word)
        return GroupPresentation(tuple(names), tuple(relators))

    @staticmethod
    def _lookup(token: Token, index: Mapping[str, int]) -> int:
        name = str(token)
        if name not in index:
            raise UnknownGenerator(name, getattr(token, 'line', None),
                                   getattr(token, 'column', None))
        return index[name]

    def _resolve_expr(self, node, index: Mapping[str, int]) -> QExpr:
        if isinstance(node, tuple):
            _, left, sign, right = node
            return Op(self._resolve_expr(left, index), self._resolve_expr(right, index), sign)
        return Gen(self._lookup(node, index))

    def _resolve_gword(self, factors, index: Mapping[str, int]) -> GroupWord:
        letters = []
        for token, exponent in factors:
            gen = self._lookup(token, index)
            letters.extend(GroupWord.power(gen, exponent).letters)
        return GroupWord(tuple(letters))

    def format(self, presentation: Presentation) -> str:
        return presentation.format()

    # Normal form
    def normalize(self, expr: QExpr) -> QWord:
        """Left-associated word equal to the expression tree in every quandle"""
        if isinstance(expr, Gen):
            return QWord(expr.index)
        left = self.normalize(expr.left)
        right = self.normalize(expr.right)
        # x *^s (r0 . rt) = x . rt^-1 *^s r0 . rt
        tail = left.tail + invert_letters(right.tail) + ((right.base, expr.sign),) + right.tail
        return QWord(left.base, tail)

    @staticmethod
    def reduce_word(word: QWord) -> QWord:
        """Free cancellation plus dropping leading letters equal to the base"""
        tail = list(free_reduce(word.tail))
        while tail and tail[0][0] == word.base:
            tail.pop(0)
        return QWord(word.base, tuple(tail))

    def normalize_relation(self, left: QWord, right: QWord) -> Relation:
        left, right = self.reduce_word(left), self.reduce_word(right)
        lt, rt = list(left.tail), list(right.tail)
        while lt and rt and lt[-1] == rt[-1]:
            lt.pop()
            rt.pop()
        return QWord(left.base, tuple(lt)), QWord(right.base, tuple(rt))

    # Evaluation in finite quandles
    def evaluate(self, word: QWord, q: FiniteQuandle, assignment: Sequence[int]) -> int:
        T, I = q.table, q.inverse_table
        x = assignment[word.base]
        for gen, sign in word.tail:
            y = assignment[gen]
            x = int(T[x, y]) if sign > 0 else int(I[x, y])
        return int(x)

    def evaluate_expression(self, expr: QExpr, q: FiniteQuandle, assignment: Sequence[int]) -> int:
        if isinstance(expr, Gen):
            return int(assignment[expr.index])
        x = self.evaluate_expression(expr.left, q, assignment)
        y = self.evaluate_expression(expr.right, q, assignment)
        return q.op(x, y) if expr.sign > 0 else q.inv_op(x, y)

    def check_candidate_relations(self, presentation: QuandlePresentation, q: FiniteQuandle,
                                  assignment: Sequence[int]) -> Dict[str, Any]:
        """Do all relations hold in q when generator i is sent to assignment[i]?"""
        failures = []
        for i, (left, right) in enumerate(presentation.relations):
            if self.evaluate(left, q, assignment) != self.evaluate(right, q, assignment):
                failures.append(i)
        if failures:
            self.logger.info(f"{len(failures)} of {len(presentation.relations)} relations fail")
        return {'holds': not failures, 'failures': failures,
                'relations': len(presentation.relations)}

    # Transforms
    def augment_n(self, presentation: QuandlePresentation, n: int) -> QuandlePresentation:
        """Add x *^n y = x for every ordered pair of distinct generators"""
        if n < 2:
            raise ValueError("n must be at least 2")
        extra = []
        for x in range(presentation.rank):
            for y in range(presentation.rank):
                if x != y:
                    extra.append(self.normalize_relation(QWord(x, ((y, 1),) * n), QWord(x)))
        name = f"{presentation.name}_{n}" if presentation.name else ''
        return QuandlePresentation(presentation.generators,
                                   presentation.relations + tuple(extra), name)

    @staticmethod
    def env_word(word: QWord) -> GroupWord:
        """a0 *^e1 a1 ... *^ek ak  ->  ak^ek ... a1^e1 a0 a1^-e1 ... ak^-ek"""
        tail = word.tail
        letters = tuple(reversed(tail)) + ((word.base, 1),) + tuple((g, -s) for g, s in tail)
        return GroupWord(free_reduce(letters))

    def env_presentation(self, presentation: QuandlePresentation,
                         n: Optional[int] = None) -> GroupPresentation:
        relators = [self.env_word(l) * self.env_word(r).inverse()
                    for l, r in presentation.relations]
        if n is not None:
            for x in range(presentation.rank):
                for y in range(presentation.rank):
                    if x != y:
                        relators.append(GroupWord.power(x, n) * GroupWord(((y, 1),))
                                        * GroupWord.power(x, -n) * GroupWord(((y, -1),)))
        name = f"Env({presentation.name})" if presentation.name else ''
        return GroupPresentation(presentation.generators, tuple(relators), name)

    def dehn_presentation_from_group(self, presentation: GroupPresentation) -> QuandlePresentation:
        """Candidate presentation of D(S^G): x * r = x for every relator r and generator x"""
        relations = []
        for relator in presentation.relators:
            # x * (g1^e1 ... gk^ek) = x *^ek gk ... *^e1 g1
            tail = tuple(reversed(relator.letters))
            for x in range(presentation.rank):
                relations.append(self.normalize_relation(QWord(x, tail), QWord(x)))
        name = f"D({presentation.name})" if presentation.name else ''
        return QuandlePresentation(presentation.generators, tuple(relations), name)

    def with_powers(self, presentation: GroupPresentation, power: int) -> GroupPresentation:
        """G_n: add s^n for every generator s"""
        extra = [GroupWord.power(s, power) for s in range(presentation.rank)]
        name = f"{presentation.name}_{power}" if presentation.name else ''
        return presentation.with_relators(extra, name)

    # Built-in presentations
    def trefoil_quandle(self) -> QuandlePresentation:
        return QuandlePresentation(('a', 'b'), (
            self.normalize_relation(QWord(0, ((1, 1), (0, 1))), QWord(1)),
            self.normalize_relation(QWord(1, ((0, 1), (1, 1))), QWord(0)),
        ), 'trefoil')

    def braid_group(self, n: int) -> GroupPresentation:
        if n < 1:
            raise ValueError("braid groups need n >= 1")
        names = tuple(f"s{i}" for i in range(1, n))
        relators = []
        for i in range(n - 1):
            for j in range(i + 1, n - 1):
                if j == i + 1:
                    # s_i s_j s_i = s_j s_i s_j
                    relators.append(GroupWord(((i, 1), (j, 1), (i, 1), (j, -1), (i, -1), (j, -1))))
                else:
                    relators.append(GroupWord(((i, 1), (j, 1), (i, -1), (j, -1))))
        return GroupPresentation(names, tuple(relators), f"braid({n})")

    def artin_quandle(self, spec: str) -> QuandlePresentation:
        """Artin quandle of a Coxeter type name or JSON Coxeter matrix"""
        M = coxeter_matrix(spec)
        names = tuple(f"s{i}" for i in range(1, len(M) + 1))
        relations = []
        for i, j, m in matrix_pairs(M):
            for a, b in ((i, j), (j, i)):
                tail = tuple(((b, a)[k % 2], 1) for k in range(m - 1))
                target = b if m % 2 == 1 else a
                relations.append(self.normalize_relation(QWord(a, tail), QWord(target)))
        return QuandlePresentation(names, tuple(relations), f"artin({spec.strip()})")

    def coxeter_quandle(self, spec: str) -> QuandlePresentation:
        involutory = self.augment_n(self.artin_quandle(spec), 2)
        return QuandlePresentation(involutory.generators, involutory.relations,
                                   f"coxeter({spec.strip()})")

    def builtin(self, name: str) -> Optional[Presentation]:
        text = name.strip()
        if _BUILTIN_TREFOIL.match(text):
            return self.trefoil_quandle()
        match = _BUILTIN_BRAID.match(text)
        if match:
            return self.braid_group(int(match.group(1)))
        match = _BUILTIN_ARTIN.match(text)
        if match:
            return self.artin_quandle(match.group(1))
        match = _BUILTIN_COXETER.match(text)
        if match:
            return self.coxeter_quandle(match.group(1))
        return None

    def load(self, source: str) -> Presentation:
        """A built-in name, a file path, or presentation text"""
        presentation = self.builtin(source)
        if presentation is not None:
            return presentation
        path = Path(source)
        if path.exists():
            self.logger.debug(f"Reading presentation from {path}")
            return self.parse(path.read_text())
        if source.lstrip().startswith(('quandle', 'group')):
            return self.parse(source)
        raise PresentationSyntaxError(
            f"'{source}' is neither a built-in, a file nor a presentation")
