"""
Main application controller: the command-line surface
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence

from src.models.errors import CapExceeded, QuandleError
from src.models.presentation_models import GroupPresentation, QuandlePresentation
from src.models.quandle_models import FiniteQuandle
from src.services.enumeration_service import EnumerationService
from src.services.group_service import GroupService
from src.services.presentation_service import PresentationService
from src.services.quandle_service import QuandleService
from src.services.report_service import ReportService
from src.services.symplectic_service import SymplecticService
from src.utils.config import Config
from src.views.console_view import ConsoleView

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CAP = 2

# check-lemma accepts the numbered names and the descriptive aliases
LEMMAS = {'5.1': 'shape', '5.2': 'generators', 'shape': 'shape', 'generators': 'generators'}
LEMMA_NUMBERS = {'shape': '5.1', 'generators': '5.2'}


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; usage errors exit with 1 here"""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


class AppController:
    """Dispatches subcommands to the services and renders the results"""

    def __init__(self, config: Optional[Config] = None, view: Optional[ConsoleView] = None):
        self.config = config or Config()
        self.view = view or ConsoleView()
        self.logger = logging.getLogger(__name__)
        self.commands: Dict[str, Callable[[argparse.Namespace], int]] = {
            'validate': self.validate,
            'enumerate': self.enumerate,
            'group-order': self.group_order,
            'dehn': self.dehn,
            'coxeter-quandle': self.coxeter_quandle,
            'pquandle': self.pquandle,
            'iso': self.iso,
            'min-quotient': self.min_quotient,
            'symp': self.symp,
            'env': self.env,
            'nu': self.nu,
            'orbits': self.orbits,
            'quotient': self.quotient,
            'probe': self.probe,
            'suite': self.suite,
        }
        self.unchecked = False

    def build_parser(self) -> argparse.ArgumentParser:
        parser = _ArgumentParser(prog='quandle', description='Computational quandle workbench')
        parser.add_argument('-v', '--verbose', action='count', default=0,
                            help='-v for progress, -vv for debugging output')
        parser.add_argument('--seed', type=int, help='seed for randomized checks')
        parser.add_argument('--jobs', type=int, help='worker threads for congruence search')
        parser.add_argument('--config', help='path to a config.json')
        parser.add_argument('--unchecked', action='store_true',
                            help='load table files without the axiom check')
        sub = parser.add_subparsers(dest='command', required=True, parser_class=_ArgumentParser)

        p = sub.add_parser('validate', help='check the quandle axioms of a table')
        p.add_argument('table', help="table JSON file, or '-' for stdin")

        p = sub.add_parser('enumerate', help='enumerate a finitely presented quandle')
        p.add_argument('source', help='built-in name, presentation file or presentation text')
        p.add_argument('--n', type=int, help='add x *^n y = x for all generator pairs')
        p.add_argument('--cap', type=int, help='row cap')
        p.add_argument('--out', help="write the table JSON here ('-' for stdout)")
        p.add_argument('--no-validate', action='store_true',
                       help='skip the axiom check on the finished table')
        p.add_argument('--json', action='store_true', help='print the outcome as JSON')

        p = sub.add_parser('group-order', help='Todd-Coxeter order of a presented group')
        p.add_argument('source')
        p.add_argument('--power', type=int, help='add s^K for every generator s')
        p.add_argument('--cap', type=int, help='coset cap')
        p.add_argument('--json', action='store_true', help='print the outcome as JSON')

        p = sub.add_parser('dehn', help='Dehn quandle D(A^G)')
        p.add_argument('--group', required=True, help="e.g. S5, D4, B3, Z6 or perm:[[...],...]")
        p.add_argument('--subset', default='generators',
                       help="generators, transpositions, all, or cycles like '(1 2);(2 3)'")
        p.add_argument('--out', default='-')

        p = sub.add_parser('coxeter-quandle', help='reflection quandle of a Coxeter group')
        p.add_argument('type', help="type name such as A3, B2, I2(5), or a JSON Coxeter matrix")
        p.add_argument('--out', default='-')

        p = sub.add_parser('pquandle', help='projective primitive homological quandle P(g,n)')
        p.add_argument('--g', type=int, required=True)
        p.add_argument('--n', type=int, required=True)
        p.add_argument('--out', default='-')

        p = sub.add_parser('iso', help='search for an isomorphism between two tables')
        p.add_argument('first')
        p.add_argument('second')

        p = sub.add_parser('min-quotient', help='size of the smallest quotient with 2+ elements')
        p.add_argument('table')
        p.add_argument('--budget', type=int, help='congruence lattice budget')

        p = sub.add_parser('symp', help='symplectic checks over Z_p')
        symp = p.add_subparsers(dest='symp_command', required=True, parser_class=_ArgumentParser)
        lemma = symp.add_parser('check-lemma', help='centralizer checks for T(a1) in Sp(2g,p)')
        lemma.add_argument('which', choices=list(LEMMAS))
        lemma.add_argument('--g', type=int, required=True)
        lemma.add_argument('--p', type=int, required=True)
        coupling = symp.add_parser('coupling', help='handle-coupling matrices against closed forms')
        coupling.add_argument('--g', type=int, required=True)
        coupling.add_argument('--p', type=int, required=True)

        p = sub.add_parser('env', help='print the enveloping group presentation')
        p.add_argument('source')
        p.add_argument('--n', type=int, help='also add e_x^n e_y e_x^-n e_y^-1')

        p = sub.add_parser('nu', help='order of every right translation')
        p.add_argument('table')

        p = sub.add_parser('orbits', help='connected components')
        p.add_argument('table')

        p = sub.add_parser('quotient', help='finite n-quandle quotient (Q)_n')
        p.add_argument('table')
        p.add_argument('--n', type=int, required=True)
        p.add_argument('--out', default='-')

        p = sub.add_parser('probe', help='finiteness experiments on a quandle presentation')
        p.add_argument('experiment', choices=['consistency', 'divisors', 'surjection', 'env'])
        p.add_argument('source')
        p.add_argument('--n', type=int, required=True)
        p.add_argument('--group', help='group presentation for the surjection probe')
        p.add_argument('--cap', type=int, help='row cap')

        p = sub.add_parser('suite', help='run the theorem-instance suite')
        p.add_argument('--csv', help='export the results as CSV')
        p.add_argument('--quick', action='store_true', help='skip the slowest instances')
        return parser

    def run(self, argv: Sequence[str]) -> int:
        parser = self.build_parser()
        try:
            args = parser.parse_args(list(argv))
        except UsageError as e:
            sys.stderr.write(f"{e}\n")
            return EXIT_ERROR
        except SystemExit as e:
            # --help
            return int(e.code or 0)

        if args.config:
            self.config = Config(args.config)
        self.config.override(seed=args.seed, jobs=args.jobs)
        self.unchecked = args.unchecked
        self._setup_logging(args.verbose)
        self._setup_services()

        try:
            return self.commands[args.command](args)
        except CapExceeded as e:
            self.logger.error(str(e))
            return EXIT_CAP
        except (QuandleError, UsageError, ValueError, KeyError) as e:
            self.logger.error(str(e))
            return EXIT_ERROR
        except OSError as e:
            self.logger.error(f"I/O error: {e}")
            return EXIT_ERROR

    def _setup_logging(self, verbosity: int):
        if verbosity >= 2:
            level = logging.DEBUG
        elif verbosity == 1:
            level = logging.INFO
        else:
            level = getattr(logging, self.config.log_level, logging.WARNING)
        logging.basicConfig(level=level, stream=sys.stderr,
                            format='%(levelname)s %(name)s: %(message)s', force=True)

    def _setup_services(self):
        self.quandles = QuandleService(self.config)
        self.presentations = PresentationService(self.config)
        self.enumeration = EnumerationService(self.config)
        self.groups = GroupService(self.config)
        self.symplectic = SymplecticService(self.config)

    def _quandle_presentation(self, source: str) -> QuandlePresentation:
        presentation = self.presentations.load(source)
        if isinstance(presentation, GroupPresentation):
            self.logger.info("Group presentation given; using the x * r = x Dehn recipe")
            presentation = self.presentations.dehn_presentation_from_group(presentation)
        return presentation

    def _load_table(self, path: str) -> FiniteQuandle:
        return self.quandles.load_quandle(path, unchecked=self.unchecked)

    def _emit(self, q: FiniteQuandle, out: Optional[str]):
        if out == '-':
            self.view.show_table_json(q)
            return
        if out:
            self.quandles.save_quandle(q, out)
        self.view.show_quandle(q, self.quandles.orbits(q))

    # Commands
    def validate(self, args) -> int:
        q = self.quandles.load_quandle(args.table)
        self.view.show_validation(q)
        return EXIT_OK

    def enumerate(self, args) -> int:
        presentation = self._quandle_presentation(args.source)
        if args.n is not None:
            presentation = self.presentations.augment_n(presentation, args.n)
        if args.json and args.out == '-':
            raise UsageError("--json and --out - both write to stdout")
        outcome = self.enumeration.enumerate_quandle(presentation, args.cap,
                                                     validate=not args.no_validate)
        if args.json:
            self.view.show_json(outcome.to_dict())
        elif args.out != '-':
            self.view.show_outcome(outcome, 'quandle')
        if not outcome.finished:
            return EXIT_CAP
        if args.out == '-':
            self.view.show_table_json(outcome.quandle)
        elif args.out:
            self.quandles.save_quandle(outcome.quandle, args.out)
        return EXIT_OK

    def group_order(self, args) -> int:
        presentation = self.presentations.load(args.source)
        if isinstance(presentation, QuandlePresentation):
            self.logger.info("Quandle presentation given; using its enveloping group")
            presentation = self.presentations.env_presentation(presentation)
        if args.power is not None:
            presentation = self.presentations.with_powers(presentation, args.power)
        outcome = self.enumeration.enumerate_group(presentation, args.cap)
        if args.json:
            self.view.show_json(outcome.to_dict())
            return EXIT_OK if outcome.finished else EXIT_CAP
        if not outcome.finished:
            self.view.show_outcome(outcome, 'group')
            return EXIT_CAP
        self.view.write(str(outcome.order))
        return EXIT_OK

    def dehn(self, args) -> int:
        group = self.groups.group_from_spec(args.group)
        subset = self.groups.parse_subset(group, args.subset)
        self._emit(self.quandles.dehn_quandle(group, subset), args.out)
        return EXIT_OK

    def coxeter_quandle(self, args) -> int:
        self._emit(self.groups.coxeter_quandle(args.type), args.out)
        return EXIT_OK

    def pquandle(self, args) -> int:
        self._emit(self.symplectic.p_quandle(args.g, args.n), args.out)
        return EXIT_OK

    def iso(self, args) -> int:
        q1 = self._load_table(args.first)
        q2 = self._load_table(args.second)
        mapping = self.quandles.find_isomorphism(q1, q2)
        self.view.show_mapping(mapping, q1, q2)
        return EXIT_OK if mapping is not None else EXIT_ERROR

    def min_quotient(self, args) -> int:
        q = self._load_table(args.table)
        self.view.write(str(self.quandles.smallest_quotient_size(q, args.budget)))
        return EXIT_OK

    def symp(self, args) -> int:
        if args.symp_command == 'coupling':
            results = self.symplectic.coupling_matrices(args.g, args.p)
            self.view.show_json(results)
            passed = all(r['M_matches'] and r['N_matches'] for r in results)
            return EXIT_OK if passed else EXIT_ERROR
        kind = LEMMAS[args.which]
        if kind == 'shape':
            report = self.symplectic.check_centralizer_shape(args.g, args.p)
        else:
            report = self.symplectic.check_centralizer_generators(args.g, args.p)
        report['lemma'] = LEMMA_NUMBERS[kind]
        report['check'] = kind
        self.view.show_report(report)
        return EXIT_OK if report['equal'] else EXIT_ERROR

    def env(self, args) -> int:
        presentation = self.presentations.load(args.source)
        if not isinstance(presentation, QuandlePresentation):
            raise UsageError("env needs a quandle presentation")
        self.view.write(self.presentations.format(
            self.presentations.env_presentation(presentation, args.n)))
        return EXIT_OK

    def nu(self, args) -> int:
        q = self._load_table(args.table)
        self.view.show_profile(self.quandles.nu_profile(q), q)
        return EXIT_OK

    def orbits(self, args) -> int:
        q = self._load_table(args.table)
        self.view.show_orbits(self.quandles.orbits(q), q)
        return EXIT_OK

    def quotient(self, args) -> int:
        q = self._load_table(args.table)
        self._emit(self.quandles.finite_n_quotient(q, args.n), args.out)
        return EXIT_OK

    def probe(self, args) -> int:
        presentation = self._quandle_presentation(args.source)
        if args.experiment == 'consistency':
            report = self.enumeration.quotient_consistency(presentation, args.n, args.cap)
            verdict = report['isomorphic']
        elif args.experiment == 'divisors':
            report = self.enumeration.divisor_finiteness(presentation, args.n, args.cap)
            verdict = report['holds']
        elif args.experiment == 'surjection':
            if not args.group:
                raise UsageError("the surjection probe needs --group")
            group = self.presentations.load(args.group)
            if not isinstance(group, GroupPresentation):
                raise UsageError("--group must be a group presentation")
            report = self.enumeration.surjection_probe(presentation, group, args.n, args.cap)
            verdict = report['divides']
        else:
            report = self.enumeration.env_quotient_probe(presentation, args.n, args.cap)
            verdict = report['divides']
        self.view.show_json(report)
        if verdict is None:
            return EXIT_CAP
        return EXIT_OK if verdict else EXIT_ERROR

    def suite(self, args) -> int:
        reports = ReportService(self.config)
        frame = reports.run_suite(quick=args.quick)
        summary = reports.summary(frame)
        self.view.show_suite(frame, summary)
        if args.csv:
            reports.export_csv(frame, args.csv)
        return EXIT_OK if summary['failed'] == 0 else EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    return AppController().run(sys.argv[1:] if argv is None else argv)
