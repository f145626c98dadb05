"""
The ``lutool.cli`` module is the CLI application of the ``lutool`` package.
``lutool`` can be used from the command line like python module::

    $ python -m lutool ...

or can be installed and used like usual CLI::

    $ lutool ...


lutool CLI Usage
----------------

Common syntax for all actions::

   lutool <action> [common options] [ appropriate | arguments | for actions ]

"lutool" expects the main lead positional argument ``action`` which defines
the action of the program. Must be one of::

    invariants | equiv | gen | selfcheck

Common options, accepted after every action:

    ``--tol-profile TOL`` relative tolerance of every comparison (1e-8)

    ``--tol-gap GAP`` relative eigenvalue gap under which two eigenvalues
    count as degenerate (1e-8)

    ``--rank-cutoff CUT`` eigenvalues of ``rho`` below it are dropped (1e-10)

    ``--seed SEED`` root seed of every random draw. When absent the
    ``LUTOOL_SEED`` environment variable is used, then a fixed default.

    ``--json`` print a JSON object instead of the text report; it carries
    the same fields as the text.

    ``-v | --verbose`` log to stderr, twice for debug records.

Exit codes are the same for every action::

    0  Equivalent / success
    1  Inequivalent / a selfcheck suite failed
    2  Indeterminate
    3  unreadable state file or bad arguments
    4  unsupported or mismatched dimensions

-------------------

State files
-----------

A state file is a JSON object::

    {"format_version": 1, "dims": [2, 2, 2],
     "amps": [[0.7071067811865476, 0.0], [0.0, 0.0], ...]}

``amps`` holds ``[re, im]`` pairs in mixed-radix order, subsystem ``A``
most significant. The amplitudes are renormalized on reading (with a
warning when the norm is off by more than 1e-9).

-------------------

Brief guide for actions
-----------------------

**lutool invariants <state_file> [--mixed]**
    Prints the invariant profile, one ``label = value`` line per entry::

        $ lutool invariants ghz.json
        I[A;1] = 1.00000000000000e0
        I[A;2] = 5.00000000000000e-1
        ...

    ``--mixed`` appends the ``J`` invariants of ``rho = Tr_A |psi><psi|``.

-------------------

**lutool equiv <state_file> <other_file> [--oracle] [--restarts N]**
    Decides local unitary equivalence and prints the verdict, its reason,
    the witness and the genericity reports. The exit code is the verdict.
    ``--oracle`` also runs the alternating search and prints its best
    fidelity.

-------------------

**lutool gen <kind> <dims> [-o | --output PATH]**
    Writes a state file. ``kind`` is one of ``random``, ``ghz``, ``w`` or
    ``product`` and ``dims`` a comma separated list::

        $ lutool gen random 4,2,2 --seed 42 -o psi.json

    Without ``--output`` the file is printed.

-------------------

**lutool selfcheck [--quick | --full]**
    Runs the self-check suites and prints one line per suite with its
    timing; nonzero exit on any failure.

-------------------

lutool.cli function's specification
-----------------------------------

"""
import argparse
import json
import logging
import os.path
import sys
from dataclasses import dataclass

import numpy as np

# makes available to import package from the source directory
parent_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if parent_dir not in sys.path:
    sys.path.insert(0, parent_dir)

from lutool.config import (ConsistencyError, DEFAULT_TOLERANCES,
                           DimensionError, StateError, resolve_seed)
from lutool.equivalence import (Outcome, decide_equivalence,
                                round_significant)
from lutool.invariants import invariant_profile, mixed_state_profile
from lutool.lusearch import SearchConfig, alternating_search
from lutool.sampling import (RandomStream, random_product_state,
                             random_pure_state)
from lutool.selfcheck import FULL, QUICK, run_suites
from lutool.statespace import ghz_state, make_state, partial_trace, w_state

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
GEN_KINDS = ('random', 'ghz', 'w', 'product')

EXIT_EQUIVALENT, EXIT_INEQUIVALENT, EXIT_INDETERMINATE = 0, 1, 2
EXIT_PARSE_ERROR, EXIT_DIMENSION_ERROR = 3, 4
VERDICT_EXIT_CODES = {
    Outcome.EQUIVALENT: EXIT_EQUIVALENT,
    Outcome.INEQUIVALENT: EXIT_INEQUIVALENT,
    Outcome.INDETERMINATE: EXIT_INDETERMINATE,
}


class StateFileError(StateError):
    """A state file can not be read or does not follow the format."""


class LutoolArgumentParser(argparse.ArgumentParser):
    """
    ``ArgumentParser`` reporting usage errors with the parse failure exit
    code, so that exit code 2 stays reserved for Indeterminate verdicts.
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE_ERROR, '%s: error: %s\n' % (self.prog, message))


@dataclass(frozen=True)
class Report(object):
    """
    What an action returns: the exit code and the result in two mirrored
    renderings.

    :ivar exit_code: process exit code
    :ivar fields: JSON-compatible dictionary
    :ivar text: the text report
    """
    exit_code: int
    fields: dict
    text: str


def dims_type(argument):
    """
    This is the special processor for the ``dims`` argument's type of the
    ``argparse.ArgumentParser.add_argument()`` method.
    It takes a comma separated list of local dimensions (``"4,2,2"``) and
    returns the tuple of integers, else raises an exception used by the
    ``argparse`` to inform the user.

    :param argument: comma separated positive integers
    :type argument: string

    :return: local dimensions
    :rtype: tuple of int
    """
    try:
        dims = tuple(int(part) for part in argument.split(','))
        if len(dims) < 2 or any(size < 1 for size in dims):
            raise ValueError('need at least two positive dimensions')
    except ValueError as exc_:
        raise argparse.ArgumentTypeError('bad dims %r: %s' % (argument, exc_))
    return dims


def positive_float_type(argument):
    """Tolerance flag type: a float above zero."""
    try:
        value = float(argument)
    except ValueError:
        raise argparse.ArgumentTypeError('%r is not a number' % argument)
    if not value > 0:
        raise argparse.ArgumentTypeError('%r must be positive' % argument)
    return value


def seed_type(argument):
    """Seed flag type: an integer, hexadecimal with the ``0x`` prefix."""
    try:
        return int(argument, 0)
    except ValueError:
        raise argparse.ArgumentTypeError('%r is not an integer' % argument)


def format_value(value):
    """
    Lower-case scientific notation with 15 significant digits and no
    padding of the exponent: ``0.5 -> '5.00000000000000e-1'``.
    """
    mantissa, exponent = ('%.14e' % value).split('e')
    return '%se%d' % (mantissa, int(exponent))


def _jsonable(value):
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def read_state_file(path):
    """
    Read a state file.

    :param path: path to the JSON state file
    :type path: string

    :returns: the normalized state
    :rtype: lutool.statespace.PureState

    :raises StateFileError: unreadable file, invalid JSON or a field that
        does not follow the format
    :raises DimensionError: unsupported dims
    """
    try:
        with open(path, 'rb') as file_:
            raw = file_.read()
    except OSError as exc_:
        raise StateFileError('%s: %s' % (path, exc_.strerror or exc_))
    try:
        text = raw.decode('utf-8')
        document = json.loads(text)
    except UnicodeDecodeError as exc_:
        raise StateFileError('%s: not UTF-8 at byte offset %d'
                             % (path, exc_.start))
    except json.JSONDecodeError as exc_:
        offset = len(text[:exc_.pos].encode('utf-8'))
        raise StateFileError('%s: invalid JSON at byte offset %d: %s'
                             % (path, offset, exc_.msg))

    if not isinstance(document, dict):
        raise StateFileError('%s: expected a JSON object' % path)
    missing = [key for key in ('format_version', 'dims', 'amps')
               if key not in document]
    if missing:
        raise StateFileError('%s: missing field(s) %s'
                             % (path, ', '.join(missing)))
    if document['format_version'] != FORMAT_VERSION:
        raise StateFileError('%s: unsupported format_version %r'
                             % (path, document['format_version']))
    dims, amps = document['dims'], document['amps']
    if (not isinstance(dims, list)
            or not all(isinstance(size, int) and not isinstance(size, bool)
                       for size in dims)):
        raise StateFileError('%s: dims must be a list of integers' % path)
    if not isinstance(amps, list) or not all(
            isinstance(pair, list) and len(pair) == 2
            and all(isinstance(part, (int, float))
                    and not isinstance(part, bool) for part in pair)
            for pair in amps):
        raise StateFileError('%s: amps must be a list of [re, im] pairs'
                             % path)
    if len(amps) != int(np.prod(dims)):
        raise StateFileError('%s: %d amplitudes for dims %r (expected %d)'
                             % (path, len(amps), dims, int(np.prod(dims))))
    try:
        amplitudes = np.array([complex(re, im) for re, im in amps])
    except (OverflowError, TypeError) as exc_:
        raise StateFileError('%s: amplitude out of range: %s' % (path, exc_))
    try:
        return make_state(dims, amplitudes)
    except DimensionError:
        raise
    except StateError as exc_:
        raise StateFileError('%s: %s' % (path, exc_))


def state_file_document(state):
    """JSON object of a state file for ``state``."""
    return {
        'format_version': FORMAT_VERSION,
        'dims': list(state.dims.dims),
        'amps': [[float(value.real), float(value.imag)]
                 for value in state.amplitudes],
    }


def write_state_file(state, file_):
    """
    Write ``state`` as a state file into an open text stream.

    Floats are written with ``repr`` precision, so reading the file back
    gives the same amplitudes.
    """
    json.dump(state_file_document(state), file_)
    file_.write('\n')


def _genericity_fields(report):
    if report is None:
        return None
    return {
        'is_generic': report.is_generic,
        'n_eff': report.n_eff,
        'padded_side': report.padded_side,
        'theta_min_gap': _jsonable(report.theta_min_gap),
        'omega_min_gap': _jsonable(report.omega_min_gap),
        'theta_min_abs': _jsonable(report.theta_min_abs),
        'omega_min_abs': _jsonable(report.omega_min_abs),
        'dims_check': report.dims_check,
        'spectrum_degenerate': report.spectrum_degenerate,
        'reason': report.reason,
    }


def _genericity_line(name, fields):
    if fields is None:
        return '%s: not computed' % name
    return '%s: %s' % (name, ' '.join('%s=%s' % (key, fields[key])
                                      for key in sorted(fields)))


def cmd_invariants(state_file, mixed, tolerances):
    """
    Invariant profile of the state in ``state_file``.

    :param state_file: path to a state file
    :param mixed: also report the ``J`` invariants of ``Tr_A |psi><psi|``
    :param tolerances: numerical tolerances

    :rtype: Report
    """
    state = read_state_file(state_file)
    entries = list(invariant_profile(state, tolerances))
    if mixed:
        entries += list(mixed_state_profile(partial_trace(state, [0]),
                                            tolerances))
    fields = {
        'dims': list(state.dims.dims),
        'entries': [{'label': str(label), 'value': value}
                    for label, value in entries],
    }
    text = '\n'.join('%s = %s' % (label, format_value(value))
                     for label, value in entries)
    return Report(0, fields, text)


def cmd_equiv(state_file, other_file, oracle, tolerances, search_config):
    """
    Decide local unitary equivalence of two state files.

    The exit code is 0 for Equivalent, 1 for Inequivalent and 2 for
    Indeterminate.

    :param oracle: also run the alternating search
    :type search_config: lutool.lusearch.SearchConfig

    :rtype: Report
    """
    state = read_state_file(state_file)
    other = read_state_file(other_file)
    verdict = decide_equivalence(state, other, tolerances)
    witness = verdict.witness
    fields = {
        'verdict': str(verdict.outcome),
        'reason': verdict.reason,
        'witness': None if witness is None else {
            'name': witness.name,
            'left': _jsonable(round_significant(witness.left)),
            'right': _jsonable(round_significant(witness.right)),
        },
        'genericity': _genericity_fields(verdict.genericity),
        'genericity_other': _genericity_fields(verdict.genericity_other),
    }
    lines = ['verdict: %s' % verdict.outcome,
             'reason: %s' % verdict.reason,
             'witness: %s' % ('none' if witness is None else witness),
             _genericity_line('genericity', fields['genericity']),
             _genericity_line('genericity_other',
                              fields['genericity_other'])]
    if oracle:
        result = alternating_search(state, other, search_config)
        fields['oracle'] = {
            'best_fidelity': result.best_fidelity,
            'best_restart': result.best_restart,
            'iterations': result.iterations,
            'restarts': len(result.traces),
        }
        lines.append('oracle: best_fidelity=%s best_restart=%d '
                     'iterations=%d restarts=%d'
                     % (format_value(result.best_fidelity),
                        result.best_restart, result.iterations,
                        len(result.traces)))
    return Report(VERDICT_EXIT_CODES[verdict.outcome], fields,
                  '\n'.join(lines))


def cmd_gen(kind, dims, seed, output):
    """
    Generate a state file.

    :param kind: ``random``, ``ghz``, ``w`` or ``product``
    :param dims: local dimensions
    :param seed: seed of the random kinds
    :param output: path to write to, ``None`` for the report itself

    :rtype: Report

    :raises DimensionError: ``kind`` does not support ``dims``
    :raises StateFileError: ``output`` can not be written
    """
    stream = RandomStream(seed, 'gen/%s' % kind)
    if kind == 'random':
        state = random_pure_state(dims, stream)
    elif kind == 'product':
        state = random_product_state(dims, stream)
    elif kind == 'ghz':
        state = ghz_state(dims)
    elif kind == 'w':
        state = w_state(dims)
    else:
        raise StateError('unknown state kind %r' % (kind,))
    document = state_file_document(state)
    if output is None:
        return Report(0, document, json.dumps(document))
    try:
        with open(output, 'w') as file_:
            write_state_file(state, file_)
    except OSError as exc_:
        raise StateFileError('%s: %s' % (output, exc_.strerror or exc_))
    path = os.path.abspath(output)
    return Report(0, {'path': path, 'kind': kind, 'dims': list(dims)}, path)


def cmd_selfcheck(mode, seed):
    """
    Run the self-check suites.

    :param mode: ``quick`` or ``full``
    :param seed: root seed of the suites

    :rtype: Report
    """
    results = run_suites(mode, seed)
    passed = sum(result.passed for result in results)
    fields = {
        'mode': mode,
        'seed': seed,
        'suites': [{'name': result.name, 'passed': result.passed,
                    'elapsed': round(result.elapsed, 3),
                    'detail': result.detail} for result in results],
        'passed': passed,
        'total': len(results),
    }
    lines = [str(result) for result in results]
    lines.append('selfcheck %s: %d/%d suites passed'
                 % (mode, passed, len(results)))
    return Report(0 if passed == len(results) else 1, fields,
                  '\n'.join(lines))


def parse():
    """
    Set of the parsing logic for the LUTOOL.
    It doesn't perform parsing, just fills the parser object with arguments.

    :returns: fully configured ArgumentParser instance
    :rtype: LutoolArgumentParser object
    """
    # Create the top-level parser.
    main_parser = LutoolArgumentParser(
        prog='lutool',
        description="Invariants and local unitary equivalence of "
                    "multipartite pure states.",
        epilog="    Note: Use -h or --help argument with any of actions "
               "to show detailed help info."
    )
    subparsers = main_parser.add_subparsers(
        parser_class=LutoolArgumentParser,
        help="It's a choose which action to perform.")

    # Create a parent parser with the options common for every action.
    parent_parser = argparse.ArgumentParser(add_help=False)
    parent_parser.add_argument('--tol-profile', type=positive_float_type,
                               dest='tol_profile',
                               help='Relative tolerance of the profile, '
                                    'spectrum and Gram comparisons.')
    parent_parser.add_argument('--tol-gap', type=positive_float_type,
                               dest='tol_gap',
                               help='Relative eigenvalue gap under which '
                                    'two eigenvalues count as degenerate.')
    parent_parser.add_argument('--rank-cutoff', type=positive_float_type,
                               dest='rank_cutoff',
                               help='Eigenvalues of rho below it are '
                                    'dropped.')
    parent_parser.add_argument('--seed', type=seed_type,
                               help='Root seed of the random draws.')
    parent_parser.add_argument('--json', action='store_true',
                               dest='json_output',
                               help='Print a JSON object instead of text.')
    parent_parser.add_argument('-v', '--verbose', action='count', default=0,
                               help='Log to stderr; twice for debug.')

    # Create the parser for the "invariants" command.
    parser_invariants = subparsers.add_parser(
        'invariants',
        parents=[parent_parser],
        help='It prints the invariant profile of a state file.'
    )
    parser_invariants.add_argument('state_file', type=str,
                                   help="A path to the state file.")
    parser_invariants.add_argument('--mixed', action='store_true',
                                   help='Also print the J invariants of '
                                        'rho = Tr_A |psi><psi|.')
    parser_invariants.set_defaults(execute_case=cmd_invariants)

    # Create the parser for the "equiv" command.
    parser_equiv = subparsers.add_parser(
        'equiv',
        parents=[parent_parser],
        help='It decides local unitary equivalence of two state files.'
    )
    parser_equiv.add_argument('state_file', type=str,
                              help="A path to the first state file.")
    parser_equiv.add_argument('other_file', type=str,
                              help="A path to the second state file.")
    parser_equiv.add_argument('--oracle', action='store_true',
                              help='Also run the alternating search.')
    parser_equiv.add_argument('--restarts', type=int, default=20,
                              help='Restarts of the alternating search.')
    parser_equiv.add_argument('--max-iters', type=int, default=500,
                              dest='max_iters',
                              help='Sweeps per restart.')
    parser_equiv.add_argument('--workers', type=int, default=1,
                              help='Threads running restarts.')
    parser_equiv.set_defaults(execute_case=cmd_equiv)

    # Create the parser for the "gen" command.
    parser_gen = subparsers.add_parser(
        'gen',
        parents=[parent_parser],
        help='It writes a state file of a named or random state.'
    )
    parser_gen.add_argument('kind', choices=GEN_KINDS,
                            help="The kind of state.")
    parser_gen.add_argument('dims', type=dims_type,
                            help="Comma separated local dimensions.")
    parser_gen.add_argument('-o', '--output', type=str,
                            help="A path to write the file to.")
    parser_gen.set_defaults(execute_case=cmd_gen)

    # Create the parser for the "selfcheck" command.
    parser_selfcheck = subparsers.add_parser(
        'selfcheck',
        parents=[parent_parser],
        help='It runs the self-check suites.'
    )
    modes = parser_selfcheck.add_mutually_exclusive_group()
    modes.add_argument('--quick', action='store_const', const=QUICK,
                       dest='mode', help='Reduced sample counts (default).')
    modes.add_argument('--full', action='store_const', const=FULL,
                       dest='mode', help='Full sample counts.')
    parser_selfcheck.set_defaults(execute_case=cmd_selfcheck, mode=QUICK)

    return main_parser


def show_data(report, json_output=False):
    """
    Method used to show the action's result in the console.

    :param report: report returned by an action
    :type report: Report

    :param json_output: print the JSON object instead of the text

    :returns: None
    """
    if json_output:
        print(json.dumps(report.fields, indent=2, sort_keys=True,
                         default=_jsonable))
    else:
        print(report.text)


def args_prepare(required_args, parsed_args):
    """
    Filling all missed, but required by the action function arguments.
    Return dictionary that will be passed to the action function.

    ``tolerances``, ``seed`` and ``search_config`` are built from the parsed
    flags; everything else is taken from ``parsed_args`` as is.

    :param required_args: list of required argument's names for
        the action function
    :type required_args: list of stings
    :param parsed_args: can be any object with appropriate names of attributes
        required by the action function
    :type parsed_args: argparse.Namespace

    :returns: dictionary that will be used like the ``**kwargs`` argument
    :rtype: dictionary

    :raises StateError: malformed ``LUTOOL_SEED`` or search settings
    """
    args_base = {}
    if 'tolerances' in required_args:
        args_base['tolerances'] = DEFAULT_TOLERANCES.replace(
            profile=getattr(parsed_args, 'tol_profile', None),
            gap=getattr(parsed_args, 'tol_gap', None),
            rank_cutoff=getattr(parsed_args, 'rank_cutoff', None),
        )
    if 'seed' in required_args or 'search_config' in required_args:
        args_base['seed'] = resolve_seed(getattr(parsed_args, 'seed', None))
    if 'search_config' in required_args:
        args_base['search_config'] = SearchConfig(
            restarts=parsed_args.restarts,
            max_iters=parsed_args.max_iters,
            seed=args_base['seed'],
            workers=parsed_args.workers,
        )
    prepared_args = {}
    for required_arg in required_args:
        if required_arg in args_base:
            prepared_args[required_arg] = args_base[required_arg]
        else:
            prepared_args[required_arg] = getattr(parsed_args, required_arg)
    return prepared_args


def get_all_func_args(function):
    """
    It finds out all names of positional and default arguments.

    :Note: Such types of arguments are not inspected:
        collected remaining positional arguments - ``def func(*args)``;
        collected remaining keyword arguments - ``def func(**name)``;
        args that must be passed by keyword only -
        ``def func(*other, name=value)``.

    :param function: function object to inspect
    :type function: function object

    :returns: list with names of all positional and optional arguments
    :rtype: list of strings
    """
    return list(function.__code__.co_varnames[:function.__code__.co_argcount])


def main(argv=None):
    """
    The main **lutool** CLI logic. It parses arguments, defines the action
    function, prepares parsed arguments, calls the action and shows its
    report.

    :param argv: command line arguments without the program name

        (optional, default: ``sys.argv[1:]``)
    :type argv: list of strings

    :returns: the process exit code
    :rtype: int
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parse().print_help()
        return 0
    args = parse().parse_args(argv)
    if not hasattr(args, 'execute_case'):
        parse().print_help()
        return EXIT_PARSE_ERROR
    if args.verbose:
        logging.basicConfig(
            level=logging.DEBUG if args.verbose > 1 else logging.INFO,
            stream=sys.stderr,
            format='%(levelname)s %(name)s: %(message)s')

    required_args = get_all_func_args(args.execute_case)
    try:
        parsed_args = args_prepare(required_args, args)
        report = args.execute_case(**parsed_args)
    except DimensionError as exc_:
        print('lutool: dimension error: %s' % exc_, file=sys.stderr)
        return EXIT_DIMENSION_ERROR
    except StateFileError as exc_:
        print('lutool: %s' % exc_, file=sys.stderr)
        return EXIT_PARSE_ERROR
    except (StateError, ConsistencyError) as exc_:
        log.debug('action failed', exc_info=True)
        print('lutool: error: %s' % exc_, file=sys.stderr)
        return EXIT_PARSE_ERROR
    show_data(report, args.json_output)
    return report.exit_code
