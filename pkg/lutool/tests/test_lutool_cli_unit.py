import argparse
import json
import os
import shutil
import tempfile
import unittest
from io import StringIO
from unittest.mock import patch

from numpy.testing import assert_allclose

from lutool.cli import (EXIT_DIMENSION_ERROR, EXIT_PARSE_ERROR, Report,
                        StateFileError, args_prepare, cmd_equiv, cmd_gen,
                        cmd_invariants, cmd_selfcheck, dims_type,
                        format_value, get_all_func_args, main, parse,
                        read_state_file, show_data, write_state_file)
from lutool.config import DEFAULT_SEED, DEFAULT_TOLERANCES
from lutool.invariants import invariant_profile
from lutool.sampling import RandomStream, random_pure_state


class TemporaryDirectoryMixin(object):

    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.directory)

    def path(self, name):
        return os.path.join(self.directory, name)

    def write(self, name, content):
        with open(self.path(name), 'w') as file_:
            file_.write(content)
        return self.path(name)


class TestCliArgumentTypes(unittest.TestCase):
    """
    Test for the ``dims`` argument's type checker.
    """

    def test_dims_type(self):
        self.assertEqual(dims_type('4,2,2'), (4, 2, 2))
        for bad_value in ('4', '4,x', '2,0', ''):
            self.assertRaises(argparse.ArgumentTypeError, dims_type,
                              bad_value)


class TestCliFormatValue(unittest.TestCase):

    def test_scientific_notation(self):
        """
        15 significant digits, lower-case ``e`` and an unpadded exponent.
        """
        self.assertEqual(format_value(0.5), '5.00000000000000e-1')
        self.assertEqual(format_value(1.0), '1.00000000000000e0')
        self.assertEqual(format_value(0.125), '1.25000000000000e-1')
        self.assertEqual(format_value(5 / 9), '5.55555555555556e-1')
        self.assertEqual(format_value(12.5), '1.25000000000000e1')


class TestCliShowDataFunction(unittest.TestCase):
    """
    Test case of the lutool.cli.show_data() function.
    """

    def test_show_text(self):
        report = Report(0, {'value': 1}, 'test string value')
        with patch('sys.stdout', new_callable=StringIO) as mock_print:
            show_data(report)
        self.assertEqual(mock_print.getvalue(), 'test string value\n',
                         'the text rendering must be printed as is')

    def test_show_json(self):
        report = Report(0, {'value': 1}, 'test string value')
        with patch('sys.stdout', new_callable=StringIO) as mock_print:
            show_data(report, json_output=True)
        self.assertEqual(json.loads(mock_print.getvalue()), {'value': 1})


class TestCliStateFiles(TemporaryDirectoryMixin, unittest.TestCase):
    """
    Test-case for reading and writing state files.
    """

    def test_round_trip(self):
        """
        A written state reads back with the same amplitudes and profile.
        """
        state = random_pure_state((2, 3, 2), RandomStream(61, 'file'))
        with open(self.path('state.json'), 'w') as file_:
            write_state_file(state, file_)
        restored = read_state_file(self.path('state.json'))
        self.assertEqual(restored.dims, state.dims)
        assert_allclose(restored.amplitudes, state.amplitudes, atol=1e-15)
        for (_, value), (_, restored_value) in zip(
                invariant_profile(state), invariant_profile(restored)):
            self.assertAlmostEqual(value, restored_value, delta=1e-12)

    def test_invalid_json_names_byte_offset(self):
        content = '{"format_version": 1, "dims": [2, 2], "amps": x}'
        path = self.write('broken.json', content)
        with self.assertRaises(StateFileError) as context:
            read_state_file(path)
        self.assertIn('byte offset %d' % content.index('x'),
                      str(context.exception))

    def test_format_errors(self):
        cases = {
            'version.json': {'format_version': 2, 'dims': [2, 2],
                             'amps': [[1, 0]] * 4},
            'missing.json': {'format_version': 1, 'dims': [2, 2]},
            'length.json': {'format_version': 1, 'dims': [2, 2],
                            'amps': [[1, 0]] * 3},
            'pairs.json': {'format_version': 1, 'dims': [2, 2],
                           'amps': [[1, 0, 0]] * 4},
            'zero.json': {'format_version': 1, 'dims': [2, 2],
                          'amps': [[0, 0]] * 4},
        }
        for name, document in cases.items():
            path = self.write(name, json.dumps(document))
            with self.assertRaises(StateFileError, msg=name):
                read_state_file(path)
        with self.assertRaises(StateFileError):
            read_state_file(self.path('absent.json'))


class TestCliParseFunction(unittest.TestCase):
    """
    Test case of the lutool.cli.parse() function.
    """

    def test_invariants_arguments(self):
        parsed_args = parse().parse_args(['invariants', 'STATE_FILE'])
        expected_args_dict = {
            'execute_case': cmd_invariants,
            'state_file': 'STATE_FILE',
            'mixed': False,
            'tol_profile': None,
            'tol_gap': None,
            'rank_cutoff': None,
            'seed': None,
            'json_output': False,
            'verbose': 0,
        }
        self.assertDictEqual(dict(parsed_args._get_kwargs()),
                             expected_args_dict)

    def test_equiv_arguments(self):
        parsed_args = parse().parse_args(
            'equiv A_FILE B_FILE --oracle --restarts 3 --seed 0x10 '
            '--tol-profile 1e-6'.split())
        self.assertEqual(parsed_args.execute_case, cmd_equiv)
        self.assertEqual((parsed_args.state_file, parsed_args.other_file),
                         ('A_FILE', 'B_FILE'))
        self.assertTrue(parsed_args.oracle)
        self.assertEqual(parsed_args.restarts, 3)
        self.assertEqual(parsed_args.seed, 16)
        self.assertEqual(parsed_args.tol_profile, 1e-6)

    def test_gen_and_selfcheck_arguments(self):
        parsed_args = parse().parse_args('gen w 2,2,2 -o OUT'.split())
        self.assertEqual(parsed_args.execute_case, cmd_gen)
        self.assertEqual(parsed_args.dims, (2, 2, 2))
        self.assertEqual(parsed_args.output, 'OUT')
        self.assertEqual(parse().parse_args(['selfcheck']).mode, 'quick')
        parsed_args = parse().parse_args(['selfcheck', '--full'])
        self.assertEqual(parsed_args.execute_case, cmd_selfcheck)
        self.assertEqual(parsed_args.mode, 'full')

    def test_usage_errors_exit_with_parse_code(self):
        """
        Usage errors exit with 3; exit code 2 is reserved for
        Indeterminate verdicts.
        """
        bad_calls = (['invariants'], ['gen', 'sphere', '2,2'],
                     ['equiv', 'A', 'B', '--tol-gap', '-1'],
                     ['selfcheck', '--quick', '--full'])
        for argv in bad_calls:
            with patch('sys.stderr', new_callable=StringIO):
                with self.assertRaises(SystemExit) as context:
                    parse().parse_args(argv)
            self.assertEqual(context.exception.code, EXIT_PARSE_ERROR,
                             'unexpected exit code for %r' % (argv,))


class TestCliArgumentsPreparation(unittest.TestCase):
    def test_get_all_func_args(self):
        """
        Test of accurate discovery of required arguments of the function.
        """
        self.assertListEqual(
            get_all_func_args(lambda arg_1, arg_2, arg_3=True: None),
            ['arg_1', 'arg_2', 'arg_3'])
        self.assertListEqual(get_all_func_args(cmd_equiv),
                             ['state_file', 'other_file', 'oracle',
                              'tolerances', 'search_config'])

    def test_plain_arguments(self):
        given_namespace = argparse.Namespace(one='TEST 1', two='TEST 2',
                                             three='TEST 3')
        self.assertDictEqual(
            args_prepare(['one', 'two'], given_namespace),
            dict(one='TEST 1', two='TEST 2'),
            "Should provide only `one` and `two` arguments")

    def test_tolerances_from_flags(self):
        given_namespace = argparse.Namespace(tol_profile=1e-6, tol_gap=None,
                                             rank_cutoff=1e-12)
        tolerances = args_prepare(['tolerances'],
                                  given_namespace)['tolerances']
        self.assertEqual(tolerances.profile, 1e-6)
        self.assertEqual(tolerances.gap, DEFAULT_TOLERANCES.gap)
        self.assertEqual(tolerances.rank_cutoff, 1e-12)

    def test_seed_resolution(self):
        """
        The ``--seed`` flag wins over ``LUTOOL_SEED``, which wins over the
        default.
        """
        with patch.dict('os.environ', {'LUTOOL_SEED': '11'}):
            self.assertEqual(
                args_prepare(['seed'], argparse.Namespace(seed=None))['seed'],
                11)
            self.assertEqual(
                args_prepare(['seed'], argparse.Namespace(seed=5))['seed'], 5)
        with patch.dict('os.environ', {}, clear=True):
            self.assertEqual(
                args_prepare(['seed'], argparse.Namespace(seed=None))['seed'],
                DEFAULT_SEED)

    def test_search_config(self):
        given_namespace = argparse.Namespace(seed=9, restarts=3, max_iters=50,
                                             workers=2)
        config = args_prepare(['search_config'],
                              given_namespace)['search_config']
        self.assertEqual((config.restarts, config.max_iters, config.seed,
                          config.workers), (3, 50, 9, 2))


class TestCliStarter(TemporaryDirectoryMixin, unittest.TestCase):
    """
    Test-case for the ``lutool.cli.main()`` function.
    """

    @staticmethod
    def run_main(argv):
        """
        Run ``main()`` with ``sys.argv`` replaced and return the exit code
        with the intercepted stdout and stderr.
        """
        with patch('sys.stdout', new_callable=StringIO) as mock_stdout, \
                patch('sys.stderr', new_callable=StringIO) as mock_stderr, \
                patch('lutool.cli.sys.argv', ['lutool'] + argv):
            try:
                code = main()
            except SystemExit as exc_:
                code = exc_.code
        return code, mock_stdout.getvalue(), mock_stderr.getvalue()

    def gen(self, kind, dims, name, *extra):
        code, output, _ = self.run_main(['gen', kind, dims, '-o',
                                         self.path(name)] + list(extra))
        self.assertEqual(code, 0)
        self.assertEqual(output.strip(), os.path.abspath(self.path(name)))
        return self.path(name)

    def test_help_without_arguments(self):
        code, output, _ = self.run_main([])
        self.assertEqual(code, 0)
        with patch('sys.stdout', new_callable=StringIO) as mock_stdout:
            parse().print_help()
        self.assertEqual(output, mock_stdout.getvalue())

    def test_gen_ghz_to_stdout(self):
        code, output, _ = self.run_main(['gen', 'ghz', '2,2,2'])
        self.assertEqual(code, 0)
        document = json.loads(output)
        self.assertEqual(document['format_version'], 1)
        self.assertEqual(document['dims'], [2, 2, 2])
        nonzero = [index for index, (re, im) in enumerate(document['amps'])
                   if abs(re) + abs(im) > 0]
        self.assertEqual(nonzero, [0, 7])

    def test_gen_random_is_reproducible(self):
        first = self.run_main(['gen', 'random', '4,2,2', '--seed', '42'])[1]
        second = self.run_main(['gen', 'random', '4,2,2', '--seed', '42'])[1]
        other = self.run_main(['gen', 'random', '4,2,2', '--seed', '43'])[1]
        self.assertEqual(first, second)
        self.assertNotEqual(first, other)

    def test_gen_to_unwritable_path(self):
        code, _, error = self.run_main(
            ['gen', 'ghz', '2,2,2', '-o',
             self.path(os.path.join('absent', 'ghz.json'))])
        self.assertEqual(code, EXIT_PARSE_ERROR,
                         'an unwritable output is a state file error')
        self.assertNotIn('Traceback', error)

    def test_invariants_of_overflowing_amplitude(self):
        """An integer amplitude beyond the float range is a format error."""
        path = self.write('huge.json',
                          '{"format_version": 1, "dims": [2, 2], "amps": '
                          '[[1%s, 0], [0, 0], [0, 0], [0, 0]]}' % ('0' * 400))
        code, _, error = self.run_main(['invariants', path])
        self.assertEqual(code, EXIT_PARSE_ERROR)
        self.assertIn('out of range', error)

    def test_gen_unsupported_dims(self):
        code, _, error = self.run_main(['gen', 'w', '2,3,2'])
        self.assertEqual(code, EXIT_DIMENSION_ERROR)
        self.assertIn('dimension', error)

    def test_invariants(self):
        path = self.gen('ghz', '2,2,2', 'ghz.json')
        code, output, _ = self.run_main(['invariants', path])
        self.assertEqual(code, 0)
        lines = output.splitlines()
        self.assertEqual(len(lines), 54)
        self.assertIn('I[A;2] = 5.00000000000000e-1', lines)
        self.assertIn('I[A,B;2,2] = 1.25000000000000e-1', lines)

        code, output, _ = self.run_main(['invariants', path, '--mixed',
                                         '--json'])
        entries = json.loads(output)['entries']
        self.assertEqual(len(entries), 54 + 8)
        self.assertEqual(entries[-1]['label'], 'J[C;4]')

    def test_invariants_of_four_parties(self):
        path = self.gen('ghz', '2,2,2,2', 'ghz4.json')
        code, _, _ = self.run_main(['invariants', path])
        self.assertEqual(code, EXIT_DIMENSION_ERROR)

    def test_invariants_of_truncated_file(self):
        path = self.write('truncated.json', '{"format_version": 1, "di')
        code, _, error = self.run_main(['invariants', path])
        self.assertEqual(code, EXIT_PARSE_ERROR)
        self.assertIn('byte offset', error)

    def test_equiv_exit_codes(self):
        ghz = self.gen('ghz', '2,2,2', 'ghz.json')
        w = self.gen('w', '2,2,2', 'w.json')
        code, output, _ = self.run_main(['equiv', ghz, w])
        self.assertEqual(code, 1)
        self.assertIn('witness: I[A;2]: 0.5 vs 0.555555555555556',
                      output.splitlines())

        code, output, _ = self.run_main(['equiv', ghz, ghz])
        self.assertEqual(code, 2)
        self.assertIn('reason: NOT_GENERIC', output)

        other = self.gen('random', '2,2,3', 'other.json')
        code, _, _ = self.run_main(['equiv', ghz, other])
        self.assertEqual(code, EXIT_DIMENSION_ERROR)

    def test_equiv_json_with_oracle(self):
        ghz = self.gen('ghz', '2,2,2', 'ghz.json')
        w = self.gen('w', '2,2,2', 'w.json')
        code, output, _ = self.run_main(['equiv', ghz, w, '--json',
                                         '--oracle', '--restarts', '3'])
        self.assertEqual(code, 1)
        fields = json.loads(output)
        self.assertEqual(fields['verdict'], 'Inequivalent')
        self.assertEqual(fields['witness'], {'name': 'I[A;2]', 'left': 0.5,
                                             'right': 0.555555555555556})
        self.assertEqual(fields['oracle']['restarts'], 3)
        self.assertLess(fields['oracle']['best_fidelity'], 1 - 1e-3)

    def test_selfcheck_exit_code(self):
        passing = [type('Result', (), dict(name='a', passed=True, elapsed=0.1,
                                           detail='', __str__=lambda s: 'a'))()]
        failing = passing + [type('Result', (), dict(
            name='b', passed=False, elapsed=0.1, detail='broken',
            __str__=lambda s: 'b'))()]
        with patch('lutool.cli.run_suites', return_value=passing):
            self.assertEqual(self.run_main(['selfcheck'])[0], 0)
        with patch('lutool.cli.run_suites', return_value=failing) as mocked:
            code, output, _ = self.run_main(['selfcheck', '--full',
                                             '--seed', '3'])
        self.assertEqual(code, 1)
        self.assertIn('1/2 suites passed', output)
        mocked.assert_called_once_with('full', 3)

    def test_state_round_trip_through_gen(self):
        path = self.gen('random', '4,2,2', 'random.json', '--seed', '42')
        state = read_state_file(path)
        self.assertEqual(state.dims.dims, (4, 2, 2))
        self.assertFalse(state.renormalized)
        with open(path) as file_:
            self.assertEqual(json.load(file_)['format_version'], 1)

    def test_direct_call(self):
        """Actions can be called without the parser."""
        report = cmd_gen('ghz', (2, 2, 2), 0, None)
        self.assertEqual(report.exit_code, 0)
        self.assertEqual(report.fields['dims'], [2, 2, 2])


if __name__ == '__main__':
    unittest.main()
