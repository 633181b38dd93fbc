import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

from bquiver.bquiver import build_parser, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(build_parser().parse_args(list(argv)))
    return code, out.getvalue(), err.getvalue()


class TestAlgebraCommands(unittest.TestCase):

    def test_delta_of_borbit(self):
        code, out, _ = call('delta', '--expr', '(1 (1 5))', '--as-borbit')
        self.assertEqual(code, 0)
        self.assertIn('2*[1,1,5]', out)
        self.assertIn('- 2*[1,5,1]', out)

    def test_delta_of_zero(self):
        code, out, _ = call('delta', '--expr', '(1 (1 (1 2)))')
        self.assertEqual(code, 0)
        self.assertEqual(out.strip(), '0')

    def test_pi(self):
        code, out, _ = call('pi', '--expr', '(1 2)')
        self.assertEqual(code, 0)
        self.assertIn('[1,2]', out)
        self.assertIn('[2,1]', out)

    def test_render(self):
        code, out, _ = call('render', '--expr', '(1 (2 1))', '--labeled')
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith('class: Admissible'))
        self.assertIn('@', out)

    def test_syntax_error(self):
        code, out, err = call('delta', '--expr', '(1 2')
        self.assertEqual(code, 2)
        self.assertEqual(out, '')
        self.assertTrue(err.startswith('error: forest: '))


class TestQuiverCommands(unittest.TestCase):

    def test_dims(self):
        code, out, _ = call('dims', '--n', '6')
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertIn('vertices: 30', lines)
        self.assertIn('dim I: 1', lines)
        self.assertIn('dim quotient: 64', lines)

    def test_dims_json(self):
        code, out, _ = call('dims', '--n', '5', '--json')
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data['dim quotient'], 32)

    def test_quiver_formats(self):
        code, out, _ = call('quiver', '--n', '6', '--format', 'dot')
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith('digraph Q6 {'))
        code, out, _ = call('quiver', '--n', '6')
        self.assertTrue(out.startswith('Q6: 30 vertices, 28 edges'))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'q6.json')
            call('quiver', '--n', '6', '--format', 'json', '--output', path)
            with open(path, encoding='utf-8') as f:
                self.assertEqual(json.load(f)['n'], 6)

    def test_paths(self):
        code, out, _ = call('paths', '--n', '6', '--length', '2')
        self.assertEqual(code, 0)
        self.assertEqual(len(out.splitlines()), 7)
        code, out, _ = call('paths', '--n', '6', '--length', '2', '--source', '1')
        self.assertEqual(out.strip(), 'no paths')

    def test_kernel(self):
        code, out, _ = call('kernel', '--n', '6')
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith('1122->∅: '))

    def test_bad_n(self):
        code, _, err = call('quiver', '--n', '0')
        self.assertEqual(code, 2)
        self.assertTrue(err.startswith('error: quiver: '))


class TestVerifyCommands(unittest.TestCase):

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.report_dir = os.path.join(self.temp_dir.name, 'reports')
        self.config_file = os.path.join(self.temp_dir.name, 'config.ini')
        with open(self.config_file, 'w') as f:
            f.write(f'[DEFAULT]\nmax_n = 8\nreport_dir = {self.report_dir}\n')

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_verify(self):
        code, out, _ = call('--config', self.config_file, 'verify', '--n', '6')
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith('Q6: PASS'))

    def test_verify_range(self):
        code, out, _ = call('--config', self.config_file, 'verify', '--n', '1', '--n-max', '4')
        self.assertEqual(code, 0)
        self.assertEqual(out.count('PASS'), 4)

    def test_max_n(self):
        code, _, err = call('--config', self.config_file, 'verify', '--n', '9')
        self.assertEqual(code, 2)
        self.assertTrue(err.startswith('error: '))

    def test_saved_report(self):
        code, out, _ = call('--config', self.config_file, 'verify', '--n', '5', '--save', '--json')
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith('report saved to '))
        self.assertTrue(os.listdir(self.report_dir))
        code, out, _ = call('--config', self.config_file, 'report', '--n', '5')
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith('Q5: PASS'))

    def test_missing_report(self):
        code, _, err = call('--config', self.config_file, 'report', '--n', '7')
        self.assertEqual(code, 2)
        self.assertIn('no saved report', err)


if __name__ == '__main__':
    unittest.main()
