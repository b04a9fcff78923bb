import io
import json
import os
import tempfile
import unittest

from cli import run


def _run(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


class TestCommands(unittest.TestCase):

    def test_classify(self):
        self.assertEqual(_run('classify', '--beta', 'digits=1,1'), (0, '{"kind":"sft","k":2}\n', ''))
        code, out, _ = _run('classify', '--beta', 'digits=3,(2)')
        self.assertEqual(json.loads(out), {'kind': 'sofic', 'l': 1, 'k_beta': 1})

    def test_group_class(self):
        code, out, _ = _run('group-class', '--beta', 'digits=3,(2)')
        self.assertEqual((code, out), (0, "V_3\n"))

    def test_k0(self):
        self.assertEqual(_run('k0', '--beta', 'digits=2')[1], "0\n")
        self.assertEqual(_run('k0', '--beta', 'digits=3')[1], "Z/2Z\n")
        self.assertEqual(_run('k0', '--beta', 'rational=3/2')[1], "Z\n")

    def test_catalog_names(self):
        self.assertEqual(_run('classify', '--beta', '@golden')[1], '{"kind":"sft","k":2}\n')
        self.assertIn("@two_plus_sqrt3", _run('catalog')[1])

    def test_words_and_expansions(self):
        self.assertEqual(_run('words', '--beta', 'digits=1,1', '--n', '2')[1], "0,0\n0,1\n1,0\n")
        self.assertEqual(_run('xi', '--beta', 'digits=1,1', '--n', '4')[1], "1,0,1,0\n")
        self.assertEqual(_run('expand', '--beta', 'digits=2', '--x', '3/8', '--n', '3')[1], "0,1,1\n")
        self.assertEqual(_run('interval', '--beta', 'digits=2', '--word', '1')[1], "[1/2, 1)\n")
        self.assertEqual(_run('path-count', '--beta', 'digits=1,1', '--n', '10')[1], "144 paths, 144 admissible words\n")

    def test_json_outputs_are_canonical(self):
        for argv in [
            ('matrices', '--beta', 'digits=3,(2)'),
            ('graph', '--beta', 'digits=1,1'),
            ('kms', '--beta', 'digits=1,1', '--word', '1'),
            ('homology', '--beta', 'digits=3,(2)'),
        ]:
            code, out, _ = _run(*argv, '--format', 'json')
            with self.subTest(argv=argv):
                self.assertEqual(code, 0)
                text = out.rstrip("\n")
                self.assertEqual(json.dumps(json.loads(text), separators=(",", ":"), ensure_ascii=False), text)

    def test_matrices(self):
        data = json.loads(_run('matrices', '--beta', 'digits=3,(2)', '--format', 'json')[1])
        self.assertEqual(data['M'], [[3, 2], [1, 1]])
        self.assertEqual(data['eta'], [4, -1])
        self.assertEqual(data['det'], -2)

    def test_graph_dot(self):
        code, out, _ = _run('graph', '--beta', 'digits=1,1', '--format', 'dot')
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("digraph {"))
        self.assertIn('v2 -> v1 [label="1"];', out)

    def test_isomorphic(self):
        self.assertEqual(_run('isomorphic', '--beta', 'digits=1,1', '--other', 'digits=2')[1], "yes\n")
        self.assertEqual(_run('isomorphic', '--beta', 'digits=1,1', '--other', '@full3')[1], "no\n")


class TestTables(unittest.TestCase):

    def test_eval(self):
        self.assertEqual(_run('table', 'eval', '--beta', 'digits=2', '--in', 'swap.json', '--x', '1/4'), (0, "3/4\n", ''))

    def test_validate(self):
        self.assertEqual(_run('table', 'validate', '--in', 'golden_swap')[:2], (0, "ok\n"))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'broken.json')
            with open(path, 'w', encoding='utf-8') as f:
                json.dump({'beta': 'digits=2', 'rows': [{'top': '1', 'bottom': '0', 'class': 1}]}, f)
            code, out, _ = _run('table', 'validate', '--in', path)
            self.assertEqual(code, 1)
            self.assertIn("bottom cover gap at l=1/2", out)

    def test_beta_must_match_table(self):
        code, out, _ = _run('table', 'invert', '--beta', 'digits=1,1', '--in', 'swap', '--format', 'json')
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(out)['error'], 'context_mismatch')

    def test_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            def path(name):
                return os.path.join(tmp, name)

            self.assertEqual(_run('table', 'compose', '--in', 'thompson_a', '--in', 'thompson_b', '--out', path('ab.json'))[0], 0)
            self.assertEqual(_run('table', 'invert', '--in', path('ab.json'), '--out', path('inverse.json'))[0], 0)
            self.assertEqual(_run('table', 'compose', '--in', path('ab.json'), '--in', path('inverse.json'), '--out', path('id.json'))[0], 0)
            self.assertEqual(_run('table', 'identity', '--beta', 'digits=2', '--out', path('e.json'))[0], 0)

            result = _run('table', 'to-pl', '--in', path('id.json'), '--format', 'json')
            expected = _run('table', 'to-pl', '--in', path('e.json'), '--format', 'json')
            self.assertEqual(result, expected)

    def test_random(self):
        code, out, _ = _run('table', 'random', '--beta', 'digits=1,1', '--seed', '42', '--size', '5')
        self.assertEqual(code, 0)
        self.assertGreaterEqual(len(json.loads(out)['rows']), 5)
        self.assertEqual(_run('table', 'random', '--beta', 'digits=1,1', '--seed', '42', '--size', '5')[1], out)


class TestErrors(unittest.TestCase):

    def test_usage_errors(self):
        self.assertEqual(_run()[0], 2)
        self.assertEqual(_run('bogus')[0], 2)
        self.assertEqual(_run('classify')[0], 2)
        self.assertEqual(_run('classify', '--beta', 'digits=1,1', '--format', 'dot')[0], 2)
        self.assertEqual(_run('table', 'eval', '--in', 'no-such-table.json', '--x', '0')[0], 2)
        self.assertEqual(_run('classify', '--beta', 'digits=1,1', '--depth', '0')[0], 2)

    def test_domain_errors(self):
        code, out, _ = _run('classify', '--beta', 'digits=1,2', '--format', 'json')
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(out)['error'], 'parse_error')

        code, out, err = _run('matrices', '--beta', 'rational=3/2')
        self.assertEqual((code, out), (1, ''))
        self.assertIn("not_sofic", err)

        code, out, _ = _run('table', 'eval', '--in', 'swap', '--x', '1', '--format', 'json')
        self.assertEqual(json.loads(out)['error'], 'out_of_domain')
