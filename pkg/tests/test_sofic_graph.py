import random
import unittest

from errors import BetaError, NotSFT, NotSofic, OutOfRange
from models import Edge, Verdict
from services import sofic_graph
from services.beta_shift import enumerate_words
from services.number_core import make_context


class TestGolden(unittest.TestCase):

    def setUp(self):
        self.ctx = make_context("digits=1,1")

    def test_projections(self):
        system = sofic_graph.projection_system(self.ctx)
        self.assertEqual(system.size, 2)
        self.assertEqual(system.values[1], self.ctx.beta - 1)

    def test_graph(self):
        graph = sofic_graph.build_graph(self.ctx)
        self.assertEqual(graph.edges, [Edge(1, 0, 1), Edge(1, 0, 2), Edge(2, 1, 1)])
        self.assertTrue(graph.is_left_resolving())

    def test_matrices(self):
        matrix_set = sofic_graph.matrices(self.ctx)
        self.assertEqual(matrix_set.M, [[1, 1], [1, 0]])
        self.assertEqual(matrix_set.eta, [1, 1])
        self.assertEqual(matrix_set.determinant, -1)

    def test_invariants(self):
        self.assertEqual(str(sofic_graph.k0_group(self.ctx)), "0")
        self.assertEqual(str(sofic_graph.group_class(self.ctx)), "V_2")
        self.assertEqual(sofic_graph.k0_from_matrix(self.ctx), ([], 1))

    def test_path_count(self):
        self.assertEqual(sofic_graph.path_count(self.ctx, 1), 2)
        self.assertEqual(sofic_graph.path_count(self.ctx, 10), 144)

    def test_recode_generators(self):
        words = sofic_graph.recode_generators(self.ctx)
        self.assertEqual([w.letters for w in words], [(0,), (1, 0)])


class TestTwoPlusSqrtThree(unittest.TestCase):

    def setUp(self):
        self.ctx = make_context("digits=3,(2)")

    def test_graph(self):
        graph = sofic_graph.build_graph(self.ctx)
        self.assertEqual(len(graph.vertices), 2)
        self.assertEqual(len(graph.edges), 7)

    def test_matrices(self):
        matrix_set = sofic_graph.matrices(self.ctx)
        self.assertEqual(matrix_set.M, [[3, 2], [1, 1]])
        self.assertEqual(matrix_set.eta, [4, -1])
        self.assertEqual(sum(matrix_set.eta), 3)
        self.assertEqual(matrix_set.determinant, -2)
        self.assertEqual(len(matrix_set.B), 7)
        self.assertEqual(len(matrix_set.R[0]), 2)

    def test_invariants(self):
        self.assertEqual(str(sofic_graph.k0_group(self.ctx)), "Z/2Z")
        self.assertEqual(str(sofic_graph.group_class(self.ctx)), "V_3")
        self.assertEqual(sofic_graph.k0_from_matrix(self.ctx), ([2], 2))
        h0, h1, higher = sofic_graph.homology(self.ctx)
        self.assertEqual(h0.order, 2)
        self.assertEqual(str(h1), "0")
        self.assertEqual(str(higher), "0")

    def test_not_sft(self):
        with self.assertRaises(NotSFT):
            sofic_graph.recode_generators(self.ctx)

    def test_path_count_matches_word_count(self):
        for n in range(1, 6):
            with self.subTest(n=n):
                self.assertEqual(sofic_graph.path_count(self.ctx, n), len(enumerate_words(self.ctx, n)))


class TestFullShifts(unittest.TestCase):

    def test_full_two(self):
        ctx = make_context("digits=2")
        self.assertEqual(sofic_graph.matrices(ctx).M, [[2]])
        self.assertEqual(str(sofic_graph.k0_group(ctx)), "0")
        self.assertEqual(str(sofic_graph.group_class(ctx)), "V_2")

    def test_full_three(self):
        ctx = make_context("digits=3")
        self.assertEqual(str(sofic_graph.k0_group(ctx)), "Z/2Z")
        self.assertEqual(str(sofic_graph.group_class(ctx)), "V_3")


class TestNonSofic(unittest.TestCase):

    def setUp(self):
        self.ctx = make_context("rational=3/2")

    def test_invariants(self):
        k0 = sofic_graph.k0_group(self.ctx)
        self.assertEqual(str(k0), "Z")
        self.assertFalse(k0.conditional)
        self.assertEqual(sofic_graph.group_class(self.ctx).kind, 'not_higman_thompson')

    def test_graph_rejected(self):
        with self.assertRaises(NotSofic):
            sofic_graph.build_graph(self.ctx)
        with self.assertRaises(NotSofic):
            sofic_graph.matrices(self.ctx)


class TestIsomorphism(unittest.TestCase):

    def test_verdicts(self):
        golden, full2 = make_context("digits=1,1"), make_context("digits=2")
        sofic, rational = make_context("digits=3,(2)"), make_context("rational=3/2")
        self.assertIs(sofic_graph.is_isomorphic(golden, full2), Verdict.YES)
        self.assertIs(sofic_graph.is_isomorphic(sofic, make_context("digits=3")), Verdict.YES)
        self.assertIs(sofic_graph.is_isomorphic(golden, sofic), Verdict.NO)
        self.assertIs(sofic_graph.is_isomorphic(rational, golden), Verdict.NO)
        self.assertIs(sofic_graph.is_isomorphic(rational, rational), Verdict.UNKNOWN)


def _random_digit_spec(rng):
    """Random finite or eventually periodic digit string (Parry validity checked by make_context)"""
    leading = rng.randint(1, 3)
    preperiod = [leading] + [rng.randint(0, leading) for _ in range(rng.randint(0, 3))]
    text = "digits=" + ",".join(map(str, preperiod))
    if rng.random() < 0.5:
        period = [rng.randint(0, leading - 1) for _ in range(rng.randint(1, 2))]
        text += ",(" + ",".join(map(str, period)) + ")"
    return text


class TestRandomFamily(unittest.TestCase):

    def test_matrix_identities_and_k0_consistency(self):
        rng = random.Random(2024)
        checked = 0
        while checked < 20:
            spec = _random_digit_spec(rng)
            try:
                ctx = make_context(spec)
            except BetaError:
                continue
            checked += 1
            with self.subTest(spec=spec):
                # matrices() raises when B = RS, M = SR or the determinant equalities fail
                matrix_set = sofic_graph.matrices(ctx)
                k0 = sofic_graph.k0_group(ctx)
                self.assertEqual(abs(matrix_set.determinant), k0.order)
                self.assertEqual(sofic_graph.k0_from_matrix(ctx)[1], k0.order)
                self.assertEqual(sofic_graph.group_class(ctx).n, k0.order + 1)


class TestGraphProperties(unittest.TestCase):

    SPECS = ["digits=1,1", "digits=3,(2)", "digits=1,0,1", "digits=2", "digits=3", "digits=2,1", "digits=2,(1)"]

    def test_in_degree_counts_letters(self):
        # M[i][j] counts edges i -> j; letter a enters E_j exactly when t_j + a <= beta
        for spec in self.SPECS:
            ctx = make_context(spec)
            graph = sofic_graph.build_graph(ctx)
            M = sofic_graph.matrices(ctx).M
            values = sofic_graph.projection_system(ctx).values
            for j in graph.vertices:
                labels = [e.label for e in graph.edges if e.target == j]
                expected = sum(1 for a in range(ctx.alphabet_size) if values[j] + a <= ctx.beta)
                with self.subTest(spec=spec, vertex=j):
                    self.assertEqual(sum(row[j - 1] for row in M), expected)
                    self.assertEqual(sorted(set(labels)), sorted(labels))
                    self.assertEqual(len(labels), expected)

    def test_path_counts_through_length_eight(self):
        for spec in self.SPECS:
            ctx = make_context(spec)
            for n in range(9):
                with self.subTest(spec=spec, n=n):
                    self.assertEqual(sofic_graph.path_count(ctx, n), len(enumerate_words(ctx, n)))

    def test_negative_path_length(self):
        with self.assertRaises(OutOfRange):
            sofic_graph.path_count(make_context("digits=1,1"), -1)
