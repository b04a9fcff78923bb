import json
import unittest
from fractions import Fraction

from errors import ContextMismatch, ParseError
from models import ShiftClass
from services.catalog_service import context_from_catalog, get_catalog, load_table_file, resolve_beta
from services.number_core import make_context
from services.sofic_graph import build_graph
from services.table_group import table_to_pl, thompson_generators
from utils.serialization import (
    dumps, format_number, graph_to_dot, graph_to_json, number_to_json, pl_to_json, table_from_json, table_to_json
)


class TestNumbers(unittest.TestCase):

    def test_number_json(self):
        golden = make_context("digits=1,1")
        self.assertEqual(number_to_json(golden.beta - 1), {'poly': ['-1', '1'], 'approx': '0.618033988750'})

    def test_format_number(self):
        full2 = make_context("digits=2")
        self.assertEqual(format_number(full2.number(Fraction(3, 4))), "3/4")
        self.assertEqual(format_number(full2.number(2)), "2")
        golden = make_context("digits=1,1")
        self.assertEqual(format_number(golden.beta), "beta ≈ 1.618033988750")


class TestDocuments(unittest.TestCase):

    def test_shift_class(self):
        self.assertEqual(dumps(ShiftClass.sft(2).to_dict()), '{"kind":"sft","k":2}')

    def test_table_json(self):
        swap = thompson_generators(2)['swap']
        text = dumps(table_to_json(swap))
        self.assertEqual(
            text,
            '{"beta":"digits=2","rows":[{"top":"1","bottom":"0","class":1},{"top":"0","bottom":"1","class":1}]}'
        )
        self.assertEqual(table_from_json(json.loads(text)), swap)
        self.assertEqual(dumps(json.loads(text)), text)

    def test_sample_tables(self):
        self.assertEqual(table_from_json(load_table_file('swap')), thompson_generators(2)['swap'])
        self.assertEqual(table_from_json(load_table_file('thompson_a.json')), thompson_generators(2)['A'])
        self.assertEqual(table_from_json(load_table_file('thompson_b')), thompson_generators(2)['B'])

    def test_table_errors(self):
        with self.assertRaises(ParseError):
            table_from_json({'rows': []})
        with self.assertRaises(ParseError):
            table_from_json({'beta': 'digits=2', 'rows': [{'top': '1'}]})
        with self.assertRaises(ContextMismatch):
            table_from_json({'beta': 'digits=2', 'rows': []}, make_context("digits=1,1"))

    def test_pl_json(self):
        f = table_to_pl(thompson_generators(2)['swap'])
        data = pl_to_json(f)
        self.assertEqual(len(data['segments']), 2)
        self.assertEqual(data['segments'][0]['y0'], {'poly': ['1/2'], 'approx': '0.500000000000'})
        self.assertEqual(data['segments'][0]['slope_exp'], 0)

    def test_graph(self):
        graph = build_graph(make_context("digits=1,1"))
        self.assertIn('v1 -> v2 [label="0"];', graph_to_dot(graph))
        self.assertTrue(graph_to_dot(graph).startswith("digraph {"))
        self.assertEqual(graph_to_json(graph)['edges'][0], {'from': 1, 'label': 0, 'to': 1})


class TestCatalog(unittest.TestCase):

    def test_catalog(self):
        self.assertIn('golden', get_catalog())
        self.assertEqual(resolve_beta('@golden'), 'digits=1,1')
        self.assertEqual(resolve_beta('digits=2'), 'digits=2')
        self.assertIs(context_from_catalog('two_plus_sqrt3'), make_context("digits=3,(2)"))
        with self.assertRaises(ParseError):
            resolve_beta('@nowhere')
