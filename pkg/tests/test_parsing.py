import unittest
from fractions import Fraction

from errors import ParseError
from utils.parsing import format_beta_spec, format_word, parse_beta_spec, parse_number, parse_word


class TestBetaSpec(unittest.TestCase):

    def test_finite_digits(self):
        spec = parse_beta_spec("digits=1,1")
        self.assertEqual(spec.kind, 'digits')
        self.assertEqual(spec.preperiod, (1, 1))
        self.assertEqual(spec.period, ())

    def test_periodic_digits(self):
        spec = parse_beta_spec("digits=3,(2)")
        self.assertEqual(spec.preperiod, (3,))
        self.assertEqual(spec.period, (2,))

    def test_rational(self):
        spec = parse_beta_spec("rational=3/2")
        self.assertEqual(spec.kind, 'rational')
        self.assertEqual(spec.value, Fraction(3, 2))

    def test_malformed(self):
        for text in ["", "digits=", "digits=1,,1", "digits=(1)", "rational=3", "rational=3/0", "beta=2"]:
            with self.subTest(text=text):
                with self.assertRaises(ParseError):
                    parse_beta_spec(text)

    def test_format(self):
        self.assertEqual(format_beta_spec((3,), (2,)), "digits=3,(2)")
        self.assertEqual(format_beta_spec((1, 0, 1)), "digits=1,0,1")
        self.assertEqual(format_beta_spec(value=Fraction(6, 4)), "rational=3/2")


class TestWordsAndNumbers(unittest.TestCase):

    def test_words(self):
        self.assertEqual(parse_word("1,0,1"), (1, 0, 1))
        self.assertEqual(parse_word(""), ())
        self.assertEqual(format_word((1, 0)), "1,0")
        with self.assertRaises(ParseError):
            parse_word("1,a")

    def test_numbers(self):
        self.assertEqual(parse_number("1/4"), Fraction(1, 4))
        self.assertEqual(parse_number("0.25"), Fraction(1, 4))
        self.assertEqual(parse_number("2"), Fraction(2))
        with self.assertRaises(ParseError):
            parse_number("x")
        with self.assertRaises(ParseError):
            parse_number("1/0")
