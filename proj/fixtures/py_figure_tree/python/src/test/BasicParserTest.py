"""Tests for the arithmetic expression parser."""

import os
import sys
import unittest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "main"))

from BasicParser import BasicParser, ParseError, evaluate


class BasicParserTest(unittest.TestCase):
    def test_addition(self):
        self.assertEqual(evaluate("1 + 2 + 3"), 6)

    def test_precedence(self):
        self.assertEqual(evaluate("2 + 3 * 4"), 14)

    def test_parentheses(self):
        self.assertEqual(evaluate("(2 + 3) * 4"), 20)

    def test_trailing_garbage(self):
        with self.assertRaises(ParseError):
            BasicParser("1 +").parse()


if __name__ == "__main__":
    unittest.main()
