"""A small recursive-descent parser for integer arithmetic expressions."""

DIGITS = "0123456789"


class ParseError(Exception):
    """Raised when the input does not form a valid expression."""


class BasicParser:
    """Parses and evaluates expressions with +, -, *, // and parentheses."""

    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        if self.pos < len(self.text):
            return self.text[self.pos]
        return ""

    def take(self):
        ch = self.peek()
        self.pos += 1
        return ch

    def skip_spaces(self):
        while self.peek() == " ":
            self.pos += 1

    def parse(self):
        value = self.expression()
        self.skip_spaces()
        if self.pos != len(self.text):
            raise ParseError("trailing input at position %d" % self.pos)
        return value

    def expression(self):
        value = self.term()
        while True:
            self.skip_spaces()
            if self.peek() == "+":
                self.take()
                value = value + self.term()
            elif self.peek() == "-":
                self.take()
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            self.skip_spaces()
            if self.peek() == "*":
                self.take()
                value = value * self.factor()
            elif self.peek() == "/":
                self.take()
                value = value // self.factor()
            else:
                return value

    def factor(self):
        self.skip_spaces()
        if self.peek() == "(":
            self.take()
            value = self.expression()
            self.skip_spaces()
            if self.take() != ")":
                raise ParseError("missing closing parenthesis")
            return value
        return self.number()

    def number(self):
        digits = ""
        while self.peek() != "" and self.peek() in DIGITS:
            digits += self.take()
        if not digits:
            raise ParseError("expected a number at position %d" % self.pos)
        return int(digits)


def evaluate(text):
    """Parses text and returns its integer value."""
    return BasicParser(text).parse()
