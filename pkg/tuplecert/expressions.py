"""Parser for the cost and size expression grammar of interpretation files.

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := NAT | NAT '/' NAT | atom | 'max' '(' expr (',' expr)* ')' | '(' expr ')'
    atom   := name | name '.' NAT
"""
import re
from typing import Mapping, Optional

import sympy

from tuplecert.constants import ALLOWED_DENOMINATORS
from tuplecert.errors import ExpressionError, NegativeCoefficient
from tuplecert.maxpoly import MaxPoly, atom

TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_']*(?:\.\d+)?)|(?P<op>[-+*/(),\[\]])|(?P<bad>\S))"
)


def tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    for match in TOKEN.finditer(text):
        kind = match.lastgroup
        if kind == "bad":
            raise ExpressionError(f"unexpected character {match.group(kind)!r} in {text.strip()!r}")
        tokens.append((kind, match.group(kind)))
    return tokens


class ExpressionParser:
    """Reads one expression; `atoms` maps every allowed atom name to its sort arity k.

    With `atoms=None` any name is accepted.
    """

    def __init__(self, text: str, atoms: Optional[Mapping[str, int]] = None):
        self.text = text.strip()
        self.tokens = tokenize(text)
        self.pos = 0
        self.atoms = atoms

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos][1] if self.pos < len(self.tokens) else None

    def take(self, expected: Optional[str] = None) -> tuple[str, str]:
        if self.pos >= len(self.tokens):
            raise ExpressionError(f"unexpected end of expression {self.text!r}")
        token = self.tokens[self.pos]
        if expected is not None and token[1] != expected:
            raise ExpressionError(f"expected {expected!r} but found {token[1]!r} in {self.text!r}")
        self.pos += 1
        return token

    def done(self) -> None:
        if self.pos != len(self.tokens):
            raise ExpressionError(f"unexpected {self.tokens[self.pos][1]!r} in {self.text!r}")

    def expr(self) -> MaxPoly:
        value = self.term()
        while self.peek() == "+":
            self.take()
            value = value + self.term()
        if self.peek() == "-":
            raise NegativeCoefficient(f"subtraction is not allowed in {self.text!r}")
        return value

    def term(self) -> MaxPoly:
        value = self.factor()
        while self.peek() == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self) -> MaxPoly:
        kind, token = self.take()
        if kind == "num":
            if self.peek() == "/":
                self.take()
                kind, denominator = self.take()
                if kind != "num" or int(denominator) not in ALLOWED_DENOMINATORS:
                    raise ExpressionError(f"denominator must be one of {ALLOWED_DENOMINATORS} in {self.text!r}")
                return MaxPoly.of(sympy.Rational(int(token), int(denominator)))
            return MaxPoly.of(sympy.Integer(int(token)))
        if kind == "name" and token.partition(".")[0] == "max":
            # reserved: never an atom
            if token != "max" or self.peek() != "(":
                raise ExpressionError(f"max needs a parenthesised argument list in {self.text!r}")
            self.take("(")
            branches = [self.expr()]
            while self.peek() == ",":
                self.take()
                branches.append(self.expr())
            self.take(")")
            return MaxPoly.maximum(*branches)
        if kind == "name":
            return MaxPoly.of(atom(self._check_atom(token)))
        if token == "(":
            value = self.expr()
            self.take(")")
            return value
        if token == "-":
            raise NegativeCoefficient(f"negative values are not allowed in {self.text!r}")
        raise ExpressionError(f"unexpected {token!r} in {self.text!r}")

    def _check_atom(self, name: str) -> str:
        if self.atoms is None:
            return name
        var, _, component = name.partition(".")
        if var not in self.atoms:
            raise ExpressionError(f"unknown variable {var!r} in {self.text!r}")
        k = self.atoms[var]
        if k == 1:
            if component not in ("", "1"):
                raise ExpressionError(f"{var} has a single size component in {self.text!r}")
            return var
        if not component:
            raise ExpressionError(f"{var} has {k} size components; write {var}.1 .. {var}.{k}")
        if not 1 <= int(component) <= k:
            raise ExpressionError(f"component {name} out of range 1..{k}")
        return name

    def tuple_or_expr(self) -> list[MaxPoly]:
        """A parenthesised tuple `(e1, ..., ek)`, or a single expression."""
        start = self.pos
        if self.peek() == "(":
            self.take()
            items = [self.expr()]
            if self.peek() == ",":
                while self.peek() == ",":
                    self.take()
                    items.append(self.expr())
                self.take(")")
                return items
            self.pos = start
        return [self.expr()]

    def bracket_list(self) -> list[MaxPoly]:
        self.take("[")
        items = [self.expr()]
        while self.peek() == ",":
            self.take()
            items.append(self.expr())
        self.take("]")
        return items


def parse_expression(text: str, atoms: Optional[Mapping[str, int]] = None) -> MaxPoly:
    parser = ExpressionParser(text, atoms)
    value = parser.expr()
    parser.done()
    return value


def parse_size(text: str, k: int, atoms: Optional[Mapping[str, int]] = None) -> tuple[MaxPoly, ...]:
    """Size tuple with exactly k components; a bare expression is accepted when k = 1."""
    parser = ExpressionParser(text, atoms)
    items = parser.tuple_or_expr()
    parser.done()
    if len(items) != k:
        raise ExpressionError(f"size {text.strip()!r} has {len(items)} components, expected {k}")
    return tuple(items)
