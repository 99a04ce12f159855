"""Reader for the line-oriented TRS file format.

    SORTS nat list
    SIG 0 : nat
    SIG s : nat => nat
    VARS x y : nat
    RULES
    add x 0 -> x
"""
import logging
import re
from typing import Union

from tuplecert.errors import ParseError, RuleError, TermTypeError
from tuplecert.terms import App, Rule, SimpleType, Symbol, Term, Trs, Var, apply, type_of, variables

logger = logging.getLogger(__name__)

NAME = re.compile(r"0|[A-Za-z][A-Za-z0-9_']*")
IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_']*")
TOKEN = re.compile(r"\s*(?:(?P<paren>[()])|(?P<name>[A-Za-z0-9_']+)|(?P<bad>\S))")


def strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def tokenize(text: str, line_no: int, offset: int = 0) -> list[tuple[str, int]]:
    """Split a term into (token, column) pairs."""
    tokens = []
    for match in TOKEN.finditer(text):
        if match.group("bad"):
            raise ParseError(f"unexpected character {match.group('bad')!r}", line_no, offset + match.start("bad") + 1)
        kind = "paren" if match.group("paren") else "name"
        tokens.append((match.group(kind), offset + match.start(kind) + 1))
    return tokens


class TrsParser:
    def __init__(self):
        self.sorts: list[str] = []
        self.symbols: dict[str, Symbol] = {}
        self.variables: dict[str, Var] = {}
        self.rules: list[Rule] = []

    def parse(self, text: str) -> Trs:
        in_rules = False
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = strip_comment(raw)
            if not line.strip():
                continue
            keyword = line.split()[0]
            if keyword == "RULES":
                if line.split()[1:]:
                    raise ParseError("RULES takes no arguments", line_no, line.index("RULES") + 6)
                in_rules = True
            elif keyword in ("SORTS", "SIG", "VARS") and not in_rules:
                getattr(self, f"_read_{keyword.lower()}")(line, line_no)
            elif in_rules:
                self.rules.append(self._read_rule(line, line_no))
            else:
                raise ParseError(f"unknown declaration {keyword!r}", line_no, line.index(keyword) + 1)
        trs = Trs(tuple(self.sorts), tuple(self.symbols.values()), tuple(self.variables.values()), tuple(self.rules))
        logger.debug(
            "parsed %d rules; defined %s; constructors %s",
            len(trs.rules), sorted(trs.defined), sorted(trs.constructors),
        )
        return trs

    def _read_sorts(self, line: str, line_no: int) -> None:
        body = line.split(None, 1)[1] if len(line.split()) > 1 else ""
        for match in re.finditer(r"\S+", body):
            name = match.group()
            column = line.index(body) + match.start() + 1
            if not IDENTIFIER.fullmatch(name):
                raise ParseError(f"invalid sort name {name!r}", line_no, column)
            if name in self.sorts:
                raise ParseError(f"sort {name} declared twice", line_no, column)
            self.sorts.append(name)

    def _split_declaration(self, line: str, line_no: int) -> tuple[list[str], str, int]:
        if ":" not in line:
            raise ParseError("expected ':'", line_no, len(line.rstrip()) + 1)
        head, ty = line.split(":", 1)
        names = head.split()[1:]
        if not names:
            raise ParseError("missing name before ':'", line_no, line.index(":") + 1)
        return names, ty, line.index(":") + 2

    def _read_sig(self, line: str, line_no: int) -> None:
        names, ty_text, column = self._split_declaration(line, line_no)
        ty = self._read_type(ty_text, line_no, column)
        for name in names:
            if not NAME.fullmatch(name):
                raise ParseError(f"invalid symbol name {name!r}", line_no, line.index(name) + 1)
            if name in self.symbols or name in self.variables:
                raise ParseError(f"name {name} declared twice", line_no, line.index(name) + 1)
            self.symbols[name] = Symbol(name, ty)

    def _read_vars(self, line: str, line_no: int) -> None:
        names, sort_text, column = self._split_declaration(line, line_no)
        sort = sort_text.strip()
        if sort not in self.sorts:
            raise ParseError(f"undeclared sort {sort!r}", line_no, column)
        for name in names:
            if not IDENTIFIER.fullmatch(name):
                raise ParseError(f"invalid variable name {name!r}", line_no, line.index(name) + 1)
            if name in self.symbols or name in self.variables:
                raise ParseError(f"name {name} declared twice", line_no, line.index(name) + 1)
            self.variables[name] = Var(name, sort)

    def _read_type(self, text: str, line_no: int, column: int) -> SimpleType:
        if "(" in text or ")" in text:
            raise ParseError("argument types must be sorts", line_no, column + text.find("(" if "(" in text else ")"))
        parts = [part.strip() for part in text.split("=>")]
        for part in parts:
            if part not in self.sorts:
                raise ParseError(f"undeclared sort {part!r}", line_no, column)
        return SimpleType(tuple(parts[:-1]), parts[-1])

    def _read_rule(self, line: str, line_no: int) -> Rule:
        if line.count("->") != 1:
            raise ParseError("a rule needs exactly one '->'", line_no, 1)
        arrow = line.index("->")
        lhs = self.read_term(line[:arrow], line_no)
        rhs = self.read_term(line[arrow + 2:], line_no, arrow + 2)
        if isinstance(lhs, Var):
            raise RuleError(f"line {line_no}: left-hand side {lhs} is a variable")
        if type_of(lhs) != type_of(rhs):
            raise TermTypeError(f"line {line_no}: {lhs} : {type_of(lhs)} but {rhs} : {type_of(rhs)}")
        bound = set(variables(lhs))
        free = [var.name for var in variables(rhs) if var not in bound]
        if free:
            raise RuleError(f"line {line_no}: variables {', '.join(free)} occur only on the right-hand side")
        return Rule(lhs, rhs)

    def read_term(self, text: str, line_no: int = 1, offset: int = 0) -> Term:
        tokens = tokenize(text, line_no, offset)
        if not tokens:
            raise ParseError("empty term", line_no, offset + 1)
        term, pos = self._term(tokens, 0, line_no)
        if pos != len(tokens):
            raise ParseError(f"unexpected {tokens[pos][0]!r}", line_no, tokens[pos][1])
        return term

    def _term(self, tokens, pos, line_no) -> tuple[Term, int]:
        head, pos = self._atom(tokens, pos, line_no)
        args = []
        while pos < len(tokens) and tokens[pos][0] != ")":
            arg, pos = self._atom(tokens, pos, line_no)
            args.append(arg)
        if not args:
            return head, pos
        try:
            return apply(head, *args), pos
        except TermTypeError as exc:
            raise TermTypeError(f"line {line_no}: {exc}") from exc

    def _atom(self, tokens, pos, line_no) -> tuple[Term, int]:
        if pos >= len(tokens):
            raise ParseError("unexpected end of term", line_no, tokens[-1][1] + 1)
        token, column = tokens[pos]
        if token == "(":
            term, pos = self._term(tokens, pos + 1, line_no)
            if pos >= len(tokens) or tokens[pos][0] != ")":
                raise ParseError("missing ')'", line_no, column)
            return term, pos + 1
        if token == ")":
            raise ParseError("unexpected ')'", line_no, column)
        if token in self.variables:
            return self.variables[token], pos + 1
        if token in self.symbols:
            return App(self.symbols[token]), pos + 1
        raise ParseError(f"undeclared identifier {token!r}", line_no, column)


def parse_trs(text: Union[bytes, str]) -> Trs:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return TrsParser().parse(text)


def parse_term(trs: Trs, text: str) -> Term:
    """Read a term over the signature and variables of an already parsed TRS."""
    parser = TrsParser()
    parser.sorts = list(trs.sorts)
    parser.symbols = dict(trs.signature)
    parser.variables = {var.name: var for var in trs.variables}
    return parser.read_term(text)
