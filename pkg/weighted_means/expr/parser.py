"""
Tokenizer and Pratt (top-down operator precedence) parser.

Precedence, loosest first: ``+ -``, ``* /``, unary ``-``, ``^`` (right
associative). So ``-2^2`` is ``-(2^2)`` and ``2^-1`` is accepted. There is
no implicit multiplication.
"""

import logging
import math
import re
from dataclasses import dataclass
from typing import AbstractSet, List, Optional

from weighted_means.expr.nodes import (
    CONSTANTS,
    FUNCTIONS,
    BinaryOp,
    Call,
    Constant,
    Expr,
    Number,
    UnaryOp,
    Variable,
)

TOKEN_PATTERN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)

# left binding powers of infix operators
BINDING_POWER = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
UNARY_MINUS_POWER = 30


class ExprSyntaxError(ValueError):
    """
    Malformed expression source.

    Attributes
    ----------
    source : str
        The text being parsed.
    position : int
        Offset of the offending character or token.
    expected : str or None
        What the parser was looking for.
    """

    def __init__(
        self,
        message: str,
        source: str,
        position: int,
        expected: Optional[str] = None,
    ):
        self.reason = message
        self.source = source
        self.position = position
        self.expected = expected
        super().__init__(self._annotated())

    def _annotated(self) -> str:
        detail = self.reason
        if self.expected is not None:
            detail += f" (expected {self.expected})"
        caret = " " * self.position + "^"
        return (
            f"{detail} at position {self.position}\n"
            f"    {self.source}\n    {caret}"
        )


class UnknownIdentifierError(ExprSyntaxError):
    """A variable or function name that is not allowed in this context."""

    pass


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(source: str) -> List[Token]:
    tokens = []
    position = 0
    stripped_end = len(source.rstrip())
    while position < stripped_end:
        match = TOKEN_PATTERN.match(source, position)
        if match is None or match.lastgroup is None:
            offset = position + len(source[position:]) - len(
                source[position:].lstrip()
            )
            raise ExprSyntaxError(
                f"Unexpected character {source[offset]!r}", source, offset
            )
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", stripped_end))
    return tokens


class Parser:
    def __init__(self, source: str, allowed_vars: AbstractSet[str]):
        self.source = source
        self.allowed_vars = frozenset(allowed_vars)
        self._tokens = tokenize(source)
        self._index = 0

    @property
    def token(self) -> Token:
        return self._tokens[self._index]

    def advance(self) -> Token:
        token = self.token
        if token.kind != "end":
            self._index += 1
        return token

    def parse(self) -> Expr:
        if self.token.kind == "end":
            raise ExprSyntaxError(
                "Empty expression", self.source, 0, expected="an expression"
            )
        expr = self.expression(0)
        if self.token.kind != "end":
            raise ExprSyntaxError(
                f"Unexpected {self.token.text!r}",
                self.source,
                self.token.position,
                expected="an operator or the end of input",
            )
        return expr

    def expression(self, right_bp: int) -> Expr:
        left = self.prefix(self.advance())
        while right_bp < self._left_bp(self.token):
            left = self.infix(self.advance(), left)
        return left

    def _left_bp(self, token: Token) -> int:
        if token.kind == "op":
            return BINDING_POWER.get(token.text, 0)
        return 0

    def expect(self, text: str) -> Token:
        token = self.token
        if token.kind != "op" or token.text != text:
            found = token.text or "end of input"
            raise ExprSyntaxError(
                f"Unexpected {found!r}",
                self.source,
                token.position,
                expected=repr(text),
            )
        return self.advance()

    def prefix(self, token: Token) -> Expr:
        if token.kind == "number":
            value = float(token.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(
                    f"Number {token.text} overflows a double",
                    self.source,
                    token.position,
                )
            return Number(value, token.position)
        if token.kind == "ident":
            return self.identifier(token)
        if token.kind == "op" and token.text == "-":
            operand = self.expression(UNARY_MINUS_POWER)
            return UnaryOp("-", operand, token.position)
        if token.kind == "op" and token.text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        found = token.text or "end of input"
        raise ExprSyntaxError(
            f"Unexpected {found!r}",
            self.source,
            token.position,
            expected="a number, name, '-' or '('",
        )

    def infix(self, token: Token, left: Expr) -> Expr:
        if token.text == "^":
            # right associative: bind the right side one step looser
            right = self.expression(BINDING_POWER["^"] - 1)
        else:
            right = self.expression(BINDING_POWER[token.text])
        return BinaryOp(token.text, left, right, token.position)

    def identifier(self, token: Token) -> Expr:
        name = token.text
        is_call = self.token.kind == "op" and self.token.text == "("
        if is_call:
            if name not in FUNCTIONS:
                raise UnknownIdentifierError(
                    f"Unknown function {name!r}",
                    self.source,
                    token.position,
                    expected="one of " + ", ".join(sorted(FUNCTIONS)),
                )
            return self.call(token)
        if name in FUNCTIONS:
            raise ExprSyntaxError(
                f"Function {name!r} used without arguments",
                self.source,
                self.token.position,
                expected="'('",
            )
        if name in CONSTANTS:
            return Constant(name, token.position)
        if name not in self.allowed_vars:
            allowed = ", ".join(sorted(self.allowed_vars)) or "none"
            raise UnknownIdentifierError(
                f"Unknown variable {name!r}",
                self.source,
                token.position,
                expected=f"a variable from {{{allowed}}}",
            )
        return Variable(name, token.position)

    def call(self, name_token: Token) -> Expr:
        self.expect("(")
        args = [self.expression(0)]
        while self.token.kind == "op" and self.token.text == ",":
            self.advance()
            args.append(self.expression(0))
        self.expect(")")
        arity = FUNCTIONS[name_token.text]
        if len(args) != arity:
            raise ExprSyntaxError(
                f"{name_token.text}() takes {arity} argument(s), "
                f"got {len(args)}",
                self.source,
                name_token.position,
            )
        return Call(name_token.text, tuple(args), name_token.position)


def parse(source: str, allowed_vars: AbstractSet[str]) -> Expr:
    """
    Parse an expression.

    Parameters
    ----------
    source : str
        Expression text, e.g. ``"log(r/t)"``.
    allowed_vars : set of str
        Variables permitted in this context, e.g. ``{"t", "r"}``.

    Returns
    -------
    Expr
        The syntax tree.

    Raises
    ------
    ExprSyntaxError
        On malformed input, with the position and the expected token.
    UnknownIdentifierError
        On a variable or function that is not allowed.
    """
    if source is None or not source.strip():
        raise ExprSyntaxError(
            "Empty expression", source or "", 0, expected="an expression"
        )
    logging.debug(f"Parsing expression {source!r}")
    return Parser(source, allowed_vars).parse()
