"""Parsing and evaluation of single-variable math expressions.

Grammar (EBNF):

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" unary ] ;
    atom    = NUMBER | "pi" | "e" | "i" | "x"
            | FUNC "(" expr ")" | "(" expr ")" ;
    FUNC    = "sin" | "cos" | "tan" | "asin" | "acos" | "atan"
            | "exp" | "ln" | "sqrt" | "abs" ;
    NUMBER  = DIGITS [ "." DIGITS ] | "." DIGITS ;

"^" is right-associative and binds tighter than unary minus, so "-x^2"
reads as -(x^2).  Evaluation is over the complex numbers; ln, sqrt,
asin, acos, atan and non-integer powers use principal branches.  A
computation whose intermediate values are all real returns an exactly
zero imaginary part.  Identifiers are case-sensitive and the grammar is
closed: only "x", the three constants and the functions above exist.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from decimal import Decimal

from .errors import EvalError, ParseError

FUNCTIONS = ("sin", "cos", "tan", "asin", "acos", "atan", "exp", "ln", "sqrt", "abs")
CONSTANTS = ("pi", "e", "i")


@dataclass(frozen=True)
class Token:
    kind: str  # number | identifier | operator | paren | comma
    lexeme: str
    position: int


@dataclass(frozen=True)
class Literal:
    value: float


@dataclass(frozen=True)
class Constant:
    name: str  # pi | e | i


@dataclass(frozen=True)
class Variable:
    pass


@dataclass(frozen=True)
class Unary:
    op: str  # neg
    child: "ExprNode"


@dataclass(frozen=True)
class Binary:
    op: str  # add | sub | mul | div | pow
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Call:
    name: str
    child: "ExprNode"


ExprNode = Literal | Constant | Variable | Unary | Binary | Call

_OPERATORS = "+-*/^"
_BINOPS = {"+": "add", "-": "sub", "*": "mul", "/": "div", "^": "pow"}
_OP_SYMBOL = {v: k for k, v in _BINOPS.items()}


def tokenize(text: str) -> list[Token]:
    """Lex *text* into tokens, skipping whitespace.

    Raises ParseError naming the first offending offset for invalid
    characters and malformed number literals.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPERATORS:
            tokens.append(Token("operator", c, i))
            i += 1
        elif c in "()":
            tokens.append(Token("paren", c, i))
            i += 1
        elif c == ",":
            tokens.append(Token("comma", c, i))
            i += 1
        elif c.isdigit() or c == ".":
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if i < n and text[i] == ".":
                dot = i
                i += 1
                if i >= n or not text[i].isdigit():
                    raise ParseError("malformed number literal", dot)
                while i < n and text[i].isdigit():
                    i += 1
            tokens.append(Token("number", text[start:i], start))
        elif c.isalpha() or c == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("identifier", text[start:i], start))
        else:
            raise ParseError(f"invalid character {c!r}", i)
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            end = 0
            if self.tokens:
                last = self.tokens[-1]
                end = last.position + len(last.lexeme)
            raise ParseError("unexpected end of input", end)
        self.pos += 1
        return tok

    def expect(self, kind: str, lexeme: str) -> Token:
        tok = self.next()
        if tok.kind != kind or tok.lexeme != lexeme:
            raise ParseError(f"expected {lexeme!r}, found {tok.lexeme!r}", tok.position)
        return tok

    def expr(self) -> ExprNode:
        node = self.term()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "operator" and tok.lexeme in "+-":
                self.next()
                node = Binary(_BINOPS[tok.lexeme], node, self.term())
            else:
                return node

    def term(self) -> ExprNode:
        node = self.unary()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "operator" and tok.lexeme in "*/":
                self.next()
                node = Binary(_BINOPS[tok.lexeme], node, self.unary())
            else:
                return node

    def unary(self) -> ExprNode:
        tok = self.peek()
        if tok is not None and tok.kind == "operator" and tok.lexeme == "-":
            self.next()
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> ExprNode:
        node = self.atom()
        tok = self.peek()
        if tok is not None and tok.kind == "operator" and tok.lexeme == "^":
            self.next()
            return Binary("pow", node, self.unary())
        return node

    def atom(self) -> ExprNode:
        tok = self.next()
        if tok.kind == "number":
            return Literal(float(tok.lexeme))
        if tok.kind == "paren" and tok.lexeme == "(":
            node = self.expr()
            self.expect("paren", ")")
            return node
        if tok.kind == "identifier":
            if tok.lexeme == "x":
                return Variable()
            if tok.lexeme in CONSTANTS:
                return Constant(tok.lexeme)
            if tok.lexeme in FUNCTIONS:
                self.expect("paren", "(")
                node = self.expr()
                self.expect("paren", ")")
                return Call(tok.lexeme, node)
            raise ParseError(f"unknown identifier {tok.lexeme!r}", tok.position)
        raise ParseError(f"unexpected token {tok.lexeme!r}", tok.position)


def parse(tokens: list[Token]) -> ExprNode:
    """Parse a token stream into a single expression tree.

    Precedence from loosest to tightest: "+-", "*/", unary minus, "^"
    (right-associative); parentheses and calls bind tightest.
    """
    parser = _Parser(tokens)
    node = parser.expr()
    tok = parser.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok.lexeme!r}", tok.position)
    return node


def parse_text(text: str) -> ExprNode:
    """Convenience wrapper: tokenize then parse."""
    return parse(tokenize(text))


def _real_pow(a: float, b: float, x: complex) -> complex:
    try:
        return complex(math.pow(a, b), 0.0)
    except ValueError:
        pass  # negative base with non-integer exponent, or 0 ** negative
    except OverflowError as exc:
        raise EvalError("overflow in power", x) from exc
    try:
        return complex(a, 0.0) ** complex(b, 0.0)
    except ZeroDivisionError as exc:
        raise EvalError("zero raised to a negative power", x) from exc
    except OverflowError as exc:
        raise EvalError("overflow in power", x) from exc


def _call(name: str, v: complex, x: complex) -> complex:
    real = v.imag == 0.0
    a = v.real
    if name == "abs":
        return complex(abs(a) if real else abs(v), 0.0)
    if real:
        # Stay in real arithmetic when the result is real so that purely
        # real computations carry an exactly zero imaginary part.
        try:
            if name == "sin":
                return complex(math.sin(a), 0.0)
            if name == "cos":
                return complex(math.cos(a), 0.0)
            if name == "tan":
                return complex(math.tan(a), 0.0)
            if name == "exp":
                return complex(math.exp(a), 0.0)
            if name == "atan":
                return complex(math.atan(a), 0.0)
            if name == "asin" and -1.0 <= a <= 1.0:
                return complex(math.asin(a), 0.0)
            if name == "acos" and -1.0 <= a <= 1.0:
                return complex(math.acos(a), 0.0)
            if name == "ln" and a > 0.0:
                return complex(math.log(a), 0.0)
            if name == "sqrt" and a >= 0.0:
                return complex(math.sqrt(a), 0.0)
        except OverflowError as exc:
            raise EvalError(f"overflow in {name}", x) from exc
    fn = {
        "sin": cmath.sin, "cos": cmath.cos, "tan": cmath.tan,
        "asin": cmath.asin, "acos": cmath.acos, "atan": cmath.atan,
        "exp": cmath.exp, "ln": cmath.log, "sqrt": cmath.sqrt,
    }[name]
    try:
        return fn(v)
    except ValueError as exc:
        raise EvalError(f"{name} undefined", x) from exc
    except OverflowError as exc:
        raise EvalError(f"overflow in {name}", x) from exc


def evaluate(node: ExprNode, x: complex) -> complex:
    """Evaluate *node* at the point *x* with complex semantics.

    Raises EvalError (carrying x) on division by zero and similar
    domain failures.
    """
    x = complex(x)
    if isinstance(node, Literal):
        return complex(node.value, 0.0)
    if isinstance(node, Constant):
        return {"pi": complex(math.pi), "e": complex(math.e), "i": 1j}[node.name]
    if isinstance(node, Variable):
        return x
    if isinstance(node, Unary):
        return -evaluate(node.child, x)
    if isinstance(node, Call):
        return _call(node.name, evaluate(node.child, x), x)
    if isinstance(node, Binary):
        a = evaluate(node.left, x)
        b = evaluate(node.right, x)
        if node.op == "add":
            return a + b
        if node.op == "sub":
            return a - b
        if node.op == "mul":
            return a * b
        if node.op == "div":
            if b == 0:
                raise EvalError("division by zero", x)
            return a / b
        if node.op == "pow":
            if a.imag == 0.0 and b.imag == 0.0:
                return _real_pow(a.real, b.real, x)
            try:
                return a ** b
            except ZeroDivisionError as exc:
                raise EvalError("zero raised to a negative power", x) from exc
            except OverflowError as exc:
                raise EvalError("overflow in power", x) from exc
    raise TypeError(f"not an expression node: {node!r}")


def _literal_text(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    rep = repr(value)
    if "e" in rep or "E" in rep:
        # The grammar has no exponent notation; expand to plain decimal.
        # Decimal(value) is the exact binary value, so this round-trips.
        rep = format(Decimal(value), "f")
    return rep


def to_text(node: ExprNode) -> str:
    """Render a fully parenthesized form; parse(to_text(n)) equals n."""
    if isinstance(node, Literal):
        return _literal_text(node.value)
    if isinstance(node, Constant):
        return node.name
    if isinstance(node, Variable):
        return "x"
    if isinstance(node, Unary):
        return f"(-{to_text(node.child)})"
    if isinstance(node, Binary):
        return f"({to_text(node.left)}{_OP_SYMBOL[node.op]}{to_text(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({to_text(node.child)})"
    raise TypeError(f"not an expression node: {node!r}")
