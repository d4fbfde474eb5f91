"""Quantifier-free term and formula language over the asymptotic couple.

Terms:    variables, element literals (``0``, ``inf``, ``q*e<k>``), ``+``,
          binary and unary ``-``, division by a positive integer ``t / n``
          (one operator per n, exactness preserved), and the unary maps
          ``psi(t)``, ``s(t)``, ``p(t)``, ``int(t)``.
Formulas: ``t1 = t2``, ``t1 < t2``, ``!``, ``&``, ``|`` with precedence
          ``!`` > ``&`` > ``|``; parentheses group both levels.

``int`` is a flagged extension: accepted by default, rejected when the
parser runs in strict mode.  Quantifier tokens are recognized only to be
rejected with a pointed message; the language is quantifier-free.

Grammar (terms):

    term     := product (('+' | '-') product)*        left assoc
    product  := unary ('/' nat)*                      left assoc
    unary    := '-' unary | atom
    atom     := literal | var | func '(' term ')' | '(' term ')'
    literal  := '0' | 'inf' | (rational '*')? 'e' digits

Binary ``a - b`` is sugar for ``a + (-b)``: it parses to Add(a, Neg(b))
and the formatter prints that shape back as subtraction.  The formatter
and parser are exact inverses on parser-canonical trees (the parser only
ever produces literals that are 0, inf, or a single positive term;
programmatic multi-term literals format value-correctly but reparse as
sums).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple, Union

from . import gamma
from .gamma import INF, ZERO, ExtendedElement, GammaElement, Infinity

FUNCTIONS = ("psi", "s", "p", "int")
_QUANTIFIERS = ("forall", "exists")


# --- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    value: ExtendedElement


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: "TermNode"
    right: "TermNode"


@dataclass(frozen=True)
class Neg:
    operand: "TermNode"


@dataclass(frozen=True)
class Div:
    operand: "TermNode"
    divisor: int

    def __post_init__(self) -> None:
        if not isinstance(self.divisor, int) or self.divisor < 1:
            raise ValueError(f"divisor must be a positive integer, got {self.divisor!r}")


@dataclass(frozen=True)
class Apply:
    func: str
    operand: "TermNode"

    def __post_init__(self) -> None:
        if self.func not in FUNCTIONS:
            raise ValueError(f"unknown function {self.func!r}")


TermNode = Union[Literal, Var, Add, Neg, Div, Apply]


@dataclass(frozen=True)
class Eq:
    left: TermNode
    right: TermNode


@dataclass(frozen=True)
class Lt:
    left: TermNode
    right: TermNode


@dataclass(frozen=True)
class Not:
    operand: "FormulaNode"


@dataclass(frozen=True)
class And:
    left: "FormulaNode"
    right: "FormulaNode"


@dataclass(frozen=True)
class Or:
    left: "FormulaNode"
    right: "FormulaNode"


FormulaNode = Union[Eq, Lt, Not, And, Or]


class ParseError(ValueError):
    """Syntax error with character position and the tokens expected there."""

    def __init__(self, message: str, position: int, expected: FrozenSet[str] = frozenset()):
        detail = f"{message} at position {position}"
        if expected:
            detail += " (expected " + ", ".join(sorted(expected)) + ")"
        super().__init__(detail)
        self.position = position
        self.expected = expected


class EvalError(ValueError):
    """Evaluation failure, e.g. an unbound variable."""


# --- lexer ------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[()+\-*/!&|=<])
    """,
    re.VERBOSE,
)

_BASIS_RE = re.compile(r"^e\d+$")


@dataclass(frozen=True)
class _Token:
    kind: str  # number basis var func inf quant ( ) + - * / ! & | = < eof
    text: str
    pos: int
    value: int = 0


def _lex(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup == "ws":
            pos = m.end()
            continue
        lexeme = m.group()
        if m.lastgroup == "number":
            tokens.append(_Token("number", lexeme, pos, int(lexeme)))
        elif m.lastgroup == "name":
            if _BASIS_RE.match(lexeme):
                tokens.append(_Token("basis", lexeme, pos, int(lexeme[1:])))
            elif lexeme == "inf":
                tokens.append(_Token("inf", lexeme, pos))
            elif lexeme in FUNCTIONS:
                tokens.append(_Token("func", lexeme, pos))
            elif lexeme in _QUANTIFIERS:
                tokens.append(_Token("quant", lexeme, pos))
            else:
                tokens.append(_Token("var", lexeme, pos))
        else:
            tokens.append(_Token(lexeme, lexeme, pos))
        pos = m.end()
    tokens.append(_Token("eof", "", n))
    return tokens


# --- parser -----------------------------------------------------------------

_TERM_START = frozenset({"'0'", "'inf'", "'e<k>'", "coefficient", "variable", "function", "'('", "'-'"})


class _Parser:
    def __init__(self, tokens: List[_Token], strict_llog: bool):
        self.tokens = tokens
        self.i = 0
        self.strict_llog = strict_llog

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect(self, kind: str, expected: FrozenSet[str]) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(tok, expected)
        return self.take()

    def fail(self, tok: _Token, expected: FrozenSet[str]) -> None:
        if tok.kind == "quant":
            raise ParseError(
                f"quantifier {tok.text!r} is not supported: only the quantifier-free "
                "fragment (=, <, !, &, |) is implemented",
                tok.pos,
            )
        what = "end of input" if tok.kind == "eof" else f"{tok.text!r}"
        raise ParseError(f"unexpected {what}", tok.pos, expected)

    # terms

    def term(self) -> TermNode:
        node = self.product()
        while self.peek().kind in ("+", "-"):
            op = self.take()
            rhs = self.product()
            node = Add(node, Neg(rhs)) if op.kind == "-" else Add(node, rhs)
        return node

    def product(self) -> TermNode:
        node = self.unary()
        while self.peek().kind == "/":
            self.take()
            tok = self.expect("number", frozenset({"positive integer divisor"}))
            if tok.value < 1:
                raise ParseError("divisor must be a positive integer", tok.pos)
            node = Div(node, tok.value)
        return node

    def unary(self) -> TermNode:
        if self.peek().kind == "-":
            self.take()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> TermNode:
        tok = self.peek()
        if tok.kind == "number":
            return self.literal_from_number()
        if tok.kind == "basis":
            self.take()
            return Literal(gamma.unit(tok.value))
        if tok.kind == "inf":
            self.take()
            return Literal(INF)
        if tok.kind == "var":
            self.take()
            return Var(tok.text)
        if tok.kind == "func":
            if tok.text == "int" and self.strict_llog:
                raise ParseError(
                    "'int' is a flagged extension and is rejected in strict mode", tok.pos
                )
            self.take()
            self.expect("(", frozenset({"'('"}))
            inner = self.term()
            self.expect(")", frozenset({"')'"}))
            return Apply(tok.text, inner)
        if tok.kind == "(":
            self.take()
            inner = self.term()
            self.expect(")", frozenset({"')'"}))
            return inner
        self.fail(tok, _TERM_START)
        raise AssertionError("unreachable")

    def literal_from_number(self) -> TermNode:
        tok = self.take()
        num = tok.value
        den = 1
        if self.peek().kind == "/" and self.peek(1).kind == "number" and self.peek(2).kind == "*":
            self.take()
            den_tok = self.take()
            den = den_tok.value
            if den == 0:
                raise ParseError("zero denominator in coefficient", den_tok.pos)
        if self.peek().kind == "*":
            self.take()
            basis = self.expect("basis", frozenset({"'e<k>'"}))
            return Literal(gamma.scale(gamma.unit(basis.value), Fraction(num, den)))
        if num == 0:
            return Literal(ZERO)
        self.fail(self.peek(), frozenset({"'*'"}))
        raise AssertionError("unreachable")

    # formulas

    def formula(self) -> FormulaNode:
        node = self.conjunction()
        while self.peek().kind == "|":
            self.take()
            node = Or(node, self.conjunction())
        return node

    def conjunction(self) -> FormulaNode:
        node = self.negation()
        while self.peek().kind == "&":
            self.take()
            node = And(node, self.negation())
        return node

    def negation(self) -> FormulaNode:
        if self.peek().kind == "!":
            self.take()
            return Not(self.negation())
        return self.formula_atom()

    def formula_atom(self) -> FormulaNode:
        if self.peek().kind == "(":
            # Either a grouped formula or a parenthesized term starting a
            # comparison: try the formula reading first, then backtrack.
            save = self.i
            self.take()
            try:
                inner = self.formula()
                self.expect(")", frozenset({"')'"}))
                return inner
            except ParseError:
                self.i = save
        return self.comparison()

    def comparison(self) -> FormulaNode:
        left = self.term()
        tok = self.peek()
        if tok.kind == "=":
            self.take()
            return Eq(left, self.term())
        if tok.kind == "<":
            self.take()
            return Lt(left, self.term())
        self.fail(tok, frozenset({"'='", "'<'"}))
        raise AssertionError("unreachable")

    def done(self) -> None:
        tok = self.peek()
        if tok.kind != "eof":
            self.fail(tok, frozenset({"end of input"}))


def parse_term(text: str, strict_llog: bool = False) -> TermNode:
    parser = _Parser(_lex(text), strict_llog)
    node = parser.term()
    parser.done()
    return node


def parse_formula(text: str, strict_llog: bool = False) -> FormulaNode:
    parser = _Parser(_lex(text), strict_llog)
    node = parser.formula()
    parser.done()
    return node


def parse_any(text: str, strict_llog: bool = False) -> Union[TermNode, FormulaNode]:
    """Parse a formula if the text contains one, otherwise a term.

    On failure, report whichever error got further into the input.
    """
    tokens = _lex(text)
    try:
        parser = _Parser(tokens, strict_llog)
        node: Union[TermNode, FormulaNode] = parser.formula()
        parser.done()
        return node
    except ParseError as formula_err:
        try:
            parser = _Parser(tokens, strict_llog)
            node = parser.term()
            parser.done()
            return node
        except ParseError as term_err:
            raise term_err if term_err.position > formula_err.position else formula_err


# --- evaluation ---------------------------------------------------------------

_FUNC_EVAL = {
    "psi": gamma.psi,
    "s": gamma.successor,
    "p": gamma.predecessor,
    "int": gamma.integrate,
}

Env = Mapping[str, ExtendedElement]


def eval_term(node: TermNode, env: Optional[Env] = None) -> ExtendedElement:
    env = env or {}
    if isinstance(node, Literal):
        return node.value
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise EvalError(f"unbound variable {node.name!r}") from None
    if isinstance(node, Add):
        return gamma.add(eval_term(node.left, env), eval_term(node.right, env))
    if isinstance(node, Neg):
        return gamma.negate(eval_term(node.operand, env))
    if isinstance(node, Div):
        return gamma.divide_by(eval_term(node.operand, env), node.divisor)
    if isinstance(node, Apply):
        return _FUNC_EVAL[node.func](eval_term(node.operand, env))
    raise TypeError(f"not a term node: {node!r}")


def eval_formula(node: FormulaNode, env: Optional[Env] = None) -> bool:
    env = env or {}
    if isinstance(node, Eq):
        return gamma.compare(eval_term(node.left, env), eval_term(node.right, env)) == gamma.EQ
    if isinstance(node, Lt):
        return gamma.compare(eval_term(node.left, env), eval_term(node.right, env)) == gamma.LT
    if isinstance(node, Not):
        return not eval_formula(node.operand, env)
    if isinstance(node, And):
        return eval_formula(node.left, env) and eval_formula(node.right, env)
    if isinstance(node, Or):
        return eval_formula(node.left, env) or eval_formula(node.right, env)
    raise TypeError(f"not a formula node: {node!r}")


def term_variables(node: TermNode) -> FrozenSet[str]:
    if isinstance(node, Var):
        return frozenset({node.name})
    if isinstance(node, Literal):
        return frozenset()
    if isinstance(node, (Neg, Div, Apply)):
        return term_variables(node.operand)
    return term_variables(node.left) | term_variables(node.right)


def formula_variables(node: FormulaNode) -> FrozenSet[str]:
    if isinstance(node, (Eq, Lt)):
        return term_variables(node.left) | term_variables(node.right)
    if isinstance(node, Not):
        return formula_variables(node.operand)
    return formula_variables(node.left) | formula_variables(node.right)


def uses_integral(node: Union[TermNode, FormulaNode]) -> bool:
    """True if any subterm applies the flagged ``int`` extension."""
    if isinstance(node, Apply):
        return node.func == "int" or uses_integral(node.operand)
    if isinstance(node, (Neg, Div, Not)):
        return uses_integral(node.operand)
    if isinstance(node, (Add, Eq, Lt, And, Or)):
        return uses_integral(node.left) or uses_integral(node.right)
    return False


# --- formatting ---------------------------------------------------------------
#
# Term precedence: Add = 1, Neg = Div = 3, atoms = 4.  Multi-term and
# negative literals are not parser atoms; they format at the precedence
# of the tree that would reparse to their value (sum, resp. negation).

_P_SUM, _P_OPERAND, _P_PRODUCT, _P_ATOM = 1, 2, 3, 4


def _term_prec(node: TermNode) -> int:
    if isinstance(node, Add):
        return _P_SUM
    if isinstance(node, (Neg, Div)):
        return _P_PRODUCT
    if isinstance(node, Literal) and isinstance(node.value, GammaElement):
        coords = node.value.coords
        if len(coords) > 1:
            return _P_SUM
        if coords and coords[0][1] < 0:
            return _P_PRODUCT
    return _P_ATOM


def _fmt_term(node: TermNode, ctx: int) -> str:
    if isinstance(node, Literal):
        body = gamma.format_element(node.value)
    elif isinstance(node, Var):
        body = node.name
    elif isinstance(node, Apply):
        body = f"{node.func}({_fmt_term(node.operand, _P_SUM)})"
    elif isinstance(node, Neg):
        body = f"-{_fmt_term(node.operand, _P_ATOM)}"
    elif isinstance(node, Div):
        body = f"{_fmt_term(node.operand, _P_PRODUCT)} / {node.divisor}"
    elif isinstance(node, Add):
        left = _fmt_term(node.left, _P_SUM)
        if isinstance(node.right, Neg):
            body = f"{left} - {_fmt_term(node.right.operand, _P_OPERAND)}"
        else:
            body = f"{left} + {_fmt_term(node.right, _P_OPERAND)}"
    else:
        raise TypeError(f"not a term node: {node!r}")
    if _term_prec(node) < ctx:
        return f"({body})"
    return body


def format_term(node: TermNode) -> str:
    return _fmt_term(node, _P_SUM)


_F_OR, _F_AND, _F_NOT, _F_CMP = 1, 2, 3, 4

_FORMULA_PREC = {Or: _F_OR, And: _F_AND, Not: _F_NOT, Eq: _F_CMP, Lt: _F_CMP}


def _fmt_formula(node: FormulaNode, ctx: int) -> str:
    if isinstance(node, Eq):
        body = f"{format_term(node.left)} = {format_term(node.right)}"
    elif isinstance(node, Lt):
        body = f"{format_term(node.left)} < {format_term(node.right)}"
    elif isinstance(node, Not):
        body = f"!{_fmt_formula(node.operand, _F_NOT)}"
    elif isinstance(node, And):
        body = f"{_fmt_formula(node.left, _F_AND)} & {_fmt_formula(node.right, _F_NOT)}"
    elif isinstance(node, Or):
        body = f"{_fmt_formula(node.left, _F_OR)} | {_fmt_formula(node.right, _F_AND)}"
    else:
        raise TypeError(f"not a formula node: {node!r}")
    if _FORMULA_PREC[type(node)] < ctx:
        return f"({body})"
    return body


def format_formula(node: FormulaNode) -> str:
    return _fmt_formula(node, _F_OR)


def format_any(node: Union[TermNode, FormulaNode]) -> str:
    if isinstance(node, (Eq, Lt, Not, And, Or)):
        return format_formula(node)
    return format_term(node)


# --- JSON dump ----------------------------------------------------------------


def term_to_json(node: TermNode) -> Dict[str, object]:
    if isinstance(node, Literal):
        return {"node": "literal", "value": gamma.format_element(node.value)}
    if isinstance(node, Var):
        return {"node": "var", "name": node.name}
    if isinstance(node, Add):
        return {"node": "add", "left": term_to_json(node.left), "right": term_to_json(node.right)}
    if isinstance(node, Neg):
        return {"node": "negate", "operand": term_to_json(node.operand)}
    if isinstance(node, Div):
        return {"node": "divide", "operand": term_to_json(node.operand), "divisor": node.divisor}
    if isinstance(node, Apply):
        return {"node": "apply", "func": node.func, "operand": term_to_json(node.operand)}
    raise TypeError(f"not a term node: {node!r}")


def formula_to_json(node: FormulaNode) -> Dict[str, object]:
    if isinstance(node, Eq):
        return {"node": "eq", "left": term_to_json(node.left), "right": term_to_json(node.right)}
    if isinstance(node, Lt):
        return {"node": "lt", "left": term_to_json(node.left), "right": term_to_json(node.right)}
    if isinstance(node, Not):
        return {"node": "not", "operand": formula_to_json(node.operand)}
    if isinstance(node, And):
        return {
            "node": "and",
            "left": formula_to_json(node.left),
            "right": formula_to_json(node.right),
        }
    if isinstance(node, Or):
        return {
            "node": "or",
            "left": formula_to_json(node.left),
            "right": formula_to_json(node.right),
        }
    raise TypeError(f"not a formula node: {node!r}")


def ast_json(node: Union[TermNode, FormulaNode]) -> str:
    if isinstance(node, (Eq, Lt, Not, And, Or)):
        payload = formula_to_json(node)
    else:
        payload = term_to_json(node)
    return json.dumps(payload, indent=2)
