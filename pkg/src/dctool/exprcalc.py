"""Parser and evaluator for the polynomial calculator expressions.

Grammar (whitespace insignificant):

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' nat)?
    atom     := rational | ident | opcall | '(' expr ')'
    opcall   := ('d' | 'int' | 'K' | 'Kinv' | 'J' | 'Jinv') '(' expr ')'
              | 's' '(' expr ',' ident ')'
    rational := nat ('/' nat)?

Variables are the canonical names x, y, z, w; operator names are reserved.
'-' evaluates only over a semiring with negatives.  `s(e, x)` integrates the
coordinate bundle that has `e` in the slot of variable x and zero elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import polyform as pf
from .polyform import Polynomial, PolyBundle
from .rig import Rig

OP_NAMES = ("d", "int", "K", "Kinv", "J", "Jinv", "s")
VAR_NAMES = pf.DEFAULT_NAMES


class ParseError(Exception):
    """Malformed expression; carries the character position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class NegativeNotSupported(Exception):
    """'-' used while evaluating over a semiring without negatives."""


class EvalError(Exception):
    """Structurally valid expression that has no value (for example, a
    coordinate bundle fed into another operator)."""


# -- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    kind: str  # const | var | add | sub | mul | pow | op | s
    payload: tuple


def _tokenize(source: str):
    tokens = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(("nat", int(source[i:j]), i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and source[j].isalnum():
                j += 1
            tokens.append(("name", source[i:j], i))
            i = j
            continue
        if ch in "+-*/^(),":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input starting at {tok[1]!r}", tok[2])
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            node = Node("add" if op == "+" else "sub", (node, rhs))
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] == "*":
            self.advance()
            node = Node("mul", (node, self.factor()))
        return node

    def factor(self) -> Node:
        node = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            tok = self.expect("nat")
            node = Node("pow", (node, tok[1]))
        return node

    def atom(self) -> Node:
        tok = self.advance()
        if tok[0] == "nat":
            num = tok[1]
            if self.peek()[0] == "/":
                self.advance()
                den_tok = self.expect("nat")
                if den_tok[1] == 0:
                    raise ParseError("zero denominator", den_tok[2])
                return Node("const", (Fraction(num, den_tok[1]),))
            return Node("const", (Fraction(num),))
        if tok[0] == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok[0] == "name":
            name = tok[1]
            if name in OP_NAMES:
                self.expect("(")
                arg = self.expr()
                if name == "s":
                    self.expect(",")
                    var_tok = self.expect("name")
                    if var_tok[1] not in VAR_NAMES:
                        raise ParseError(f"unknown variable {var_tok[1]!r}", var_tok[2])
                    self.expect(")")
                    return Node("s", (arg, var_tok[1]))
                self.expect(")")
                return Node("op", (name, arg))
            if name in VAR_NAMES:
                return Node("var", (name,))
            raise ParseError(f"unknown identifier {name!r}", tok[2])
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2])


def parse_expr(source: str) -> Node:
    """Parse a calculator expression into its AST."""
    return _Parser(source).parse()


# -- evaluation -------------------------------------------------------------


def _collect_vars(node: Node, seen: set):
    kind = node.kind
    if kind == "var":
        seen.add(node.payload[0])
    elif kind in ("add", "sub", "mul"):
        _collect_vars(node.payload[0], seen)
        _collect_vars(node.payload[1], seen)
    elif kind == "pow":
        _collect_vars(node.payload[0], seen)
    elif kind == "op":
        _collect_vars(node.payload[1], seen)
    elif kind == "s":
        _collect_vars(node.payload[0], seen)
        seen.add(node.payload[1])


def infer_arity(node: Node) -> int:
    """Smallest canonical variable prefix covering the expression; at least 1."""
    seen: set = set()
    _collect_vars(node, seen)
    indices = [VAR_NAMES.index(v) for v in seen]
    return max(indices, default=0) + 1


def eval_expr(ast: Node, semiring: Rig, arity: int | None = None):
    """Evaluate to a Polynomial, or a PolyBundle when the outermost operator is
    `d` on a multivariate expression."""
    if arity is None:
        arity = infer_arity(ast)
    seen: set = set()
    _collect_vars(ast, seen)
    for v in seen:
        if VAR_NAMES.index(v) >= arity:
            raise EvalError(f"variable {v!r} does not fit in {arity} variable(s)")

    def as_poly(node: Node) -> Polynomial:
        value = evaluate(node)
        if isinstance(value, PolyBundle):
            raise EvalError("a coordinate bundle cannot feed another operator")
        return value

    def evaluate(node: Node):
        kind = node.kind
        if kind == "const":
            (q,) = node.payload
            if semiring.name == "boolean":
                c = semiring.one if q != 0 else semiring.zero
            else:
                c = q
            return Polynomial.const(semiring, arity, c)
        if kind == "var":
            return Polynomial.variable(semiring, arity, VAR_NAMES.index(node.payload[0]))
        if kind == "add":
            return as_poly(node.payload[0]) + as_poly(node.payload[1])
        if kind == "sub":
            if not semiring.has_negatives:
                raise NegativeNotSupported(
                    f"'-' is not available over {semiring.name}; use the rational field"
                )
            lhs = as_poly(node.payload[0])
            rhs = as_poly(node.payload[1])
            return lhs + rhs.scale(semiring.neg(semiring.one))
        if kind == "mul":
            return as_poly(node.payload[0]) * as_poly(node.payload[1])
        if kind == "pow":
            return as_poly(node.payload[0]) ** node.payload[1]
        if kind == "s":
            arg, var = node.payload
            p = as_poly(arg)
            i = VAR_NAMES.index(var)
            comps = [Polynomial.zero(semiring, arity) for _ in range(arity)]
            comps[i] = p
            return pf.s_op(PolyBundle(tuple(comps)))
        if kind == "op":
            name, arg_node = node.payload
            p = as_poly(arg_node)
            if name == "d":
                if arity == 1:
                    return pf.grad1(p)
                return pf.grad(p)
            if name == "int":
                if arity != 1:
                    raise EvalError("int needs a one-variable expression")
                return pf.integrate1(p)
            if name == "K":
                return pf.K_op(p)
            if name == "Kinv":
                return pf.K_inv_op(p)
            if name == "J":
                return pf.J_op(p)
            if name == "Jinv":
                return pf.J_inv_op(p)
        raise EvalError(f"unknown node kind {kind!r}")

    return evaluate(ast)
