"""A minimal arithmetic expression language for scalar maps, modulars and
order predicates.

Grammar (standard precedence, left-associative binary operators, ^ binds
tightest and takes a nonnegative integer literal exponent):

    expr      := sum
    sum       := product (('+' | '-') product)*
    product   := unary (('*' | '/') unary)*
    unary     := '-' unary | power
    power     := atom ('^' INTEGER)?
    atom      := NUMBER | VARIABLE | '(' expr ')' | piecewise
    piecewise := 'piecewise' '(' branch (',' branch)* ')'
    branch    := comparison '->' expr | 'else' '->' expr
    comparison:= sum ('<=' | '<' | '=') sum

Numbers are integers or decimals and are kept exact until evaluation, where
the backend decides the concrete type.  Comparisons appear only in piecewise
guards and in predicates; there are no transcendental functions on purpose,
so every accepted expression is auditable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .backend import Backend, Number
from .errors import ExprError

_TOKEN_RE = re.compile(r"""
    (?P<num>\d+(\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>->|<=|<|=|[+\-*/^(),])
  | (?P<ws>\s+)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # num | ident | op | end
    text: str
    pos: int


def tokenize(src: str) -> list:
    toks = []
    i = 0
    while i < len(src):
        m = _TOKEN_RE.match(src, i)
        if m is None:
            raise ExprError(f"unexpected character {src[i]!r}", i)
        if m.lastgroup != "ws":
            toks.append(Token("op" if m.lastgroup == "op" else m.lastgroup,
                              m.group(), i))
        i = m.end()
    toks.append(Token("end", "", len(src)))
    return toks


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: object
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: object
    right: object
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Cmp:
    op: str  # <= < =
    left: object
    right: object
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Piecewise:
    branches: tuple  # of (guard Cmp | None, expr)
    pos: int = field(default=-1, compare=False)


class _Parser:
    def __init__(self, src: str, variables):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0
        self.variables = tuple(variables)

    def peek(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, text: str) -> Token:
        t = self.peek()
        if t.kind != "op" or t.text != text:
            raise ExprError(f"expected {text!r}", t.pos)
        return self.advance()

    def at_op(self, *texts) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text in texts

    # grammar -------------------------------------------------------------

    def sum(self):
        node = self.product()
        while self.at_op("+", "-"):
            t = self.advance()
            node = BinOp(t.text, node, self.product(), pos=t.pos)
        return node

    def product(self):
        node = self.unary()
        while self.at_op("*", "/"):
            t = self.advance()
            node = BinOp(t.text, node, self.unary(), pos=t.pos)
        return node

    def unary(self):
        if self.at_op("-"):
            t = self.advance()
            return Neg(self.unary(), pos=t.pos)
        return self.power()

    def power(self):
        node = self.atom()
        if self.at_op("^"):
            t = self.advance()
            e = self.peek()
            if e.kind != "num" or "." in e.text:
                raise ExprError("exponent must be a nonnegative integer literal",
                                e.pos)
            self.advance()
            node = Pow(node, int(e.text), pos=t.pos)
        return node

    def atom(self):
        t = self.peek()
        if t.kind == "num":
            self.advance()
            return Num(Fraction(t.text), pos=t.pos)
        if t.kind == "ident":
            if t.text == "piecewise":
                return self.piecewise()
            if t.text in self.variables:
                self.advance()
                return Var(t.text, pos=t.pos)
            raise ExprError(f"unknown identifier {t.text!r}", t.pos)
        if self.at_op("("):
            self.advance()
            node = self.sum()
            self.expect_op(")")
            return node
        raise ExprError("expected a value", t.pos)

    def comparison(self):
        left = self.sum()
        t = self.peek()
        if t.kind != "op" or t.text not in ("<=", "<", "="):
            raise ExprError("expected a comparison operator (<=, < or =)", t.pos)
        self.advance()
        return Cmp(t.text, left, self.sum(), pos=t.pos)

    def piecewise(self):
        start = self.advance()  # 'piecewise'
        self.expect_op("(")
        branches = []
        saw_else = False
        while True:
            t = self.peek()
            if t.kind == "ident" and t.text == "else":
                self.advance()
                guard = None
                saw_else = True
            else:
                if saw_else:
                    raise ExprError("the else branch must come last", t.pos)
                guard = self.comparison()
            self.expect_op("->")
            branches.append((guard, self.sum()))
            if self.at_op(","):
                if saw_else:
                    t = self.peek()
                    raise ExprError("the else branch must come last", t.pos)
                self.advance()
                continue
            break
        self.expect_op(")")
        if not branches:
            raise ExprError("piecewise needs at least one branch", start.pos)
        return Piecewise(tuple(branches), pos=start.pos)

    def finish(self, node):
        t = self.peek()
        if t.kind != "end":
            raise ExprError(f"unexpected trailing input {t.text!r}", t.pos)
        return node


def parse_expression(src: str, variables=("x",)):
    """Parse an arithmetic expression (piecewise allowed, comparisons only
    inside guards) over the given variable names."""
    p = _Parser(src, variables)
    return p.finish(p.sum())


def parse_predicate(src: str, variables=("x", "y")) -> Cmp:
    """Parse a single comparison between two arithmetic expressions."""
    p = _Parser(src, variables)
    return p.finish(p.comparison())


def eval_expr(node, env: dict, backend: Backend) -> Number:
    """Evaluate an AST over scalar variable bindings; comparisons are exact."""
    if isinstance(node, Num):
        return backend.number(node.value)
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -eval_expr(node.operand, env, backend)
    if isinstance(node, BinOp):
        left = eval_expr(node.left, env, backend)
        right = eval_expr(node.right, env, backend)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if right == 0:
            raise ExprError("division by zero", node.pos)
        return left / right
    if isinstance(node, Pow):
        return eval_expr(node.base, env, backend) ** node.exponent
    if isinstance(node, Cmp):
        left = eval_expr(node.left, env, backend)
        right = eval_expr(node.right, env, backend)
        if node.op == "<=":
            return left <= right
        if node.op == "<":
            return left < right
        return left == right
    if isinstance(node, Piecewise):
        for guard, expr in node.branches:
            if guard is None or eval_expr(guard, env, backend):
                return eval_expr(expr, env, backend)
        raise ExprError("no piecewise branch matched", node.pos)
    raise TypeError(f"not an expression node: {node!r}")
