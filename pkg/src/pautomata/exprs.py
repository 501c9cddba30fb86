"""Parser for the shared ASCII expression grammar.

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := rational | ident ('^' positive-integer)? | '(' expr ')' | '-' factor
    rational := integer ('/' positive-integer)?
    ident    := [A-Za-z_][A-Za-z0-9_]*

'*' is mandatory (juxtaposition is not multiplication) and '^' applies to
identifiers only.  The same grammar feeds two targets: `parse_poly` builds a
polynomial (constants allowed anywhere) and `parse_term` builds a free series
term, where a rational factor becomes a scalar multiple and a standalone
nonzero constant is rejected.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ExpressionError
from .polyalg import Poly
from .terms import Prod, Scale, Sum, Term, Var, ZERO

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789")
_DIGITS = set("0123456789")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch in _DIGITS:
            start = i
            while i < n and text[i] in _DIGITS:
                i += 1
            num = int(text[start:i])
            if i < n and text[i] == "/":
                j = i + 1
                while j < n and text[j] in _DIGITS:
                    j += 1
                if j == i + 1:
                    raise ExpressionError("expected digits after '/'", i + 1)
                den = int(text[i + 1 : j])
                if den == 0:
                    raise ExpressionError("denominator must be positive", i + 1)
                tokens.append(("num", Fraction(num, den), start))
                i = j
            else:
                tokens.append(("num", Fraction(num), start))
            continue
        if ch in _IDENT_START:
            start = i
            while i < n and text[i] in _IDENT_CONT:
                i += 1
            tokens.append(("ident", text[start:i], start))
            continue
        raise ExpressionError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    """Recursive descent over the grammar; subclasses supply the algebra."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self):
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected {kind!r}", pos)
        return self.finalize(value)

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op, _, _ = self.advance()
            rhs = self.term()
            value = self.add(value, rhs) if op == "+" else self.add(value, self.neg(rhs))
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] == "*":
            self.advance()
            value = self.mul(value, self.factor())
        return value

    def factor(self):
        kind, payload, pos = self.advance()
        if kind == "num":
            return self.const(payload)
        if kind == "ident":
            value = self.var(payload)
            if self.peek()[0] == "^":
                self.advance()
                ekind, exp, epos = self.advance()
                if ekind != "num" or exp.denominator != 1 or exp <= 0:
                    raise ExpressionError("'^' needs a positive integer", epos)
                value = self.pow(value, int(exp))
            return value
        if kind == "(":
            value = self.expr()
            ckind, _, cpos = self.advance()
            if ckind != ")":
                raise ExpressionError("expected ')'", cpos)
            return value
        if kind == "-":
            return self.neg(self.factor())
        raise ExpressionError(f"unexpected {kind!r}", pos)

    # algebra hooks
    def const(self, c):
        raise NotImplementedError

    def var(self, name):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def pow(self, a, k):
        raise NotImplementedError

    def finalize(self, value):
        return value


class _PolyParser(_Parser):
    def const(self, c):
        return Poly.const(c)

    def var(self, name):
        return Poly.variable(name)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, k):
        return a**k


class _TermParser(_Parser):
    """Values are ('s', Fraction) scalars or ('t', Term) trees.

    The literal 0 is the zero term (terms have no standalone constants, so
    the spelling is unambiguous); other rationals are scalars.  Scalars fold
    together, a scalar against a term becomes a Scale node, and a product of
    two terms stays a Prod node exactly as written.
    """

    def const(self, c):
        if c == 0:
            return ("t", ZERO)
        return ("s", c)

    def var(self, name):
        return ("t", Var(name))

    def neg(self, a):
        tag, v = a
        if tag == "s":
            return ("s", -v)
        return ("t", Scale(Fraction(-1), v))

    def add(self, a, b):
        at, av = a
        bt, bv = b
        if at == "s" or bt == "s":
            raise ExpressionError("constant summand is not a series term")
        return ("t", Sum(av, bv))

    def mul(self, a, b):
        at, av = a
        bt, bv = b
        if at == "s" and bt == "s":
            return ("s", av * bv)
        if at == "s":
            return ("t", Scale(av, bv))
        if bt == "s":
            return ("t", Scale(bv, av))
        return ("t", Prod(av, bv))

    def pow(self, a, k):
        value = a
        for _ in range(k - 1):
            value = self.mul(value, a)
        return value

    def finalize(self, value):
        tag, v = value
        if tag == "t":
            return v
        raise ExpressionError("a bare nonzero constant is not a series term")


def parse_poly(text: str) -> Poly:
    return _PolyParser(text).parse()


def parse_term(text: str) -> Term:
    return _TermParser(text).parse()
