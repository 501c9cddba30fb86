"""Free series terms: zero, variables, scalar multiples, sums, products.

Terms are kept exactly as built and satisfy no identities; collapsing them
into commutative polynomials is the separate, explicit `normalize` step.
Every node carries its unfolded tree size so growth caps are O(1) to check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import MissingVariableError
from .polyalg import MonomialOrder, Poly, rational


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Zero(Term):
    size = 1


@dataclass(frozen=True)
class Var(Term):
    name: str
    size = 1


@dataclass(frozen=True)
class Scale(Term):
    factor: Fraction
    arg: Term
    size: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "factor", rational(self.factor))
        object.__setattr__(self, "size", 1 + self.arg.size)


@dataclass(frozen=True)
class Sum(Term):
    left: Term
    right: Term
    size: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "size", 1 + self.left.size + self.right.size)


@dataclass(frozen=True)
class Prod(Term):
    left: Term
    right: Term
    size: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "size", 1 + self.left.size + self.right.size)


ZERO = Zero()


def variables(t: Term) -> frozenset[str]:
    if isinstance(t, Zero):
        return frozenset()
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Scale):
        return variables(t.arg)
    return variables(t.left) | variables(t.right)


def substitute(t: Term, images: Mapping[str, Term]) -> Term:
    """Replace variables by terms, preserving all structure."""
    if isinstance(t, Zero):
        return t
    if isinstance(t, Var):
        if t.name not in images:
            raise MissingVariableError(t.name, "substitution")
        return images[t.name]
    if isinstance(t, Scale):
        return Scale(t.factor, substitute(t.arg, images))
    if isinstance(t, Sum):
        return Sum(substitute(t.left, images), substitute(t.right, images))
    return Prod(substitute(t.left, images), substitute(t.right, images))


def rename(t: Term, mapping: Mapping[str, str]) -> Term:
    return substitute(t, {v: Var(mapping.get(v, v)) for v in variables(t)})


def p_extension(
    rule_source: Term,
    derivatives: Mapping[str, Term],
    t: Term,
    memo: dict | None = None,
) -> Term:
    """One derivative step lifted from variables to every term.

    Linear constructors pass through; a product u*v becomes the rule source
    with x, xd, y, yd replaced by u, Du, v, Dv (term substitution, nothing
    simplified).  `memo` enables structural sharing within one call, keyed
    by node identity; the input term must stay alive for the duration.
    """
    if memo is not None:
        hit = memo.get(id(t))
        if hit is not None:
            return hit
    if isinstance(t, Zero):
        out = t
    elif isinstance(t, Var):
        if t.name not in derivatives:
            raise MissingVariableError(t.name, "transition map")
        out = derivatives[t.name]
    elif isinstance(t, Scale):
        out = Scale(t.factor, p_extension(rule_source, derivatives, t.arg, memo))
    elif isinstance(t, Sum):
        out = Sum(
            p_extension(rule_source, derivatives, t.left, memo),
            p_extension(rule_source, derivatives, t.right, memo),
        )
    else:
        du = p_extension(rule_source, derivatives, t.left, memo)
        dv = p_extension(rule_source, derivatives, t.right, memo)
        out = substitute(
            rule_source,
            {"x": t.left, "xd": du, "y": t.right, "yd": dv},
        )
    if memo is not None:
        memo[id(t)] = out
    return out


def normalize(t: Term) -> Poly:
    """Quotient by the commutative-algebra axioms: the polynomial of t.

    Terms contain no standalone constants, so the result never has a
    constant term.
    """
    if isinstance(t, Zero):
        return Poly.zero()
    if isinstance(t, Var):
        return Poly.variable(t.name)
    if isinstance(t, Scale):
        return normalize(t.arg).scale(t.factor)
    if isinstance(t, Sum):
        return normalize(t.left) + normalize(t.right)
    return normalize(t.left) * normalize(t.right)


def from_poly(p: Poly, precedence=None) -> Term:
    """A canonical term whose normal form is p (p must lack a constant term)."""
    if p.has_constant_term:
        raise ValueError("cannot express a constant term as a series term")
    if not p:
        return ZERO
    if precedence is None:
        precedence = p.variables()
    order = MonomialOrder(tuple(precedence))
    index = {v: i for i, v in enumerate(order.variables)}
    total: Term | None = None
    for m, c in order.sorted_terms(p):
        factors: list[str] = []
        for v, e in sorted(m.items(), key=lambda t: index[t[0]]):
            factors.extend([v] * e)
        piece: Term = Var(factors[0])
        for v in factors[1:]:
            piece = Prod(piece, Var(v))
        if c != 1:
            piece = Scale(c, piece)
        total = piece if total is None else Sum(total, piece)
    return total


def _atom(t: Term) -> bool:
    return isinstance(t, (Zero, Var))


def to_text(t: Term) -> str:
    """Render a term in the shared grammar; parsing the result rebuilds t."""
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Scale):
        if t.factor == 0:
            # no spelling separates a zero scalar from the zero term; both
            # denote the zero series under every rule, so collapse
            return "0"
        body = to_text(t.arg) if _atom(t.arg) else f"({to_text(t.arg)})"
        return f"{t.factor}*{body}"
    if isinstance(t, Sum):
        # '+' folds left, so only a right-nested sum needs parentheses
        left = to_text(t.left)
        right = f"({to_text(t.right)})" if isinstance(t.right, Sum) else to_text(t.right)
        return f"{left} + {right}"
    # product: '*' folds left, scalars fold into Scale, sums bind looser
    left = f"({to_text(t.left)})" if isinstance(t.left, Sum) else to_text(t.left)
    right = to_text(t.right) if _atom(t.right) else f"({to_text(t.right)})"
    return f"{left} * {right}"
