"""Exact sparse polynomial arithmetic over Q and a Groebner-basis kernel.

Coefficients are `fractions.Fraction` throughout, so every operation is
exact; floats are rejected outright.  A polynomial is a canonical map from
monomials to nonzero coefficients, and equality is equality of those maps.
The monomial order is graded reverse lexicographic over an explicit variable
precedence, fixed once per automaton or rule by its declaration order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DEFAULT_LIMITS,
    LimitError,
    Limits,
    MissingVariableError,
)

Q = Fraction


def rational(value) -> Fraction:
    """Coerce ints, 'p/q' strings, and Fractions to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class Monomial:
    """A finite product of named variables with positive integer exponents.

    The empty product is the constant monomial 1; zero exponents are never
    stored.
    """

    __slots__ = ("_exps", "_key", "degree")

    def __init__(self, exps=()):
        raw = dict(exps)
        cleaned = {}
        for var, exp in raw.items():
            if not isinstance(exp, int) or exp < 0:
                raise ValueError(f"bad exponent {exp!r} for {var!r}")
            if exp:
                cleaned[var] = exp
        self._exps = cleaned
        self._key = tuple(sorted(cleaned.items()))
        self.degree = sum(cleaned.values())

    @classmethod
    def variable(cls, name: str) -> "Monomial":
        return cls({name: 1})

    @property
    def is_one(self) -> bool:
        return not self._exps

    def exponent(self, var: str) -> int:
        return self._exps.get(var, 0)

    def items(self):
        """Exponent pairs, sorted by variable name."""
        return self._key

    def variables(self):
        return tuple(v for v, _ in self._key)

    def __hash__(self):
        return hash(self._key)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._key == other._key

    def __mul__(self, other: "Monomial") -> "Monomial":
        exps = dict(self._exps)
        for v, e in other._exps.items():
            exps[v] = exps.get(v, 0) + e
        return Monomial(exps)

    def divides(self, other: "Monomial") -> bool:
        return all(other.exponent(v) >= e for v, e in self._exps.items())

    def __truediv__(self, other: "Monomial") -> "Monomial":
        exps = dict(self._exps)
        for v, e in other._exps.items():
            have = exps.get(v, 0) - e
            if have < 0:
                raise ValueError(f"{other!r} does not divide {self!r}")
            exps[v] = have
        return Monomial(exps)

    def lcm(self, other: "Monomial") -> "Monomial":
        exps = dict(self._exps)
        for v, e in other._exps.items():
            exps[v] = max(exps.get(v, 0), e)
        return Monomial(exps)

    def rename(self, mapping: Mapping[str, str]) -> "Monomial":
        return Monomial({mapping.get(v, v): e for v, e in self._exps.items()})

    def __repr__(self):
        if self.is_one:
            return "Monomial(1)"
        body = "*".join(f"{v}^{e}" if e > 1 else v for v, e in self._key)
        return f"Monomial({body})"


ONE = Monomial()


class MonomialOrder:
    """Graded reverse lexicographic order over a fixed variable precedence."""

    __slots__ = ("variables", "_index")

    def __init__(self, variables: Sequence[str]):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variables in monomial order")
        self.variables = variables
        self._index = {v: i for i, v in enumerate(variables)}

    def key(self, m: Monomial):
        """Sort key: bigger key means bigger monomial."""
        exps = [0] * len(self.variables)
        for v, e in m.items():
            i = self._index.get(v)
            if i is None:
                raise MissingVariableError(v, "monomial order")
            exps[i] = e
        return (m.degree, tuple(-e for e in reversed(exps)))

    def sorted_terms(self, p: "Poly"):
        """Terms of p as (monomial, coefficient) pairs, descending."""
        return sorted(p.terms.items(), key=lambda t: self.key(t[0]), reverse=True)

    def leading(self, p: "Poly"):
        """Leading (monomial, coefficient) of a nonzero polynomial."""
        if not p:
            raise ValueError("zero polynomial has no leading term")
        m = max(p.terms, key=self.key)
        return m, p.terms[m]

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.variables == other.variables

    def __hash__(self):
        return hash(self.variables)

    def __repr__(self):
        return f"MonomialOrder(grevlex, {list(self.variables)})"


class Poly:
    """Canonical sparse polynomial: monomial -> nonzero rational."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Fraction] = {}
        for m, c in items:
            if not isinstance(m, Monomial):
                raise TypeError(f"not a monomial: {m!r}")
            c = rational(c)
            if m in acc:
                acc[m] += c
            else:
                acc[m] = c
        self.terms = {m: c for m, c in acc.items() if c}

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({ONE: rational(c)})

    @classmethod
    def variable(cls, name: str) -> "Poly":
        return cls({Monomial.variable(name): Fraction(1)})

    @classmethod
    def term(cls, m: Monomial, c) -> "Poly":
        return cls({m: rational(c)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    __hash__ = None

    @property
    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial by convention."""
        return max((m.degree for m in self.terms), default=0)

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    @property
    def has_constant_term(self) -> bool:
        return ONE in self.terms

    def variables(self):
        seen = set()
        for m in self.terms:
            seen.update(m.variables())
        return tuple(sorted(seen))

    def __add__(self, other: "Poly") -> "Poly":
        acc = dict(self.terms)
        for m, c in other.terms.items():
            s = acc.get(m, Fraction(0)) + c
            if s:
                acc[m] = s
            elif m in acc:
                del acc[m]
        out = Poly.zero()
        out.terms = acc
        return out

    def __radd__(self, other):
        if other == 0:
            return self
        return NotImplemented

    def __neg__(self) -> "Poly":
        out = Poly.zero()
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            acc: dict[Monomial, Fraction] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = m1 * m2
                    s = acc.get(m, Fraction(0)) + c1 * c2
                    if s:
                        acc[m] = s
                    elif m in acc:
                        del acc[m]
            out = Poly.zero()
            out.terms = acc
            return out
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Poly":
        c = rational(c)
        if not c:
            return Poly.zero()
        out = Poly.zero()
        out.terms = {m: c * v for m, v in self.terms.items()}
        return out

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"bad exponent {k!r}")
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def evaluate(self, assignment: Mapping[str, Fraction]) -> Fraction:
        """Exact evaluation at a total assignment (a ring homomorphism)."""
        total = Fraction(0)
        for m, c in self.terms.items():
            value = c
            for v, e in m.items():
                if v not in assignment:
                    raise MissingVariableError(v)
                value *= rational(assignment[v]) ** e
            total += value
        return total

    def substitute(self, images: Mapping[str, "Poly"]) -> "Poly":
        """Homomorphic substitution of polynomials for variables."""
        total = Poly.zero()
        for m, c in self.terms.items():
            value = Poly.const(c)
            for v, e in m.items():
                if v not in images:
                    raise MissingVariableError(v, "substitution")
                value = value * (images[v] ** e)
            total = total + value
        return total

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        out = Poly.zero()
        out.terms = {m.rename(mapping): c for m, c in self.terms.items()}
        return out

    def text(self, variables: Sequence[str] | None = None) -> str:
        """Render in the shared expression grammar; round-trips exactly."""
        if not self.terms:
            return "0"
        if variables is None:
            variables = self.variables()
        order = MonomialOrder(tuple(variables))
        index = {v: i for i, v in enumerate(variables)}
        parts: list[str] = []
        for m, c in order.sorted_terms(self):
            factors = sorted(m.items(), key=lambda t: index[t[0]])
            body = "*".join(f"{v}^{e}" if e > 1 else v for v, e in factors)
            mag = abs(c)
            if m.is_one:
                piece = str(mag)
            elif mag == 1:
                piece = body
            else:
                piece = f"{mag}*{body}"
            if not parts:
                parts.append(piece if c > 0 else f"-{piece}")
            else:
                parts.append(f" + {piece}" if c > 0 else f" - {piece}")
        return "".join(parts)

    def __repr__(self):
        return f"Poly({self.text()})"


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis: monic, interreduced, sorted by leading monomial."""

    order: MonomialOrder
    generators: tuple[Poly, ...]

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


def _monic(p: Poly, order: MonomialOrder) -> Poly:
    _, c = order.leading(p)
    return p if c == 1 else p.scale(Fraction(1) / c)


def reduce(
    p: Poly,
    basis: Sequence[Poly],
    order: MonomialOrder,
    limits: Limits = DEFAULT_LIMITS,
) -> Poly:
    """Full normal form of p modulo basis under the given order.

    No monomial of the result is divisible by a leading monomial of the
    basis, and p minus the result lies in the generated ideal.  The answer
    is deterministic: the first basis element whose leading monomial divides
    the current leading monomial is used at every step.
    """
    for b in basis:
        if not b:
            raise ValueError("zero polynomial in reduction basis")
    lead = [(order.leading(b)[0], order.leading(b)[1], b) for b in basis]
    remainder: dict[Monomial, Fraction] = {}
    work = p
    while work:
        limits.check_deadline()
        m, c = order.leading(work)
        for lm, lc, b in lead:
            if lm.divides(m):
                work = work - b.scale(c / lc) * Poly.term(m / lm, 1)
                break
        else:
            remainder[m] = c
            work = work - Poly.term(m, c)
    out = Poly.zero()
    out.terms = remainder
    return out


def spolynomial(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    lmf, lcf = order.leading(f)
    lmg, lcg = order.leading(g)
    big = lmf.lcm(lmg)
    return f.scale(Fraction(1) / lcf) * Poly.term(big / lmf, 1) - g.scale(
        Fraction(1) / lcg
    ) * Poly.term(big / lmg, 1)


def _complete(G: list[Poly], first_new: int, order: MonomialOrder, limits: Limits):
    """Buchberger completion over pairs touching indices >= first_new.

    Normal (smallest-lcm-first) selection; pairs are dropped by the product
    criterion and by the chain criterion over already-treated pairs.
    """
    lm = [order.leading(g)[0] for g in G]
    pairs: list = []

    def push(i: int, j: int):
        heapq.heappush(pairs, (order.key(lm[i].lcm(lm[j])), i, j))

    for j in range(first_new, len(G)):
        for i in range(j):
            push(i, j)

    treated: set[tuple[int, int]] = set()
    pops = 0
    while pairs:
        limits.check_deadline()
        pops += 1
        if pops > limits.max_pairs:
            raise LimitError("pair-queue", f"more than {limits.max_pairs} pairs")
        _, i, j = heapq.heappop(pairs)
        treated.add((i, j))
        big = lm[i].lcm(lm[j])
        if big == lm[i] * lm[j]:
            continue  # coprime leading monomials
        chained = False
        for k in range(len(G)):
            if k in (i, j) or not lm[k].divides(big):
                continue
            ik = (min(i, k), max(i, k))
            jk = (min(j, k), max(j, k))
            if ik in treated and jk in treated:
                chained = True
                break
        if chained:
            continue
        r = reduce(spolynomial(G[i], G[j], order), G, order, limits)
        if r:
            limits.check_degree(r.degree)
            G.append(_monic(r, order))
            lm.append(order.leading(G[-1])[0])
            t = len(G) - 1
            for k in range(t):
                push(k, t)
    return G


def _reduced_form(G: list[Poly], order: MonomialOrder, limits: Limits):
    """Minimalize and interreduce a Groebner basis; canonical output order."""
    G = [g for g in G if g]
    G.sort(key=lambda g: order.key(order.leading(g)[0]))
    minimal: list[Poly] = []
    for g in G:
        lmg = order.leading(g)[0]
        if not any(order.leading(h)[0].divides(lmg) for h in minimal):
            minimal.append(g)
    while True:
        changed = False
        nxt: list[Poly] = []
        for i, g in enumerate(minimal):
            others = minimal[:i] + minimal[i + 1 :]
            r = _monic(reduce(g, others, order, limits), order) if others else _monic(g, order)
            changed = changed or r != g
            nxt.append(r)
        minimal = nxt
        if not changed:
            break
    minimal.sort(key=lambda g: order.key(order.leading(g)[0]), reverse=True)
    return tuple(minimal)


def buchberger(
    gens: Iterable[Poly],
    order: MonomialOrder,
    limits: Limits = DEFAULT_LIMITS,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by gens.

    The empty input yields the empty basis (the zero ideal).  Idempotent:
    running it on its own output returns the same basis.
    """
    return extend_basis(GroebnerBasis(order, ()), gens, limits)


def extend_basis(
    gb: GroebnerBasis,
    gens: Iterable[Poly],
    limits: Limits = DEFAULT_LIMITS,
) -> GroebnerBasis:
    """Reduced basis of the ideal of gb enlarged by gens.

    Incremental: pairs internal to the existing basis are already resolved,
    so only pairs touching the reduced new generators are processed.
    """
    order = gb.order
    G = list(gb.generators)
    first_new = len(G)
    for g in gens:
        limits.check_deadline()
        limits.check_degree(g.degree)
        r = reduce(g, G, order, limits) if G else g
        if r:
            G.append(_monic(r, order))
    if len(G) == first_new:
        return gb
    G = _complete(G, first_new, order, limits)
    return GroebnerBasis(order, _reduced_form(G, order, limits))


def ideal_member(
    p: Poly, gb: GroebnerBasis, limits: Limits = DEFAULT_LIMITS
) -> bool:
    """p is in the ideal of gb iff its normal form vanishes."""
    return not reduce(p, gb.generators, gb.order, limits)


def ideal_equal(
    gb: GroebnerBasis, gens: Iterable[Poly], limits: Limits = DEFAULT_LIMITS
) -> bool:
    """The ideal of gb absorbs gens iff each one is already a member."""
    return all(ideal_member(g, gb, limits) for g in gens)
