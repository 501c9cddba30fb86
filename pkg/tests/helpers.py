"""Shared builders for the test suite: random inputs and small automata."""

from __future__ import annotations

import itertools
from fractions import Fraction

from pautomata import (
    Monomial,
    Poly,
    PolyAutomaton,
    make_rule,
    parse_poly,
)
from pautomata.terms import Prod, Scale, Sum, Term, Var, Zero

NOTABLE = ("hadamard", "shuffle", "infiltration")


def q(rng, span=4, maxden=3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, maxden))


def random_monomial(rng, variables, max_degree=3, min_degree=1) -> Monomial:
    degree = rng.randint(min_degree, max_degree)
    exps: dict[str, int] = {}
    for _ in range(degree):
        v = rng.choice(variables)
        exps[v] = exps.get(v, 0) + 1
    return Monomial(exps)


def random_poly(rng, variables, max_degree=3, max_terms=4, min_degree=0) -> Poly:
    pairs = []
    for _ in range(rng.randint(1, max_terms)):
        pairs.append((random_monomial(rng, variables, max_degree, min_degree), q(rng)))
    return Poly(pairs)


def random_poly0(rng, variables, max_degree=3, max_terms=4) -> Poly:
    return random_poly(rng, variables, max_degree, max_terms, min_degree=1)


def random_simple_triple(rng):
    """alpha, beta free; gamma forced by alpha*gamma = beta*(beta-1)."""
    alpha = q(rng, span=3, maxden=2)
    beta = q(rng, span=3, maxden=2)
    if alpha != 0:
        gamma = beta * (beta - 1) / alpha
    else:
        beta = Fraction(rng.choice([0, 1]))
        gamma = q(rng, span=3, maxden=2)
    return alpha, beta, gamma


def simple_rule_poly(alpha, beta, gamma) -> Poly:
    return (
        parse_poly("x*y").scale(alpha)
        + parse_poly("x*yd + xd*y").scale(beta)
        + parse_poly("xd*yd").scale(gamma)
    )


def bilinear_rule_poly(alpha, beta1, beta2, gamma) -> Poly:
    return (
        parse_poly("x*y").scale(alpha)
        + parse_poly("x*yd").scale(beta1)
        + parse_poly("xd*y").scale(beta2)
        + parse_poly("xd*yd").scale(gamma)
    )


def random_poly_automaton(
    rng, rule_name, alphabet=("a", "b"), nvars=2, max_degree=2, max_terms=2
) -> PolyAutomaton:
    rule = make_rule(rule_name)
    variables = tuple(f"v{i}" for i in range(nvars))
    transitions = {}
    for a in alphabet:
        row = {}
        for v in variables:
            if rng.random() < 0.2:
                row[v] = Poly.zero()
            else:
                row[v] = random_poly0(rng, variables, max_degree, max_terms)
        transitions[a] = row
    output = {v: q(rng, span=2, maxden=2) for v in variables}
    return PolyAutomaton(tuple(alphabet), variables, rule, output, transitions)


def nonzero_q(rng, span=3, maxden=2) -> Fraction:
    while True:
        value = q(rng, span, maxden)
        if value:
            return value


def random_term(rng, variables, depth=3) -> Term:
    if depth == 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.1:
            return Zero()
        return Var(rng.choice(variables))
    roll = rng.random()
    if roll < 0.25:
        return Scale(nonzero_q(rng), random_term(rng, variables, depth - 1))
    if roll < 0.6:
        return Sum(
            random_term(rng, variables, depth - 1),
            random_term(rng, variables, depth - 1),
        )
    return Prod(
        random_term(rng, variables, depth - 1),
        random_term(rng, variables, depth - 1),
    )


def shake_term(rng, t: Term) -> Term:
    """A random commutative-algebra rewrite of t (same normal form)."""
    if isinstance(t, (Zero, Var)):
        return t
    if isinstance(t, Scale):
        return Scale(t.factor, shake_term(rng, t.arg))
    ctor = Sum if isinstance(t, Sum) else Prod
    left = shake_term(rng, t.left)
    right = shake_term(rng, t.right)
    if rng.random() < 0.5:
        left, right = right, left
    if rng.random() < 0.5 and isinstance(left, ctor):
        # rotate ((a ? b) ? c) into (a ? (b ? c))
        return ctor(left.left, ctor(left.right, right))
    return ctor(left, right)


def words_up_to(alphabet, length):
    for k in range(length + 1):
        yield from itertools.product(tuple(alphabet), repeat=k)


def table_of_poly_state(automaton, state, depth):
    """Coefficient table of a polynomial-automaton state, as a dict."""
    from pautomata import poly_coefficient

    return {
        w: poly_coefficient(automaton, state, w)
        for w in words_up_to(automaton.alphabet, depth)
    }


def table_of_term_state(automaton, state, depth):
    from pautomata import term_coefficient

    return {
        w: term_coefficient(automaton, state, w)
        for w in words_up_to(automaton.alphabet, depth)
    }
