"""Automata whose states are free terms: the general semantics of product rules.

Works for every product rule, special or not.  A transition step on a term
is the rule-driven extension of the per-variable transition map; the
coefficient of a word is the homomorphic output of the term reached by
reading the word letter by letter (first letter first).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    DEFAULT_LIMITS,
    ForeignVariableError,
    Limits,
    MismatchError,
    PreconditionError,
)
from .rules import ProductRule, same_rule
from .terms import Prod, Scale, Sum, Term, Var, Zero, p_extension, rename, variables
from .polyalg import rational


@dataclass(frozen=True, eq=False)
class TermAutomaton:
    """Alphabet, ordered variables, a product rule, outputs, and transitions.

    Transitions are total on alphabet x variables, and every transition term
    is scoped over the declared variables.  Instances are immutable.
    """

    alphabet: tuple[str, ...]
    variables: tuple[str, ...]
    rule: ProductRule
    output: dict[str, Fraction]
    transitions: dict[str, dict[str, Term]]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.alphabet)) != len(self.alphabet):
            raise PreconditionError("duplicate letters in alphabet")
        if len(set(self.variables)) != len(self.variables):
            raise PreconditionError("duplicate variables")
        declared = set(self.variables)
        out = {}
        for v in self.variables:
            if v not in self.output:
                raise PreconditionError(f"output map misses variable {v!r}")
            out[v] = rational(self.output[v])
        object.__setattr__(self, "output", out)
        if set(self.transitions) != set(self.alphabet):
            raise PreconditionError("transition map must cover exactly the alphabet")
        trans = {}
        for letter in self.alphabet:
            row = self.transitions[letter]
            if set(row) != declared:
                raise PreconditionError(
                    f"transitions for letter {letter!r} must cover exactly the variables"
                )
            for v in self.variables:
                foreign = variables(row[v]) - declared
                if foreign:
                    raise ForeignVariableError(foreign, self.variables)
            trans[letter] = {v: row[v] for v in self.variables}
        object.__setattr__(self, "transitions", trans)

    def _check_letter(self, letter: str) -> None:
        if letter not in self.transitions:
            raise PreconditionError(f"letter {letter!r} is not in the alphabet")

    def _check_term(self, t: Term) -> None:
        foreign = variables(t) - set(self.variables)
        if foreign:
            raise ForeignVariableError(foreign, self.variables)


def p_extend(automaton: TermAutomaton, letter: str, t: Term, memo: dict | None = None) -> Term:
    """One derivative step on a term: linear constructors pass through,
    variables step via the transition map, and a product goes through the
    rule's source term by substitution (no simplification).

    An out-of-scope variable in t surfaces as a missing-variable error."""
    automaton._check_letter(letter)
    return p_extension(automaton.rule.source, automaton.transitions[letter], t, memo)


def output(automaton: TermAutomaton, t: Term, memo: dict | None = None) -> Fraction:
    """The output map extended homomorphically: products multiply outputs."""

    def walk(node: Term) -> Fraction:
        if memo is not None:
            hit = memo.get(id(node))
            if hit is not None:
                return hit
        if isinstance(node, Zero):
            value = Fraction(0)
        elif isinstance(node, Var):
            try:
                value = automaton.output[node.name]
            except KeyError:
                raise ForeignVariableError((node.name,), automaton.variables) from None
        elif isinstance(node, Scale):
            value = node.factor * walk(node.arg)
        elif isinstance(node, Sum):
            value = walk(node.left) + walk(node.right)
        else:
            value = walk(node.left) * walk(node.right)
        if memo is not None:
            memo[id(node)] = value
        return value

    return walk(t)


def coefficient(
    automaton: TermAutomaton,
    t: Term,
    word: Sequence[str],
    limits: Limits = DEFAULT_LIMITS,
    share: bool = False,
) -> Fraction:
    """Series coefficient of the given word for the series of term t.

    `share` turns on per-step structural sharing, which keeps runtime
    proportional to the term DAG instead of the unfolded tree; the unfolded
    node count is still capped because it can double at every letter.
    """
    automaton._check_term(t)
    current = t
    for letter in word:
        limits.check_deadline()
        current = p_extend(automaton, letter, current, {} if share else None)
        limits.check_term_size(current.size)
    return output(automaton, current, {} if share else None)


def _require_same_interface(a: TermAutomaton, b: TermAutomaton) -> None:
    if a.alphabet != b.alphabet:
        raise MismatchError("automata have different alphabets")
    if not same_rule(a.rule, b.rule):
        raise MismatchError("automata have different product rules")


def _renamed(automaton: TermAutomaton, prefix: str) -> TermAutomaton:
    mapping = {v: prefix + v for v in automaton.variables}
    return TermAutomaton(
        alphabet=automaton.alphabet,
        variables=tuple(mapping[v] for v in automaton.variables),
        rule=automaton.rule,
        output={mapping[v]: c for v, c in automaton.output.items()},
        transitions={
            letter: {mapping[v]: rename(t, mapping) for v, t in row.items()}
            for letter, row in automaton.transitions.items()
        },
    )


def _union(a: TermAutomaton, b: TermAutomaton) -> TermAutomaton:
    return TermAutomaton(
        alphabet=a.alphabet,
        variables=a.variables + b.variables,
        rule=a.rule,
        output={**a.output, **b.output},
        transitions={
            letter: {**a.transitions[letter], **b.transitions[letter]}
            for letter in a.alphabet
        },
    )


def closure_combine(
    kind: str,
    inputs: Sequence[tuple[TermAutomaton, Term]],
    scalar=None,
    letter: str | None = None,
) -> tuple[TermAutomaton, Term]:
    """Combine recognised series by an algebra operation, staying recognisable.

    kind 'sum' and 'product' take two (automaton, term) pairs and return the
    disjoint union (variables prefixed 'l.' and 'r.') with initial term u+v,
    resp. u*v.  kind 'scale' takes one pair and a scalar; kind
    'left-derivative' takes one pair and a letter and steps the initial term.
    The inputs must share rule and alphabet.
    """
    for automaton, t in inputs:
        automaton._check_term(t)
    if kind in ("sum", "product"):
        if len(inputs) != 2:
            raise PreconditionError(f"{kind} combines exactly two series")
        (a, u), (b, v) = inputs
        _require_same_interface(a, b)
        left = _renamed(a, "l.")
        right = _renamed(b, "r.")
        u2 = rename(u, {w: "l." + w for w in a.variables})
        v2 = rename(v, {w: "r." + w for w in b.variables})
        combined = _union(left, right)
        term = Sum(u2, v2) if kind == "sum" else Prod(u2, v2)
        return combined, term
    if kind == "scale":
        ((a, u),) = inputs
        return a, Scale(rational(scalar), u)
    if kind == "left-derivative":
        ((a, u),) = inputs
        if letter is None:
            raise PreconditionError("left-derivative needs a letter")
        return a, p_extend(a, letter, u)
    raise PreconditionError(f"unknown combination kind {kind!r}")


def antiderivative(
    family: Mapping[str, tuple[TermAutomaton, Term]],
    constant,
) -> tuple[TermAutomaton, Term]:
    """The series with prescribed derivatives and constant term.

    `family` assigns to every letter the (automaton, term) whose series the
    derivative by that letter must equal; all members share rule and
    alphabet.  The result adds one fresh variable 'g' on top of the indexed
    disjoint union of the family (variables prefixed '0.', '1.', ... in
    alphabet order).
    """
    if not family:
        raise PreconditionError("anti-derivative needs a nonempty family")
    witness = next(iter(family.values()))[0]
    if set(family) != set(witness.alphabet):
        raise MismatchError("family must assign exactly one series per letter")
    parts = []
    initial_terms = {}
    for i, a in enumerate(witness.alphabet):
        automaton, t = family[a]
        _require_same_interface(witness, automaton)
        automaton._check_term(t)
        prefix = f"{i}."
        parts.append(_renamed(automaton, prefix))
        initial_terms[a] = rename(t, {v: prefix + v for v in automaton.variables})
    merged = parts[0]
    for part in parts[1:]:
        merged = _union(merged, part)
    fresh = "g"
    transitions = {
        a: {**merged.transitions[a], fresh: initial_terms[a]}
        for a in witness.alphabet
    }
    combined = TermAutomaton(
        alphabet=witness.alphabet,
        variables=merged.variables + (fresh,),
        rule=witness.rule,
        output={**merged.output, fresh: rational(constant)},
        transitions=transitions,
    )
    return combined, Var(fresh)
