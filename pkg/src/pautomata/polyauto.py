"""Polynomial automata for special rules and the decision procedures.

States are polynomials with no constant term over the declared variables.
The one-step transition extends uniquely from variables to all such
polynomials because the rule is special; on top of that extension sit the
deciders: zeroness by ideal-chain saturation, equivalence by differencing
over a disjoint union, right-derivative closure, commutativity, and the
reduction from equivalence to commutativity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    DEFAULT_LIMITS,
    ForeignVariableError,
    LetterCollisionError,
    Limits,
    LimitError,
    MismatchError,
    NonSpecialRuleError,
    PreconditionError,
)
from .polyalg import (
    GroebnerBasis,
    Monomial,
    MonomialOrder,
    Poly,
    extend_basis,
    ideal_member,
    rational,
)
from .rules import ProductRule
from .termauto import TermAutomaton
from .terms import normalize

Word = tuple[str, ...]


@dataclass(frozen=True, eq=False)
class PolyAutomaton:
    """Alphabet, ordered variables, a special rule, outputs, and transitions.

    Every transition polynomial is constant-term-free and scoped over the
    declared variables; the rule must be special, otherwise the quotient
    this model lives in is not well defined and construction fails.
    """

    alphabet: tuple[str, ...]
    variables: tuple[str, ...]
    rule: ProductRule
    output: dict[str, Fraction]
    transitions: dict[str, dict[str, Poly]]
    order: MonomialOrder = None  # derived; set in __post_init__

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "variables", tuple(self.variables))
        if not self.rule.is_special:
            raise NonSpecialRuleError(
                f"rule {self.rule.text()!r} is not special; "
                "polynomial automata require a special rule"
            )
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
                p = row[v]
                foreign = set(p.variables()) - declared
                if foreign:
                    raise ForeignVariableError(foreign, self.variables)
                if p.has_constant_term:
                    raise PreconditionError(
                        f"transition for ({letter!r}, {v!r}) has a constant term"
                    )
            trans[letter] = {v: row[v] for v in self.variables}
        object.__setattr__(self, "transitions", trans)
        object.__setattr__(self, "order", MonomialOrder(self.variables))

    def check_state(self, p: Poly) -> None:
        foreign = set(p.variables()) - set(self.variables)
        if foreign:
            raise ForeignVariableError(foreign, self.variables)
        if p.has_constant_term:
            raise PreconditionError("state polynomial must have no constant term")

    def _check_letter(self, letter: str) -> None:
        if letter not in self.transitions:
            raise PreconditionError(f"letter {letter!r} is not in the alphabet")


def from_term_automaton(automaton: TermAutomaton) -> PolyAutomaton:
    """Quotient a term automaton to its polynomial automaton.

    Requires a special rule; each transition term collapses to its normal
    form and the coefficient semantics is preserved word for word.
    """
    if not automaton.rule.is_special:
        raise NonSpecialRuleError(
            "only special rules admit the polynomial quotient"
        )
    return PolyAutomaton(
        alphabet=automaton.alphabet,
        variables=automaton.variables,
        rule=automaton.rule,
        output=dict(automaton.output),
        transitions={
            letter: {v: normalize(t) for v, t in row.items()}
            for letter, row in automaton.transitions.items()
        },
    )


def extend_poly(
    rule_poly: Poly,
    precedence: Sequence[str],
    derivatives: Mapping[str, Poly],
    p: Poly,
    pivot: str = "first",
    memo: dict | None = None,
) -> Poly:
    """The unique linear extension of a variable derivative map.

    Linear in p; a monomial v*m splits at a pivot variable and goes through
    the rule polynomial with x -> v, xd -> D(v), y -> m, yd -> extension(m).
    Any pivot yields the same polynomial (tested); 'first' takes the least
    declared variable, 'last' the greatest, so the default is deterministic.
    """
    if pivot not in ("first", "last"):
        raise PreconditionError(f"unknown pivot {pivot!r}")
    index = {v: i for i, v in enumerate(precedence)}
    choose = min if pivot == "first" else max
    if memo is None:
        memo = {}

    def mono_ext(m: Monomial) -> Poly:
        cached = memo.get(m)
        if cached is not None:
            return cached
        v = choose(m.variables(), key=index.__getitem__)
        rest = m / Monomial.variable(v)
        dv = derivatives[v]
        if rest.is_one:
            result = dv
        else:
            result = rule_poly.substitute(
                {
                    "x": Poly.variable(v),
                    "xd": dv,
                    "y": Poly.term(rest, 1),
                    "yd": mono_ext(rest),
                }
            )
        memo[m] = result
        return result

    total = Poly.zero()
    for m, c in p.terms.items():
        if m.is_one:
            raise PreconditionError("state polynomial must have no constant term")
        total = total + mono_ext(m).scale(c)
    return total


def delta_extend(
    automaton: PolyAutomaton,
    letter: str,
    p: Poly,
    limits: Limits = DEFAULT_LIMITS,
    pivot: str = "first",
) -> Poly:
    """One derivative step on a state polynomial."""
    automaton._check_letter(letter)
    automaton.check_state(p)
    result = extend_poly(
        automaton.rule.normal_form,
        automaton.variables,
        automaton.transitions[letter],
        p,
        pivot=pivot,
    )
    limits.check_degree(result.degree)
    return result


def coefficient(
    automaton: PolyAutomaton,
    p: Poly,
    word: Sequence[str],
    limits: Limits = DEFAULT_LIMITS,
) -> Fraction:
    """Series coefficient of the word: evaluate the word-iterated extension."""
    automaton.check_state(p)
    current = p
    for letter in word:
        limits.check_deadline()
        current = delta_extend(automaton, letter, current, limits)
    return current.evaluate(automaton.output)


@dataclass(frozen=True)
class ZeronessCertificate:
    """Evidence for a zeroness verdict.

    `stabilization_index` is the last ideal-chain level that contributed a
    new generator; zeroness holds iff every word no longer than that index
    has coefficient zero, and the sweep either checks them all (verdict
    true) or stops at the first nonzero coefficient (the witness).
    """

    verdict: bool
    stabilization_index: int
    generators_added: tuple[tuple[Word, Poly], ...]
    witness: tuple[Word, Fraction] | None
    words_checked: int


def _validate_initial(automaton: PolyAutomaton, p: Poly, strict_initial: bool) -> None:
    automaton.check_state(p)
    if strict_initial:
        terms = list(p.terms.items())
        ok = (
            len(terms) == 1
            and terms[0][1] == 1
            and terms[0][0].degree == 1
        )
        if not ok:
            raise PreconditionError(
                "strict-initial mode requires the initial polynomial "
                "to be a single variable"
            )


def zeroness(
    automaton: PolyAutomaton,
    initial: Poly,
    limits: Limits = DEFAULT_LIMITS,
    no_prune: bool = False,
    strict_initial: bool = False,
) -> ZeronessCertificate:
    """Decide whether the series of the initial polynomial is zero.

    Saturates the chain of ideals generated by the word-iterated derivatives
    of the initial polynomial, level by level.  A new generator is kept only
    if it is not already a member of the current ideal, and (unless
    `no_prune`) only kept generators are derived further; derivatives of
    members are covered because every special rule is ideal-compatible.
    Once a whole level adds nothing the chain has stabilised, and the series
    is zero iff all coefficients up to the stabilisation index vanish.

    Resource limits abort with an error, never with a wrong verdict.
    """
    _validate_initial(automaton, initial, strict_initial)
    order = automaton.order
    basis = GroebnerBasis(order, ())
    added: list[tuple[Word, Poly]] = []
    frontier: list[tuple[Word, Poly]] = [((), initial)]
    level = 0
    last_added = 0
    while frontier:
        if level > limits.max_ideal_levels:
            raise LimitError(
                "ideal-levels", f"chain exceeded {limits.max_ideal_levels} levels"
            )
        limits.check_deadline()
        survivors: list[tuple[Word, Poly]] = []
        added_here = False
        for word, q in frontier:
            if q and not ideal_member(q, basis, limits):
                basis = extend_basis(basis, (q,), limits)
                added.append((word, q))
                added_here = True
                survivors.append((word, q))
            elif no_prune:
                survivors.append((word, q))
        if added_here:
            last_added = level
        else:
            break
        frontier = [
            (word + (a,), delta_extend(automaton, a, q, limits))
            for word, q in survivors
            for a in automaton.alphabet
        ]
        level += 1

    stabilization = last_added
    derived: dict[Word, Poly] = {(): initial}
    words_checked = 0
    witness = None
    for k in range(stabilization + 1):
        if witness is not None:
            break
        for word in itertools.product(automaton.alphabet, repeat=k):
            limits.check_deadline()
            q = derived.get(word)
            if q is None:
                q = delta_extend(automaton, word[-1], derived[word[:-1]], limits)
                derived[word] = q
            value = q.evaluate(automaton.output)
            words_checked += 1
            if value != 0:
                witness = (word, value)
                break
    return ZeronessCertificate(
        verdict=witness is None,
        stabilization_index=stabilization,
        generators_added=tuple(added),
        witness=witness,
        words_checked=words_checked,
    )


def _renamed(automaton: PolyAutomaton, prefix: str) -> tuple[PolyAutomaton, dict[str, str]]:
    mapping = {v: prefix + v for v in automaton.variables}
    renamed = PolyAutomaton(
        alphabet=automaton.alphabet,
        variables=tuple(mapping[v] for v in automaton.variables),
        rule=automaton.rule,
        output={mapping[v]: c for v, c in automaton.output.items()},
        transitions={
            letter: {mapping[v]: p.rename(mapping) for v, p in row.items()}
            for letter, row in automaton.transitions.items()
        },
    )
    return renamed, mapping


def equivalence(
    left: PolyAutomaton,
    left_initial: Poly,
    right: PolyAutomaton,
    right_initial: Poly,
    limits: Limits = DEFAULT_LIMITS,
    no_prune: bool = False,
) -> ZeronessCertificate:
    """Decide equality of two recognised series: zeroness of the difference
    over the disjoint union (variables prefixed 'l.' and 'r.')."""
    if left.alphabet != right.alphabet:
        raise MismatchError("equivalence requires identical alphabets")
    if left.rule.normal_form != right.rule.normal_form:
        raise MismatchError("equivalence requires the same product rule")
    left.check_state(left_initial)
    right.check_state(right_initial)
    la, lmap = _renamed(left, "l.")
    ra, rmap = _renamed(right, "r.")
    union = PolyAutomaton(
        alphabet=left.alphabet,
        variables=la.variables + ra.variables,
        rule=left.rule,
        output={**la.output, **ra.output},
        transitions={
            letter: {**la.transitions[letter], **ra.transitions[letter]}
            for letter in left.alphabet
        },
    )
    difference = left_initial.rename(lmap) - right_initial.rename(rmap)
    return zeroness(union, difference, limits, no_prune=no_prune)


def _fresh_names(base_names: Sequence[str], taken: set[str]) -> list[str]:
    # underscores keep the names valid in the expression grammar
    names = []
    for base in base_names:
        name = base
        while name in taken:
            name += "_"
        taken.add(name)
        names.append(name)
    return names


def right_derivative_automaton(
    automaton: PolyAutomaton,
    letter: str,
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[PolyAutomaton, dict[str, str]]:
    """Close the automaton under the right derivative by one letter.

    Right derivatives obey the same product rule as left ones for special
    rules, so the variable set doubles: the new variable for x denotes the
    right derivative of x's series.  Its output is the one-letter
    coefficient of x, and its transitions are the right-derivative operator
    applied to x's transitions (left and right derivatives commute).
    Returns the extended automaton and the old-to-new renaming, from which
    the right derivative of any state polynomial can be formed with
    `right_derivative_poly`.
    """
    automaton._check_letter(letter)
    taken = set(automaton.variables)
    fresh = _fresh_names([f"{v}^R{letter}" for v in automaton.variables], taken)
    renaming = dict(zip(automaton.variables, fresh))
    derivative_map = {v: Poly.variable(renaming[v]) for v in automaton.variables}

    outputs = dict(automaton.output)
    for v in automaton.variables:
        outputs[renaming[v]] = automaton.transitions[letter][v].evaluate(
            automaton.output
        )
    transitions: dict[str, dict[str, Poly]] = {}
    for a in automaton.alphabet:
        limits.check_deadline()
        row = dict(automaton.transitions[a])
        memo: dict = {}
        for v in automaton.variables:
            row[renaming[v]] = extend_poly(
                automaton.rule.normal_form,
                automaton.variables,
                derivative_map,
                automaton.transitions[a][v],
                memo=memo,
            )
        transitions[a] = row
    extended = PolyAutomaton(
        alphabet=automaton.alphabet,
        variables=automaton.variables + tuple(fresh),
        rule=automaton.rule,
        output=outputs,
        transitions=transitions,
    )
    return extended, renaming


def right_derivative_poly(
    automaton: PolyAutomaton,
    renaming: Mapping[str, str],
    p: Poly,
) -> Poly:
    """The right-derivative operator on states, matching the renaming
    produced by `right_derivative_automaton`."""
    automaton.check_state(p)
    derivative_map = {v: Poly.variable(renaming[v]) for v in automaton.variables}
    return extend_poly(
        automaton.rule.normal_form,
        automaton.variables,
        derivative_map,
        p,
    )


@dataclass(frozen=True)
class CommutativityReport:
    """Outcome of the commutativity decision.

    A series is commutative iff all its double left derivatives commute and
    every left derivative equals the matching right derivative.  On failure
    `witness_words` are two words with the same letters but different
    coefficients, and `witness_value` is their coefficient difference.
    """

    commutative: bool
    checks_run: int
    failing_check: tuple[str, tuple[str, ...]] | None
    certificate: ZeronessCertificate | None
    witness_words: tuple[Word, Word] | None
    witness_value: Fraction | None


def is_commutative(
    automaton: PolyAutomaton,
    initial: Poly,
    limits: Limits = DEFAULT_LIMITS,
    no_prune: bool = False,
) -> CommutativityReport:
    """Decide whether the recognised series is commutative.

    Checks, in deterministic order: for every unordered letter pair, the two
    double-derivative states are equivalent; for every letter, the left
    derivative is equivalent to the right derivative (over the automaton
    closed under that right derivative).
    """
    automaton.check_state(initial)
    checks = 0
    for i, a in enumerate(automaton.alphabet):
        for b in automaton.alphabet[i + 1 :]:
            # prefix a.b state vs prefix b.a state
            ab = delta_extend(
                automaton, b, delta_extend(automaton, a, initial, limits), limits
            )
            ba = delta_extend(
                automaton, a, delta_extend(automaton, b, initial, limits), limits
            )
            cert = zeroness(automaton, ab - ba, limits, no_prune=no_prune)
            checks += 1
            if not cert.verdict:
                word, value = cert.witness
                return CommutativityReport(
                    commutative=False,
                    checks_run=checks,
                    failing_check=("derivative-pair", (a, b)),
                    certificate=cert,
                    witness_words=((a, b) + word, (b, a) + word),
                    witness_value=value,
                )
    for a in automaton.alphabet:
        left_state = delta_extend(automaton, a, initial, limits)
        closed, renaming = right_derivative_automaton(automaton, a, limits)
        right_state = right_derivative_poly(automaton, renaming, initial)
        cert = equivalence(
            automaton, left_state, closed, right_state, limits, no_prune=no_prune
        )
        checks += 1
        if not cert.verdict:
            word, value = cert.witness
            return CommutativityReport(
                commutative=False,
                checks_run=checks,
                failing_check=("right-derivative", (a,)),
                certificate=cert,
                witness_words=((a,) + word, word + (a,)),
                witness_value=value,
            )
    return CommutativityReport(True, checks, None, None, None, None)


def equivalence_to_commutativity(
    automaton: PolyAutomaton,
    initial: Poly,
    fresh_letters: tuple[str, str] = ("#a", "#b"),
) -> tuple[PolyAutomaton, Poly]:
    """Reduce zeroness of a series to commutativity of a padded series.

    Two fresh letters and two fresh variables g, h are added, with the only
    nonzero new transitions g -> h on the first fresh letter and h -> the
    initial polynomial on the second.  The new series places the original
    one under the prefix (first, second) and zero under every other
    two-letter prefix, so it is commutative iff the original series is zero.
    """
    automaton.check_state(initial)
    first, second = fresh_letters
    if first == second or not first or not second:
        raise LetterCollisionError("fresh letters must be distinct and nonempty")
    for letter in (first, second):
        if letter in automaton.alphabet:
            raise LetterCollisionError(
                f"letter {letter!r} already occurs in the alphabet"
            )
    taken = set(automaton.variables)
    g, h = _fresh_names(["g", "h"], taken)
    zero = Poly.zero()
    transitions: dict[str, dict[str, Poly]] = {}
    for a in automaton.alphabet:
        transitions[a] = {**automaton.transitions[a], g: zero, h: zero}
    transitions[first] = {v: zero for v in automaton.variables}
    transitions[first][g] = Poly.variable(h)
    transitions[first][h] = zero
    transitions[second] = {v: zero for v in automaton.variables}
    transitions[second][g] = zero
    transitions[second][h] = initial
    padded = PolyAutomaton(
        alphabet=automaton.alphabet + (first, second),
        variables=automaton.variables + (g, h),
        rule=automaton.rule,
        output={**automaton.output, g: Fraction(0), h: Fraction(0)},
        transitions=transitions,
    )
    return padded, Poly.variable(g)
