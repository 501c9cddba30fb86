"""Reading and writing the automaton JSON document.

Schema (key order is also the serialisation order):

    {
      "kind": "poly" | "term",              # optional, default "poly"
      "alphabet": ["a", "b"],
      "rule": "<expression or preset name>",
      "variables": ["x", "y"],
      "output": {"x": "0", "y": "1"},       # rationals as "n" / "p/q" strings
      "transitions": {"a": {"x": "x+y", "y": "x"}},
      "initial": "<expression>"             # optional, default first variable
    }

Expressions use the shared grammar; integers are accepted wherever rational
strings are.  Words on the command line are concatenated characters when
every letter is a single character, else space-separated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import DocumentError
from .exprs import parse_poly, parse_term
from .polyalg import Poly
from .rules import ProductRule, make_rule
from .termauto import TermAutomaton
from .terms import Term, to_text, variables as term_variables
from . import polyauto

KINDS = ("poly", "term")
_KEYS = ("kind", "alphabet", "rule", "variables", "output", "transitions", "initial")


@dataclass(frozen=True)
class LoadedAutomaton:
    kind: str
    automaton: "polyauto.PolyAutomaton | TermAutomaton"
    initial: "Poly | Term"

    @property
    def rule(self) -> ProductRule:
        return self.automaton.rule


def parse_rational_text(value) -> Fraction:
    if isinstance(value, bool):
        raise DocumentError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise DocumentError(f"not a rational: {value!r}") from None
    raise DocumentError(f"not a rational: {value!r}")


def parse_word(text: str, alphabet: tuple[str, ...]) -> tuple[str, ...]:
    """Parse a word from the CLI syntax; the empty string is the empty word."""
    if text == "":
        return ()
    if any(ch.isspace() for ch in text) or not all(len(a) == 1 for a in alphabet):
        letters = tuple(text.split())
    else:
        letters = tuple(text)
    for letter in letters:
        if letter not in alphabet:
            raise DocumentError(f"letter {letter!r} is not in the alphabet")
    return letters


def format_word(word: tuple[str, ...], alphabet: tuple[str, ...]) -> str:
    """Inverse of parse_word; the empty word renders as the empty string."""
    if all(len(a) == 1 for a in alphabet):
        return "".join(word)
    return " ".join(word)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DocumentError(message)


def load_document(doc: dict) -> LoadedAutomaton:
    """Validate and build an automaton (and its initial state) from a dict."""
    _require(isinstance(doc, dict), "automaton document must be a JSON object")
    unknown = set(doc) - set(_KEYS)
    _require(not unknown, f"unknown document keys: {sorted(unknown)}")
    kind = doc.get("kind", "poly")
    _require(kind in KINDS, f"kind must be one of {KINDS}, not {kind!r}")

    alphabet = doc.get("alphabet")
    _require(
        isinstance(alphabet, list)
        and all(isinstance(a, str) and a for a in alphabet),
        "alphabet must be a list of nonempty strings",
    )
    alphabet = tuple(alphabet)
    _require(len(set(alphabet)) == len(alphabet), "alphabet has duplicate letters")

    _require(isinstance(doc.get("rule"), str), "rule must be a string")
    rule = make_rule(doc["rule"])

    variables = doc.get("variables")
    _require(
        isinstance(variables, list)
        and variables
        and all(isinstance(v, str) and v for v in variables),
        "variables must be a nonempty list of names",
    )
    variables = tuple(variables)
    _require(len(set(variables)) == len(variables), "duplicate variables")

    output_doc = doc.get("output")
    _require(isinstance(output_doc, dict), "output must be an object")
    _require(
        set(output_doc) == set(variables),
        "output must assign a rational to exactly the declared variables",
    )
    output = {v: parse_rational_text(output_doc[v]) for v in variables}

    transitions_doc = doc.get("transitions")
    _require(isinstance(transitions_doc, dict), "transitions must be an object")
    _require(
        set(transitions_doc) == set(alphabet),
        "transitions must cover exactly the alphabet",
    )

    def parse_state(text, where: str):
        _require(isinstance(text, str), f"{where}: expected an expression string")
        if kind == "poly":
            state = parse_poly(text)
            used = set(state.variables())
            _require(
                state.constant_term == 0,
                f"{where}: polynomial states must have no constant term",
            )
        else:
            state = parse_term(text)
            used = set(term_variables(state))
        foreign = used - set(variables)
        _require(not foreign, f"{where}: undeclared variable(s) {sorted(foreign)}")
        return state

    transitions = {}
    for letter in alphabet:
        row_doc = transitions_doc[letter]
        _require(
            isinstance(row_doc, dict) and set(row_doc) == set(variables),
            f"transitions[{letter!r}] must assign a state to every variable",
        )
        transitions[letter] = {
            v: parse_state(row_doc[v], f"transitions[{letter!r}][{v!r}]")
            for v in variables
        }

    initial_text = doc.get("initial", variables[0])
    initial = parse_state(initial_text, "initial")

    if kind == "poly":
        automaton = polyauto.PolyAutomaton(
            alphabet=alphabet,
            variables=variables,
            rule=rule,
            output=output,
            transitions=transitions,
        )
    else:
        automaton = TermAutomaton(
            alphabet=alphabet,
            variables=variables,
            rule=rule,
            output=output,
            transitions=transitions,
        )
    return LoadedAutomaton(kind=kind, automaton=automaton, initial=initial)


def load_path(path: str) -> LoadedAutomaton:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path} is not valid JSON: {exc}") from None
    return load_document(doc)


def dump_document(loaded: LoadedAutomaton) -> dict:
    """Serialise back to the schema; loading the result is the identity."""
    automaton = loaded.automaton

    def state_text(state):
        if loaded.kind == "poly":
            return state.text(automaton.variables)
        return to_text(state)
    return {
        "kind": loaded.kind,
        "alphabet": list(automaton.alphabet),
        "rule": automaton.rule.text(),
        "variables": list(automaton.variables),
        "output": {v: str(automaton.output[v]) for v in automaton.variables},
        "transitions": {
            letter: {
                v: state_text(automaton.transitions[letter][v])
                for v in automaton.variables
            }
            for letter in automaton.alphabet
        },
        "initial": state_text(loaded.initial),
    }
