"""Command-line front end for rule analysis and automaton deciders.

Exit codes: 0 analysis completed (verdicts, including NO, are successes),
2 parse or usage errors, 3 resource-limit exhaustion, 4 precondition
violations such as feeding a non-special rule to a decider.  Reports go to
stdout, diagnostics to stderr; output is deterministic given inputs and
limits.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys

from .errors import (
    DocumentError,
    ExpressionError,
    ForeignVariableError,
    LimitError,
    Limits,
    PreconditionError,
)
from .exprs import parse_poly, parse_term
from .jsondoc import (
    LoadedAutomaton,
    dump_document,
    format_word,
    load_path,
    parse_word,
)
from .rules import check_reversal_commutation, ideal_compatible, make_rule
from .terms import normalize, variables as term_variables
from . import polyauto, termauto

_EPSILON = "ε"  # how the empty word is shown to humans


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--json", action="store_true", help="emit a JSON report")
    sub.add_argument("--max-degree", type=_positive_int, default=64)
    sub.add_argument("--max-ideal-levels", type=_positive_int, default=32)
    sub.add_argument("--max-term-nodes", type=_positive_int, default=1_000_000)
    sub.add_argument(
        "--timeout-seconds", type=_positive_float, default=60.0, metavar="SECONDS"
    )


def _limits(args) -> Limits:
    return Limits.with_timeout(
        args.timeout_seconds,
        max_degree=args.max_degree,
        max_ideal_levels=args.max_ideal_levels,
        max_term_nodes=args.max_term_nodes,
    )


def _show_word(word: tuple[str, ...], alphabet: tuple[str, ...]) -> str:
    return format_word(word, alphabet) or _EPSILON


def _emit(text: str) -> None:
    sys.stdout.write(text + "\n")


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _triple_text(triple) -> str:
    return "(" + ", ".join(str(c) for c in triple) + ")"


def _rule_report(rule) -> dict:
    report = rule.speciality
    out = {
        "rule": rule.text(),
        "normal_form": rule.normal_form.text(("x", "xd", "y", "yd")),
        "special": report.is_special,
        "add_ok": report.add_ok,
        "assoc_ok": report.assoc_ok,
        "comm_ok": report.comm_ok,
        "failing_identity": None,
        "simple": None,
        "bilinear": None,
        "associativity_identities": None,
        "unit_eta": None,
        "ideal_compatible": ideal_compatible(rule.normal_form),
        "reversal_commutes": None,
    }
    if report.failing_identity is not None:
        name, diff = report.failing_identity
        out["failing_identity"] = {"identity": name, "difference": diff.text()}
    if report.simple is not None:
        alpha, beta, gamma = report.simple
        out["simple"] = {"alpha": str(alpha), "beta": str(beta), "gamma": str(gamma)}
        out["unit_eta"] = None if report.unit_eta is None else str(report.unit_eta)
        out["reversal_commutes"] = check_reversal_commutation(rule.normal_form)
    if report.bilinear is not None:
        a, b1, b2, g = report.bilinear
        out["bilinear"] = {
            "alpha": str(a),
            "beta1": str(b1),
            "beta2": str(b2),
            "gamma": str(g),
        }
        out["associativity_identities"] = list(report.assoc_identities)
    return out


def cmd_check_rule(args) -> int:
    rule = make_rule(args.rule)
    if args.json:
        _emit_json(_rule_report(rule))
        return 0
    report = rule.speciality
    if report.is_special:
        eta = "none" if report.unit_eta is None else str(report.unit_eta)
        _emit(
            f"special: yes; simple: {_triple_text(report.simple)}; unit eta = {eta}"
        )
    else:
        _emit(f"special: no; failing: {report.failing_name}")
    return 0


def cmd_classify(args) -> int:
    rule = make_rule(args.rule)
    if args.json:
        _emit_json(_rule_report(rule))
        return 0
    report = rule.speciality
    if report.simple is None:
        _emit(f"simple: no; failing: {report.failing_name}")
    else:
        eta = "none" if report.unit_eta is None else str(report.unit_eta)
        _emit(f"simple: {_triple_text(report.simple)}; unit eta = {eta}")
    return 0


def cmd_unit(args) -> int:
    rule = make_rule(args.rule)
    if not rule.is_special:
        raise PreconditionError(
            "multiplicative units are defined for special rules only"
        )
    eta = rule.unit_eta
    if args.json:
        _emit_json(
            {
                "rule": rule.text(),
                "unit_eta": None if eta is None else str(eta),
                "degenerate": eta is None,
            }
        )
        return 0
    _emit("eta = none (degenerate rule)" if eta is None else f"eta = {eta}")
    return 0


def _coefficient(loaded: LoadedAutomaton, word, limits) -> object:
    if loaded.kind == "poly":
        return polyauto.coefficient(loaded.automaton, loaded.initial, word, limits)
    return termauto.coefficient(
        loaded.automaton, loaded.initial, word, limits, share=True
    )


def cmd_coeff(args) -> int:
    loaded = load_path(args.automaton)
    word = parse_word(args.word, loaded.automaton.alphabet)
    value = _coefficient(loaded, word, _limits(args))
    if args.json:
        _emit_json(
            {
                "word": format_word(word, loaded.automaton.alphabet),
                "coefficient": str(value),
            }
        )
    else:
        _emit(str(value))
    return 0


def cmd_run(args) -> int:
    loaded = load_path(args.automaton)
    limits = _limits(args)
    automaton = loaded.automaton
    alphabet = automaton.alphabet
    rows = []
    # walk the word tree level by level, reusing each word's predecessor state
    states: dict[tuple[str, ...], object] = {(): loaded.initial}
    for length in range(args.max_length + 1):
        for word in itertools.product(alphabet, repeat=length):
            limits.check_deadline()
            state = states.get(word)
            if state is None:
                prev = states[word[:-1]]
                if loaded.kind == "poly":
                    state = polyauto.delta_extend(automaton, word[-1], prev, limits)
                else:
                    state = termauto.p_extend(automaton, word[-1], prev, {})
                    limits.check_term_size(state.size)
                states[word] = state
            if loaded.kind == "poly":
                value = state.evaluate(automaton.output)
            else:
                value = termauto.output(automaton, state, {})
            rows.append((word, value))
    if args.json:
        _emit_json(
            {
                "max_length": args.max_length,
                "rows": [
                    {"word": format_word(w, alphabet), "coefficient": str(v)}
                    for w, v in rows
                ],
            }
        )
    else:
        for word, value in rows:
            _emit(f"{_show_word(word, alphabet)} {value}")
    return 0


def _as_poly_automaton(loaded: LoadedAutomaton):
    """Deciders need the polynomial model; term automata convert when special."""
    if loaded.kind == "poly":
        return loaded.automaton, loaded.initial
    automaton = polyauto.from_term_automaton(loaded.automaton)
    return automaton, normalize(loaded.initial)


def _certificate_json(cert, alphabet) -> dict:
    witness_word = None
    witness_value = None
    if cert.witness is not None:
        witness_word = format_word(cert.witness[0], alphabet)
        witness_value = str(cert.witness[1])
    return {
        "verdict": cert.verdict,
        "N": cert.stabilization_index,
        "witness_word": witness_word,
        "witness_value": witness_value,
        "words_checked": cert.words_checked,
        "generators": [
            {"word": format_word(word, alphabet), "poly": poly.text()}
            for word, poly in cert.generators_added
        ],
        "limits_hit": None,
    }


def _emit_certificate(cert, alphabet, json_mode: bool) -> None:
    if json_mode:
        _emit_json(_certificate_json(cert, alphabet))
        return
    _emit("YES" if cert.verdict else "NO")
    _emit(f"N = {cert.stabilization_index}")
    if cert.witness is not None:
        _emit(f"witness word = {_show_word(cert.witness[0], alphabet)}")
        _emit(f"witness value = {cert.witness[1]}")
    _emit(f"words checked = {cert.words_checked}")


def _initial_override(args, loaded: LoadedAutomaton) -> LoadedAutomaton:
    if getattr(args, "initial", None) is None:
        return loaded
    if loaded.kind == "poly":
        state = parse_poly(args.initial)
        used = set(state.variables())
        if state.constant_term != 0:
            raise DocumentError("initial: polynomial states must have no constant term")
    else:
        state = parse_term(args.initial)
        used = set(term_variables(state))
    foreign = used - set(loaded.automaton.variables)
    if foreign:
        raise DocumentError(f"initial: undeclared variable(s) {sorted(foreign)}")
    return LoadedAutomaton(loaded.kind, loaded.automaton, state)


def cmd_zeroness(args) -> int:
    loaded = _initial_override(args, load_path(args.automaton))
    automaton, initial = _as_poly_automaton(loaded)
    cert = polyauto.zeroness(
        automaton,
        initial,
        _limits(args),
        no_prune=args.no_prune,
        strict_initial=args.strict_initial,
    )
    _emit_certificate(cert, automaton.alphabet, args.json)
    return 0


def cmd_equiv(args) -> int:
    left = load_path(args.left)
    right = load_path(args.right)
    la, lp = _as_poly_automaton(left)
    ra, rp = _as_poly_automaton(right)
    cert = polyauto.equivalence(la, lp, ra, rp, _limits(args), no_prune=args.no_prune)
    _emit_certificate(cert, la.alphabet, args.json)
    return 0


def cmd_commutative(args) -> int:
    loaded = _initial_override(args, load_path(args.automaton))
    automaton, initial = _as_poly_automaton(loaded)
    report = polyauto.is_commutative(
        automaton, initial, _limits(args), no_prune=args.no_prune
    )
    alphabet = automaton.alphabet
    if args.json:
        out = {
            "commutative": report.commutative,
            "checks_run": report.checks_run,
            "failing_check": None,
            "witness_words": None,
            "witness_value": None,
            "certificate": None,
        }
        if not report.commutative:
            kind, letters = report.failing_check
            out["failing_check"] = {"kind": kind, "letters": list(letters)}
            out["witness_words"] = [
                format_word(w, alphabet) for w in report.witness_words
            ]
            out["witness_value"] = str(report.witness_value)
            out["certificate"] = _certificate_json(report.certificate, alphabet)
        _emit_json(out)
        return 0
    _emit("YES" if report.commutative else "NO")
    _emit(f"checks run = {report.checks_run}")
    if not report.commutative:
        kind, letters = report.failing_check
        _emit(f"failing check = {kind} ({', '.join(letters)})")
        u, v = report.witness_words
        _emit(
            f"witness words = {_show_word(u, alphabet)} vs {_show_word(v, alphabet)}"
        )
        _emit(f"witness value = {report.witness_value}")
    return 0


def cmd_reduce_eq2comm(args) -> int:
    loaded = _initial_override(args, load_path(args.automaton))
    automaton, initial = _as_poly_automaton(loaded)
    padded, padded_initial = polyauto.equivalence_to_commutativity(
        automaton, initial, (args.fresh_a, args.fresh_b)
    )
    _emit_json(dump_document(LoadedAutomaton("poly", padded, padded_initial)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pautomata",
        description="Analyse coinductive product rules and decide zeroness, "
        "equivalence, and commutativity of the automata they define.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def new(name: str, handler, help_text: str):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        p.set_defaults(handler=handler)
        return p

    p = new("check-rule", cmd_check_rule, "decide whether a rule is special")
    p.add_argument("--rule", required=True, help="expression or preset name")

    p = new("classify", cmd_classify, "extract the (alpha, beta, gamma) triple")
    p.add_argument("--rule", required=True)

    p = new("unit", cmd_unit, "the unit constant eta of a special rule")
    p.add_argument("--rule", required=True)

    p = new("coeff", cmd_coeff, "one series coefficient of an automaton")
    p.add_argument("--automaton", required=True, metavar="FILE")
    p.add_argument("--word", required=True, help='word; "" is the empty word')

    p = new("run", cmd_run, "dump coefficients of all words up to a length")
    p.add_argument("--automaton", required=True, metavar="FILE")
    p.add_argument("--max-length", type=_nonnegative_int, required=True)

    p = new("zeroness", cmd_zeroness, "decide whether the series is zero")
    p.add_argument("--automaton", required=True, metavar="FILE")
    p.add_argument("--initial", help="override the document's initial state")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--strict-initial", action="store_true")

    p = new("equiv", cmd_equiv, "decide equality of two recognised series")
    p.add_argument("--left", required=True, metavar="FILE")
    p.add_argument("--right", required=True, metavar="FILE")
    p.add_argument("--no-prune", action="store_true")

    p = new("commutative", cmd_commutative, "decide commutativity of the series")
    p.add_argument("--automaton", required=True, metavar="FILE")
    p.add_argument("--initial", help="override the document's initial state")
    p.add_argument("--no-prune", action="store_true")

    p = new(
        "reduce-eq2comm",
        cmd_reduce_eq2comm,
        "emit the automaton reducing zeroness to commutativity",
    )
    p.add_argument("--automaton", required=True, metavar="FILE")
    p.add_argument("--initial", help="override the document's initial state")
    p.add_argument("--fresh-a", default="#a")
    p.add_argument("--fresh-b", default="#b")

    return parser


def main(argv=None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")  # ε regardless of locale
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ExpressionError, DocumentError, ForeignVariableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
