"""Acceptance suite: every criterion the build must meet, with its budget.

Each test prints one summary line on success; all values are exact
rationals, so every comparison below is equality, never a tolerance.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

from pautomata import (
    Monomial,
    MonomialOrder,
    Poly,
    PolyAutomaton,
    buchberger,
    delta_extend,
    equivalence,
    equivalence_to_commutativity,
    ideal_member,
    is_commutative,
    make_rule,
    parse_poly,
    poly_coefficient,
    zeroness,
)
from pautomata.cli import main
from pautomata.polyauto import extend_poly
from helpers import (
    NOTABLE,
    random_poly,
    random_poly0,
    random_poly_automaton,
    random_simple_triple,
    simple_rule_poly,
    words_up_to,
)
from oracle import random_series, rule_product

P = parse_poly


def poly_automaton(rule_name, alphabet, variables, output, transitions):
    return PolyAutomaton(
        tuple(alphabet),
        tuple(variables),
        make_rule(rule_name),
        {v: Fraction(c) for v, c in output.items()},
        {a: {v: P(t) for v, t in row.items()} for a, row in transitions.items()},
    )


def timed(budget_seconds):
    start = time.perf_counter()

    def check(label):
        elapsed = time.perf_counter() - start
        assert elapsed < budget_seconds, f"{label}: {elapsed:.2f}s over budget"
        return elapsed

    return check


def test_criterion_01_notable_rule_table(capsys):
    check = timed(1.0)
    expected = {
        "hadamard": "simple: (0, 0, 1); unit eta = 1",
        "shuffle": "simple: (0, 1, 0); unit eta = 0",
        "infiltration": "simple: (0, 1, 1); unit eta = 0",
    }
    for name, line in expected.items():
        code = main(["classify", "--rule", name])
        out = capsys.readouterr().out
        assert code == 0 and out == line + "\n", (name, out)
    elapsed = check("classify table")
    print(f"\n[acceptance 1] PASS notable-rule table exact ({elapsed:.3f}s)")


def test_criterion_02_characterisation_negatives(capsys):
    from pautomata import check_special

    check = timed(1.0)
    for text in ("xd*y", "x*yd"):
        code = main(["check-rule", "--rule", text])
        out = capsys.readouterr().out
        assert code == 0 and out == "special: no; failing: P-comm\n"
        report = check_special(P(text))
        name, witness = report.failing_identity
        assert name == "P-comm" and witness != Poly.zero()
    code = main(["check-rule", "--rule", "x*y + xd*yd"])
    out = capsys.readouterr().out
    assert code == 0 and out == "special: no; failing: P-assoc\n"
    report = check_special(P("x*y + xd*yd"))
    name, witness = report.failing_identity
    assert name == "P-assoc" and witness != Poly.zero()
    elapsed = check("negative cases")
    print(f"\n[acceptance 2] PASS characterisation negatives with nonzero witnesses ({elapsed:.3f}s)")


def test_criterion_03_paper_coefficient_values():
    check = timed(5.0)
    fib = poly_automaton(
        "shuffle", "a", ("x", "y"), {"x": 0, "y": 1}, {"a": {"x": "x + y", "y": "x"}}
    )
    want = [0, 1]
    while len(want) <= 20:
        want.append(want[-1] + want[-2])
    for n in range(21):
        assert poly_coefficient(fib, P("x"), ("a",) * n) == want[n]

    double_exp = poly_automaton("hadamard", "a", ("x",), {"x": 2}, {"a": {"x": "x^2"}})
    for n in range(5):
        assert poly_coefficient(double_exp, P("x"), ("a",) * n) == 2 ** (2**n)

    factorial = poly_automaton("shuffle", "a", ("x",), {"x": 1}, {"a": {"x": "x^2"}})
    for n in range(9):
        assert poly_coefficient(factorial, P("x"), ("a",) * n) == math.factorial(n)

    state = P("x")
    for n in range(1, 9):
        state = delta_extend(factorial, "a", state)
        assert state == Poly.term(Monomial({"x": n + 1}), math.factorial(n))
    elapsed = check("paper values")
    print(f"\n[acceptance 3] PASS fibonacci/2^2^n/factorial values exact ({elapsed:.3f}s)")


def test_criterion_04_zeroness_equivalence_desk_scale():
    square = poly_automaton("shuffle", "a", ("x",), {"x": 1}, {"a": {"x": "x"}})
    double = poly_automaton("shuffle", "a", ("y",), {"y": 1}, {"a": {"y": "2*y"}})
    check = timed(5.0)
    cert = equivalence(square, P("x^2"), double, P("y"))
    first = check("equivalence call")
    assert cert.verdict is True
    for n in range(11):
        assert poly_coefficient(square, P("x^2"), ("a",) * n) == 2**n
        assert poly_coefficient(double, P("y"), ("a",) * n) == 2**n

    check2 = timed(5.0)
    hadamard_zero = poly_automaton("hadamard", "a", ("x",), {"x": 0}, {"a": {"x": "x^2"}})
    cert2 = zeroness(hadamard_zero, P("x"))
    second = check2("zeroness call")
    assert cert2.verdict is True and cert2.stabilization_index == 0
    print(
        f"\n[acceptance 4] PASS 2^n equivalence (cross-checked to length 10) and "
        f"N=0 stabilisation ({first:.3f}s / {second:.3f}s)"
    )


def test_criterion_05_bac_property_suite():
    rng = random.Random(5)
    for name in NOTABLE:
        source = make_rule(name).source
        for _ in range(20):
            f = random_series(rng, ("a", "b"), 4)
            g = random_series(rng, ("a", "b"), 4)
            h = random_series(rng, ("a", "b"), 4)
            assert rule_product(source, f + g, h) == rule_product(
                source, f, h
            ) + rule_product(source, g, h)
            c = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            assert rule_product(source, f.scale(c), h) == rule_product(
                source, f, h
            ).scale(c)
            assert rule_product(source, f, rule_product(source, g, h)) == rule_product(
                source, rule_product(source, f, g), h
            )
            assert rule_product(source, f, g) == rule_product(source, g, f)
    print("\n[acceptance 5] PASS bilinearity/associativity/commutativity on 20 random tables per notable rule")


def test_criterion_06_invariance_extension_suite():
    rng = random.Random(6)
    count = 0
    while count < 200:
        name = rng.choice(NOTABLE + ("random-simple",))
        if name == "random-simple":
            rule_poly = simple_rule_poly(*random_simple_triple(rng))
        else:
            rule_poly = make_rule(name).normal_form
        variables = ("u", "v")
        derivatives = {v: random_poly0(rng, variables, max_degree=2) for v in variables}
        alpha = random_poly0(rng, variables, max_degree=2)
        beta = random_poly0(rng, variables, max_degree=2)
        if not alpha or not beta:
            continue
        count += 1
        ext = lambda p, pivot="first": extend_poly(  # noqa: E731
            rule_poly, variables, derivatives, p, pivot=pivot
        )
        product_route = rule_poly.substitute(
            {"x": alpha, "xd": ext(alpha), "y": beta, "yd": ext(beta)}
        )
        assert ext(alpha * beta) == product_route
        assert ext(alpha * beta, "last") == ext(alpha * beta, "first")
    print("\n[acceptance 6] PASS extension product law and pivot independence on 200 random triples")


def test_criterion_07_commutativity_suite():
    check = timed(30.0)
    counting = poly_automaton(
        "shuffle", "ab", ("x",), {"x": 1}, {"a": {"x": "x"}, "b": {"x": "2*x"}}
    )
    assert is_commutative(counting, P("x")).commutative is True

    gadget = poly_automaton(
        "shuffle",
        "ab",
        ("x", "y", "z"),
        {"x": 0, "y": 0, "z": 1},
        {"a": {"x": "y", "y": "0", "z": "0"}, "b": {"x": "0", "y": "z", "z": "0"}},
    )
    report = is_commutative(gadget, P("x"))
    assert report.commutative is False
    assert report.witness_words == (("a", "b"), ("b", "a"))

    rng = random.Random(7)
    for _ in range(10):
        auto = random_poly_automaton(
            rng, "shuffle", alphabet=("a",), nvars=2, max_degree=2, max_terms=2
        )
        p = random_poly0(rng, auto.variables, max_degree=2)
        padded, start = equivalence_to_commutativity(auto, p)
        assert is_commutative(padded, start).commutative == zeroness(auto, p).verdict
    elapsed = check("commutativity suite")
    print(f"\n[acceptance 7] PASS commutativity checks and 10 reduction round-trips ({elapsed:.3f}s)")


def test_criterion_08_right_derivative_adjunction():
    from pautomata import right_derivative_automaton, right_derivative_poly

    rng = random.Random(8)
    done = 0
    while done < 50:
        name = rng.choice(NOTABLE)
        auto = random_poly_automaton(
            rng, name, alphabet=("a", "b"), nvars=2, max_degree=2, max_terms=2
        )
        p = random_poly0(rng, auto.variables, max_degree=2)
        word = tuple(rng.choice(auto.alphabet) for _ in range(rng.randint(0, 3)))
        letter = rng.choice(auto.alphabet)
        closed, renaming = right_derivative_automaton(auto, letter)
        dp = right_derivative_poly(auto, renaming, p)
        assert poly_coefficient(closed, dp, word) == poly_coefficient(
            auto, p, word + (letter,)
        )
        done += 1
    print("\n[acceptance 8] PASS right-derivative adjunction on 50 random instances")


def test_criterion_09_unit_law():
    rng = random.Random(9)
    for name in NOTABLE:
        rule = make_rule(name)
        eta = rule.unit_eta
        assert eta is not None
        for _ in range(10):
            auto = random_poly_automaton(
                rng, name, alphabet=("a", "b"), nvars=2, max_degree=2, max_terms=2
            )
            extended = PolyAutomaton(
                auto.alphabet,
                auto.variables + ("e",),
                rule,
                {**auto.output, "e": Fraction(1)},
                {
                    a: {**auto.transitions[a], "e": Poly.variable("e").scale(eta)}
                    for a in auto.alphabet
                },
            )
            p = random_poly0(rng, auto.variables, max_degree=2)
            for w in words_up_to("ab", 4):
                assert poly_coefficient(
                    extended, p * Poly.variable("e"), w
                ) == poly_coefficient(auto, p, w)
    print("\n[acceptance 9] PASS unit series is neutral for each nondegenerate notable rule")


def test_criterion_10_groebner_kernel_oracle():
    rng = random.Random(10)
    variables = ("x", "y", "z")
    member_order = MonomialOrder(variables + ("w",))
    for _ in range(100):
        gens = [random_poly0(rng, variables, max_degree=3, max_terms=3) for _ in range(3)]
        gens = [g for g in gens if g]
        if not gens:
            continue
        basis = buchberger(gens, member_order)
        # idempotence of the reduced basis
        assert buchberger(basis.generators, member_order).generators == basis.generators
        combination = Poly.zero()
        for g in gens:
            combination = combination + random_poly(rng, variables, max_degree=2) * g
        assert ideal_member(combination, basis)
        # every generator kills the origin, so anything with a bare fresh
        # variable w stays outside the ideal
        outsider = Poly.variable("w") + random_poly0(rng, variables, max_degree=2)
        assert not ideal_member(outsider, basis)
    print("\n[acceptance 10] PASS 100 membership instances and reduced-basis idempotence")
