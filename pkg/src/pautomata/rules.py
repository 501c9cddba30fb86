"""Product rules and their commutative-algebra classification.

A product rule is a term over the four reserved variables x, xd, y, yd,
where xd and yd stand for the one-step derivatives of the two operands.  It
prescribes how the derivative of a product is assembled from the operands
and their derivatives, and together with the constant-term rule it pins
down a unique binary operation on series.

The rule is *special* when three polynomial identities hold (additivity,
associativity, commutativity of the induced product, read off at the level
of the rule polynomial).  Special rules are exactly the simple ones:

    alpha*x*y + beta*(x*yd + xd*y) + gamma*xd*yd,
    with alpha*gamma = beta*(beta - 1),

and they admit a multiplicative unit exactly when (beta, gamma) != (0, 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import ForeignVariableError, NonSpecialRuleError, PreconditionError
from .exprs import parse_term
from .polyalg import Monomial, Poly, Q
from .terms import Prod, Term, Var, from_poly, normalize, p_extension, to_text, variables

RULE_VARIABLES = ("x", "xd", "y", "yd")

PRESETS: Mapping[str, str] = {
    "hadamard": "xd*yd",
    "shuffle": "xd*y + x*yd",
    "infiltration": "xd*y + x*yd + xd*yd",
    "trivial0": "0",
}

IDENTITY_NAMES = ("P-add", "P-assoc", "P-comm")

_X = Poly.variable("x")
_XD = Poly.variable("xd")
_Y = Poly.variable("y")
_YD = Poly.variable("yd")
_Z = Poly.variable("z")
_ZD = Poly.variable("zd")


def parse_rule(text: str) -> Term:
    """Parse a product-rule expression into a term, exactly as written.

    Only the reserved variables x, xd, y, yd may occur.
    """
    term = parse_term(text)
    foreign = variables(term) - set(RULE_VARIABLES)
    if foreign:
        raise ForeignVariableError(foreign, RULE_VARIABLES)
    return term


def rule_to_poly(term: Term) -> Poly:
    """The commutative-algebra normal form of a rule term.

    Two rules with the same normal form induce the same product whenever the
    rule is special; for non-special rules the source term stays relevant,
    which is why automata keep it.
    """
    return normalize(term)


@dataclass(frozen=True)
class SpecialityReport:
    """Outcome of the three identity checks plus the derived classification.

    `simple` is present iff all three identities hold; `unit_eta` is present
    iff additionally (beta, gamma) != (0, 0).  `failing_identity` holds the
    first nonzero difference polynomial.  `bilinear` and `assoc_identities`
    are diagnostics: the raw (alpha, beta1, beta2, gamma) reading of a
    bilinear rule and the four parameter identities that associativity
    imposes on it.
    """

    add_ok: bool
    assoc_ok: bool
    comm_ok: bool
    simple: tuple[Q, Q, Q] | None
    unit_eta: Q | None
    failing_identity: tuple[str, Poly] | None
    bilinear: tuple[Q, Q, Q, Q] | None
    assoc_identities: tuple[bool, bool, bool, bool] | None

    @property
    def is_special(self) -> bool:
        return self.simple is not None

    @property
    def failing_name(self) -> str | None:
        return None if self.failing_identity is None else self.failing_identity[0]


def _check_rule_poly(p: Poly) -> None:
    foreign = set(p.variables()) - set(RULE_VARIABLES)
    if foreign:
        raise ForeignVariableError(foreign, RULE_VARIABLES)
    if p.has_constant_term:
        raise PreconditionError("a product rule polynomial has no constant term")


def identity_differences(p: Poly) -> tuple[Poly, Poly, Poly]:
    """Difference polynomials of the three identities, in six variables.

    additivity:     P(x+y, xd+yd, z, zd) - P(x, xd, z, zd) - P(y, yd, z, zd)
    associativity:  P(x, xd, y*z, P(y, yd, z, zd)) - P(x*y, P(x, xd, y, yd), z, zd)
    commutativity:  P(x, xd, y, yd) - P(y, yd, x, xd)

    The second operand is renamed (y, yd) -> (z, zd) so each check is a plain
    polynomial equality.
    """
    _check_rule_poly(p)
    first_zz = p.substitute({"x": _X, "xd": _XD, "y": _Z, "yd": _ZD})
    second_zz = p.substitute({"x": _Y, "xd": _YD, "y": _Z, "yd": _ZD})
    add_lhs = p.substitute({"x": _X + _Y, "xd": _XD + _YD, "y": _Z, "yd": _ZD})
    add = add_lhs - first_zz - second_zz

    inner = second_zz  # P(y, yd, z, zd)
    assoc_lhs = p.substitute({"x": _X, "xd": _XD, "y": _Y * _Z, "yd": inner})
    assoc_rhs = p.substitute({"x": _X * _Y, "xd": p, "y": _Z, "yd": _ZD})
    assoc = assoc_lhs - assoc_rhs

    comm = p - p.substitute({"x": _Y, "xd": _YD, "y": _X, "yd": _XD})
    return add, assoc, comm


def bilinear_form(p: Poly) -> tuple[Q, Q, Q, Q] | None:
    """(alpha, beta1, beta2, gamma) when p is alpha*xy + beta1*x*yd + beta2*xd*y + gamma*xd*yd."""
    slots = {
        Monomial({"x": 1, "y": 1}): 0,
        Monomial({"x": 1, "yd": 1}): 1,
        Monomial({"xd": 1, "y": 1}): 2,
        Monomial({"xd": 1, "yd": 1}): 3,
    }
    coeffs = [Fraction(0)] * 4
    for m, c in p.terms.items():
        slot = slots.get(m)
        if slot is None:
            return None
        coeffs[slot] = c
    return tuple(coeffs)


def associativity_identities(quad: tuple[Q, Q, Q, Q]) -> tuple[bool, bool, bool, bool]:
    """The four parameter identities associativity forces on a bilinear rule."""
    alpha, beta1, beta2, gamma = quad
    return (
        alpha * (beta1 - beta2) == 0,
        gamma * (beta1 - beta2) == 0,
        alpha * gamma == beta1 * (beta1 - 1),
        alpha * gamma == beta2 * (beta2 - 1),
    )


def check_special(p: Poly) -> SpecialityReport:
    """Decide whether a rule polynomial is special and classify it.

    Each identity is tested as difference-polynomial-equals-zero; the first
    failing difference is kept as a witness.  When all three hold, the rule
    is guaranteed to be simple and the (alpha, beta, gamma) triple plus the
    unit constant are extracted.
    """
    add, assoc, comm = identity_differences(p)
    add_ok, assoc_ok, comm_ok = not add, not assoc, not comm
    failing = None
    for name, diff in zip(IDENTITY_NAMES, (add, assoc, comm)):
        if diff:
            failing = (name, diff)
            break

    quad = bilinear_form(p)
    assoc_ids = None if quad is None else associativity_identities(quad)

    simple = None
    eta = None
    if add_ok and assoc_ok and comm_ok:
        assert quad is not None, "special rule must be bilinear"
        alpha, beta1, beta2, gamma = quad
        assert beta1 == beta2, "special rule must be symmetric"
        assert alpha * gamma == beta1 * (beta1 - 1)
        simple = (alpha, beta1, gamma)
        eta = multiplicative_unit(simple)

    return SpecialityReport(
        add_ok=add_ok,
        assoc_ok=assoc_ok,
        comm_ok=comm_ok,
        simple=simple,
        unit_eta=eta,
        failing_identity=failing,
        bilinear=quad,
        assoc_identities=assoc_ids,
    )


def classify_simple(p: Poly) -> tuple[Q, Q, Q] | None:
    """The (alpha, beta, gamma) triple of a special rule, absent otherwise."""
    return check_special(p).simple


def multiplicative_unit(simple: tuple[Q, Q, Q]) -> Q | None:
    """The unit constant eta of a simple rule, absent when degenerate.

    The unit series is the one with constant term 1 whose every derivative
    is eta times itself; eta solves alpha + beta*eta = 0 and
    beta - 1 + gamma*eta = 0, which are compatible by the simplicity
    constraint.  Degenerate rules (beta = gamma = 0) have no unit at all.
    """
    alpha, beta, gamma = simple
    if alpha * gamma != beta * (beta - 1):
        raise PreconditionError("not a simple triple: alpha*gamma != beta*(beta-1)")
    if beta == 0 and gamma == 0:
        return None
    if beta != 0:
        eta = -alpha / beta
        if gamma != 0:
            assert beta - 1 + gamma * eta == 0
        return eta
    return -(beta - 1) / gamma


def ideal_compatible(p: Poly) -> bool:
    """True iff every monomial of p mentions y or yd.

    Equivalently, p lies in the ideal generated by y and yd.  This is what
    lets ideal chains absorb derivatives; it holds for every bilinear rule.
    """
    return all(
        m.exponent("y") > 0 or m.exponent("yd") > 0 for m in p.terms
    )


def check_reversal_commutation(p: Poly) -> bool:
    """Verify that one-step left and right extensions of x*y commute.

    Both derivative families satisfy the same rule, so the two compositions
    are expanded symbolically over the 8 formal variables
    {x, Lx, Rx, LRx, y, Ly, Ry, LRy} (with LRx standing for both application
    orders) and compared after normalisation.  Every special rule passes;
    the operation exists as a regression hook and refuses non-special rules,
    for which the identity has no stated meaning.
    """
    report = check_special(p)
    if not report.is_special:
        raise NonSpecialRuleError(
            "reversal commutation is only defined for special rules"
        )
    source = from_poly(p, RULE_VARIABLES)
    t = Prod(Var("x"), Var("y"))
    left_first = p_extension(source, {"x": Var("Lx"), "y": Var("Ly")}, t)
    side_lr = p_extension(
        source,
        {"x": Var("Rx"), "y": Var("Ry"), "Lx": Var("LRx"), "Ly": Var("LRy")},
        left_first,
    )
    right_first = p_extension(source, {"x": Var("Rx"), "y": Var("Ry")}, t)
    side_rl = p_extension(
        source,
        {"x": Var("Lx"), "y": Var("Ly"), "Rx": Var("LRx"), "Ry": Var("LRy")},
        right_first,
    )
    return normalize(side_lr) == normalize(side_rl)


@dataclass(frozen=True, eq=False)
class ProductRule:
    """A parsed product rule: source term, normal form, and classification."""

    source: Term
    normal_form: Poly
    speciality: SpecialityReport
    preset: str | None = None

    @property
    def is_special(self) -> bool:
        return self.speciality.is_special

    @property
    def simple(self) -> tuple[Q, Q, Q] | None:
        return self.speciality.simple

    @property
    def unit_eta(self) -> Q | None:
        return self.speciality.unit_eta

    def text(self) -> str:
        return self.preset if self.preset is not None else to_text(self.source)

    def __repr__(self):
        return f"ProductRule({self.text()!r})"


def make_rule(spec: str | Term) -> ProductRule:
    """Build a ProductRule from a preset name, expression text, or term."""
    preset = None
    if isinstance(spec, Term):
        term = spec
        foreign = variables(term) - set(RULE_VARIABLES)
        if foreign:
            raise ForeignVariableError(foreign, RULE_VARIABLES)
    else:
        if spec in PRESETS:
            preset = spec
            spec = PRESETS[spec]
        term = parse_rule(spec)
    nf = rule_to_poly(term)
    return ProductRule(term, nf, check_special(nf), preset)


def same_rule(a: ProductRule, b: ProductRule) -> bool:
    """Strict rule identity: equal source terms.

    Term automata combine states across automata, and for non-special rules
    the semantics depends on the written form of the rule, so the strict
    comparison is the safe one.
    """
    return a.source == b.source
