"""Coinductively defined series products and the automata they generate.

A product rule over x, xd, y, yd prescribes the derivative of a product of
two series; this package parses such rules, decides whether they yield a
commutative algebra (and extracts the simple (alpha, beta, gamma) shape and
unit constant when they do), runs the resulting automata over free terms or
constant-term-free polynomials, and decides zeroness, equivalence, and
commutativity of the recognised series by polynomial-ideal saturation over
exact rational arithmetic.
"""

from .errors import (
    DEFAULT_LIMITS,
    DocumentError,
    ExpressionError,
    ForeignVariableError,
    LetterCollisionError,
    LimitError,
    Limits,
    MismatchError,
    MissingVariableError,
    NonSpecialRuleError,
    PautomataError,
    PreconditionError,
)
from .exprs import parse_poly, parse_term
from .polyalg import (
    GroebnerBasis,
    Monomial,
    MonomialOrder,
    Poly,
    buchberger,
    extend_basis,
    ideal_equal,
    ideal_member,
    rational,
    reduce,
)
from .rules import (
    PRESETS,
    ProductRule,
    RULE_VARIABLES,
    SpecialityReport,
    check_reversal_commutation,
    check_special,
    classify_simple,
    ideal_compatible,
    make_rule,
    multiplicative_unit,
    parse_rule,
    rule_to_poly,
)
from .terms import Prod, Scale, Sum, Term, Var, ZERO, Zero, from_poly, normalize, to_text
from .termauto import TermAutomaton, antiderivative, closure_combine, p_extend
from .termauto import coefficient as term_coefficient
from .termauto import output as term_output
from .polyauto import (
    CommutativityReport,
    PolyAutomaton,
    ZeronessCertificate,
    delta_extend,
    equivalence,
    equivalence_to_commutativity,
    from_term_automaton,
    is_commutative,
    right_derivative_automaton,
    right_derivative_poly,
    zeroness,
)
from .polyauto import coefficient as poly_coefficient
from .jsondoc import LoadedAutomaton, dump_document, load_document, load_path

__version__ = "0.1.0"
