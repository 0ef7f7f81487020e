"""Unit and property tests for the exact polynomial layer."""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from slin import NEG_INF, Polynomial, SpaceMismatchError, lie_derivative

from helpers import P, space

XY = space("x1 x2")
XYZ = space("x1 x2 x3")


# --- addition ----------------------------------------------------------------


def test_add_cancels_opposite_terms():
    assert P("x1 + x2", XY) + P("-x1", XY) == P("x2", XY)


def test_add_zero_is_identity():
    p = P("3*x1^2 - 1/2*x2", XY)
    assert p + Polynomial.zero(XY) == p


def test_add_merges_disjoint_terms():
    result = P("x2^2", XY) + P("-2*x1*x2", XY)
    expected = P("x2^2 - 2*x1*x2", XY)
    assert result == expected
    # oracle: exact evaluation at rational points must agree with the sum
    points = [
        (Fraction(1, 3), Fraction(-2)),
        (Fraction(5, 7), Fraction(7, 5)),
        (Fraction(0), Fraction(11)),
        (Fraction(-9, 4), Fraction(2, 9)),
        (Fraction(13), Fraction(-1, 6)),
    ]
    for pt in points:
        lhs = P("x2^2", XY).evaluate_exact(pt) + P("-2*x1*x2", XY).evaluate_exact(pt)
        assert result.evaluate_exact(pt) == lhs


def test_add_rejects_space_mismatch():
    with pytest.raises(SpaceMismatchError):
        P("x1", XY) + P("x1", XYZ)


# --- multiplication ----------------------------------------------------------


def test_mul_constants():
    # the two weights on the v1 v2 v1 cycle multiply to a constant
    assert P("-1", XY) * P("1", XY) == P("-1", XY)


def test_mul_by_zero_annihilates():
    assert P("x1^3 - x2", XY) * Polynomial.zero(XY) == Polynomial.zero(XY)


def test_mul_monomials():
    assert P("x1", XY) * P("x2^2", XY) == P("x1*x2^2", XY)


def test_mul_degree_adds():
    a = P("x1^2 + 1", XY)
    b = P("x2^3 - x1", XY)
    assert (a * b).degree() == a.degree() + b.degree()
    assert (a * Polynomial.zero(XY)).degree() == NEG_INF


# --- differentiation ---------------------------------------------------------


def test_differentiate_quadratic():
    assert P("x2^2", XY).differentiate(1) == P("2*x2", XY)


def test_differentiate_mixed_term():
    assert P("x1*x2^2", XY).differentiate(0) == P("x2^2", XY)


def test_differentiate_constant_is_zero():
    assert P("42", XY).differentiate(0).is_zero()


def test_differentiate_index_out_of_range():
    with pytest.raises(IndexError):
        P("x1", XY).differentiate(2)


# --- substitution ------------------------------------------------------------


def test_substitute_new_coordinate():
    xw = space("x w")
    xy = space("x y")
    p = P("-x + w", xw)
    images = {0: P("x", xy), 1: P("y^2", xy)}
    assert p.substitute(images) == P("-x + y^2", xy)


def test_substitute_identity():
    p = P("x1^2*x2 - 7", XY)
    identity = {i: Polynomial.variable(XY, i) for i in range(2)}
    assert p.substitute(identity) == p


def test_substitute_zero_annihilates_factor():
    p = P("x1*x2^2 + x1", XY)  # x1 * (x2^2 + 1)
    images = {0: Polynomial.zero(XY), 1: P("x2", XY)}
    assert p.substitute(images).is_zero()


def test_substitute_missing_image():
    with pytest.raises(KeyError, match="x2"):
        P("x1*x2", XY).substitute({0: P("x1", XY)})


def test_substitute_mismatched_image_spaces():
    with pytest.raises(SpaceMismatchError):
        P("x1*x2", XY).substitute({0: P("x1", XY), 1: P("x1", XYZ)})


# --- evaluation --------------------------------------------------------------


def test_evaluate_square():
    assert P("x2^2", XY).evaluate((0.0, 3.0)) == 9.0


def test_evaluate_zero_polynomial():
    assert Polynomial.zero(XY).evaluate((123.0, -5.0)) == 0.0


def test_evaluate_mixed_term():
    # 2 * 3^2 = 18, cross-checked exactly
    assert P("x1*x2^2", XY).evaluate((2.0, 3.0)) == 18.0
    assert P("x1*x2^2", XY).evaluate_exact((2, 3)) == 18


def test_evaluate_length_mismatch():
    with pytest.raises(ValueError):
        P("x1", XY).evaluate((1.0,))


# --- Lie derivative ----------------------------------------------------------


def test_lie_derivative_decay_square():
    y = space("y")
    field = [P("-y", y)]
    assert lie_derivative(P("y^2", y), field) == P("-2*y^2", y)


def test_lie_derivative_oscillator_square():
    field = [P("x2", XY), P("-x1", XY)]
    assert lie_derivative(P("x2^2", XY), field) == P("-2*x1*x2", XY)


def test_lie_derivative_of_constant():
    field = [P("x2", XY), P("-x1", XY)]
    assert lie_derivative(P("5", XY), field).is_zero()


def test_lie_derivative_field_length_mismatch():
    with pytest.raises(ValueError):
        lie_derivative(P("x1", XY), [P("x1", XY)])


# --- degree sentinel and rendering -------------------------------------------


def test_zero_degree_sentinel():
    z = Polynomial.zero(XY)
    assert z.degree() == NEG_INF
    assert z.degree() + 5 == NEG_INF  # degree arithmetic stays total


def test_render_graded_lex_descending():
    assert P("-7*x1*x2^2 + 2*x1^3", XY).render() == "2*x1^3 - 7*x1*x2^2"
    assert P("x2^2 + x1^2 + x1*x2", XY).render() == "x1^2 + x1*x2 + x2^2"


def test_render_rational_coefficients():
    sp = space("p4")
    assert P("1485/2*p4", sp).render() == "1485/2*p4"
    assert P("-p4", sp).render() == "-p4"
    assert Polynomial.zero(sp).render() == "0"
    assert P("0 - 3", sp).render() == "-3"


def test_render_parses_back():
    p = P("2*x1^3 - 7*x1*x2^2 + 1/3*x2 - 4", XY)
    assert P(p.render(), XY) == p


# --- properties --------------------------------------------------------------

MONOS_3 = [
    m for m in product(range(5), repeat=3) if sum(m) <= 4
]

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def polys(sp=XYZ, monos=MONOS_3):
    return st.dictionaries(st.sampled_from(monos), coeffs, max_size=5).map(
        lambda d: Polynomial(sp, d)
    )


@given(polys(), polys(), coeffs, coeffs)
def test_differentiate_is_linear(p, q, a, b):
    for i in range(3):
        lhs = (p * a + q * b).differentiate(i)
        rhs = p.differentiate(i) * a + q.differentiate(i) * b
        assert lhs == rhs


@given(polys(), polys())
def test_differentiate_leibniz(p, q):
    for i in range(3):
        lhs = (p * q).differentiate(i)
        rhs = p.differentiate(i) * q + p * q.differentiate(i)
        assert lhs == rhs


@given(polys(), polys(), st.lists(polys(), min_size=3, max_size=3), coeffs, coeffs)
def test_lie_derivative_linear_in_argument(p, q, field, a, b):
    lhs = lie_derivative(p * a + q * b, field)
    rhs = lie_derivative(p, field) * a + lie_derivative(q, field) * b
    assert lhs == rhs


@given(polys(), st.lists(polys(), min_size=3, max_size=3), st.lists(polys(), min_size=3, max_size=3))
def test_lie_derivative_additive_in_field(p, f, g):
    fg = [a + b for a, b in zip(f, g)]
    assert lie_derivative(p, fg) == lie_derivative(p, f) + lie_derivative(p, g)


AFFINE_MONOS = [m for m in product(range(2), repeat=3) if sum(m) <= 1]


@given(polys(), st.lists(polys(monos=AFFINE_MONOS), min_size=3, max_size=3))
def test_affine_field_never_raises_degree(p, affine_field):
    derived = lie_derivative(p, affine_field)
    assert derived.degree() <= p.degree()


@given(polys(sp=XY, monos=[m for m in product(range(3), repeat=2) if sum(m) <= 3]))
@settings(max_examples=50)
def test_substitute_respects_composition(p):
    # sigma: XY -> XYZ, tau: XYZ -> XY
    sigma = {0: P("x1 + x3", XYZ), 1: P("x2*x3", XYZ)}
    tau = {0: P("x2", XY), 1: P("x1 - 1", XY), 2: P("x1*x2", XY)}
    once = p.substitute(sigma).substitute(tau)
    composed = {i: sigma[i].substitute(tau) for i in sigma}
    assert once == p.substitute(composed, target=XY)


exact_points = st.integers(min_value=-8000, max_value=8000).map(
    lambda k: Fraction(k, 8)
)
exact_coeffs = st.integers(min_value=-8000, max_value=8000).map(
    lambda k: Fraction(k, 8)
)


@given(
    st.dictionaries(
        st.sampled_from([m for m in product(range(3), repeat=2) if sum(m) <= 3]),
        exact_coeffs,
        max_size=4,
    ),
    st.tuples(exact_points, exact_points),
)
def test_evaluate_matches_exact_rational(terms, point):
    p = Polynomial(XY, terms)
    exact = p.evaluate_exact(point)
    # keep the instance well conditioned: skip near-total cancellations,
    # where no double-precision sum could meet a relative bound
    magnitude = sum(
        abs(c) * abs(point[0]) ** m[0] * abs(point[1]) ** m[1]
        for m, c in p.terms.items()
    )
    assume(magnitude == 0 or abs(exact) >= magnitude / 10**6)
    approx = p.evaluate([float(point[0]), float(point[1])])
    assert abs(approx - float(exact)) <= 1e-12 * max(1.0, abs(float(exact)))


def test_immutability():
    p = P("x1", XY)
    with pytest.raises(AttributeError):
        p.terms = {}
