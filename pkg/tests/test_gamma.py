"""Core group arithmetic, ordering, and the valuation maps.

Fixed expected values are derived by hand from the defining formulas
(lexicographic comparison, run-of-ones scans); the randomized laws are
cross-checked against brute-force oracles local to this file.
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from logcouple import gamma
from logcouple.gamma import (
    EQ,
    GT,
    INF,
    LT,
    ZERO,
    DomainError,
    ElementError,
    GammaElement,
    unit,
)


def elt(*pairs):
    return GammaElement(pairs)


def ones(n):
    # n ones: e0 + ... + e(n-1)
    return GammaElement((i, 1) for i in range(n))


coefficients = st.fractions(
    max_denominator=8, min_value=Fraction(-9), max_value=Fraction(9)
)
elements = st.builds(
    GammaElement,
    st.lists(st.tuples(st.integers(0, 12), coefficients), max_size=6),
)
nonzero_elements = elements.filter(bool)
positive_elements = nonzero_elements.map(lambda x: x if x > ZERO else -x)


# --- representation ---------------------------------------------------------------


def test_constructor_normalizes():
    assert elt((3, 1), (0, 2)).coords == ((0, Fraction(2)), (3, Fraction(1)))
    assert elt((1, Fraction(1, 2)), (1, Fraction(1, 2))) == unit(1)
    assert elt((4, 5), (4, -5)) == ZERO
    assert not ZERO
    assert elt((0, 1)) != INF


def test_constructor_rejects_bad_indices():
    with pytest.raises(ValueError):
        GammaElement([(-1, 1)])
    with pytest.raises(ValueError):
        GammaElement([("0", 1)])


def test_immutability_and_hash():
    a = elt((0, 1), (2, 3))
    with pytest.raises(AttributeError):
        a.coords = ()
    assert hash(a) == hash(elt((2, 3), (0, 1)))


# --- group operations -------------------------------------------------------------


def test_add_examples():
    assert gamma.add(unit(0), -unit(0)) == ZERO
    assert gamma.add(unit(1), unit(3)) == elt((1, 1), (3, 1))
    assert gamma.add(ones(2), elt((1, -1), (2, 2))) == elt((0, 1), (2, 2))
    assert gamma.add(unit(0), INF) == INF
    assert gamma.add(INF, INF) == INF


def test_negate_scale_examples():
    assert gamma.negate(ZERO) == ZERO
    assert gamma.scale(unit(2), Fraction(1, 3)) == elt((2, Fraction(1, 3)))
    assert gamma.scale(elt((0, 2), (1, -4)), Fraction(1, 2)) == elt((0, 1), (1, -2))
    assert gamma.scale(unit(5), 0) == ZERO
    assert gamma.negate(INF) == INF
    assert gamma.divide_by(elt((0, 3)), 3) == unit(0)
    with pytest.raises(ValueError):
        gamma.divide_by(unit(0), 0)


@given(elements, elements, elements)
def test_group_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a + ZERO == a
    assert a + (-a) == ZERO


@given(elements, st.integers(-6, 6), st.integers(-6, 6))
def test_scale_distributes(a, j, k):
    assert gamma.scale(a, j + k) == gamma.scale(a, j) + gamma.scale(a, k)


# --- ordering ---------------------------------------------------------------------


def test_compare_examples():
    assert gamma.compare(unit(0), unit(1)) == GT
    assert gamma.compare(unit(3), INF) == LT
    assert gamma.compare(elt((0, 1), (1, -5)), unit(0)) == LT
    assert gamma.compare(INF, INF) == EQ
    assert unit(1) < unit(0) < INF


@given(elements, elements)
def test_compare_trichotomy(a, b):
    results = [a < b, a == b, a > b]
    assert results.count(True) == 1
    assert (a < b) == (b > a)


@given(elements, elements, elements)
def test_order_translation_invariant(a, b, c):
    # the order is a group order: adding c preserves comparisons
    assert gamma.compare(a, b) == gamma.compare(a + c, b + c)


def test_positive_iff_leading_coefficient_positive():
    assert elt((2, Fraction(1, 9)), (0, 0)) > ZERO
    assert elt((1, -1), (2, 100)) < ZERO


# --- psi --------------------------------------------------------------------------


def test_psi_examples():
    assert gamma.psi(unit(1)) == ones(2)
    assert gamma.psi(ZERO) == INF
    assert gamma.psi(INF) == INF
    assert gamma.psi(elt((2, 5), (7, -3))) == ones(3)


def test_psi_element_and_level():
    assert gamma.psi_element(0) == unit(0)
    assert gamma.psi_element(2) == ones(3)
    assert gamma.psi_level(ones(3)) == 2
    assert gamma.psi_level(ZERO) is None
    assert gamma.psi_level(elt((0, 1), (1, 2))) is None
    assert gamma.psi_level(INF) is None
    with pytest.raises(ValueError):
        gamma.psi_element(-1)


@given(st.integers(0, 20), st.integers(0, 20))
def test_psi_element_order_matches_levels(m, n):
    cmp = gamma.compare(gamma.psi_element(m), gamma.psi_element(n))
    assert cmp == (LT if m < n else EQ if m == n else GT)


@given(nonzero_elements, st.integers(-3, 3).filter(bool))
def test_psi_scale_invariance(a, k):
    assert gamma.psi(gamma.scale(a, k)) == gamma.psi(a)


@given(nonzero_elements, nonzero_elements)
def test_psi_subadditive_and_antitone(a, b):
    if a + b != ZERO:
        assert gamma.compare(gamma.psi(a + b), min(gamma.psi(a), gamma.psi(b))) >= EQ
    x, y = abs_order(a), abs_order(b)
    if ZERO < x <= y:
        assert gamma.psi(x) >= gamma.psi(y)


def abs_order(a):
    return a if a > ZERO else -a


# --- integration and derivative ---------------------------------------------------


def test_integrate_examples():
    assert gamma.integrate(elt((0, 1), (1, 1), (2, 2))) == unit(2)
    assert gamma.integrate(ZERO) == -unit(0)
    assert gamma.integrate(unit(0)) == -unit(1)
    assert gamma.integrate(INF) == INF


def test_derivative_examples():
    assert gamma.derivative(-unit(0)) == ZERO
    assert gamma.derivative(INF) == INF
    assert gamma.derivative(ZERO) == INF
    assert gamma.derivative(unit(1)) == elt((0, 1), (1, 2))


@given(elements)
def test_derivative_inverts_integrate(a):
    assert gamma.derivative(gamma.integrate(a)) == a


@given(nonzero_elements)
def test_integrate_inverts_derivative(a):
    assert gamma.integrate(gamma.derivative(a)) == a


@given(nonzero_elements, nonzero_elements)
def test_derivative_strictly_monotone(a, b):
    if a < b:
        assert gamma.derivative(a) < gamma.derivative(b)


@given(nonzero_elements, nonzero_elements)
def test_ac3(a, b):
    if a > ZERO:
        assert gamma.derivative(a) > gamma.psi(b)


@given(nonzero_elements, nonzero_elements)
def test_valuation_refinement(a, b):
    if gamma.psi(a) < gamma.psi(b):
        assert gamma.psi(a + b) == gamma.psi(a)


# --- successor and predecessor ----------------------------------------------------


def test_successor_examples():
    assert gamma.successor(ZERO) == unit(0)
    assert gamma.successor(unit(0)) == ones(2)
    assert gamma.successor(elt((0, 1), (1, 1), (2, Fraction(1, 2)))) == ones(3)
    assert gamma.successor(INF) == INF


def test_predecessor_examples():
    assert gamma.predecessor(ones(2)) == unit(0)
    assert gamma.predecessor(unit(0)) == INF
    assert gamma.predecessor(unit(1)) == INF
    assert gamma.predecessor(ZERO) == INF
    assert gamma.predecessor(INF) == INF


@given(elements)
def test_successor_is_psi_of_integral(a):
    assert gamma.successor(a) == gamma.psi(gamma.integrate(a))


@given(st.integers(0, 15))
def test_successor_steps_levels_and_p_inverts(n):
    member = gamma.psi_element(n)
    assert gamma.successor(member) == gamma.psi_element(n + 1)
    assert gamma.predecessor(gamma.successor(member)) == member


@given(nonzero_elements)
def test_successor_strictly_above_hull_members(a):
    if gamma.in_conv_psi(a):
        assert gamma.successor(a) > a


# --- archimedean classes ----------------------------------------------------------


def test_arch_class_examples():
    assert gamma.arch_class_compare(unit(0), gamma.scale(unit(0), 7)) == EQ
    assert gamma.arch_class_compare(unit(2), unit(1)) == LT
    assert gamma.arch_class_compare(ZERO, unit(5)) == LT
    assert gamma.arch_class_compare(ZERO, ZERO) == EQ


@given(nonzero_elements, nonzero_elements)
def test_arch_class_matches_multiplier_oracle(a, b):
    # [a] < [b] iff n|a| < |b| for every n;
    # with finite support the comparison stabilizes immediately
    x, y = abs_order(a), abs_order(b)
    expected = all(gamma.scale(x, n) < y for n in range(1, 20))
    assert (gamma.arch_class_compare(a, b) == LT) == expected


# --- hull membership and successor-iteration dominance ----------------------------


def test_in_conv_psi_examples():
    assert gamma.in_conv_psi(unit(0))
    assert gamma.in_conv_psi(elt((0, 1), (1, 1), (2, Fraction(1, 2))))
    assert not gamma.in_conv_psi(gamma.scale(unit(0), 2))
    assert not gamma.in_conv_psi(ZERO)
    assert gamma.in_conv_psi(gamma.psi_element(4))


@given(elements)
def test_in_conv_psi_matches_bracketing_oracle(a):
    top = max(a.support, default=0) + 2
    expected = unit(0) <= a and a <= gamma.psi_element(top)
    assert gamma.in_conv_psi(a) == expected


def test_much_less_examples():
    b = elt((0, 1), (1, 1), (2, Fraction(1, 2)))
    assert gamma.much_less(unit(0), b) is False
    assert gamma.much_less(b, b) is False
    with pytest.raises(DomainError):
        gamma.much_less(ZERO, b)
    with pytest.raises(DomainError):
        gamma.much_less(b, gamma.scale(unit(0), 2))


def _hull_member(run, pivot, tail):
    head = tuple((i, 1) for i in range(run)) + ((run, pivot),)
    return GammaElement(head + tuple((run + off, q) for off, q in tail))


hull_members = st.one_of(
    st.builds(
        _hull_member,
        st.integers(1, 6),
        coefficients.filter(lambda q: q < 1),
        st.lists(st.tuples(st.integers(1, 5), coefficients), max_size=3),
    ),
    st.integers(0, 8).map(gamma.psi_element),
)


@given(hull_members, hull_members)
def test_much_less_matches_iteration_oracle(a, b):
    assert gamma.in_conv_psi(a) and gamma.in_conv_psi(b)
    cap = max(b.support, default=0) + 3
    iterate = gamma.successor(a)
    dominated = True
    for _ in range(cap):
        if not iterate < b:
            dominated = False
            break
        iterate = gamma.successor(iterate)
    assert gamma.much_less(a, b) == dominated
    assert gamma.much_less(a, b) is False  # psi-set members are cofinal here


# --- derivative membership predicates ---------------------------------------------


def test_derivative_membership_examples():
    assert gamma.in_positive_derivatives(gamma.derivative(unit(0)))
    assert not gamma.in_positive_derivatives(ZERO)
    assert gamma.in_negative_derivatives(ZERO)
    assert gamma.in_negative_derivatives(unit(0))  # its integral is -e1 < 0


@given(nonzero_elements)
def test_derivative_membership_tracks_sign(a):
    image = gamma.derivative(a)
    assert gamma.in_positive_derivatives(image) == (a > ZERO)
    assert gamma.in_negative_derivatives(image) == (a < ZERO)


# --- element text -----------------------------------------------------------------


def test_format_examples():
    assert gamma.format_element(ZERO) == "0"
    assert gamma.format_element(INF) == "inf"
    assert gamma.format_element(unit(0)) == "e0"
    assert (
        gamma.format_element(elt((0, Fraction(3, 2)), (3, -2), (7, 1)))
        == "3/2*e0 - 2*e3 + e7"
    )
    assert gamma.format_element(-unit(2)) == "-e2"
    assert gamma.format_element(elt((1, Fraction(-1, 4)))) == "-1/4*e1"


def test_parse_examples():
    assert gamma.parse_element("0") == ZERO
    assert gamma.parse_element("inf") == INF
    assert gamma.parse_element("3/2*e0 - 2*e3 + e7") == elt(
        (0, Fraction(3, 2)), (3, -2), (7, 1)
    )
    # leniency: any term order, duplicates summed
    assert gamma.parse_element("e3 + e0 - 1/2*e3") == elt((0, 1), (3, Fraction(1, 2)))
    assert gamma.parse_element("  e1+e2  ") == elt((1, 1), (2, 1))


@pytest.mark.parametrize(
    "text",
    ["", "+e0", "e-1", "1/0*e2", "e", "2*", "e1 e2", "0 + e1", "infx", "3*f1"],
)
def test_parse_rejections(text):
    with pytest.raises(ElementError):
        gamma.parse_element(text)


def test_parse_error_position():
    try:
        gamma.parse_element("e0 + e-1")
    except ElementError as exc:
        assert exc.position == 6
    else:
        pytest.fail("expected a parse error")


@given(elements)
def test_element_text_round_trip(a):
    assert gamma.parse_element(gamma.format_element(a)) == a


def test_repr_is_text_format():
    assert "e0" in repr(unit(0))
