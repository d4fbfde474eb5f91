"""Exact arithmetic for the value group of logarithmic transseries.

The group is the direct sum of countably many copies of Q, one per basis
vector ``e0, e1, e2, ...``, ordered lexicographically: an element is
positive iff its coefficient at the smallest supported index is positive.
Elements are immutable, finitely supported vectors with
``fractions.Fraction`` coefficients; all arithmetic is exact.

On top of the group live the maps that make it an asymptotic couple:

* ``psi``       sends a nonzero element with leading index n to the vector
                of n+1 ones (sum of e0..en); ``psi(0) = psi(inf) = inf``.
* ``integrate`` inverts asymptotic differentiation: find the least index n
                whose coefficient differs from 1, zero everything below n,
                and decrement the coefficient at n.
* ``derivative`` is ``a + psi(a)``, with ``derivative(0) = inf``.
* ``successor`` / ``predecessor`` walk the psi-set ``{1, 11, 111, ...}``.

``inf`` is a first-class absorbing default: every map sends it to itself
and addition with it yields it, so partial operations never raise.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

Rational = Union[int, Fraction]

LT, EQ, GT = -1, 0, 1


class Infinity:
    """Absorbing top element adjoined to the group (singleton ``INF``)."""

    _instance: Optional["Infinity"] = None

    def __new__(cls) -> "Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    def __hash__(self) -> int:
        return hash("logcouple.INF")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __neg__(self) -> "Infinity":
        return self

    def __add__(self, other: object) -> "Infinity":
        if isinstance(other, (Infinity, GammaElement)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __lt__(self, other: object) -> bool:
        if isinstance(other, (Infinity, GammaElement)):
            return False
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if isinstance(other, (Infinity, GammaElement)):
            return other is self
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if isinstance(other, (Infinity, GammaElement)):
            return other is not self
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if isinstance(other, (Infinity, GammaElement)):
            return True
        return NotImplemented


INF = Infinity()


class ElementError(ValueError):
    """Malformed element text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DomainError(ValueError):
    """Argument outside an operation's stated domain."""


class GammaElement:
    """A finitely supported rational vector, ordered lexicographically.

    The coordinate list is normalized on construction: duplicate indices
    are summed, zero coefficients dropped, entries sorted by index.
    Instances are immutable and hashable; ``==`` is exact equality.
    """

    __slots__ = ("_coords",)

    def __init__(self, coords: Iterable[Tuple[int, Rational]] = ()):
        acc: dict = {}
        for index, q in coords:
            if not isinstance(index, int) or index < 0:
                raise ValueError(f"basis index must be a nonnegative int, got {index!r}")
            q = Fraction(q)
            if index in acc:
                acc[index] += q
            else:
                acc[index] = q
        object.__setattr__(
            self,
            "_coords",
            tuple(sorted((i, q) for i, q in acc.items() if q != 0)),
        )

    @property
    def coords(self) -> Tuple[Tuple[int, Fraction], ...]:
        return self._coords

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self._coords)

    def coefficient(self, index: int) -> Fraction:
        for i, q in self._coords:
            if i == index:
                return q
            if i > index:
                break
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self._coords

    def __bool__(self) -> bool:
        return bool(self._coords)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("GammaElement is immutable")

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GammaElement):
            return self._coords == other._coords
        if isinstance(other, Infinity):
            return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coords)

    def __add__(self, other: object) -> "ExtendedElement":
        if isinstance(other, GammaElement):
            return GammaElement(self._coords + other._coords)
        if isinstance(other, Infinity):
            return INF
        return NotImplemented

    def __sub__(self, other: object) -> "GammaElement":
        if isinstance(other, GammaElement):
            return GammaElement(self._coords + tuple((i, -q) for i, q in other._coords))
        return NotImplemented

    def __neg__(self) -> "GammaElement":
        return GammaElement(tuple((i, -q) for i, q in self._coords))

    def __mul__(self, q: object) -> "GammaElement":
        if isinstance(q, (int, Fraction)):
            return scale(self, q)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, q: object) -> "GammaElement":
        if isinstance(q, (int, Fraction)) and q != 0:
            return scale(self, Fraction(1, 1) / q)
        return NotImplemented

    def _cmp(self, other: "GammaElement") -> int:
        a, b = self._coords, other._coords
        i = j = 0
        while i < len(a) and j < len(b):
            (ia, qa), (ib, qb) = a[i], b[j]
            if ia == ib:
                if qa != qb:
                    return GT if qa > qb else LT
                i += 1
                j += 1
            elif ia < ib:
                return GT if qa > 0 else LT
            else:
                return LT if qb > 0 else GT
        if i < len(a):
            return GT if a[i][1] > 0 else LT
        if j < len(b):
            return LT if b[j][1] > 0 else GT
        return EQ

    def __lt__(self, other: object) -> bool:
        if isinstance(other, GammaElement):
            return self._cmp(other) == LT
        if isinstance(other, Infinity):
            return True
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if isinstance(other, GammaElement):
            return self._cmp(other) != GT
        if isinstance(other, Infinity):
            return True
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if isinstance(other, GammaElement):
            return self._cmp(other) == GT
        if isinstance(other, Infinity):
            return False
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if isinstance(other, GammaElement):
            return self._cmp(other) != LT
        if isinstance(other, Infinity):
            return False
        return NotImplemented

    def __repr__(self) -> str:
        return format_element(self)


ExtendedElement = Union[GammaElement, Infinity]

ZERO = GammaElement()


def unit(index: int) -> GammaElement:
    """The basis vector ``e<index>``."""
    return GammaElement(((index, 1),))


def psi_element(level: int) -> GammaElement:
    """The psi-set member of the given level: the sum of ``e0 .. e<level>``.

    Level 0 is ``e0`` (one 1), level n is a vector of n+1 ones.  The map
    is order-preserving: higher level means longer run of ones, hence a
    strictly larger element.
    """
    if level < 0:
        raise ValueError(f"psi level must be >= 0, got {level}")
    return GammaElement(tuple((i, 1) for i in range(level + 1)))


def psi_level(x: ExtendedElement) -> Optional[int]:
    """Level n if ``x`` is exactly the vector of n+1 ones, else None."""
    if isinstance(x, Infinity):
        return None
    coords = x.coords
    if not coords:
        return None
    for pos, (i, q) in enumerate(coords):
        if i != pos or q != 1:
            return None
    return len(coords) - 1


def leading_index(a: GammaElement) -> Optional[int]:
    """Smallest supported index, or None for zero."""
    return a.coords[0][0] if a.coords else None


def first_non_one_index(a: GammaElement) -> int:
    """Least index whose coefficient differs from 1.

    Always defined: coefficients beyond the support are 0, so the scan
    terminates at ``max(support)+1`` at the latest.
    """
    expected = 0
    for i, q in a.coords:
        if i > expected:
            return expected
        if q != 1:
            return i
        expected = i + 1
    return expected


def compare(a: ExtendedElement, b: ExtendedElement) -> int:
    """Three-way comparison in the extended order; ``inf`` is the top."""
    a_inf = isinstance(a, Infinity)
    b_inf = isinstance(b, Infinity)
    if a_inf or b_inf:
        if a_inf and b_inf:
            return EQ
        return GT if a_inf else LT
    return a._cmp(b)


def add(a: ExtendedElement, b: ExtendedElement) -> ExtendedElement:
    if isinstance(a, Infinity) or isinstance(b, Infinity):
        return INF
    return a + b


def negate(a: ExtendedElement) -> ExtendedElement:
    return INF if isinstance(a, Infinity) else -a


def scale(a: ExtendedElement, q: Rational) -> ExtendedElement:
    """Scalar multiple ``q * a``; ``scale(inf, q) = inf`` for any q."""
    if isinstance(a, Infinity):
        return INF
    q = Fraction(q)
    if q == 0:
        return ZERO
    return GammaElement(tuple((i, c * q) for i, c in a.coords))


def divide_by(a: ExtendedElement, n: int) -> ExtendedElement:
    """Division by a positive integer (the language's delta_n family)."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"divisor must be a positive integer, got {n!r}")
    return scale(a, Fraction(1, n))


def psi(x: ExtendedElement) -> ExtendedElement:
    """Leading-index valuation: n+1 ones for leading index n; inf on 0, inf."""
    if isinstance(x, Infinity) or x.is_zero():
        return INF
    return psi_element(x.coords[0][0])


def integrate(x: ExtendedElement) -> ExtendedElement:
    """Asymptotic integral: right inverse of ``derivative`` on all of the group.

    Rule: let n be the least index with coefficient != 1; zero every
    coordinate below n, decrement the coordinate at n.  The result's
    leading coefficient is coefficient(n) - 1 != 0, so the integral is
    never zero, and ``derivative(integrate(x)) == x`` for every x.
    """
    if isinstance(x, Infinity):
        return INF
    n = first_non_one_index(x)
    head = ((n, x.coefficient(n) - 1),)
    tail = tuple((i, q) for i, q in x.coords if i > n)
    return GammaElement(head + tail)


def derivative(x: ExtendedElement) -> ExtendedElement:
    """Asymptotic derivative ``x + psi(x)``; sends 0 and inf to inf."""
    if isinstance(x, Infinity) or x.is_zero():
        return INF
    return x + psi(x)


def successor(x: ExtendedElement) -> ExtendedElement:
    """Next psi-set member strictly above ``psi(integrate(x))``'s argument.

    Equals ``psi(integrate(x))``: the run of ones below the first
    non-one coordinate determines the level.  ``successor(0)`` is the
    least psi-set member ``e0``; ``successor(inf) = inf``.
    """
    if isinstance(x, Infinity):
        return INF
    return psi_element(first_non_one_index(x))


def predecessor(x: ExtendedElement) -> ExtendedElement:
    """Step down the psi-set; ``inf`` whenever there is nothing below.

    Defined as the psi-set member of level n-1 when ``x`` is the psi-set
    member of level n >= 1; every other input (level 0, non-members,
    ``inf``) yields ``inf``.
    """
    if isinstance(x, Infinity):
        return INF
    level = psi_level(x)
    if level is None or level < 1:
        return INF
    return psi_element(level - 1)


def arch_class_compare(a: GammaElement, b: GammaElement) -> int:
    """Compare archimedean classes: [a] < [b] iff n|a| < |b| for all n.

    Classes are indexed by leading index, reversed: a smaller leading
    index dominates every element with a larger one.  The class of 0 is
    the minimum.
    """
    if a.is_zero() and b.is_zero():
        return EQ
    if a.is_zero():
        return LT
    if b.is_zero():
        return GT
    la, lb = a.coords[0][0], b.coords[0][0]
    if la == lb:
        return EQ
    return GT if la < lb else LT


def in_conv_psi(a: GammaElement) -> bool:
    """Membership in the convex hull of the psi-set.

    The hull is the set of elements lying between two psi-set members.
    Criterion: with k the least index whose coefficient differs from 1,
    ``a`` is in the hull iff k >= 1 and coefficient(k) < 1 (below the
    next longer run of ones, at or above ``e0``).
    """
    if a.is_zero():
        return False
    k = first_non_one_index(a)
    return k >= 1 and a.coefficient(k) < 1


def much_less(a: GammaElement, b: GammaElement) -> bool:
    """Successor-iteration dominance on the convex hull of the psi-set.

    ``a`` is much less than ``b`` iff every finite successor iterate
    s^n(a) (n >= 1) stays below ``b``.  Iterates are psi-set members of
    strictly increasing level, and every hull member sits below the
    psi-set member one level past its own run of ones, so the question
    is settled by the single iterate of level ``k_a + n0 - 1`` with
    ``n0 = max(1, k_b + 1 - k_a)``: if that iterate is below ``b`` all
    earlier ones are too, and all later ones are above psi-set members
    that already exceed ``b``.

    Both arguments must lie in the convex hull (DomainError otherwise).
    In this group the psi-set is cofinal in the hull, so the result is
    False for every valid input; the comparison is still performed.
    """
    if not in_conv_psi(a):
        raise DomainError(f"much_less: first argument not in conv(psi-set): {a!r}")
    if not in_conv_psi(b):
        raise DomainError(f"much_less: second argument not in conv(psi-set): {b!r}")
    ka = first_non_one_index(a)
    kb = first_non_one_index(b)
    n0 = max(1, kb + 1 - ka)
    return psi_element(ka + n0 - 1) < b


def in_positive_derivatives(a: GammaElement) -> bool:
    """Is ``a`` the derivative of some positive element?

    ``derivative`` is an order isomorphism from the nonzero elements
    onto the group, with inverse ``integrate``; membership reduces to
    ``integrate(a) > 0``.
    """
    return integrate(a) > ZERO


def in_negative_derivatives(a: GammaElement) -> bool:
    """Is ``a`` the derivative of some negative element?"""
    return integrate(a) < ZERO


# --- text format ------------------------------------------------------------
#
# element  := '0' | 'inf' | [sign] term (sign term)*
# term     := (rational '*')? 'e' digits
# rational := digits ('/' digits)?
# sign     := '+' | '-'
#
# The formatter is canonical: increasing index order, no zero terms,
# coefficient 1 elided, exactly one space around interior signs.  The
# parser accepts terms in any order and sums duplicates.


def format_element(x: ExtendedElement) -> str:
    if isinstance(x, Infinity):
        return "inf"
    if not x.coords:
        return "0"
    chunks = []
    for pos, (i, q) in enumerate(x.coords):
        mag = abs(q)
        body = f"e{i}" if mag == 1 else f"{mag}*e{i}"
        if pos == 0:
            chunks.append(body if q > 0 else f"-{body}")
        else:
            chunks.append(f" + {body}" if q > 0 else f" - {body}")
    return "".join(chunks)


def parse_element(text: str) -> ExtendedElement:
    """Parse the element text format; raises ElementError with a position."""
    s = text
    n = len(s)
    pos = 0

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and s[pos].isspace():
            pos += 1

    def read_digits(what: str) -> int:
        nonlocal pos
        start = pos
        while pos < n and s[pos].isdigit():
            pos += 1
        if pos == start:
            raise ElementError(f"expected {what}", start)
        return int(s[start:pos])

    skip_ws()
    if pos >= n:
        raise ElementError("empty element text", pos)

    if s.startswith("inf", pos):
        pos += 3
        skip_ws()
        if pos != n:
            raise ElementError("trailing input after 'inf'", pos)
        return INF

    # Standalone zero: a '0' not followed by a rational/term continuation.
    if s[pos] == "0":
        save = pos
        pos += 1
        skip_ws()
        if pos == n:
            return ZERO
        pos = save

    pairs = []
    first = True
    while True:
        skip_ws()
        sign = 1
        if pos < n and s[pos] in "+-":
            if first and s[pos] == "+":
                raise ElementError("unexpected leading '+'", pos)
            sign = -1 if s[pos] == "-" else 1
            pos += 1
            skip_ws()
        elif not first:
            raise ElementError("expected '+' or '-' between terms", pos)

        coeff = Fraction(1)
        if pos < n and s[pos].isdigit():
            num = read_digits("numerator digits")
            den = 1
            if pos < n and s[pos] == "/":
                pos += 1
                den = read_digits("denominator digits")
                if den == 0:
                    raise ElementError("zero denominator", pos - 1)
            coeff = Fraction(num, den)
            skip_ws()
            if pos >= n or s[pos] != "*":
                raise ElementError("expected '*' after coefficient", pos)
            pos += 1
            skip_ws()
        if pos >= n or s[pos] != "e":
            raise ElementError("expected basis vector 'e<index>'", pos)
        pos += 1
        index = read_digits("basis index digits")
        pairs.append((index, sign * coeff))
        first = False

        skip_ws()
        if pos >= n:
            break
        if s[pos] not in "+-":
            raise ElementError("expected '+' or '-' between terms", pos)
    return GammaElement(pairs)
