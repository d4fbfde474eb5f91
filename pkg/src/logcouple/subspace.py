"""Finitely generated Q-subspaces of the value group and their map images.

A subspace is kept in reduced row echelon form over ``Fraction``: pivot
columns strictly increasing, pivot coefficients 1, pivot columns cleared
in all other rows.  That normal form makes membership a reduction, the
psi-image the pivot set, and the successor-image an affine-slice
computation:

* ``psi`` of a nonzero member has the level of the least pivot carrying
  a nonzero coordinate, so the image over all nonzero members is exactly
  ``{PsiValue(p) : p pivot}``.
* ``successor`` of a member v has level k iff v is 1 at every coordinate
  below k and not 1 at k; level k is attained iff the affine slice
  ``{v in V : v_j = 1 for j < k}`` is nonempty and the k-th coordinate
  functional is not identically 1 on it.  Slices are decreasing in k and
  each attained level either cuts the slice dimension or empties it, so
  at most dim(V)+1 levels occur; candidates live in 0..max_support+1.
* ``predecessor`` maps the psi-set members inside V of level >= 1 down
  one level and everything else to inf.

No closure assumptions are made about the subspace.  Growth bounds that
hold for suitably closed subgroups can fail here for crafted generators
(e.g. spans of differences of consecutive psi-set members); see
``growth_check``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import gamma
from .gamma import ZERO, GammaElement


@dataclass(frozen=True)
class ImageReport:
    """Image of a unary map over a subspace, with one witness per level."""

    function: str
    levels: Tuple[int, ...]
    witnesses: Dict[int, GammaElement]

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "function": self.function,
            "levels": list(self.levels),
            "witnesses": {
                str(level): gamma.format_element(self.witnesses[level]) for level in self.levels
            },
        }


@dataclass(frozen=True)
class GrowthReport:
    """Image growth under a generator extension, checked against a bound."""

    function: str
    old_levels: Tuple[int, ...]
    new_levels: Tuple[int, ...]
    added_levels: Tuple[int, ...]
    new_generator_count: int
    bound: int
    passed: bool
    counterexample: Optional[Dict[str, object]] = None

    def to_json_dict(self) -> Dict[str, object]:
        payload: Dict[str, object] = {
            "function": self.function,
            "old_levels": list(self.old_levels),
            "new_levels": list(self.new_levels),
            "added_levels": list(self.added_levels),
            "new_generator_count": self.new_generator_count,
            "bound": self.bound,
            "passed": self.passed,
        }
        if self.counterexample is not None:
            payload["counterexample"] = self.counterexample
        return payload


class Subspace:
    """A finitely generated subspace in reduced row echelon form."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Tuple[GammaElement, ...]):
        # rows must already be in RREF; use echelonize() to build one.
        self._rows = rows

    @property
    def basis(self) -> Tuple[GammaElement, ...]:
        return self._rows

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(row.coords[0][0] for row in self._rows)

    @property
    def max_support(self) -> int:
        """Largest basis index touched; -1 for the zero subspace."""
        return max((row.coords[-1][0] for row in self._rows), default=-1)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Subspace):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"Subspace{list(self._rows)!r}"

    def reduce(self, x: GammaElement) -> GammaElement:
        """Residue of x after subtracting its projection onto the rows."""
        for row in self._rows:
            pivot = row.coords[0][0]
            c = x.coefficient(pivot)
            if c != 0:
                x = x - c * row
        return x

    def contains(self, x: GammaElement) -> bool:
        return self.reduce(x).is_zero()

    def member(self, coefficients: Sequence[Fraction]) -> GammaElement:
        """The combination sum(coefficients[i] * basis[i])."""
        if len(coefficients) != len(self._rows):
            raise ValueError("one coefficient per basis row required")
        acc = ZERO
        for c, row in zip(coefficients, self._rows):
            acc = acc + gamma.scale(row, c)
        return acc

    # --- images ---------------------------------------------------------

    def psi_image(self) -> ImageReport:
        """Levels of psi over the nonzero members: exactly the pivot set."""
        witnesses = {row.coords[0][0]: row for row in self._rows}
        return ImageReport("psi", self.pivots, witnesses)

    def s_image(self) -> ImageReport:
        """Levels of successor over all members, witnesses included."""
        levels: List[int] = []
        witnesses: Dict[int, GammaElement] = {}
        rows = self._rows
        r = len(rows)
        for k in range(0, self.max_support + 2):
            system = [[row.coefficient(j) for row in rows] for j in range(k)]
            solved = solve_affine(system, [Fraction(1)] * k, n_cols=r)
            if solved is None:
                break  # slices only shrink; all larger k are empty too
            particular, nullspace = solved
            at_k = [row.coefficient(k) for row in rows]
            c0 = sum((t * c for t, c in zip(particular, at_k)), Fraction(0))
            coeffs = particular
            if c0 == 1:
                for direction in nullspace:
                    d = sum((t * c for t, c in zip(direction, at_k)), Fraction(0))
                    if d != 0:
                        coeffs = [a + b for a, b in zip(particular, direction)]
                        break
                else:
                    continue  # coordinate k identically 1 on the slice
            witness = self.member(coeffs)
            if gamma.successor(witness) != gamma.psi_element(k):
                raise RuntimeError(f"successor image witness failed at level {k}: {witness!r}")
            levels.append(k)
            witnesses[k] = witness
        return ImageReport("s", tuple(levels), witnesses)

    def p_image(self) -> ImageReport:
        """Levels of predecessor over members, excluding the inf fiber."""
        levels: List[int] = []
        witnesses: Dict[int, GammaElement] = {}
        for n in range(0, self.max_support + 2):
            candidate = gamma.psi_element(n)
            if n >= 1 and self.contains(candidate):
                levels.append(n - 1)
                witnesses[n - 1] = candidate
        return ImageReport("p", tuple(levels), witnesses)

    def image(self, function: str) -> ImageReport:
        try:
            return {"psi": self.psi_image, "s": self.s_image, "p": self.p_image}[function]()
        except KeyError:
            raise ValueError(f"unknown image function {function!r}") from None


def echelonize(generators: Iterable[GammaElement]) -> Subspace:
    """Reduced row echelon form of the span of the generators.

    Deterministic: the RREF basis is a canonical form of the subspace,
    independent of generator order and redundancy.
    """
    rows: List[GammaElement] = []
    for gen in generators:
        if not isinstance(gen, GammaElement):
            raise TypeError(f"generators must be group elements, got {gen!r}")
        for row in rows:
            c = gen.coefficient(row.coords[0][0])
            if c != 0:
                gen = gen - c * row
        if gen.is_zero():
            continue
        lead_index, lead_coeff = gen.coords[0]
        gen = gamma.scale(gen, Fraction(1) / lead_coeff)
        rows = [row - row.coefficient(lead_index) * gen for row in rows]
        rows.append(gen)
        rows.sort(key=lambda row: row.coords[0][0])
    return Subspace(tuple(rows))


def solve_affine(
    matrix: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    n_cols: Optional[int] = None,
) -> Optional[Tuple[List[Fraction], List[List[Fraction]]]]:
    """Solve M t = rhs exactly over Q.

    Returns (particular solution, nullspace basis), or None when the
    system is inconsistent.  All arithmetic is Fraction.  ``n_cols``
    must be given when the system has zero equations (every unknown is
    then free).
    """
    n_rows = len(matrix)
    if n_cols is None:
        if not n_rows:
            raise ValueError("n_cols required for an empty system")
        n_cols = len(matrix[0])
    if any(len(row) != n_cols for row in matrix):
        raise ValueError("ragged matrix")
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    pivot_of_col: Dict[int, int] = {}
    row_idx = 0
    for col in range(n_cols):
        sel = None
        for r in range(row_idx, n_rows):
            if aug[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        aug[row_idx], aug[sel] = aug[sel], aug[row_idx]
        inv = Fraction(1) / aug[row_idx][col]
        aug[row_idx] = [v * inv for v in aug[row_idx]]
        for r in range(n_rows):
            if r != row_idx and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[row_idx])]
        pivot_of_col[col] = row_idx
        row_idx += 1
    for r in range(row_idx, n_rows):
        if aug[r][n_cols] != 0:
            return None
    particular = [Fraction(0)] * n_cols
    for col, r in pivot_of_col.items():
        particular[col] = aug[r][n_cols]
    free_cols = [c for c in range(n_cols) if c not in pivot_of_col]
    nullspace = []
    for free in free_cols:
        vec = [Fraction(0)] * n_cols
        vec[free] = Fraction(1)
        for col, r in pivot_of_col.items():
            vec[col] = -aug[r][free]
        nullspace.append(vec)
    return particular, nullspace


_GROWTH_BOUND = {"psi": lambda m: m, "s": lambda m: m + 1, "p": lambda m: m}


def growth_check(
    space: Subspace, new_generators: Sequence[GammaElement], function: str
) -> GrowthReport:
    """Image growth of psi/s/p when extending a subspace by new generators.

    Checks the growth of the level set against m, m+1, m respectively,
    where m counts the new generators not already in the subspace.  The
    psi bound is unconditional: image levels are pivot levels, and rank
    grows by at most m.  The s and p bounds mirror statements about
    subgroups closed under the successor map, and a finite-dimensional
    span need not behave like one:

    * the s bound fails when the base's unit-prefix chain stalls early
      (deficit = dim + 1 - |s-image| above 1, e.g. no support at
      coordinate 0) and the new generators unlock the stalled levels;
      growth <= m + deficit is the provable replacement;
    * the p bound fails when the base span contains differences of
      psi-set members without the members themselves and a new
      generator completes them.

    A failed check reports the violation with a counterexample bundle
    rather than raising.
    """
    if function not in _GROWTH_BOUND:
        raise ValueError(f"unknown image function {function!r}")
    if not new_generators:
        raise ValueError("at least one new generator required")
    m = sum(1 for g in new_generators if not space.contains(g))
    extended = echelonize(space.basis + tuple(new_generators))
    old_report = space.image(function)
    new_report = extended.image(function)
    added = tuple(sorted(set(new_report.levels) - set(old_report.levels)))
    bound = _GROWTH_BOUND[function](m)
    passed = len(added) <= bound
    counterexample = None
    if not passed:
        counterexample = {
            "old_basis": [gamma.format_element(row) for row in space.basis],
            "new_generators": [gamma.format_element(g) for g in new_generators],
            "extended_basis": [gamma.format_element(row) for row in extended.basis],
            "old_levels": list(old_report.levels),
            "new_levels": list(new_report.levels),
            "added_levels": list(added),
            "witnesses": {
                str(level): gamma.format_element(new_report.witnesses[level]) for level in added
            },
        }
    return GrowthReport(
        function,
        old_report.levels,
        new_report.levels,
        added,
        m,
        bound,
        passed,
        counterexample,
    )


def psi_independence_check(levels: Iterable[int]) -> bool:
    """Distinct psi-set members are linearly independent over Q.

    Computes the rank of the span of the requested members and compares
    it with the number of distinct levels.
    """
    distinct = sorted(set(levels))
    space = echelonize([gamma.psi_element(level) for level in distinct])
    return space.dim == len(distinct)


@dataclass(frozen=True)
class CombinationReport:
    """Successor of a rational combination of psi-set members vs. the rule.

    Rule: for alpha = sum q_j * PsiValue(l_j) with nonzero q_j and
    strictly increasing levels, successor(alpha) is the least psi-set
    member when sum(q_j) != 1, and the successor of the SMALLEST
    constituent when sum(q_j) == 1.
    """

    coefficients: Tuple[Fraction, ...]
    levels: Tuple[int, ...]
    alpha: GammaElement
    rule: str  # "sum=1" or "sum!=1"
    expected: GammaElement
    observed: GammaElement
    passed: bool

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "coefficients": [str(c) for c in self.coefficients],
            "levels": list(self.levels),
            "alpha": gamma.format_element(self.alpha),
            "rule": self.rule,
            "expected": gamma.format_element(self.expected),
            "observed": gamma.format_element(self.observed),
            "passed": self.passed,
        }


def combination_successor_check(
    coefficients: Sequence[Fraction], levels: Sequence[int]
) -> CombinationReport:
    """Check the successor rule for one combination of psi-set members."""
    coefficients = tuple(Fraction(c) for c in coefficients)
    levels = tuple(levels)
    if not coefficients or len(coefficients) != len(levels):
        raise ValueError("need matching nonempty coefficient and level sequences")
    if any(c == 0 for c in coefficients):
        raise ValueError("coefficients must be nonzero")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly increasing")
    alpha = ZERO
    for c, level in zip(coefficients, levels):
        alpha = alpha + gamma.scale(gamma.psi_element(level), c)
    if sum(coefficients) == 1:
        rule = "sum=1"
        expected = gamma.psi_element(levels[0] + 1)
    else:
        rule = "sum!=1"
        expected = gamma.psi_element(0)
    observed = gamma.successor(alpha)
    return CombinationReport(
        coefficients, levels, alpha, rule, expected, observed, observed == expected
    )
