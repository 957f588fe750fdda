"""Certified real arithmetic for circle-rotation computations.

A :class:`CertifiedReal` is a rational-affine combination of irrational-by-kind
atoms: square roots of non-square integers and "qtree" reals (binary digit
sums whose digit positions are perfect squares, built from paths through the
labeled binary tree).  Every value can be queried to any precision with a
certified error bound, and every value supports:

* refinement comparison: ``compare`` certifies strict order or reports
  ``UNRESOLVED`` (equality is semi-decidable and is never claimed);
* exact sign determination where the representation allows it (rational,
  dyadic digit sums, a single square-root atom, or any mix thereof), used
  internally so that canonicalization and deduplication never guess.

Values are immutable and hashable; structural equality means "same symbolic
form".  Caches are idempotent, so concurrent readers are safe.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import UnresolvedComparison

#: Default cap (in bits) for refinement comparisons.
DEFAULT_PRECISION_CAP = 1024


# ---------------------------------------------------------------------------
# Atoms


@dataclass(frozen=True)
class SqrtAtom:
    """sqrt(d) for a squarefree integer d >= 2."""

    d: int

    def __str__(self) -> str:
        return f"sqrt{self.d}"


@dataclass(frozen=True)
class QtreeAtom:
    """A finite dyadic digit sum sum(2**-p for p in positions).

    ``positions`` is a strictly increasing tuple of positive integers; for
    tree-path reals they are the squares (label+1)**2 of node labels along a
    path of the breadth-first-labeled binary tree.
    """

    positions: tuple[int, ...]
    path: tuple[int, ...] | None = field(default=None, compare=False)

    def __str__(self) -> str:
        if self.path is not None:
            return "qtree:" + "".join(str(b) for b in self.path)
        return "qtree" + repr(list(self.positions))


Atom = Union[SqrtAtom, QtreeAtom]


def _atom_key(atom: Atom) -> tuple:
    if isinstance(atom, SqrtAtom):
        return (0, atom.d)
    return (1, atom.positions)


def _squarefree_split(d: int) -> tuple[int, int]:
    """d = s*s*d0 with d0 squarefree; returns (s, d0)."""
    s, d0, f = 1, d, 2
    while f * f <= d0:
        while d0 % (f * f) == 0:
            d0 //= f * f
            s *= f
        f += 1
    return s, d0


@lru_cache(maxsize=None)
def _qtree_scaled(atom: QtreeAtom) -> tuple[int, int]:
    """(numerator, shift): value == numerator / 2**shift, exactly."""
    top = atom.positions[-1]
    num = sum(1 << (top - p) for p in atom.positions)
    return num, top


@lru_cache(maxsize=None)
def _qtree_exact(atom: QtreeAtom) -> Fraction:
    num, shift = _qtree_scaled(atom)
    return Fraction(num, 1 << shift)


def _atom_floor_scaled(atom: Atom, p: int) -> int:
    """floor(value * 2**p); the truncation error is < 2**-p on the value."""
    if isinstance(atom, SqrtAtom):
        return math.isqrt(atom.d << (2 * p))
    return sum(1 << (p - pos) for pos in atom.positions if pos <= p)


# ---------------------------------------------------------------------------
# Linear forms


class Comparison(enum.Enum):
    """Outcome of a certified comparison.

    LESS / GREATER are certified strict orders.  UNRESOLVED signals possible
    equality: no refinement up to the precision cap separated the values.
    """

    LESS = "less"
    GREATER = "greater"
    UNRESOLVED = "unresolved-at-precision"


@dataclass(frozen=True)
class CertifiedReal:
    """const + sum(coeff * atom), with Fraction const and coefficients.

    Terms are normalized: sorted by atom, zero coefficients dropped.  Use the
    module constructors (:func:`rational`, :func:`sqrt`, :func:`qtree_reals`)
    rather than building instances directly.
    """

    const: Fraction
    terms: tuple[tuple[Atom, Fraction], ...] = ()

    # -- construction helpers

    @staticmethod
    def _make(const: Fraction, terms: Iterable[tuple[Atom, Fraction]]) -> "CertifiedReal":
        merged: dict[Atom, Fraction] = {}
        for atom, coeff in terms:
            merged[atom] = merged.get(atom, Fraction(0)) + coeff
        cleaned = tuple(
            sorted(((a, c) for a, c in merged.items() if c != 0), key=lambda t: _atom_key(t[0]))
        )
        return CertifiedReal(const, cleaned)

    # -- arithmetic (affine algebra only; products of irrationals never arise)

    def __add__(self, other) -> "CertifiedReal":
        other = as_real(other)
        return CertifiedReal._make(self.const + other.const, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "CertifiedReal":
        return CertifiedReal(-self.const, tuple((a, -c) for a, c in self.terms))

    def __sub__(self, other) -> "CertifiedReal":
        return self + (-as_real(other))

    def __rsub__(self, other) -> "CertifiedReal":
        return as_real(other) + (-self)

    def __mul__(self, other) -> "CertifiedReal":
        if not isinstance(other, (int, Fraction, Rational)):
            return NotImplemented
        q = Fraction(other)
        return CertifiedReal(self.const * q, tuple((a, c * q) for a, c in self.terms))

    __rmul__ = __mul__

    # -- kind

    @property
    def is_rational_kind(self) -> bool:
        return not self.terms

    @property
    def kind(self) -> str:
        if not self.terms:
            return "rational"
        kinds = {type(a).__name__ for a, _ in self.terms}
        if kinds == {"SqrtAtom"}:
            return "quadratic"
        if kinds == {"QtreeAtom"}:
            return "qtree"
        return "mixed"

    # -- approximation

    def approx(self, p: int) -> Fraction:
        """A rational within 2**-p of the value."""
        n = len(self.terms)
        if n == 0:
            return self.const
        total = self.const
        for atom, coeff in self.terms:
            # per-term budget 2**-(p+1)/n scaled by |coeff|
            extra = max(0, (n * max(1, abs(coeff.numerator))).bit_length())
            q = p + 1 + extra
            total += coeff * Fraction(_atom_floor_scaled(atom, q), 1 << q)
        return total

    def query(self, p: int) -> tuple[Fraction, Fraction]:
        """(approximant, certified error bound <= 2**-p)."""
        if not self.terms:
            return self.const, Fraction(0)
        return self.approx(p), Fraction(1, 1 << p)

    # -- exact evaluation / sign

    def exact_value(self) -> Fraction | None:
        """The exact rational value, when no square-root atom is present."""
        total = self.const
        for atom, coeff in self.terms:
            if isinstance(atom, SqrtAtom):
                return None
            total += coeff * _qtree_exact(atom)
        return total

    def dyadic_scaled(self) -> tuple[int, int] | None:
        """(numerator, shift) with value == numerator / 2**shift, when the
        form is dyadic: digit-sum atoms with dyadic coefficients and a dyadic
        constant.  Avoids Fraction normalization on huge denominators."""
        parts: list[tuple[int, int]] = []
        cd = self.const.denominator
        if cd & (cd - 1):
            return None
        parts.append((self.const.numerator, cd.bit_length() - 1))
        for atom, coeff in self.terms:
            if isinstance(atom, SqrtAtom):
                return None
            qd = coeff.denominator
            if qd & (qd - 1):
                return None
            num, shift = _qtree_scaled(atom)
            parts.append((coeff.numerator * num, shift + qd.bit_length() - 1))
        total_shift = max(s for _, s in parts)
        total = sum(n << (total_shift - s) for n, s in parts)
        return total, total_shift

    def sign_exact(self) -> int | None:
        """Exact sign, or None when the form has >= 2 distinct sqrt atoms."""
        scaled = self.dyadic_scaled()
        if scaled is not None:
            n, _ = scaled
            return (n > 0) - (n < 0)
        c = self.const
        sqrt_terms: list[tuple[int, Fraction]] = []
        for atom, coeff in self.terms:
            if isinstance(atom, SqrtAtom):
                sqrt_terms.append((atom.d, coeff))
            else:
                c += coeff * _qtree_exact(atom)
        if not sqrt_terms:
            return (c > 0) - (c < 0)
        if len(sqrt_terms) > 1:
            return None
        d, q = sqrt_terms[0]
        if c == 0:
            return 1 if q > 0 else -1
        if c > 0 and q > 0:
            return 1
        if c < 0 and q < 0:
            return -1
        lhs, rhs = q * q * d, c * c
        s = (lhs > rhs) - (lhs < rhs)
        return s if q > 0 else -s

    # -- integer part

    def floor_int(self, max_precision: int = DEFAULT_PRECISION_CAP) -> int:
        ev = self.exact_value()
        if ev is not None:
            return math.floor(ev)
        p = 16
        while p <= max_precision:
            a = self.approx(p)
            eps = Fraction(1, 1 << p)
            lo, hi = a - eps, a + eps
            if math.floor(lo) == math.floor(hi):
                return math.floor(lo)
            # interval straddles an integer n: decide by exact sign of x - n
            n = math.floor(hi)
            s = (self - n).sign_exact()
            if s is not None:
                return n if s >= 0 else n - 1
            p *= 2
        raise UnresolvedComparison(
            f"floor undetermined for {self} at precision {max_precision}",
            precision=max_precision,
        )

    def frac(self, max_precision: int = DEFAULT_PRECISION_CAP) -> "CertifiedReal":
        """Fractional part, in [0, 1)."""
        return self - self.floor_int(max_precision)

    # -- rendering

    def decimal(self, digits: int = 12) -> str:
        p = max(8, int(digits * 3.33) + 8)
        a = self.approx(p)
        neg = a < 0
        a = -a if neg else a
        scaled = a.numerator * 10**digits // a.denominator
        ip, fp = divmod(scaled, 10**digits)
        return ("-" if neg else "") + f"{ip}.{str(fp).zfill(digits)}"

    def __str__(self) -> str:
        parts: list[str] = []
        if self.const != 0 or not self.terms:
            parts.append(str(self.const))
        for atom, coeff in self.terms:
            if coeff == 1:
                parts.append(f"+ {atom}")
            elif coeff == -1:
                parts.append(f"- {atom}")
            elif coeff < 0:
                parts.append(f"- {-coeff}*{atom}")
            else:
                parts.append(f"+ {coeff}*{atom}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else text


RealLike = Union[CertifiedReal, Rational, int, Fraction]


def as_real(x: RealLike) -> CertifiedReal:
    if isinstance(x, CertifiedReal):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return CertifiedReal(Fraction(x))
    raise TypeError(f"cannot interpret {x!r} as a certified real")


def rational(x) -> CertifiedReal:
    """Exact rational value (accepts int, Fraction, or a decimal string)."""
    return CertifiedReal(Fraction(x))


def sqrt(d: int) -> CertifiedReal:
    """sqrt(d) for an integer d >= 0, normalized to a squarefree atom."""
    if d < 0:
        raise ValueError("negative radicand")
    if d in (0, 1):
        return rational(d)
    s, d0 = _squarefree_split(d)
    if d0 == 1:
        return rational(s)
    return CertifiedReal(Fraction(0), ((SqrtAtom(d0), Fraction(s)),))


ZERO = rational(0)
ONE = rational(1)

#: sqrt(2) - 1, the default rotation angle for density experiments (bounded
#: partial quotients give the best finite-window equidistribution).
SQRT2_MINUS_1 = sqrt(2) - 1

#: (sqrt(5) - 1) / 2, the golden rotation used for Sturmian words.
GOLDEN_MINUS_1 = (sqrt(5) - 1) * Fraction(1, 2)


# ---------------------------------------------------------------------------
# Comparison


def compare(
    x: RealLike, y: RealLike, max_precision: int = DEFAULT_PRECISION_CAP
) -> Comparison:
    """Certified three-way-ish comparison.

    Refines both operands until their error intervals separate, or an exact
    sign is available.  Returns UNRESOLVED when the values may be equal:
    equality is semi-decidable, so ``compare(x, x)`` is UNRESOLVED at every
    cap.
    """
    diff = as_real(x) - as_real(y)
    s = diff.sign_exact()
    if s is not None:
        if s > 0:
            return Comparison.GREATER
        if s < 0:
            return Comparison.LESS
        return Comparison.UNRESOLVED
    p = 16
    while p <= max_precision:
        a = diff.approx(p)
        eps = Fraction(1, 1 << p)
        if a > eps:
            return Comparison.GREATER
        if a < -eps:
            return Comparison.LESS
        p = min(p * 2, max_precision) if p < max_precision else max_precision + 1
    return Comparison.UNRESOLVED


def certified_sign(x: RealLike, max_precision: int = DEFAULT_PRECISION_CAP) -> int:
    """-1 / 0 / +1 with a certificate; 0 only via exact equality.

    Raises :class:`UnresolvedComparison` when the value has no exact sign and
    refinement up to the cap did not separate it from zero.
    """
    form = as_real(x)
    s = form.sign_exact()
    if s is not None:
        return s
    c = compare(form, ZERO, max_precision)
    if c is Comparison.GREATER:
        return 1
    if c is Comparison.LESS:
        return -1
    raise UnresolvedComparison(
        f"sign of {form} unresolved at precision {max_precision}",
        precision=max_precision,
        context=form,
    )


# ---------------------------------------------------------------------------
# Tree-path reals


def tree_path_labels(path: Sequence[int]) -> tuple[int, ...]:
    """Labels visited by a root path of the breadth-first-labeled binary tree
    (root 0; children of m are 2m+1 and 2m+2)."""
    v = 0
    labels = [0]
    for bit in path:
        if bit not in (0, 1):
            raise ValueError("tree paths are 0/1 sequences")
        v = 2 * v + 1 + bit
        labels.append(v)
    return tuple(labels)


def qtree_real(path: Sequence[int]) -> CertifiedReal:
    """The digit-sum real of one tree path: sum(2**-(label+1)**2)."""
    labels = tree_path_labels(path)
    positions = tuple((l + 1) ** 2 for l in labels)
    atom = QtreeAtom(positions, tuple(int(b) for b in path))
    return CertifiedReal(Fraction(0), ((atom, Fraction(1)),))


def qtree_reals(paths: Iterable[Sequence[int]]) -> tuple[CertifiedReal, ...]:
    """Digit-sum reals for a family of distinct tree paths.

    Distinct paths share a prefix and then diverge, so their digit positions
    diverge and comparisons always certify.  Duplicates are rejected.
    """
    seen: set[tuple[int, ...]] = set()
    out: list[CertifiedReal] = []
    for path in paths:
        key = tuple(int(b) for b in path)
        if key in seen:
            raise ValueError(f"duplicate tree path {key}")
        seen.add(key)
        out.append(qtree_real(key))
    return tuple(out)
