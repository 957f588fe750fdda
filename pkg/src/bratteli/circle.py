"""Half-open interval unions on the circle and rotation return-time machinery.

The circle is [0, 1) with addition mod 1.  A :class:`CircleIntervalSet` is a
canonical finite union of half-open intervals [a, b) with certified-real
endpoints: sorted, pairwise disjoint, adjacent intervals merged, no empties.
All set operations are exact; endpoint order is settled by exact signs where
the representation allows and by certified refinement otherwise, never by
floating point.

On top of the interval sets sit the rotation operations: rotating a set by a
multiple of an irrational angle, return-time sets of the rotation at a base
point, Sturmian words, finite-window densities and gap statistics, and the
Boolean algebra generated by rotated initial intervals together with its set
of measures (the density set).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import SizeGuardExceeded, UnresolvedComparison
from .reals import (
    DEFAULT_PRECISION_CAP,
    ONE,
    ZERO,
    CertifiedReal,
    RealLike,
    SqrtAtom,
    as_real,
    certified_sign,
)

_INTERVAL_GUARD = 10_000


# ---------------------------------------------------------------------------
# Canonical interval unions


@dataclass(frozen=True)
class CircleIntervalSet:
    """Canonical finite union of half-open subintervals of [0, 1)."""

    intervals: tuple[tuple[CertifiedReal, CertifiedReal], ...]

    # -- constructors

    @staticmethod
    def empty() -> "CircleIntervalSet":
        return CircleIntervalSet(())

    @staticmethod
    def full() -> "CircleIntervalSet":
        return CircleIntervalSet(((ZERO, ONE),))

    @staticmethod
    def from_pairs(
        pairs: Iterable[tuple[RealLike, RealLike]],
        max_precision: int = DEFAULT_PRECISION_CAP,
    ) -> "CircleIntervalSet":
        """Canonicalize arbitrary [a, b) pairs: validate range, drop empties,
        sort, merge overlaps and abutting intervals."""
        cleaned: list[tuple[CertifiedReal, CertifiedReal]] = []
        for a, b in pairs:
            a, b = as_real(a), as_real(b)
            width = certified_sign(b - a, max_precision)
            if width < 0:
                raise ValueError(f"interval with negative width: [{a}, {b})")
            if width == 0:
                continue
            if certified_sign(a, max_precision) < 0 or certified_sign(b - ONE, max_precision) > 0:
                raise ValueError(f"interval outside [0, 1): [{a}, {b})")
            cleaned.append((a, b))
        if len(cleaned) > _INTERVAL_GUARD:
            raise SizeGuardExceeded(f"{len(cleaned)} intervals exceeds guard")

        def left_key(iv):  # sort via certified comparisons
            return _SortKey(iv[0], max_precision)

        cleaned.sort(key=left_key)
        merged: list[tuple[CertifiedReal, CertifiedReal]] = []
        for a, b in cleaned:
            if merged:
                pa, pb = merged[-1]
                gap = certified_sign(a - pb, max_precision)
                if gap < 0 or gap == 0:
                    # overlap or abutting: extend if b goes further
                    if certified_sign(b - pb, max_precision) > 0:
                        merged[-1] = (pa, b)
                    continue
            merged.append((a, b))
        return CircleIntervalSet(tuple(merged))

    # -- basic queries

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def measure(self) -> CertifiedReal:
        total = ZERO
        for a, b in self.intervals:
            total = total + (b - a)
        return total

    def contains(self, x: RealLike, max_precision: int = DEFAULT_PRECISION_CAP) -> bool:
        """Membership of a point in [0, 1); endpoints resolve exactly where
        possible ([a, b) is closed on the left)."""
        x = as_real(x)
        for a, b in self.intervals:
            if certified_sign(x - a, max_precision) >= 0 and certified_sign(b - x, max_precision) > 0:
                return True
        return False

    # -- Boolean operations (exact; no new boundary points are introduced)

    def complement(self, max_precision: int = DEFAULT_PRECISION_CAP) -> "CircleIntervalSet":
        pairs = []
        prev = ZERO
        for a, b in self.intervals:
            if certified_sign(a - prev, max_precision) > 0:
                pairs.append((prev, a))
            prev = b
        if certified_sign(ONE - prev, max_precision) > 0:
            pairs.append((prev, ONE))
        return CircleIntervalSet(tuple(pairs))

    def union(self, other: "CircleIntervalSet", max_precision: int = DEFAULT_PRECISION_CAP) -> "CircleIntervalSet":
        return CircleIntervalSet.from_pairs(self.intervals + other.intervals, max_precision)

    def intersect(self, other: "CircleIntervalSet", max_precision: int = DEFAULT_PRECISION_CAP) -> "CircleIntervalSet":
        pairs = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo = a if certified_sign(c - a, max_precision) <= 0 else c
                hi = b if certified_sign(b - d, max_precision) <= 0 else d
                if certified_sign(hi - lo, max_precision) > 0:
                    pairs.append((lo, hi))
        return CircleIntervalSet.from_pairs(pairs, max_precision)

    def __or__(self, other):
        return self.union(other)

    def __and__(self, other):
        return self.intersect(other)

    def __invert__(self):
        return self.complement()

    # -- rotation

    def rotate(self, gamma: RealLike, k: int, max_precision: int = DEFAULT_PRECISION_CAP) -> "CircleIntervalSet":
        """Translate by frac(k * gamma) mod 1, splitting wrapped intervals.

        The measure is preserved exactly.
        """
        shift = (as_real(gamma) * k).frac(max_precision)
        pairs: list[tuple[CertifiedReal, CertifiedReal]] = []
        for a, b in self.intervals:
            a2, b2 = a + shift, b + shift
            a_wraps = certified_sign(a2 - ONE, max_precision) >= 0
            b_over = certified_sign(b2 - ONE, max_precision) > 0
            if a_wraps:
                pairs.append((a2 - ONE, b2 - ONE))
            elif b_over:
                pairs.append((a2, ONE))
                pairs.append((ZERO, b2 - ONE))
            else:
                pairs.append((a2, b2))
        return CircleIntervalSet.from_pairs(pairs, max_precision)

    # -- identity / rendering

    def key(self) -> tuple:
        """Hashable canonical key (symbolic endpoint forms)."""
        return tuple((a.const, a.terms, b.const, b.terms) for a, b in self.intervals)

    def describe(self, digits: int = 6) -> str:
        if not self.intervals:
            return "(empty)"
        return " u ".join(
            f"[{a.decimal(digits)}, {b.decimal(digits)})" for a, b in self.intervals
        )

    def __str__(self) -> str:
        if not self.intervals:
            return "(empty)"
        return " u ".join(f"[{a}, {b})" for a, b in self.intervals)


class _SortKey:
    """Orders certified reals via exact/certified signs, for list.sort."""

    __slots__ = ("value", "cap")

    def __init__(self, value: CertifiedReal, cap: int):
        self.value = value
        self.cap = cap

    def __lt__(self, other: "_SortKey") -> bool:
        return certified_sign(self.value - other.value, self.cap) < 0


def initial_interval(alpha: RealLike) -> CircleIntervalSet:
    """[0, alpha) for alpha in (0, 1]."""
    return CircleIntervalSet.from_pairs([(ZERO, as_real(alpha))])


# ---------------------------------------------------------------------------
# Return words of the rotation


def _membership_word_generic(
    sets: Sequence[CircleIntervalSet],
    gamma: CertifiedReal,
    n: int,
    base: CertifiedReal,
    max_precision: int,
) -> list[tuple[bool, ...]]:
    words = []
    for k in range(-n, n + 1):
        start = 64 + 2 * abs(k).bit_length()
        x = (base + gamma * k).frac(max(start, max_precision))
        try:
            words.append(tuple(u.contains(x, max_precision) for u in sets))
        except UnresolvedComparison as exc:
            raise UnresolvedComparison(
                f"membership of frac(base + {k}*gamma) unresolved", precision=max_precision
            ) from exc
    return words


def _quadratic_profile(values: Iterable[CertifiedReal]) -> int | None:
    """The common sqrt radicand of a family of forms (None if unmixable)."""
    d = 0
    for v in values:
        for atom, _ in v.terms:
            if not isinstance(atom, SqrtAtom):
                return None
            if d and atom.d != d:
                return None
            d = atom.d
    return d if d else 0


def _membership_word_quadratic(
    sets: Sequence[CircleIntervalSet],
    gamma: CertifiedReal,
    n: int,
    base: CertifiedReal,
    d: int,
) -> list[tuple[bool, ...]]:
    """Incremental integer-only evaluation when every endpoint, the base and
    gamma live in Q + Q*sqrt(d).  Used for large windows."""

    def parts(v: CertifiedReal) -> tuple[Fraction, Fraction]:
        c, q = v.const, Fraction(0)
        for atom, coeff in v.terms:
            q += coeff
        return c, q

    dens = [1]
    comps = [parts(gamma), parts(base)]
    endpoint_parts = []
    for u in sets:
        iv = []
        for a, b in u.intervals:
            pa, pb = parts(a), parts(b)
            iv.append((pa, pb))
            comps.extend([pa, pb])
        endpoint_parts.append(iv)
    for c, q in comps:
        dens.extend([c.denominator, q.denominator])
    den = 1
    for x in dens:
        den = den * x // _gcd(den, x)

    def scaled(pair: tuple[Fraction, Fraction]) -> tuple[int, int]:
        c, q = pair
        return int(c * den), int(q * den)

    gc, gq = scaled(parts(gamma))
    bc, bq = scaled(parts(base))
    ends = [[(scaled(pa), scaled(pb)) for pa, pb in iv] for iv in endpoint_parts]

    def sign(u: int, v: int) -> int:
        if v == 0:
            return (u > 0) - (u < 0)
        if u == 0:
            return (v > 0) - (v < 0)
        if u > 0 and v > 0:
            return 1
        if u < 0 and v < 0:
            return -1
        lhs, rhs = v * v * d, u * u
        s = (lhs > rhs) - (lhs < rhs)
        return s if v > 0 else -s

    def reduce_mod_one(u: int, v: int) -> tuple[int, int]:
        while sign(u, v) < 0:
            u += den
        while sign(u - den, v) >= 0:
            u -= den
        return u, v

    def member(u: int, v: int) -> tuple[bool, ...]:
        bits = []
        for iv in ends:
            inside = False
            for (ac, aq), (bcc, bq2) in iv:
                if sign(u - ac, v - aq) >= 0 and sign(bcc - u, bq2 - v) > 0:
                    inside = True
                    break
            bits.append(inside)
        return tuple(bits)

    xc, xv = reduce_mod_one(bc, bq)
    forward = [member(xc, xv)]
    for _ in range(n):
        xc, xv = reduce_mod_one(xc + gc, xv + gq)
        forward.append(member(xc, xv))
    xc, xv = reduce_mod_one(bc, bq)
    backward = []
    for _ in range(n):
        xc, xv = reduce_mod_one(xc - gc, xv - gq)
        backward.append(member(xc, xv))
    backward.reverse()
    return backward + forward


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def membership_words(
    sets: Sequence[CircleIntervalSet],
    gamma: RealLike,
    n: int,
    base: RealLike = ZERO,
    max_precision: int = DEFAULT_PRECISION_CAP,
) -> list[tuple[bool, ...]]:
    """Per-k membership of frac(base + k*gamma) in each set, k in [-n, n]."""
    if n < 0:
        raise ValueError("window radius must be >= 0")
    gamma, base = as_real(gamma), as_real(base)
    all_vals = [gamma, base]
    for u in sets:
        for a, b in u.intervals:
            all_vals.extend([a, b])
    d = _quadratic_profile(all_vals)
    if d:
        return _membership_word_quadratic(sets, gamma, n, base, d)
    return _membership_word_generic(sets, gamma, n, base, max_precision)


def return_set(
    interval_set: CircleIntervalSet,
    gamma: RealLike,
    n: int,
    base: RealLike = ZERO,
    max_precision: int = DEFAULT_PRECISION_CAP,
) -> list[int]:
    """{k in [-n, n] : frac(base + k*gamma) in U}, sorted."""
    word = membership_words([interval_set], gamma, n, base, max_precision)
    return [k for k, bits in zip(range(-n, n + 1), word) if bits[0]]


def sturmian_word(
    gamma: RealLike,
    base: RealLike = ZERO,
    n: int = 16,
    max_precision: int = DEFAULT_PRECISION_CAP,
) -> list[int]:
    """The 0/1 return word of the rotation to [0, gamma), length 2n+1.

    Position j of the result corresponds to step k = j - n.  The angle must
    be irrational by construction kind.
    """
    gamma = as_real(gamma)
    if gamma.is_rational_kind:
        raise ValueError("sturmian words need an irrational rotation angle")
    if certified_sign(gamma) <= 0 or certified_sign(ONE - gamma) <= 0:
        raise ValueError("rotation angle must lie in (0, 1)")
    u = initial_interval(gamma)
    word = membership_words([u], gamma, n, base, max_precision)
    return [1 if bits[0] else 0 for bits in word]


def window_density(members: Iterable[int], n: int) -> Fraction:
    """|A cap [-n, n]| / (2n + 1), exactly."""
    count = sum(1 for k in members if -n <= k <= n)
    return Fraction(count, 2 * n + 1)


@dataclass(frozen=True)
class GapReport:
    """Largest gap between consecutive members seen in the window.

    ``boundary_limited`` flags that the true gap may extend past the window
    (the maximum was attained at a window edge, or the set is a singleton).
    """

    max_gap: int
    boundary_limited: bool


def syndetic_gap(members: Sequence[int], n: int) -> GapReport:
    ms = sorted(m for m in members if -n <= m <= n)
    if not ms:
        raise ValueError("gap of an empty set")
    interior = max((b - a for a, b in zip(ms, ms[1:])), default=0)
    lead, trail = ms[0] - (-n), n - ms[-1]
    edge = max(lead, trail)
    if edge > interior or len(ms) == 1:
        return GapReport(max(interior, edge), True)
    return GapReport(interior, False)


# ---------------------------------------------------------------------------
# The generated algebra and its density set


@dataclass(frozen=True)
class ReturnAlgebraSpec:
    """Finite window onto the algebra generated by rotated initial intervals.

    Generators are T^k[0, alpha) for |k| <= shift_range and alpha in the
    generator list; the Boolean closure is iterated boolean_depth times.
    """

    gamma: CertifiedReal
    generators: tuple[CertifiedReal, ...]
    shift_range: int
    boolean_depth: int

    def __post_init__(self):
        if self.gamma.is_rational_kind:
            raise ValueError("rotation angle must not be of rational kind")
        if self.shift_range < 0 or self.boolean_depth < 0:
            raise ValueError("shift_range and boolean_depth must be >= 0")
        if not self.generators:
            raise ValueError("at least one generator is required")
        for alpha in self.generators:
            if certified_sign(alpha) <= 0 or certified_sign(alpha - ONE) >= 0:
                raise ValueError(f"generator {alpha} outside (0, 1)")


class IntervalAlgebra:
    """Cell decomposition of the finite generated family.

    Boolean combinations introduce no boundary points beyond those of the
    generators, so every family member is a union of the elementary arcs
    between consecutive generator endpoints; members are bitmasks over those
    arcs and all set algebra is integer bit algebra.
    """

    def __init__(self, spec: ReturnAlgebraSpec, max_sets: int = 1 << 20,
                 max_precision: int = DEFAULT_PRECISION_CAP):
        self.spec = spec
        self.max_precision = max_precision
        gens = [
            initial_interval(alpha).rotate(spec.gamma, k, max_precision)
            for alpha in spec.generators
            for k in range(-spec.shift_range, spec.shift_range + 1)
        ]
        self.generator_sets = gens
        self.boundaries = self._build_boundaries(gens)  # starts at 0, ends at 1
        self.num_cells = len(self.boundaries) - 1
        self.full_mask = (1 << self.num_cells) - 1
        gen_masks = [self._mask_of(g) for g in gens]
        self.masks = self._close(gen_masks, spec.boolean_depth, max_sets)
        self._cell_lengths = [
            self.boundaries[i + 1] - self.boundaries[i] for i in range(self.num_cells)
        ]

    # -- construction

    def _build_boundaries(self, gens: list[CircleIntervalSet]) -> list[CertifiedReal]:
        points: list[CertifiedReal] = [ZERO]
        for g in gens:
            for a, b in g.intervals:
                points.extend([a, b])
        out: list[CertifiedReal] = []
        for p in points:
            if certified_sign(ONE - p, self.max_precision) <= 0:
                continue  # a right endpoint at 1 is the wrap boundary
            if all(certified_sign(p - q, self.max_precision) != 0 for q in out):
                out.append(p)
        out.sort(key=lambda v: _SortKey(v, self.max_precision))
        return out + [ONE]

    def _index_of(self, value: CertifiedReal) -> int:
        for i, q in enumerate(self.boundaries):
            if certified_sign(value - q, self.max_precision) == 0:
                return i
        raise AssertionError(f"endpoint {value} missing from cell universe")

    def _mask_of(self, s: CircleIntervalSet) -> int:
        mask = 0
        for a, b in s.intervals:
            for i in range(self._index_of(a), self._index_of(b)):
                mask |= 1 << i
        return mask

    def _close(self, gen_masks: list[int], depth: int, max_sets: int) -> list[int]:
        """Iterated pairwise union/intersection closure; complements are free
        (the family is complement-closed after every round)."""
        family = {0, self.full_mask, *gen_masks}
        family |= {self.full_mask & ~m for m in family}
        for _ in range(depth):
            current = sorted(family)
            new = set(family)
            for i, a in enumerate(current):
                for b in current[i + 1:]:
                    new.add(a | b)
                    new.add(a & b)
                if len(new) > max_sets:
                    raise SizeGuardExceeded(
                        f"algebra closure exceeded {max_sets} sets"
                    )
            new |= {self.full_mask & ~m for m in new}
            if new == family:
                break
            family = new
        return sorted(family)

    # -- views

    def set_of(self, mask: int) -> CircleIntervalSet:
        pairs = []
        i = 0
        while i < self.num_cells:
            if mask & (1 << i):
                j = i
                while j + 1 < self.num_cells and mask & (1 << (j + 1)):
                    j += 1
                pairs.append((self.boundaries[i], self.boundaries[j + 1]))
                i = j + 1
            i += 1
        return CircleIntervalSet(tuple(pairs))

    def sets(self) -> list[CircleIntervalSet]:
        return [self.set_of(m) for m in self.masks]

    def mask_measure(self, mask: int) -> CertifiedReal:
        total = ZERO
        for i in range(self.num_cells):
            if mask & (1 << i):
                total = total + self._cell_lengths[i]
        return total

    def atoms(self) -> list[int]:
        """Minimal nonempty members of the family."""
        nonempty = sorted((m for m in self.masks if m), key=lambda m: (bin(m).count("1"), m))
        atoms: list[int] = []
        for m in nonempty:
            if not any(a != m and (a & m) == a for a in atoms):
                atoms.append(m)
        return atoms


def generate_algebra(
    spec: ReturnAlgebraSpec,
    max_sets: int = 1 << 20,
    max_precision: int = DEFAULT_PRECISION_CAP,
) -> tuple[CircleIntervalSet, ...]:
    """Close the rotated initial intervals under union, intersection and
    complement, to the spec's Boolean depth; includes the empty set and the
    full circle.  Deterministic canonical order."""
    return tuple(IntervalAlgebra(spec, max_sets, max_precision).sets())


def scaled_value_keys(values: Sequence[CertifiedReal]) -> list[int] | None:
    """Common-denominator integer keys for a family of dyadic values, or
    None when some value is not dyadic.  Key order and equality mirror value
    order and equality exactly."""
    scaled = [v.dyadic_scaled() for v in values]
    if any(s is None for s in scaled):
        return None
    if not scaled:
        return []
    top = max(s for _, s in scaled)
    return [n << (top - s) for n, s in scaled]


def _dedup_sorted(values: list[CertifiedReal], max_precision: int) -> list[CertifiedReal]:
    keys = scaled_value_keys(values)
    if keys is not None:
        paired = sorted(zip(keys, values), key=lambda kv: kv[0])
        out = []
        prev = None
        for k, v in paired:
            if prev is None or k != prev:
                out.append(v)
            prev = k
        return out
    values = sorted(values, key=lambda v: _SortKey(v, max_precision))
    out = []
    for v in values:
        if out and certified_sign(v - out[-1], max_precision) == 0:
            continue
        out.append(v)
    return out


def density_set(
    spec: ReturnAlgebraSpec,
    max_sets: int = 1 << 20,
    max_precision: int = DEFAULT_PRECISION_CAP,
) -> tuple[CertifiedReal, ...]:
    """Measures of all members of the generated algebra, deduplicated by
    certified comparison and sorted ascending.

    Every value is a rational-affine combination of 1, the angle, and the
    generators.
    """
    alg = IntervalAlgebra(spec, max_sets, max_precision)
    vals = [alg.mask_measure(m) for m in alg.masks]
    return tuple(_dedup_sorted(vals, max_precision))


@dataclass(frozen=True)
class AtomSplit:
    atom: CircleIntervalSet
    splitter: CircleIntervalSet | None  # None: no split found within bound


def atom_split_report(
    small: ReturnAlgebraSpec,
    big: ReturnAlgebraSpec,
    max_sets: int = 1 << 20,
    max_precision: int = DEFAULT_PRECISION_CAP,
) -> list[AtomSplit]:
    """For each atom of the small family, a member of the big family that
    properly splits it (nonempty proper intersection), if one exists.

    The big spec must extend the small one (same angle and generators, larger
    shift range / depth) so their cell universes are compatible.
    """
    if big.gamma != small.gamma or set(big.generators) < set(small.generators):
        raise ValueError("big spec must extend the small spec")
    big_alg = IntervalAlgebra(big, max_sets, max_precision)
    small_on_big = IntervalAlgebra.__new__(IntervalAlgebra)
    small_on_big.spec = small
    small_on_big.max_precision = max_precision
    small_on_big.boundaries = big_alg.boundaries
    small_on_big.num_cells = big_alg.num_cells
    small_on_big.full_mask = big_alg.full_mask
    small_gens = [
        initial_interval(alpha).rotate(small.gamma, k, max_precision)
        for alpha in small.generators
        for k in range(-small.shift_range, small.shift_range + 1)
    ]
    small_on_big.generator_sets = small_gens
    gen_masks = [small_on_big._mask_of(g) for g in small_gens]
    small_on_big.masks = small_on_big._close(gen_masks, small.boolean_depth, max_sets)
    small_on_big._cell_lengths = big_alg._cell_lengths

    report = []
    for atom_mask in small_on_big.atoms():
        found = None
        for b in big_alg.masks:
            inter = atom_mask & b
            if inter and inter != atom_mask:
                found = big_alg.set_of(b)
                break
        report.append(AtomSplit(big_alg.set_of(atom_mask), found))
    return report
