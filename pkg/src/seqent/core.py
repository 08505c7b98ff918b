"""Exact partitions of [0,1) and [0,1)^2 and the Shannon entropy functional.

All measures are `fractions.Fraction` values and every set operation here is
closed over the rationals.  Floating point enters exactly once: in
:func:`shannon_entropy`, which evaluates ``-sum(p*log2(p))`` at 80 bits of
working precision and rounds the result to a float.
"""
from __future__ import annotations

import bisect
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence

import mpmath

from .errors import ValidationError

ExactRational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

# Working precision (bits of mantissa) for the final log evaluation.
ENTROPY_PRECISION = 80


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and exact strings like '13/21' to Fraction.

    Floats are rejected: they would silently break exactness at the source.
    """
    if isinstance(x, float):
        raise ValidationError(f"floating literal {x!r} not accepted; use an exact fraction")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ValidationError(f"cannot parse {x!r} as an exact fraction: {exc}") from exc


@dataclass(frozen=True)
class ProbabilityVector:
    """Vector of nonnegative rational masses summing exactly to 1."""

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        entries = tuple(Fraction(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValidationError("probability vector must be nonempty")
        if any(e < 0 for e in entries):
            raise ValidationError("probability vector has a negative entry")
        if sum(entries) != 1:
            raise ValidationError(f"probability vector sums to {sum(entries)}, not 1")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def shannon_entropy(p: ProbabilityVector | Sequence[Fraction]) -> float:
    """Shannon entropy in bits, with the 0*log(0) = 0 convention.

    The sum is evaluated over the *distinct* mass values (grouped by
    multiplicity) in sorted order, so the result is independent of the
    order in which atoms were produced.
    """
    if not isinstance(p, ProbabilityVector):
        p = ProbabilityVector(tuple(p))
    groups = Counter(p.entries)
    with mpmath.workprec(ENTROPY_PRECISION):
        total = mpmath.mpf(0)
        for mass, count in sorted(groups.items()):
            if mass == 0:
                continue
            x = mpmath.mpf(mass.numerator) / mass.denominator
            total -= count * x * mpmath.log(x, 2)
        return float(total)


def entropy_of_masses(masses: Sequence[Fraction]) -> float:
    """Entropy of an unvalidated mass list (must still sum to 1)."""
    return shannon_entropy(ProbabilityVector(tuple(masses)))


@dataclass(frozen=True)
class IntervalPartition:
    """Finite labeled partition of [0,1) into half-open intervals.

    ``cuts`` are strictly increasing, start at 0 and stay below 1; gap i is
    ``[cuts[i], cuts[i+1])`` (the last gap wraps to 1) and carries
    ``labels[i]``.  An atom of the partition is the union of all gaps
    sharing a label, so non-adjacent gaps may repeat a label.
    """

    cuts: tuple[Fraction, ...]
    labels: tuple[Hashable, ...]

    def __post_init__(self):
        cuts = tuple(as_fraction(c) for c in self.cuts)
        object.__setattr__(self, "cuts", cuts)
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not cuts or cuts[0] != 0:
            raise ValidationError("cuts must start at 0")
        if any(b <= a for a, b in zip(cuts, cuts[1:])) or cuts[-1] >= 1:
            raise ValidationError("cuts must be strictly increasing inside [0,1)")
        if len(labels) != len(cuts):
            raise ValidationError("need exactly one label per gap")

    @classmethod
    def from_cut_list(cls, cuts, labels=None) -> "IntervalPartition":
        cuts = tuple(as_fraction(c) for c in cuts)
        if labels is None:
            labels = tuple(range(len(cuts)))
        return cls(cuts, tuple(labels))

    @classmethod
    def dyadic(cls, level: int) -> "IntervalPartition":
        """The 2**level equal dyadic intervals, distinctly labeled."""
        if level < 0:
            raise ValidationError("dyadic level must be >= 0")
        n = 2**level
        return cls(tuple(Fraction(k, n) for k in range(n)), tuple(range(n)))

    @classmethod
    def halves(cls) -> "IntervalPartition":
        return cls.dyadic(1)

    @classmethod
    def trivial(cls) -> "IntervalPartition":
        return cls((ZERO,), (0,))

    def __len__(self):
        return len(self.cuts)

    def gap_lengths(self) -> tuple[Fraction, ...]:
        hi = self.cuts[1:] + (ONE,)
        return tuple(b - a for a, b in zip(self.cuts, hi))

    def label_at(self, x: Fraction) -> Hashable:
        """Label of the gap containing x (gaps are right-open)."""
        if not 0 <= x < 1:
            raise ValidationError(f"{x} outside [0,1)")
        i = bisect.bisect_right(self.cuts, x) - 1
        return self.labels[i]

    def measures_by_label(self) -> dict[Hashable, Fraction]:
        """Exact total measure per distinct label, in first-occurrence order."""
        out: dict[Hashable, Fraction] = {}
        for label, length in zip(self.labels, self.gap_lengths()):
            out[label] = out.get(label, ZERO) + length
        return out

    def relabeled_canonical(self) -> "IntervalPartition":
        """Same partition with labels replaced by 0,1,... in order of first use."""
        seen: dict[Hashable, int] = {}
        new = []
        for lab in self.labels:
            if lab not in seen:
                seen[lab] = len(seen)
            new.append(seen[lab])
        return IntervalPartition(self.cuts, tuple(new))


def partition_measures(xi) -> ProbabilityVector:
    """Exact atom-measure vector of a labeled partition (one entry per label)."""
    return ProbabilityVector(tuple(xi.measures_by_label().values()))


def common_refinement(xi: IntervalPartition, eta: IntervalPartition) -> IntervalPartition:
    """Join of two interval partitions; labels become (xi-label, eta-label)."""
    cuts = sorted(set(xi.cuts) | set(eta.cuts))
    labels = []
    hi = cuts[1:] + [ONE]
    for a, b in zip(cuts, hi):
        mid = (a + b) / 2
        labels.append((xi.label_at(mid), eta.label_at(mid)))
    return IntervalPartition(tuple(cuts), tuple(labels))


@dataclass(frozen=True)
class Rect:
    """Axis-parallel half-open rectangle [x0,x1) x [y0,y1)."""

    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction

    def __post_init__(self):
        for name in ("x0", "x1", "y0", "y1"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValidationError(f"degenerate rectangle {self}")

    @property
    def area(self) -> Fraction:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def contains(self, pt) -> bool:
        x, y = pt
        return self.x0 <= x < self.x1 and self.y0 <= y < self.y1

    def intersect(self, other: "Rect") -> "Rect | None":
        x0, x1 = max(self.x0, other.x0), min(self.x1, other.x1)
        y0, y1 = max(self.y0, other.y0), min(self.y1, other.y1)
        if x0 < x1 and y0 < y1:
            return Rect(x0, x1, y0, y1)
        return None

    def overlaps(self, other: "Rect") -> bool:
        return self.intersect(other) is not None


@dataclass(frozen=True)
class RectanglePartition:
    """Labeled partition of the unit square into axis-parallel rectangles."""

    atoms: tuple[tuple[Rect, Hashable], ...]

    def __post_init__(self):
        atoms = tuple((r, lab) for r, lab in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise ValidationError("rectangle partition must be nonempty")
        rects = [r for r, _ in atoms]
        for r in rects:
            if r.x0 < 0 or r.x1 > 1 or r.y0 < 0 or r.y1 > 1:
                raise ValidationError(f"rectangle {r} leaves the unit square")
        for i in range(len(rects)):
            for j in range(i + 1, len(rects)):
                if rects[i].overlaps(rects[j]):
                    raise ValidationError(f"rectangles {i} and {j} overlap")
        if sum(r.area for r in rects) != 1:
            raise ValidationError("rectangle areas do not sum to 1")

    @classmethod
    def quadrants(cls) -> "RectanglePartition":
        h = Fraction(1, 2)
        return cls(
            (
                (Rect(0, h, 0, h), 0),
                (Rect(h, 1, 0, h), 1),
                (Rect(0, h, h, 1), 2),
                (Rect(h, 1, h, 1), 3),
            )
        )

    @classmethod
    def vertical_halves(cls) -> "RectanglePartition":
        h = Fraction(1, 2)
        return cls(((Rect(0, h, 0, 1), 0), (Rect(h, 1, 0, 1), 1)))

    @classmethod
    def dyadic(cls, x_level: int, y_level: int) -> "RectanglePartition":
        nx, ny = 2**x_level, 2**y_level
        atoms = []
        for i in range(nx):
            for j in range(ny):
                atoms.append(
                    (
                        Rect(Fraction(i, nx), Fraction(i + 1, nx), Fraction(j, ny), Fraction(j + 1, ny)),
                        (i, j),
                    )
                )
        return cls(tuple(atoms))

    @classmethod
    def trivial(cls) -> "RectanglePartition":
        return cls(((Rect(0, 1, 0, 1), 0),))

    def label_at(self, pt) -> Hashable:
        for r, lab in self.atoms:
            if r.contains(pt):
                return lab
        raise ValidationError(f"{pt} outside the unit square")

    def measures_by_label(self) -> dict[Hashable, Fraction]:
        out: dict[Hashable, Fraction] = {}
        for r, lab in self.atoms:
            out[lab] = out.get(lab, ZERO) + r.area
        return out
