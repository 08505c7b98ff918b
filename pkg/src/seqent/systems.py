"""Exact measure-preserving systems.

* :class:`IntervalExchange` -- piecewise translations of [0,1), closed under
  composition, inverse and integer powers.
* :class:`RotationSpec` / :func:`golden_rotation` -- high-denominator
  continued-fraction convergents standing in for irrational angles, with a
  hard aliasing guard.
* :class:`RectangleExchange` -- exact exchanges of axis-parallel rectangles
  tiling the unit square.
* :class:`BakerMap` -- the planar model of the fair 2-symbol shift.
* :class:`BernoulliSystem` -- symbolic product-measure shift.

Maps are right-continuous: all pieces are half-open ``[a, b)``, so behavior
at cut points is deterministic and composition is associative off a finite set.
"""
from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

from .core import ONE, ZERO, ProbabilityVector, Rect, as_fraction, shannon_entropy
from .errors import AliasingError, BudgetError, DomainError, ValidationError, MAX_POWER

# Aliasing guard: a rotation by p/q may only be iterated while
# (iteration time) * (interval count) stays below q / ALIAS_SAFETY.
ALIAS_SAFETY = 1000


def _inverse_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


@dataclass(frozen=True)
class IntervalExchange:
    """Interval exchange transformation of [0,1).

    ``lengths[i]`` is the length of the i-th domain subinterval (left to
    right); ``permutation[i]`` is the position that subinterval occupies in
    the image, also counted from the left.  ``alias_limit``, when set,
    bounds ``|power| * interval_count`` for any requested power.
    """

    lengths: tuple[Fraction, ...]
    permutation: tuple[int, ...]
    alias_limit: int | None = None

    def __post_init__(self):
        lengths = tuple(as_fraction(v) for v in self.lengths)
        perm = tuple(int(p) for p in self.permutation)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "permutation", perm)
        if not lengths or any(v <= 0 for v in lengths):
            raise ValidationError("lengths must be positive")
        if sum(lengths) != 1:
            raise ValidationError("lengths must sum exactly to 1")
        if sorted(perm) != list(range(len(lengths))):
            raise ValidationError("permutation must be a bijection on the intervals")
        # domain cut points
        cuts = [ZERO]
        for v in lengths[:-1]:
            cuts.append(cuts[-1] + v)
        object.__setattr__(self, "_cuts", tuple(cuts))
        # left endpoint of each interval's image
        image_left = []
        for i in range(len(lengths)):
            left = sum((lengths[j] for j in range(len(lengths)) if perm[j] < perm[i]), ZERO)
            image_left.append(left)
        object.__setattr__(self, "_translations", tuple(image_left[i] - cuts[i] for i in range(len(lengths))))

    # -- structure ---------------------------------------------------------

    @classmethod
    def identity(cls) -> "IntervalExchange":
        return cls((ONE,), (0,))

    @classmethod
    def rotation(cls, alpha, alias_limit: int | None = None) -> "IntervalExchange":
        """Rotation x -> x + alpha (mod 1) as a 2-interval exchange."""
        alpha = as_fraction(alpha) % 1
        if alpha == 0:
            return cls.identity()
        return cls((ONE - alpha, alpha), (1, 0), alias_limit=alias_limit)

    @classmethod
    def from_lengths_and_permutation(cls, lengths, permutation) -> "IntervalExchange":
        return cls(tuple(as_fraction(v) for v in lengths), tuple(permutation))

    def __len__(self):
        return len(self.lengths)

    @property
    def cuts(self) -> tuple[Fraction, ...]:
        return self._cuts

    @property
    def translations(self) -> tuple[Fraction, ...]:
        return self._translations

    def is_identity(self) -> bool:
        return len(self.lengths) == 1

    def rotation_angle(self) -> Fraction | None:
        """The angle if this map is a circle rotation, else None."""
        if self.is_identity():
            return ZERO
        if len(self.lengths) == 2 and self.permutation == (1, 0):
            return self.lengths[1]
        return None

    # -- action ------------------------------------------------------------

    def apply(self, x: Fraction) -> Fraction:
        x = as_fraction(x)
        if not 0 <= x < 1:
            raise DomainError(f"{x} outside [0,1)")
        i = bisect.bisect_right(self._cuts, x) - 1
        return x + self._translations[i]

    def inverse(self) -> "IntervalExchange":
        inv_perm = _inverse_permutation(self.permutation)
        lengths = tuple(self.lengths[inv_perm[p]] for p in range(len(self)))
        return IntervalExchange(lengths, inv_perm, alias_limit=self.alias_limit)

    def compose(self, other: "IntervalExchange") -> "IntervalExchange":
        """The exchange realizing ``self o other`` pointwise off cut points."""
        other_inv = other.inverse()
        pts = set(other.cuts)
        for c in self.cuts:
            pts.add(other_inv.apply(c))
        cuts = sorted(pts)
        highs = cuts[1:] + [ONE]
        pieces: list[tuple[Fraction, Fraction]] = []  # (length, translation)
        for a, b in zip(cuts, highs):
            mid = (a + b) / 2
            t = self.apply(other.apply(mid)) - mid
            if pieces and pieces[-1][1] == t:
                pieces[-1] = (pieces[-1][0] + (b - a), t)
            else:
                pieces.append((b - a, t))
        lengths = tuple(v for v, _ in pieces)
        lefts = [ZERO]
        for v in lengths[:-1]:
            lefts.append(lefts[-1] + v)
        image_lefts = [lefts[i] + pieces[i][1] for i in range(len(pieces))]
        order = sorted(range(len(pieces)), key=lambda i: image_lefts[i])
        perm = [0] * len(pieces)
        for rank, i in enumerate(order):
            perm[i] = rank
        limits = [lim for lim in (self.alias_limit, other.alias_limit) if lim is not None]
        return IntervalExchange(lengths, tuple(perm), alias_limit=min(limits) if limits else None)

    def check_alias(self, m: int) -> None:
        if self.alias_limit is not None and abs(m) * len(self) > self.alias_limit:
            raise AliasingError(
                f"power {m} with {len(self)} intervals exceeds aliasing guard {self.alias_limit}"
            )

    def power(self, m: int) -> "IntervalExchange":
        """m-fold iterate, by iterative composition with cut deduplication."""
        if abs(m) > MAX_POWER:
            raise BudgetError(f"|power| {abs(m)} exceeds MAX_POWER {MAX_POWER}")
        self.check_alias(m)
        if m == 0:
            return IntervalExchange.identity()
        base = self if m > 0 else self.inverse()
        result = base
        for _ in range(abs(m) - 1):
            result = base.compose(result)
        return result


def iet_apply(T: IntervalExchange, x) -> Fraction:
    return T.apply(x)


def iet_compose(A: IntervalExchange, B: IntervalExchange) -> IntervalExchange:
    return A.compose(B)


def iet_power(T: IntervalExchange, m: int) -> IntervalExchange:
    return T.power(m)


def powers_of(T: IntervalExchange, times: Sequence[int]) -> dict[int, IntervalExchange]:
    """Powers T^t for each requested t, sharing the iterative composition work.

    Positive and negative times are built by separate increasing sweeps so no
    power is composed twice.
    """
    times = sorted(set(int(t) for t in times))
    for t in times:
        if abs(t) > MAX_POWER:
            raise BudgetError(f"|power| {abs(t)} exceeds MAX_POWER {MAX_POWER}")
        T.check_alias(t)
    out: dict[int, IntervalExchange] = {}
    for sign in (1, -1):
        wanted = sorted(abs(t) for t in times if t * sign > 0)
        if not wanted:
            continue
        base = T if sign > 0 else T.inverse()
        cur = IntervalExchange.identity()
        k = 0
        for target in wanted:
            while k < target:
                cur = base.compose(cur)
                k += 1
            out[sign * target] = cur
    if 0 in times:
        out[0] = IntervalExchange.identity()
    return out


# -- rotations via continued-fraction convergents ---------------------------


def _fibonacci(n: int) -> list[int]:
    fibs = [1, 1]
    while len(fibs) < n:
        fibs.append(fibs[-1] + fibs[-2])
    return fibs[:n]


@dataclass(frozen=True)
class RotationSpec:
    """A rational convergent standing in for an irrational rotation angle.

    ``alpha = p/q`` in lowest terms; ``convergents`` are the continued
    fraction convergent denominators of the target irrational, usable as
    candidate rigidity times; all iteration requests must respect
    ``alias_limit = q // ALIAS_SAFETY``.
    """

    alpha: Fraction
    convergents: tuple[int, ...]

    def __post_init__(self):
        alpha = as_fraction(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if not 0 < alpha < 1:
            raise ValidationError("rotation angle must lie in (0,1)")
        if alpha.denominator <= ALIAS_SAFETY:
            raise ValidationError(
                f"denominator {alpha.denominator} too small for a convergent stand-in"
            )

    @property
    def alias_limit(self) -> int:
        return self.alpha.denominator // ALIAS_SAFETY

    def to_iet(self) -> IntervalExchange:
        return IntervalExchange.rotation(self.alpha, alias_limit=self.alias_limit)


def golden_rotation(order: int = 41) -> RotationSpec:
    """Golden-mean convergent F_{order-1}/F_order with Fibonacci rigidity times."""
    if order < 20:
        raise ValidationError("order must be >= 20 to clear the aliasing guard")
    fibs = _fibonacci(order)
    return RotationSpec(Fraction(fibs[-2], fibs[-1]), tuple(fibs[:-1]))


def fibonacci_numbers(n: int) -> list[int]:
    """First n Fibonacci numbers, F_1 = F_2 = 1."""
    return _fibonacci(n)


# -- rectangle exchanges -----------------------------------------------------


@dataclass(frozen=True)
class RectangleExchange:
    """Exchange of axis-parallel rectangles tiling [0,1)^2.

    ``sources[i]`` is translated by ``translations[i]``; both the sources and
    their images must tile the unit square exactly.
    """

    sources: tuple[Rect, ...]
    translations: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        sources = tuple(self.sources)
        translations = tuple((as_fraction(dx), as_fraction(dy)) for dx, dy in self.translations)
        object.__setattr__(self, "sources", sources)
        object.__setattr__(self, "translations", translations)
        if len(sources) != len(translations):
            raise ValidationError("need one translation per source rectangle")
        report = self.validate()
        if report is not None:
            raise ValidationError(report)

    def validate(self) -> str | None:
        """Exact tiling check; returns None if valid, else the first violation."""
        rects = self.sources
        for i, r in enumerate(rects):
            if r.x0 < 0 or r.x1 > 1 or r.y0 < 0 or r.y1 > 1:
                return f"source rectangle {i} leaves the unit square"
        for i in range(len(rects)):
            for j in range(i + 1, len(rects)):
                if rects[i].overlaps(rects[j]):
                    return f"source rectangles overlap at indices ({i},{j})"
        if sum(r.area for r in rects) != 1:
            return "source areas do not sum to 1 (gap in the tiling)"
        images = self.images()
        for i, r in enumerate(images):
            if r.x0 < 0 or r.x1 > 1 or r.y0 < 0 or r.y1 > 1:
                return f"image rectangle {i} leaves the unit square (image-out-of-bounds)"
        for i in range(len(images)):
            for j in range(i + 1, len(images)):
                if images[i].overlaps(images[j]):
                    return f"image rectangles overlap at indices ({i},{j})"
        return None

    def images(self) -> tuple[Rect, ...]:
        return tuple(
            Rect(r.x0 + dx, r.x1 + dx, r.y0 + dy, r.y1 + dy)
            for r, (dx, dy) in zip(self.sources, self.translations)
        )

    @classmethod
    def identity(cls) -> "RectangleExchange":
        return cls((Rect(0, 1, 0, 1),), ((ZERO, ZERO),))

    @classmethod
    def vertical_swap(cls) -> "RectangleExchange":
        h = Fraction(1, 2)
        return cls(
            (Rect(0, h, 0, 1), Rect(h, 1, 0, 1)),
            ((h, ZERO), (-h, ZERO)),
        )

    @classmethod
    def product_rotations(cls, alpha, beta) -> "RectangleExchange":
        """Torus translation (x,y) -> (x+alpha, y+beta) as a 4-rectangle exchange."""
        a, b = as_fraction(alpha) % 1, as_fraction(beta) % 1
        if a == 0 or b == 0:
            raise ValidationError("use nonzero angles for the product construction")
        ca, cb = ONE - a, ONE - b
        return cls(
            (
                Rect(0, ca, 0, cb),
                Rect(ca, 1, 0, cb),
                Rect(0, ca, cb, 1),
                Rect(ca, 1, cb, 1),
            ),
            ((a, b), (a - 1, b), (a, b - 1), (a - 1, b - 1)),
        )

    def apply(self, pt) -> tuple[Fraction, Fraction]:
        x, y = as_fraction(pt[0]), as_fraction(pt[1])
        if not (0 <= x < 1 and 0 <= y < 1):
            raise DomainError(f"point {pt} outside the unit square")
        for r, (dx, dy) in zip(self.sources, self.translations):
            if r.contains((x, y)):
                return (x + dx, y + dy)
        raise DomainError(f"point {pt} not covered by any source rectangle")

    def inverse(self) -> "RectangleExchange":
        return RectangleExchange(
            self.images(), tuple((-dx, -dy) for dx, dy in self.translations)
        )


def rect_apply(T: RectangleExchange, pt) -> tuple[Fraction, Fraction]:
    return T.apply(pt)


def rect_validate(T: RectangleExchange) -> str | None:
    return T.validate()


def interior_discontinuity_segments(T: RectangleExchange, side: str = "image"):
    """Axis-parallel boundary segments of the exchange's rectangles that lie
    strictly inside the unit square.  ``side="image"`` gives the seams the
    forward map creates; ``side="source"`` gives the set where T is
    discontinuous.  Returns (vertical, horizontal) segment lists
    as (coordinate, lo, hi) triples.
    """
    rects = T.images() if side == "image" else T.sources
    vertical = []
    horizontal = []
    for r in rects:
        for x in (r.x0, r.x1):
            if 0 < x < 1:
                vertical.append((x, r.y0, r.y1))
        for y in (r.y0, r.y1):
            if 0 < y < 1:
                horizontal.append((y, r.x0, r.x1))
    return vertical, horizontal


def discontinuity_length(T: RectangleExchange, side: str = "image") -> Fraction:
    """Exact total length of the interior discontinuity segments."""
    from .segments import SegmentSet  # local import to avoid a cycle

    s = SegmentSet()
    vertical, horizontal = interior_discontinuity_segments(T, side)
    for x, lo, hi in vertical:
        s.add_vertical(x, lo, hi)
    for y, lo, hi in horizontal:
        s.add_horizontal(y, lo, hi)
    return s.total_length()


# -- baker's map -------------------------------------------------------------


@dataclass(frozen=True)
class BakerMap:
    """Invertible planar model of the fair 2-symbol Bernoulli shift.

    (x,y) -> (2x mod 1, (y + b)/2) with b the leading binary digit of x.
    Conjugate to the left shift on two-sided binary sequences, with x
    carrying coordinates 0,1,2,... and y carrying -1,-2,...
    """

    def apply(self, pt) -> tuple[Fraction, Fraction]:
        x, y = as_fraction(pt[0]), as_fraction(pt[1])
        if not (0 <= x < 1 and 0 <= y < 1):
            raise DomainError(f"point {pt} outside the unit square")
        b = 1 if x >= Fraction(1, 2) else 0
        return ((2 * x) % 1, (y + b) / 2)

    def apply_inverse(self, pt) -> tuple[Fraction, Fraction]:
        x, y = as_fraction(pt[0]), as_fraction(pt[1])
        if not (0 <= x < 1 and 0 <= y < 1):
            raise DomainError(f"point {pt} outside the unit square")
        b = 1 if y >= Fraction(1, 2) else 0
        return ((x + b) / 2, (2 * y) % 1)


# -- Bernoulli systems -------------------------------------------------------


def _bit_of(value: Fraction, k: int) -> int:
    """k-th binary digit (k >= 1) of a rational in [0,1)."""
    return int((value * 2**k) % 2 >= 1)


class SymbolPoint:
    """A point of the two-sided shift: a lazily evaluated symbol sequence.

    Backed either by an explicit coordinate mapping (default symbol 0), a
    reproducible seeded draw independent across coordinates, or the binary
    digits of a planar baker point.
    """

    def __init__(self, system: "BernoulliSystem", seed=None, values=None, planar=None):
        self.system = system
        self.seed = seed
        self.values = dict(values) if values else {}
        self.planar = planar
        if planar is not None and len(system.symbol_masses) != 2:
            raise ValidationError("planar points exist only for the 2-symbol system")

    def __getitem__(self, t: int) -> int:
        t = int(t)
        if t in self.values:
            return self.values[t]
        if self.planar is not None:
            x, y = self.planar
            symbol = _bit_of(x, t + 1) if t >= 0 else _bit_of(y, -t)
        elif self.seed is not None:
            rng = random.Random(f"{self.seed}:{t}")
            u = rng.random()
            acc = 0.0
            symbol = len(self.system.symbol_masses) - 1
            for k, mass in enumerate(self.system.symbol_masses):
                acc += float(mass)
                if u < acc:
                    symbol = k
                    break
        else:
            symbol = 0
        self.values[t] = symbol
        return symbol


@dataclass(frozen=True)
class BernoulliSystem:
    """Two-sided Bernoulli shift with exact product measure."""

    symbol_masses: tuple[Fraction, ...]

    def __post_init__(self):
        masses = tuple(as_fraction(v) for v in self.symbol_masses)
        object.__setattr__(self, "symbol_masses", masses)
        ProbabilityVector(masses)  # validates

    @classmethod
    def fair(cls, k: int = 2) -> "BernoulliSystem":
        return cls(tuple(Fraction(1, k) for _ in range(k)))

    @property
    def symbol_entropy_bits(self) -> float:
        return shannon_entropy(ProbabilityVector(self.symbol_masses))

    @property
    def has_planar_model(self) -> bool:
        return self.symbol_masses == (Fraction(1, 2), Fraction(1, 2))

    def planar_model(self) -> BakerMap:
        if not self.has_planar_model:
            raise ValidationError("the planar baker model exists only for the fair 2-symbol system")
        return BakerMap()

    def point(self, seed=None, values=None) -> SymbolPoint:
        return SymbolPoint(self, seed=seed, values=values)

    def point_from_planar(self, x, y) -> SymbolPoint:
        self.planar_model()  # raises unless fair 2-symbol
        return SymbolPoint(self, planar=(as_fraction(x), as_fraction(y)))


def bernoulli_label(B: BernoulliSystem, point: SymbolPoint, t: int) -> int:
    """Symbol of the orbit point at time t (coordinate t of the sequence)."""
    return point[t]
