"""Weak-operator-limit diagnostics: correlations, distances to the
independence projection and to the identity, mixing/rigidity scans, and
triple-correlation statistics.

The weak-operator pseudometric is evaluated against a dyadic test family
with geometric level weights.  Each pair (A,B) contributes its matrix
coefficient deviation normalized to the centered indicators
(1_A - mu(A))/sigma(A): without this normalization the fixed thresholds of
the rigidity/mixing diagnostics would be dominated by a handful of coarse
sets.  Correlations themselves are exact rationals on every exact path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import ONE, ZERO, Rect, as_fraction
from .errors import BudgetError, ValidationError
from .systems import BakerMap, IntervalExchange, RectangleExchange, powers_of


# -- test sets and families ----------------------------------------------------


@dataclass(frozen=True)
class TestSet1D:
    """Dyadic interval [k/2^level, (k+1)/2^level)."""

    level: int
    k: int

    def __post_init__(self):
        if self.level < 0 or not 0 <= self.k < 2**self.level:
            raise ValidationError(f"bad dyadic interval ({self.level},{self.k})")

    @property
    def lo(self) -> Fraction:
        return Fraction(self.k, 2**self.level)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.k + 1, 2**self.level)

    @property
    def measure(self) -> Fraction:
        return Fraction(1, 2**self.level)


@dataclass(frozen=True)
class TestSet2D:
    """Dyadic rectangle; doubles as a bit-cylinder of the baker shift.

    Coordinates k >= 0 of the shift carry x-bit k+1, coordinates k < 0
    carry y-bit -k, so the rectangle fixes coords 0..xlevel-1 and
    -1..-ylevel.
    """

    xlevel: int
    xk: int
    ylevel: int
    yk: int

    def __post_init__(self):
        if self.xlevel < 0 or not 0 <= self.xk < 2**self.xlevel:
            raise ValidationError("bad dyadic x-interval")
        if self.ylevel < 0 or not 0 <= self.yk < 2**self.ylevel:
            raise ValidationError("bad dyadic y-interval")

    @property
    def level(self) -> int:
        return self.xlevel + self.ylevel

    @property
    def rect(self) -> Rect:
        return Rect(
            Fraction(self.xk, 2**self.xlevel),
            Fraction(self.xk + 1, 2**self.xlevel),
            Fraction(self.yk, 2**self.ylevel),
            Fraction(self.yk + 1, 2**self.ylevel),
        )

    @property
    def measure(self) -> Fraction:
        return Fraction(1, 2**self.level)

    def cylinder(self) -> dict[int, int]:
        """Fixed shift coordinates -> bits (x MSB first, y MSB first)."""
        out = {}
        for b in range(self.xlevel):
            out[b] = (self.xk >> (self.xlevel - 1 - b)) & 1
        for b in range(self.ylevel):
            out[-(b + 1)] = (self.yk >> (self.ylevel - 1 - b)) & 1
        return out


def vertical_half(k: int = 0) -> TestSet2D:
    """[k/2,(k+1)/2) x [0,1): the generating partition atom of the baker map."""
    return TestSet2D(1, k, 0, 0)


@dataclass(frozen=True)
class TestFamily:
    """Dyadic test sets with geometric level weights.

    The weight of the ordered pair (i,j) is 2^-(level_i + level_j),
    normalized so all pair weights sum to 1; the family always contains
    the full space (level 0).
    """

    sets: tuple

    def __post_init__(self):
        if not self.sets:
            raise ValidationError("test family must be nonempty")
        levels = [s.level for s in self.sets]
        if min(levels) != 0:
            raise ValidationError("test family must include the full space")

    @classmethod
    def dyadic_intervals(cls, depth: int) -> "TestFamily":
        """All dyadic intervals of level 0..depth (2^(depth+1)-1 sets)."""
        sets = [TestSet1D(l, k) for l in range(depth + 1) for k in range(2**l)]
        return cls(tuple(sets))

    @classmethod
    def dyadic_rectangles(cls, depth: int) -> "TestFamily":
        """All dyadic rectangles with per-axis level <= depth // 2."""
        per_axis = depth // 2
        sets = [
            TestSet2D(i, a, j, b)
            for i in range(per_axis + 1)
            for a in range(2**i)
            for j in range(per_axis + 1)
            for b in range(2**j)
        ]
        return cls(tuple(sets))

    def __len__(self):
        return len(self.sets)

    def set_weights(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1, 2**s.level) for s in self.sets)

    def pair_weight_matrix(self) -> np.ndarray:
        w = np.array([float(x) for x in self.set_weights()])
        mat = np.outer(w, w)
        return mat / mat.sum()

    def measures(self) -> tuple[Fraction, ...]:
        return tuple(s.measure for s in self.sets)

    def sigmas(self) -> np.ndarray:
        mu = np.array([float(m) for m in self.measures()])
        return np.sqrt(mu * (1.0 - mu))


# -- exact correlations ----------------------------------------------------------


def _interval_overlap(a0, a1, b0, b1) -> Fraction:
    lo, hi = max(a0, b0), min(a1, b1)
    return hi - lo if hi > lo else ZERO


def _iet_correlation(U: IntervalExchange, A: TestSet1D, B: TestSet1D) -> Fraction:
    """mu(T^-m A intersect B) given U = T^m, by piecewise translation."""
    total = ZERO
    cuts = U.cuts + (ONE,)
    for k, t in enumerate(U.translations):
        lo = max(cuts[k], B.lo, A.lo - t)
        hi = min(cuts[k + 1], B.hi, A.hi - t)
        if hi > lo:
            total += hi - lo
    return total


def _cylinder_measure(cyls: Iterable[dict[int, int]]) -> Fraction:
    merged: dict[int, int] = {}
    for cyl in cyls:
        for coord, bit in cyl.items():
            if merged.setdefault(coord, bit) != bit:
                return ZERO
    return Fraction(1, 2 ** len(merged))


def _shift_cylinder(cyl: dict[int, int], m: int) -> dict[int, int]:
    return {coord + m: bit for coord, bit in cyl.items()}


def correlation(T, A, B, m: int) -> Fraction:
    """mu(T^-m A intersect B), exact.

    Supports interval exchanges with dyadic-interval test sets and the baker
    map with dyadic-rectangle test sets; use :func:`correlation_mc` for
    general rectangle exchanges.
    """
    if isinstance(T, IntervalExchange):
        return _iet_correlation(T.power(m), A, B)
    if isinstance(T, BakerMap):
        return _cylinder_measure([_shift_cylinder(A.cylinder(), m), B.cylinder()])
    raise ValidationError(
        f"no exact correlation path for {type(T).__name__}; use correlation_mc"
    )


def correlation_mc(T: RectangleExchange, A: TestSet2D, B: TestSet2D, m: int,
                   n_samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo mu(T^-m A intersect B) for a rectangle exchange.

    Returns (estimate, 95% normal-approximation half-width).
    """
    import random as _random

    rng = _random.Random(seed)
    rect_a, rect_b = A.rect, B.rect
    denom = 2**64
    hits = 0
    for _ in range(n_samples):
        pt = (Fraction(rng.getrandbits(64), denom), Fraction(rng.getrandbits(64), denom))
        if not rect_b.contains(pt):
            continue
        q = pt
        for _ in range(m):
            q = T.apply(q)
        if rect_a.contains(q):
            hits += 1
    p = hits / n_samples
    return p, 1.96 * math.sqrt(max(p * (1 - p), 1e-12) / n_samples)


def correlation_matrix(T, m: int, family: TestFamily) -> list[list[Fraction]]:
    """Exact mu(T^-m A_i intersect A_j) for every ordered pair."""
    sets = family.sets
    if isinstance(T, IntervalExchange):
        U = T.power(m)
        return [[_iet_correlation(U, a, b) for b in sets] for a in sets]
    if isinstance(T, BakerMap):
        shifted = [_shift_cylinder(a.cylinder(), m) for a in sets]
        cyls = [b.cylinder() for b in sets]
        return [[_cylinder_measure([sa, cb]) for cb in cyls] for sa in shifted]
    raise ValidationError(f"no exact correlation path for {type(T).__name__}")


def intersection_matrix(family: TestFamily) -> list[list[Fraction]]:
    """Exact mu(A_i intersect A_j) (the identity-operator targets)."""
    sets = family.sets
    if isinstance(sets[0], TestSet1D):
        return [[_interval_overlap(a.lo, a.hi, b.lo, b.hi) for b in sets] for a in sets]
    return [[_cylinder_measure([a.cylinder(), b.cylinder()]) for b in sets] for a in sets]


# -- weak distances ---------------------------------------------------------------


def _distance_from_matrices(corr, targets, family: TestFamily,
                            normalized: bool = True) -> float:
    w = family.pair_weight_matrix()
    c = np.array([[float(v) for v in row] for row in corr])
    t = np.array([[float(v) for v in row] for row in targets])
    dev = np.abs(c - t)
    if normalized:
        s = family.sigmas()
        ss = np.outer(s, s)
        dev = np.divide(dev, ss, out=np.zeros_like(dev), where=ss > 0)
    return float((w * dev).sum())


def _theta_targets(family: TestFamily) -> list[list[Fraction]]:
    mu = family.measures()
    return [[a * b for b in mu] for a in mu]


def dist_to_theta(T, m: int, family: TestFamily, normalized: bool = True) -> float:
    """Weighted deviation of the T^m matrix coefficients from independence."""
    return _distance_from_matrices(
        correlation_matrix(T, m, family), _theta_targets(family), family, normalized
    )


def dist_to_identity(T, m: int, family: TestFamily, normalized: bool = True) -> float:
    """Weighted deviation of the T^m matrix coefficients from the identity's."""
    return _distance_from_matrices(
        correlation_matrix(T, m, family), intersection_matrix(family), family, normalized
    )


@dataclass(frozen=True)
class AdmissibleSpec:
    """Convex combination a*Theta + sum_i a_i T^(p_i) with nonnegative weights."""

    theta_weight: Fraction
    terms: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        a = as_fraction(self.theta_weight)
        terms = tuple((int(p), as_fraction(c)) for p, c in self.terms)
        object.__setattr__(self, "theta_weight", a)
        object.__setattr__(self, "terms", terms)
        if a < 0 or any(c < 0 for _, c in terms):
            raise ValidationError("admissible coefficients must be nonnegative")
        if a + sum((c for _, c in terms), ZERO) != 1:
            raise ValidationError("admissible coefficients must sum exactly to 1")

    @classmethod
    def pure_theta(cls) -> "AdmissibleSpec":
        return cls(ONE, ())

    @classmethod
    def pure_identity(cls) -> "AdmissibleSpec":
        return cls(ZERO, ((0, ONE),))


def dist_to_admissible(T, m: int, Q: AdmissibleSpec, family: TestFamily,
                       normalized: bool = True) -> float:
    """Weighted deviation of T^m from the admissible operator Q(T)."""
    mu = family.measures()
    n = len(family)
    targets = [[Q.theta_weight * mu[i] * mu[j] for j in range(n)] for i in range(n)]
    for power, coeff in Q.terms:
        term = correlation_matrix(T, power, family)
        for i in range(n):
            for j in range(n):
                targets[i][j] += coeff * term[i][j]
    return _distance_from_matrices(
        correlation_matrix(T, m, family), targets, family, normalized
    )


# -- fast exact scan for circle rotations -------------------------------------------


def _rotation_scan_values(alpha: Fraction, ms: Sequence[int], family: TestFamily,
                          mode: str, normalized: bool = True) -> np.ndarray:
    """Exact correlations on an integer grid, vectorized over the family.

    Every test-set endpoint and every orbit offset is an integer multiple of
    1/G with G = denominator(alpha) * 2^maxlevel, so all overlaps are exact
    int64 arithmetic; floats appear only in the final weighting.
    """
    p, q = alpha.numerator, alpha.denominator
    depth = max(s.level for s in family.sets)
    G = q << depth
    lo = np.array([int(s.k) << (depth - s.level) for s in family.sets], dtype=np.int64) * q
    length = np.array([1 << (depth - s.level) for s in family.sets], dtype=np.int64) * q
    blo = lo[None, :]
    bhi = (lo + length)[None, :]
    w = family.pair_weight_matrix()
    mu = np.array([float(m) for m in family.measures()])
    if mode == "theta":
        target = np.outer(mu, mu)
    elif mode == "identity":
        t0 = np.minimum(lo[:, None] + length[:, None], bhi) - np.maximum(lo[:, None], blo)
        target = np.maximum(t0, 0) / float(G)
    else:
        raise ValidationError(f"unknown scan mode {mode!r}")
    if normalized:
        s = family.sigmas()
        ss = np.outer(s, s)
        mask = ss > 0
    out = np.empty(len(ms))
    for idx, m in enumerate(ms):
        d = ((m * p) % q) << depth
        alo = (lo - d) % G
        ahi = alo + length
        main = np.minimum(ahi[:, None], bhi) - np.maximum(alo[:, None], blo)
        ov = np.maximum(main, 0)
        wrap = np.minimum(ahi[:, None] - G, bhi) - blo
        ov += np.where(ahi[:, None] > G, np.maximum(wrap, 0), 0)
        dev = np.abs(ov / float(G) - target)
        if normalized:
            dev = np.divide(dev, ss, out=np.zeros_like(dev), where=mask)
        out[idx] = (w * dev).sum()
    return out


# -- scans --------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanReport:
    """Per-m distance trace with threshold events.

    ``min_time`` is the first scanned m whose value crosses the threshold
    (the minimal mixing time for theta scans), or None if no crossing.
    """

    kind: str
    threshold: float
    values: tuple[tuple[int, float], ...]
    events: tuple[tuple[int, float], ...]
    min_time: int | None

    def as_dicts(self) -> list[dict]:
        flagged = dict(self.events)
        return [
            {"m": m, "value": v, "event": int(m in flagged)} for m, v in self.values
        ]


def _scan_distances(T, ms: Sequence[int], family: TestFamily, mode: str,
                    normalized: bool = True) -> list[float]:
    ms = list(ms)
    if not ms:
        return []
    if isinstance(T, IntervalExchange):
        T.check_alias(max(abs(m) for m in ms))
        angle = T.rotation_angle()
        if angle is not None and angle != 0 and isinstance(family.sets[0], TestSet1D):
            return list(_rotation_scan_values(angle, ms, family, mode, normalized))
        targets = _theta_targets(family) if mode == "theta" else intersection_matrix(family)
        values = []
        powers = powers_of(T, ms)
        for m in ms:
            corr = [
                [_iet_correlation(powers[m], a, b) for b in family.sets]
                for a in family.sets
            ]
            values.append(_distance_from_matrices(corr, targets, family, normalized))
        return values
    targets = _theta_targets(family) if mode == "theta" else intersection_matrix(family)
    return [
        _distance_from_matrices(correlation_matrix(T, m, family), targets, family, normalized)
        for m in ms
    ]


def mixing_time_scan(T, j: int, r: float, m_cap: int, family: TestFamily,
                     normalized: bool = True) -> ScanReport:
    """Scan m in (j, m_cap] for the first m with dist-to-Theta above r."""
    if m_cap <= j:
        raise ValidationError("m_cap must exceed j")
    ms = list(range(j + 1, m_cap + 1))
    values = _scan_distances(T, ms, family, "theta", normalized)
    events = tuple((m, v) for m, v in zip(ms, values) if v > r)
    return ScanReport(
        kind="mixing",
        threshold=r,
        values=tuple(zip(ms, values)),
        events=events,
        min_time=events[0][0] if events else None,
    )


def rigidity_scan(T, m_cap: int, eps: float, family: TestFamily,
                  normalized: bool = True) -> ScanReport:
    """List all m <= m_cap with dist-to-identity below eps (rigidity times)."""
    ms = list(range(1, m_cap + 1))
    values = _scan_distances(T, ms, family, "identity", normalized)
    events = tuple((m, v) for m, v in zip(ms, values) if v < eps)
    return ScanReport(
        kind="rigidity",
        threshold=eps,
        values=tuple(zip(ms, values)),
        events=events,
        min_time=events[0][0] if events else None,
    )


# -- triple correlations ---------------------------------------------------------


def _iet_preimage_intervals(T: IntervalExchange, m: int, A: TestSet1D):
    """T^-m A as a sorted list of disjoint intervals, exact."""
    U = T.power(m)
    cuts = U.cuts + (ONE,)
    out = []
    for k, t in enumerate(U.translations):
        lo = max(cuts[k], A.lo - t)
        hi = min(cuts[k + 1], A.hi - t)
        if lo < hi:
            out.append((lo, hi))
    return sorted(out)


def _union_intersection_length(unions) -> Fraction:
    """Total length of the intersection of several interval unions."""
    total = ZERO
    first, rest = unions[0], unions[1:]
    for lo, hi in first:
        pieces = [(lo, hi)]
        for other in rest:
            nxt = []
            for a, b in pieces:
                for c, d in other:
                    x, y = max(a, c), min(b, d)
                    if x < y:
                        nxt.append((x, y))
            pieces = nxt
            if not pieces:
                break
        total += sum((b - a for a, b in pieces), ZERO)
    return total


def triple_correlation(T, A, m: int, n: int) -> Fraction:
    """mu(A intersect T^-m A intersect T^-n A), exact."""
    if m == n:
        raise ValidationError("triple correlation needs distinct times m != n")
    if isinstance(T, IntervalExchange):
        unions = [
            [(A.lo, A.hi)],
            _iet_preimage_intervals(T, m, A),
            _iet_preimage_intervals(T, n, A),
        ]
        return _union_intersection_length(unions)
    if isinstance(T, BakerMap):
        cyl = A.cylinder()
        return _cylinder_measure([cyl, _shift_cylinder(cyl, m), _shift_cylinder(cyl, n)])
    raise ValidationError(f"no exact triple-correlation path for {type(T).__name__}")


def triple_correlation_limits(mu) -> tuple[Fraction, Fraction]:
    """The two candidate weak limits ( (mu + 2 mu^3)/3, mu^2 )."""
    mu = as_fraction(mu)
    return ((mu + 2 * mu**3) / 3, mu * mu)
