import random
from fractions import Fraction

import pytest

from seqent import (
    AdmissibleSpec,
    BakerMap,
    IntervalExchange,
    ValidationError,
    correlation,
    dist_to_admissible,
    dist_to_identity,
    dist_to_theta,
    golden_rotation,
    mixing_time_scan,
    rigidity_scan,
    triple_correlation,
    triple_correlation_limits,
    vertical_half,
)
from seqent.weaklimits import TestFamily as Family
from seqent.weaklimits import TestSet1D as Dyadic1D
from seqent.weaklimits import TestSet2D as Dyadic2D
from seqent.weaklimits import _scan_distances

F = Fraction

ROT = IntervalExchange.rotation(F(5, 13), alias_limit=10**6)
FAM4 = Family.dyadic_intervals(4)
FAM2D = Family.dyadic_rectangles(4)


def brute_force_preimage(T, intervals, steps):
    """T^-steps of a list of half-open intervals, using only T's raw pieces.

    Deliberately shares no code with the library's correlation path: the
    preimage of [lo,hi) under one application of T is assembled by clipping
    against each source piece's image and translating back.
    """
    cuts = list(T.cuts) + [F(1)]
    for _ in range(steps):
        nxt = []
        for lo, hi in intervals:
            for i, t in enumerate(T.translations):
                a = max(cuts[i] + t, lo)
                b = min(cuts[i + 1] + t, hi)
                if b > a:
                    nxt.append((a - t, b - t))
        intervals = nxt
    return intervals


def brute_force_correlation(T, A, B, m):
    pre = brute_force_preimage(T, [(A.lo, A.hi)], m)
    total = F(0)
    for lo, hi in pre:
        a, b = max(lo, B.lo), min(hi, B.hi)
        if b > a:
            total += b - a
    return total


class TestCorrelation:
    def test_m_zero_is_intersection(self):
        A, B = Dyadic1D(2, 1), Dyadic1D(1, 0)
        assert correlation(ROT, A, B, 0) == F(1, 4)

    def test_rotation_arc_formula(self):
        alpha = F(5, 13)
        A = B = Dyadic1D(1, 0)  # [0, 1/2)
        for m in range(0, 8):
            shift = (m * alpha) % 1
            # overlap of [0,1/2) with [shift, shift+1/2) on the circle
            d = min(shift, 1 - shift)
            expected = F(1, 2) - min(d, F(1, 2))
            assert correlation(ROT, A, B, m) == expected

    def test_baker_vertical_half_decorrelates(self):
        A = B = vertical_half()
        for m in range(1, 10):
            assert correlation(BakerMap(), A, B, m) == F(1, 4)

    def test_no_exact_path_for_rectangle_exchange(self):
        from seqent import RectangleExchange

        with pytest.raises(ValidationError):
            correlation(RectangleExchange.identity(), vertical_half(), vertical_half(), 1)

    def test_measure_preservation_sum_rule(self):
        # sum over a dyadic partition's atoms A of mu(T^-m A cap B) = mu(B)
        B1 = Dyadic1D(2, 3)
        for m in (1, 4, 7):
            total = sum(correlation(ROT, Dyadic1D(3, k), B1, m) for k in range(8))
            assert total == B1.measure
        B2 = Dyadic2D(1, 1, 1, 0)
        for m in (1, 3, 6):
            total = sum(
                correlation(BakerMap(), Dyadic2D(2, k, 0, 0), B2, m) for k in range(4)
            )
            assert total == B2.measure

    def test_brute_force_oracle_agreement(self):
        rng = random.Random(21)
        systems = [
            ROT,
            IntervalExchange((F(1, 2), F(1, 3), F(1, 6)), (2, 1, 0)),
            IntervalExchange((F(2, 7), F(1, 7), F(3, 7), F(1, 7)), (3, 0, 2, 1)),
        ]
        for _ in range(120):
            T = rng.choice(systems)
            la, lb = rng.randint(0, 4), rng.randint(0, 4)
            A = Dyadic1D(la, rng.randrange(2**la))
            B = Dyadic1D(lb, rng.randrange(2**lb))
            m = rng.randint(0, 10)
            assert correlation(T, A, B, m) == brute_force_correlation(T, A, B, m)


class TestDistances:
    def test_full_space_only_family(self):
        fam = Family((Dyadic1D(0, 0),))
        assert dist_to_theta(ROT, 3, fam) == 0.0

    def test_baker_decorrelates_exactly(self):
        for m in (4, 5, 10, 25):
            assert dist_to_theta(BakerMap(), m, FAM2D) == 0.0

    def test_baker_small_m_not_theta(self):
        assert dist_to_theta(BakerMap(), 1, FAM2D) > 0.05

    def test_identity_distance_zero_at_zero(self):
        assert dist_to_identity(ROT, 0, FAM4) == 0.0

    def test_rotation_rigidity_time(self):
        # high-order convergent so that a deep Fibonacci rigidity time stays
        # inside the aliasing guard
        T = golden_rotation(order=60).to_iet()
        from seqent import fibonacci_numbers

        f = fibonacci_numbers(25)
        assert dist_to_identity(T, f[18], Family.dyadic_intervals(3)) < 0.01

    def test_baker_never_rigid(self):
        assert dist_to_identity(BakerMap(), 10, FAM2D) > 0.05

    def test_rotation_never_theta(self):
        T = golden_rotation().to_iet()
        for m in (1, 13, 55, 1000):
            assert dist_to_theta(T, m, Family.dyadic_intervals(6)) > 0.05

    def test_distances_nonnegative(self):
        for m in (1, 2, 5):
            assert dist_to_theta(ROT, m, FAM4) >= 0.0
            assert dist_to_identity(ROT, m, FAM4) >= 0.0

    def test_theta_distance_of_identity_is_constant_in_m(self):
        T = IntervalExchange.identity()
        vals = {dist_to_theta(T, m, FAM4) for m in (1, 5, 9)}
        assert len(vals) == 1


class TestAdmissible:
    def test_pure_theta_reduction(self):
        Q = AdmissibleSpec.pure_theta()
        for m in (1, 3):
            assert dist_to_admissible(ROT, m, Q, FAM4) == dist_to_theta(ROT, m, FAM4)

    def test_pure_identity_reduction(self):
        Q = AdmissibleSpec.pure_identity()
        for m in (1, 3):
            assert dist_to_admissible(ROT, m, Q, FAM4) == dist_to_identity(ROT, m, FAM4)

    def test_self_match(self):
        Q = AdmissibleSpec(F(0), ((5, F(1)),))
        assert dist_to_admissible(ROT, 5, Q, FAM4) == 0.0

    def test_coefficients_validated(self):
        with pytest.raises(ValidationError):
            AdmissibleSpec(F(1, 2), ((1, F(1, 3)),))
        with pytest.raises(ValidationError):
            AdmissibleSpec(F(3, 2), ((1, F(-1, 2)),))


class TestScans:
    def test_fast_rotation_path_matches_generic(self):
        T = golden_rotation().to_iet()
        fam = Family.dyadic_intervals(4)
        ms = [1, 7, 55, 610]
        fast_theta = _scan_distances(T, ms, fam, "theta")
        fast_ident = _scan_distances(T, ms, fam, "identity")
        for m, ft, fi in zip(ms, fast_theta, fast_ident):
            assert ft == dist_to_theta(T, m, fam)
            assert fi == dist_to_identity(T, m, fam)

    def test_mixing_scan_baker(self):
        report = mixing_time_scan(BakerMap(), 0, 0.05, 20, FAM2D)
        values = dict(report.values)
        assert report.min_time in (1, 2, 3)
        assert all(values[m] == 0.0 for m in range(4, 21))

    def test_mixing_scan_identity_constant(self):
        report = mixing_time_scan(IntervalExchange.identity(), 0, 0.05, 10, FAM4)
        vals = {v for _, v in report.values}
        assert len(vals) == 1

    def test_mixing_scan_starts_after_j(self):
        report = mixing_time_scan(BakerMap(), 3, 0.05, 10, FAM2D)
        assert report.values[0][0] == 4

    def test_rigidity_scan_identity_detects_everything(self):
        report = rigidity_scan(IntervalExchange.identity(), 8, 0.01, FAM4)
        assert [m for m, _ in report.events] == list(range(1, 9))

    def test_rigidity_scan_baker_detects_nothing(self):
        report = rigidity_scan(BakerMap(), 30, 0.01, FAM2D)
        assert report.events == ()

    def test_rigidity_scan_golden_superset_of_fibonacci(self):
        from seqent import fibonacci_numbers

        T = golden_rotation().to_iet()
        report = rigidity_scan(T, 2000, 0.02, Family.dyadic_intervals(6))
        detected = {m for m, _ in report.events}
        fibs = [f for f in fibonacci_numbers(25) if 30 <= f <= 2000]
        assert fibs and set(fibs) <= detected


class TestTripleCorrelation:
    def test_baker_three_fold_independence(self):
        A = vertical_half()
        for m, n in ((1, 2), (3, 7), (5, 19)):
            assert triple_correlation(BakerMap(), A, m, n) == F(1, 8)

    def test_identity_gives_measure(self):
        A = Dyadic1D(2, 1)
        assert triple_correlation(IntervalExchange.identity(), A, 2, 5) == A.measure

    def test_equal_times_rejected(self):
        with pytest.raises(ValidationError):
            triple_correlation(BakerMap(), vertical_half(), 3, 3)

    def test_limit_formulas(self):
        assert triple_correlation_limits(F(1, 2)) == (F(1, 4), F(1, 4))
        assert triple_correlation_limits(F(1, 3)) == (F(11, 81), F(1, 9))

    def test_iet_triple_vs_brute_force(self):
        A = Dyadic1D(1, 0)
        m, n = 2, 5
        got = triple_correlation(ROT, A, m, n)
        pre_m = brute_force_preimage(ROT, [(A.lo, A.hi)], m)
        pre_n = brute_force_preimage(ROT, [(A.lo, A.hi)], n)
        total = F(0)
        for lo1, hi1 in pre_m:
            for lo2, hi2 in pre_n:
                a = max(lo1, lo2, A.lo)
                b = min(hi1, hi2, A.hi)
                if b > a:
                    total += b - a
        assert got == total
