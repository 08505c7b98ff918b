"""Exact unions of axis-parallel segments in the closed unit square.

Used by the boundary-growth ledger: segments are grouped per line, kept as
merged half-open-agnostic intervals (closed unions), and all lengths are
exact rationals.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .core import ZERO


def merge_intervals(intervals: Iterable[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Union of 1D closed intervals as a sorted disjoint list."""
    out: list[tuple[Fraction, Fraction]] = []
    for lo, hi in sorted(i for i in intervals if i[0] < i[1]):
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


class SegmentSet:
    """Union of axis-parallel segments; supports exact total length."""

    def __init__(self):
        self.vertical: dict[Fraction, list[tuple[Fraction, Fraction]]] = {}
        self.horizontal: dict[Fraction, list[tuple[Fraction, Fraction]]] = {}

    def add_vertical(self, x: Fraction, y0: Fraction, y1: Fraction) -> None:
        if y0 >= y1:
            return
        self.vertical[x] = merge_intervals(self.vertical.get(x, []) + [(y0, y1)])

    def add_horizontal(self, y: Fraction, x0: Fraction, x1: Fraction) -> None:
        if x0 >= x1:
            return
        self.horizontal[y] = merge_intervals(self.horizontal.get(y, []) + [(x0, x1)])

    def iter_vertical(self):
        for x, spans in self.vertical.items():
            for lo, hi in spans:
                yield x, lo, hi

    def iter_horizontal(self):
        for y, spans in self.horizontal.items():
            for lo, hi in spans:
                yield y, lo, hi

    def union_with(self, other: "SegmentSet") -> None:
        for x, lo, hi in other.iter_vertical():
            self.add_vertical(x, lo, hi)
        for y, lo, hi in other.iter_horizontal():
            self.add_horizontal(y, lo, hi)

    def total_length(self) -> Fraction:
        total = ZERO
        for spans in self.vertical.values():
            for lo, hi in spans:
                total += hi - lo
        for spans in self.horizontal.values():
            for lo, hi in spans:
                total += hi - lo
        return total

    def copy(self) -> "SegmentSet":
        s = SegmentSet()
        s.vertical = {x: list(v) for x, v in self.vertical.items()}
        s.horizontal = {y: list(v) for y, v in self.horizontal.items()}
        return s
