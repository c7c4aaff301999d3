"""Regularity functionals for point multisets on [0,1].

For sorted points x_1 <= ... <= x_n and the counting deviation
g_n(x) = #{k : x_k <= x} - n x the module computes, in closed form:

    W2^2      squared transport cost to Lebesgue measure,
              n^2 W2^2 = n^2/3 + n sum x_k^2 - sum (2k-1) x_k
    int g^2   squared L2 deviation of the counting function,
              int_0^1 g_n^2 = n sum (x_k - (2k-1)/(2n))^2 + 1/12
    star      sup_x |g_n(x)| = max_k max(|k - n x_k|, |(k-1) - n x_k|)
              (count scale; divide by n for the classical normalization)
    max|H|    sup_x |int_0^x g_n|, found exactly from the piecewise-quadratic
              structure of H (breakpoints, interior zeros of g, endpoints).

The two quadratic functionals coincide after scaling,
int g_n^2 = n^2 W2^2, because sum (2k-1)^2 = n(4n^2-1)/3 makes every
point-independent term cancel; the test suite re-derives this before any
code relies on it.  All closed forms are exact over Fractions and use
compensated float summation otherwise.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .greedy import SequenceState, e_functional
from .numeric import Backend, DomainError, is_rational_scalar

__all__ = [
    "DiscrepancyReport",
    "GFunction",
    "l2_discrepancy_squared",
    "max_abs_H",
    "metric_series",
    "report",
    "star_discrepancy",
    "step_identity_check",
    "w2_squared",
]


def _validated(points: Iterable, allow_empty: bool = False) -> list:
    pts = list(points)
    if not pts and not allow_empty:
        raise DomainError("point set must not be empty")
    prev = None
    for p in pts:
        if not 0 <= p <= 1:
            raise DomainError(f"point {p!r} lies outside [0, 1]")
        if prev is not None and p < prev:
            raise DomainError("points must be sorted ascending")
        prev = p
    return pts


def _all_exact(pts: Sequence) -> bool:
    return all(is_rational_scalar(p) for p in pts)


def w2_squared(points: Iterable) -> Fraction | float:
    """Squared W2 distance between the empirical measure of sorted points
    and Lebesgue measure on [0,1].

    Expands sum_i int_{(i-1)/n}^{i/n} (x - x_i)^2 dx; exact over Fractions.
    """
    pts = _validated(points)
    n = len(pts)
    if _all_exact(pts):
        s2 = sum((p * p for p in pts), Fraction(0))
        s1 = sum(((2 * k - 1) * p for k, p in enumerate(pts, 1)), Fraction(0))
        return (Fraction(n * n, 3) + n * s2 - s1) / (n * n)
    s2 = math.fsum(p * p for p in pts)
    s1 = math.fsum((2 * k - 1) * p for k, p in enumerate(pts, 1))
    return (n * n / 3.0 + n * s2 - s1) / (n * n)


def l2_discrepancy_squared(points: Iterable) -> Fraction | float:
    """int_0^1 (f_n(x) - nx)^2 dx for the sorted multiset (count scale)."""
    pts = _validated(points)
    n = len(pts)
    if _all_exact(pts):
        acc = Fraction(0)
        for k, p in enumerate(pts, 1):
            d = p - Fraction(2 * k - 1, 2 * n)
            acc += d * d
        return n * acc + Fraction(1, 12)
    two_n = 2.0 * n
    return n * math.fsum(
        (p - (2 * k - 1) / two_n) ** 2 for k, p in enumerate(pts, 1)
    ) + 1.0 / 12.0


def star_discrepancy(points: Iterable) -> Fraction | float:
    """sup_x |f_n(x) - nx| on the count scale (not divided by n).

    The supremum of the piecewise-linear deviation is attained against one
    of the one-sided limits at a data point, giving
    max_k max(|k - n x_k|, |(k-1) - n x_k|).
    """
    pts = _validated(points)
    n = len(pts)
    best = None
    for k, p in enumerate(pts, 1):
        np_ = n * p
        d = max(abs(k - np_), abs((k - 1) - np_))
        if best is None or d > best:
            best = d
    return best


@dataclass(frozen=True)
class GFunction:
    """Counting deviation g(x) = #{k : x_k <= x} - n x of a sorted multiset."""

    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        _validated(self.points, allow_empty=True)

    @property
    def n(self) -> int:
        return len(self.points)

    def eval(self, x):
        return bisect.bisect_right(self.points, x) - self.n * x

    def breakpoints(self) -> list:
        """0, the distinct point values, 1 (strictly increasing)."""
        out = [0]
        for p in self.points:
            if p != out[-1]:
                out.append(p)
        if out[-1] != 1:
            out.append(1)
        return out


def max_abs_H(g: GFunction) -> Fraction | float:
    """sup_x |H(x)| with H(x) = int_0^x g, computed exactly.

    H is piecewise quadratic: on a segment where the count is c it has
    derivative c - n x.  The maximum of |H| over [0,1] is attained at a
    segment endpoint or at an interior zero x = c/n of g, so enumerating
    those finitely many candidates is exact.
    """
    n = g.n
    if n == 0:
        return Fraction(0)
    pts = g.points
    exact = _all_exact(pts)
    half = Fraction(1, 2) if exact else 0.5
    breaks = g.breakpoints()
    h = Fraction(0) if exact else 0.0
    best = abs(h)  # H(0) = 0
    for i in range(len(breaks) - 1):
        b, b2 = breaks[i], breaks[i + 1]
        c = bisect.bisect_right(pts, b)  # count on the open segment (b, b2)
        zero = Fraction(c, n) if exact else c / n
        if b < zero < b2:
            hc = h + c * (zero - b) - n * (zero * zero - b * b) * half
            if abs(hc) > best:
                best = abs(hc)
        h = h + c * (b2 - b) - n * (b2 * b2 - b * b) * half
        if abs(h) > best:
            best = abs(h)
    return best


def step_identity_check(state: SequenceState, chosen) -> Fraction | float:
    """Residual of the one-step update identity for int g^2.

    Adding a point at z to a state with deviation g_n must satisfy
    int g_{n+1}^2 = int g_n^2 + E(z) + (z^3 + (1-z)^3)/3.  Returns
    int g_{n+1}^2 minus the right-hand side: exactly zero in the rational
    backend, within roundoff in the float backend.  ``chosen`` may be the
    exact fraction returned by the greedy step even for float states.
    """
    exact = state.backend is Backend.RATIONAL
    z = Fraction(chosen) if exact else float(chosen)
    pts = state.points
    l2_old = l2_discrepancy_squared(pts) if pts else (Fraction(0) if exact else 0.0)
    new_pts = sorted(pts + [z])
    l2_new = l2_discrepancy_squared(new_pts)
    e = e_functional(state, z)
    w = 1 - z
    cubic = (z * z * z + w * w * w) / 3 if exact else (z**3 + w**3) / 3.0
    return l2_new - (l2_old + e + cubic)


@dataclass(frozen=True)
class DiscrepancyReport:
    """Bundle of the four regularity metrics for one point count."""

    n: int
    w2_squared: Fraction | float
    l2_disc_squared: Fraction | float
    star_disc: Fraction | float
    max_abs_h: Fraction | float

    @property
    def star_over_log(self) -> float | None:
        """star / ln n; undefined at n = 1."""
        if self.n <= 1:
            return None
        return float(self.star_disc) / math.log(self.n)


def report(points: Iterable) -> DiscrepancyReport:
    """One-shot report for a sorted multiset, exact when the points are."""
    pts = _validated(points)
    return DiscrepancyReport(
        n=len(pts),
        w2_squared=w2_squared(pts),
        l2_disc_squared=l2_discrepancy_squared(pts),
        star_disc=star_discrepancy(pts),
        max_abs_h=max_abs_H(GFunction(tuple(pts))),
    )


# -- batch float path ----------------------------------------------------


def _maxh_sorted(x: np.ndarray) -> float:
    n = x.size
    b = np.concatenate(([0.0], x, [1.0]))
    c = np.arange(n + 1, dtype=np.float64)  # count on segment i is i
    hinc = c * (b[1:] - b[:-1]) - (n / 2.0) * (b[1:] ** 2 - b[:-1] ** 2)
    hb = np.concatenate(([0.0], np.cumsum(hinc)))
    best = float(np.abs(hb).max())
    zeros = c / n
    mask = (zeros > b[:-1]) & (zeros < b[1:])
    if mask.any():
        z = zeros[mask]
        b0 = b[:-1][mask]
        hc = hb[:-1][mask] + c[mask] * (z - b0) - (n / 2.0) * (z * z - b0 * b0)
        best = max(best, float(np.abs(hc).max()))
    return best


def metric_series(
    values: Sequence[float],
    metrics: Sequence[str] = ("w2", "l2", "star", "maxh"),
    every: int = 1,
) -> dict[str, np.ndarray]:
    """Per-prefix metrics of an append-ordered float sequence.

    Returns arrays keyed by 'n' plus the requested metric names; rows cover
    every ``every``-th prefix size and always the full length.  Uses
    pairwise float summation: adequate for plotting and for bounds with
    real slack, not for near-tie decisions.
    """
    vals = np.asarray(values, dtype=np.float64)
    total = vals.size
    if total == 0:
        raise DomainError("empty sequence")
    if every < 1:
        raise DomainError(f"stride must be >= 1, got {every}")
    want = set(metrics)
    unknown = want - {"w2", "l2", "star", "maxh"}
    if unknown:
        raise DomainError(f"unknown metrics {sorted(unknown)}")
    buf = np.empty(total, dtype=np.float64)
    ns: list[int] = []
    cols: dict[str, list[float]] = {name: [] for name in want}
    for i in range(total):
        v = vals[i]
        pos = int(np.searchsorted(buf[:i], v))
        buf[pos + 1 : i + 1] = buf[pos:i]
        buf[pos] = v
        n = i + 1
        if n % every and n != total:
            continue
        x = buf[:n]
        k2 = 2.0 * np.arange(1, n + 1) - 1.0  # odd weights 1, 3, ..., 2n-1
        ns.append(n)
        if "w2" in want:
            cols["w2"].append(
                (n * n / 3.0 + n * float(x @ x) - float(k2 @ x)) / (n * n)
            )
        if "l2" in want:
            d = x - k2 / (2.0 * n)
            cols["l2"].append(n * float(d @ d) + 1.0 / 12.0)
        if "star" in want:
            nx = n * x
            half_k = 0.5 * (k2 + 1.0)  # k = 1..n
            cols["star"].append(
                float(np.maximum(np.abs(half_k - nx), np.abs(half_k - 1.0 - nx)).max())
            )
        if "maxh" in want:
            cols["maxh"].append(_maxh_sorted(x))
    out: dict[str, np.ndarray] = {"n": np.asarray(ns, dtype=np.int64)}
    for name, col in cols.items():
        out[name] = np.asarray(col, dtype=np.float64)
    return out
