"""Greedy construction of Wasserstein-minimizing point sequences on [0,1].

Given points x_1, ..., x_n the next point is chosen to minimize the squared
W2 transport cost between the empirical measure of the augmented set and
Lebesgue measure on [0,1].  Dropping terms that do not depend on the new
point, this is equivalent to minimizing

    F(x) = (n+1) x^2 - x - 2 sum_k max(x, x_k),

and every minimizer of F has the form (2m+1)/(2n+2) with 0 <= m <= n, lies
strictly inside (0,1), and never coincides with an existing point.  The
greedy step therefore evaluates F only on that candidate set.

An independent route reaches the same choice through the counting-function
deviation g_n(x) = #{k : x_k <= x} - n x: adding a point at z changes
int_0^1 g^2 by E(z) + (z^3 + (1-z)^3)/3 where

    E(z) = -2 int_0^z g_n(x) x dx + 2 int_z^1 g_n(x) (1-x) dx,

so minimizing E(z) + (z^3 + (1-z)^3)/3 over the candidates selects the same
points (the two objectives differ by a constant of the current state).  Both
routes are implemented separately and cross-checked by the test suite.

The rational backend stores points as integer numerators over one shared
denominator, which turns candidate comparison into pure integer arithmetic:
with q = 2n+2 and common denominator D, the value F((2m+1)/q) scaled by
q^2 D is

    (n+1)(2m+1)^2 D - (2m+1) q D (1 + 2 i_m) - 2 S_{i_m} q^2

where i_m counts points below the candidate and S_i is an integer suffix
sum.  Scaling by the positive constant q^2 D preserves order and exact ties.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .numeric import (
    DEFAULT_TIE_TOL,
    Backend,
    BackendMismatch,
    ConfigError,
    DomainError,
    Rational,
    is_float_scalar,
    is_rational_scalar,
)

__all__ = [
    "CandidateEvaluation",
    "ChosenPoint",
    "SequenceState",
    "TIE_RULES",
    "e_functional",
    "enumerate_candidates",
    "extend",
    "generate_sequence",
    "greedy_values",
    "kritzinger_f",
    "next_point",
    "next_point_via_e",
]

TIE_RULES = ("smallest", "largest")


@dataclass(frozen=True)
class ChosenPoint:
    """A greedily chosen point in raw form numerator/(2*step).

    ``step`` is the index the point received in the sequence (the state held
    step-1 points when it was picked), so ``denominator == 2*step`` and the
    numerator is odd.  ``reduced`` gives the value in lowest terms.
    """

    step: int
    numerator: int
    denominator: int

    @property
    def reduced(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def raw(self) -> tuple[int, int]:
        return (self.numerator, self.denominator)


@dataclass(frozen=True)
class CandidateEvaluation:
    """One candidate (2m+1)/(2n+2) paired with its functional value.

    ``value`` is always the exact fraction, in either backend; ``f_value``
    is a Fraction in the rational backend and a float otherwise.  A
    candidate may coincide with an existing point for particular states;
    such candidates can never attain the global minimum and are skipped when
    the next point is selected.
    """

    m: int
    value: Rational
    f_value: Fraction | float


class SequenceState:
    """Sorted point multiset on [0,1] being grown one point at a time.

    Points stay sorted with cached suffix sums so functional evaluations
    need one binary search plus O(1) lookups.  ``history`` records every
    greedily added point in raw (odd numerator, 2*step) form; seed points
    have no raw form and are not in the history.
    """

    __slots__ = (
        "backend",
        "tie_tol",
        "history",
        "seed_count",
        "_den",
        "_nums",
        "_sfx",
        "_arr",
        "_fsfx",
    )

    def __init__(
        self,
        seeds: Iterable = (),
        backend: Backend = Backend.RATIONAL,
        tie_tol: float = DEFAULT_TIE_TOL,
    ) -> None:
        if not isinstance(backend, Backend):
            backend = Backend.from_str(backend)
        self.backend = backend
        self.tie_tol = float(tie_tol)
        self.history: list[ChosenPoint] = []
        seeds = list(seeds)
        self.seed_count = len(seeds)
        if backend is Backend.RATIONAL:
            vals = []
            for s in seeds:
                if not is_rational_scalar(s):
                    raise BackendMismatch(
                        f"rational backend cannot seed from {type(s).__name__} "
                        f"value {s!r}"
                    )
                v = Fraction(s)
                if not 0 <= v <= 1:
                    raise DomainError(f"seed {s!r} lies outside [0, 1]")
                vals.append(v)
            vals.sort()
            den = math.lcm(*(v.denominator for v in vals)) if vals else 1
            self._den = den
            self._nums = [v.numerator * (den // v.denominator) for v in vals]
            self._rebuild_rational_suffix()
            self._arr = None
            self._fsfx = None
        else:
            for s in seeds:
                if not (is_float_scalar(s) or is_rational_scalar(s)):
                    raise BackendMismatch(
                        f"float backend cannot seed from {type(s).__name__} "
                        f"value {s!r}"
                    )
            arr = np.sort(np.asarray([float(s) for s in seeds], dtype=np.float64))
            if arr.size and not (0.0 <= arr[0] and arr[-1] <= 1.0):
                raise DomainError("seed values must lie in [0, 1]")
            self._arr = arr
            self._rebuild_float_suffix()
            self._den = None
            self._nums = None
            self._sfx = None

    # -- bookkeeping ---------------------------------------------------

    def _rebuild_rational_suffix(self) -> None:
        n = len(self._nums)
        sfx = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            sfx[i] = sfx[i + 1] + self._nums[i]
        self._sfx = sfx

    def _rebuild_float_suffix(self) -> None:
        arr = self._arr
        sfx = np.zeros(arr.size + 1, dtype=np.float64)
        if arr.size:
            sfx[:-1] = np.cumsum(arr[::-1])[::-1]
        self._fsfx = sfx

    @property
    def n(self) -> int:
        if self.backend is Backend.RATIONAL:
            return len(self._nums)
        return int(self._arr.size)

    @property
    def points(self) -> list:
        """Sorted point values in the backend's scalar type (fresh list)."""
        if self.backend is Backend.RATIONAL:
            den = self._den
            return [Fraction(v, den) for v in self._nums]
        return [float(x) for x in self._arr]

    @property
    def suffix_sums(self) -> list:
        """suffix_sums[i] = sum of points[i:]; length n+1, last entry zero."""
        if self.backend is Backend.RATIONAL:
            den = self._den
            return [Fraction(s, den) for s in self._sfx]
        return [float(s) for s in self._fsfx]

    def copy(self) -> "SequenceState":
        dup = SequenceState((), backend=self.backend, tie_tol=self.tie_tol)
        dup.history = list(self.history)
        dup.seed_count = self.seed_count
        if self.backend is Backend.RATIONAL:
            dup._den = self._den
            dup._nums = list(self._nums)
            dup._sfx = list(self._sfx)
        else:
            dup._arr = self._arr.copy()
            dup._fsfx = self._fsfx.copy()
        return dup

    def __repr__(self) -> str:
        return (
            f"SequenceState(n={self.n}, backend={self.backend.value}, "
            f"seeds={self.seed_count}, chosen={len(self.history)})"
        )

    # -- mutation ------------------------------------------------------

    def _insert_candidate(self, m: int) -> Fraction:
        """Append candidate m of the current step; returns its exact value."""
        n = self.n
        q = 2 * n + 2
        j = 2 * m + 1
        chosen = Fraction(j, q)
        if self.backend is Backend.RATIONAL:
            den = math.lcm(self._den, q)
            if den != self._den:
                f = den // self._den
                self._nums = [v * f for v in self._nums]
                self._den = den
            bisect.insort(self._nums, j * (den // q))
            self._rebuild_rational_suffix()
        else:
            c = j / q
            pos = int(np.searchsorted(self._arr, c, side="left"))
            self._arr = np.insert(self._arr, pos, c)
            self._rebuild_float_suffix()
        self.history.append(ChosenPoint(step=n + 1, numerator=j, denominator=q))
        return chosen


def _check_scalar(state: SequenceState, x) -> Fraction | float:
    if state.backend is Backend.RATIONAL:
        if not is_rational_scalar(x):
            raise BackendMismatch(
                f"rational-backend state got {type(x).__name__} argument {x!r}"
            )
        x = Fraction(x)
    else:
        if not (is_float_scalar(x) or is_rational_scalar(x)):
            raise BackendMismatch(
                f"float-backend state got {type(x).__name__} argument {x!r}"
            )
        x = float(x)
    if not 0 <= x <= 1:
        raise DomainError(f"argument {x!r} lies outside [0, 1]")
    return x


def kritzinger_f(state: SequenceState, x) -> Fraction | float:
    """Evaluate F(x) = (n+1)x^2 - x - 2 sum_k max(x, x_k).

    Points equal to x contribute x to the max-sum either way, so the split
    into #(points below x) and a suffix sum over points >= x is exact.
    """
    x = _check_scalar(state, x)
    n = state.n
    if state.backend is Backend.RATIONAL:
        i = bisect.bisect_left(state._nums, x * state._den)
        suffix = Fraction(state._sfx[i], state._den)
    else:
        i = int(np.searchsorted(state._arr, x, side="left"))
        suffix = float(state._fsfx[i])
    return (n + 1) * x * x - x - 2 * (x * i + suffix)


def enumerate_candidates(state: SequenceState) -> list[CandidateEvaluation]:
    """All n+1 candidates (2m+1)/(2n+2) with their F values, ascending in m.

    One sweep over the sorted points serves every candidate: candidates
    ascend with m, so the below-count pointer never backtracks.
    """
    n = state.n
    q = 2 * n + 2
    out: list[CandidateEvaluation] = []
    if state.backend is Backend.RATIONAL:
        den = state._den
        nums_q = [v * q for v in state._nums]
        t = 0
        for m in range(n + 1):
            j = 2 * m + 1
            value = Fraction(j, q)
            jd = j * den
            while t < n and nums_q[t] < jd:
                t += 1
            f = (n + 1) * value * value - value - 2 * (
                value * t + Fraction(state._sfx[t], den)
            )
            out.append(CandidateEvaluation(m=m, value=value, f_value=f))
    else:
        ms = np.arange(n + 1)
        c = (2 * ms + 1) / q
        left = np.searchsorted(state._arr, c, side="left")
        f = (n + 1) * c * c - c - 2.0 * (c * left + state._fsfx[left])
        for m in range(n + 1):
            out.append(
                CandidateEvaluation(
                    m=m, value=Fraction(2 * m + 1, q), f_value=float(f[m])
                )
            )
    return out


def _check_tie_rule(tie_rule: str) -> None:
    if tie_rule not in TIE_RULES:
        raise ConfigError(f"unknown tie rule {tie_rule!r}; expected one of {TIE_RULES}")


def _select(objectives, collides, tie_tol, tie_rule: str) -> int:
    """Index of the minimizing entry under the tie rule.

    ``tie_tol`` is None for exact values (ties are exact equality) and an
    absolute tolerance for floats.  Entries flagged in ``collides`` coincide
    with an existing point; they can never attain the true minimum, so they
    are dropped from the tie set rather than selected.
    """
    best = min(objectives)
    if tie_tol is None:
        tie = [m for m, v in enumerate(objectives) if v == best]
    else:
        cut = best + tie_tol
        tie = [m for m, v in enumerate(objectives) if v <= cut]
    eligible = [m for m in tie if not collides[m]]
    if not eligible:
        raise AssertionError(
            "every minimizing candidate coincides with an existing point; "
            "this contradicts the minimizer structure (check tie tolerance)"
        )
    return eligible[0] if tie_rule == "smallest" else eligible[-1]


def _rational_argmin(state: SequenceState, tie_rule: str) -> int:
    n = state.n
    den = state._den
    q = 2 * n + 2
    nums_q = [v * q for v in state._nums]
    sfx = state._sfx
    q_den = q * den
    q2 = q * q
    np1 = n + 1
    values: list[int] = []
    collides: list[bool] = []
    t = 0
    for m in range(n + 1):
        j = 2 * m + 1
        jd = j * den
        while t < n and nums_q[t] < jd:
            t += 1
        collides.append(t < n and nums_q[t] == jd)
        # F((2m+1)/q) scaled by the positive constant q^2 * den
        values.append(np1 * j * j * den - j * q_den * (1 + 2 * t) - 2 * sfx[t] * q2)
    return _select(values, collides, None, tie_rule)


def _float_argmin(state: SequenceState, tie_rule: str) -> int:
    arr = state._arr
    n = int(arr.size)
    q = 2 * n + 2
    ms = np.arange(n + 1)
    c = (2 * ms + 1) / q
    left = np.searchsorted(arr, c, side="left")
    f = (n + 1) * c * c - c - 2.0 * (c * left + state._fsfx[left])
    fmin = float(f.min())
    tie = f <= fmin + state.tie_tol
    # candidates equal to an existing point are ineligible
    right = np.searchsorted(arr, c, side="right")
    tie &= left == right
    idx = np.nonzero(tie)[0]
    if idx.size == 0:
        raise AssertionError(
            "every minimizing candidate coincides with an existing point; "
            "this contradicts the minimizer structure (check tie tolerance)"
        )
    return int(idx[0] if tie_rule == "smallest" else idx[-1])


def next_point(state: SequenceState, tie_rule: str = "smallest") -> Fraction:
    """Greedy step: append and return the F-minimizing candidate.

    Among exact ties (rational backend) or F values within the state's tie
    tolerance of the minimum (float backend), the tie rule picks the
    smallest or largest candidate value.  The returned fraction is the exact
    chosen value even in the float backend; the state stores its backend
    representation and the raw form goes into ``state.history``.
    """
    _check_tie_rule(tie_rule)
    if state.backend is Backend.RATIONAL:
        m = _rational_argmin(state, tie_rule)
    else:
        m = _float_argmin(state, tie_rule)
    return state._insert_candidate(m)


def e_functional(state: SequenceState, z) -> Fraction | float:
    """Evaluate E(z) = -2 int_0^z g x dx + 2 int_z^1 g (1-x) dx exactly.

    Integrating the step structure of g_n termwise gives the closed form

        E(z) = -sum_{x_k <= z} (z^2 - x_k^2)
               + sum_k (1 - max(x_k, z))^2 + n z^2 - n/3,

    used here with prefix/suffix splits at z (points equal to z contribute
    identically to either side).
    """
    z = _check_scalar(state, z)
    n = state.n
    pts = state.points
    j = bisect.bisect_right(pts, z)
    if state.backend is Backend.RATIONAL:
        a = sum((p * p for p in pts[:j]), Fraction(0))
        b = sum(((1 - p) * (1 - p) for p in pts[j:]), Fraction(0))
        n_third = Fraction(n, 3)
    else:
        a = math.fsum(p * p for p in pts[:j])
        b = math.fsum((1.0 - p) ** 2 for p in pts[j:])
        n_third = n / 3
    return -j * z * z + a + j * (1 - z) * (1 - z) + b + n * z * z - n_third


def next_point_via_e(state: SequenceState, tie_rule: str = "smallest") -> Fraction:
    """Greedy step through the independent objective E(z) + (z^3+(1-z)^3)/3.

    Shares no functional-evaluation code with :func:`next_point`; the two
    must select identical points, which the verification suite checks.
    """
    _check_tie_rule(tie_rule)
    n = state.n
    q = 2 * n + 2
    pts = state.points
    exact = state.backend is Backend.RATIONAL
    if exact:
        zero = Fraction(0)
        n_third = Fraction(n, 3)
        third = Fraction(1, 3)
        cands = [Fraction(2 * m + 1, q) for m in range(n + 1)]
    else:
        zero = 0.0
        n_third = n / 3
        third = 1.0 / 3.0
        cands = [(2 * m + 1) / q for m in range(n + 1)]
    pre = [zero] * (n + 1)  # pre[i] = sum of x_k^2 over the i smallest points
    for k, p in enumerate(pts):
        pre[k + 1] = pre[k] + p * p
    suf = [zero] * (n + 1)  # suf[i] = sum of (1-x_k)^2 over points[i:]
    for k in range(n - 1, -1, -1):
        suf[k] = suf[k + 1] + (1 - pts[k]) * (1 - pts[k])
    objectives = []
    collides = []
    t = 0
    for m in range(n + 1):
        c = cands[m]
        while t < n and pts[t] <= c:
            t += 1
        collides.append(t > 0 and pts[t - 1] == c)
        e = -t * c * c + pre[t] + t * (1 - c) * (1 - c) + suf[t] + n * c * c - n_third
        cc = 1 - c
        objectives.append(e + (c * c * c + cc * cc * cc) * third)
    m = _select(objectives, collides, None if exact else state.tie_tol, tie_rule)
    return state._insert_candidate(m)


def extend(
    state: SequenceState,
    count: int,
    tie_rule: str = "smallest",
    via_e: bool = False,
) -> list[Fraction]:
    """Grow the state until it holds ``count`` points; returns the additions."""
    if count < state.n:
        raise DomainError(f"cannot shrink a state of {state.n} points to {count}")
    step = next_point_via_e if via_e else next_point
    return [step(state, tie_rule) for _ in range(count - state.n)]


def generate_sequence(
    seeds: Iterable = (),
    count: int = 1,
    backend: Backend = Backend.RATIONAL,
    tie_rule: str = "smallest",
    tie_tol: float = DEFAULT_TIE_TOL,
) -> SequenceState:
    """Build a state from seeds and greedily extend it to ``count`` points."""
    state = SequenceState(seeds, backend=backend, tie_tol=tie_tol)
    extend(state, count, tie_rule)
    return state


def greedy_values(
    seeds: Sequence[float] = (),
    count: int = 1,
    tie_rule: str = "smallest",
    tie_tol: float = DEFAULT_TIE_TOL,
) -> np.ndarray:
    """Float-backend run returning values in append order (seeds first)."""
    state = SequenceState(seeds, backend=Backend.FLOAT, tie_tol=tie_tol)
    chosen = extend(state, count, tie_rule)
    vals = [float(s) for s in seeds] + [float(c) for c in chosen]
    return np.asarray(vals, dtype=np.float64)
