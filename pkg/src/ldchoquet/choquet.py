"""Aggregation operators: classical Choquet integral, interval and
piecewise-linear level dependent Choquet integrals, and a midpoint
quadrature oracle used by the test suite.

Evaluations live on the scale [alpha, beta]; all level dependent results
follow the convention ``result = alpha + sum of per-slice integrals`` so
that a single-interval problem reduces exactly to the classical integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import (
    INTERVAL,
    PIECEWISE,
    LevelDependentCapacity,
    MobiusCapacity,
    Scale,
)


def _as_vector(x: Sequence[float], n: int) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (n,):
        raise ValueError(f"evaluation vector of length {n} expected, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("evaluation vector contains non-finite values")
    return v


def choquet(x: Sequence[float], m: MobiusCapacity) -> float:
    """Choquet integral of x with respect to a capacity in Mobius form.

    Two-additive capacities use the closed form
    ``sum m({i}) x_i + sum m({i,j}) min(x_i, x_j)``; general capacities use
    the sorted-difference form with ties broken by criterion index (the
    result does not depend on how ties are broken).
    """
    v = _as_vector(x, len(m.criteria))
    if m.kind == "two_additive":
        total = sum(m.singletons[c] * v[i] for i, c in enumerate(m.criteria))
        idx = {c: i for i, c in enumerate(m.criteria)}
        for k, coeff in m.pairs.items():
            i, j = tuple(k)
            total += coeff * min(v[idx[i]], v[idx[j]])
        return float(total)
    order = sorted(range(len(v)), key=lambda i: (v[i], i))
    total = float(v[order[0]])
    for pos in range(1, len(order)):
        step = v[order[pos]] - v[order[pos - 1]]
        if step == 0.0:
            continue
        upper = frozenset(m.criteria[i] for i in order[pos:])
        total += step * m.mu(upper)
    return total


@dataclass(frozen=True)
class SlicedEvaluations:
    """Per-interval slices of an evaluation vector, measured from each
    subinterval's left end: x_i^r in [0, a_r - a_{r-1}]."""

    scale: Scale
    per_interval: tuple[tuple[float, ...], ...]

    def vector(self, r: int) -> np.ndarray:
        """Slice vector for subinterval r (1-based)."""
        return np.asarray(self.per_interval[r - 1])


def slice_evaluations(x: Sequence[float], scale: Scale, n: int | None = None) -> SlicedEvaluations:
    """Split an evaluation vector across the scale partition.

    Each component satisfies ``x_i^r = clamp(x_i - a_{r-1}, 0, a_r - a_{r-1})``
    and the slices reconstruct ``sum_r x_i^r = x_i - a_0``.
    """
    v = _as_vector(x, len(x) if n is None else n)
    if np.any(v < scale.alpha - 1e-12) or np.any(v > scale.beta + 1e-12):
        raise ValueError(f"evaluations outside scale [{scale.alpha}, {scale.beta}]")
    bps = scale.breakpoints
    slices = []
    for r in range(1, scale.p + 1):
        lo, hi = bps[r - 1], bps[r]
        slices.append(tuple(float(np.clip(xi - lo, 0.0, hi - lo)) for xi in v))
    return SlicedEvaluations(scale, tuple(slices))


def ildc(x: Sequence[float], ldc: LevelDependentCapacity) -> float:
    """Level dependent Choquet integral for the interval variant.

    Computed as ``alpha + sum_r Ch(x^r, mu_r)`` over the per-interval
    slices; for p = 1 this is exactly ``choquet(x, m_1)``.
    """
    if ldc.variant != INTERVAL:
        raise ValueError(f"ildc needs an interval variant capacity, got {ldc.variant!r}")
    sliced = slice_evaluations(x, ldc.scale, n=len(ldc.criteria))
    total = ldc.scale.alpha
    for r in range(1, ldc.scale.p + 1):
        total += choquet(sliced.vector(r), ldc.capacity_for_interval(r))
    return float(total)


def ildc_ordinal_sum(x: Sequence[float], ldc: LevelDependentCapacity) -> float:
    """Interval variant through the ordinal-sum formulation.

    Uses clamped (untranslated) slices ``x~_i^r = clamp(x_i, a_{r-1}, a_r)``
    and subtracts each subinterval's left end; agrees with :func:`ildc` by
    translation invariance of the Choquet integral.
    """
    if ldc.variant != INTERVAL:
        raise ValueError(f"ordinal sum needs an interval variant capacity, got {ldc.variant!r}")
    v = _as_vector(x, len(ldc.criteria))
    bps = ldc.scale.breakpoints
    total = ldc.scale.alpha
    for r in range(1, ldc.scale.p + 1):
        clamped = np.clip(v, bps[r - 1], bps[r])
        total += choquet(clamped, ldc.capacity_for_interval(r)) - bps[r - 1]
    return float(total)


def capacity_at_level(ldc: LevelDependentCapacity, subset, t: float) -> float:
    """mu^L(E, t): linear interpolation between breakpoint capacities for
    the piecewise variant, the containing subinterval's value for the
    interval variant; exact at breakpoints and continuous in t."""
    scale = ldc.scale
    if not scale.contains(t):
        raise ValueError(f"level {t} outside scale [{scale.alpha}, {scale.beta}]")
    if ldc.variant == INTERVAL:
        return ldc.capacity_for_interval(scale.interval_of(t)).mu(subset)
    bps = scale.breakpoints
    r = scale.interval_of(t)  # piece [a_{r-1}, a_r]
    lo, hi = bps[r - 1], bps[r]
    lam = (hi - t) / (hi - lo)
    mu_lo = ldc.capacities[r - 1].mu(subset)
    mu_hi = ldc.capacities[r].mu(subset)
    return float(lam * mu_lo + (1.0 - lam) * mu_hi)


def piecewise_mu_coefficients(
    x: Sequence[float], scale: Scale, criteria: Sequence[str]
) -> dict[tuple[int, frozenset[str]], float]:
    """Closed-form trapezoid coefficients of the piecewise-linear integral.

    Returns weights w such that
    ``pldc(x) = alpha + sum w[(q, E)] * mu^L(E, a_q)``.  Integration starts
    at alpha where the upper-level set is all of G, which reproduces the
    ``+ min(x)`` constant of the definition without a special case.
    """
    v = _as_vector(x, len(criteria))
    if np.any(v < scale.alpha - 1e-12) or np.any(v > scale.beta + 1e-12):
        raise ValueError(f"evaluations outside scale [{scale.alpha}, {scale.beta}]")
    bps = scale.breakpoints
    order = sorted(range(len(v)), key=lambda i: (v[i], i))
    coeffs: dict[tuple[int, frozenset[str]], float] = {}
    lo = scale.alpha
    for pos in range(len(order)):
        hi = float(v[order[pos]])
        if hi - lo <= 0.0:
            lo = max(lo, hi)
            continue
        level_set = frozenset(criteria[i] for i in order[pos:])
        # split [lo, hi] at interior breakpoints; each piece lies in one
        # interpolation cell [a_q, a_{q+1}] where mu^L(E, .) is linear
        cuts = [lo] + [b for b in bps if lo < b < hi] + [hi]
        for u, w_hi in zip(cuts, cuts[1:]):
            q = scale.interval_of((u + w_hi) / 2.0) - 1
            a_lo, a_hi = bps[q], bps[q + 1]
            width = w_hi - u
            delta = a_hi - a_lo
            # trapezoid: average of the interpolation weights at both ends
            w_left = width * ((a_hi - u) + (a_hi - w_hi)) / (2.0 * delta)
            w_right = width * ((u - a_lo) + (w_hi - a_lo)) / (2.0 * delta)
            coeffs[(q, level_set)] = coeffs.get((q, level_set), 0.0) + w_left
            coeffs[(q + 1, level_set)] = coeffs.get((q + 1, level_set), 0.0) + w_right
        lo = hi
    return coeffs


def pldc(x: Sequence[float], ldc: LevelDependentCapacity) -> float:
    """Level dependent Choquet integral for the piecewise-linear variant,
    evaluated through the exact trapezoid decomposition."""
    if ldc.variant != PIECEWISE:
        raise ValueError(f"pldc needs a piecewise variant capacity, got {ldc.variant!r}")
    coeffs = piecewise_mu_coefficients(x, ldc.scale, ldc.criteria)
    total = ldc.scale.alpha
    for (q, subset), w in coeffs.items():
        total += w * ldc.capacities[q].mu(subset)
    return float(total)


def ldc_evaluate(x: Sequence[float], ldc: LevelDependentCapacity) -> float:
    """Dispatch to :func:`ildc` or :func:`pldc` by variant."""
    if ldc.variant == INTERVAL:
        return ildc(x, ldc)
    return pldc(x, ldc)


def ldc_quadrature_oracle(x: Sequence[float], ldc: LevelDependentCapacity, steps: int = 100_000) -> float:
    """Composite midpoint quadrature of the defining integral
    ``int mu^L({i: x_i >= t}, t) dt + min(x)``.

    Panels are cut at the partition breakpoints and at the sorted
    evaluation values so no sample point lands on a discontinuity of the
    interval variant.  Used only as an independent test oracle.
    """
    if steps < 1000:
        raise ValueError("quadrature oracle needs steps >= 1000")
    v = _as_vector(x, len(ldc.criteria))
    lo, hi = float(np.min(v)), float(np.max(v))
    if hi - lo <= 0.0:
        return lo
    cut_set = {lo, hi}
    cut_set.update(float(b) for b in ldc.scale.breakpoints if lo < b < hi)
    cut_set.update(float(xi) for xi in v if lo < xi < hi)
    cuts = sorted(cut_set)
    total_len = hi - lo
    result = lo
    bps = np.asarray(ldc.scale.breakpoints)
    for u, w in zip(cuts, cuts[1:]):
        n_panel = max(1, int(round(steps * (w - u) / total_len)))
        dt = (w - u) / n_panel
        mids = u + (np.arange(n_panel) + 0.5) * dt
        level_set = frozenset(c for c, xi in zip(ldc.criteria, v) if xi >= w - 1e-12)
        if ldc.variant == INTERVAL:
            r_idx = np.clip(np.searchsorted(bps, mids, side="right"), 1, ldc.scale.p)
            mu_values = np.asarray([c.mu(level_set) for c in ldc.capacities])
            values = mu_values[r_idx - 1]
        else:
            mu_at_bp = np.asarray([c.mu(level_set) for c in ldc.capacities])
            values = np.interp(mids, bps, mu_at_bp)
        result += float(values.sum() * dt)
    return result
