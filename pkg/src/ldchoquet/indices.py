"""Shapley importance and pairwise interaction indices for level dependent
capacities: at a level t, on a subinterval, and comprehensive over the
whole scale.

For the interval variant the comprehensive value is the length-weighted
average of the per-interval values; for the piecewise variant the integrand
is piecewise linear in t, so the comprehensive value is computed exactly by
the trapezoid rule over the breakpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import INTERVAL, LevelDependentCapacity, MobiusCapacity, Scale, all_pairs, pair


def _level_blend(scale: Scale, t: float) -> tuple[int, int, float]:
    """Indices (q_lo, q_hi) and weight of q_lo for interpolation at t."""
    r = scale.interval_of(t)
    lo, hi = scale.breakpoints[r - 1], scale.breakpoints[r]
    return r - 1, r, (hi - t) / (hi - lo)


def breakpoint_average_weights(scale: Scale) -> tuple[float, ...]:
    """Exact mean of a piecewise-linear function of t as breakpoint weights.

    Trapezoid rule over the partition divided by (beta - alpha); weights sum
    to one.
    """
    bps = scale.breakpoints
    span = scale.beta - scale.alpha
    weights = []
    for q in range(len(bps)):
        left = bps[q] - bps[q - 1] if q > 0 else 0.0
        right = bps[q + 1] - bps[q] if q < len(bps) - 1 else 0.0
        weights.append((left + right) / (2.0 * span))
    return tuple(weights)


def _check_criterion(ldc: LevelDependentCapacity, i: str) -> None:
    if i not in ldc.criteria:
        raise ValueError(f"unknown criterion {i!r}")


def _per_level(cap: MobiusCapacity, i: str) -> float:
    return cap.shapley(i)


def shapley(
    ldc: LevelDependentCapacity,
    i: str,
    *,
    t: float | None = None,
    interval: int | None = None,
) -> float:
    """Importance of criterion i.

    With ``t`` the value at that level, with ``interval`` the value on the
    1-based subinterval, with neither the comprehensive value (the exact
    mean over the whole scale).
    """
    _check_criterion(ldc, i)
    if t is not None and interval is not None:
        raise ValueError("give at most one of t and interval")
    if ldc.variant == INTERVAL:
        if t is not None:
            interval = ldc.scale.interval_of(t)
        if interval is not None:
            return _per_level(ldc.capacity_for_interval(interval), i)
        lengths = ldc.scale.lengths()
        span = ldc.scale.beta - ldc.scale.alpha
        return sum(
            _per_level(cap, i) * length / span
            for cap, length in zip(ldc.capacities, lengths)
        )
    values = [_per_level(cap, i) for cap in ldc.capacities]
    if t is not None:
        q_lo, q_hi, lam = _level_blend(ldc.scale, t)
        return lam * values[q_lo] + (1.0 - lam) * values[q_hi]
    if interval is not None:
        if not 1 <= interval <= ldc.scale.p:
            raise ValueError(f"interval index {interval} out of range 1..{ldc.scale.p}")
        return 0.5 * (values[interval - 1] + values[interval])
    weights = breakpoint_average_weights(ldc.scale)
    return sum(w * v for w, v in zip(weights, values))


def interaction(
    ldc: LevelDependentCapacity,
    i: str,
    j: str,
    *,
    t: float | None = None,
    interval: int | None = None,
) -> float:
    """Interaction index of the pair {i, j}; scopes as in :func:`shapley`.

    Under 2-additivity the per-interval value is exactly the pair Mobius
    coefficient of that interval's capacity.
    """
    _check_criterion(ldc, i)
    _check_criterion(ldc, j)
    key = pair(i, j)
    if t is not None and interval is not None:
        raise ValueError("give at most one of t and interval")
    if ldc.variant == INTERVAL:
        if t is not None:
            interval = ldc.scale.interval_of(t)
        if interval is not None:
            return ldc.capacity_for_interval(interval).interaction(*tuple(key))
        lengths = ldc.scale.lengths()
        span = ldc.scale.beta - ldc.scale.alpha
        return sum(
            cap.interaction(*tuple(key)) * length / span
            for cap, length in zip(ldc.capacities, lengths)
        )
    values = [cap.interaction(*tuple(key)) for cap in ldc.capacities]
    if t is not None:
        q_lo, q_hi, lam = _level_blend(ldc.scale, t)
        return lam * values[q_lo] + (1.0 - lam) * values[q_hi]
    if interval is not None:
        if not 1 <= interval <= ldc.scale.p:
            raise ValueError(f"interval index {interval} out of range 1..{ldc.scale.p}")
        return 0.5 * (values[interval - 1] + values[interval])
    weights = breakpoint_average_weights(ldc.scale)
    return sum(w * v for w, v in zip(weights, values))


@dataclass(frozen=True)
class ImportanceProfile:
    """Per-criterion importance: one value per interval (interval variant)
    or per breakpoint (piecewise variant), plus the comprehensive value."""

    criteria: tuple[str, ...]
    level_labels: tuple[str, ...]
    per_level: dict[str, tuple[float, ...]]
    comprehensive: dict[str, float]


@dataclass(frozen=True)
class InteractionProfile:
    """Per-pair interaction values, keyed by sorted (i, j) tuples."""

    pairs: tuple[tuple[str, str], ...]
    level_labels: tuple[str, ...]
    per_level: dict[tuple[str, str], tuple[float, ...]]
    comprehensive: dict[tuple[str, str], float]


def _level_labels(ldc: LevelDependentCapacity) -> tuple[str, ...]:
    bps = ldc.scale.breakpoints
    if ldc.variant == INTERVAL:
        labels = []
        for r in range(1, ldc.scale.p + 1):
            close = "]" if r == ldc.scale.p else "["
            labels.append(f"[{bps[r - 1]:g}, {bps[r]:g}{close}")
        return tuple(labels)
    return tuple(f"t={b:g}" for b in bps)


def importance_profile(ldc: LevelDependentCapacity) -> ImportanceProfile:
    per_level = {
        c: tuple(cap.shapley(c) for cap in ldc.capacities) for c in ldc.criteria
    }
    comprehensive = {c: shapley(ldc, c) for c in ldc.criteria}
    return ImportanceProfile(ldc.criteria, _level_labels(ldc), per_level, comprehensive)


def interaction_profile(ldc: LevelDependentCapacity) -> InteractionProfile:
    keys = [tuple(sorted(p)) for p in all_pairs(ldc.criteria)]
    per_level = {
        k: tuple(cap.interaction(*k) for cap in ldc.capacities) for k in keys
    }
    comprehensive = {k: interaction(ldc, *k) for k in keys}
    return InteractionProfile(tuple(keys), _level_labels(ldc), per_level, comprehensive)
