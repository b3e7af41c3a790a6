"""Stochastic multicriteria acceptability analysis over the compatible
capacity polytope: uniform Hit-And-Run sampling, rank acceptability
indices, pairwise winning indices, expected ranking and position
summaries.

The sampler walks in the nullspace of the equality rows starting from the
Chebyshev center, with several independent chains advanced in lockstep and
merged by chain index, so a given seed yields a bit-identical result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .elicitation import (
    ConstraintSystem,
    IncompatiblePreferencesError,
    build_edm,
    check_compatibility,
    utilities_matrix,
)
from .lp import EmptyPolytopeError, chebyshev_center, nullspace_basis
from .model import Problem

_RAY = 1e9


@dataclass(frozen=True)
class SamplerConfig:
    """Hit-And-Run configuration.

    ``epsilon_mode`` decides where strict statement rows are sampled:
    ``boundary`` treats them as weak (the strict boundary has measure
    zero), ``fraction`` keeps a margin of ``epsilon_fraction * epsilon*``.
    """

    samples: int = 100_000
    burn_in: int = 1000
    thinning: int = 10
    seed: int = 0
    epsilon_mode: str = "boundary"
    epsilon_fraction: float = 0.5
    chains: int = 32

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.thinning < 1:
            raise ValueError("thinning must be >= 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if self.chains < 1:
            raise ValueError("chains must be >= 1")
        if self.epsilon_mode not in ("boundary", "fraction"):
            raise ValueError(f"unknown epsilon_mode {self.epsilon_mode!r}")


def _sampling_epsilon(cs: ConstraintSystem, cfg: SamplerConfig) -> float:
    if cfg.epsilon_mode == "boundary":
        return 0.0
    compat = check_compatibility(cs)
    if not compat.feasible:
        raise IncompatiblePreferencesError(
            f"cannot sample an incompatible system (epsilon* = {compat.epsilon_star})"
        )
    return cfg.epsilon_fraction * compat.epsilon_star


def har_sample(cs: ConstraintSystem, cfg: SamplerConfig | None = None) -> np.ndarray:
    """Uniform samples of the constraint polytope, one column per sample.

    Every sample satisfies the equality rows to machine precision (the walk
    moves inside their nullspace) and the inequality rows at the epsilon
    implied by ``epsilon_mode``.
    """
    cfg = cfg or SamplerConfig()
    epsilon = _sampling_epsilon(cs, cfg)
    a_ub, b_ub, a_eq, b_eq = cs.sampling_arrays(epsilon)
    try:
        center, _slack = chebyshev_center(a_ub, b_ub, a_eq, b_eq)
    except EmptyPolytopeError as exc:
        raise IncompatiblePreferencesError(f"empty sampling polytope: {exc}") from exc
    basis = nullspace_basis(a_eq, cs.n_vars) if len(a_eq) else np.eye(cs.n_vars)
    k = basis.shape[1]
    n_samples = cfg.samples
    if k == 0:
        return np.tile(center[:, None], (1, n_samples))
    a_red = a_ub @ basis
    slack0 = b_ub - a_ub @ center
    slack0 = np.maximum(slack0, 0.0)

    chains = min(cfg.chains, n_samples)
    counts = np.full(chains, n_samples // chains)
    counts[: n_samples % chains] += 1
    keep_max = int(counts.max())
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    y = np.zeros((k, chains))
    slack = np.tile(slack0[:, None], (1, chains))
    kept = np.empty((k, chains, keep_max))
    recorded = 0
    total_steps = cfg.burn_in + keep_max * cfg.thinning
    for step in range(1, total_steps + 1):
        direction = rng.standard_normal((k, chains))
        direction /= np.linalg.norm(direction, axis=0, keepdims=True)
        ad = a_red @ direction
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = slack / ad
        pos = ad > 1e-13
        neg = ad < -1e-13
        t_hi = np.where(pos, ratios, _RAY).min(axis=0)
        t_lo = np.where(neg, ratios, -_RAY).max(axis=0)
        u = rng.random(chains)
        t = t_lo + u * (t_hi - t_lo)
        t = np.where(t_hi >= t_lo, t, 0.0)
        y += direction * t
        slack -= ad * t
        slack = np.maximum(slack, 0.0)
        if step % 512 == 0:
            # refresh the incrementally tracked slack against float drift
            slack = np.maximum(b_ub[:, None] - a_ub @ (center[:, None] + basis @ y), 0.0)
        if step > cfg.burn_in and (step - cfg.burn_in) % cfg.thinning == 0:
            kept[:, :, recorded] = y
            recorded += 1
    columns = []
    for c in range(chains):
        columns.append(kept[:, c, : counts[c]])
    y_all = np.concatenate(columns, axis=1)
    samples = center[:, None] + basis @ y_all
    if len(b_ub):
        worst = float((a_ub @ samples - b_ub[:, None]).max())
        if worst > 1e-7:
            raise RuntimeError(f"sampler drifted outside the polytope by {worst}")
    if len(b_eq):
        worst = float(np.abs(a_eq @ samples - b_eq[:, None]).max())
        if worst > 1e-9:
            raise RuntimeError(f"sampler violated equality rows by {worst}")
    return samples


@dataclass(frozen=True)
class PositionSummary:
    """Best/worst attained positions and the most frequent ones."""

    best: int
    best_share: float
    worst: int
    worst_share: float
    top: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class SmaaResult:
    alternatives: tuple[str, ...]
    rai: np.ndarray
    pwi: np.ndarray
    ties: np.ndarray
    expected: dict[str, float]
    ranking: tuple[str, ...]
    summary: dict[str, PositionSummary]
    n_samples: int
    config: SamplerConfig

    def rank_acceptability(self, alternative: str, rank: int) -> float:
        return float(self.rai[self.alternatives.index(alternative), rank - 1])

    def pairwise_winning(self, a: str, b: str) -> float:
        return float(self.pwi[self.alternatives.index(a), self.alternatives.index(b)])


def expected_scores(rai: np.ndarray) -> np.ndarray:
    """E = -sum_s s * b^s(row); works for rows summing to 1 or to 100."""
    ranks = np.arange(1, rai.shape[1] + 1, dtype=float)
    return -(rai @ ranks)


def rank_by_expected(alternatives: Sequence[str], rai: np.ndarray) -> list[str]:
    scores = expected_scores(np.asarray(rai, dtype=float))
    order = sorted(zip(alternatives, scores), key=lambda it: (-it[1], it[0]))
    return [a for a, _ in order]


def expected_ranking(result: SmaaResult) -> list[str]:
    """Alternatives ordered by expected rank score, best first; ties broken
    by alternative id."""
    return list(result.ranking)


def _summaries(alternatives, rai) -> dict[str, PositionSummary]:
    out = {}
    for i, a in enumerate(alternatives):
        row = rai[i]
        attained = np.where(row > 0.0)[0]
        if attained.size == 0:  # pragma: no cover - rows always sum to 1
            out[a] = PositionSummary(0, 0.0, 0, 0.0, ())
            continue
        best = int(attained[0]) + 1
        worst = int(attained[-1]) + 1
        order = np.argsort(-row, kind="stable")
        top = tuple(
            (int(pos) + 1, float(row[pos])) for pos in order[:3] if row[pos] > 0.0
        )
        out[a] = PositionSummary(best, float(row[best - 1]), worst, float(row[worst - 1]), top)
    return out


def smaa_indices(
    alternatives: Sequence[str],
    utilities: np.ndarray,
    cfg: SamplerConfig,
) -> SmaaResult:
    """Accumulate SMAA indices from a (alternatives x samples) utility
    matrix; ranks count strict losses only, so tied alternatives share the
    better position."""
    alts = tuple(alternatives)
    n_alts, n_samples = utilities.shape
    rai_counts = np.zeros((n_alts, n_alts), dtype=np.int64)
    win_counts = np.zeros((n_alts, n_alts), dtype=np.int64)
    tie_counts = np.zeros((n_alts, n_alts), dtype=np.int64)
    chunk = max(1, int(2_000_000 // max(1, n_alts * n_alts)))
    for start in range(0, n_samples, chunk):
        u = utilities[:, start : start + chunk]
        greater = u[:, None, :] > u[None, :, :]
        equal = u[:, None, :] == u[None, :, :]
        win_counts += greater.sum(axis=2)
        tie_counts += equal.sum(axis=2)
        ranks = 1 + greater.sum(axis=0)
        for i in range(n_alts):
            rai_counts[i] += np.bincount(ranks[i] - 1, minlength=n_alts)
    rai = rai_counts / n_samples
    pwi = win_counts / n_samples
    ties = tie_counts / n_samples
    np.fill_diagonal(pwi, 0.0)
    np.fill_diagonal(ties, 1.0)
    expected = dict(zip(alts, expected_scores(rai)))
    ranking = tuple(rank_by_expected(alts, rai))
    return SmaaResult(
        alts,
        rai,
        pwi,
        ties,
        {a: float(v) for a, v in expected.items()},
        ranking,
        _summaries(alts, rai),
        n_samples,
        cfg,
    )


def smaa_run(
    problem: Problem,
    cfg: SamplerConfig | None = None,
    alternatives: Sequence[str] | None = None,
) -> SmaaResult:
    """Sample compatible capacities and accumulate all SMAA indices for the
    problem's ranked alternatives."""
    cfg = cfg or SamplerConfig()
    cs = build_edm(problem)
    compat = check_compatibility(cs)
    if not compat.feasible:
        raise IncompatiblePreferencesError(
            f"problem is incompatible (epsilon* = {compat.epsilon_star})"
        )
    samples = har_sample(cs, cfg)
    alts = tuple(alternatives) if alternatives is not None else problem.ranked()
    coeff = utilities_matrix(cs.layout, problem, alts)
    utilities = coeff @ samples + problem.scale.alpha
    return smaa_indices(alts, utilities, cfg)
