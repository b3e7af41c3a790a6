"""Domain types: scales, criteria, evaluation matrices, Mobius capacities,
level dependent capacities, preference statements and whole problems.

All types are immutable after construction; structural invariants are
enforced in ``__post_init__`` (raising ``ValueError``) except for whole
problems, which are checked by :func:`validate` into a report so that a UI
can show every violation at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Literal, Mapping, Sequence, Union

import numpy as np

TOL = 1e-9

INTERVAL = "interval"
PIECEWISE = "piecewise_linear"

Pair = frozenset


def pair(i: str, j: str) -> frozenset[str]:
    """Canonical unordered pair key."""
    if i == j:
        raise ValueError(f"pair needs two distinct criteria, got {i!r} twice")
    return frozenset((i, j))


@dataclass(frozen=True)
class Scale:
    """Evaluation scale [alpha, beta] partitioned by strictly increasing
    breakpoints a_0 < a_1 < ... < a_p with a_0 = alpha and a_p = beta."""

    breakpoints: tuple[float, ...]

    def __post_init__(self) -> None:
        bps = tuple(float(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if len(bps) < 2:
            raise ValueError("scale needs at least two breakpoints (p >= 1)")
        if any(not math.isfinite(b) for b in bps):
            raise ValueError("breakpoints must be finite")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints not strictly increasing")

    @property
    def alpha(self) -> float:
        return self.breakpoints[0]

    @property
    def beta(self) -> float:
        return self.breakpoints[-1]

    @property
    def p(self) -> int:
        """Number of subintervals."""
        return len(self.breakpoints) - 1

    def contains(self, value: float) -> bool:
        return self.alpha - TOL <= value <= self.beta + TOL

    def interval_of(self, t: float) -> int:
        """1-based index r of the subinterval [a_{r-1}, a_r[ containing t.

        The last subinterval is closed, so t = beta maps to p; an interior
        breakpoint belongs to the interval on its right.
        """
        if not self.contains(t):
            raise ValueError(f"level {t} outside scale [{self.alpha}, {self.beta}]")
        r = int(np.searchsorted(np.asarray(self.breakpoints), t, side="right"))
        return min(max(r, 1), self.p)

    def lengths(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.breakpoints, self.breakpoints[1:]))


@dataclass(frozen=True)
class Criterion:
    """A criterion with an increasing direction of preference.

    Decreasing criteria must be pre-negated by the caller.
    """

    id: str
    name: str = ""
    direction: str = "increasing"

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("criterion id must be non-empty")
        if self.direction != "increasing":
            raise ValueError("only increasing criteria are supported; negate decreasing ones")


@dataclass(frozen=True)
class EvaluationMatrix:
    """Alternatives x criteria grid of evaluations."""

    alternatives: tuple[str, ...]
    criteria: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        alts = tuple(self.alternatives)
        crits = tuple(self.criteria)
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "criteria", crits)
        rows = tuple(tuple(float(v) for v in row) for row in self.values)
        object.__setattr__(self, "values", rows)
        if len(set(alts)) != len(alts):
            raise ValueError("alternative ids must be unique")
        if len(rows) != len(alts):
            raise ValueError("one row of values per alternative required")
        for a, row in zip(alts, rows):
            if len(row) != len(crits):
                raise ValueError(f"row for {a!r} has {len(row)} values, expected {len(crits)}")
            if any(not math.isfinite(v) for v in row):
                raise ValueError(f"row for {a!r} contains a non-finite value")

    def row(self, alternative: str) -> np.ndarray:
        return np.asarray(self.values[self.alternatives.index(alternative)])

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class MobiusCapacity:
    """A capacity in Mobius representation.

    ``singletons`` maps each criterion to m({i}); ``pairs`` maps unordered
    pairs to m({i,j}); ``higher`` (general kind only) maps larger subsets.
    Normalization and monotonicity are checked at construction, so a value
    of this type is always a valid capacity.
    """

    criteria: tuple[str, ...]
    singletons: Mapping[str, float]
    pairs: Mapping[frozenset[str], float] = field(default_factory=dict)
    higher: Mapping[frozenset[str], float] = field(default_factory=dict)
    kind: Literal["two_additive", "general"] = "two_additive"

    def __post_init__(self) -> None:
        crits = tuple(self.criteria)
        object.__setattr__(self, "criteria", crits)
        if len(set(crits)) != len(crits):
            raise ValueError("criteria ids must be unique")
        cset = set(crits)
        singles = {c: float(self.singletons.get(c, 0.0)) for c in crits}
        if set(self.singletons) - cset:
            raise ValueError(f"unknown criteria in singletons: {set(self.singletons) - cset}")
        prs: dict[frozenset[str], float] = {}
        for key, v in self.pairs.items():
            k = frozenset(key)
            if len(k) != 2 or not k <= cset:
                raise ValueError(f"invalid pair key {key!r}")
            prs[k] = float(v)
        object.__setattr__(self, "singletons", singles)
        object.__setattr__(self, "pairs", prs)
        hi: dict[frozenset[str], float] = {}
        for key, v in self.higher.items():
            k = frozenset(key)
            if len(k) < 3 or not k <= cset:
                raise ValueError(f"invalid higher-order key {key!r}")
            hi[k] = float(v)
        object.__setattr__(self, "higher", hi)
        if self.kind == "two_additive":
            if hi:
                raise ValueError("two_additive capacity cannot carry |E|>2 coefficients")
            self._check_two_additive()
        elif self.kind == "general":
            if len(crits) > 12:
                raise ValueError("general capacities supported only for n <= 12")
            self._check_general()
        else:
            raise ValueError(f"unknown capacity kind {self.kind!r}")

    # -- invariants -------------------------------------------------------

    def _total_mass(self) -> float:
        return (
            sum(self.singletons.values())
            + sum(self.pairs.values())
            + sum(self.higher.values())
        )

    def _check_two_additive(self) -> None:
        if abs(self._total_mass() - 1.0) > TOL:
            raise ValueError(f"Mobius coefficients sum to {self._total_mass()}, expected 1")
        for i in self.criteria:
            if self.singletons[i] < -TOL:
                raise ValueError(f"m({{{i}}}) = {self.singletons[i]} < 0")
            # Worst case of condition 2.c is E = all partners with negative pair mass.
            worst = self.singletons[i] + sum(
                v for k, v in self.pairs.items() if i in k and v < 0.0
            )
            if worst < -TOL:
                raise ValueError(f"monotonicity violated at criterion {i}: {worst} < 0")

    def _check_general(self) -> None:
        n = len(self.criteria)
        mu = np.empty(1 << n)
        for mask in range(1 << n):
            subset = frozenset(self.criteria[b] for b in range(n) if mask >> b & 1)
            mu[mask] = self.mu(subset)
        if abs(mu[-1] - 1.0) > TOL:
            raise ValueError(f"mu(G) = {mu[-1]}, expected 1")
        for mask in range(1 << n):
            for b in range(n):
                if not mask >> b & 1:
                    if mu[mask | 1 << b] < mu[mask] - TOL:
                        raise ValueError("derived set function is not monotone")

    # -- queries ----------------------------------------------------------

    def coefficient(self, subset: Iterable[str]) -> float:
        s = frozenset(subset)
        if len(s) == 0:
            return 0.0
        if len(s) == 1:
            return self.singletons[next(iter(s))]
        if len(s) == 2:
            return self.pairs.get(s, 0.0)
        return self.higher.get(s, 0.0)

    def mu(self, subset: Iterable[str]) -> float:
        """Derived set function mu(E) = sum of m(B) over B subset of E."""
        s = frozenset(subset)
        unknown = s - set(self.criteria)
        if unknown:
            raise ValueError(f"unknown criteria in subset: {sorted(unknown)}")
        total = sum(self.singletons[i] for i in s)
        total += sum(v for k, v in self.pairs.items() if k <= s)
        total += sum(v for k, v in self.higher.items() if k <= s)
        return total

    def shapley(self, i: str) -> float:
        """Shapley importance of criterion i in closed Mobius form."""
        if i not in self.criteria:
            raise ValueError(f"unknown criterion {i!r}")
        value = self.singletons[i]
        value += sum(v / 2.0 for k, v in self.pairs.items() if i in k)
        value += sum(v / len(k) for k, v in self.higher.items() if i in k)
        return value

    def interaction(self, i: str, j: str) -> float:
        """Pairwise interaction index in Mobius form."""
        key = pair(i, j)
        value = self.pairs.get(key, 0.0)
        value += sum(v / (len(k) - 1) for k, v in self.higher.items() if key <= k)
        return value


def mobius_to_capacity(m: MobiusCapacity, subset: Iterable[str]) -> float:
    """Value mu(E) of the set function derived from Mobius coefficients."""
    return m.mu(subset)


@dataclass(frozen=True)
class LevelDependentCapacity:
    """A level dependent capacity over a partitioned scale.

    The ``interval`` variant stores one capacity per subinterval
    [a_{r-1}, a_r[ (p members, last interval closed); the
    ``piecewise_linear`` variant stores one capacity per breakpoint
    (p + 1 members) and interpolates linearly in between.
    """

    variant: str
    scale: Scale
    capacities: tuple[MobiusCapacity, ...]

    def __post_init__(self) -> None:
        caps = tuple(self.capacities)
        object.__setattr__(self, "capacities", caps)
        if self.variant not in (INTERVAL, PIECEWISE):
            raise ValueError(f"unknown variant {self.variant!r}")
        expected = self.scale.p if self.variant == INTERVAL else self.scale.p + 1
        if len(caps) != expected:
            raise ValueError(
                f"{self.variant} variant over p={self.scale.p} needs "
                f"{expected} capacities, got {len(caps)}"
            )
        crits = caps[0].criteria
        if any(c.criteria != crits for c in caps):
            raise ValueError("all member capacities must share the same criteria")

    @property
    def criteria(self) -> tuple[str, ...]:
        return self.capacities[0].criteria

    def capacity_for_interval(self, r: int) -> MobiusCapacity:
        """Capacity on subinterval r (1-based) for the interval variant."""
        if self.variant != INTERVAL:
            raise ValueError("capacity_for_interval applies to the interval variant")
        if not 1 <= r <= self.scale.p:
            raise ValueError(f"interval index {r} out of range 1..{self.scale.p}")
        return self.capacities[r - 1]

    def capacity_at_breakpoint(self, q: int) -> MobiusCapacity:
        """Capacity at breakpoint a_q (0-based) for the piecewise variant."""
        if self.variant != PIECEWISE:
            raise ValueError("capacity_at_breakpoint applies to the piecewise variant")
        if not 0 <= q <= self.scale.p:
            raise ValueError(f"breakpoint index {q} out of range 0..{self.scale.p}")
        return self.capacities[q]


# -- preference statements -------------------------------------------------


@dataclass(frozen=True)
class Comprehensive:
    """Statement scope: the whole evaluation scale."""


@dataclass(frozen=True)
class IntervalIndex:
    """Statement scope: one subinterval of the partition (1-based)."""

    r: int


@dataclass(frozen=True)
class EvaluationRange:
    """Statement scope: an evaluation range [lo, hi]; lo == hi pins a level."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if self.hi < self.lo:
            raise ValueError(f"empty evaluation range [{self.lo}, {self.hi}]")


StatementRange = Union[Comprehensive, IntervalIndex, EvaluationRange]


@dataclass(frozen=True)
class AltPreference:
    """a is (strictly or weakly) preferred to b; indifference is two weak
    statements in opposite directions."""

    a: str
    b: str
    strict: bool = True


@dataclass(frozen=True)
class ImportanceComparison:
    """Criterion i is at least as important as j on the given scope."""

    i: str
    j: str
    strict: bool = True
    range: StatementRange = field(default_factory=Comprehensive)


@dataclass(frozen=True)
class InteractionSign:
    """Sign of the interaction between i and j on the given scope.

    ``zero`` pins the interaction to exactly zero, which is how a synergy
    that flips into a redundancy across a breakpoint is expressed at the
    breakpoint itself.
    """

    i: str
    j: str
    sign: Literal["positive", "negative", "zero"] = "positive"
    range: StatementRange = field(default_factory=Comprehensive)

    def __post_init__(self) -> None:
        if self.sign not in ("positive", "negative", "zero"):
            raise ValueError(f"unknown interaction sign {self.sign!r}")
        if self.i == self.j:
            raise ValueError("interaction needs two distinct criteria")


@dataclass(frozen=True)
class FullRanking:
    """A complete ranking given as ordered groups; members of one group tie."""

    groups: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        groups = tuple(tuple(g) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        flat = [a for g in groups for a in g]
        if len(set(flat)) != len(flat):
            raise ValueError("an alternative appears twice in the ranking")
        if any(not g for g in groups):
            raise ValueError("empty ranking group")


PreferenceStatement = Union[AltPreference, ImportanceComparison, InteractionSign, FullRanking]


@dataclass(frozen=True)
class Problem:
    """A complete decision problem.

    ``ranked_alternatives`` optionally restricts ROR/SMAA rankings to a
    subset while preference statements may reference any alternative of the
    evaluation matrix (reference alternatives the decision maker knows well
    often are not part of the set being ranked).
    """

    scale: Scale
    criteria: tuple[Criterion, ...]
    evaluations: EvaluationMatrix
    capacity_variant: str = INTERVAL
    capacity_kind: Literal["two_additive", "additive"] = "two_additive"
    statements: tuple[PreferenceStatement, ...] = ()
    ranked_alternatives: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "criteria", tuple(self.criteria))
        object.__setattr__(self, "statements", tuple(self.statements))
        if self.ranked_alternatives is not None:
            object.__setattr__(self, "ranked_alternatives", tuple(self.ranked_alternatives))

    @property
    def criterion_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.criteria)

    def ranked(self) -> tuple[str, ...]:
        if self.ranked_alternatives is not None:
            return self.ranked_alternatives
        return self.evaluations.alternatives


@dataclass(frozen=True)
class ValidationIssue:
    location: str
    message: str

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"{self.location}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.issues

    def messages(self) -> list[str]:
        return [str(i) for i in self.issues]


def _check_range(rng: StatementRange, scale: Scale, where: str, issues: list) -> None:
    if isinstance(rng, IntervalIndex):
        if not 1 <= rng.r <= scale.p:
            issues.append(ValidationIssue(where, f"interval index {rng.r} out of range 1..{scale.p}"))
    elif isinstance(rng, EvaluationRange):
        if not (scale.contains(rng.lo) and scale.contains(rng.hi)):
            issues.append(ValidationIssue(where, f"range [{rng.lo}, {rng.hi}] outside scale"))


def validate(problem: Problem) -> ValidationReport:
    """Check every cross-reference and bound of a problem.

    Returns a report listing all violations; an empty report means the
    problem is well-formed.
    """
    issues: list[ValidationIssue] = []
    scale = problem.scale
    ids = problem.criterion_ids
    if len(set(ids)) != len(ids):
        issues.append(ValidationIssue("criteria", "criterion ids not unique"))
    if tuple(problem.evaluations.criteria) != ids:
        issues.append(
            ValidationIssue("evaluations", "evaluation columns do not match problem criteria")
        )
    alts = set(problem.evaluations.alternatives)
    for a, row in zip(problem.evaluations.alternatives, problem.evaluations.values):
        for cid, v in zip(problem.evaluations.criteria, row):
            if not scale.contains(v):
                issues.append(
                    ValidationIssue(f"evaluations[{a},{cid}]", f"value {v} out of scale")
                )
    if problem.capacity_variant not in (INTERVAL, PIECEWISE):
        issues.append(
            ValidationIssue("capacity_variant", f"unknown variant {problem.capacity_variant!r}")
        )
    if problem.capacity_kind not in ("two_additive", "additive"):
        issues.append(
            ValidationIssue("capacity_kind", f"unknown kind {problem.capacity_kind!r}")
        )
    if problem.ranked_alternatives is not None:
        for a in problem.ranked_alternatives:
            if a not in alts:
                issues.append(ValidationIssue("ranked_alternatives", f"unknown alternative {a!r}"))
    known = set(ids)
    for idx, st in enumerate(problem.statements):
        where = f"statements[{idx}]"
        if isinstance(st, AltPreference):
            for ref in (st.a, st.b):
                if ref not in alts:
                    issues.append(ValidationIssue(where, f"unknown alternative {ref!r}"))
            if st.a == st.b:
                issues.append(ValidationIssue(where, "an alternative cannot be compared to itself"))
        elif isinstance(st, ImportanceComparison):
            for ref in (st.i, st.j):
                if ref not in known:
                    issues.append(ValidationIssue(where, f"unknown criterion {ref!r}"))
            if st.i == st.j:
                issues.append(ValidationIssue(where, "importance comparison needs two criteria"))
            _check_range(st.range, scale, where, issues)
        elif isinstance(st, InteractionSign):
            for ref in (st.i, st.j):
                if ref not in known:
                    issues.append(ValidationIssue(where, f"unknown criterion {ref!r}"))
            _check_range(st.range, scale, where, issues)
        elif isinstance(st, FullRanking):
            for g in st.groups:
                for ref in g:
                    if ref not in alts:
                        issues.append(ValidationIssue(where, f"unknown alternative {ref!r}"))
        else:  # pragma: no cover - dataclass union is closed
            issues.append(ValidationIssue(where, f"unknown statement type {type(st).__name__}"))
    return ValidationReport(tuple(issues))


def all_pairs(criteria: Sequence[str]) -> list[frozenset[str]]:
    """Unordered criteria pairs in a deterministic order."""
    return [frozenset(c) for c in combinations(criteria, 2)]
