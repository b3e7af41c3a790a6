"""Translate decision-maker statements into the linear constraint system
over Mobius coefficients, check compatibility (epsilon*), diagnose
incompatibility as minimal conflicting statement subsets, compute the
necessary/possible preference relations, and explain full rankings by the
barycenter of sampled compatible capacities.

Variables are the Mobius coefficients of the level dependent capacity
parameterization (one block of singleton and pair coefficients per
subinterval or per breakpoint) plus a single shared slack epsilon, capped
at one to keep the LPs bounded.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import lp as lpmod
from .choquet import piecewise_mu_coefficients, slice_evaluations
from .indices import breakpoint_average_weights
from .model import (
    INTERVAL,
    PIECEWISE,
    AltPreference,
    Comprehensive,
    EvaluationRange,
    FullRanking,
    ImportanceComparison,
    InteractionSign,
    IntervalIndex,
    MobiusCapacity,
    LevelDependentCapacity,
    Problem,
    Scale,
    StatementRange,
    validate,
)

EPS_TOL = 1e-9
EPSILON_CAP = 1.0


class IncompatiblePreferencesError(ValueError):
    """The statement set admits no compatible capacity.

    ``conflicts`` carries minimal conflicting statement index subsets when
    they have been diagnosed.
    """

    def __init__(self, message: str, conflicts: list[tuple[int, ...]] | None = None):
        super().__init__(message)
        self.conflicts = conflicts or []


@dataclass(frozen=True)
class CapacityLayout:
    """Index layout of the Mobius coefficient vector.

    One block per subinterval (interval variant) or per breakpoint
    (piecewise variant); inside a block the singleton coefficients come
    first, then the pair coefficients in lexicographic order.
    """

    variant: str
    scale: Scale
    criteria: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.variant not in (INTERVAL, PIECEWISE):
            raise ValueError(f"unknown variant {self.variant!r}")
        if len(self.criteria) > 10:
            raise ValueError("constraint generation supported for n <= 10 criteria")

    @property
    def levels(self) -> int:
        return self.scale.p if self.variant == INTERVAL else self.scale.p + 1

    @property
    def pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(combinations(self.criteria, 2))

    @property
    def block_size(self) -> int:
        n = len(self.criteria)
        return n + n * (n - 1) // 2

    @property
    def n_vars(self) -> int:
        return self.levels * self.block_size

    def block(self, level: int) -> slice:
        if not 0 <= level < self.levels:
            raise ValueError(f"level index {level} out of range 0..{self.levels - 1}")
        start = level * self.block_size
        return slice(start, start + self.block_size)

    def single_index(self, level: int, i: str) -> int:
        return self.block(level).start + self.criteria.index(i)

    def pair_index(self, level: int, i: str, j: str) -> int:
        ii, jj = sorted((self.criteria.index(i), self.criteria.index(j)))
        key = (self.criteria[ii], self.criteria[jj])
        return self.block(level).start + len(self.criteria) + self.pairs.index(key)

    def level_label(self, level: int) -> str:
        if self.variant == INTERVAL:
            return f"r{level + 1}"
        return f"a{level}"

    def var_names(self) -> tuple[str, ...]:
        names = []
        for level in range(self.levels):
            label = self.level_label(level)
            names.extend(f"m[{label}][{c}]" for c in self.criteria)
            names.extend(f"m[{label}][{i}+{j}]" for i, j in self.pairs)
        return tuple(names)

    def capacity_from_vector(self, vec: np.ndarray, level: int, snap: float = 1e-8) -> MobiusCapacity:
        """Materialize one block as a capacity; tiny numeric negatives on
        singleton coefficients are snapped to zero and the mass rescaled."""
        block = np.array(vec[self.block(level)], dtype=float)
        n = len(self.criteria)
        singles = block[:n]
        singles[(singles < 0.0) & (singles > -snap)] = 0.0
        total = singles.sum() + block[n:].sum()
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"block {level} mass {total} too far from 1 to repair")
        singles /= total
        prs = block[n:] / total
        return MobiusCapacity(
            self.criteria,
            dict(zip(self.criteria, singles)),
            {frozenset(p): float(v) for p, v in zip(self.pairs, prs)},
        )

    def ldc_from_vector(self, vec: np.ndarray) -> LevelDependentCapacity:
        caps = tuple(self.capacity_from_vector(vec, level) for level in range(self.levels))
        return LevelDependentCapacity(self.variant, self.scale, caps)


@dataclass(frozen=True)
class Row:
    """One linear constraint over the layout variables plus epsilon.

    ``statements`` lists the indices of the statements that produced the
    row; empty for base (normalization / monotonicity / cap) rows.
    """

    coeffs: np.ndarray
    relation: str
    rhs: float
    eps: float = 0.0
    tag: str = "base"
    statements: frozenset[int] = field(default_factory=frozenset)


@dataclass(frozen=True)
class ConstraintSystem:
    """Rows over the layout variables plus epsilon.

    ``layout`` may be None for ad-hoc polytopes (sampler tests); then the
    variable count comes from the rows themselves.
    """

    layout: CapacityLayout | None
    rows: tuple[Row, ...]
    problem: Problem | None = None

    @classmethod
    def ad_hoc(cls, rows) -> "ConstraintSystem":
        return cls(None, tuple(rows), None)

    @property
    def n_vars(self) -> int:
        if self.layout is not None:
            return self.layout.n_vars
        if not self.rows:
            raise ValueError("cannot infer variable count from an empty system")
        return len(self.rows[0].coeffs)

    def var_names(self) -> tuple[str, ...]:
        if self.layout is not None:
            return self.layout.var_names()
        return tuple(f"x{i}" for i in range(self.n_vars))

    def statement_rows(self) -> tuple[Row, ...]:
        return tuple(r for r in self.rows if r.statements)

    def sampling_arrays(
        self, epsilon: float
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Inequalities (as <=) and equalities over the layout variables
        with epsilon substituted by a fixed value."""
        n = self.n_vars
        a_ub, b_ub, a_eq, b_eq = [], [], [], []
        for row in self.rows:
            rhs = row.rhs - row.eps * epsilon
            coeffs = np.asarray(row.coeffs, dtype=float)
            if row.relation == "=":
                a_eq.append(coeffs)
                b_eq.append(rhs)
                continue
            sign = 1.0 if row.relation == "<=" else -1.0
            lhs = sign * coeffs
            r = sign * rhs
            if np.all(np.abs(lhs) < 1e-15):
                if r < -1e-9:
                    raise IncompatiblePreferencesError(
                        "a constant constraint is violated at the chosen epsilon"
                    )
                continue
            a_ub.append(lhs)
            b_ub.append(r)
        a_ub_arr = np.asarray(a_ub) if a_ub else np.zeros((0, n))
        a_eq_arr = np.asarray(a_eq) if a_eq else np.zeros((0, n))
        return a_ub_arr, np.asarray(b_ub), a_eq_arr, np.asarray(b_eq)


def problem_layout(problem: Problem) -> CapacityLayout:
    return CapacityLayout(problem.capacity_variant, problem.scale, problem.criterion_ids)


# -- utility coefficients ---------------------------------------------------


def utility_vector(layout: CapacityLayout, x) -> np.ndarray:
    """Coefficients u with ``Ch^L(x) = alpha + u . m`` over the layout."""
    vec = np.zeros(layout.n_vars)
    if layout.variant == INTERVAL:
        sliced = slice_evaluations(x, layout.scale, n=len(layout.criteria))
        for level in range(layout.levels):
            sl = sliced.vector(level + 1)
            for i, c in enumerate(layout.criteria):
                vec[layout.single_index(level, c)] = sl[i]
            for i, j in layout.pairs:
                ii, jj = layout.criteria.index(i), layout.criteria.index(j)
                vec[layout.pair_index(level, i, j)] = min(sl[ii], sl[jj])
        return vec
    coeffs = piecewise_mu_coefficients(x, layout.scale, layout.criteria)
    for (q, subset), w in coeffs.items():
        for c in subset:
            vec[layout.single_index(q, c)] += w
        for i, j in combinations(sorted(subset), 2):
            vec[layout.pair_index(q, i, j)] += w
    return vec


def utilities_matrix(layout: CapacityLayout, problem: Problem, alternatives) -> np.ndarray:
    """Stacked utility coefficient rows for the given alternatives."""
    rows = [utility_vector(layout, problem.evaluations.row(a)) for a in alternatives]
    return np.vstack(rows) if rows else np.zeros((0, layout.n_vars))


def _phi_block(layout: CapacityLayout, i: str, level: int) -> np.ndarray:
    vec = np.zeros(layout.n_vars)
    vec[layout.single_index(level, i)] = 1.0
    for j in layout.criteria:
        if j != i:
            vec[layout.pair_index(level, i, j)] = 0.5
    return vec


def _pair_block(layout: CapacityLayout, i: str, j: str, level: int) -> np.ndarray:
    vec = np.zeros(layout.n_vars)
    vec[layout.pair_index(level, i, j)] = 1.0
    return vec


def _intervals_touching(scale: Scale, lo: float, hi: float) -> list[int]:
    """1-based subinterval indices whose [a_{r-1}, a_r[ (last closed)
    intersects [lo, hi]."""
    out = []
    bps = scale.breakpoints
    for r in range(1, scale.p + 1):
        left, right = bps[r - 1], bps[r]
        overlaps = left <= hi and (lo < right or (r == scale.p and lo <= right))
        if overlaps:
            out.append(r)
    return out


def _range_points(scale: Scale, lo: float, hi: float) -> list[float]:
    """Constraint levels for a piecewise range: the endpoints plus every
    breakpoint strictly inside (a piecewise-linear inequality holds on the
    whole range iff it holds at these points)."""
    if hi <= lo:
        return [lo]
    return [lo] + [b for b in scale.breakpoints if lo < b < hi] + [hi]


def _blend_at(layout: CapacityLayout, block_fn, t: float) -> np.ndarray:
    scale = layout.scale
    r = scale.interval_of(t)
    lo, hi = scale.breakpoints[r - 1], scale.breakpoints[r]
    lam = (hi - t) / (hi - lo)
    return lam * block_fn(r - 1) + (1.0 - lam) * block_fn(r)


def scope_vectors(layout: CapacityLayout, block_fn, scope: StatementRange) -> list[np.ndarray]:
    """Coefficient vectors realizing an index statement on a scope.

    ``block_fn(level)`` gives the per-block coefficient vector of the index
    expression; the scope decides which blocks (or blends of blocks) must
    satisfy the statement.
    """
    scale = layout.scale
    if layout.variant == INTERVAL:
        if isinstance(scope, Comprehensive):
            span = scale.beta - scale.alpha
            vec = sum(
                (length / span) * block_fn(r - 1)
                for r, length in zip(range(1, scale.p + 1), scale.lengths())
            )
            return [vec]
        if isinstance(scope, IntervalIndex):
            return [block_fn(scope.r - 1)]
        return [block_fn(r - 1) for r in _intervals_touching(scale, scope.lo, scope.hi)]
    if isinstance(scope, Comprehensive):
        weights = breakpoint_average_weights(scale)
        vec = sum(w * block_fn(q) for q, w in enumerate(weights))
        return [vec]
    if isinstance(scope, IntervalIndex):
        return [block_fn(scope.r - 1), block_fn(scope.r)]
    return [_blend_at(layout, block_fn, t) for t in _range_points(scale, scope.lo, scope.hi)]


# -- system construction ----------------------------------------------------


def _base_rows(layout: CapacityLayout, additive: bool) -> list[Row]:
    rows: list[Row] = []
    n_vars = layout.n_vars
    crits = layout.criteria
    for level in range(layout.levels):
        norm = np.zeros(n_vars)
        norm[layout.block(level)] = 1.0
        rows.append(Row(norm, "=", 1.0, tag="normalization"))
        for i in crits:
            nonneg = np.zeros(n_vars)
            nonneg[layout.single_index(level, i)] = 1.0
            rows.append(Row(nonneg, ">=", 0.0, tag="monotonicity"))
            others = [j for j in crits if j != i]
            for size in range(1, len(others) + 1):
                for subset in combinations(others, size):
                    mono = np.zeros(n_vars)
                    mono[layout.single_index(level, i)] = 1.0
                    for j in subset:
                        mono[layout.pair_index(level, i, j)] = 1.0
                    rows.append(Row(mono, ">=", 0.0, tag="monotonicity"))
        if additive:
            for i, j in layout.pairs:
                zero = np.zeros(n_vars)
                zero[layout.pair_index(level, i, j)] = 1.0
                rows.append(Row(zero, "=", 0.0, tag="additive"))
    cap = Row(np.zeros(n_vars), "<=", EPSILON_CAP, eps=1.0, tag="epsilon-cap")
    rows.append(cap)
    return rows


def _weak_partner(statements, idx: int):
    """Index of the opposite weak statement forming an indifference, if any."""
    st = statements[idx]
    for k, other in enumerate(statements):
        if k == idx or type(other) is not type(st):
            continue
        if isinstance(st, AltPreference):
            if not st.strict and not other.strict and other.a == st.b and other.b == st.a:
                return k
        elif isinstance(st, ImportanceComparison):
            if (
                not st.strict
                and not other.strict
                and other.i == st.j
                and other.j == st.i
                and other.range == st.range
            ):
                return k
    return None


def build_edm(problem: Problem) -> ConstraintSystem:
    """Build the full constraint system for a problem.

    Strict statements share the single slack epsilon; a pair of opposite
    weak statements collapses into one equality row so that sampling can
    walk inside the reduced affine subspace.
    """
    report = validate(problem)
    if not report.ok:
        raise ValueError("invalid problem: " + "; ".join(report.messages()))
    layout = problem_layout(problem)
    rows = _base_rows(layout, additive=problem.capacity_kind == "additive")
    statements = problem.statements
    handled: set[int] = set()
    for idx, st in enumerate(statements):
        if idx in handled:
            continue
        if isinstance(st, AltPreference):
            ua = utility_vector(layout, problem.evaluations.row(st.a))
            ub = utility_vector(layout, problem.evaluations.row(st.b))
            partner = _weak_partner(statements, idx)
            if st.strict:
                rows.append(
                    Row(ua - ub, ">=", 0.0, eps=-1.0, tag=f"{st.a}>{st.b}", statements=frozenset([idx]))
                )
            elif partner is not None:
                handled.add(partner)
                rows.append(
                    Row(ua - ub, "=", 0.0, tag=f"{st.a}~{st.b}", statements=frozenset([idx, partner]))
                )
            else:
                rows.append(
                    Row(ua - ub, ">=", 0.0, tag=f"{st.a}>={st.b}", statements=frozenset([idx]))
                )
        elif isinstance(st, ImportanceComparison):
            diff = lambda level, a=st.i, b=st.j: _phi_block(layout, a, level) - _phi_block(layout, b, level)
            vectors = scope_vectors(layout, diff, st.range)
            partner = _weak_partner(statements, idx)
            for vec in vectors:
                if st.strict:
                    rows.append(
                        Row(vec, ">=", 0.0, eps=-1.0, tag=f"phi:{st.i}>{st.j}", statements=frozenset([idx]))
                    )
                elif partner is not None:
                    rows.append(
                        Row(vec, "=", 0.0, tag=f"phi:{st.i}~{st.j}", statements=frozenset([idx, partner]))
                    )
                else:
                    rows.append(
                        Row(vec, ">=", 0.0, tag=f"phi:{st.i}>={st.j}", statements=frozenset([idx]))
                    )
            if partner is not None:
                handled.add(partner)
        elif isinstance(st, InteractionSign):
            expr = lambda level, a=st.i, b=st.j: _pair_block(layout, a, b, level)
            vectors = scope_vectors(layout, expr, st.range)
            for vec in vectors:
                if st.sign == "positive":
                    rows.append(
                        Row(vec, ">=", 0.0, eps=-1.0, tag=f"I:{st.i}+{st.j}>0", statements=frozenset([idx]))
                    )
                elif st.sign == "negative":
                    rows.append(
                        Row(vec, "<=", 0.0, eps=1.0, tag=f"I:{st.i}+{st.j}<0", statements=frozenset([idx]))
                    )
                else:
                    rows.append(
                        Row(vec, "=", 0.0, tag=f"I:{st.i}+{st.j}=0", statements=frozenset([idx]))
                    )
        elif isinstance(st, FullRanking):
            coeff = {
                a: utility_vector(layout, problem.evaluations.row(a))
                for g in st.groups
                for a in g
            }
            for group in st.groups:
                for a, b in zip(group, group[1:]):
                    rows.append(
                        Row(coeff[a] - coeff[b], "=", 0.0, tag=f"{a}~{b}", statements=frozenset([idx]))
                    )
            for g1, g2 in zip(st.groups, st.groups[1:]):
                a, b = g1[0], g2[0]
                rows.append(
                    Row(coeff[a] - coeff[b], ">=", 0.0, eps=-1.0, tag=f"{a}>{b}", statements=frozenset([idx]))
                )
        else:  # pragma: no cover - closed union
            raise TypeError(f"unknown statement type {type(st).__name__}")
    return ConstraintSystem(layout, tuple(rows), problem)


# -- compatibility ----------------------------------------------------------


@dataclass(frozen=True)
class CompatibilityResult:
    feasible: bool
    epsilon_star: float | None
    vector: np.ndarray | None

    def ldc(self, layout: CapacityLayout) -> LevelDependentCapacity:
        if self.vector is None:
            raise ValueError("no optimal vector available")
        return layout.ldc_from_vector(self.vector)


def _solve_epsilon_lp(cs: ConstraintSystem, extra_rows: list[Row] | None = None):
    rows = cs.rows + tuple(extra_rows or ())
    n = cs.n_vars
    names = cs.var_names() + ("epsilon",)
    objective = (0.0,) * n + (1.0,)
    constraints = [
        lpmod.Constraint(tuple(row.coeffs) + (row.eps,), row.relation, row.rhs)
        for row in rows
    ]
    lp = lpmod.LinearProgram(names, objective, tuple(constraints))
    return lpmod.get_solver()(lp)


def check_compatibility(cs: ConstraintSystem) -> CompatibilityResult:
    """Maximize the shared slack epsilon; compatible iff the LP is optimal
    with epsilon* > 0."""
    sol = _solve_epsilon_lp(cs)
    if sol.status != "optimal":
        return CompatibilityResult(False, None, None)
    vec = np.asarray([sol.assignment[v] for v in cs.var_names()])
    eps = float(sol.objective_value)
    return CompatibilityResult(eps > EPS_TOL, eps, vec)


def diagnose_incompatibility(
    cs: ConstraintSystem, max_size: int = 4, max_results: int = 20
) -> list[tuple[int, ...]]:
    """Minimal conflicting statement subsets by breadth-first enumeration.

    A subset is conflicting when its statements alone (with the base rows)
    give epsilon* <= 0; minimality follows from testing smaller subsets
    first and pruning supersets of found conflicts.
    """
    if cs.problem is None:
        raise ValueError("diagnosis needs the originating problem on the system")
    overall = check_compatibility(cs)
    if overall.feasible:
        raise ValueError("system is compatible; nothing to diagnose")
    statements = cs.problem.statements
    conflicts: list[tuple[int, ...]] = []
    indices = range(len(statements))
    for size in range(1, min(max_size, len(statements)) + 1):
        for subset in combinations(indices, size):
            if len(conflicts) >= max_results:
                return conflicts
            if any(set(found) <= set(subset) for found in conflicts):
                continue
            sub_problem = dataclasses.replace(
                cs.problem, statements=tuple(statements[k] for k in subset)
            )
            result = check_compatibility(build_edm(sub_problem))
            if not result.feasible:
                conflicts.append(subset)
    return conflicts


# -- necessary / possible relations ----------------------------------------


@dataclass(frozen=True)
class RorResult:
    alternatives: tuple[str, ...]
    necessary: np.ndarray
    possible: np.ndarray

    def holds_necessarily(self, a: str, b: str) -> bool:
        return bool(self.necessary[self.alternatives.index(a), self.alternatives.index(b)])

    def holds_possibly(self, a: str, b: str) -> bool:
        return bool(self.possible[self.alternatives.index(a), self.alternatives.index(b)])

    def necessary_pairs(self) -> list[tuple[str, str]]:
        out = []
        for i, a in enumerate(self.alternatives):
            for j, b in enumerate(self.alternatives):
                if i != j and self.necessary[i, j]:
                    out.append((a, b))
        return out


def ror(problem: Problem, alternatives=None) -> RorResult:
    """Necessary and possible preference relations over the ranked set.

    For the ordered pair (a, b): necessary holds when forcing b strictly
    above a is impossible among compatible capacities; possible holds when
    a >= b is attainable by at least one compatible capacity.
    """
    cs = build_edm(problem)
    base = check_compatibility(cs)
    if not base.feasible:
        raise IncompatiblePreferencesError(
            f"problem is incompatible (epsilon* = {base.epsilon_star})"
        )
    alts = tuple(alternatives) if alternatives is not None else problem.ranked()
    layout = cs.layout
    coeff = {a: utility_vector(layout, problem.evaluations.row(a)) for a in alts}
    n = len(alts)
    necessary = np.eye(n, dtype=bool)
    possible = np.eye(n, dtype=bool)
    for i, a in enumerate(alts):
        for j, b in enumerate(alts):
            if i == j:
                continue
            against = Row(coeff[b] - coeff[a], ">=", 0.0, eps=-1.0, tag="ror-necessary")
            sol = _solve_epsilon_lp(cs, [against])
            necessary[i, j] = sol.status != "optimal" or sol.objective_value <= EPS_TOL
            weak = Row(coeff[a] - coeff[b], ">=", 0.0, tag="ror-possible")
            sol = _solve_epsilon_lp(cs, [weak])
            possible[i, j] = sol.status == "optimal" and sol.objective_value > EPS_TOL
    return RorResult(alts, necessary, possible)


# -- full ranking explanation ------------------------------------------------


@dataclass(frozen=True)
class ExplainResult:
    barycenter: LevelDependentCapacity
    vector: np.ndarray
    epsilon_star: float
    importance: "ImportanceProfile"
    interaction: "InteractionProfile"


def explain_full_ranking(problem: Problem, config=None) -> ExplainResult:
    """Average the sampled compatible capacities into a barycenter and
    derive its importance/interaction profiles; the barycenter satisfies
    every constraint by convexity."""
    from .indices import importance_profile, interaction_profile
    from .smaa import SamplerConfig, har_sample

    if not any(isinstance(st, FullRanking) for st in problem.statements):
        raise ValueError("explain_full_ranking needs a FullRanking statement")
    cs = build_edm(problem)
    compat = check_compatibility(cs)
    if not compat.feasible:
        conflicts = diagnose_incompatibility(cs)
        raise IncompatiblePreferencesError(
            "ranking is incompatible with the other statements", conflicts
        )
    cfg = config or SamplerConfig(samples=4000, burn_in=1000, thinning=5, seed=0)
    samples = har_sample(cs, cfg)
    vector = samples.mean(axis=1)
    ldc = cs.layout.ldc_from_vector(vector)
    return ExplainResult(
        ldc,
        vector,
        float(compat.epsilon_star),
        importance_profile(ldc),
        interaction_profile(ldc),
    )
