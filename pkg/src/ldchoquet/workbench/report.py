"""Plain-text rendering of analysis results for the CLI."""

from __future__ import annotations

from ..elicitation import ExplainResult, RorResult
from ..indices import ImportanceProfile, InteractionProfile
from ..model import Problem, ValidationReport
from ..smaa import SmaaResult


def format_validation(report: ValidationReport) -> str:
    if report.ok:
        return "problem is well-formed"
    lines = [f"{len(report.issues)} issue(s):"]
    lines.extend(f"  - {msg}" for msg in report.messages())
    return "\n".join(lines)


def format_conflicts(conflicts: list[tuple[int, ...]], problem: Problem) -> str:
    if not conflicts:
        return "no conflicts found"
    lines = ["minimal conflicting statement sets:"]
    for subset in conflicts:
        parts = [f"#{k} {describe_statement(problem.statements[k])}" for k in subset]
        lines.append("  - {" + "; ".join(parts) + "}")
    return "\n".join(lines)


def describe_statement(st) -> str:
    from ..model import AltPreference, FullRanking, ImportanceComparison, InteractionSign

    if isinstance(st, AltPreference):
        op = ">" if st.strict else ">="
        return f"{st.a} {op} {st.b}"
    if isinstance(st, ImportanceComparison):
        op = ">" if st.strict else ">="
        return f"importance {st.i} {op} {st.j} ({_scope(st.range)})"
    if isinstance(st, InteractionSign):
        return f"interaction {st.i},{st.j} {st.sign} ({_scope(st.range)})"
    if isinstance(st, FullRanking):
        return "ranking " + " > ".join("~".join(g) for g in st.groups)
    return repr(st)


def _scope(rng) -> str:
    from ..model import Comprehensive, IntervalIndex

    if isinstance(rng, Comprehensive):
        return "comprehensive"
    if isinstance(rng, IntervalIndex):
        return f"interval {rng.r}"
    if rng.lo == rng.hi:
        return f"level {rng.lo:g}"
    return f"levels [{rng.lo:g}, {rng.hi:g}]"


def _matrix(names, matrix, fmt) -> str:
    width = max(5, max(len(n) for n in names) + 1)
    head = " " * width + "".join(f"{n:>{width}}" for n in names)
    lines = [head]
    for i, a in enumerate(names):
        row = "".join(f"{fmt(matrix[i][j]):>{width}}" for j in range(len(names)))
        lines.append(f"{a:<{width}}" + row)
    return "\n".join(lines)


def format_ror(result: RorResult) -> str:
    lines = ["necessary relation (rows at least as good as columns):"]
    lines.append(_matrix(result.alternatives, result.necessary, lambda v: "X" if v else "."))
    lines.append("")
    lines.append("possible relation:")
    lines.append(_matrix(result.alternatives, result.possible, lambda v: "X" if v else "."))
    pairs = result.necessary_pairs()
    lines.append("")
    if pairs:
        lines.append("necessary preferences beyond reflexivity: " + ", ".join(f"{a} >= {b}" for a, b in pairs))
    else:
        lines.append("necessary relation is empty beyond reflexivity")
    return "\n".join(lines)


def format_smaa(result: SmaaResult, max_width: int = 12) -> str:
    names = result.alternatives
    lines = [f"SMAA over {result.n_samples} samples (seed {result.config.seed})", ""]
    lines.append("rank acceptability (%, rows = alternatives, columns = ranks):")
    width = max(7, max(len(n) for n in names) + 1)
    head = " " * width + "".join(f"{('b'+str(s+1)):>7}" for s in range(len(names)))
    lines.append(head)
    for i, a in enumerate(names):
        lines.append(f"{a:<{width}}" + "".join(f"{100*result.rai[i, s]:7.2f}" for s in range(len(names))))
    lines.append("")
    lines.append("pairwise winning index (%, row preferred to column):")
    lines.append(_matrix(names, 100 * result.pwi, lambda v: f"{v:.1f}"))
    lines.append("")
    lines.append("expected ranking (best first):")
    for pos, a in enumerate(result.ranking, start=1):
        s = result.summary[a]
        lines.append(
            f"  {pos:>2}. {a:<8} E = {result.expected[a]:8.3f}   "
            f"best {s.best} ({100*s.best_share:.2f}%)  worst {s.worst} ({100*s.worst_share:.2f}%)  "
            f"modes " + ", ".join(f"{p} ({100*b:.1f}%)" for p, b in s.top)
        )
    return "\n".join(lines)


def format_profiles(importance: ImportanceProfile, interaction: InteractionProfile) -> str:
    lines = ["criterion importance (Shapley):"]
    head = f"{'criterion':<12}" + "".join(f"{lbl:>14}" for lbl in importance.level_labels) + f"{'overall':>14}"
    lines.append(head)
    for c in importance.criteria:
        row = "".join(f"{v:14.4f}" for v in importance.per_level[c])
        lines.append(f"{c:<12}{row}{importance.comprehensive[c]:14.4f}")
    lines.append("")
    lines.append("pairwise interaction:")
    head = f"{'pair':<12}" + "".join(f"{lbl:>14}" for lbl in interaction.level_labels) + f"{'overall':>14}"
    lines.append(head)
    for key in interaction.pairs:
        row = "".join(f"{v:14.4f}" for v in interaction.per_level[key])
        lines.append(f"{key[0]}+{key[1]:<10}{row}{interaction.comprehensive[key]:14.4f}")
    return "\n".join(lines)


def format_explain(result: ExplainResult) -> str:
    lines = [
        f"compatible (epsilon* = {result.epsilon_star:g}); barycenter of sampled capacities:",
        "",
        format_profiles(result.importance, result.interaction),
    ]
    return "\n".join(lines)
