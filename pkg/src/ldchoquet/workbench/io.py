"""Problem and result serialization.

Problems are a JSON document (scale, variant, criteria, statements, SMAA
defaults) plus a CSV evaluation matrix with header
``alternative,<criterion ids...>``; decimal points, no thousands
separators.
"""

from __future__ import annotations

import csv
import io as _io
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

from ..model import (
    AltPreference,
    Comprehensive,
    Criterion,
    EvaluationMatrix,
    EvaluationRange,
    FullRanking,
    ImportanceComparison,
    InteractionSign,
    IntervalIndex,
    PreferenceStatement,
    Problem,
    Scale,
)
from ..smaa import SamplerConfig, SmaaResult


class ProblemFormatError(ValueError):
    """A problem or evaluation file does not match the expected schema."""


@dataclass(frozen=True)
class ProblemBundle:
    """A problem together with its file-level metadata."""

    problem: Problem
    name: str = ""
    smaa_defaults: dict[str, Any] | None = None

    def sampler_config(self, **overrides) -> SamplerConfig:
        return sampler_config_from_dict(self.smaa_defaults or {}, **overrides)


# -- evaluations (CSV) -------------------------------------------------------


def evaluations_from_csv(text: str) -> EvaluationMatrix:
    reader = csv.reader(_io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ProblemFormatError("empty evaluation file")
    header = [c.strip() for c in rows[0]]
    if not header or header[0] != "alternative":
        raise ProblemFormatError("evaluation header must start with 'alternative'")
    criteria = tuple(header[1:])
    if not criteria:
        raise ProblemFormatError("evaluation file has no criterion columns")
    alternatives = []
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        cells = [c.strip() for c in row]
        if len(cells) != len(header):
            raise ProblemFormatError(f"line {lineno}: expected {len(header)} cells, got {len(cells)}")
        alternatives.append(cells[0])
        try:
            values.append(tuple(float(c) for c in cells[1:]))
        except ValueError as exc:
            raise ProblemFormatError(f"line {lineno}: non-numeric cell ({exc})") from exc
    try:
        return EvaluationMatrix(tuple(alternatives), criteria, tuple(values))
    except ValueError as exc:
        raise ProblemFormatError(str(exc)) from exc


def evaluations_to_csv(evaluations: EvaluationMatrix) -> str:
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("alternative",) + tuple(evaluations.criteria))
    for alt, row in zip(evaluations.alternatives, evaluations.values):
        writer.writerow((alt,) + tuple(f"{v:g}" for v in row))
    return out.getvalue()


# -- statements --------------------------------------------------------------


def _range_from_dict(d: Any):
    if d is None:
        return Comprehensive()
    kind = d.get("kind")
    if kind == "comprehensive":
        return Comprehensive()
    if kind == "interval":
        return IntervalIndex(int(d["r"]))
    if kind == "levels":
        return EvaluationRange(float(d["lo"]), float(d["hi"]))
    raise ProblemFormatError(f"unknown range kind {kind!r}")


def _range_to_dict(rng) -> dict[str, Any]:
    if isinstance(rng, Comprehensive):
        return {"kind": "comprehensive"}
    if isinstance(rng, IntervalIndex):
        return {"kind": "interval", "r": rng.r}
    return {"kind": "levels", "lo": rng.lo, "hi": rng.hi}


def statement_from_dict(d: dict[str, Any]) -> PreferenceStatement:
    kind = d.get("type")
    try:
        if kind == "alt_preference":
            return AltPreference(str(d["a"]), str(d["b"]), bool(d.get("strict", True)))
        if kind == "importance":
            return ImportanceComparison(
                str(d["i"]), str(d["j"]), bool(d.get("strict", True)), _range_from_dict(d.get("range"))
            )
        if kind == "interaction":
            return InteractionSign(
                str(d["i"]), str(d["j"]), str(d.get("sign", "positive")), _range_from_dict(d.get("range"))
            )
        if kind == "full_ranking":
            return FullRanking(tuple(tuple(str(a) for a in g) for g in d["groups"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemFormatError(f"bad statement {d!r}: {exc}") from exc
    raise ProblemFormatError(f"unknown statement type {kind!r}")


def statement_to_dict(st: PreferenceStatement) -> dict[str, Any]:
    if isinstance(st, AltPreference):
        return {"type": "alt_preference", "a": st.a, "b": st.b, "strict": st.strict}
    if isinstance(st, ImportanceComparison):
        return {
            "type": "importance",
            "i": st.i,
            "j": st.j,
            "strict": st.strict,
            "range": _range_to_dict(st.range),
        }
    if isinstance(st, InteractionSign):
        return {
            "type": "interaction",
            "i": st.i,
            "j": st.j,
            "sign": st.sign,
            "range": _range_to_dict(st.range),
        }
    if isinstance(st, FullRanking):
        return {"type": "full_ranking", "groups": [list(g) for g in st.groups]}
    raise TypeError(f"unknown statement type {type(st).__name__}")


# -- problems ----------------------------------------------------------------


def problem_from_dict(d: dict[str, Any], evaluations: EvaluationMatrix) -> ProblemBundle:
    try:
        scale_d = d["scale"]
        scale = Scale(tuple(float(b) for b in scale_d["breakpoints"]))
        if "alpha" in scale_d and abs(float(scale_d["alpha"]) - scale.alpha) > 1e-12:
            raise ProblemFormatError("scale.alpha does not match breakpoints[0]")
        if "beta" in scale_d and abs(float(scale_d["beta"]) - scale.beta) > 1e-12:
            raise ProblemFormatError("scale.beta does not match breakpoints[-1]")
        criteria = tuple(
            Criterion(str(c["id"]), str(c.get("name", c["id"]))) for c in d["criteria"]
        )
        statements = tuple(statement_from_dict(s) for s in d.get("statements", ()))
        ranked = d.get("ranked_alternatives")
        problem = Problem(
            scale=scale,
            criteria=criteria,
            evaluations=evaluations,
            capacity_variant=str(d.get("capacity_variant", "interval")),
            capacity_kind=str(d.get("capacity_kind", "two_additive")),
            statements=statements,
            ranked_alternatives=tuple(str(a) for a in ranked) if ranked is not None else None,
        )
    except ProblemFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemFormatError(f"bad problem document: {exc}") from exc
    return ProblemBundle(problem, str(d.get("name", "")), d.get("smaa") or {})


def problem_to_dict(bundle: ProblemBundle) -> dict[str, Any]:
    p = bundle.problem
    doc: dict[str, Any] = {
        "name": bundle.name,
        "scale": {
            "alpha": p.scale.alpha,
            "beta": p.scale.beta,
            "breakpoints": list(p.scale.breakpoints),
        },
        "capacity_variant": p.capacity_variant,
        "capacity_kind": p.capacity_kind,
        "criteria": [{"id": c.id, "name": c.name} for c in p.criteria],
        "statements": [statement_to_dict(s) for s in p.statements],
    }
    if p.ranked_alternatives is not None:
        doc["ranked_alternatives"] = list(p.ranked_alternatives)
    if bundle.smaa_defaults:
        doc["smaa"] = dict(bundle.smaa_defaults)
    return doc


def load_problem(problem_path: str | Path, evaluations_path: str | Path) -> ProblemBundle:
    try:
        doc = json.loads(Path(problem_path).read_text())
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{problem_path}: invalid JSON ({exc})") from exc
    evaluations = evaluations_from_csv(Path(evaluations_path).read_text())
    return problem_from_dict(doc, evaluations)


# -- sampler config / results -----------------------------------------------

_CONFIG_KEYS = ("samples", "burn_in", "thinning", "seed", "epsilon_mode", "epsilon_fraction", "chains")


def sampler_config_from_dict(d: dict[str, Any], **overrides) -> SamplerConfig:
    merged: dict[str, Any] = {}
    for key in _CONFIG_KEYS:
        if key in d and d[key] is not None:
            merged[key] = d[key]
    for key, value in overrides.items():
        if value is not None:
            if key not in _CONFIG_KEYS:
                raise ProblemFormatError(f"unknown sampler option {key!r}")
            merged[key] = value
    try:
        return SamplerConfig(**merged)
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"bad sampler configuration: {exc}") from exc


def smaa_result_to_dict(result: SmaaResult) -> dict[str, Any]:
    return {
        "alternatives": list(result.alternatives),
        "rai": [[float(v) for v in row] for row in result.rai],
        "pwi": [[float(v) for v in row] for row in result.pwi],
        "ties": [[float(v) for v in row] for row in result.ties],
        "expected": {a: float(v) for a, v in result.expected.items()},
        "ranking": list(result.ranking),
        "summary": {
            a: {
                "best": s.best,
                "best_share": s.best_share,
                "worst": s.worst,
                "worst_share": s.worst_share,
                "top": [[pos, share] for pos, share in s.top],
            }
            for a, s in result.summary.items()
        },
        "n_samples": result.n_samples,
        "config": asdict(result.config),
    }
