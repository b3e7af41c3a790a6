"""Command-line interface.

Exit codes: 0 success, 2 validation/format error, 3 incompatible
preferences, 1 anything else.  ``--json`` switches stdout to JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from .. import elicitation, smaa as smaa_mod
from ..elicitation import IncompatiblePreferencesError
from ..model import validate
from . import report
from .fronts import pareto_fronts
from .io import (
    ProblemBundle,
    ProblemFormatError,
    evaluations_from_csv,
    load_problem,
    smaa_result_to_dict,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INCOMPATIBLE = 3


def _emit(args, payload: dict[str, Any], text: str) -> None:
    if args.json:
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        print(text)


def _load(args) -> ProblemBundle:
    return load_problem(args.problem, args.evaluations)


def _require_valid(bundle: ProblemBundle, args) -> bool:
    rep = validate(bundle.problem)
    if not rep.ok:
        _emit(args, {"valid": False, "issues": rep.messages()}, report.format_validation(rep))
        return False
    return True


def cmd_validate(args) -> int:
    bundle = _load(args)
    rep = validate(bundle.problem)
    _emit(args, {"valid": rep.ok, "issues": rep.messages()}, report.format_validation(rep))
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_check(args) -> int:
    bundle = _load(args)
    if not _require_valid(bundle, args):
        return EXIT_INVALID
    result = elicitation.check_compatibility(elicitation.build_edm(bundle.problem))
    eps = result.epsilon_star
    text = f"epsilon_star={eps:g}" if eps is not None else "epsilon_star=-inf (infeasible)"
    text += "\ncompatible" if result.feasible else "\nincompatible"
    _emit(args, {"epsilon_star": eps, "compatible": result.feasible}, text)
    return EXIT_OK if result.feasible else EXIT_INCOMPATIBLE


def cmd_diagnose(args) -> int:
    bundle = _load(args)
    if not _require_valid(bundle, args):
        return EXIT_INVALID
    cs = elicitation.build_edm(bundle.problem)
    if elicitation.check_compatibility(cs).feasible:
        _emit(args, {"error": "problem is compatible; nothing to diagnose"},
              "problem is compatible; nothing to diagnose")
        return 1
    conflicts = elicitation.diagnose_incompatibility(cs)
    payload = {
        "conflicts": [list(c) for c in conflicts],
        "statements": [report.describe_statement(s) for s in bundle.problem.statements],
    }
    _emit(args, payload, report.format_conflicts(conflicts, bundle.problem))
    return EXIT_OK


def cmd_ror(args) -> int:
    bundle = _load(args)
    if not _require_valid(bundle, args):
        return EXIT_INVALID
    try:
        result = elicitation.ror(bundle.problem)
    except IncompatiblePreferencesError as exc:
        _emit(args, {"error": str(exc)}, f"incompatible preferences: {exc}")
        return EXIT_INCOMPATIBLE
    payload = {
        "alternatives": list(result.alternatives),
        "necessary": result.necessary.tolist(),
        "possible": result.possible.tolist(),
        "necessary_pairs": [list(p) for p in result.necessary_pairs()],
    }
    _emit(args, payload, report.format_ror(result))
    return EXIT_OK


def cmd_smaa(args) -> int:
    bundle = _load(args)
    if not _require_valid(bundle, args):
        return EXIT_INVALID
    try:
        cfg = bundle.sampler_config(
            samples=args.samples,
            burn_in=args.burn_in,
            thinning=args.thin,
            seed=args.seed,
            chains=args.chains,
            epsilon_mode=args.epsilon_mode,
        )
        result = smaa_mod.smaa_run(bundle.problem, cfg)
    except IncompatiblePreferencesError as exc:
        _emit(args, {"error": str(exc)}, f"incompatible preferences: {exc}")
        return EXIT_INCOMPATIBLE
    payload = smaa_result_to_dict(result)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    _emit(args, payload, report.format_smaa(result))
    return EXIT_OK


def cmd_explain(args) -> int:
    bundle = _load(args)
    if not _require_valid(bundle, args):
        return EXIT_INVALID
    try:
        result = elicitation.explain_full_ranking(bundle.problem)
    except IncompatiblePreferencesError as exc:
        text = f"incompatible ranking: {exc}"
        if exc.conflicts:
            text += "\n" + report.format_conflicts(exc.conflicts, bundle.problem)
        _emit(args, {"error": str(exc), "conflicts": [list(c) for c in exc.conflicts]}, text)
        return EXIT_INCOMPATIBLE
    payload = {
        "epsilon_star": result.epsilon_star,
        "barycenter": result.vector.tolist(),
        "importance": {
            "per_level": {c: list(v) for c, v in result.importance.per_level.items()},
            "comprehensive": result.importance.comprehensive,
            "labels": list(result.importance.level_labels),
        },
        "interaction": {
            "per_level": {f"{i}+{j}": list(v) for (i, j), v in result.interaction.per_level.items()},
            "comprehensive": {f"{i}+{j}": v for (i, j), v in result.interaction.comprehensive.items()},
            "labels": list(result.interaction.level_labels),
        },
    }
    _emit(args, payload, report.format_explain(result))
    return EXIT_OK


def cmd_fronts(args) -> int:
    with open(args.evaluations) as fh:
        evaluations = evaluations_from_csv(fh.read())
    fronts = pareto_fronts(evaluations)
    text = "\n".join(f"front {k}: {', '.join(front)}" for k, front in enumerate(fronts, start=1))
    _emit(args, {"fronts": fronts}, text)
    return EXIT_OK


def cmd_fixture(args) -> int:
    from pathlib import Path

    from .fixtures import fixture_file_text, fixture_filenames, fixture_names

    if args.name is None:
        for name in fixture_names():
            print(name)
        return EXIT_OK
    problem_text, eval_text = fixture_file_text(args.name)
    problem_file, eval_file = fixture_filenames(args.name)
    out = Path(args.dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / problem_file).write_text(problem_text)
    (out / eval_file).write_text(eval_text)
    print(f"wrote {out / problem_file} and {out / eval_file}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(store_path=args.store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldchoquet",
        description="Level dependent Choquet integral decision analysis workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_problem_args(p):
        p.add_argument("-p", "--problem", required=True, help="problem JSON file")
        p.add_argument("-e", "--evaluations", required=True, help="evaluation CSV file")
        p.add_argument("--json", action="store_true", help="JSON output")

    p = sub.add_parser("validate", help="check a problem file")
    add_problem_args(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("check", help="compatibility check (prints epsilon_star)")
    add_problem_args(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("diagnose", help="minimal conflicting statement sets")
    add_problem_args(p)
    p.set_defaults(fn=cmd_diagnose)

    p = sub.add_parser("ror", help="necessary and possible preference relations")
    add_problem_args(p)
    p.set_defaults(fn=cmd_ror)

    p = sub.add_parser("smaa", help="rank acceptability and pairwise winning indices")
    add_problem_args(p)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--thin", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--chains", type=int, default=None)
    p.add_argument("--epsilon-mode", choices=("boundary", "fraction"), default=None)
    p.add_argument("--out", help="write the full result JSON to this file")
    p.set_defaults(fn=cmd_smaa)

    p = sub.add_parser("explain", help="full-ranking barycenter explanation")
    add_problem_args(p)
    p.set_defaults(fn=cmd_explain)

    p = sub.add_parser("fronts", help="non-dominated fronts of an evaluation matrix")
    p.add_argument("-e", "--evaluations", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_fronts)

    p = sub.add_parser("fixture", help="list bundled fixtures or write one to disk")
    p.add_argument("name", nargs="?", help="fixture name (omit to list)")
    p.add_argument("--dir", default=".", help="output directory")
    p.set_defaults(fn=cmd_fixture)

    p = sub.add_parser("serve", help="run the HTTP/JSON service")
    p.add_argument("--port", type=int, default=int(os.environ.get("LDC_PORT", "8660")))
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--store", default=None, help="optional JSON file backing the problem store")
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ProblemFormatError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"file not found: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
