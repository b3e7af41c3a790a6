"""Bundled example problems: the student evaluations (interval, piecewise,
weighted-sum and single-capacity variants) and the university teaching &
learning sample.  These power the acceptance suite and the CLI examples."""

from __future__ import annotations

import json
from importlib import resources

from .io import ProblemBundle, evaluations_from_csv, problem_from_dict

_FIXTURES = {
    "students_interval": ("students_interval.json", "students.csv"),
    "students_piecewise": ("students_piecewise.json", "students.csv"),
    "students_weighted_sum": ("students_weighted_sum.json", "students.csv"),
    "students_single_capacity": ("students_single_capacity.json", "students.csv"),
    "universities": ("universities.json", "universities.csv"),
}


def fixture_names() -> list[str]:
    return sorted(_FIXTURES)


def _read(filename: str) -> str:
    return resources.files(__package__).joinpath("data", filename).read_text()


def fixture_filenames(name: str) -> tuple[str, str]:
    """Canonical (problem, evaluations) file names of a bundled fixture."""
    if name not in _FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {fixture_names()}")
    return _FIXTURES[name]


def fixture_file_text(name: str) -> tuple[str, str]:
    """Raw (problem JSON, evaluations CSV) text of a bundled fixture."""
    if name not in _FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {fixture_names()}")
    problem_file, eval_file = _FIXTURES[name]
    return _read(problem_file), _read(eval_file)


def load_fixture(name: str) -> ProblemBundle:
    problem_text, eval_text = fixture_file_text(name)
    return problem_from_dict(json.loads(problem_text), evaluations_from_csv(eval_text))
