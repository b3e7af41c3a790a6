"""File formats, CLI, HTTP service, Pareto-front utility and reports."""

from .fronts import dominates, pareto_fronts
from .io import (
    ProblemBundle,
    ProblemFormatError,
    evaluations_from_csv,
    evaluations_to_csv,
    load_problem,
    problem_from_dict,
    problem_to_dict,
    sampler_config_from_dict,
    smaa_result_to_dict,
)
from .fixtures import fixture_names, load_fixture

__all__ = [name for name in dir() if not name.startswith("_")]
