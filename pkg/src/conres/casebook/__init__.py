"""Bundled worked examples: strata, E1 columns, differentials and the expected answer."""

from .loader import CaseError, CaseSchemaError, CaseStudy, case_names, load_case
from .runner import CaseReport, Stage, run_case

__all__ = [
    "CaseError",
    "CaseReport",
    "CaseSchemaError",
    "CaseStudy",
    "Stage",
    "case_names",
    "load_case",
    "run_case",
]
