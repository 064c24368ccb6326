"""
Static registry of problems, addressable by name (case-insensitive).
"""

from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Tuple, Type

import yaml

from src.models.schemas import ProblemMetadata
from src.problems.base import Problem
from src.problems.suite import REGRESSION_CLASSES, SUITE_CLASSES

METADATA_FILE = Path(__file__).resolve().parent / "data" / "problems.yaml"


class UnknownProblemError(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.reason = f"unknown problem {name!r}"

    def __str__(self) -> str:
        return self.reason


@lru_cache(maxsize=1)
def _load() -> Tuple[Dict[str, Problem], Tuple[str, ...]]:
    with open(METADATA_FILE, "r", encoding="utf8") as f:
        data = yaml.safe_load(f)

    problems: Dict[str, Problem] = {}
    suite_names: List[str] = []
    for section, classes in (("suite", SUITE_CLASSES), ("regression", REGRESSION_CLASSES)):
        for entry in data.get(section, []):
            meta = ProblemMetadata(**entry)
            cls: Type[Problem] = classes[meta.name]
            problems[meta.name.lower()] = cls(meta)
            if section == "suite":
                suite_names.append(meta.name)
    return problems, tuple(suite_names)


def get_problem(name: str) -> Problem:
    """Look up a suite or regression problem by name."""
    problems, _ = _load()
    try:
        return problems[name.strip().lower()]
    except KeyError:
        raise UnknownProblemError(name) from None


def list_problem_names() -> List[str]:
    """Names of the curated suite, in registry order."""
    return list(_load()[1])


def list_problems() -> List[ProblemMetadata]:
    """Metadata of the curated suite (regression problems are not listed)."""
    return [get_problem(name).meta for name in list_problem_names()]
