"""Stored solver runs used as reference objects by the structural tests.

Each file is a run record (see :mod:`qcontext.io`); its ``notes`` field
records how it was produced (seed, restarts, parameters).
"""

from __future__ import annotations

from importlib import resources

from ..io import RunRecord, load_record

NAMES = {
    "two_spread": "two_spread.json",
    "elliptic4": "elliptic4_315.json",
    "hyperbolic4": "hyperbolic4_315.json",
    "full4": "full4_1575.json",
    "full6": "full6_553140.json.gz",
}


def fixture_path(name: str):
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(NAMES)}")
    return resources.files(__name__) / NAMES[name]


def available(name: str) -> bool:
    return fixture_path(name).is_file()


def load_fixture(name: str) -> RunRecord:
    with resources.as_file(fixture_path(name)) as path:
        return load_record(path)
