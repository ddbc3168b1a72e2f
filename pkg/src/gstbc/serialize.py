"""JSON serialization of codes and access to the bundled fixtures.

Matrices repo-wide use the array-of-rows grammar from ``exact``: each entry
is a string like ``"1"``, ``"-j"``, ``"1/2"`` or ``"1/2-1/2j"``; parsing and
emission round-trip exactly, so stored codes are bit-faithful.
"""

from __future__ import annotations

import json
from importlib import resources
from fractions import Fraction

from .exact import matrix_from_strings, matrix_to_strings
from .search import StbcCode

__all__ = ["code_to_dict", "code_from_dict", "dump_code", "load_code",
           "load_fixture", "FIXTURE_CODES"]

CODE_FORMAT = "gstbc-code"

#: Bundled known-good codes: the published rate-5/4 two-group and rate-1
#: three-group four-antenna constructions, transcribed once.
FIXTURE_CODES = {
    "rate54-2group": "code_4tx_2group_rate5_4.json",
    "rate1-3group": "code_4tx_3group_rate1.json",
}


def code_to_dict(code: StbcCode) -> dict:
    return {
        "format": CODE_FORMAT,
        "a": code.a,
        "rows": code.rows,
        "cols": code.cols,
        "group_sizes": list(code.group_sizes),
        "rate": str(code.rate),
        "groups": [[matrix_to_strings(m) for m in g] for g in code.groups],
        "provenance": code.provenance,
    }


def code_from_dict(data: dict) -> StbcCode:
    try:
        if data.get("format", CODE_FORMAT) != CODE_FORMAT:
            raise ValueError(f"not a {CODE_FORMAT} document")
        a = int(data["a"])
        groups = tuple(tuple(matrix_from_strings(m) for m in g) for g in data["groups"])
        rows = int(data["rows"])
        cols = int(data["cols"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed code document: {exc}") from exc
    if not groups or any(not g for g in groups):
        raise ValueError("code document must contain non-empty groups")
    for g in groups:
        for m in g:
            if (m.rows, m.cols) != (rows, cols):
                raise ValueError(f"matrix shape {m.rows}x{m.cols} does not match "
                                 f"declared {rows}x{cols}")
    code = StbcCode(a, rows, cols, groups, provenance=data.get("provenance"))
    declared = data.get("rate")
    if declared is not None and Fraction(declared) != code.rate:
        raise ValueError(f"declared rate {declared} != computed {code.rate}")
    return code


def dump_code(code: StbcCode, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(code_to_dict(code), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_code(path) -> StbcCode:
    with open(path, encoding="utf-8") as fh:
        return code_from_dict(json.load(fh))


def load_fixture(name: str) -> StbcCode:
    """Load a bundled code by short name (see FIXTURE_CODES)."""
    try:
        filename = FIXTURE_CODES[name]
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; available: {sorted(FIXTURE_CODES)}")
    payload = resources.files("gstbc.fixtures").joinpath(filename).read_text()
    return code_from_dict(json.loads(payload))
