# SPDX-License-Identifier: Apache-2.0
"""Networked device-free sensing simulator.

Thin wrappers over the compiled core: configurations are plain dicts that
mirror the JSON files under ``configs/``.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Mapping, Sequence

from . import _netsense
from ._netsense import NetsenseError, PreconditionError, range_quantum

__all__ = [
    "NetsenseError",
    "PreconditionError",
    "associate",
    "default_config",
    "load_config",
    "locate",
    "normalize_config",
    "phase_one",
    "range_quantum",
    "simulate",
]


def _dump(config: Mapping[str, Any] | None) -> str:
    return json.dumps(dict(config)) if config else ""


def default_config() -> dict:
    return json.loads(_netsense.default_config())


def normalize_config(config: Mapping[str, Any]) -> dict:
    return json.loads(_netsense.normalize_config(_dump(config)))


def load_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return normalize_config(json.load(fh))


def simulate(config: Mapping[str, Any] | None = None, methods: Iterable[str] = ()) -> list[dict]:
    """One entry per method: ``{"report": {...}, "trials_csv": str}``."""
    return json.loads(_netsense.simulate(_dump(config), list(methods)))


def phase_one(config: Mapping[str, Any] | None = None, trial: int = 0) -> dict:
    return json.loads(_netsense.phase_one(_dump(config), trial))


def associate(handoff: Mapping[str, Any], config: Mapping[str, Any] | None = None) -> dict:
    return json.loads(_netsense.associate(json.dumps(dict(handoff)), _dump(config)))


def locate(bs: Sequence[tuple[float, float]], terms: Sequence[tuple[int, int, float]]):
    """Returns ``(x, y, residual, converged)``."""
    return _netsense.locate(list(bs), list(terms))
