"""Readers for evidence tables, weight specs and experiment configs."""

from __future__ import annotations

import csv
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .composition import Composition, make_composition
from .errors import ConfigError, DimensionMismatch, InvalidEvidence
from .simulation import DEFAULT_DELTAS, VALIDITY_TABLE, ExperimentConfig, ValiditySet

CRITERION_COLUMN = "y"


class ParseError(InvalidEvidence):
    """A cell that is not a finite number, located by 1-based line and column."""

    def __init__(self, path, line: int, column: int, message: str):
        self.path, self.line, self.column = str(path), line, column
        super().__init__(f"{path}: line {line}, column {column}: {message}")


@dataclass(frozen=True)
class Evidence:
    sources: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray | None = None

    @property
    def k(self) -> int:
        return len(self.sources)


@dataclass(frozen=True)
class WeightSpec:
    linear: Composition
    order: Composition
    alpha: float = 0.5


def read_evidence(path) -> Evidence:
    """Read a comma-separated evidence table.

    The first row names the sources; a column headed ``y`` is taken as the
    criterion and kept apart from the sources.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InvalidEvidence(f"{path}: file is empty")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise InvalidEvidence(f"{path}: duplicate column names in header")
    y_col = header.index(CRITERION_COLUMN) if CRITERION_COLUMN in header else None
    sources = tuple(h for i, h in enumerate(header) if i != y_col)
    if len(sources) < 2:
        raise InvalidEvidence(f"{path}: need at least 2 source columns, got {len(sources)}")
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(path, lineno, min(len(row), len(header)) + 1,
                             f"expected {len(header)} cells, found {len(row)}")
        parsed = []
        for col, cell in enumerate(row, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(path, lineno, col, f"{header[col - 1]!r} cell {cell!r} is not a number") from None
            if not math.isfinite(value):
                raise ParseError(path, lineno, col, f"{header[col - 1]!r} cell {cell!r} is not finite")
            parsed.append(value)
        data.append(parsed)
    if not data:
        raise InvalidEvidence(f"{path}: no data rows")
    table = np.asarray(data)
    y = None
    if y_col is not None:
        y = table[:, y_col]
        table = np.delete(table, y_col, axis=1)
    return Evidence(sources, table, y)


def _load_toml(path) -> dict:
    path = Path(path)
    with path.open("rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None


def order_weights_from_labels(labels: dict[str, float]) -> list[float]:
    """Convert ``max``/``mid``/``min`` labelled order weights to descending order.

    With more than three weights the middle ranks are ``mid1`` (just below
    the maximum) through ``mid{n-2}``; with exactly three, ``mid`` is accepted
    for ``mid1``.
    """
    labels = {k.strip().lower(): float(v) for k, v in labels.items()}
    n = len(labels)
    if n == 3 and "mid" in labels:
        labels["mid1"] = labels.pop("mid")
    expected = ["max"] + [f"mid{i}" for i in range(1, n - 1)] + ["min"]
    if set(labels) != set(expected):
        raise ConfigError(f"order weight labels {sorted(labels)} do not match {expected}")
    return [labels[key] for key in expected]


def parse_weight_spec(data: dict, sources: tuple[str, ...] | None = None) -> WeightSpec:
    """Build a :class:`WeightSpec` from an already-parsed mapping."""
    try:
        lin_raw, ord_raw = data["linear_weights"], data["order_weights"]
    except KeyError as exc:
        raise ConfigError(f"weight spec is missing {exc.args[0]!r}") from None
    if isinstance(lin_raw, dict):
        if sources is None:
            lin = list(lin_raw.values())
        else:
            missing = set(sources) ^ set(lin_raw)
            if missing:
                raise DimensionMismatch(
                    f"linear weight names {sorted(lin_raw)} do not match evidence sources {list(sources)}"
                )
            lin = [lin_raw[s] for s in sources]
    else:
        lin = list(lin_raw)
    order = order_weights_from_labels(ord_raw) if isinstance(ord_raw, dict) else list(ord_raw)
    alpha = float(data.get("alpha", 0.5))
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha must lie in [0, 1], got {alpha}")
    spec = WeightSpec(make_composition(lin), make_composition(order), alpha)
    if sources is not None:
        for name, comp in (("linear_weights", spec.linear), ("order_weights", spec.order)):
            if comp.n != len(sources):
                raise DimensionMismatch(f"{name} has {comp.n} entries but evidence has {len(sources)} sources")
    return spec


def read_weight_spec(path, sources: tuple[str, ...] | None = None) -> WeightSpec:
    """Read a TOML weight spec with ``linear_weights``, ``order_weights`` and ``alpha``."""
    return parse_weight_spec(_load_toml(path), sources)


_CONFIG_FIELDS = {f.name for f in fields(ExperimentConfig)} - {"validity_set", "delta", "roster"}


@dataclass(frozen=True)
class ExperimentPlan:
    base: ExperimentConfig
    sets: tuple[ValiditySet, ...]
    deltas: tuple[float, ...]


def experiment_plan(data: dict[str, Any] | None = None, **overrides) -> ExperimentPlan:
    """Merge config-file values and overrides into a runnable plan.

    Recognised keys are the scalar :class:`ExperimentConfig` fields plus
    ``sets`` (ids to run), ``deltas``, ``sdowa`` (add SDOWA to the roster)
    and a ``validity_sets`` table mapping ids to custom validity lists.
    Overrides whose value is ``None`` are ignored.
    """
    merged = dict(data or {})
    merged.update({k: v for k, v in overrides.items() if v is not None})
    unknown = set(merged) - _CONFIG_FIELDS - {"sets", "deltas", "sdowa", "validity_sets"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    table = {i: tuple(v) for i, v in VALIDITY_TABLE.items()}
    for key, vals in merged.get("validity_sets", {}).items():
        try:
            table[int(key)] = tuple(float(v) for v in vals)
        except (TypeError, ValueError):
            raise ConfigError(f"validity set {key!r} must be a list of numbers keyed by an integer id") from None
    ids = [int(i) for i in merged.get("sets", sorted(table))]
    missing = [i for i in ids if i not in table]
    if missing:
        raise ConfigError(f"unknown validity set ids {missing}")
    sets = tuple(ValiditySet(i, table[i]) for i in ids)
    deltas = tuple(float(d) for d in merged.get("deltas", DEFAULT_DELTAS))
    if not sets or not deltas:
        raise ConfigError("experiment needs at least one validity set and one delta")
    roster = ("lwa", "owa", "jwa", "owawa") + (("sdowa",) if merged.get("sdowa") else ())
    kwargs = {k: merged[k] for k in _CONFIG_FIELDS if k in merged}
    try:
        base = ExperimentConfig(validity_set=sets[0], roster=roster, **kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return ExperimentPlan(base, sets, deltas)


def read_experiment_config(path) -> dict:
    return _load_toml(path)
