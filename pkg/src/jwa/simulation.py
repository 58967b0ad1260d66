"""Monte-Carlo comparison of aggregation operators on simulated sources.

Evidence from ``k`` sources and a criterion ``y`` are drawn from a joint
normal distribution. Every source has the same mean, variance and
inter-source covariance; sources differ only in their covariance with the
criterion (their *validity*). On a random half of the trials a positive bias
is added to the evidence of two randomly chosen sources. Source weights are
the normalised validities and the order weights discard the two highest
values, so the linear weights know which sources are good and the order
weights know that the highest values are suspect.

Each replication draws its own trials from a generator seeded by
``(seed, replication_index)`` only, so the output never depends on how
replications are scheduled.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import operators as ops
from .composition import Composition, closure
from .errors import ConfigError, DimensionMismatch, NotPositiveSemiDefinite, TooFewParts

# Covariance of each of the ten sources with the criterion.
VALIDITY_TABLE = {
    1: (1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00),
    2: (0.91, 0.95, 0.97, 0.99, 1.01, 1.02, 1.03, 1.04, 1.04, 1.05),
    3: (0.68, 0.80, 0.89, 0.96, 1.01, 1.06, 1.10, 1.14, 1.17, 1.20),
    4: (0.03, 0.10, 0.23, 0.42, 0.65, 0.94, 1.27, 1.66, 2.10, 2.60),
    5: (0.00, 0.01, 0.03, 0.10, 0.25, 0.51, 0.95, 1.62, 2.59, 3.95),
    6: (0.00, 0.00, 0.00, 0.00, 0.02, 0.10, 0.34, 1.00, 2.57, 5.96),
    7: (0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.03, 0.23, 1.52, 8.22),
}

DEFAULT_DELTAS = (2.0, 6.0, 18.0)
DEFAULT_ROSTER = ("lwa", "owa", "jwa", "owawa")
CSV_HEADER = ("set", "delta", "operator", "mean_mse", "sd_mse", "replications")


@dataclass(frozen=True)
class ValiditySet:
    id: int
    validities: tuple[float, ...]

    def __post_init__(self):
        if any(v < 0 for v in self.validities):
            raise ConfigError(f"validity set {self.id} has negative entries")

    @classmethod
    def table(cls, set_id: int) -> "ValiditySet":
        try:
            return cls(set_id, VALIDITY_TABLE[set_id])
        except KeyError:
            raise ConfigError(f"no built-in validity set {set_id}; known ids are 1-7") from None


def validity_sets(ids: Iterable[int] = VALIDITY_TABLE) -> list[ValiditySet]:
    return [ValiditySet.table(i) for i in ids]


@dataclass(frozen=True)
class ExperimentConfig:
    validity_set: ValiditySet = field(default_factory=lambda: ValiditySet.table(1))
    delta: float = 0.0
    k: int = 10
    mean: float = 10.0
    variance: float = 10.0
    cov_xx: float = 2.0
    bias_prob: float = 0.5
    n_biased_sources: int = 2
    trials: int = 1000
    replications: int = 500
    alpha: float = 0.5
    seed: int = 0
    roster: tuple[str, ...] = DEFAULT_ROSTER

    def __post_init__(self):
        if self.k < 3:
            raise ConfigError(f"k must be at least 3, got {self.k}")
        if len(self.validity_set.validities) != self.k:
            raise ConfigError(
                f"validity set {self.validity_set.id} has {len(self.validity_set.validities)} "
                f"entries but k={self.k}"
            )
        if self.trials < 1 or self.replications < 1:
            raise ConfigError("trials and replications must both be at least 1")
        if not 0.0 <= self.bias_prob <= 1.0:
            raise ConfigError(f"bias_prob must lie in [0, 1], got {self.bias_prob}")
        if not 0 <= self.n_biased_sources < self.k:
            raise ConfigError(f"n_biased_sources must lie in [0, k), got {self.n_biased_sources}")
        if self.delta < 0:
            raise ConfigError(f"delta must be non-negative, got {self.delta}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha}")
        unknown = set(self.roster) - set(ops.OPERATORS)
        if unknown or not self.roster:
            raise ConfigError(f"unknown operators in roster: {sorted(unknown)}")


@dataclass(frozen=True)
class TrialRecord:
    x: np.ndarray
    y: float
    biased_sources: tuple[int, ...] = ()


def build_covariance(cfg: ExperimentConfig) -> np.ndarray:
    """Joint covariance of the ``k`` sources (first) and the criterion (last).

    Raises :class:`NotPositiveSemiDefinite` if the matrix cannot be factorised.
    """
    k = cfg.k
    cov = np.full((k + 1, k + 1), float(cfg.cov_xx))
    val = np.asarray(cfg.validity_set.validities, dtype=float)
    cov[:k, k] = val
    cov[k, :k] = val
    np.fill_diagonal(cov, float(cfg.variance))
    factorize(cov)
    return cov


def factorize(cov: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor ``L`` with ``L @ L.T == cov``."""
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise DimensionMismatch(f"covariance must be square, got shape {cov.shape}")
    if not np.allclose(cov, cov.T, rtol=0, atol=1e-12):
        raise NotPositiveSemiDefinite("covariance matrix is not symmetric")
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveSemiDefinite(f"covariance matrix is not positive definite: {exc}") from None


def replication_rng(seed: int, replication_index: int) -> np.random.Generator:
    """PCG64 stream that depends only on ``(seed, replication_index)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, replication_index])))


def inject_bias_batch(rng: np.random.Generator, X: np.ndarray, cfg: ExperimentConfig):
    """Bias the rows of ``X`` (trials x sources) in place of a copy.

    Each row is biased with probability ``bias_prob``; a biased row has
    ``delta`` added to ``n_biased_sources`` distinct sources drawn uniformly.
    Random draws are consumed identically whatever ``delta`` is, so runs that
    differ only in ``delta`` see the same trials and the same biased sources.

    Returns the biased copy and a boolean mask of the biased cells.
    """
    X = np.array(X, dtype=float, copy=True)
    trials, k = X.shape
    hit = rng.random(trials) < cfg.bias_prob
    picks = np.argsort(rng.random((trials, k)), axis=1)[:, : cfg.n_biased_sources]
    mask = np.zeros((trials, k), dtype=bool)
    np.put_along_axis(mask, picks, True, axis=1)
    mask &= hit[:, None]
    X[mask] += cfg.delta
    return X, mask


def inject_bias(rng: np.random.Generator, x, cfg: ExperimentConfig) -> tuple[np.ndarray, tuple[int, ...]]:
    """Single-trial form of :func:`inject_bias_batch`."""
    Xb, mask = inject_bias_batch(rng, np.asarray(x, dtype=float)[None, :], cfg)
    return Xb[0], tuple(int(i) for i in np.flatnonzero(mask[0]))


def sample_trials(rng: np.random.Generator, factor: np.ndarray, cfg: ExperimentConfig, size: int):
    """Draw ``size`` biased trials; returns ``(X, y, bias_mask)``."""
    z = rng.standard_normal((size, factor.shape[0]))
    draws = cfg.mean + z @ factor.T
    X, mask = inject_bias_batch(rng, draws[:, : cfg.k], cfg)
    return X, draws[:, cfg.k], mask


def sample_trial(rng: np.random.Generator, factor: np.ndarray, cfg: ExperimentConfig) -> TrialRecord:
    X, y, mask = sample_trials(rng, factor, cfg, 1)
    return TrialRecord(X[0], float(y[0]), tuple(int(i) for i in np.flatnonzero(mask[0])))


def derive_lwa_weights(vs: ValiditySet) -> Composition:
    return closure(vs.validities)


def derive_owa_weights(k: int) -> Composition:
    """Descending order weights that ignore the two highest values."""
    if k < 3:
        raise TooFewParts(f"need at least 3 sources to drop the top two, got {k}")
    parts = np.zeros(k)
    parts[2:] = 1.0 / (k - 2)
    return Composition(parts)


def mse(yhat, y) -> float:
    yhat, y = np.asarray(yhat, dtype=float), np.asarray(y, dtype=float)
    if yhat.shape != y.shape or yhat.size < 1:
        raise DimensionMismatch(f"mse needs equal non-empty shapes, got {yhat.shape} and {y.shape}")
    return float(np.mean((yhat - y) ** 2))


def predict(X: np.ndarray, w, v, roster: Sequence[str], alpha: float = 0.5) -> dict[str, np.ndarray]:
    """Per-trial aggregates of every operator in ``roster``."""
    order = ops.rank_order(X)
    funcs = {
        "lwa": lambda: ops.lwa_values(X, w),
        "owa": lambda: ops.owa_values(X, v, order),
        "owawa": lambda: ops.owawa_values(X, w, v, alpha, order),
        "sdowa": lambda: ops.sdowa_values(X, w, v, order),
        "jwa": lambda: ops.jwa_values(X, w, v, order),
    }
    return {tag: funcs[tag]() for tag in roster}


def simulate_replication(cfg: ExperimentConfig, replication_index: int, factor: np.ndarray | None = None):
    """Trials of one replication and every operator's predictions.

    Returns ``(X, y, predictions)``.
    """
    if factor is None:
        factor = factorize(build_covariance(cfg))
    rng = replication_rng(cfg.seed, replication_index)
    X, y, _ = sample_trials(rng, factor, cfg, cfg.trials)
    w = derive_lwa_weights(cfg.validity_set).parts
    v = derive_owa_weights(cfg.k).parts
    return X, y, predict(X, w, v, cfg.roster, cfg.alpha)


def run_replication(cfg: ExperimentConfig, replication_index: int, factor: np.ndarray | None = None) -> dict[str, float]:
    """Per-operator MSE over the trials of one replication."""
    _, y, preds = simulate_replication(cfg, replication_index, factor)
    return {tag: mse(yhat, y) for tag, yhat in preds.items()}


@dataclass(frozen=True)
class ExperimentRow:
    set: int
    delta: float
    operator: str
    mean_mse: float
    sd_mse: float
    replications: int


def _fmt(x: float) -> str:
    return format(x, ".17g")


@dataclass(frozen=True)
class ExperimentTable:
    rows: tuple[ExperimentRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def get(self, set_id: int, delta: float, operator: str) -> ExperimentRow:
        for row in self.rows:
            if row.set == set_id and row.delta == delta and row.operator == operator:
                return row
        raise KeyError((set_id, delta, operator))

    @property
    def sets(self) -> list[int]:
        return sorted({r.set for r in self.rows})

    @property
    def deltas(self) -> list[float]:
        return sorted({r.delta for r in self.rows})

    @property
    def operators(self) -> list[str]:
        return list(dict.fromkeys(r.operator for r in self.rows))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow([r.set, _fmt(r.delta), r.operator, _fmt(r.mean_mse), _fmt(r.sd_mse), r.replications])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ExperimentTable":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ConfigError(f"unexpected results header {header}")
        rows = [
            ExperimentRow(int(s), float(d), op, float(m), float(sd), int(n))
            for s, d, op, m, sd, n in reader
        ]
        return cls(tuple(rows))


def _cell(args) -> tuple[int, float, dict[str, list[float]]]:
    cfg = args
    factor = factorize(build_covariance(cfg))
    per_op: dict[str, list[float]] = {tag: [] for tag in cfg.roster}
    for rep in range(cfg.replications):
        for tag, value in run_replication(cfg, rep, factor).items():
            per_op[tag].append(value)
    return cfg.validity_set.id, cfg.delta, per_op


def run_experiment(
    base: ExperimentConfig,
    sets: Iterable[ValiditySet] | None = None,
    deltas: Iterable[float] = DEFAULT_DELTAS,
    workers: int = 1,
) -> ExperimentTable:
    """Mean and standard deviation of per-replication MSE for every cell.

    Cells of the ``sets x deltas`` grid may be evaluated in worker processes;
    rows are emitted in (set, delta, roster) order regardless, so the table is
    identical to a sequential run.
    """
    sets = validity_sets() if sets is None else list(sets)
    deltas = [float(d) for d in deltas]
    cells = [replace(base, validity_set=vs, delta=d) for vs in sets for d in deltas]
    for cfg in cells:
        build_covariance(cfg)  # fail fast before any work is scheduled
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cell, cells))
    else:
        results = [_cell(cfg) for cfg in cells]
    keyed = {(s, d): per_op for s, d, per_op in results}
    rows = []
    for vs in sets:
        for d in deltas:
            per_op = keyed[(vs.id, d)]
            for tag in base.roster:
                vals = np.asarray(per_op[tag])
                sd = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
                rows.append(ExperimentRow(vs.id, d, tag, float(vals.mean()), sd, int(vals.size)))
    return ExperimentTable(tuple(rows))


def standard_error(row: ExperimentRow) -> float:
    return row.sd_mse / math.sqrt(row.replications)
