"""Challenge evaluation metrics.

Implements the five metrics used to score submissions (MAE, RMSE, PLCC,
SRCC, KRCC) plus the second-order polynomial trend fit for scatter reports.
SRCC is Pearson over fractional (tie-averaged) ranks; KRCC is tau-b with
tie correction, so both stay in [-1, 1] under tied scores.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import SingularDesignError, UnmatchedIdsError, ZeroVarianceError

METRIC_NAMES = ("mae", "rmse", "plcc", "srcc", "krcc")


@dataclass(frozen=True)
class PredictionSet:
    """Paired (predicted, ground-truth MOS) vectors keyed by image id."""

    ids: tuple
    predicted: np.ndarray
    ground_truth: np.ndarray

    @classmethod
    def make(cls, ids: Sequence[str], predicted, ground_truth) -> "PredictionSet":
        ids = tuple(str(i) for i in ids)
        p = np.asarray(predicted, dtype=np.float64)
        q = np.asarray(ground_truth, dtype=np.float64)
        if not (len(ids) == p.shape[0] == q.shape[0]):
            raise ValueError("ids, predicted and ground_truth must have equal length")
        if p.ndim != 1:
            raise ValueError("prediction vectors must be one-dimensional")
        if len(set(ids)) != len(ids):
            raise ValueError("image ids must be unique")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
            raise ValueError("scores must be finite")
        p.setflags(write=False)
        q.setflags(write=False)
        return cls(ids=ids, predicted=p, ground_truth=q)

    def __len__(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class MetricReport:
    """The five challenge metrics for one prediction set."""

    mae: float
    rmse: float
    plcc: float
    srcc: float
    krcc: float

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def join_predictions(entries, scores: Mapping[str, float]) -> PredictionSet:
    """Join per-image scores with manifest ground truth by image id.

    The score table must cover the given entries exactly; ids missing on
    either side are a hard error listing the offenders.
    """
    entry_ids = {e.image_id for e in entries}
    score_ids = set(scores)
    missing = entry_ids - score_ids
    if missing:
        raise UnmatchedIdsError("predictions missing for manifest ids", missing)
    extra = score_ids - entry_ids
    if extra:
        raise UnmatchedIdsError("prediction ids not present in manifest slice", extra)
    ids = [e.image_id for e in entries]
    return PredictionSet.make(
        ids, [float(scores[i]) for i in ids], [e.mos for e in entries]
    )


def average_ranks(values) -> np.ndarray:
    """Fractional 1-based ranks (ties get the mean of their positions)."""
    v = np.asarray(values, dtype=np.float64)
    n = v.shape[0]
    order = np.argsort(v, kind="stable")
    ranks = np.empty(n, dtype=np.float64)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and v[order[j + 1]] == v[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _require_pairs(ps: PredictionSet, minimum: int) -> None:
    if len(ps) < minimum:
        raise ValueError(f"need at least {minimum} pairs, got {len(ps)}")


def mae(ps: PredictionSet) -> float:
    """Mean absolute error between predicted and true scores."""
    _require_pairs(ps, 1)
    return float(np.mean(np.abs(ps.predicted - ps.ground_truth)))


def rmse(ps: PredictionSet) -> float:
    """Root mean square error between predicted and true scores."""
    _require_pairs(ps, 1)
    d = ps.predicted - ps.ground_truth
    return float(np.sqrt(np.mean(d * d)))


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - np.mean(x)
    yc = y - np.mean(y)
    sx = np.sqrt(np.sum(xc * xc))
    sy = np.sqrt(np.sum(yc * yc))
    if sx == 0.0 or sy == 0.0:
        raise ZeroVarianceError("correlation undefined for a constant vector")
    r = float(np.sum(xc * yc) / (sx * sy))
    return min(1.0, max(-1.0, r))


def plcc(ps: PredictionSet) -> float:
    """Sample Pearson linear correlation coefficient."""
    _require_pairs(ps, 2)
    return _pearson(ps.predicted, ps.ground_truth)


def srcc(ps: PredictionSet) -> float:
    """Spearman rank-order correlation: Pearson over fractional ranks."""
    _require_pairs(ps, 2)
    return _pearson(average_ranks(ps.predicted), average_ranks(ps.ground_truth))


def krcc(ps: PredictionSet) -> float:
    """Kendall rank correlation, tau-b (tie-corrected) variant.

    tau_b = (C - D) / sqrt((T0 - T1)(T0 - T2)) with T0 = n(n-1)/2 and
    T1, T2 the tied-pair counts of each vector. All pair counts are
    accumulated as integers, so the result is exact up to one division.
    """
    _require_pairs(ps, 2)
    p, q = ps.predicted, ps.ground_truth
    n = len(ps)
    net_concordant = 0  # C - D
    ties_p = 0
    ties_q = 0
    for i in range(n - 1):
        sp = np.sign(p[i + 1 :] - p[i]).astype(np.int64)
        sq = np.sign(q[i + 1 :] - q[i]).astype(np.int64)
        net_concordant += int(np.sum(sp * sq))
        ties_p += int(np.sum(sp == 0))
        ties_q += int(np.sum(sq == 0))
    total_pairs = n * (n - 1) // 2
    denom_sq = (total_pairs - ties_p) * (total_pairs - ties_q)
    if denom_sq == 0:
        raise ZeroVarianceError("tau undefined when one vector is fully tied")
    return net_concordant / float(np.sqrt(denom_sq))


def evaluate(ps: PredictionSet) -> MetricReport:
    """All five challenge metrics bundled into one report."""
    return MetricReport(
        mae=mae(ps), rmse=rmse(ps), plcc=plcc(ps), srcc=srcc(ps), krcc=krcc(ps)
    )


def poly2_fit(ps: PredictionSet) -> tuple[float, float, float]:
    """Least-squares (a0, a1, a2) of predicted ~ a0 + a1*q + a2*q^2.

    This is the trend curve drawn through prediction-vs-MOS scatter plots.
    Requires at least three distinct ground-truth abscissae.
    """
    _require_pairs(ps, 3)
    q = ps.ground_truth
    design = np.column_stack([np.ones_like(q), q, q * q])
    coeffs, _, rank, _ = np.linalg.lstsq(design, ps.predicted, rcond=None)
    if rank < 3:
        raise SingularDesignError(
            "quadratic fit needs ground truth spanning >= 3 distinct values"
        )
    return float(coeffs[0]), float(coeffs[1]), float(coeffs[2])
