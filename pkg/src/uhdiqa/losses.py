"""Training losses for quality regression, with analytic gradients.

Every loss returns its value together with d(value)/d(predictions), so
gradients can be validated against finite differences without pulling in
an autodiff framework. Pairwise losses skip or soften tied ground truth:
the hinge rank loss ignores tied pairs, the fidelity loss gives them a
0.5 target probability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr  # standard normal CDF, accurate in the tails

from .errors import DegenerateRangeError, LengthMismatchError, ZeroVarianceError

_SQRT2 = np.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class LossValue:
    value: float
    gradient: np.ndarray

    def __add__(self, other: "LossValue") -> "LossValue":
        return LossValue(self.value + other.value, self.gradient + other.gradient)


def _as_pair(p, q, minimum: int) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 1:
        raise LengthMismatchError(
            f"prediction/target shape mismatch: {p.shape} vs {q.shape}"
        )
    if p.shape[0] < minimum:
        raise ValueError(f"need at least {minimum} elements, got {p.shape[0]}")
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
        raise ValueError("loss inputs must be finite")
    return p, q


def mse_loss(p, q) -> LossValue:
    """value = mean((p - q)^2); gradient = 2 (p - q) / n."""
    p, q = _as_pair(p, q, 1)
    d = p - q
    return LossValue(float(np.mean(d * d)), (2.0 / p.shape[0]) * d)


def plcc_loss(p, q) -> LossValue:
    """Correlation loss (1 - pearson(p, q)) / 2, bounded to [0, 1]."""
    p, q = _as_pair(p, q, 2)
    pc = p - np.mean(p)
    qc = q - np.mean(q)
    sp = np.sqrt(np.sum(pc * pc))
    sq = np.sqrt(np.sum(qc * qc))
    if sp == 0.0 or sq == 0.0:
        raise ZeroVarianceError("correlation loss undefined for constant vectors")
    r = float(np.sum(pc * qc) / (sp * sq))
    # dr/dp_i = qc_i/(sp*sq) - r*pc_i/sp^2; the mean terms vanish because
    # the centered counterpart sums to zero.
    dr = qc / (sp * sq) - r * pc / (sp * sp)
    return LossValue(0.5 * (1.0 - r), -0.5 * dr)


def rank_loss(p, q, margin: float = 0.0) -> LossValue:
    """Pairwise hinge on ground-truth-ordered pairs.

    For every (i, j) with q_i > q_j the pair penalty is
    max(0, margin - (p_i - p_j)); the value is the mean over those pairs.
    Exactly tied pairs are skipped; the hinge kink contributes a zero
    subgradient.
    """
    p, q = _as_pair(p, q, 2)
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    ordered = q[:, None] > q[None, :]
    n_pairs = int(np.sum(ordered))
    if n_pairs == 0:
        return LossValue(0.0, np.zeros_like(p))
    slack = margin - (p[:, None] - p[None, :])
    value = float(np.sum(np.where(ordered, np.maximum(slack, 0.0), 0.0)) / n_pairs)
    active = ordered & (slack > 0.0)
    grad = (active.sum(axis=0) - active.sum(axis=1)).astype(np.float64) / n_pairs
    return LossValue(value, grad)


def fidelity_loss(p, q) -> LossValue:
    """Probabilistic pairwise ranking loss with a Gaussian link.

    For each unordered pair, the target probability P is 1/0/0.5 by the
    ground-truth order and the model probability is
    Phat = Phi((p_i - p_j)/sqrt(2)). The pair penalty
    1 - sqrt(P*Phat) - sqrt((1-P)(1-Phat)) lies in [0, 1]; the value is
    its mean over all n(n-1)/2 pairs.
    """
    p, q = _as_pair(p, q, 2)
    n = p.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    dq = q[iu] - q[ju]
    target = np.where(dq > 0, 1.0, np.where(dq < 0, 0.0, 0.5))
    d = (p[iu] - p[ju]) / _SQRT2
    phat = ndtr(d)
    value = float(
        np.mean(1.0 - np.sqrt(target * phat) - np.sqrt((1.0 - target) * (1.0 - phat)))
    )

    # d(pair)/dPhat, with Phat clamped away from 0/1 only inside the
    # division; the pdf factor drives the product to 0 in the tails anyway.
    safe = np.clip(phat, 1e-300, 1.0 - 1e-16)
    dpair = -0.5 * np.sqrt(target / safe) + 0.5 * np.sqrt(
        (1.0 - target) / (1.0 - safe)
    )
    pdf = np.exp(-0.5 * d * d) * _INV_SQRT_2PI
    pair_grad = dpair * pdf / _SQRT2
    n_pairs = iu.shape[0]
    grad = np.zeros(n, dtype=np.float64)
    np.add.at(grad, iu, pair_grad / n_pairs)
    np.add.at(grad, ju, -pair_grad / n_pairs)
    return LossValue(value, grad)


def composite_loss(p, q) -> LossValue:
    """Zero-margin rank loss plus correlation loss, values and gradients additive."""
    return rank_loss(p, q, margin=0.0) + plcc_loss(p, q)


def map_scores(p, q) -> np.ndarray:
    """Affinely remap predictions onto the ground-truth range.

    Returns (p - min p)/(max p - min p) stretched to [min q, max q]. The
    map is strictly increasing, so rank orders (and hence SRCC/KRCC) are
    preserved; the lerp form below makes the output extremes land on
    min q / max q exactly in floating point.
    """
    p, q = _as_pair(p, q, 1)
    p_min, p_max = float(np.min(p)), float(np.max(p))
    if p_max == p_min:
        raise DegenerateRangeError("cannot remap constant predictions")
    q_min, q_max = float(np.min(q)), float(np.max(q))
    t = (p - p_min) / (p_max - p_min)
    return t * q_max + (1.0 - t) * q_min
