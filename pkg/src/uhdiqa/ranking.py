"""Winner selection across submissions.

Each team is ranked per metric (rank 1 = best; exact ties share the average
of the spanned ranks) and its main score is the mean of the five ranks.
The leaderboard lists teams by ascending main score: lowest wins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DuplicateTeamError
from .metrics import METRIC_NAMES, MetricReport, average_ranks

LOWER_BETTER = "lower_better"
HIGHER_BETTER = "higher_better"

#: Error metrics rank best when lowest; correlations when highest.
METRIC_DIRECTIONS = {
    "mae": LOWER_BETTER,
    "rmse": LOWER_BETTER,
    "plcc": HIGHER_BETTER,
    "srcc": HIGHER_BETTER,
    "krcc": HIGHER_BETTER,
}


@dataclass(frozen=True)
class Submission:
    team: str
    report: MetricReport


@dataclass(frozen=True)
class LeaderboardRow:
    team: str
    ranks: dict  # metric name -> fractional rank, 1 = best
    score: float  # mean of the five ranks
    tied: bool = False


@dataclass(frozen=True)
class Leaderboard:
    """Rows sorted by ascending main score; score ties flagged and broken
    by team name for display."""

    rows: tuple

    @property
    def winner(self) -> str:
        return self.rows[0].team

    def ordering(self) -> list[str]:
        return [row.team for row in self.rows]


def rank_metric(values, direction: str) -> np.ndarray:
    """Fractional ranks of one metric column, rank 1 = best."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 1:
        raise ValueError("need at least one value to rank")
    if not np.all(np.isfinite(v)):
        raise ValueError("metric values must be finite")
    if direction == LOWER_BETTER:
        return average_ranks(v)
    if direction == HIGHER_BETTER:
        return average_ranks(-v)
    raise ValueError(f"unknown ranking direction: {direction!r}")


def challenge_score(
    submissions,
    baseline_team: str | None = None,
    include_baseline: bool = False,
) -> Leaderboard:
    """Rank N submissions and compute each team's main score.

    The main score is the mean of the team's per-metric ranks over MAE,
    RMSE, KRCC, PLCC and SRCC. A designated organizer baseline is excluded
    from the ranking unless ``include_baseline`` is set.
    """
    subs = list(submissions)
    if baseline_team is not None and not include_baseline:
        subs = [s for s in subs if s.team != baseline_team]
    teams = [s.team for s in subs]
    seen = set()
    for t in teams:
        if t in seen:
            raise DuplicateTeamError(f"duplicate team: {t}")
        seen.add(t)
    if len(subs) < 2:
        raise ValueError("need at least two submissions to rank")

    rank_cols = {
        name: rank_metric(
            [getattr(s.report, name) for s in subs], METRIC_DIRECTIONS[name]
        )
        for name in METRIC_NAMES
    }
    scores = [
        float(np.mean([rank_cols[name][i] for name in METRIC_NAMES]))
        for i in range(len(subs))
    ]
    tied = [scores.count(s) > 1 for s in scores]

    rows = [
        LeaderboardRow(
            team=subs[i].team,
            ranks={name: float(rank_cols[name][i]) for name in METRIC_NAMES},
            score=scores[i],
            tied=tied[i],
        )
        for i in range(len(subs))
    ]
    rows.sort(key=lambda r: (r.score, r.team))
    return Leaderboard(rows=tuple(rows))


def render_table(board: Leaderboard) -> str:
    """Fixed-width text table of the leaderboard."""
    header = ["#", "team"] + [f"R({m})" for m in METRIC_NAMES] + ["score"]
    body = []
    for pos, row in enumerate(board.rows, start=1):
        cells = [str(pos), row.team]
        cells += [f"{row.ranks[m]:g}" for m in METRIC_NAMES]
        score = f"{row.score:g}" + (" (tie)" if row.tied else "")
        cells.append(score)
        body.append(cells)
    widths = [max(len(r[c]) for r in [header] + body) for c in range(len(header))]

    def fmt(cells):
        return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()

    return "\n".join([fmt(header)] + [fmt(r) for r in body])
