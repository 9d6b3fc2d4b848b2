"""Joint threshold landscapes and single-threshold sensitivity."""
from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .cutrule import INCLUSIVE, CutRule, RuleError, ThresholdClause, evaluate, rule_members
from .ingest import BATTER, PITCHER, STATS_BY_ROLE

DEFAULT_GRIDS = {
    "H": tuple(range(2000, 3201, 50)),
    "HR": tuple(range(200, 501, 25)),
    "K": tuple(range(2000, 3601, 100)),
    "W": tuple(range(180, 301, 10)),
}
DEFAULT_TOLERANCE = 10


def _strictly_increasing(values) -> bool:
    return all(a < b for a, b in zip(values, values[1:]))


@dataclass(frozen=True)
class ThresholdGrid:
    stat_a: str
    stat_b: str
    values_a: tuple
    values_b: tuple
    op: str = INCLUSIVE

    def __post_init__(self):
        if self.stat_a == self.stat_b:
            raise ValueError("grid needs two different statistics")
        for name, vals in (("values_a", self.values_a), ("values_b", self.values_b)):
            if not vals:
                raise ValueError(f"{name} is empty")
            if not _strictly_increasing(vals) or vals[0] < 0:
                raise ValueError(f"{name} must be strictly increasing and nonnegative")

    @classmethod
    def default(cls, stat_a: str, stat_b: str, op: str = INCLUSIVE) -> "ThresholdGrid":
        try:
            return cls(stat_a, stat_b, DEFAULT_GRIDS[stat_a], DEFAULT_GRIDS[stat_b], op)
        except KeyError as e:
            raise ValueError(f"no default grid for {e.args[0]}; give the values explicitly") from None

    def rule(self, role: str, i: int, j: int) -> CutRule:
        return CutRule(role, (ThresholdClause(self.stat_a, self.values_a[i], self.op),
                              ThresholdClause(self.stat_b, self.values_b[j], self.op)))


@dataclass(frozen=True)
class LandscapeGrid:
    grid: ThresholdGrid
    counts: tuple  # rows follow values_a, columns follow values_b
    target: int = 0
    tolerance: int = DEFAULT_TOLERANCE

    def count(self, a: int, b: int) -> int:
        return self.counts[self.grid.values_a.index(a)][self.grid.values_b.index(b)]

    def is_near(self, count: int) -> bool:
        return abs(count - self.target) <= self.tolerance


def parse_grid(text: str) -> tuple:
    """``"2000:3200:100"`` (inclusive range) or ``"2000,2250,2500"``."""
    text = text.strip()
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError(f"grid range must be START:STOP:STEP, got {text!r}")
        start, stop, step = parts
        return tuple(range(start, stop + 1, step))
    return tuple(int(p) for p in text.split(",") if p.strip())


def _sweep_row(args):
    grid, role, i, players = args
    return [len(rule_members(grid.rule(role, i, j), players)) for j in range(len(grid.values_b))]


def sweep_landscape(grid: ThresholdGrid, careers: Mapping, role: str, *,
                    target: int = 0, tolerance: int = DEFAULT_TOLERANCE,
                    workers: int = 1, executor=None) -> LandscapeGrid:
    """Cut size for every pair of thresholds in ``grid``.

    Each cell is the membership count of ``stat_a OP a or stat_b OP b``.
    ``workers > 1`` spreads rows over processes, or pass any object with a
    ``map`` method as ``executor``. The matrix is assembled by row index, so
    the result does not depend on scheduling.
    """
    allowed = STATS_BY_ROLE[role]
    for stat in (grid.stat_a, grid.stat_b):
        if stat not in allowed:
            raise RuleError(f"statistic {stat!r} is not a {role.lower()} statistic")

    # Anyone outside the loosest cell is outside every cell.
    loosest = grid.rule(role, 0, 0)
    players = {pid: t for pid, t in careers.items() if evaluate(loosest, t)}

    jobs = [(grid, role, i, players) for i in range(len(grid.values_a))]
    if executor is not None:
        rows = list(executor.map(_sweep_row, jobs))
    elif workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(job) for job in jobs]
    counts = tuple(tuple(r) for r in rows)
    _check_monotone(counts)
    return LandscapeGrid(grid, counts, target, tolerance)


def _check_monotone(counts) -> None:
    for i, row in enumerate(counts):
        for j, c in enumerate(row):
            if (i + 1 < len(counts) and counts[i + 1][j] > c) or (j + 1 < len(row) and row[j + 1] > c):
                raise AssertionError(f"landscape not monotone at cell ({i}, {j})")


def near_target_cells(landscape: LandscapeGrid) -> list:
    if landscape.target < 0 or landscape.tolerance < 0:
        raise ValueError("target and tolerance must be nonnegative")
    cells = [
        (i, j, c)
        for i, row in enumerate(landscape.counts)
        for j, c in enumerate(row)
        if landscape.is_near(c)
    ]
    cells.sort(key=lambda cell: (abs(cell[2] - landscape.target), cell[0], cell[1]))
    return cells


def write_matrix_csv(fh, landscape: LandscapeGrid) -> None:
    g = landscape.grid
    w = csv.writer(fh, lineterminator="\n")
    w.writerow([f"{g.stat_a}\\{g.stat_b}", *g.values_b])
    for a, row in zip(g.values_a, landscape.counts):
        w.writerow([a, *row])


def landscape_records(landscape: LandscapeGrid) -> list:
    g = landscape.grid
    return [
        {f"threshold_{g.stat_a}": a, f"threshold_{g.stat_b}": b, "count": c,
         "near_target": int(landscape.is_near(c))}
        for a, row in zip(g.values_a, landscape.counts)
        for b, c in zip(g.values_b, row)
    ]


def write_cells_csv(fh, landscape: LandscapeGrid) -> None:
    g = landscape.grid
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["threshold_a", "threshold_b", "count", "near_target"])
    for rec in landscape_records(landscape):
        w.writerow([rec[f"threshold_{g.stat_a}"], rec[f"threshold_{g.stat_b}"],
                    rec["count"], rec["near_target"]])


def read_matrix_csv(fh) -> tuple:
    """Inverse of ``write_matrix_csv``: ``(values_a, values_b, counts)``."""
    rows = list(csv.reader(fh))
    values_b = tuple(int(v) for v in rows[0][1:])
    values_a = tuple(int(r[0]) for r in rows[1:])
    counts = tuple(tuple(int(v) for v in r[1:]) for r in rows[1:])
    return values_a, values_b, counts


@dataclass(frozen=True)
class SensitivityReport:
    base_rule: CutRule
    changed_stat: str
    old_threshold: int
    new_threshold: int
    old_count: int
    new_count: int
    players_added: tuple   # sorted by the changed statistic, highest first
    players_removed: tuple
    elected_among_changed: int

    @property
    def changed(self) -> tuple:
        return self.players_added + self.players_removed


def threshold_sensitivity(base: CutRule, stat: str, new_threshold: int,
                          careers: Mapping, elected) -> SensitivityReport:
    old = base.clause(stat).threshold
    old_members = rule_members(base, careers)
    new_members = rule_members(base.with_threshold(stat, new_threshold), careers)

    def ordered(ids):
        return tuple(sorted(ids, key=lambda pid: (-careers[pid].get(stat, 0), pid)))

    added = ordered(new_members - old_members)
    removed = ordered(old_members - new_members)
    elected = set(elected)
    return SensitivityReport(
        base_rule=base,
        changed_stat=stat,
        old_threshold=old,
        new_threshold=new_threshold,
        old_count=len(old_members),
        new_count=len(new_members),
        players_added=added,
        players_removed=removed,
        elected_among_changed=sum(1 for pid in added + removed if pid in elected),
    )


def role_for_stats(stats: Sequence[str], role: Optional[str] = None) -> str:
    if role is not None:
        return role
    if all(s in STATS_BY_ROLE[BATTER] for s in stats):
        return BATTER
    if all(s in STATS_BY_ROLE[PITCHER] for s in stats):
        return PITCHER
    raise RuleError(f"statistics {', '.join(stats)} do not belong to a single role")
