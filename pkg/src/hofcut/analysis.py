"""Compare rule membership against the elected Hall of Fame."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from .cutrule import CutRule, rule_members
from .ingest import POSITIONS, UNKNOWN, DataError

CATEGORIES = ("both", "cut_only", "elected_only")


@dataclass(frozen=True)
class SelectivityResult:
    stat: str
    n: int
    elected_in_top_n: int
    boundary_note: str
    boundary_value: int = 0
    tied_at_boundary: int = 0   # players sharing the rank-n value
    tied_inside: int = 0        # how many of those made the top n


def ranked(stat: str, careers: Mapping) -> list:
    """Player ids by ``stat`` descending, ties by id ascending."""
    return sorted(careers, key=lambda pid: (-careers[pid].get(stat, 0), pid))


def single_stat_selectivity(stat: str, careers: Mapping, elected, n: int) -> SelectivityResult:
    """Count elected players among the top ``n`` by one statistic."""
    if n < 1:
        raise ValueError("n must be at least 1")
    order = ranked(stat, careers)
    top = order[:n]
    elected = set(elected)
    hits = sum(1 for pid in top if pid in elected)
    if not top:
        return SelectivityResult(stat, n, 0, "empty career table")

    value = careers[top[-1]].get(stat, 0)
    tied = [pid for pid in order if careers[pid].get(stat, 0) == value]
    inside = sum(1 for pid in tied if pid in set(top))
    if len(tied) == 1:
        note = f"no tie at rank {len(top)} ({stat}={value})"
    else:
        note = (f"{len(tied)} players tie at {stat}={value}; "
                f"{inside} inside the top {len(top)} by player id")
    return SelectivityResult(stat, n, hits, note, value, len(tied), inside)


@dataclass(frozen=True)
class MembershipPartition:
    both: frozenset
    cut_only: frozenset
    elected_only: frozenset

    def sizes(self) -> dict:
        return {"both": len(self.both), "cut_only": len(self.cut_only),
                "elected_only": len(self.elected_only)}


def compare_memberships(cut, elected) -> MembershipPartition:
    cut, elected = frozenset(cut), frozenset(elected)
    return MembershipPartition(cut & elected, cut - elected, elected - cut)


def top_nonmember_table(stat: str, careers: Mapping, elected, n: int,
                        directory: Optional[Mapping] = None) -> list:
    """The ``n`` best non-elected players by ``stat`` as ``(player_id, name, value)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    elected = set(elected)
    rows = []
    for pid in ranked(stat, careers):
        if pid in elected:
            continue
        rows.append((pid, _name(directory, pid), careers[pid].get(stat, 0)))
        if len(rows) == n:
            break
    return rows


def load_bwar(path) -> dict:
    """Read an external ``player_id,bwar`` file."""
    path = Path(path)
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"player_id", "bwar"} <= set(reader.fieldnames):
            raise DataError(f"{path.name}: expected columns player_id,bwar")
        for row in reader:
            try:
                out[row["player_id"].strip()] = float(row["bwar"])
            except ValueError:
                raise DataError(f"{path.name}:{reader.line_num}: bad bwar value {row['bwar']!r}") from None
    return out


def top_tier_table(rule: CutRule, careers: Mapping, directory: Optional[Mapping] = None,
                   bwar: Optional[Mapping[str, float]] = None) -> list:
    """Members of ``rule`` with every rule statistic.

    Ordered by bWAR when a mapping is supplied (players missing from it go
    last), otherwise by the rule's first statistic.
    """
    members = rule_members(rule, careers)
    first = rule.clauses[0].stat
    if bwar is not None:
        key = lambda pid: (pid not in bwar, -bwar.get(pid, 0.0), pid)
    else:
        key = lambda pid: (-careers[pid].get(first, 0), pid)
    rows = []
    for pid in sorted(members, key=key):
        row = {"player_id": pid, "name": _name(directory, pid)}
        row.update({s: careers[pid].get(s, 0) for s in rule.stats})
        if bwar is not None:
            row["bwar"] = bwar.get(pid)
        rows.append(row)
    return rows


def position_breakdown(partition: MembershipPartition, directory: Mapping) -> dict:
    """Counts per primary position for each partition category."""
    table = {pos: dict.fromkeys(CATEGORIES, 0) for pos in POSITIONS + (UNKNOWN,)}
    for cat in CATEGORIES:
        for pid in getattr(partition, cat):
            if pid not in directory:
                raise KeyError(f"no player record for {pid}")
            table[directory[pid].primary_position][cat] += 1
    return table


def position_rows(table: Mapping) -> list:
    """Long format ``(position, category, count)`` rows."""
    return [(pos, cat, counts[cat]) for pos, counts in table.items() for cat in CATEGORIES]


def _name(directory, pid):
    if directory is None or pid not in directory:
        return pid
    return directory[pid].full_name
