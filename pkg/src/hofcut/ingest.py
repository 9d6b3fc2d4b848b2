"""Load Lahman-style CSV files and aggregate them into career totals.

Five tables are read from a data directory: People, Batting, Pitching,
Appearances and HallOfFame. Season rows outside the configured leagues are
dropped before anything is summed, so every downstream table describes
major-league careers only.
"""
from __future__ import annotations

import csv
import hashlib
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

log = logging.getLogger(__name__)

BATTER = "Batter"
PITCHER = "Pitcher"
ROLES = (BATTER, PITCHER)

# Fixed order doubles as the tie-break for primary position.
POSITIONS = ("P", "C", "1B", "2B", "3B", "SS", "LF", "CF", "RF", "DH")
UNKNOWN = "Unknown"
APPEARANCE_COLUMNS = {
    "P": "G_p", "C": "G_c", "1B": "G_1b", "2B": "G_2b", "3B": "G_3b",
    "SS": "G_ss", "LF": "G_lf", "CF": "G_cf", "RF": "G_rf", "DH": "G_dh",
}

# statistic-key -> source column
BATTING_STATS = {"G": "G", "AB": "AB", "R": "R", "H": "H", "HR": "HR", "RBI": "RBI"}
PITCHING_STATS = {"G": "G", "W": "W", "K": "SO", "SV": "SV", "OUTS": "IPouts"}
STATS_BY_ROLE = {BATTER: tuple(BATTING_STATS), PITCHER: tuple(PITCHING_STATS)}

DEFAULT_LEAGUES = ("NA", "NL", "AA", "UA", "PL", "FL", "AL")

FILES = ("People", "Batting", "Pitching", "Appearances", "HallOfFame")


class DataError(Exception):
    """Raised for missing input files or malformed rows."""


@dataclass(frozen=True)
class LeagueFilter:
    included_league_ids: frozenset

    def __post_init__(self):
        if not self.included_league_ids:
            raise ValueError("league filter must include at least one league")

    @classmethod
    def of(cls, leagues: Iterable[str]) -> "LeagueFilter":
        return cls(frozenset(lg.strip() for lg in leagues if lg.strip()))

    def __contains__(self, league_id: str) -> bool:
        return league_id in self.included_league_ids


@dataclass(frozen=True)
class IngestConfig:
    """Where the data lives and which seasons count.

    ``last_season`` and ``last_induction`` trim a newer Lahman release back
    to an older vintage; ``None`` keeps everything.
    """
    data_dir: Path
    included_leagues: tuple = DEFAULT_LEAGUES
    bwar_file: Optional[Path] = None
    last_season: Optional[int] = None
    last_induction: Optional[int] = None

    def __post_init__(self):
        if not self.included_leagues:
            raise ValueError("included_leagues must be non-empty")

    @property
    def league_filter(self) -> LeagueFilter:
        return LeagueFilter.of(self.included_leagues)


@dataclass(frozen=True)
class SeasonRow:
    player_id: str
    year: int
    stint: int
    league_id: str
    counts: Mapping[str, int]


@dataclass(frozen=True)
class AppearanceRow:
    player_id: str
    year: int
    league_id: str
    games: Mapping[str, int]  # position -> games


@dataclass(frozen=True)
class HallOfFameRow:
    player_id: str
    year: int
    voted_by: str
    inducted: bool
    category: str
    note: str = ""


@dataclass(frozen=True)
class RawDataset:
    people: Mapping[str, Mapping[str, str]]
    batting: tuple
    pitching: tuple
    appearances: tuple
    hall_of_fame: tuple
    row_counts: Mapping[str, int]
    digests: Mapping[str, str]  # file name -> sha256

    @cached_property
    def appearances_by_player(self) -> Mapping[str, tuple]:
        by_player: dict = {}
        for r in self.appearances:
            by_player.setdefault(r.player_id, []).append(r)
        return MappingProxyType({k: tuple(v) for k, v in by_player.items()})


@dataclass(frozen=True)
class CareerTotals:
    player_id: str
    counts: Mapping[str, int]

    def get(self, stat: str, default: int = 0) -> int:
        return self.counts.get(stat, default)

    def __reduce__(self):
        # mappingproxy does not pickle; needed for process-pool sweeps
        return _career_totals, (self.player_id, dict(self.counts))


def _career_totals(player_id, counts):
    return CareerTotals(player_id, MappingProxyType(counts))


@dataclass(frozen=True)
class PlayerRecord:
    player_id: str
    full_name: str
    first_year: int
    last_year: int
    role: str
    primary_position: str
    elected: bool

    def __post_init__(self):
        if self.role == PITCHER and self.primary_position != "P":
            raise ValueError(f"{self.player_id}: pitcher must have position P")
        if self.first_year > self.last_year:
            raise ValueError(f"{self.player_id}: first_year after last_year")


@dataclass(frozen=True)
class CareerTable:
    """Career totals from the batting and pitching tables.

    A two-way player shows up in both. ``role_table`` gives the view the
    rule engine works on: only players of one role, summed from that role's
    table.
    """
    batting: Mapping[str, CareerTotals]
    pitching: Mapping[str, CareerTotals]

    def table(self, role: str) -> Mapping[str, CareerTotals]:
        return self.batting if role == BATTER else self.pitching

    def role_table(self, role: str, directory: Mapping[str, PlayerRecord]) -> dict:
        return {
            pid: totals
            for pid, totals in self.table(role).items()
            if pid in directory and directory[pid].role == role
        }

    def player_ids(self) -> set:
        return set(self.batting) | set(self.pitching)


@dataclass(frozen=True)
class ElectedSets:
    batters: frozenset
    pitchers: frozenset

    @property
    def all(self) -> frozenset:
        return self.batters | self.pitchers

    def for_role(self, role: str) -> frozenset:
        return self.batters if role == BATTER else self.pitchers


@dataclass
class Dataset:
    """Everything the analyses need, built once from one configuration."""
    config: IngestConfig
    raw: RawDataset
    careers: CareerTable
    directory: dict
    elected: ElectedSets
    _role_tables: dict = field(default_factory=dict, repr=False)

    def role_table(self, role: str) -> dict:
        if role not in self._role_tables:
            self._role_tables[role] = self.careers.role_table(role, self.directory)
        return self._role_tables[role]

    def name(self, player_id: str) -> str:
        rec = self.directory.get(player_id)
        return rec.full_name if rec else player_id


def _parse_int(value: str, fname: str, line: int, column: str) -> int:
    value = value.strip()
    if not value:
        return 0
    try:
        n = int(value)
    except ValueError:
        try:
            f = float(value)
        except ValueError:
            f = None
        if f is None or not f.is_integer():
            raise DataError(f"{fname}:{line}: column {column!r}: not an integer: {value!r}")
        n = int(f)
    if n < 0:
        raise DataError(f"{fname}:{line}: column {column!r}: negative count {n}")
    return n


def _read_rows(path: Path):
    """Yield (line_number, row_dict) pairs; line numbers count the header as 1."""
    with open(path, newline="", encoding="utf-8", errors="replace") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"{path.name}: missing header row")
        for row in reader:
            yield reader.line_num, row


def _require(row: dict, column: str, fname: str, line: int) -> str:
    value = row.get(column)
    if value is None:
        raise DataError(f"{fname}:{line}: missing column {column!r}")
    return value.strip()


def _season_rows(path: Path, stat_columns: Mapping[str, str]) -> list:
    fname = path.name
    rows = []
    seen = set()
    for line, row in _read_rows(path):
        pid = _require(row, "playerID", fname, line)
        year = _parse_int(_require(row, "yearID", fname, line), fname, line, "yearID")
        stint = _parse_int(row.get("stint") or "1", fname, line, "stint")
        key = (pid, year, stint)
        if key in seen:
            raise DataError(f"{fname}:{line}: duplicate row for {pid} {year} stint {stint}")
        seen.add(key)
        counts = {
            stat: _parse_int(row.get(col) or "", fname, line, col)
            for stat, col in stat_columns.items()
        }
        rows.append(SeasonRow(pid, year, stint or 1, _require(row, "lgID", fname, line),
                              MappingProxyType(counts)))
    return rows


def _appearance_rows(path: Path) -> list:
    fname = path.name
    rows = []
    for line, row in _read_rows(path):
        games = {
            pos: _parse_int(row.get(col) or "", fname, line, col)
            for pos, col in APPEARANCE_COLUMNS.items()
        }
        rows.append(AppearanceRow(
            _require(row, "playerID", fname, line),
            _parse_int(_require(row, "yearID", fname, line), fname, line, "yearID"),
            (row.get("lgID") or "").strip(),
            MappingProxyType(games),
        ))
    return rows


def _hof_rows(path: Path) -> list:
    fname = path.name
    rows = []
    for line, row in _read_rows(path):
        rows.append(HallOfFameRow(
            _require(row, "playerID", fname, line),
            _parse_int(_require(row, "yearid", fname, line), fname, line, "yearid"),
            (row.get("votedBy") or "").strip(),
            (row.get("inducted") or "").strip().upper() in ("Y", "YES"),
            (row.get("category") or "").strip(),
            (row.get("needed_note") or "").strip(),
        ))
    return rows


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def load_dataset(data_dir, config: Optional[IngestConfig] = None) -> RawDataset:
    """Parse the five Lahman tables found in ``data_dir``.

    Empty count cells read as 0. Seasons after ``config.last_season`` and
    inductions after ``config.last_induction`` are dropped here, so the rest
    of the pipeline never sees them.
    """
    data_dir = Path(data_dir)
    paths = {}
    for name in FILES:
        p = data_dir / f"{name}.csv"
        if not p.is_file():
            raise DataError(f"missing input file: {p.name} (looked in {data_dir})")
        paths[name] = p

    people = {}
    for line, row in _read_rows(paths["People"]):
        pid = _require(row, "playerID", "People.csv", line)
        people[pid] = MappingProxyType({k: (v or "").strip() for k, v in row.items() if k})
    batting = _season_rows(paths["Batting"], BATTING_STATS)
    pitching = _season_rows(paths["Pitching"], PITCHING_STATS)
    appearances = _appearance_rows(paths["Appearances"])
    hof = _hof_rows(paths["HallOfFame"])

    counts = {
        "People.csv": len(people), "Batting.csv": len(batting), "Pitching.csv": len(pitching),
        "Appearances.csv": len(appearances), "HallOfFame.csv": len(hof),
    }
    for fname, n in counts.items():
        log.info("read %s: %d rows", fname, n)

    if config is not None and config.last_season is not None:
        cut = config.last_season
        batting = [r for r in batting if r.year <= cut]
        pitching = [r for r in pitching if r.year <= cut]
        appearances = [r for r in appearances if r.year <= cut]
    if config is not None and config.last_induction is not None:
        hof = [r for r in hof if r.year <= config.last_induction]

    return RawDataset(
        people=MappingProxyType(people),
        batting=tuple(batting),
        pitching=tuple(pitching),
        appearances=tuple(appearances),
        hall_of_fame=tuple(hof),
        row_counts=MappingProxyType(counts),
        digests=MappingProxyType({f"{n}.csv": _sha256(p) for n, p in paths.items()}),
    )


def _aggregate(rows: Iterable[SeasonRow], leagues: LeagueFilter, stats) -> dict:
    sums: dict = {}
    for r in rows:
        if r.league_id not in leagues:
            continue
        acc = sums.setdefault(r.player_id, dict.fromkeys(stats, 0))
        for stat, n in r.counts.items():
            acc[stat] += n
    return {pid: CareerTotals(pid, MappingProxyType(c)) for pid, c in sorted(sums.items())}


def build_careers(raw: RawDataset, leagues: LeagueFilter) -> CareerTable:
    return CareerTable(
        batting=MappingProxyType(_aggregate(raw.batting, leagues, BATTING_STATS)),
        pitching=MappingProxyType(_aggregate(raw.pitching, leagues, PITCHING_STATS)),
    )


def primary_position(games: Mapping[str, int]) -> str:
    best, best_g = UNKNOWN, 0
    for pos in POSITIONS:
        g = games.get(pos, 0)
        if g > best_g:
            best, best_g = pos, g
    return best


def classify_player(raw: RawDataset, player_id: str,
                    leagues: Optional[LeagueFilter] = None,
                    careers: Optional[CareerTable] = None) -> tuple:
    """Return ``(role, primary_position)`` for one player.

    The primary position is the one with the most career games in
    Appearances. Without usable Appearances rows, the role comes from the
    career tables the player appears in.
    """
    games = dict.fromkeys(POSITIONS, 0)
    for r in raw.appearances_by_player.get(player_id, ()):
        if leagues is None or r.league_id in leagues:
            for pos, g in r.games.items():
                games[pos] += g
    pos = primary_position(games)
    if pos != UNKNOWN:
        return (PITCHER if pos == "P" else BATTER), pos

    if careers is None:
        careers = build_careers(raw, leagues or LeagueFilter.of(_all_leagues(raw)))
    bat = careers.batting.get(player_id)
    pit = careers.pitching.get(player_id)
    if pit is not None and (bat is None or (pit.get("OUTS") > 0 and 2 * pit.get("G") >= bat.get("G"))):
        return PITCHER, "P"
    return BATTER, UNKNOWN


def _all_leagues(raw: RawDataset) -> set:
    return {r.league_id for r in raw.batting} | {r.league_id for r in raw.pitching} or {""}


def _full_name(person: Mapping[str, str], player_id: str) -> str:
    name = f"{person.get('nameFirst', '')} {person.get('nameLast', '')}".strip()
    return name or player_id


# Lahman flags candidates who advanced past a preliminary screening vote
# with inducted=Y; those rows are not inductions.
NOT_INDUCTION_NOTES = frozenset({"preliminary poll"})


def inducted_players(raw: RawDataset) -> set:
    return {
        r.player_id for r in raw.hall_of_fame
        if r.inducted and r.category == "Player" and r.note.lower() not in NOT_INDUCTION_NOTES
    }


def build_directory(raw: RawDataset, careers: CareerTable, leagues: LeagueFilter) -> dict:
    """One PlayerRecord per player with a retained season, keyed by id."""
    inducted = inducted_players(raw)
    spans: dict = {}
    for r in raw.batting + raw.pitching:
        if r.league_id in leagues:
            lo, hi = spans.get(r.player_id, (r.year, r.year))
            spans[r.player_id] = (min(lo, r.year), max(hi, r.year))

    directory = {}
    for pid in sorted(careers.player_ids()):
        person = raw.people.get(pid)
        if person is None:
            log.warning("player %s has seasons but no People row; skipped", pid)
            continue
        role, pos = classify_player(raw, pid, leagues, careers)
        first, last = spans[pid]
        directory[pid] = PlayerRecord(pid, _full_name(person, pid), first, last, role, pos,
                                      pid in inducted)
    return directory


def elected_players(raw: RawDataset, directory: Mapping[str, PlayerRecord],
                    leagues: Optional[LeagueFilter] = None) -> ElectedSets:
    """Inducted players, split by role, limited to retained major-league careers.

    ``directory`` only holds players with a retained season, so the league
    restriction is already applied through it.
    """
    batters, pitchers = set(), set()
    for pid in sorted(inducted_players(raw)):
        if pid not in raw.people:
            log.warning("inducted player %s missing from People; excluded", pid)
            continue
        rec = directory.get(pid)
        if rec is None:
            continue
        (pitchers if rec.role == PITCHER else batters).add(pid)
    return ElectedSets(frozenset(batters), frozenset(pitchers))


def load(config: IngestConfig) -> Dataset:
    """Run the whole ingestion pipeline for one configuration."""
    leagues = config.league_filter
    raw = load_dataset(config.data_dir, config)
    careers = build_careers(raw, leagues)
    directory = build_directory(raw, careers, leagues)
    elected = elected_players(raw, directory, leagues)
    return Dataset(config, raw, careers, directory, elected)


def write_careers_csv(fh, dataset: Dataset, role: str) -> None:
    stats = STATS_BY_ROLE[role]
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["player_id", "name", "role", "position", "elected", *stats])
    for pid, totals in sorted(dataset.role_table(role).items()):
        rec = dataset.directory[pid]
        w.writerow([pid, rec.full_name, rec.role, rec.primary_position,
                    int(rec.elected), *(totals.get(s) for s in stats)])
