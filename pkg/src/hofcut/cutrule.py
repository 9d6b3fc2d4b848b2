"""Disjunctive threshold rules over career counts.

A rule is a flat OR of clauses ``STAT > N`` or ``STAT >= N``. A player
qualifies when any single clause holds, so rules are monotone: a bigger
career can never fall out of a rule it already satisfies.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .ingest import BATTER, BATTING_STATS, PITCHER, PITCHING_STATS

STRICT = ">"
INCLUSIVE = ">="

BATTING_KEYS = frozenset(BATTING_STATS)
PITCHING_KEYS = frozenset(PITCHING_STATS)
KNOWN_KEYS = BATTING_KEYS | PITCHING_KEYS


class RuleError(ValueError):
    pass


class UnknownPlayerError(LookupError):
    pass


@dataclass(frozen=True)
class ThresholdClause:
    stat: str
    threshold: int
    op: str = STRICT

    def __post_init__(self):
        if self.op not in (STRICT, INCLUSIVE):
            raise RuleError(f"unsupported comparison {self.op!r}")
        if self.threshold < 0:
            raise RuleError(f"threshold for {self.stat} must be nonnegative")

    def holds(self, count: int) -> bool:
        return count > self.threshold if self.op == STRICT else count >= self.threshold

    def replace(self, threshold: int) -> "ThresholdClause":
        return ThresholdClause(self.stat, threshold, self.op)

    def __str__(self):
        return f"{self.stat}{self.op}{self.threshold}"


@dataclass(frozen=True)
class CutRule:
    role: str
    clauses: tuple

    def __post_init__(self):
        if not self.clauses:
            raise RuleError("a rule needs at least one clause")
        keys = [c.stat for c in self.clauses]
        dupes = sorted({k for k in keys if keys.count(k) > 1})
        if dupes:
            raise RuleError(f"duplicate statistic in rule: {', '.join(dupes)}")
        allowed = BATTING_KEYS if self.role == BATTER else PITCHING_KEYS
        bad = [k for k in keys if k not in allowed]
        if bad:
            raise RuleError(f"statistic {bad[0]!r} is not a {self.role.lower()} statistic")

    @property
    def stats(self) -> tuple:
        return tuple(c.stat for c in self.clauses)

    def clause(self, stat: str) -> ThresholdClause:
        for c in self.clauses:
            if c.stat == stat:
                return c
        raise RuleError(f"rule {self} has no clause on {stat}")

    def with_threshold(self, stat: str, threshold: int) -> "CutRule":
        self.clause(stat)
        return CutRule(self.role, tuple(
            c.replace(threshold) if c.stat == stat else c for c in self.clauses))

    def with_clause(self, clause: ThresholdClause) -> "CutRule":
        return CutRule(self.role, self.clauses + (clause,))

    def __str__(self):
        return " or ".join(str(c) for c in self.clauses)


_TOKEN = re.compile(r"\s*(?:(>=|>)|(\|\|?)|([A-Za-z_][A-Za-z_0-9]*)|([0-9][\w.]*)|(\S))")


def _tokens(text: str):
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        op, bar, word, number, other = m.groups()
        if op:
            yield "OP", op
        elif bar:
            yield "OR", bar
        elif word:
            yield ("OR", word) if word.lower() == "or" else ("WORD", word)
        elif number:
            yield "NUMBER", number
        else:
            yield "OTHER", other
        pos = m.end()


def parse_rule(text: str, role: Optional[str] = None) -> CutRule:
    """Parse ``"H>2500 or HR>350"`` style text into a rule.

    ``or`` and ``|`` both separate clauses. Statistic names are
    case-insensitive. The role is inferred from the statistics unless given;
    ``G`` alone counts as a batting rule.
    """
    toks = list(_tokens(text))
    clauses = []
    i = 0
    while True:
        kind, val = toks[i] if i < len(toks) else ("END", "")
        if kind != "WORD":
            raise RuleError(f"expected a statistic, got {val or 'end of input'!r}")
        stat = val.upper()
        if stat not in KNOWN_KEYS:
            raise RuleError(f"unknown statistic {val!r}")
        kind, op = toks[i + 1] if i + 1 < len(toks) else ("END", "")
        if kind != "OP":
            raise RuleError(f"expected '>' or '>=' after {val!r}")
        kind, num = toks[i + 2] if i + 2 < len(toks) else ("END", "")
        if kind != "NUMBER" or not num.isdigit():
            raise RuleError(f"threshold for {stat} is not a nonnegative integer: {num!r}")
        clauses.append(ThresholdClause(stat, int(num), op))
        i += 3
        if i == len(toks):
            break
        kind, val = toks[i]
        if kind != "OR":
            raise RuleError(f"expected 'or' or '|', got {val!r}")
        i += 1

    keys = {c.stat for c in clauses}
    if role is None:
        if keys <= BATTING_KEYS:
            role = BATTER
        elif keys <= PITCHING_KEYS:
            role = PITCHER
        else:
            raise RuleError(f"rule mixes batting and pitching statistics: {text!r}")
    return CutRule(role, tuple(clauses))


def print_rule(rule: CutRule) -> str:
    return str(rule)


DEFAULT_BATTING_RULE = parse_rule("H>=2500 or HR>=350")
DEFAULT_PITCHING_RULE = parse_rule("K>=2800 or W>=240")
TOP_TIER_BATTING_RULE = parse_rule("H>=3300 or HR>=600")
TOP_TIER_PITCHING_RULE = parse_rule("K>=4000 or W>=350")
DEFAULT_RULES = {BATTER: DEFAULT_BATTING_RULE, PITCHER: DEFAULT_PITCHING_RULE}
TOP_TIER_RULES = {BATTER: TOP_TIER_BATTING_RULE, PITCHER: TOP_TIER_PITCHING_RULE}


def evaluate(rule: CutRule, totals) -> bool:
    """True when any clause holds; statistics the totals lack count as 0."""
    return any(c.holds(totals.get(c.stat, 0)) for c in rule.clauses)


def first_qualifying(rule: CutRule, totals) -> Optional[str]:
    for c in rule.clauses:
        if c.holds(totals.get(c.stat, 0)):
            return c.stat
    return None


def rule_members(rule: CutRule, careers: Mapping) -> set:
    return {pid for pid, totals in careers.items() if evaluate(rule, totals)}


@dataclass(frozen=True)
class MarginReport:
    player_id: str
    surplus: Mapping[str, int]
    qualifies: bool
    qualifying_stats: frozenset

    @property
    def best_surplus(self) -> int:
        return max(self.surplus.values())


def margin(rule: CutRule, player_id: str, totals) -> MarginReport:
    surplus = {c.stat: totals.get(c.stat, 0) - c.threshold for c in rule.clauses}
    hits = frozenset(c.stat for c in rule.clauses if c.holds(totals.get(c.stat, 0)))
    return MarginReport(player_id, surplus, bool(hits), hits)


def margins(rule: CutRule, careers: Mapping,
            subset: Optional[Iterable[str]] = None) -> list:
    """Distance to each clause for the requested players.

    Surplus is career count minus threshold, so a strict clause needs a
    positive surplus and an inclusive one only a nonnegative surplus.
    Reports come back with the largest surplus first.
    """
    if subset is None:
        ids = list(careers)
    else:
        ids = list(dict.fromkeys(subset))
        unknown = sorted(pid for pid in ids if pid not in careers)
        if unknown:
            raise UnknownPlayerError(f"unknown player ids: {', '.join(unknown)}")
    reports = [margin(rule, pid, careers[pid]) for pid in ids]
    reports.sort(key=lambda r: (-r.best_surplus, r.player_id))
    return reports
