"""Command-line front end: ``hofcut <subcommand> [options]``.

Every subcommand writes CSV (or JSON-lines records with ``--format
records``) to stdout or ``--out``. With ``--out`` a ``.manifest.json`` file
is written next to the output, recording inputs, their digests and the
effective configuration.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from .analysis import (compare_memberships, load_bwar, position_breakdown, position_rows,
                       single_stat_selectivity, top_nonmember_table, top_tier_table)
from .cutrule import (DEFAULT_RULES, INCLUSIVE, STRICT, TOP_TIER_RULES, RuleError,
                      UnknownPlayerError, first_qualifying, margins, parse_rule, rule_members)
from .ingest import (BATTER, DEFAULT_LEAGUES, PITCHER, STATS_BY_ROLE, DataError, IngestConfig,
                     load, write_careers_csv)
from .landscape import (DEFAULT_TOLERANCE, ThresholdGrid, landscape_records, near_target_cells,
                        parse_grid, role_for_stats, sweep_landscape, threshold_sensitivity,
                        write_cells_csv, write_matrix_csv)

log = logging.getLogger("hofcut")

ENV_DATA_DIR = "HOFCUT_DATA_DIR"
COMMANDS = ("careers", "elected", "evaluate", "margins", "selectivity", "landscape",
            "sensitivity", "compare", "positions", "table")

# config-file key -> (argparse dest, converter)
CONFIG_KEYS = {
    "data_dir": ("data_dir", str),
    "leagues": ("leagues", str),
    "last_season": ("last_season", int),
    "last_induction": ("last_induction", int),
    "bwar_file": ("bwar_file", str),
    "format": ("format", str),
    "tolerance": ("tolerance", int),
    "workers": ("workers", int),
}
DEFAULTS = {"format": "csv", "tolerance": DEFAULT_TOLERANCE, "workers": 1,
            "leagues": ",".join(DEFAULT_LEAGUES)}


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    config: dict
    inputs: dict
    outputs: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    tool_version: str = __version__

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True) + "\n"


def read_config_file(path) -> dict:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
            dest, conv = CONFIG_KEYS[key]
            try:
                values[dest] = conv(value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return values


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("data")
    g.add_argument("--data-dir", help=f"Lahman CSV directory (default: ${ENV_DATA_DIR})")
    g.add_argument("--leagues", help="comma-separated league codes to keep")
    g.add_argument("--last-season", type=int, help="ignore seasons after this year")
    g.add_argument("--last-induction", type=int, help="ignore inductions after this year")
    g.add_argument("--config", help="key = value configuration file")
    o = p.add_argument_group("output")
    o.add_argument("--out", help="write to this file instead of stdout")
    o.add_argument("--format", choices=("csv", "records"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hofcut", description="career-count threshold rules against the elected Hall of Fame")
    parser.add_argument("--version", action="version", version=f"hofcut {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        _common(p)
        return p

    p = add("careers", "career totals table")
    p.add_argument("--role", choices=("batter", "pitcher"), default="batter")

    add("elected", "elected Hall of Fame players with role and position")

    p = add("evaluate", "players who make a rule")
    _rule_args(p)

    p = add("margins", "surplus over each clause of a rule")
    _rule_args(p)
    p.add_argument("--players", help="comma-separated player ids (default: everyone)")
    p.add_argument("--top-n", type=int, help="keep only the first N reports")

    p = add("selectivity", "elected players among the top n by one statistic")
    p.add_argument("--stats", required=True, help="comma-separated statistics, e.g. H,R,RBI,HR")
    p.add_argument("--role", choices=("batter", "pitcher"))
    p.add_argument("--top-n", type=int, help="rank depth (default: elected count for the role)")

    p = add("landscape", "cut size over a grid of threshold pairs")
    p.add_argument("--stats", required=True, help="two statistics, e.g. H,HR")
    p.add_argument("--grid-a", help="thresholds for the first statistic: START:STOP:STEP or a,b,c")
    p.add_argument("--grid-b", help="thresholds for the second statistic")
    p.add_argument("--target", type=int, help="target size (default: elected count for the role)")
    p.add_argument("--tolerance", type=int)
    p.add_argument("--strict", action="store_true", help="use '>' instead of '>=' in every cell")
    p.add_argument("--workers", type=int)

    p = add("sensitivity", "effect of moving one threshold")
    _rule_args(p)
    p.add_argument("--set", required=True, metavar="STAT=VALUE", help="new threshold, e.g. H=2250")

    p = add("compare", "partition of cut and elected players")
    _rule_args(p)

    p = add("positions", "partition counts by fielding position")
    _rule_args(p)

    p = add("table", "top non-elected players or the top-tier roster")
    p.add_argument("--kind", choices=("nonmember", "top-tier"), default="nonmember")
    p.add_argument("--stats", help="statistic to rank by (nonmember tables)")
    p.add_argument("--top-n", type=int, default=10)
    _rule_args(p)
    p.add_argument("--bwar-file", help="player_id,bwar CSV used to order top-tier tables")
    return parser


def _rule_args(p) -> None:
    p.add_argument("--rule", help='rule text, e.g. "H>=2500 or HR>=350"')
    p.add_argument("--role", choices=("batter", "pitcher"),
                   help="role for the default rule when --rule is omitted")


def _role(name: Optional[str]) -> Optional[str]:
    return {"batter": BATTER, "pitcher": PITCHER, None: None}[name]


def resolve_settings(args) -> dict:
    settings = dict(DEFAULTS)
    env_dir = os.environ.get(ENV_DATA_DIR)
    if env_dir:
        settings["data_dir"] = env_dir
    if getattr(args, "config", None):
        settings.update(read_config_file(args.config))
    for key in ("data_dir", "leagues", "last_season", "last_induction", "bwar_file",
                "format", "tolerance", "workers"):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if not settings.get("data_dir"):
        raise UsageError(f"no data directory: pass --data-dir or set {ENV_DATA_DIR}")
    return settings


def ingest_config(settings: dict) -> IngestConfig:
    leagues = tuple(lg.strip() for lg in settings["leagues"].split(",") if lg.strip())
    if not leagues:
        raise UsageError("--leagues must name at least one league")
    bwar = settings.get("bwar_file")
    return IngestConfig(
        data_dir=Path(settings["data_dir"]),
        included_leagues=leagues,
        bwar_file=Path(bwar) if bwar else None,
        last_season=settings.get("last_season"),
        last_induction=settings.get("last_induction"),
    )


class Output:
    """Collects rows for one of the two encodings."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.buf = io.StringIO()
        self._writer = csv.writer(self.buf, lineterminator="\n")
        self._header = None

    def header(self, cols) -> None:
        self._header = list(cols)
        if self.fmt == "csv":
            self._writer.writerow(self._header)

    def row(self, values) -> None:
        values = list(values)
        if self.fmt == "csv":
            self._writer.writerow(values)
        else:
            self.buf.write(json.dumps(dict(zip(self._header, values)), ensure_ascii=False) + "\n")

    def text(self) -> str:
        return self.buf.getvalue()


def _pick_rule(args, default_table=DEFAULT_RULES):
    if args.rule:
        return parse_rule(args.rule, _role(args.role))
    return default_table[_role(args.role) or BATTER]


def cmd_careers(ds, args, out, extra):
    role = _role(args.role)
    if out.fmt == "csv":
        write_careers_csv(out.buf, ds, role)
        return {}
    stats = STATS_BY_ROLE[role]
    out.header(["player_id", "name", "role", "position", "elected", *stats])
    for pid, t in sorted(ds.role_table(role).items()):
        rec = ds.directory[pid]
        out.row([pid, rec.full_name, rec.role, rec.primary_position, int(rec.elected),
                 *(t.get(s) for s in stats)])
    return {}


def cmd_elected(ds, args, out, extra):
    out.header(["player_id", "name", "role", "position"])
    for pid in sorted(ds.elected.all):
        rec = ds.directory[pid]
        out.row([pid, rec.full_name, rec.role, rec.primary_position])
    return {"batters": len(ds.elected.batters), "pitchers": len(ds.elected.pitchers)}


def cmd_evaluate(ds, args, out, extra):
    rule = _pick_rule(args)
    table = ds.role_table(rule.role)
    members = sorted(rule_members(rule, table))
    out.header(["player_id", "name", "qualifying_stat", *rule.stats, "elected"])
    for pid in members:
        t = table[pid]
        out.row([pid, ds.name(pid), first_qualifying(rule, t), *(t.get(s) for s in rule.stats),
                 int(ds.directory[pid].elected)])
    return {"rule": str(rule), "members": len(members)}


def cmd_margins(ds, args, out, extra):
    rule = _pick_rule(args)
    table = ds.role_table(rule.role)
    subset = [p.strip() for p in args.players.split(",")] if args.players else None
    reports = margins(rule, table, subset)
    if args.top_n is not None:
        reports = reports[:args.top_n]
    out.header(["player_id", "name", "qualifies", *(f"surplus_{s}" for s in rule.stats)])
    for r in reports:
        out.row([r.player_id, ds.name(r.player_id), int(r.qualifies),
                 *(r.surplus[s] for s in rule.stats)])
    return {"rule": str(rule), "reports": len(reports)}


def cmd_selectivity(ds, args, out, extra):
    stats = [s.strip().upper() for s in args.stats.split(",") if s.strip()]
    role = role_for_stats(stats, _role(args.role))
    elected = ds.elected.for_role(role)
    n = args.top_n or len(elected)
    if n < 1:
        raise UsageError("--top-n must be at least 1 (no elected players to size it from)")
    out.header(["stat", "n", "elected_in_top_n", "boundary_note"])
    for stat in stats:
        res = single_stat_selectivity(stat, ds.role_table(role), elected, n)
        out.row([res.stat, res.n, res.elected_in_top_n, res.boundary_note])
    return {"role": role, "n": n}


def cmd_landscape(ds, args, out, extra):
    stats = [s.strip().upper() for s in args.stats.split(",") if s.strip()]
    if len(stats) != 2:
        raise UsageError("--stats needs exactly two statistics for a landscape")
    role = role_for_stats(stats)
    op = STRICT if args.strict else INCLUSIVE
    base = ThresholdGrid.default(*stats, op=op) if not (args.grid_a and args.grid_b) else None
    grid = ThresholdGrid(
        stats[0], stats[1],
        parse_grid(args.grid_a) if args.grid_a else base.values_a,
        parse_grid(args.grid_b) if args.grid_b else base.values_b,
        op,
    )
    target = args.target if args.target is not None else len(ds.elected.for_role(role))
    land = sweep_landscape(grid, ds.role_table(role), role, target=target,
                           tolerance=extra["tolerance"], workers=extra["workers"])
    if out.fmt == "csv":
        write_matrix_csv(out.buf, land)
    else:
        recs = landscape_records(land)
        out.header(list(recs[0]))
        for rec in recs:
            out.row(rec.values())
    cells_buf = io.StringIO()
    write_cells_csv(cells_buf, land)
    extra["side_outputs"]["cells"] = cells_buf.getvalue()
    near = [(grid.values_a[i], grid.values_b[j], c) for i, j, c in near_target_cells(land)]
    return {"target": target, "tolerance": land.tolerance, "near_target": [list(x) for x in near]}


def _parse_set(text: str) -> tuple:
    if "=" not in text:
        raise UsageError(f"--set expects STAT=VALUE, got {text!r}")
    stat, value = text.split("=", 1)
    try:
        return stat.strip().upper(), int(value)
    except ValueError:
        raise UsageError(f"--set threshold must be an integer, got {value!r}") from None


def cmd_sensitivity(ds, args, out, extra):
    rule = _pick_rule(args)
    stat, new = _parse_set(args.set)
    table = ds.role_table(rule.role)
    rep = threshold_sensitivity(rule, stat, new, table, ds.elected.for_role(rule.role))
    out.header(["change", "player_id", "name", stat, "elected"])
    for change, ids in (("added", rep.players_added), ("removed", rep.players_removed)):
        for pid in ids:
            out.row([change, pid, ds.name(pid), table[pid].get(stat), int(ds.directory[pid].elected)])
    summary = {"rule": str(rule), "stat": stat, "old_threshold": rep.old_threshold,
               "new_threshold": rep.new_threshold, "old_count": rep.old_count,
               "new_count": rep.new_count, "elected_among_changed": rep.elected_among_changed}
    log.info("%s %d -> %d: %d -> %d members, %d elected among changed", stat,
             rep.old_threshold, new, rep.old_count, rep.new_count, rep.elected_among_changed)
    return summary


def _partition(ds, rule):
    cut = rule_members(rule, ds.role_table(rule.role))
    return compare_memberships(cut, ds.elected.for_role(rule.role))


def cmd_compare(ds, args, out, extra):
    rule = _pick_rule(args)
    part = _partition(ds, rule)
    out.header(["category", "player_id", "name"])
    for cat in ("both", "cut_only", "elected_only"):
        for pid in sorted(getattr(part, cat)):
            out.row([cat, pid, ds.name(pid)])
    return {"rule": str(rule), **part.sizes()}


def cmd_positions(ds, args, out, extra):
    rule = _pick_rule(args)
    table = position_breakdown(_partition(ds, rule), ds.directory)
    out.header(["position", "category", "count"])
    for row in position_rows(table):
        out.row(row)
    return {"rule": str(rule)}


def cmd_table(ds, args, out, extra):
    if args.kind == "nonmember":
        if not args.stats:
            raise UsageError("table --kind nonmember needs --stats")
        stat = args.stats.strip().upper()
        role = role_for_stats([stat], _role(args.role))
        rows = top_nonmember_table(stat, ds.role_table(role), ds.elected.for_role(role),
                                   args.top_n, ds.directory)
        out.header(["rank", "player_id", "name", stat])
        for rank, (pid, name, value) in enumerate(rows, 1):
            out.row([rank, pid, name, value])
        return {"stat": stat, "rows": len(rows)}

    rule = _pick_rule(args, TOP_TIER_RULES)
    bwar_path = extra["settings"].get("bwar_file")
    bwar = load_bwar(bwar_path) if bwar_path else None
    if bwar_path:
        extra["inputs"][Path(bwar_path).name] = _digest_file(bwar_path)
    rows = top_tier_table(rule, ds.role_table(rule.role), ds.directory, bwar)
    cols = ["player_id", "name", *rule.stats] + (["bwar"] if bwar is not None else [])
    out.header(cols)
    for row in rows:
        out.row([row[c] if row[c] is not None else "" for c in cols])
    return {"rule": str(rule), "rows": len(rows)}


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def _digest_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write(path: Path, text: str) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    data = text.encode("utf-8")
    path.write_bytes(data)
    return hashlib.sha256(data).hexdigest()


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        settings = resolve_settings(args)
        config = ingest_config(settings)
        ds = load(config)
        extra = {"settings": settings, "tolerance": settings["tolerance"],
                 "workers": settings["workers"], "side_outputs": {},
                 "inputs": dict(ds.raw.digests)}
        out = Output(settings["format"])
        summary = HANDLERS[args.command](ds, args, out, extra)
    except (UsageError, RuleError) as e:
        parser.print_usage(sys.stderr)
        print(f"hofcut: error: {e}", file=sys.stderr)
        return 2
    except (DataError, UnknownPlayerError, OSError) as e:
        print(f"hofcut: error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"hofcut: error: {e}", file=sys.stderr)
        return 2

    text = out.text()
    if not args.out:
        sys.stdout.write(text)
        return 0

    out_path = Path(args.out)
    manifest = RunManifest(
        command=args.command,
        config=_snapshot(args, settings),
        inputs=extra["inputs"],
        summary=summary or {},
    )
    manifest.outputs[out_path.name] = _write(out_path, text)
    for tag, side in extra["side_outputs"].items():
        side_path = out_path.with_name(f"{out_path.stem}.{tag}.csv")
        manifest.outputs[side_path.name] = _write(side_path, side)
    _write(out_path.with_name(out_path.name + ".manifest.json"), manifest.to_json())
    return 0


def _snapshot(args, settings) -> dict:
    snap = {k: v for k, v in sorted(vars(args).items())
            if k not in ("out", "config", "verbose") and v is not None}
    snap.update({k: v for k, v in settings.items() if v is not None})
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(snap.items())}


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
