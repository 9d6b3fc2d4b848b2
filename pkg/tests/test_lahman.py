"""Worked examples on the real Lahman data (2022 seasons, inductions through 2024)."""
import csv
import io

import pytest

from hofcut.analysis import top_nonmember_table
from hofcut.cli import run
from hofcut.cutrule import (DEFAULT_BATTING_RULE, DEFAULT_PITCHING_RULE, evaluate, margins,
                            parse_rule, rule_members)
from hofcut.ingest import BATTER, PITCHER
from hofcut.landscape import ThresholdGrid, near_target_cells, sweep_landscape, threshold_sensitivity

pytestmark = pytest.mark.lahman


def names(ds, ids):
    return {ds.name(pid) for pid in ids}


def test_career_totals(lahman):
    assert lahman.careers.batting["rosepe01"].get("H") == 4256
    ryan = lahman.careers.pitching["ryanno01"]
    assert (ryan.get("K"), ryan.get("W")) == (5714, 324)


def test_elected_sizes(lahman):
    assert abs(len(lahman.elected.batters) - 171) <= 3
    assert abs(len(lahman.elected.pitchers) - 74) <= 3
    assert not lahman.elected.batters & lahman.elected.pitchers


def test_vintage_cut_applied(lahman):
    assert max(r.year for r in lahman.raw.batting) == 2022


def test_damon_and_colon(lahman):
    damon = lahman.careers.batting["damonjo01"]
    assert (damon.get("H"), damon.get("HR")) == (2769, 235)
    assert evaluate(DEFAULT_BATTING_RULE, damon)
    (colon,) = margins(DEFAULT_PITCHING_RULE, lahman.role_table(PITCHER), ["colonba01"])
    assert colon.qualifying_stats == {"W"} and colon.surplus == {"K": 2535 - 2800, "W": 7}


def test_verlander_2022_qualifies_by_strikeouts(lahman):
    (v,) = margins(DEFAULT_PITCHING_RULE, lahman.role_table(PITCHER), ["verlaju01"])
    assert v.qualifies and "K" in v.qualifying_stats
    assert lahman.careers.pitching["verlaju01"].get("K") == 3198


def test_near_target_batting(lahman):
    land = sweep_landscape(ThresholdGrid.default("H", "HR"), lahman.role_table(BATTER), BATTER,
                           target=171)
    grid = land.grid
    near = {(grid.values_a[i], grid.values_b[j]) for i, j, _ in near_target_cells(land)}
    assert {(2500, 350), (3000, 300)} <= near


def test_sensitivity_hits_lowered(lahman):
    rep = threshold_sensitivity(DEFAULT_BATTING_RULE, "H", 2250, lahman.role_table(BATTER),
                                lahman.elected.batters)
    assert len(rep.players_added) == 50 and not rep.players_removed
    assert {"Ron Santo", "Ozzie Smith", "Kirby Puckett"} <= names(lahman, rep.players_added)


def test_sensitivity_strikeouts(lahman):
    table = lahman.role_table(PITCHER)
    lo = threshold_sensitivity(DEFAULT_PITCHING_RULE, "K", 2600, table, lahman.elected.pitchers)
    assert names(lahman, lo.players_added) == {"David Cone", "Chuck Finley"}
    assert lo.elected_among_changed == 0
    hi = threshold_sensitivity(DEFAULT_PITCHING_RULE, "K", 3000, table, lahman.elected.pitchers)
    assert len(hi.players_removed) == 4 and hi.elected_among_changed == 1
    assert "bunniji01" in hi.players_removed


def test_alternate_top_tier(lahman):
    members = rule_members(parse_rule("H>3500 or HR>550"), lahman.role_table(BATTER))
    assert len(members) == 19
    assert "mcgwima01" in members and "jeterde01" not in members


def test_table_columns(lahman):
    def column(stat, role):
        return [v for _, _, v in top_nonmember_table(stat, lahman.role_table(role),
                                                     lahman.elected.for_role(role), 10)]

    assert column("H", BATTER) == [4256, 3384, 3115, 3089, 3088, 3020, 2935, 2877, 2769, 2757]
    assert column("HR", BATTER) == [762, 703, 696, 609, 583, 569, 555, 509, 507, 473]
    assert column("W", PITCHER) == [354, 297, 288, 284, 269, 265, 264, 256, 251, 251]
    # The published strikeout column skips David Cone (2668) and ends with Bartolo Colon (2535).
    assert column("K", PITCHER) == [4672, 3198, 3193, 3116, 3093, 2882, 2832, 2807, 2773, 2668]


def test_cli_evaluate(lahman_dir, capsys):
    code = run(["evaluate", "--rule", "H>=2500 or HR>=350", "--data-dir", str(lahman_dir),
                "--last-season", "2022", "--last-induction", "2024"])
    assert code == 0
    assert len(list(csv.DictReader(io.StringIO(capsys.readouterr().out)))) == 165


def test_cli_landscape_flags_default_cell(lahman_dir, tmp_path):
    out = tmp_path / "land.csv"
    code = run(["landscape", "--stats", "H,HR", "--target", "171", "--data-dir", str(lahman_dir),
                "--last-season", "2022", "--out", str(out)])
    assert code == 0
    cells = list(csv.DictReader(open(tmp_path / "land.cells.csv", encoding="utf-8")))
    flagged = {(int(c["threshold_a"]), int(c["threshold_b"])) for c in cells if c["near_target"] == "1"}
    assert (2500, 350) in flagged
