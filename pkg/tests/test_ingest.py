import shutil

import pytest

import oracles
from hofcut.ingest import (BATTER, PITCHER, DataError, IngestConfig, LeagueFilter, PlayerRecord,
                           build_careers, classify_player, elected_players, load, load_dataset,
                           build_directory, write_careers_csv)


def test_load_dataset_row_counts(mini_dir):
    raw = load_dataset(mini_dir)
    for name in ("Batting", "Pitching", "Appearances", "HallOfFame", "People"):
        with open(mini_dir / f"{name}.csv", encoding="utf-8") as fh:
            lines = sum(1 for line in fh if line.strip())
        assert raw.row_counts[f"{name}.csv"] == lines - 1
    assert len(raw.batting) == raw.row_counts["Batting.csv"] == 69


def test_load_dataset_digests_every_file(mini_dir):
    raw = load_dataset(mini_dir)
    assert sorted(raw.digests) == sorted(f"{n}.csv" for n in
                                         ("People", "Batting", "Pitching", "Appearances", "HallOfFame"))


def test_missing_file_named(mini_dir, tmp_path):
    for f in mini_dir.glob("*.csv"):
        shutil.copy(f, tmp_path)
    (tmp_path / "Pitching.csv").unlink()
    with pytest.raises(DataError, match="Pitching.csv"):
        load_dataset(tmp_path)


def test_malformed_count_reports_location(mini_dir, tmp_path):
    for f in mini_dir.glob("*.csv"):
        shutil.copy(f, tmp_path)
    lines = (tmp_path / "Batting.csv").read_text(encoding="utf-8").splitlines()
    cells = lines[3].split(",")
    cells[8] = "lots"   # H column
    lines[3] = ",".join(cells)
    (tmp_path / "Batting.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(DataError) as err:
        load_dataset(tmp_path)
    msg = str(err.value)
    assert "Batting.csv:4" in msg and "'H'" in msg


def test_empty_cells_read_as_zero(mini):
    b07 = mini.careers.batting["b07"]
    assert b07.get("HR") == 0 and b07.get("RBI") == 0 and b07.get("H") == 55


def test_invalid_utf8_is_replaced(mini_dir, tmp_path):
    for f in mini_dir.glob("*.csv"):
        shutil.copy(f, tmp_path)
    with open(tmp_path / "People.csv", "ab") as fh:
        fh.write(b"zz01,Bad\xff,Byte,Nowhere\n")
    raw = load_dataset(tmp_path)
    assert "�" in raw.people["zz01"]["nameFirst"]


def test_two_stints_summed(mini, mini_dir):
    # 1990 stints of b01 carry H=80 and H=45
    by_year = [r for r in mini.raw.batting if r.player_id == "b01" and r.year == 1990]
    assert sorted(r.counts["H"] for r in by_year) == [45, 80]
    others = sum(r.counts["H"] for r in mini.raw.batting if r.player_id == "b01" and r.year != 1990)
    assert mini.careers.batting["b01"].get("H") == others + 125


def test_excluded_league_player_absent(mini):
    assert "b02" not in mini.careers.batting
    assert "b02" not in mini.directory


def test_careers_match_brute_force(mini, mini_dir):
    for table, careers in (("Batting", mini.careers.batting), ("Pitching", mini.careers.pitching)):
        expected = oracles.career_sums(mini_dir, table)
        assert set(careers) == set(expected)
        for pid, counts in expected.items():
            assert dict(careers[pid].counts) == counts


def test_custom_league_filter_keeps_negro_league_rows(mini_dir):
    raw = load_dataset(mini_dir)
    leagues = {"NL", "AL", "NA", "NN2"}
    careers = build_careers(raw, LeagueFilter.of(leagues))
    assert "b02" in careers.batting
    assert dict(careers.batting["b03"].counts) == oracles.career_sums(mini_dir, "Batting", leagues)["b03"]


def test_league_filter_must_be_non_empty():
    with pytest.raises(ValueError):
        LeagueFilter.of([])
    with pytest.raises(ValueError):
        IngestConfig("x", included_leagues=())


def test_classify_max_games(mini):
    assert classify_player(mini.raw, "p01") == (PITCHER, "P")
    assert classify_player(mini.raw, "b05") == (BATTER, "C")   # C/1B tie goes to C


def test_classify_spread_positions(mini, mini_dir):
    games = oracles.position_games(mini_dir)["b04"]
    assert sum(1 for g in games.values() if g) == 3
    assert classify_player(mini.raw, "b04") == (BATTER, oracles.brute_position(games))


def test_classify_fallback_without_appearances(mini):
    # in both tables, pitching G 50 >= half of batting G 60, outs > 0
    assert classify_player(mini.raw, "b06") == (PITCHER, "P")
    assert classify_player(mini.raw, "p06") == (PITCHER, "P")


def test_classify_ignores_excluded_league_games(mini):
    assert mini.directory["b03"].primary_position == "3B"


def test_roles_match_brute_force(mini, mini_dir):
    expected = oracles.roles(mini_dir)
    assert {pid: rec.role for pid, rec in mini.directory.items()} == expected


def test_player_record_invariants():
    with pytest.raises(ValueError):
        PlayerRecord("x", "X", 1990, 1995, PITCHER, "SS", False)
    with pytest.raises(ValueError):
        PlayerRecord("x", "X", 1995, 1990, BATTER, "SS", False)


def test_elected_sets(mini, mini_dir):
    assert mini.elected.all == oracles.elected(mini_dir)
    assert mini.elected.batters == {"b01", "b12"}
    assert mini.elected.pitchers == {"p02", "p03"}
    assert not (mini.elected.batters & mini.elected.pitchers)


def test_elected_excludes_non_players_and_preliminary_poll(mini):
    assert "b09" not in mini.elected.all   # Manager category
    assert "b11" not in mini.elected.all   # preliminary-poll row
    assert "b10" not in mini.elected.all   # not inducted


def test_elected_two_inducted_one_excluded_league(mini_dir, tmp_path):
    for f in mini_dir.glob("*.csv"):
        shutil.copy(f, tmp_path)
    (tmp_path / "HallOfFame.csv").write_text(
        "playerID,yearid,votedBy,inducted,category\n"
        "b01,2005,BBWAA,Y,Player\n"
        "b02,2006,Negro League,Y,Player\n", encoding="utf-8")
    ds = load(IngestConfig(tmp_path))
    assert ds.elected.all == {"b01"}


def test_elected_empty_hall(mini_dir, tmp_path):
    for f in mini_dir.glob("*.csv"):
        shutil.copy(f, tmp_path)
    (tmp_path / "HallOfFame.csv").write_text("playerID,yearid,votedBy,inducted,category\n",
                                             encoding="utf-8")
    ds = load(IngestConfig(tmp_path))
    assert ds.elected.batters == frozenset() and ds.elected.pitchers == frozenset()


def test_elected_missing_from_people_warns(mini_dir, caplog):
    raw = load_dataset(mini_dir)
    leagues = LeagueFilter.of(["NL", "AL", "NA"])
    directory = build_directory(raw, build_careers(raw, leagues), leagues)
    with caplog.at_level("WARNING"):
        elected_players(raw, directory, leagues)
    assert "ghost01" in caplog.text


def test_last_induction_and_season_cutoffs(mini_dir):
    ds = load(IngestConfig(mini_dir, last_induction=2020))
    assert "p03" not in ds.elected.all            # inducted 2030
    ds = load(IngestConfig(mini_dir, last_season=1986))
    assert all(r.year <= 1986 for r in ds.raw.batting)
    assert "p01" not in ds.careers.pitching       # first season 1995


def test_directory_ids_are_people(mini):
    assert mini.careers.player_ids() <= set(mini.raw.people)
    assert set(mini.directory) == mini.careers.player_ids()


def test_career_csv_is_deterministic(mini_dir):
    import io

    outs = []
    for _ in range(2):
        buf = io.StringIO()
        write_careers_csv(buf, load(IngestConfig(mini_dir)), BATTER)
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]
    assert outs[0].splitlines()[0] == "player_id,name,role,position,elected,G,AB,R,H,HR,RBI"
    assert "José Núñez" in outs[0]
