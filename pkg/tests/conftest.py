import os
import sys
from pathlib import Path

import pytest

from hofcut.ingest import IngestConfig, load

sys.path.insert(0, str(Path(__file__).parent))

FIXTURE_DIR = Path(__file__).parent / "fixtures" / "lahman_mini"

# The analyses target the 2022-vintage data with inductions through 2024.
LAST_SEASON = 2022
LAST_INDUCTION = 2024

REQUIRED = ("People", "Batting", "Pitching", "Appearances", "HallOfFame")


@pytest.fixture(scope="session")
def mini_dir():
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def mini():
    return load(IngestConfig(FIXTURE_DIR))


def _lahman_dir(tmp_path_factory):
    env = os.environ.get("HOFCUT_LAHMAN_DIR")
    if env:
        d = Path(env)
        if all((d / f"{n}.csv").is_file() for n in REQUIRED):
            return d
        pytest.fail(f"HOFCUT_LAHMAN_DIR={env} lacks the five Lahman CSV files")
    try:
        import pylahman  # noqa: F401
    except ImportError:
        return None
    sys.path.insert(0, str(Path(__file__).parent.parent / "scripts"))
    from export_pylahman import export

    d = tmp_path_factory.mktemp("lahman")
    export(d)
    return d


@pytest.fixture(scope="session")
def lahman_dir(tmp_path_factory):
    d = _lahman_dir(tmp_path_factory)
    if d is None:
        pytest.skip("no Lahman data: set HOFCUT_LAHMAN_DIR or pip install pylahman")
    return d


@pytest.fixture(scope="session")
def lahman(lahman_dir):
    return load(IngestConfig(lahman_dir, last_season=LAST_SEASON, last_induction=LAST_INDUCTION))


# acceptance summary ------------------------------------------------------

RESULTS = {}
CRITERIA = tuple(f"C{k}" for k in range(1, 13))


def record(key, label, ok, detail=""):
    """Note one check toward an acceptance criterion; a criterion passes only if all its checks do."""
    prev = RESULTS.get(key)
    if prev is not None:
        ok = prev[1] and ok
        detail = "; ".join(d for d in (prev[2], detail) if d)
    RESULTS[key] = (label, ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in CRITERIA:
        if key not in RESULTS:
            tr.write_line(f"[SKIP] {key} not run (deselected, or no Lahman dataset for an (L) criterion)")
            continue
        label, ok, detail = RESULTS[key]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] {key} {label}" + (f"  ({detail})" if detail else ""))
