#!/usr/bin/env python3
"""Write the five Lahman tables bundled with ``pylahman`` as CSV files.

    pip install pylahman
    python scripts/export_pylahman.py ~/data/lahman

pandas reads the National Association league code "NA" as missing, so
league columns are restored to "NA" before writing.
"""
import argparse
import sys
from pathlib import Path

TABLES = ("People", "Batting", "Pitching", "Appearances", "HallOfFame")


def export(out_dir: Path) -> None:
    import pylahman

    out_dir.mkdir(parents=True, exist_ok=True)
    for name in TABLES:
        df = getattr(pylahman, name)()
        if "lgID" in df.columns:
            df["lgID"] = df["lgID"].astype("string").fillna("NA")
        df.to_csv(out_dir / f"{name}.csv", index=False)
        print(f"{name}.csv: {len(df)} rows")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("out_dir", type=Path)
    args = p.parse_args(argv)
    try:
        export(args.out_dir)
    except ImportError:
        sys.exit("pylahman is not installed: pip install pylahman")


if __name__ == "__main__":
    main()
