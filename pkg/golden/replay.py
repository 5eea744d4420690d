"""Replay the CLI cases in cases.json and diff against outputs/<name>.json.

    python3 golden/replay.py            # compare
    python3 golden/replay.py --update   # rewrite the committed outputs
"""
import argparse
import contextlib
import io
import json
import os
import sys
from pathlib import Path

from plumbseries.cli import main

HERE = Path(__file__).resolve().parent


def run_case(case):
    buf = io.StringIO()
    cwd = os.getcwd()
    os.chdir(HERE)
    try:
        with contextlib.redirect_stdout(buf):
            status = main(case["argv"])
    finally:
        os.chdir(cwd)
    return status, buf.getvalue()


def load_cases():
    return json.loads((HERE / "cases.json").read_text())


def main_replay(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--update", action="store_true")
    args = ap.parse_args(argv)
    (HERE / "outputs").mkdir(exist_ok=True)
    bad = 0
    for case in load_cases():
        status, out = run_case(case)
        path = HERE / "outputs" / f"{case['name']}.json"
        ok_status = status == case.get("exit", 0)
        if args.update:
            path.write_text(out)
        same = path.exists() and path.read_text() == out
        print(f"{'ok  ' if same and ok_status else 'FAIL'} {case['name']} (exit {status})")
        bad += not (same and ok_status)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main_replay())
