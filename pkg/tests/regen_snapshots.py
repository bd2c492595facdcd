"""Rewrite tests/snapshots from the current CLI output.

Run only after checking the differences by hand: python3 tests/regen_snapshots.py
"""
import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from helpers import CORPUS, corpus_path  # noqa: E402
from stationarity.cli.main import dumps, run  # noqa: E402

SNAP = os.path.join(os.path.dirname(__file__), "snapshots")
SUBCOMMANDS = ("classify", "cones", "multipliers", "second-order", "strong-m", "oracle")


def snapshot_cases():
    for name in CORPUS:
        for sub in SUBCOMMANDS:
            yield name, sub


def render(name, sub):
    out = run([sub, str(corpus_path(name))])
    return out.code, dumps(out.report) if out.report is not None else out.message


if __name__ == "__main__":
    os.makedirs(SNAP, exist_ok=True)
    for name, sub in snapshot_cases():
        code, text = render(name, sub)
        with open(os.path.join(SNAP, f"{name}.{sub}.json"), "w") as fh:
            fh.write(text)
        print(code, name, sub)
