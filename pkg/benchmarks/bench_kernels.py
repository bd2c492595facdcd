"""Compare the compiled and pure-Python row-reduction kernels.

Runs rref on random Fraction matrices and an end-to-end classification of a
corpus problem with each backend, in a fresh interpreter per backend so the
import-time selection is honoured.

    python3 benchmarks/bench_kernels.py [--repeat 20]
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, random, time
from fractions import Fraction
from importlib import resources
from stationarity.exact import BACKEND, kernels
from stationarity.cli.problem import parse_problem
from stationarity.classifier import classify
from stationarity.pivot import find_initial_working_set, pivot
from stationarity import geometry

rng = random.Random(0)
def mat(m, n):
    return [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)] for _ in range(m)]

def sparse(m, n):
    # shaped like constraint systems: few small integer entries per row
    rows = []
    for _ in range(m):
        r = [Fraction(0)] * n
        for j in rng.sample(range(n), 3):
            r[j] = Fraction(rng.choice((-4, -2, -1, 1, 1, 2, 3)))
        rows.append(r)
    return rows

out = {"backend": BACKEND}
for key, cases in (
    ("rref_sparse_s", [sparse(16, 24) for _ in range(40)]),
    ("rref_dense_s", [mat(12, 12) for _ in range(20)]),
):
    best = None
    for _ in range(REPEAT):
        t = time.perf_counter()
        for a in cases:
            kernels.rref([list(r) for r in a], len(a[0]))
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    out[key] = best

corpus = resources.files("stationarity.cli") / "corpus"
probs = [parse_problem((corpus / f"{n}.json").read_bytes()) for n in ("linear_m_not_extended", "strong_m_not_s", "curved_pair_min")]
best = None
for _ in range(REPEAT):
    geometry._generators.cache_clear()
    t = time.perf_counter()
    for pr in probs:
        classify(pr.point)
        J = find_initial_working_set(pr.point)
        if J is not None:
            pivot(pr.point, J, seed=0)
    dt = time.perf_counter() - t
    best = dt if best is None else min(best, dt)
out["classify_pivot_s"] = best
print(json.dumps(out))
"""


def run(pure, repeat):
    env = dict(os.environ)
    if pure:
        env["STATIONARITY_PURE_PYTHON"] = "1"
    else:
        env.pop("STATIONARITY_PURE_PYTHON", None)
    res = subprocess.run(
        [sys.executable, "-c", CHILD.replace("REPEAT", str(repeat))],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    if fast["backend"] != "cython":
        print("compiled kernels not built; both runs use the pure-Python backend")
    print(f"{'task':<20}{'cython':>12}{'python':>12}{'speedup':>10}")
    rows = (
        ("rref_sparse_s", "rref sparse"),
        ("rref_dense_s", "rref dense"),
        ("classify_pivot_s", "classify+pivot"),
    )
    for key, name in rows:
        a, b = fast[key], slow[key]
        print(f"{name:<20}{a:>11.4f}s{b:>11.4f}s{b / a:>9.2f}x")


if __name__ == "__main__":
    main()
