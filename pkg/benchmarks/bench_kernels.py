"""Time the hot kernels with numba on and off.

Each mode runs in a fresh interpreter because the switch (FHG_DISABLE_NUMBA)
is read at import time. Compilation is warmed up before timing.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, random, sys, time
import numpy as np
from fhg import _jit
from fhg.instances import gen_bounded_block_graph, gen_random_graph
from fhg.oracle import brute_force_max_utilitarian
from fhg.block_dp import solve_block_utilitarian
from fhg.vc_solver import BinPackingInstance, max_k_bin_packing

repeat = int(sys.argv[1])
rng = random.Random(0)
brute_g = gen_random_graph(1, 10, 0.4, (-5, 5))
block_g = gen_bounded_block_graph(3, 5000, 8)
packs = [BinPackingInstance([[rng.randint(-9, 9) for _ in range(3)] for _ in range(12)], [4, 4, 4])
         for _ in range(20)]

def run_brute():
    brute_force_max_utilitarian(brute_g)

def run_block():
    solve_block_utilitarian(block_g)

def run_pack():
    for p in packs:
        max_k_bin_packing(p)

out = {"numba": _jit.ENABLED}
small = gen_random_graph(2, 5, 0.5, (-5, 5))
brute_force_max_utilitarian(small)  # warm-up compiles
solve_block_utilitarian(gen_bounded_block_graph(1, 30, 8))
max_k_bin_packing(packs[0])
for name, fn in (("brute n=10", run_brute), ("block n=5000", run_block), ("bin packing x20", run_pack)):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    out[name] = best
print(json.dumps(out))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ, FHG_DISABLE_NUMBA="1" if disable else "0")
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    if not fast["numba"]:
        print("numba is not importable; both columns use the fallback")
    print(f"{'workload':<18} {'numba s':>10} {'python s':>10} {'speedup':>8}")
    for key in fast:
        if key == "numba":
            continue
        print(f"{key:<18} {fast[key]:>10.3f} {slow[key]:>10.3f} {slow[key] / fast[key]:>7.1f}x")


if __name__ == "__main__":
    main()
