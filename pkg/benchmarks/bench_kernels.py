"""Compiled vs pure-Python polynomial kernels.

Run ``python3 benchmarks/bench_kernels.py``.  The first table times the
kernels directly on random inputs.  The second runs an end-to-end workload
in a subprocess twice, once with ``ARTIFACT_PURE=1``.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from artifact import _pykernels as pure
from artifact.algebra_core import field

try:
    from artifact import _ckernels as compiled
except ImportError:
    compiled = None

WORKLOAD = """
import time
from artifact.algebra_core import PolyA, field
from artifact.counting import brute_force_count, carlitz_preset
from artifact.exp_log import exp_coeffs
from artifact.kernels import BACKEND
from artifact.tmodule import make_carlitz_tensor
F = field(2)
t0 = time.perf_counter()
exp_coeffs(make_carlitz_tensor(2, 2), 4)
brute_force_count(carlitz_preset(2), PolyA.T(F, 4), delta=1)
print(BACKEND, time.perf_counter() - t0)
"""


def _inputs(rng: random.Random, q: int, n: int):
    a = [rng.randrange(q) for _ in range(n)] + [1]
    b = [rng.randrange(q) for _ in range(n // 2)] + [1]
    return a, b


def kernel_rows(sizes, repeat: int) -> list[dict]:
    rng = random.Random(0)
    F4 = field(4)
    rows = []
    for n in sizes:
        a2, b2 = _inputs(rng, 2, n)
        a4, b4 = _inputs(rng, 4, n)
        cases = {
            "conv_p (q=2)": lambda m: m.conv_p(a2, b2, 2),
            "divmod_p (q=2)": lambda m: m.divmod_p(a2, b2, 2),
            "conv_tab (q=4)": lambda m: m.conv_tab(a4, b4, F4.add_t, F4.mul_t, 4),
            "divmod_tab (q=4)": lambda m: m.divmod_tab(a4, b4, F4.add_t, F4.mul_t, F4.neg_t, F4.inv_t, 4),
        }
        for name, fn in cases.items():
            row = {"kernel": name, "degree": n,
                   "pure_s": min(timeit.repeat(lambda: fn(pure), number=repeat, repeat=3)) / repeat}
            if compiled is not None:
                assert fn(compiled) == fn(pure)
                row["compiled_s"] = min(timeit.repeat(lambda: fn(compiled), number=repeat, repeat=3)) / repeat
                row["speedup"] = row["pure_s"] / row["compiled_s"]
            rows.append(row)
    return rows


def workload_rows() -> list[dict]:
    rows = []
    for pure_flag in (False, True):
        env = dict(os.environ)
        env.pop("ARTIFACT_PURE", None)
        if pure_flag:
            env["ARTIFACT_PURE"] = "1"
        out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        rows.append({"backend": backend, "seconds": float(secs)})
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 64, 256])
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--json", action="store_true", help="print JSON instead of tables")
    ap.add_argument("--no-workload", action="store_true")
    args = ap.parse_args(argv)

    kr = kernel_rows(args.sizes, args.repeat)
    wr = [] if args.no_workload else workload_rows()
    if args.json:
        print(json.dumps({"kernels": kr, "workload": wr}, indent=2))
        return
    if compiled is None:
        print("compiled extension not built; timing the pure backend only")
    print(f"{'kernel':<18} {'deg':>5} {'pure (us)':>11} {'compiled (us)':>14} {'speedup':>8}")
    for r in kr:
        c = f"{r['compiled_s'] * 1e6:14.1f}" if "compiled_s" in r else f"{'-':>14}"
        s = f"{r['speedup']:8.1f}" if "speedup" in r else f"{'-':>8}"
        print(f"{r['kernel']:<18} {r['degree']:>5} {r['pure_s'] * 1e6:11.1f} {c} {s}")
    if wr:
        print("\nend-to-end workload (C^2 exp to order 4, Carlitz count at a = T^4)")
        for r in wr:
            print(f"  {r['backend']:<8} {r['seconds']:.2f} s")


if __name__ == "__main__":
    main()
