"""Compare the compiled and numpy oracle kernels.

Each backend runs in a fresh interpreter so the import-time selection is
honoured.  Usage: ``python3 benchmarks/bench_oracle.py [--repeat R]``
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
from rofsum.oracle import kernels, ropset_build, cross_check_f_family
from rofsum.mpoly import gen_symmetric

def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t

res = {"backend": kernels.BACKEND}
rs5, res["build F5 n=4"] = timed(lambda: ropset_build(5, 4))
_, res["zero-const index F5 n=4"] = timed(lambda: rs5.zero_const)
rep, res["gen_f cross-check F5 (125 queries)"] = timed(lambda: cross_check_f_family(5, rs5))
rs2, res["build F2 n=5"] = timed(lambda: ropset_build(2, 5))
g = gen_symmetric(5, 4, rs2.ctx)
_ = rs2.zero_const
k, res["min summands of S_5^4 over F2"] = timed(lambda: rs2.min_summands(g))
rs3, res["build F3 n=5"] = timed(lambda: ropset_build(3, 5))
assert not rep["disagreements"] and k == 3
print(json.dumps(res))
"""


def run(pure: bool) -> dict:
    env = dict(os.environ)
    if pure:
        env["ROFSUM_PURE_KERNELS"] = "1"
    else:
        env.pop("ROFSUM_PURE_KERNELS", None)
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args()
    rows = {}
    for pure in (False, True):
        best = None
        for _ in range(args.repeat):
            r = run(pure)
            best = r if best is None else {k: min(v, best[k]) if k != "backend" else v for k, v in r.items()}
        rows[best.pop("backend")] = best
    if "cython" not in rows:
        print("compiled kernels are not built; only the numpy timings are shown")
    names = list(next(iter(rows.values())))
    backends = list(rows)
    print(f"{'task':40s}" + "".join(f"{b:>12s}" for b in backends) + ("    speedup" if len(backends) == 2 else ""))
    for name in names:
        vals = [rows[b][name] for b in backends]
        line = f"{name:40s}" + "".join(f"{v:11.3f}s" for v in vals)
        if len(vals) == 2 and vals[0] > 0:
            line += f"{vals[1] / vals[0]:10.1f}x"
        print(line)


if __name__ == "__main__":
    main()
