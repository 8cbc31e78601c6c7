"""Time the state sum with the numba kernels and with the pure-Python fallback.

The fallback is chosen at import time by ``SL3WEB_NO_NUMBA``, so each
engine runs in its own subprocess.  Both must produce the same polynomial.

    python benchmarks/bench_statesum.py [--repeat 3] [--quick]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

CASES = {
    "T(2,7)": "2:[1,1,1,1,1,1,1]",
    "T(3,4)": "3:[1,2,1,2,1,2,1,2]",
    "T(3,5)": "3:[1,2,1,2,1,2,1,2,1,2]",
    "11n183": "@11n183",
    "4-braid-14": "4:[1,2,3,1,2,3,1,2,3,1,2,3,2,1]",
}
QUICK = ("T(2,7)", "T(3,4)", "11n183")

_CHILD = r"""
import json, sys, time
from sl3web.corpus import knot_11n183
from sl3web.diagram import diagram_from_text
from sl3web.statesum import engine_name, invariant
cases, repeat = json.loads(sys.argv[1]), int(sys.argv[2])
out = {"engine": engine_name(), "results": {}}
invariant(diagram_from_text("2:[1,1,1]"))  # warm-up: compile or load the cache
for name, text in cases.items():
    d = knot_11n183() if text == "@11n183" else diagram_from_text(text)
    best = None
    for _ in range(repeat):
        t = time.perf_counter()
        p = invariant(d)
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    out["results"][name] = {"seconds": best, "crossings": d.e, "poly": str(p)}
print(json.dumps(out))
"""


def run(cases: dict, repeat: int, no_numba: bool) -> dict:
    env = dict(os.environ)
    env["SL3WEB_NO_NUMBA"] = "1" if no_numba else "0"
    proc = subprocess.run([sys.executable, "-c", _CHILD, json.dumps(cases), str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="small cases only")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    cases = {k: CASES[k] for k in QUICK} if args.quick else CASES
    fast = run(cases, args.repeat, no_numba=False)
    slow = run(cases, 1 if not args.quick else args.repeat, no_numba=True)
    rows = []
    for name in cases:
        a, b = fast["results"][name], slow["results"][name]
        rows.append({"case": name, "crossings": a["crossings"],
                     fast["engine"]: a["seconds"], slow["engine"]: b["seconds"],
                     "speedup": b["seconds"] / a["seconds"] if a["seconds"] else None,
                     "agree": a["poly"] == b["poly"]})
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'case':<12}{'e':>4}{fast['engine']:>14}{slow['engine']:>18}{'speedup':>10}  agree")
        for r in rows:
            print(f"{r['case']:<12}{r['crossings']:>4}{r[fast['engine']]:>14.4f}"
                  f"{r[slow['engine']]:>18.4f}{r['speedup']:>10.1f}  {r['agree']}")
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
