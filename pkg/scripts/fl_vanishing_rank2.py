"""Sweep random rank-2 orbits and tabulate side, central value and derivative.

On the side -1 orbits the central value should vanish; the derivative there
is the quantity compared against intersection numbers.
"""

import argparse
import collections
import json
import random
import time

from aflkit.localfield import LocalFieldSpec
from aflkit.orbint import orb_lattice_sum
from aflkit.orbits import random_orbit


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--f", type=int, default=1)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="print one JSON row per orbit")
    args = ap.parse_args()

    spec = LocalFieldSpec(args.p, args.f)
    tally = collections.Counter()
    t0 = time.perf_counter()
    for i in range(args.count):
        x = random_orbit(spec, 2, random.Random(args.seed + i))
        r = orb_lattice_sum(x)
        tally[(r.side, r.value0 == 0)] += 1
        if args.json:
            row = {"seed": args.seed + i, "v_disc": int(x.disc.valuation()), "side": r.side,
                   "value0": str(r.value0), "deriv0": r.deriv0.to_json()}
            print(json.dumps(row))
    dt = time.perf_counter() - t0
    print(f"q={spec.q} orbits={args.count} time={dt:.1f}s")
    for (side, zero), n in sorted(tally.items()):
        print(f"  side {side:+d}  value0 {'== 0' if zero else '!= 0'}: {n}")
    violations = tally[(-1, False)]
    print("vanishing on side -1:", "holds" if violations == 0 else f"FAILS on {violations} orbits")


if __name__ == "__main__":
    main()
