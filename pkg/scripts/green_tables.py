"""Write CSV tables of Ei, Kudla Green values and the secondary spherical function."""

import argparse
import pathlib

import numpy as np

from aflkit.green import ei_table, green_table, spherical_table, to_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="tables")
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--m", type=int, default=2)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    xs = -np.geomspace(1e-4, 20, 40)
    tables = {
        "ei.csv": ei_table(xs),
        "green_2pi.csv": green_table(np.geomspace(1e-3, 3, 30), args.a, "2pi"),
        "green_4pi.csv": green_table(np.geomspace(1e-3, 3, 30), args.a, "4pi"),
        "spherical.csv": spherical_table(args.m, [1.5, 2, 3], np.linspace(0.05, 0.95, 19)),
    }
    for name, (header, rows) in tables.items():
        (out / name).write_text(to_csv(header, rows))
        print(f"wrote {out / name} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
