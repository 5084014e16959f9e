"""Closed-form archimedean orbital integrals against quadrature on a grid."""

import argparse

from aflkit.orbint import orb_arch, orb_arch_quadrature


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--b", type=float, default=0.25)
    ap.add_argument("--theta", type=float, default=0.5)
    args = ap.parse_args()
    print("zeta,a,value_err,deriv_err")
    for zeta in (-2, -1, -0.5, 0.5, 1, 2):
        for a in (0.5, 1, 2):
            r = orb_arch(zeta, a, args.b, args.theta)
            ev = abs(orb_arch_quadrature(zeta, a, args.b, args.theta) - r.value)
            ed = ""
            if r.deriv is not None:
                ed = f"{abs(orb_arch_quadrature(zeta, a, args.b, args.theta, deriv=True) - r.deriv):.3e}"
            print(f"{zeta},{a},{ev:.3e},{ed}")


if __name__ == "__main__":
    main()
