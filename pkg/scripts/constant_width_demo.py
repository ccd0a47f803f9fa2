"""Far orbits about a smooth constant-width curve move like a uniform rotation."""

import argparse

from outer_billiards.experiments import demo_constant_width


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--radius", type=float, default=100.0)
    ap.add_argument("--steps", type=int, default=2000)
    args = ap.parse_args()
    rep = demo_constant_width(args.eps, args.radius, args.steps)
    for k, v in rep.summary.items():
        print(f"{k:>24}: {v:.6g}")
    for v in rep.verdicts:
        print(f"{'PASS' if v.passed else 'FAIL'} {v.name}")


if __name__ == "__main__":
    main()
