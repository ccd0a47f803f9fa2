"""Table of E(r) = max |T^2 x - phi_1 x| over sampled directions, for several bodies.

Prints r, E(r), r E(r) and r^2 E(r): centrally symmetric bodies show r^2 E
flat (second-order agreement), the others r E flat.
"""

import argparse

from outer_billiards.bodies import BodySpec
from outer_billiards.experiments import constants_estimate, shadow_experiment

BODIES = {
    "circle": {"kind": "ellipsoid", "semi_axes": [1.0, 1.0]},
    "ellipse": {"kind": "ellipsoid", "semi_axes": [1.0, 0.6]},
    "constant_width": {"kind": "constant_width_2d", "eps": 0.1},
    "harmonic": {"kind": "support_harmonic", "eps": 0.1, "mode": 3},
    "pball": {"kind": "pball", "p": 1.5},
    "ellipsoid_4d": {"kind": "ellipsoid", "semi_axes": [1.0, 0.8, 1.2, 0.9]},
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=64)
    ap.add_argument("--radii", type=float, nargs="+", default=[10, 20, 40, 80, 160])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    for name, spec in BODIES.items():
        body = BodySpec.from_dict(spec).build()
        c = constants_estimate(body, seed=args.seed)
        rep = shadow_experiment(body, args.radii, args.samples, args.seed, constants=c)
        print(f"\n{name}  (proven bound constant 6C + C~ = {6 * c.C + c.C_tilde:.4g})")
        print(f"{'r':>8} {'E':>12} {'rE':>12} {'r^2 E':>12}")
        for r, e in zip(args.radii, rep.summary["E"]):
            print(f"{r:8.1f} {e:12.4e} {r * e:12.4e} {r * r * e:12.4e}")


if __name__ == "__main__":
    main()
