#!/usr/bin/env python3
"""Sweep the boundary kernel family toward the unit circle and tabulate
norms and growth-envelope constants.

Produces a plot-ready CSV with one row per base-point depth: the family
norm (fast angular treatment), the generic-quadrature norm at a matched
angular resolution, and the two growth-envelope ratios.

Usage:
    python scripts/kernel_norm_sweep.py [--out FILE] [--max-depth K] [--p P]
"""

import argparse
import csv
import sys

from blochlab import RadialGrid, SpaceSpec, bergman_type_norm, boundary_test_function
from blochlab.norms import derivative_growth_envelope, pointwise_growth_envelope
from blochlab.oracle import kernel_family_norm


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="kernel_norm_sweep.csv")
    parser.add_argument("--max-depth", type=int, default=12)
    parser.add_argument("--p", type=float, default=2.0)
    args = parser.parse_args()

    space = SpaceSpec.bergman(args.p)
    grid = RadialGrid(16, 512, 12)
    rows = []
    for depth in range(0, args.max_depth + 1, 2):
        mod = 0.0 if depth == 0 else 1.0 - 2.0**-depth
        kernel = boundary_test_function(mod, space)
        fast = kernel_family_norm(mod, space, grid)
        angular = max(512, 1 << (depth + 3))
        generic = bergman_type_norm(kernel, space, RadialGrid(16, angular, 12))
        env_point = pointwise_growth_envelope(kernel, space, grid) / fast
        env_deriv = derivative_growth_envelope(kernel, space, grid) / fast
        rows.append((depth, mod, fast, generic, env_point, env_deriv))
        print(
            f"depth {depth:2d}  |w|={mod:.12f}  norm={fast:.6f}  "
            f"generic={generic:.6f}  envelopes=({env_point:.4f}, {env_deriv:.4f})"
        )

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["depth", "base_modulus", "family_norm", "generic_norm",
             "pointwise_envelope_ratio", "derivative_envelope_ratio"]
        )
        writer.writerows(rows)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
