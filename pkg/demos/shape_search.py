"""Particle-swarm search for the maximizer of F_2 at mu = pi.

Shapes are star-shaped Fourier perturbations of the unit circle with the
mean radius pinned at 1 and the perturbation coefficients capped, so the
swarm explores a compact neighborhood of the disk. The disk itself is
conjectured to maximize F_2; a healthy run climbs toward the disk value
from below and never exceeds it. This is a scaled-down search (16
particles x 40 iterations at a coarse grid) that finishes in about a
minute; the full-size run lives in the acceptance suite and the CLI.

Artifacts (best shape + history) are written next to this script as
pso_f2.json / pso_f2.csv.
"""

import numpy as np

from steklov.functionals import F, evaluate_functional
from steklov.geometry import disk
from steklov.swarm import SwarmConfig, optimize_shape, write_artifacts


def main():
    mu = float(np.pi)
    config = SwarmConfig(objective=F(2), mu=mu, n_modes=4, particles=16,
                         iterations=40, seed=0, search_n=96, final_n=256)
    result = optimize_shape(config)

    print("gbest trace:")
    for it in range(0, 41, 5):
        print(f"    iter {it:3d}    {result.history[it]:+.12f}")

    disk_value = evaluate_functional(F(2), disk(), mu, {"N": 256})
    print(f"\nbest found:  {result.best_value!r}")
    print(f"refined:     {result.refined_value!r}")
    print(f"disk value:  {disk_value!r}")
    print(f"gap to disk: {disk_value - result.best_value:.2e}")
    print(f"best shape:  {result.best_shape}")

    write_artifacts(result, "pso_f2.json", "pso_f2.csv")
    print("\nwrote pso_f2.json, pso_f2.csv")


if __name__ == "__main__":
    main()
