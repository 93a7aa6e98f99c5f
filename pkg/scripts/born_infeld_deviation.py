"""Worst Born-Infeld intertwining deviation against dimension and B-field size."""

import argparse
from dataclasses import dataclass

import numpy as np

from twisted_torsion.genmetric import GeneralizedMetric, verify_intertwining
from twisted_torsion.instances import rng_for


@dataclass
class Config:
    seed: int = 1
    samples: int = 20
    b_scales: tuple = (0.1, 1.0, 10.0)


def main(cfg: Config) -> None:
    print(f"{'n':>2} " + " ".join(f"{'|B|~' + str(s):>12}" for s in cfg.b_scales))
    for n in range(2, 7):
        row = []
        for s in cfg.b_scales:
            rng = rng_for(cfg.seed, "metric", 100 + n)
            worst = 0.0
            for _ in range(cfg.samples):
                A = rng.uniform(-1, 1, (n, n))
                U = rng.uniform(-1, 1, (n, n))
                gm = GeneralizedMetric(A @ A.T / n + np.eye(n), s * (U - U.T))
                N = 2 ** n
                res = verify_intertwining(gm, [(rng.uniform(-1, 1, N), rng.uniform(-1, 1, N))], 1.0)
                worst = max(worst, res.deviation)
            row.append(worst)
        print(f"{n:>2} " + " ".join(f"{w:>12.2e}" for w in row))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--samples", type=int, default=Config.samples)
    a = ap.parse_args()
    main(Config(a.seed, a.samples))
