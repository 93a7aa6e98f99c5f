"""Gram covariance with floating SPD Grams of growing condition number.

The exact path is bit-for-bit invariant; this measures how the floating
determinant path degrades as the Gram matrices get ill-conditioned.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from twisted_torsion.complexes import assemble_twisted
from twisted_torsion.errors import ToleranceAmbiguity
from twisted_torsion.instances import rng_for, small_twisted_instance
from twisted_torsion.linalg import InnerProductData
from twisted_torsion.report import rel_dev
from twisted_torsion.torsion import ReferenceBases, gram_invariant


@dataclass
class Config:
    seed: int = 1
    instances: int = 10
    conds: tuple = (1e1, 1e3, 1e5, 1e7)


def spd_with_condition(rng, n: int, cond: float) -> np.ndarray:
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return Q @ np.diag(np.geomspace(1.0, cond, n)) @ Q.T


def main(cfg: Config) -> None:
    print(f"{'cond':>8} {'worst rel dev':>14} {'ambiguous':>9}")
    for cond in cfg.conds:
        worst, ambiguous = 0.0, 0
        for i in range(cfg.instances):
            inst = small_twisted_instance(cfg.seed, i)
            tc = assemble_twisted(inst.gc, inst.cup, inst.h)
            ref = ReferenceBases.canonical(tc)
            base = gram_invariant(tc, InnerProductData.identity(inst.gc.dims), ref).value
            rng = rng_for(cfg.seed, "spd", i)
            G = InnerProductData(spd_with_condition(rng, tc.even_dim, cond), spd_with_condition(rng, tc.odd_dim, cond))
            try:
                worst = max(worst, rel_dev(gram_invariant(tc, G, ref).value, base))
            except ToleranceAmbiguity:
                ambiguous += 1
        print(f"{cond:>8.0e} {worst:>14.3e} {ambiguous:>9d}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--instances", type=int, default=Config.instances)
    a = ap.parse_args()
    main(Config(a.seed, a.instances))
