"""Spectral-sequence statistics over seeded random twisted complexes."""

import argparse
from collections import Counter
from dataclasses import dataclass

from twisted_torsion.instances import random_twisted_instance
from twisted_torsion.spectral import spectral_sequence


@dataclass
class Config:
    seed: int = 1
    trials: int = 40


def main(cfg: Config) -> None:
    pages, d3, d5 = Counter(), Counter(), Counter()
    consistent = 0
    for i in range(cfg.trials):
        inst = random_twisted_instance(cfg.seed, i)
        ss = spectral_sequence(inst.gc, inst.cup, inst.h)
        pages[ss.stabilization_page] += 1
        d3[sum(ss.differential_ranks.get(3, ()))] += 1
        d5[sum(ss.differential_ranks.get(5, ()))] += 1
        consistent += ss.consistent
    print(f"instances: {cfg.trials}, E_inf = Betti on {consistent}")
    print("stabilization page:", dict(sorted(pages.items())))
    print("total rank d_3:", dict(sorted(d3.items())))
    print("total rank d_5:", dict(sorted(d5.items())))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--trials", type=int, default=Config.trials)
    a = ap.parse_args()
    main(Config(a.seed, a.trials))
