"""Twisted and untwisted torsion of L(p,1) with flux q, plus the top-degree factorization."""

import argparse
from dataclasses import dataclass

from twisted_torsion.complexes import assemble_twisted, fold_to_super
from twisted_torsion.simplicial import lens_flux, lens_space
from twisted_torsion.torsion import flux_power_squared, kappa_top, twisted_torsion


@dataclass
class Config:
    max_p: int = 8
    max_q: int = 8


def main(cfg: Config) -> None:
    print(f"{'p':>3} {'q':>3} {'tau(h=0)':>9} {'tau(h)':>8} {'[H]^2b0':>8} {'kappa':>8}")
    for p in range(1, cfg.max_p + 1):
        gc, cup, _ = lens_space(p)
        untw = twisted_torsion(fold_to_super(gc))
        for q in range(1, cfg.max_q + 1):
            tw = twisted_torsion(assemble_twisted(gc, cup, lens_flux(q)))
            hsq, _ = flux_power_squared(gc, cup, lens_flux(q).components[3])
            k = kappa_top(untw, flux_power_squared=hsq)
            print(f"{p:>3} {q:>3} {str(untw):>9} {str(tw):>8} {str(hsq):>8} {str(k):>8}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-p", type=int, default=Config.max_p)
    ap.add_argument("--max-q", type=int, default=Config.max_q)
    a = ap.parse_args()
    main(Config(a.max_p, a.max_q))
