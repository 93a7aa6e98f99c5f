"""Command-line front end: ``twisted-torsion <command> ...``.

Exit codes: 0 success (and every check PASS for ``verify``), 1 a check
failed, 2 bad input or an unsupported request.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from .complexes import assemble_twisted, fold_to_super, scaled_flux
from .errors import TwistedTorsionError
from .io import load_gram, load_refs, parse_complex
from .linalg import DEFAULT_TOL, betti_twisted
from .report import fmt_value
from .simplicial import lens_flux, lens_space
from .spectral import spectral_sequence
from .tduality import CircleBundleData, dual, tmap_check, torsion_value, verify_reciprocity
from .torsion import reidemeister_torsion, twisted_torsion
from .verify import SUITES, run_suite

TOL_ENV = "TWISTED_TORSION_TOL"


def default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise SystemExit(f"error: {TOL_ENV}={raw!r} is not a number")


def _print_torsion(tau, exact_only: bool) -> None:
    txt = tau.exact_text()
    if txt is not None:
        print(f"torsion = {txt}")
        if tau.squared is not None:
            print(f"torsion^2 = {tau.squared}")
    elif exact_only:
        raise TwistedTorsionError("no exact value available")
    if not exact_only:
        print(f"log|torsion| = {fmt_value(tau.log_magnitude)}")
        print(f"|torsion| = {fmt_value(tau.value)}")
    print(f"normalization = {tau.reference}")
    if tau.phase_ambiguous:
        print("phase: ambiguous (non-unitary local system; modulus only)")


# -- commands ---------------------------------------------------------------------

def cmd_betti(args) -> int:
    cf = parse_complex(args.file)
    h = cf.flux
    if args.flux_scale is not None:
        h = scaled_flux(h, args.flux_scale)
    b = betti_twisted(cf.twisted(h))
    print(f"b0 = {b.b0}")
    print(f"b1 = {b.b1}")
    print(f"chi = {b.euler}")
    return 0


def cmd_torsion(args) -> int:
    cf = parse_complex(args.file)
    if cf.gc is None:
        raise TwistedTorsionError(f"a {cf.kind} file has no torsion; use the tduality command")
    G = load_gram(args.gram, cf.gc.dims) if args.gram else cf.gram
    ref = load_refs(args.refs, cf.gc.dims) if args.refs else cf.refs
    exact = True if args.exact else None
    amb = cf.phase_ambiguous
    if cf.flux.is_zero() and (G is None or G.degrees is not None) and (ref is None or ref.degrees is not None):
        tau = reidemeister_torsion(cf.gc, G, ref, tol=args.tol, exact=exact, phase_ambiguous=amb)
    else:
        tau = twisted_torsion(cf.twisted(), G, ref, tol=args.tol, exact=exact, phase_ambiguous=amb)
    _print_torsion(tau, args.exact)
    return 0


def cmd_spectral(args) -> int:
    cf = parse_complex(args.file)
    if cf.gc is None or cf.cup is None:
        raise TwistedTorsionError("the spectral sequence needs a cochain complex with a cup structure")
    rep = spectral_sequence(cf.gc, cf.cup, cf.flux)
    print(rep.table())
    for note in rep.notes:
        print(f"note: {note}")
    return 0 if rep.consistent else 1


def cmd_lens(args) -> int:
    gc, cup, _ = lens_space(args.p)
    tc = assemble_twisted(gc, cup, lens_flux(args.q)) if args.q else fold_to_super(gc)
    b = betti_twisted(tc)
    print(f"lens space L({args.p},1), flux q = {args.q}")
    print(f"b0 = {b.b0}")
    print(f"b1 = {b.b1}")
    _print_torsion(twisted_torsion(tc, tol=args.tol), exact_only=False)
    return 0


def cmd_tduality(args) -> int:
    b = CircleBundleData(args.p, args.q, args.chi)
    t, td = torsion_value(b), torsion_value(dual(b))
    print(f"torsion (p={b.p}, q={b.q}) = {t}")
    print(f"dual torsion (p={b.q}, q={b.p}) = {td}")
    print(f"normalized pair = ({t.normalized}, {td.normalized})")
    checks = [verify_reciprocity(b)]
    if args.model:
        cf = parse_complex(args.model)
        if cf.model is None:
            raise TwistedTorsionError("--model expects a pair-model file")
        checks.append(tmap_check(cf.model))
    for c in checks:
        print(c.line())
    return 0 if all(c.passed for c in checks) else 1


def cmd_verify(args) -> int:
    rep = run_suite(args.suite, seed=args.seed, trials=args.trials, tol=args.tol_override)
    text = rep.to_json(timing=args.timing) if args.json else rep.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.passed else 1


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twisted-torsion", description="Twisted analytic torsion toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)
    tol = default_tol()

    p = sub.add_parser("betti", help="twisted Betti numbers of a complex file")
    p.add_argument("file")
    p.add_argument("--flux-scale", type=Fraction, default=None, help="replace the flux by its scaling image h^(lambda)")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("torsion", help="torsion of a complex file")
    p.add_argument("file")
    p.add_argument("--gram", help="file with Gram matrices (overrides the complex file)")
    p.add_argument("--refs", help="file with cohomology references (overrides the complex file)")
    p.add_argument("--exact", action="store_true", help="require an exact rational result")
    p.add_argument("--tol", type=float, default=tol)
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("spectral", help="spectral-sequence pages for a complex file")
    p.add_argument("file")
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("lens", help="twisted torsion of L(p,1) with flux q")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--tol", type=float, default=tol)
    p.set_defaults(func=cmd_lens)

    p = sub.add_parser("tduality", help="circle-bundle torsion pair and reciprocity")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--chi", type=int, default=2)
    p.add_argument("--model", help="pair-model file for the T-map chain check")
    p.set_defaults(func=cmd_tduality)

    p = sub.add_parser("verify", help="run a verification battery")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--tol", dest="tol_override", type=float, default=None,
                   help=f"override the battery tolerance (or set {TOL_ENV})")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--out", help="write the report to this file")
    p.add_argument("--timing", action="store_true", help="include per-check runtimes (JSON only)")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify" and args.tol_override is None and TOL_ENV in os.environ:
        args.tol_override = default_tol()
    try:
        return args.func(args)
    except (TwistedTorsionError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
