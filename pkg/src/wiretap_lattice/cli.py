"""Command-line front end.

Subcommands: ``criterion``, ``rank``, ``simulate``, ``sweep`` and ``check``.
All tabular output is CSV (header row, LF endings, 17 significant digits).
Exit codes: 0 success, 1 runtime failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

import numpy as np

from . import criteria as cr
from .channel import sweep as run_sweep
from .config import load_lattice_file
from .coset import LatticePair, build_coset_code
from .errors import ConfigError, LatticeError, VolumeMismatch
from .lattice import Lattice, volume

TAGS = [f.value for f in cr.Formula]
LATTICE_TAGS = ["theta", "pce_gauss_lead", "pce_gauss_2nd", "pce_fast", "pce_fast_asym",
                "pce_block", "pce_block_asym"]


class UsageError(Exception):
    pass


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def write_csv(header, rows, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if out:
        Path(out).write_text(text, newline="")
    else:
        sys.stdout.write(text)


def parse_gamma_grid(tokens):
    """Floats in dB, or ``start:stop:num`` linspace triples."""
    if tokens is None:
        return None
    out = []
    for tok in tokens:
        for part in str(tok).split(","):
            part = part.strip()
            if not part:
                continue
            try:
                if ":" in part:
                    a, b, k = part.split(":")
                    out.extend(float(v) for v in np.linspace(float(a), float(b), int(k)))
                else:
                    out.append(float(part))
            except ValueError:
                raise UsageError(f"bad --gamma-db value {part!r}") from None
    if not out:
        raise UsageError("--gamma-db grid is empty")
    return out


def parse_tags(tokens, allowed=TAGS):
    tags = [t.strip() for tok in tokens for t in tok.split(",") if t.strip()]
    if not tags:
        raise UsageError("--tags is empty")
    bad = [t for t in tags if t not in allowed]
    if bad:
        raise UsageError(f"unknown criterion tag(s) {bad}; choose from {allowed}")
    return tags


def resolve_coarse(arg, fine: Lattice) -> Lattice:
    if arg is None:
        return fine
    try:
        c = float(arg)
    except ValueError:
        return load_lattice_file(arg).lattice
    if c <= 0:
        raise UsageError("--coarse scale must be positive")
    return fine.scaled(c)


def default_radius(lat: Lattice) -> float:
    return 3.0 * volume(lat) ** (1.0 / lat.dim)


def _snr_points(args):
    grid = parse_gamma_grid(args.gamma_db)
    if getattr(args, "sigma2", None) is not None:
        if grid is not None:
            raise UsageError("give either --sigma2 or --gamma-db, not both")
        if args.sigma2 <= 0:
            raise UsageError("--sigma2 must be positive")
        return [(10 * math.log10(args.sigma_he2 / args.sigma2), args.sigma2)]
    if grid is None:
        raise UsageError("--gamma-db is required")
    return [(g, args.sigma_he2 / 10 ** (g / 10)) for g in grid]


def _evaluate(tag, pair, params, spec, radius, args):
    """Return ``(value, terms, radius, tail)`` for one criterion tag."""
    fixed = dict(budget=args.budget)
    extend = dict(fixed, auto_extend=not args.fixed_radius)
    L = params.L
    n_rows = pair.coarse.dim // L
    if tag == "theta":
        rep = cr.gaussian_theta_sum(pair.coarse, params.sigma_e2, radius, **extend)
    elif tag == "pcb_gauss":
        est = cr.gaussian_pcb(pair, params, args.mc_samples, args.seed)
        return est.value, args.mc_samples, None, est.std_err
    elif tag == "pce_gauss_lead":
        rep = cr.gaussian_pce_leading(pair, params, radius, **extend)
    elif tag == "pce_gauss_2nd":
        rep = cr.gaussian_pce_second_order(pair, params, radius, **extend)
    elif tag == "pce_fast":
        rep = cr.fast_fading_pce(pair, params, radius, **extend)
    elif tag == "pce_fast_asym":
        rep = cr.fast_fading_asymptotic(pair, params, radius, **fixed)
    elif tag == "pce_block":
        rep = cr.block_fading_pce(pair, params, radius, n_rows, **extend)
    elif tag == "pce_block_asym":
        rep = cr.block_fading_asymptotic(pair, params, radius, n_rows, **fixed)
    elif tag in ("norm_sum_fast", "norm_sum_block"):
        if spec is None or spec.field is None:
            raise UsageError(f"tag {tag} needs a lattice file with a [field] table")
        if tag == "norm_sum_fast":
            rep = cr.norm_sum_criterion(spec.field, radius, **fixed)
        else:
            rep = cr.block_norm_criterion(spec.field, L, radius, **fixed)
    else:  # pragma: no cover - tags are validated up front
        raise UsageError(tag)
    return rep.value, rep.terms_used, rep.truncation_radius, rep.tail_bound


def _params(args, sigma_e2, L):
    return cr.FadingParams(sigma_e2=sigma_e2, sigma_b2=args.sigma_b2, sigma_he2=args.sigma_he2,
                           sigma_hb2=args.sigma_hb2, L=L)


def cmd_criterion(args):
    tags = parse_tags(args.tags)
    spec = load_lattice_file(args.lattice)
    pair = LatticePair(spec.lattice, resolve_coarse(args.coarse, spec.lattice))
    L = args.L or spec.L
    radius = args.radius or default_radius(pair.coarse)
    rows = []
    for tag in tags:
        for gdb, se2 in _snr_points(args):
            val, terms, rad, tail = _evaluate(tag, pair, _params(args, se2, L), spec, radius, args)
            rows.append((tag, gdb, val, terms, rad, tail))
    return ["criterion", "gamma_e_db", "value", "terms", "radius", "tail_bound"], rows


def cmd_rank(args):
    tags = parse_tags(args.tags, LATTICE_TAGS)
    spec = load_lattice_file(args.lattice)
    fine = spec.lattice
    cands = [load_lattice_file(p) for p in args.candidates]
    for c in cands:
        if c.lattice.dim != fine.dim:
            raise UsageError(f"{c.path}: dimension {c.lattice.dim} != fine dimension {fine.dim}")
    vols = [volume(c.lattice) for c in cands]
    target = args.target_volume or vols[0]
    if args.no_normalize:
        for c, v in zip(cands, vols):
            if abs(v - vols[0]) > 1e-9 * vols[0]:
                raise VolumeMismatch(f"{c.path}: volume {v:.12g} differs from {vols[0]:.12g} "
                                     "and normalization is disabled")
        scales = [1.0] * len(cands)
    else:
        scales = [(target / v) ** (1.0 / fine.dim) for v in vols]
    L = args.L or spec.L
    radius = args.radius or default_radius(fine.scaled((target / volume(fine)) ** (1 / fine.dim)))
    rows = []
    for gdb, se2 in _snr_points(args):
        params = _params(args, se2, L)
        for tag in tags:
            scored = []
            for pos, (c, s) in enumerate(zip(cands, scales)):
                flag = ""
                try:
                    raw = _evaluate(tag, LatticePair(fine, c.lattice), params, None, radius, args)[0]
                except LatticeError as exc:
                    raw, flag = math.nan, type(exc).__name__
                try:
                    norm = _evaluate(tag, LatticePair(fine, c.lattice.scaled(s)), params, None,
                                     radius, args)[0]
                except LatticeError as exc:
                    norm, flag = math.nan, type(exc).__name__
                key = norm if not math.isnan(norm) else math.inf
                scored.append((key, pos, c.path, raw, norm, s, flag))
            scored.sort(key=lambda t: (t[0], t[1]))
            for rank, (_, _, path, raw, norm, s, flag) in enumerate(scored, 1):
                rows.append((gdb, tag, rank, path, raw, norm, s, flag))
    return ["gamma_e_db", "criterion", "rank", "candidate", "value", "value_normalized",
            "scale", "flag"], rows


def cmd_sweep(args):
    spec = load_lattice_file(args.lattice)
    coarse = resolve_coarse(args.coarse, spec.lattice)
    code = build_coset_code(spec.lattice, coarse)
    grid = parse_gamma_grid(args.gamma_db)
    if grid is None:
        raise UsageError("--gamma-db is required")
    if args.command == "simulate" and len(grid) != 1:
        raise UsageError("simulate takes a single --gamma-db value; use sweep for grids")
    L = args.L or spec.L
    rows = []
    for gdb, res in run_sweep(code, grid, trials=args.trials, seed=args.seed,
                              decoder=args.decoder, who=args.who, L=L,
                              sigma_h2=args.sigma_h2, randomizer_box=args.randomizer_box,
                              fading=args.fading):
        rows.append((gdb, res.p_correct, res.std_err, res.trials, args.decoder, args.who))
    return ["gamma_e_db", "p_correct", "std_err", "trials", "decoder", "who"], rows


def cmd_check(args):
    from .oracles import run_checks

    failed = 0
    for name, ok, detail in run_checks(quick=not args.full):
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failed += not ok
    return failed


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wiretap-lattice",
                                description="Lattice coset codes for fading wiretap channels")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, coarse=True):
        sp.add_argument("--lattice", required=True, help="fine lattice description file (TOML)")
        if coarse:
            sp.add_argument("--coarse", help="coarse lattice: a scale factor of the fine "
                                             "lattice or a description file")
        sp.add_argument("--gamma-db", nargs="*", help="SNR grid in dB; values or start:stop:num")
        sp.add_argument("--L", type=int, default=None, help="coherence time (default: file L or 1)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="CSV output path (default stdout)")

    def crit_opts(sp):
        sp.add_argument("--tags", nargs="+", required=True)
        sp.add_argument("--radius", type=float, default=None)
        sp.add_argument("--budget", type=int, default=10**7)
        sp.add_argument("--fixed-radius", action="store_true",
                        help="do not auto-extend exact lattice sums")
        sp.add_argument("--sigma-b2", type=float, default=1.0)
        sp.add_argument("--sigma-he2", type=float, default=1.0)
        sp.add_argument("--sigma-hb2", type=float, default=1.0)
        sp.add_argument("--mc-samples", type=int, default=10**5)

    c = sub.add_parser("criterion", help="evaluate criteria")
    common(c)
    crit_opts(c)
    c.add_argument("--sigma2", type=float, default=None,
                   help="Eve noise variance; replaces --gamma-db")
    c.set_defaults(func=cmd_criterion)

    r = sub.add_parser("rank", help="rank candidate coarse lattices")
    common(r, coarse=False)
    crit_opts(r)
    r.add_argument("--candidates", nargs="+", required=True)
    r.add_argument("--target-volume", type=float, default=None)
    r.add_argument("--no-normalize", action="store_true")
    r.set_defaults(func=cmd_rank)

    for name in ("simulate", "sweep"):
        s = sub.add_parser(name, help="Monte Carlo correct-decision probability")
        common(s)
        s.add_argument("--trials", type=int, default=10**4)
        s.add_argument("--decoder", choices=["rounding", "exact"], default="rounding")
        s.add_argument("--who", choices=["eve", "bob"], default="eve")
        s.add_argument("--sigma-h2", type=float, default=1.0)
        s.add_argument("--randomizer-box", type=int, default=2)
        s.add_argument("--fading", choices=["rayleigh", "none"], default="rayleigh")
        s.set_defaults(func=cmd_sweep)

    k = sub.add_parser("check", help="run the built-in oracle suite")
    k.add_argument("--full", action="store_true")
    k.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return 1 if args.func(args) else 0
        header, rows = args.func(args)
        write_csv(header, rows, getattr(args, "out", None))
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (LatticeError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
