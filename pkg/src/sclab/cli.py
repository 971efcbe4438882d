"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 a theorem floor was
breached (which can only mean a software defect).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__
from .codes import basis_union_code, certify, identity_code, random_unit_code, tight_frame_code
from .config import load_config
from .exceptions import SclabError
from .experiments import run_experiment
from .io import read_code, read_readout, write_code
from .kernels import TilePlan
from .plotting import plots_for
from .readouts import crosstalk, least_squares_readout, rescale_to_unit_diagonal, transpose_readout
from .scales import hierarchy_report

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2


class UsageError(SclabError):
    pass


def _kv(tokens, required, optional=()):
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep:
            raise UsageError(f"expected KEY=VALUE, got {tok!r}")
        if key not in (*required, *optional):
            raise UsageError(f"unknown key {key!r}; expected {', '.join((*required, *optional))}")
        try:
            out[key] = int(val)
        except ValueError:
            raise UsageError(f"{key} must be an integer, got {val!r}") from None
    missing = [k for k in required if k not in out]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")
    return out


def _add_code_source(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--code", metavar="PATH", help="code file (SCLB format)")
    g.add_argument("--identity", nargs="+", metavar="KEY=VAL", help="d=N")
    g.add_argument("--random", nargs="+", metavar="KEY=VAL", help="d=N F=N [seed=N]")
    g.add_argument("--tight-frame", nargs="+", metavar="KEY=VAL", help="d=N F=N [seed=N]")
    g.add_argument("--basis-union", nargs="+", metavar="KEY=VAL", help="d=N k=N [seed=N]")
    p.add_argument("--normalize", action="store_true", help="normalize columns of a loaded code")


def _code_from_args(args):
    if args.code:
        return read_code(args.code, normalize=args.normalize)
    if args.identity:
        return identity_code(**_kv(args.identity, ("d",)))
    if args.random:
        return random_unit_code(**_kv(args.random, ("d", "F"), ("seed",)))
    if args.tight_frame:
        return tight_frame_code(**_kv(args.tight_frame, ("d", "F"), ("seed",)))
    return basis_union_code(**_kv(args.basis_union, ("d", "k"), ("seed",)))


def _plan(args):
    return TilePlan(tile_cols=args.tile_cols)


def _print_fields(pairs, out):
    width = max(len(k) for k, _ in pairs)
    for k, v in pairs:
        if isinstance(v, float):
            v = f"{v:.12g}"
        out.write(f"{k.ljust(width)}  {v}\n")


def cmd_welch_check(args, out):
    code = _code_from_args(args)
    if args.readout == "transpose":
        readout = transpose_readout(code)
    elif args.readout == "least-squares":
        readout = least_squares_readout(code)
    else:
        readout = rescale_to_unit_diagonal(read_readout(args.readout), code)
    report = crosstalk(readout, code, _plan(args))
    _print_fields([("kind", code.kind.value), ("readout", readout.kind.value),
                   *report._asdict().items(), ("floor_satisfied", report.floor_satisfied)], out)
    return EXIT_OK if report.floor_satisfied else EXIT_VIOLATION


def cmd_certify(args, out):
    code = _code_from_args(args)
    cert = certify(code, _plan(args))
    ok = cert.F <= cert.d or cert.coherence >= cert.welch_pair_floor - 1e-9
    _print_fields([("kind", code.kind.value), *vars(cert).items(), ("welch_bound_ok", ok)], out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_gen_code(args, out):
    code = _code_from_args(args)
    write_code(args.output, code)
    out.write(f"wrote {code.kind.value} code d={code.d} F={code.F} to {args.output}\n")
    return EXIT_OK


def cmd_scales(args, out):
    report = hierarchy_report(args.d, args.alpha, s=args.s, eps=args.eps, gamma=args.gamma,
                              C1=args.C1, C2=args.C2, K_gamma=args.K_gamma, c_gamma=args.c_gamma,
                              F_obs=args.F_obs)
    if args.json:
        out.write(report.to_json(indent=2) + "\n")
    else:
        out.write(report.to_table())
    return EXIT_OK


def _sha256(data):
    return hashlib.sha256(data).hexdigest()


def cmd_experiment(args, out):
    cfg = load_config(args.config)
    if args.jobs is not None:
        cfg = replace(cfg, n_jobs=args.jobs)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    result = run_experiment(cfg)
    wall = time.perf_counter() - t0
    files = {"results.csv": result.to_csv(), "results.json": result.to_json()}
    if not args.no_plots:
        files.update(plots_for(result))
    listing = []
    for name, text in files.items():
        data = text.encode("utf-8")
        (outdir / name).write_bytes(data)
        listing.append({"name": name, "sha256": _sha256(data), "bytes": len(data)})
    manifest = {
        "config_path": str(args.config),
        "config": cfg.to_dict(),
        "output_dir": str(outdir),
        "files": listing,
        "version": __version__,
        "wall_time_s": round(wall, 3),
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                          encoding="utf-8")
    for entry in listing:
        out.write(f"{entry['sha256']}  {entry['name']}\n")
    bad = result.violations()
    for r in bad:
        out.write(f"BOUND VIOLATED: {r.statistic} d={r.d} F={r.F} s={r.s} value={r.value!r} "
                  f"bound={r.bound!r} ({r.bound_name})\n")
    for r in result.target_misses():
        out.write(f"target missed: {r.statistic} d={r.d} F={r.F} s={r.s} value={r.value!r} "
                  f"target={r.bound!r}\n")
    return EXIT_VIOLATION if bad else EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="sclab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"sclab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("welch-check", help="cross-talk of a readout against the Welch floors")
    _add_code_source(w)
    w.add_argument("--readout", default="transpose",
                   help="transpose, least-squares, or a readout file (SCLR format)")
    w.add_argument("--tile-cols", type=int, default=256)
    w.set_defaults(func=cmd_welch_check)

    c = sub.add_parser("certify", help="print the coherence certificate of a code")
    _add_code_source(c)
    c.add_argument("--tile-cols", type=int, default=256)
    c.set_defaults(func=cmd_certify)

    g = sub.add_parser("gen-code", help="write a generated code to a file")
    _add_code_source(g)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen_code)

    s = sub.add_parser("scales", help="capacity reference scales at one width")
    s.add_argument("--d", type=float, default=1152)
    s.add_argument("--alpha", type=float, default=0.99)
    s.add_argument("--s", type=float, default=1)
    s.add_argument("--gamma", type=float, default=0.0)
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--C1", type=float, default=1.0)
    s.add_argument("--C2", type=float, default=1.0)
    s.add_argument("--K-gamma", dest="K_gamma", type=float, default=1.0)
    s.add_argument("--c-gamma", dest="c_gamma", type=float, default=1.0)
    s.add_argument("--F-obs", dest="F_obs", type=float, default=None)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_scales)

    e = sub.add_parser("experiment", help="run a Monte Carlo sweep from an INI config")
    e.add_argument("config")
    e.add_argument("--out", default="out")
    e.add_argument("--no-plots", action="store_true")
    e.add_argument("--jobs", type=int, default=None)
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (SclabError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
