"""Command-line surface for the toolkit.

Subcommands: mu, verify, lp, gamma, sample, count.  Every result written to
a file or stdout carries a run manifest (command, input hashes, parameters,
timing) so identical manifests imply identical results.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from .lattice import load_region
from .colouring import (
    PartialVertexColouring, free_boundary, parse_boundary, count,
)
from .boundary import parse_pair
from . import certify
from .mu import mu_max, mu_hill_climb, format_mu_record, load_mu_table
from .coupling import GammaEvaluator
from .glauber import ChainConfig, run_chain, approx_count


def _file_hash(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _manifest(command: str, inputs: list[str], params: dict,
              elapsed: float, workers: int = 1) -> str:
    data = {
        "command": command,
        "inputs": {os.path.basename(p): _file_hash(p) for p in inputs},
        "params": params,
        "elapsed_s": round(elapsed, 3),
        "workers": workers,
    }
    return "# manifest: " + json.dumps(data, sort_keys=True)


def _parse_fraction(text: str) -> Fraction:
    if "/" in text:
        n, d = text.split("/")
        return Fraction(int(n), int(d))
    return Fraction(text)


def cmd_mu(args) -> int:
    R, dv, dw = load_region(args.region)
    if dv is None or dw is None:
        print("error: region file lacks distinguished_v/distinguished_w",
              file=sys.stderr)
        return 2
    t0 = time.time()
    if args.heuristic:
        res = mu_hill_climb(R, dv, dw, seed=args.seed, restarts=args.restarts)
    else:
        res = mu_max(R, dv, dw, workers=args.workers)
    record = format_mu_record(R.name or Path(args.region).stem, res)
    manifest = _manifest("mu", [args.region],
                         {"heuristic": args.heuristic, "seed": args.seed},
                         time.time() - t0, args.workers)
    out = record + "\n" + manifest + "\n"
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    print(record)
    return 0


def cmd_verify(args) -> int:
    try:
        cert = certify.Certifier.load(Path(args.data_dir),
                                      mu_table_path=args.mu_table)
        alphas = certify.load_alpha_table(args.constants)
        eps = _parse_fraction(args.eps)
    except Exception as exc:  # malformed inputs
        print(f"error: {exc}", file=sys.stderr)
        return 2
    inequalities = certify.generate_inequalities(cert)
    violations = certify.verify_alphas(alphas, inequalities, cert.mu_table, eps)
    text = certify.certificate_text(Path(args.data_dir), args.constants, eps,
                                    violations, len(inequalities))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    print(text.splitlines()[6])  # verdict line
    for line in text.splitlines()[8:]:
        print(line)
    return 0 if not violations else 1


def cmd_lp(args) -> int:
    cert = certify.Certifier.load(Path(args.data_dir))
    eps = _parse_fraction(args.eps)
    inequalities = certify.generate_inequalities(cert)
    if args.emit:
        text = certify.export_lp(inequalities, cert.mu_table, eps)
        Path(args.emit).write_text(text, encoding="utf-8")
        print(f"wrote {args.emit} ({len(inequalities)} constraints)")
        return 0
    outcome = certify.solve_lp(inequalities, cert.mu_table, eps)
    print(outcome.message)
    if outcome.feasible and args.solve_out:
        Path(args.solve_out).write_text(
            certify.format_alpha_table(outcome.alphas), encoding="utf-8")
        print(f"wrote {args.solve_out}")
    return 0 if outcome.feasible else 1


def cmd_gamma(args) -> int:
    with open(args.pair, "r", encoding="utf-8") as fh:
        X = parse_pair(fh.read())
    t0 = time.time()
    val = GammaEvaluator().gamma(X, args.d)
    print(f"gamma_{args.d} = {val.numerator}/{val.denominator}")
    print(_manifest("gamma", [args.pair], {"d": args.d}, time.time() - t0))
    return 0


def _load_vertex_boundary(args, R):
    if args.boundary:
        with open(args.boundary, "r", encoding="utf-8") as fh:
            # vertex boundary file: `v <x> <y> <colour>` lines
            assignment = {}
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                assignment[(int(parts[1]), int(parts[2]))] = int(parts[3])
        return PartialVertexColouring(R, assignment)
    from .lattice import vertex_boundary
    return PartialVertexColouring(R, {v: 0 for v in vertex_boundary(R)})


def cmd_sample(args) -> int:
    R, _, _ = load_region(args.region)
    bv = _load_vertex_boundary(args, R)
    cfg = ChainConfig(R, bv, seed=args.seed, steps=args.steps)
    t0 = time.time()
    state = run_chain(cfg)
    verts = sorted(R.vertices)
    print(" ".join(str(state.colouring[v]) for v in verts))
    print(_manifest("sample", [args.region],
                    {"steps": args.steps, "seed": args.seed}, time.time() - t0))
    return 0


def cmd_count(args) -> int:
    R, _, _ = load_region(args.region)
    t0 = time.time()
    if args.approx:
        bv = _load_vertex_boundary(args, R)
        est, (lo, hi) = approx_count(R, bv, seed=args.seed)
        print(f"approx_count = {est:.2f} interval [{lo:.2f}, {hi:.2f}] (non-rigorous)")
    else:
        if args.boundary:
            with open(args.boundary, "r", encoding="utf-8") as fh:
                B = parse_boundary(fh.read(), R)
        else:
            B = free_boundary(R)
        print(f"count = {count(R, B)}")
    print(_manifest("count", [args.region], {"approx": args.approx},
                    time.time() - t0))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="trimix",
        description="exact counting, coupling and certification for "
                    "9-colourings of the triangular lattice")
    sub = parser.add_subparsers(dest="cmd", required=True)

    default_workers = int(os.environ.get("TRIMIX_WORKERS", "1"))

    p = sub.add_parser("mu", help="maximize mu over boundary colourings")
    p.add_argument("region")
    p.add_argument("--heuristic", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--workers", type=int, default=default_workers)
    p.add_argument("--output")
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("verify", help="exact verification of the alpha table")
    p.add_argument("--constants", required=True)
    p.add_argument("--mu-table", dest="mu_table")
    p.add_argument("--eps", default="1/1000")
    p.add_argument("--data-dir", default=str(certify.DATA_DIR))
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lp", help="export or solve the alpha LP")
    p.add_argument("--emit")
    p.add_argument("--solve", action="store_true")
    p.add_argument("--solve-out", dest="solve_out")
    p.add_argument("--eps", default="1/1000")
    p.add_argument("--data-dir", default=str(certify.DATA_DIR))
    p.set_defaults(func=cmd_lp)

    p = sub.add_parser("gamma", help="evaluate the Gamma_d recursion")
    p.add_argument("pair")
    p.add_argument("d", type=int)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("sample", help="run the single-site dynamics")
    p.add_argument("region")
    p.add_argument("--boundary")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("count", help="count agreeing proper colourings")
    p.add_argument("region")
    p.add_argument("--boundary")
    p.add_argument("--approx", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_count)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
