"""Command-line front end: sampling, moment reports, eigenvalue histograms,
and the full verification suite.

Subcommands
-----------
sample    write n sampled matrices to a file (newline-delimited JSON or CSV)
moments   Monte Carlo moment reports against the closed-form targets (JSON)
eigdist   histogram of the top eigenvalue, as plot-ready CSV
verify    run the statistical verification suite and print a table

Exit codes: 0 success / all checks passed, 1 statistical failure, 2 invalid
usage or configuration, 3 I/O failure.

Output bytes depend only on the command, flags, and seed.  Sampling is
chunked over deterministic substreams (4096 draws per chunk, chunk index =
stream index), so ``--workers`` changes wall-clock time but never output.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import measure, stats
from .samplers import (
    RngStream,
    sample_density_bloch,
    sample_density_hs,
    sample_density_purified,
    sample_density_spectral,
    sample_ginibre,
    sample_gue,
)

SAMPLE_CHUNK = 4096

METHODS = {
    "hs": sample_density_hs,
    "purified": sample_density_purified,
    "spectral": sample_density_spectral,
    "bloch": lambda d, rng, size: sample_density_bloch(rng, size),
    "gue": sample_gue,
    "ginibre": sample_ginibre,
}
DENSITY_METHODS = ("hs", "purified", "spectral", "bloch")

EXIT_OK = 0
EXIT_STAT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3


class ConfigError(ValueError):
    """Invalid flag combination; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Validated sampling configuration shared by the subcommands."""

    dim: int
    n: int
    method: str
    seed: int
    workers: int = 1
    out: str | None = None
    fmt: str = "json"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method '{self.method}'")
        if self.n < 1:
            raise ConfigError("--n must be at least 1")
        if self.workers < 1:
            raise ConfigError("--workers must be at least 1")
        if self.fmt not in ("json", "csv"):
            raise ConfigError(f"unknown format '{self.fmt}'")
        if self.method == "bloch" and self.dim != 2:
            raise ConfigError("--method bloch requires --dim 2")
        if self.method == "spectral" and not 2 <= self.dim <= 6:
            raise ConfigError("--method spectral requires 2 <= --dim <= 6")
        if self.method in DENSITY_METHODS:
            if self.dim < 2:
                raise ConfigError("density-matrix methods require --dim >= 2")
        elif self.dim < 1:
            raise ConfigError("--dim must be at least 1")


def sample_stacked(config: RunConfig) -> np.ndarray:
    """Sample ``config.n`` matrices deterministically, chunked over substreams.

    Chunk c of 4096 draws comes from ``RngStream(seed, stream_index=c)``;
    chunks may be produced by parallel workers but are merged in index
    order, so the result is independent of ``workers``.
    """
    sampler = METHODS[config.method]
    chunks = [(c, min(SAMPLE_CHUNK, config.n - c * SAMPLE_CHUNK))
              for c in range((config.n + SAMPLE_CHUNK - 1) // SAMPLE_CHUNK)]

    def produce(chunk):
        index, count = chunk
        return sampler(config.dim, RngStream(config.seed, index), count)

    if config.workers == 1 or len(chunks) == 1:
        parts = [produce(chunk) for chunk in chunks]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(produce, chunks))
    return np.concatenate(parts, axis=0)


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------

def _fmt17(x: float) -> str:
    # 17 significant digits round-trip any double exactly.
    return format(float(x), ".17g")


def matrix_to_json_line(rho: np.ndarray) -> str:
    """One matrix as ``{"d": ..., "re": [[...]], "im": [[...]]}``."""
    d = rho.shape[0]
    def block(part):
        return "[" + ",".join("[" + ",".join(_fmt17(v) for v in row) + "]"
                              for row in part) + "]"
    return f'{{"d": {d}, "re": {block(rho.real)}, "im": {block(rho.imag)}}}'


def matrix_from_json_line(line: str) -> np.ndarray:
    rec = json.loads(line)
    return np.asarray(rec["re"], dtype=float) + 1j * np.asarray(rec["im"], dtype=float)


def write_matrices_json(matrices: np.ndarray, fh) -> None:
    for rho in matrices:
        fh.write(matrix_to_json_line(rho) + "\n")


def read_matrices_json(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return np.stack([matrix_from_json_line(line) for line in fh if line.strip()])


def write_matrices_csv(matrices: np.ndarray, fh) -> None:
    """Long format: one row per entry, shortest round-trip decimals."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["index", "row", "col", "re", "im"])
    for k, rho in enumerate(matrices):
        for i in range(rho.shape[0]):
            for j in range(rho.shape[1]):
                writer.writerow([k, i, j, repr(float(rho[i, j].real)),
                                 repr(float(rho[i, j].imag))])


@contextmanager
def _open_out(out: str | None):
    if out is None or out == "-":
        yield sys.stdout
    else:
        path = Path(out)
        if path.parent and not path.parent.exists():
            raise OSError(f"output directory does not exist: {path.parent}")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def cmd_sample(config: RunConfig) -> int:
    matrices = sample_stacked(config)
    with _open_out(config.out) as fh:
        if config.fmt == "json":
            write_matrices_json(matrices, fh)
        else:
            write_matrices_csv(matrices, fh)
    return EXIT_OK


def _report_record(report) -> dict:
    rec = asdict(report)
    rec["kind"] = type(report).__name__
    return rec


def cmd_moments(config: RunConfig, z_threshold: float = stats.Z_THRESHOLD_DEFAULT) -> int:
    if config.method not in ("hs", "purified", "spectral"):
        raise ConfigError("moments requires --method hs, purified, or spectral")
    samples = sample_stacked(config)
    warnings = []
    if config.n < 10_000:
        warnings.append("sample count below 10000; standard errors are unreliable")
    reports = []
    if config.n >= 2:
        reports.extend(stats.mc_mean_reports(samples, z_threshold))
    if config.n >= 100:
        reports.extend(stats.mc_covariance_check(samples, z_threshold))
    if config.n >= 2:
        reports.append(stats.mc_purity_report(samples, z_threshold))
    all_pass = all(r.passed for r in reports)
    doc = {
        "command": "moments",
        "dim": config.dim,
        "n": config.n,
        "method": config.method,
        "seed": config.seed,
        "z_threshold": z_threshold,
        "warnings": warnings,
        "all_pass": all_pass,
        "reports": [_report_record(r) for r in reports],
    }
    with _open_out(config.out) as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return EXIT_OK if all_pass else EXIT_STAT_FAIL


def cmd_eigdist(config: RunConfig, bins: int) -> int:
    if config.method not in DENSITY_METHODS:
        raise ConfigError("eigdist requires a density-matrix method")
    if bins < 2:
        raise ConfigError("--bins must be at least 2")
    samples = sample_stacked(config)
    lam_max = np.linalg.eigvalsh(samples)[:, -1]
    lo, hi = 1.0 / config.dim, 1.0
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(np.clip(lam_max, lo, hi), bins=edges)
    widths = np.diff(edges)
    density = counts / (config.n * widths)
    mids = 0.5 * (edges[:-1] + edges[1:])
    header = ["bin_left", "bin_right", "count", "density"]
    analytic = None
    if config.dim == 2:
        header.append("analytic_density")
        analytic = measure.lambda_max_pdf_d2(mids)
    with _open_out(config.out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for b in range(bins):
            row = [repr(float(edges[b])), repr(float(edges[b + 1])),
                   int(counts[b]), repr(float(density[b]))]
            if analytic is not None:
                row.append(repr(float(analytic[b])))
            writer.writerow(row)
    return EXIT_OK


def _format_table(results) -> str:
    rows = [("block", "d", "statistic", "target", "estimate", "score", "pass")]
    for res in results:
        rep = res.report
        if isinstance(rep, stats.KsReport):
            target, estimate = "--", f"D={rep.d_stat:.4f}"
            score = f"p={rep.p_value:.3g}"
        else:
            target, estimate = f"{rep.target:.6g}", f"{rep.estimate:.6g}"
            score = f"z={rep.z_score:+.2f}"
        rows.append((res.block, str(res.dim), res.label, target, estimate, score,
                     "pass" if res.passed else "FAIL"))
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def cmd_verify(dims, n: int, seed: int, alpha: float, z_threshold: float,
               only=None) -> int:
    try:
        results = stats.run_verification_suite(dims, n, seed, alpha, z_threshold, only)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(_format_table(results))
    failed = [r for r in results if not r.passed]
    print(f"\n{len(results) - len(failed)} of {len(results)} checks passed"
          + (f"; {len(failed)} FAILED" if failed else ""))
    return EXIT_STAT_FAIL if failed else EXIT_OK


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uniformdm",
        description="Sample uniform (Hilbert-Schmidt) density matrices and "
                    "verify their closed-form statistics.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, methods, default_n):
        p.add_argument("--dim", type=int, default=2, help="matrix dimension")
        p.add_argument("--n", type=int, default=default_n, help="number of samples")
        p.add_argument("--method", choices=methods, default="hs")
        p.add_argument("--seed", type=int, default=stats.DEFAULT_SEED)
        p.add_argument("--workers", type=int, default=1,
                       help="parallel sampling workers (never changes output bytes)")
        p.add_argument("--out", default=None, help="output file ('-' for stdout)")

    p_sample = sub.add_parser("sample", help="write sampled matrices to a file")
    add_common(p_sample, tuple(METHODS), default_n=1000)
    p_sample.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    p_moments = sub.add_parser("moments", help="Monte Carlo moment report (JSON)")
    add_common(p_moments, ("hs", "purified", "spectral"), default_n=200_000)
    p_moments.add_argument("--z-threshold", type=float, default=stats.Z_THRESHOLD_DEFAULT)

    p_eig = sub.add_parser("eigdist", help="top-eigenvalue histogram (CSV)")
    add_common(p_eig, DENSITY_METHODS, default_n=100_000)
    p_eig.add_argument("--bins", type=int, default=50)

    p_verify = sub.add_parser("verify", help="run the full verification suite")
    p_verify.add_argument("--dim", default="2,3",
                          help="comma-separated dimensions (default 2,3)")
    p_verify.add_argument("--n", type=int, default=100_000)
    p_verify.add_argument("--seed", type=int, default=stats.DEFAULT_SEED)
    p_verify.add_argument("--alpha", type=float, default=stats.KS_ALPHA_DEFAULT)
    p_verify.add_argument("--z-threshold", type=float, default=stats.Z_THRESHOLD_DEFAULT)
    p_verify.add_argument("--only", default=None,
                          help="comma-separated blocks to run "
                               f"(from: {', '.join(stats.VERIFY_BLOCKS)})")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return int(exc.code or 0)
    try:
        if args.command == "sample":
            config = RunConfig(args.dim, args.n, args.method, args.seed,
                               args.workers, args.out, args.fmt)
            return cmd_sample(config)
        if args.command == "moments":
            config = RunConfig(args.dim, args.n, args.method, args.seed,
                               args.workers, args.out)
            return cmd_moments(config, z_threshold=args.z_threshold)
        if args.command == "eigdist":
            config = RunConfig(args.dim, args.n, args.method, args.seed,
                               args.workers, args.out)
            return cmd_eigdist(config, bins=args.bins)
        if args.command == "verify":
            dims = [int(part) for part in str(args.dim).split(",") if part.strip()]
            only = ([part.strip() for part in args.only.split(",") if part.strip()]
                    if args.only else None)
            return cmd_verify(dims, args.n, args.seed, args.alpha,
                              args.z_threshold, only)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry_point() -> None:
    sys.exit(main())
