"""Command-line front end: SNR sweeps to CSV, point queries, verification.

Exit codes: 0 success, 1 verification failure, 2 usage error.  CSV output is
deterministic: fixed 12-significant-digit formatting, rows sorted by
(snr_db, bound_id), parallel workers assembled in input order.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import lower_bounds, upper_bounds, verify

#: bound id -> (minimum set of dims it supports, or None for all n >= 1)
BOUND_DIMS: dict[str, tuple[int, ...] | None] = {
    "avg_power": None,
    "mckellips": None,
    "refined": None,
    "minmax_conjectured": None,
    "minmax_verified": None,
    "envelope": None,
    "volume_lower": None,
    "pam_lower": (1,),
    "ring_lower": (2,),
}

_LOWER_IDS = {"volume_lower", "pam_lower", "ring_lower"}


def available_bounds(n: int) -> list[str]:
    return [b for b, dims in BOUND_DIMS.items() if dims is None or n in dims]


def compute_bound(bound_id: str, n: int, P: float) -> upper_bounds.BoundPoint:
    """Evaluate one bound id at linear SNR P for dimension n."""
    snr_db = 10.0 * math.log10(P)
    A = math.sqrt(n * P)
    if bound_id == "avg_power":
        rate = 0.5 * n * math.log1p(P) / math.log(2.0)
        return upper_bounds.BoundPoint(snr_db, rate, "avg_power", True)
    if bound_id == "mckellips":
        rate = (upper_bounds.mckellips_1d(P) if n == 1
                else upper_bounds.mckellips_nd(n, P))
        return upper_bounds.BoundPoint(snr_db, rate, "mckellips", True)
    if bound_id == "refined":
        pt = (upper_bounds.refined_1d(P) if n == 1
              else upper_bounds.refined_nd(n, P))
        return pt
    if bound_id == "minmax_conjectured":
        return upper_bounds.minmax_dual(n, A, conjecture=True)
    if bound_id == "minmax_verified":
        return upper_bounds.minmax_dual(n, A, conjecture=False)
    if bound_id == "envelope":
        return upper_bounds.envelope(n, P)
    if bound_id == "volume_lower":
        return upper_bounds.BoundPoint(
            snr_db, lower_bounds.volume_lower_bound(n, P), "volume_lower", True)
    if bound_id == "pam_lower":
        if n != 1:
            raise ValueError("pam_lower is defined for dimension 1 only")
        return upper_bounds.BoundPoint(
            snr_db, lower_bounds.pam_lower_bound_1d(P), "pam_lower", True)
    if bound_id == "ring_lower":
        if n != 2:
            raise ValueError("ring_lower is defined for dimension 2 only")
        mi = lower_bounds.constellation_mi(
            lower_bounds.ring_constellation(A), refine_check=False)
        return upper_bounds.BoundPoint(snr_db, mi.bits, "ring_lower", True)
    raise ValueError(
        f"unknown bound id {bound_id!r}; available: {available_bounds(n)}")


def _point_rows(args):
    n, snr_db, bounds, per_dimension = args
    P = 10.0 ** (snr_db / 10.0)
    rows = []
    for b in bounds:
        pt = compute_bound(b, n, P)
        rate = pt.rate_bits / n if per_dimension else pt.rate_bits
        rows.append((snr_db, b, rate, pt.valid, pt.achiever or ""))
    return rows


def _fmt(v: float) -> str:
    return format(v, ".12g")


@dataclass(frozen=True)
class SweepRequest:
    """A CSV sweep job: dimension, dB grid, bound ids, destination."""

    n: int
    snr_db_min: float
    snr_db_max: float
    snr_db_step: float
    bounds: tuple[str, ...]
    output_path: str
    jobs: int = 1
    per_dimension: bool = False

    def __post_init__(self):
        if self.snr_db_min > self.snr_db_max:
            raise ValueError("snr-db-min must not exceed snr-db-max")
        if self.snr_db_step <= 0:
            raise ValueError("step must be positive")
        if not self.bounds:
            raise ValueError("at least one bound id is required")
        for b in self.bounds:
            if b not in available_bounds(self.n):
                raise ValueError(
                    f"bound {b!r} unavailable for dim {self.n}; available: "
                    f"{available_bounds(self.n)}")

    def grid(self) -> list[float]:
        count = int(math.floor(
            (self.snr_db_max - self.snr_db_min) / self.snr_db_step + 1e-9)) + 1
        return [self.snr_db_min + i * self.snr_db_step for i in range(count)]


def sweep(req: SweepRequest) -> None:
    """Evaluate the requested bounds over the SNR grid and write the CSV."""
    tasks = [(req.n, s, list(req.bounds), req.per_dimension)
             for s in req.grid()]
    if req.jobs > 1:
        with ProcessPoolExecutor(max_workers=req.jobs) as pool:
            chunks = list(pool.map(_point_rows, tasks))
    else:
        chunks = [_point_rows(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(req.output_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["snr_db", "bound_id", "rate_bits", "valid", "achiever"])
        for snr_db, bound_id, rate, valid, achiever in rows:
            w.writerow([_fmt(snr_db), bound_id, _fmt(rate),
                        "true" if valid else "false", achiever])


def run_sweep(n: int, snr_db_min: float, snr_db_max: float, step: float,
              bounds: list[str], out_path: str, jobs: int = 1,
              per_dimension: bool = False) -> None:
    sweep(SweepRequest(n=n, snr_db_min=snr_db_min, snr_db_max=snr_db_max,
                       snr_db_step=step, bounds=tuple(bounds),
                       output_path=out_path, jobs=jobs,
                       per_dimension=per_dimension))


def _add_common_point_args(p):
    p.add_argument("--dim", type=int, required=True, help="dimension n >= 1")
    snr = p.add_mutually_exclusive_group(required=False)
    snr.add_argument("--snr-db", type=float, help="SNR in dB (P = A^2/n)")
    snr.add_argument("--amplitude", type=float, help="amplitude limit A")
    p.add_argument("--bounds", type=str, default="envelope",
                   help="comma-separated bound ids")
    p.add_argument("--per-dimension", action="store_true",
                   help="report bits per real dimension instead of per symbol")


def _parse_bounds(spec: str) -> list[str]:
    return [b.strip() for b in spec.split(",") if b.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="awgncap",
        description="Capacity bounds for amplitude-constrained AWGN channels "
                    "(rates in bits per n-dimensional channel use)")
    ap.add_argument("--list-bounds", action="store_true",
                    help="list bound ids and supported dimensions, then exit")
    sub = ap.add_subparsers(dest="command")

    sw = sub.add_parser("sweep", help="write a CSV bound curve over an SNR range")
    sw.add_argument("--dim", type=int, required=True)
    sw.add_argument("--snr-db-min", type=float, required=True)
    sw.add_argument("--snr-db-max", type=float, required=True)
    sw.add_argument("--step", type=float, required=True)
    sw.add_argument("--bounds", type=str, required=True,
                    help="comma-separated bound ids")
    sw.add_argument("--out", type=str, required=True, help="output CSV path")
    sw.add_argument("--jobs", type=int, default=1,
                    help="parallel workers (results keep input order)")
    sw.add_argument("--per-dimension", action="store_true")

    pt = sub.add_parser("point", help="evaluate bounds at one SNR")
    _add_common_point_args(pt)

    vf = sub.add_parser("verify", help="run the property suites")
    vf.add_argument("--suite", type=str, default="all",
                    help=f"one of {', '.join(verify.SUITES)}")
    vf.add_argument("--seed", type=int, default=0)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)

    if args.list_bounds:
        for bound_id, dims in BOUND_DIMS.items():
            where = "any n" if dims is None else ", ".join(f"n={d}" for d in dims)
            kind = "lower" if bound_id in _LOWER_IDS else "upper"
            print(f"{bound_id:20s} {kind:5s} [{where}]")
        return 0

    if args.command is None:
        ap.print_usage(sys.stderr)
        return 2

    try:
        if args.command == "sweep":
            run_sweep(args.dim, args.snr_db_min, args.snr_db_max, args.step,
                      _parse_bounds(args.bounds), args.out, jobs=args.jobs,
                      per_dimension=args.per_dimension)
            return 0
        if args.command == "point":
            if args.snr_db is None and args.amplitude is None:
                print("point requires --snr-db or --amplitude", file=sys.stderr)
                return 2
            n = args.dim
            snr_db = (args.snr_db if args.snr_db is not None
                      else 10.0 * math.log10(args.amplitude ** 2 / n))
            rows = _point_rows((n, snr_db, _parse_bounds(args.bounds),
                                args.per_dimension))
            print("snr_db,bound_id,rate_bits,valid,achiever")
            for snr, bound_id, rate, valid, achiever in rows:
                print(f"{_fmt(snr)},{bound_id},{_fmt(rate)},"
                      f"{'true' if valid else 'false'},{achiever}")
            return 0
        if args.command == "verify":
            results = verify.run_suite(args.suite, seed=args.seed)
            for res in results:
                print(res.line())
            failures = sum(not r.passed for r in results)
            print(f"{len(results) - failures}/{len(results)} checks passed")
            return 1 if failures else 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
