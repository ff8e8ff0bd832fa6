"""Command line front end.

Subcommands: compress, decompress, verify, stats. Exit codes: 0 on
success, 1 on data errors (bad input, failed verify, oracle overrun),
2 when every parse attempt failed verification, 64 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from pathlib import Path

from . import codec, oracle, report
from .codec import DecodeError, VerificationError
from .fingerprint import MERSENNE61
from .iomodel import IoConfig, SequentialReader
from .parse_core import Params, parse

EX_OK = 0
EX_DATA = 1
EX_VERIFY = 2
EX_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _add_parse_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--epsilon", type=float, required=True,
                     help="schedule shrink exponent, in (0, 1]")
    sub.add_argument("--seed", type=int, default=0,
                     help="fingerprint seed (default 0)")
    sub.add_argument("--modulus", type=int, default=MERSENNE61,
                     help="fingerprint modulus (default 2**61 - 1)")
    sub.add_argument("--block-size", type=int, default=4096,
                     help="I/O block size for read accounting (default 4096)")
    sub.add_argument("--short-table-mem", type=int, default=0,
                     help="byte budget for the exact short-block table (default off)")
    sub.add_argument("--max-retries", type=int, default=3,
                     help="total parse attempts before giving up (default 3)")
    sub.add_argument("--halve-epsilon", action="store_true",
                     help="run the schedule at epsilon/2")


def build_parser() -> _Parser:
    p = _Parser(prog="lzap", description=__doc__.strip().splitlines()[0])
    subs = p.add_subparsers(dest="command", required=True)

    c = subs.add_parser("compress", help="parse a file and write the serialized parse")
    c.add_argument("--input", required=True, help="path of the file to parse")
    c.add_argument("--output", required=True, help="path for the serialized parse")
    _add_parse_flags(c)
    c.add_argument("--stats", help="also write a JSON run report to this path")

    d = subs.add_parser("decompress", help="decode a serialized parse")
    d.add_argument("--input", required=True, help="path of the serialized parse")
    d.add_argument("--output", required=True, help="path for the decoded bytes")

    v = subs.add_parser("verify", help="check a serialized parse against its source")
    v.add_argument("--parse", required=True, help="path of the serialized parse")
    v.add_argument("--source", required=True, help="path of the original file")

    s = subs.add_parser("stats", help="parse a file and report, without writing output")
    s.add_argument("--input", required=True, help="path of the file to parse")
    _add_parse_flags(s)
    s.add_argument("--oracle-limit", type=int, default=10**6,
                   help="max input size for the exact phrase count (default 1e6)")
    s.add_argument("--oracle-variant", choices=oracle.VARIANTS, default="classic",
                   help="exact parse flavor used for the ratio (default classic)")
    s.add_argument("--report-dir",
                   help="directory for the per-level CSV and rendered figures")
    return p


def _write_atomic(path: str, data: bytes) -> None:
    # the destination either keeps its old content or gets all of the new
    dest = Path(path)
    fd, tmp = tempfile.mkstemp(dir=dest.parent or Path("."), prefix=dest.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, dest)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _run_parse(args, reader: SequentialReader):
    params = Params(
        n=reader.n,
        epsilon=args.epsilon,
        halve_epsilon=args.halve_epsilon,
        seed=args.seed,
    )
    return parse(
        reader,
        params,
        modulus=args.modulus,
        max_retries=args.max_retries,
        short_table_mem=args.short_table_mem,
    )


def _cmd_compress(args) -> int:
    config = IoConfig(block_size=args.block_size)
    with SequentialReader(Path(args.input), config) as reader:
        result, stats = _run_parse(args, reader)
    blob = codec.encode(result)
    _write_atomic(args.output, blob)
    if args.stats:
        rep = report.build_run_report(result, stats)
        _write_atomic(args.stats, (json.dumps(rep, indent=2) + "\n").encode())
    print(f"{args.input}: {stats.n} bytes -> {len(result.phrases)} phrases "
          f"({len(blob)} bytes, {stats.io.passes} passes)")
    return EX_OK


def _cmd_decompress(args) -> int:
    blob = Path(args.input).read_bytes()
    data = codec.decode(blob)
    _write_atomic(args.output, data)
    print(f"{args.input}: decoded {len(data)} bytes")
    return EX_OK


def _cmd_verify(args) -> int:
    blob = Path(args.parse).read_bytes()
    parsed = codec.decode_phrases(blob)
    with SequentialReader(Path(args.source)) as reader:
        mismatch = codec.verify(parsed, reader)
    if mismatch is None:
        print(f"{args.parse}: OK ({parsed.n} bytes, {len(parsed.phrases)} phrases)")
        return EX_OK
    print(f"{args.parse}: MISMATCH: {mismatch}", file=sys.stderr)
    return EX_DATA


def _cmd_stats(args) -> int:
    config = IoConfig(block_size=args.block_size)
    with SequentialReader(Path(args.input), config) as reader:
        result, stats = _run_parse(args, reader)
        data = reader.range_bytes(1, reader.n) if reader.n else b""
    z = None
    if len(data) <= args.oracle_limit:
        t0 = time.perf_counter()
        exact, _ = oracle.exact_lz77(data, variant=args.oracle_variant,
                                     limit=args.oracle_limit)
        z = exact.z
        oracle_ms = (time.perf_counter() - t0) * 1000.0
    rep = report.build_run_report(result, stats, z=z)
    print(json.dumps(rep, indent=2))
    if z is not None:
        print(f"exact parse: {z} phrases in {oracle_ms:.1f} ms "
              f"({args.oracle_variant})", file=sys.stderr)
    if args.report_dir:
        outdir = Path(args.report_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        report.write_levels_csv(outdir / "levels.csv", stats)
        figures = report.render_figures(outdir, stats, result)
        names = ", ".join(p.name for p in figures)
        print(f"report written to {outdir} (levels.csv, {names})", file=sys.stderr)
    return EX_OK


_COMMANDS = {
    "compress": _cmd_compress,
    "decompress": _cmd_decompress,
    "verify": _cmd_verify,
    "stats": _cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EX_USAGE
    try:
        return _COMMANDS[args.command](args)
    except VerificationError as exc:
        print(f"lzap: {exc}", file=sys.stderr)
        return EX_VERIFY
    except (DecodeError, ValueError) as exc:
        print(f"lzap: {exc}", file=sys.stderr)
        return EX_DATA
    except OSError as exc:
        print(f"lzap: {exc}", file=sys.stderr)
        return EX_DATA


def run() -> None:
    sys.exit(main(sys.argv[1:]))
