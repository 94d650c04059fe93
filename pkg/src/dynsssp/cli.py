"""Command-line harness.

    dynsssp run --input <file> --engine <e> --workers <n> --window <W>
                --delta <d> --query-interval <k> --source <id|auto:rank>
                --seed <s> --out <dir> [--validate]

Exit codes: 0 success, 1 usage or stream-format errors, 2 validation failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .harness import RunConfig, RunReport, ValidationFailure, run
from .types import StreamConsistencyError, StreamFormatError


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the harness reserves 2 for
    # validation failures.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dynsssp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="stream a graph through an engine and measure it")
    p.add_argument("--input", required=True, help="edge log or materialized stream file")
    p.add_argument("--engine", choices=("sssp-del", "baseline"), default="sssp-del")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--window", type=float, default=None,
                   help="sliding-window span W in timestamp units (edge logs only)")
    p.add_argument("--delta", type=float, default=0.0,
                   help="deletion probability for aged-out edges (edge logs only)")
    p.add_argument("--query-interval", type=int, default=None,
                   help="inject a query marker every K events")
    p.add_argument("--source", default="auto:1",
                   help="source vertex id, or auto:<rank> for the rank-th "
                        "vertex by inbound PageRank")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory for the CSVs")
    p.add_argument("--validate", action="store_true",
                   help="check every snapshot against a Dijkstra oracle")
    p.add_argument("--watchdog", type=float, default=60.0,
                   help="epoch watchdog timeout in seconds")
    return parser


def _summarize(report: RunReport) -> None:
    print(f"engine={report.engine} source={report.source} "
          f"events={report.events_total} queries={len(report.queries)} "
          f"wall={report.wall_time_s:.2f}s")
    lat = report.latency_percentiles_ms()
    if lat:
        print(f"query latency ms: p25={lat[0]:.3f} median={lat[1]:.3f} p75={lat[2]:.3f}")
    thr = report.throughput_percentiles()
    if thr:
        print(f"throughput events/s: p25={thr[0]:.0f} median={thr[1]:.0f} p75={thr[2]:.0f}")
    if report.validated:
        print(f"validated {report.validated} snapshots against the oracle")
    for name, path in report.out_files.items():
        print(f"wrote {name}: {path}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        input=args.input,
        engine=args.engine,
        workers=args.workers,
        window=args.window,
        delta=args.delta,
        query_interval=args.query_interval,
        source=args.source,
        seed=args.seed,
        out_dir=args.out,
        validate=args.validate,
        watchdog=args.watchdog,
    )
    try:
        report = run(cfg)
    except ValidationFailure as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return 2
    except (StreamFormatError, StreamConsistencyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _summarize(report)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
