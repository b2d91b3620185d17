"""Command line entry points: serve, analyze, synthesize, span-sample."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import analytics
from .errors import OuttransError
from .eventlog import EventLog, replay_path
from .qe import read_wmt_triplets, write_wmt_triplets


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="")


def _write_csv(rows: list[list], out_path: str | None) -> None:
    out = _open_out(out_path)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerows(rows)
    if out is not sys.stdout:
        out.close()


def _domain_order(keys) -> list[str]:
    named = sorted(k for k in keys if k != analytics.ALL_DOMAINS)
    if analytics.ALL_DOMAINS in keys:
        named.append(analytics.ALL_DOMAINS)
    return named


def _pct(value: float | None) -> str:
    return "" if value is None else f"{100.0 * value:.2f}"


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import (
        AssistService,
        RequestQueue,
        build_app,
        load_service_config,
    )

    config = load_service_config(args.config)
    event_log = EventLog(args.log)
    service = AssistService(
        registry=config.registry,
        event_log=event_log,
        baselines=config.baselines,
        qe_threshold=config.qe_threshold,
        train_iterations=config.train_iterations,
        incremental_iterations=config.incremental_iterations,
        null_prob_floor=config.null_prob_floor,
    )
    queue = RequestQueue(maxsize=config.queue_size, workers=config.workers)
    app = build_app(service, queue)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _labelled_segments(args: argparse.Namespace):
    if not args.log:
        raise OuttransError(f"analyze {args.report} requires --log")
    result = replay_path(args.log)
    for lineno, message in result.diagnostics:
        print(f"warning: log line {lineno}: {message}", file=sys.stderr)
    stimuli = analytics.load_stimuli(args.stimuli) if args.stimuli else {}
    return analytics.label_segments(result.sessions, stimuli)


def cmd_analyze(args: argparse.Namespace) -> int:
    if args.report == "segments":
        report = analytics.segment_report(_labelled_segments(args))
        rows = [
            [
                "domain",
                "segments",
                "skipped",
                "finished",
                "abandoned",
                "linear",
                "with_edits",
                "init_copy",
                "copy_submit",
            ]
        ]
        for domain in _domain_order(report):
            c = report[domain]
            rows.append(
                [
                    domain,
                    c.segments,
                    c.skipped,
                    c.finished,
                    c.abandoned,
                    c.linear,
                    c.with_edits,
                    c.init_copy,
                    c.copy_submit,
                ]
            )
        _write_csv(rows, args.out)

    elif args.report == "durations":
        report = analytics.duration_report(_labelled_segments(args))
        rows = [["domain", "segments", "avg_duration_s"]]
        for domain in _domain_order(report):
            row = report[domain]
            mean = "" if row.mean_seconds is None else round(row.mean_seconds)
            rows.append([domain, row.count, mean])
        _write_csv(rows, args.out)

    elif args.report == "similarity":
        report = analytics.similarity_report(_labelled_segments(args))
        rows = [
            [
                "domain",
                "segments",
                "input_similarity_pct",
                "translation_similarity_pct",
                "without_first_viable",
            ]
        ]
        for domain in _domain_order(report):
            row = report[domain]
            rows.append(
                [
                    domain,
                    row.count,
                    _pct(row.input_similarity),
                    _pct(row.translation_similarity),
                    row.without_first_viable,
                ]
            )
        _write_csv(rows, args.out)

    elif args.report == "ratings":
        if not args.ratings:
            print("analyze ratings requires --ratings", file=sys.stderr)
            return 2
        report = analytics.rating_report(analytics.load_ratings(args.ratings))
        rows = [["table", "domain_or_bucket", "variant", "count", "mean", "variance"]]
        domains = _domain_order({d for d, _ in report.means})
        for domain in domains:
            for variant in ("first_viable", "final"):
                stats = report.means.get((domain, variant))
                if stats:
                    rows.append(
                        [
                            "means",
                            domain,
                            variant,
                            stats.count,
                            f"{stats.mean:.2f}",
                            f"{stats.variance:.2f}",
                        ]
                    )
        for variant in sorted(report.histogram):
            for rating in range(1, 6):
                rows.append(
                    [
                        "histogram",
                        rating,
                        variant,
                        report.histogram[variant][rating],
                        "",
                        "",
                    ]
                )
        for _, _, label in analytics.LENGTH_BUCKETS:
            for variant in ("first_viable", "final"):
                stats = report.by_length.get((label, variant))
                if stats:
                    rows.append(
                        [
                            "by_length",
                            label,
                            variant,
                            stats.count,
                            f"{stats.mean:.2f}",
                            f"{stats.variance:.2f}",
                        ]
                    )
        _write_csv(rows, args.out)

    elif args.report == "ttest":
        if not args.ratings:
            print("analyze ttest requires --ratings", file=sys.stderr)
            return 2
        first, final = analytics.pair_ratings(analytics.load_ratings(args.ratings))
        result = analytics.paired_t_test(first, final)
        _write_csv(
            [
                ["pairs", "t", "dof", "p_two_sided", "zero_variance"],
                [
                    len(first),
                    f"{result.t:.6f}",
                    result.dof,
                    f"{result.p_two_sided:.6g}",
                    str(result.zero_variance).lower(),
                ],
            ],
            args.out,
        )

    elif args.report == "agreement":
        if not (args.gold and args.hyp):
            print("analyze agreement requires --gold and --hyp", file=sys.stderr)
            return 2
        gold = [line.split() for line in Path(args.gold).read_text("utf-8").splitlines()]
        hyp = [line.split() for line in Path(args.hyp).read_text("utf-8").splitlines()]
        matrix = analytics.confusion_matrix(gold, hyp)
        _write_csv(
            [
                ["tp_pct", "fp_pct", "fn_pct", "tn_pct"],
                [
                    f"{matrix.tp:.2f}",
                    f"{matrix.fp:.2f}",
                    f"{matrix.fn:.2f}",
                    f"{matrix.tn:.2f}",
                ],
            ],
            args.out,
        )
    return 0


def cmd_synthesize(args: argparse.Namespace) -> int:
    from .mt import load_registry
    from .synthesis import synthesize

    config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    registry = load_registry(config, Path(args.config).parent)
    engine = registry.get(args.engine)
    triples = read_wmt_triplets(args.src, args.mt, args.tags)
    out = synthesize(triples, engine, args.src_lang, args.tgt_lang)
    prefix = args.out_prefix
    write_wmt_triplets(out, f"{prefix}.src", f"{prefix}.mt", f"{prefix}.tags")
    print(f"wrote {len(out)} triples to {prefix}.{{src,mt,tags}}", file=sys.stderr)
    return 0


def _read_two_column_csv(path: str) -> dict[int, int]:
    table: dict[int, int] = {}
    with open(path, "r", encoding="utf-8", newline="") as f:
        for row in csv.reader(f):
            if not row or not row[0].strip():
                continue
            try:
                key, value = int(row[0]), int(row[1])
            except ValueError:
                continue  # header row
            table[key] = value
    return table


def cmd_span_sample(args: argparse.Namespace) -> int:
    from .synthesis import span_sample

    counts = _read_two_column_csv(args.inventory)
    quota = _read_two_column_csv(args.quota)
    selection = span_sample(counts, quota, args.seed)
    rows = [["bucket", "span_id"]]
    for bucket in sorted(selection):
        for span_id in selection[bucket]:
            rows.append([bucket, span_id])
    _write_csv(rows, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="outtrans", description="Outbound translation assistance toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the assist/logger HTTP service")
    serve.add_argument("--config", required=True, help="service config JSON")
    serve.add_argument("--log", required=True, help="event log JSONL path")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)

    analyze = sub.add_parser("analyze", help="reports over an event log")
    analyze.add_argument(
        "report",
        choices=["segments", "durations", "similarity", "ratings", "ttest", "agreement"],
    )
    analyze.add_argument("--log", help="event log JSONL")
    analyze.add_argument("--stimuli", help="TSV: sid, domain, text")
    analyze.add_argument(
        "--ratings", help="CSV: sid, domain, variant, rating, source_length"
    )
    analyze.add_argument("--gold", help="gold .tags file (agreement)")
    analyze.add_argument("--hyp", help="hypothesis .tags file (agreement)")
    analyze.add_argument("--out", help="output CSV path (default stdout)")
    analyze.set_defaults(func=cmd_analyze)

    synth = sub.add_parser("synthesize", help="rewrite triplet sources through MT")
    synth.add_argument("--src", required=True)
    synth.add_argument("--mt", required=True)
    synth.add_argument("--tags", required=True)
    synth.add_argument("--engine", required=True, help="engine id from --config")
    synth.add_argument("--config", required=True, help="engine registry JSON")
    synth.add_argument("--out-prefix", required=True)
    synth.add_argument("--src-lang")
    synth.add_argument("--tgt-lang")
    synth.set_defaults(func=cmd_synthesize)

    sample = sub.add_parser("span-sample", help="quota sampling of spans per bucket")
    sample.add_argument("--inventory", required=True, help="CSV: bucket, count")
    sample.add_argument("--quota", required=True, help="CSV: bucket, n")
    sample.add_argument("--seed", type=int, required=True)
    sample.add_argument("--out", help="output CSV path (default stdout)")
    sample.set_defaults(func=cmd_span_sample)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OuttransError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
