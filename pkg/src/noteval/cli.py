"""Administrative command line: serve the API/UI, ingest corpora, export
results, print statistics, describe the rubric.

Exit codes: 0 success, 1 unexpected failure, 2 validation or user error.
Every flag can also be supplied through an environment variable of the
same name (NOTEVAL_DATA_DIR, NOTEVAL_PORT, NOTEVAL_UI_DIR, NOTEVAL_HOST).
"""

from __future__ import annotations

import argparse
import os
import socket
import sys
from pathlib import Path

from . import analytics
from .api import DEFAULT_PORT, create_app
from .engine import SessionError
from .ingestion import IngestError, parse_documents_csv, validate_dataset
from .rubric import (
    LIKERT_ANCHOR_HIGH,
    LIKERT_ANCHOR_LOW,
    LIKERT_MAX,
    LIKERT_MIN,
    rubric,
)
from .storage import EvaluationStore, StorageError


def _add_data_dir(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--data-dir",
        default=os.environ.get("NOTEVAL_DATA_DIR"),
        required="NOTEVAL_DATA_DIR" not in os.environ,
        help="directory holding the CSV store (env: NOTEVAL_DATA_DIR)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noteval",
        description="Blinded human evaluation of clinical notes on the PDQI-9 rubric.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP service until interrupted")
    _add_data_dir(p_serve)
    p_serve.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get("NOTEVAL_PORT", DEFAULT_PORT)),
        help=f"TCP port to bind (default {DEFAULT_PORT}; env: NOTEVAL_PORT)",
    )
    p_serve.add_argument(
        "--host",
        default=os.environ.get("NOTEVAL_HOST", "127.0.0.1"),
        help="interface to bind (default 127.0.0.1; env: NOTEVAL_HOST)",
    )
    p_serve.add_argument(
        "--ui-dir",
        default=os.environ.get("NOTEVAL_UI_DIR"),
        help="directory with the built browser UI to serve at / (env: NOTEVAL_UI_DIR)",
    )
    p_serve.set_defaults(func=cmd_serve)

    p_ingest = sub.add_parser("ingest", help="parse and store a note-corpus CSV")
    p_ingest.add_argument("file", help="CSV file with filename, description, mrn, note columns")
    _add_data_dir(p_ingest)
    p_ingest.set_defaults(func=cmd_ingest)

    p_export = sub.add_parser("export", help="write the results export CSV")
    _add_data_dir(p_export)
    p_export.add_argument("--out", required=True, help="output CSV path")
    p_export.set_defaults(func=cmd_export)

    p_stats = sub.add_parser("stats", help="print summary statistics")
    _add_data_dir(p_stats)
    p_stats.add_argument(
        "--by-origin",
        action="store_true",
        help="include per-origin totals and group comparison tests",
    )
    p_stats.add_argument(
        "--kappa",
        action="store_true",
        help="include the inter-rater agreement section",
    )
    p_stats.add_argument(
        "--csv",
        metavar="PATH",
        help="also write the summary as a flat CSV to PATH",
    )
    p_stats.set_defaults(func=cmd_stats)

    p_rubric = sub.add_parser("describe-rubric", help="print the nine rubric criteria")
    p_rubric.set_defaults(func=cmd_describe_rubric)

    return parser


def cmd_serve(args) -> int:
    store = EvaluationStore(args.data_dir)
    if args.ui_dir is not None and not Path(args.ui_dir).is_dir():
        print(f"error: UI directory {args.ui_dir} does not exist", file=sys.stderr)
        return 2
    app = create_app(store, ui_dir=args.ui_dir)

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((args.host, args.port))
    except OSError as exc:
        sock.close()
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 2
    host, port = sock.getsockname()[:2]
    print(f"noteval listening on http://{host}:{port}/ (data dir: {store.data_dir})", flush=True)

    import uvicorn

    config = uvicorn.Config(app, host=args.host, port=args.port, log_level="warning")
    server = uvicorn.Server(config)
    server.run(sockets=[sock])
    return 0


def cmd_ingest(args) -> int:
    store = EvaluationStore(args.data_dir)
    path = Path(args.file)
    if not path.is_file():
        print(f"error: no such file: {path}", file=sys.stderr)
        return 2
    dataset = parse_documents_csv(path.read_bytes())
    store.save_dataset(dataset)
    print(f"dataset {dataset.dataset_id}: {len(dataset.documents)} documents")
    for warning in dataset.warnings:
        print(f"warning: {warning}")
    report = validate_dataset(dataset)
    for issue in report.issues:
        print(f"warning: {issue.filename}: {issue.message}")
    if report.issues:
        counts = ", ".join(f"{n} {sev}(s)" for sev, n in sorted(report.counts.items()))
        print(f"validation: {counts}")
    return 0


def cmd_export(args) -> int:
    store = EvaluationStore(args.data_dir)
    data = store.export_results_csv()
    out = Path(args.out)
    out.write_bytes(data)
    count = max(0, data.count(b"\r\n") - 1)
    print(f"wrote {count} evaluation(s) to {out}")
    return 0


def cmd_stats(args) -> int:
    store = EvaluationStore(args.data_dir)
    report = analytics.summary_report(store.load_all())
    _print_stats(report, by_origin=args.by_origin, kappa=args.kappa)
    if args.csv:
        Path(args.csv).write_bytes(analytics.summary_flat_csv(report))
        print(f"\nwrote summary CSV to {args.csv}")
    return 0


def _fmt(value, digits=4) -> str:
    return "-" if value is None else f"{value:.{digits}f}"


def _print_stats(report: analytics.SummaryReport, by_origin: bool, kappa: bool):
    if report.evaluation_count == 0:
        print("no evaluations")
    print(
        f"evaluations: {report.evaluation_count}   "
        f"evaluators: {report.evaluator_count}   "
        f"documents: {report.document_count}"
    )
    print("\ncriterion scores (1-5):")
    for index, summary in enumerate(report.criteria, start=1):
        print(
            f"  {index}. {summary.key:<22} n={summary.n:<4} "
            f"mean={_fmt(summary.mean, 2):<6} sd={_fmt(summary.sd)}"
        )
    overall = report.totals_overall
    print(
        f"\ntotal score (9-45): n={overall.n} "
        f"mean={_fmt(overall.mean, 2)} sd={_fmt(overall.sd)}"
    )

    if by_origin:
        print("\ntotals by assessed origin:")
        for label in ("human", "ai", "unsure"):
            stats_ = report.totals_by_origin[label]
            print(
                f"  {label:<7} n={stats_.n:<4} "
                f"mean={_fmt(stats_.mean, 2):<6} sd={_fmt(stats_.sd)}"
            )
        if report.welch is not None:
            w = report.welch
            print(
                f"Welch t-test (human vs ai): t={w.t:.4f} df={w.df:.2f} p={w.p:.4f}"
            )
        else:
            print("Welch t-test (human vs ai): not available (need >= 2 totals per group)")
        if report.anova is not None:
            a = report.anova
            print(
                f"one-way ANOVA (human/ai/unsure): F={a.f:.4f} "
                f"df=({a.df1}, {a.df2}) p={a.p:.4f}"
            )
        else:
            print("one-way ANOVA (human/ai/unsure): not available (need >= 2 totals per group)")

    if kappa:
        print("\ninter-rater agreement (quadratic-weighted kappa):")
        if report.agreement is None:
            print("  insufficient raters (need >= 2 evaluators sharing >= 2 documents)")
        else:
            print(f"  rater pairs: {report.agreement.pair_count}")
            for key, value in report.agreement.per_criterion.items():
                print(f"  {key:<22} {_fmt(value)}")


def cmd_describe_rubric(args) -> int:
    print(
        f"PDQI-9 rubric: nine criteria, each scored "
        f"{LIKERT_MIN} ({LIKERT_ANCHOR_LOW}) to {LIKERT_MAX} ({LIKERT_ANCHOR_HIGH})."
    )
    print()
    for criterion in rubric():
        label = criterion.display_label
        if criterion.alt_label:
            label += f" (also shown as: {criterion.alt_label})"
        print(f"{criterion.ordinal}. {criterion.key:<22} {label}")
        print(f"   {criterion.description}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (IngestError, SessionError, StorageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"unexpected failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
