"""`bench` command line: run one cell, run a grid, or re-emit reports.

Configs are JSON documents mirroring ExperimentConfig; dataset paths fall
back to the WNNREC_* environment variables. Exits 0 on success, 2 on any
failure with a one-line cause on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import ExperimentConfig, emit_report, rows_from_json, rows_to_json, run_experiment, run_suite


def _load_config(path: str) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _write_rows(rows, out: str | None) -> None:
    if out:
        Path(out).write_text(rows_to_json(rows) + "\n", encoding="utf-8")
    for r in rows:
        print(
            f"{r.model:9s} R={r.reviews_per_user:<4d} macro={r.macro_accuracy:.4f} "
            f"micro={r.micro_accuracy:.4f} (+-0.5: {r.macro_accuracy_tol05:.4f}) "
            f"train={r.train_time_s:.2f}s predict={r.predict_time_s:.2f}s "
            f"users={r.n_users_effective}"
        )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="bench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a single benchmark cell")
    p_run.add_argument("--config", required=True, help="JSON config file")
    p_run.add_argument("--out", help="write result rows as JSON")

    p_suite = sub.add_parser("suite", help="run the full model x R grid")
    p_suite.add_argument("--config", required=True, help="JSON grid config file")
    p_suite.add_argument("--out", help="write result rows as JSON")

    p_report = sub.add_parser("report", help="re-emit saved rows as csv/json/md")
    p_report.add_argument("--rows", default="bench_rows.json", help="rows JSON from run/suite")
    p_report.add_argument("--format", required=True, choices=["csv", "json", "md"])
    p_report.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            cfg = ExperimentConfig.from_dict(_load_config(args.config))
            _write_rows([run_experiment(cfg)], args.out)
        elif args.command == "suite":
            _write_rows(run_suite(_load_config(args.config)), args.out)
        else:
            rows = rows_from_json(Path(args.rows).read_text(encoding="utf-8"))
            emit_report(rows, args.format, args.out)
            print(f"wrote {args.format} report to {args.out}")
    except Exception as e:
        print(f"bench: error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
