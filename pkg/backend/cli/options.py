import argparse
import sys
from pathlib import Path
from typing import List, Optional

from backend.models.reports import ReportBundle, RunConfig
from backend.settings import settings


def partition_arg(text: str) -> List[int]:
    """'2,1' -> [2, 1]; '' or '0' -> []."""
    text = text.strip().strip("()[]")
    if not text:
        return []
    try:
        parts = [int(p) for p in text.replace(" ", "").split(",") if p != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")
    while parts and parts[-1] == 0:
        parts.pop()
    return parts


def add_run_options(parser: argparse.ArgumentParser):
    parser.add_argument("--out", type=Path, default=None, help="write the JSON report here instead of stdout")
    parser.add_argument("--cache-dir", type=Path, default=None, help=f"cache directory (default {settings.cache_dir})")
    parser.add_argument("--workers", type=int, default=None, help="worker processes (default MACSEL_WORKERS or 1)")
    parser.add_argument("--timings", action="store_true", help="record wall-clock millis in each report")


def workers_of(args) -> int:
    return args.workers if args.workers is not None else settings.workers


def emit(config: RunConfig, reports, out: Optional[Path]) -> int:
    """Serialize the bundle; exit code 1 iff any report failed or errored."""
    bundle = ReportBundle.build(config, reports)
    text = bundle.to_json()
    if out is None:
        sys.stdout.write(text + "\n")
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n", encoding="utf-8")
    return 1 if bundle.failed else 0
