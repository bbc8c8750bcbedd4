import json
import logging
import sqlite3
import sys

from service.polynomial_service import polynomial_service

logger = logging.getLogger(__name__)


def register(subparsers):
    p = subparsers.add_parser("cache", help="inspect, clear or warm the polynomial cache")
    p.add_argument("action", choices=("list", "clear", "warm"))
    p.add_argument("--wmax", type=int, default=4)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--families", default="macdonald", help="comma separated: macdonald,jack")
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(handler=handle)


def handle(args) -> int:
    polynomial_service.attach(args.cache_dir)
    try:
        if args.action == "list":
            status = polynomial_service.list_records()
        elif args.action == "clear":
            status = {"deleted": polynomial_service.clear(), **polynomial_service.list_records()}
        else:
            families = [f.strip() for f in args.families.split(",") if f.strip()]
            status = polynomial_service.warm(args.wmax, args.n, families)
    except (sqlite3.Error, OSError, ValueError) as e:
        logger.error("cache %s failed: %s", args.action, e)
        sys.stderr.write(json.dumps({"error": type(e).__name__, "message": str(e)}) + "\n")
        return 2
    sys.stdout.write(json.dumps(status, sort_keys=True, indent=2) + "\n")
    return 0
