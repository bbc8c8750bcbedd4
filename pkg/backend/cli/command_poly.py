import json
import logging
import sys

from backend.cli.options import partition_arg
from processing.coeffield import PolynomialZeroDivision
from service.polynomial_service import BASES, polynomial_service

logger = logging.getLogger(__name__)


def register(subparsers):
    p = subparsers.add_parser("poly", help="print a Macdonald or Jack polynomial in the monomial basis")
    p.add_argument("--lambda", dest="lam", type=partition_arg, required=True, help="partition, e.g. 2,1")
    p.add_argument("--n", type=int, required=True, help="number of variables")
    p.add_argument("--basis", choices=BASES, default="P")
    p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--no-cache", action="store_true", help="do not read or write the sqlite cache")
    p.set_defaults(handler=handle)


def handle(args) -> int:
    polynomial_service.attach(args.cache_dir, use_cache=not args.no_cache)
    try:
        rendered = polynomial_service.render(args.lam, args.n, args.basis, args.fmt)
    except (PolynomialZeroDivision, ValueError) as e:  # InfeasibleSize and PartitionError included
        logger.error("poly %s n=%d failed: %s", args.lam, args.n, e)
        sys.stderr.write(json.dumps({"error": type(e).__name__, "message": str(e)}) + "\n")
        return 2
    if args.fmt == "json":
        sys.stdout.write(json.dumps(rendered, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(rendered + "\n")
    return 0
