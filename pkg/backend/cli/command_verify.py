from backend.cli.options import add_run_options, emit, workers_of
from backend.models.reports import RunConfig
from service.polynomial_service import polynomial_service
from service.verifier_service import CASES, verifier_service

# flag name -> keyword of the case functions
SIZE_FLAGS = {"n": "n", "m": "m", "deg": "D", "wmax": "wmax", "r": "r", "mumax": "mumax", "N": "N",
              "lmax": "lmax", "n1": "n1", "n2": "n2"}


def register(subparsers):
    p = subparsers.add_parser("verify", help="run exact identity checks over Q(q,t,...)")
    p.add_argument("case", nargs="?", choices=sorted(CASES) + ["all"], default=None,
                   help="case id, or 'all' for every case at its default size")
    p.add_argument("--suite", choices=("acceptance", "defaults"), default=None)
    for flag in SIZE_FLAGS:
        p.add_argument(f"--{flag}", type=int, default=None)
    p.add_argument("--no-cache", action="store_true")
    add_run_options(p)
    p.set_defaults(handler=handle)


def handle(args) -> int:
    workers = workers_of(args)
    polynomial_service.attach(args.cache_dir, use_cache=not args.no_cache)
    if args.suite is not None:
        reports = verifier_service.run_suite(args.suite, workers, args.cache_dir)
    elif args.case in (None, "all"):
        reports = verifier_service.run_suite("defaults", workers, args.cache_dir)
    else:
        params = {kw: getattr(args, flag) for flag, kw in SIZE_FLAGS.items() if getattr(args, flag) is not None}
        reports = [verifier_service.run(args.case, params, args.cache_dir)]
    config = RunConfig(subcommand="verify", workers=workers, timings=args.timings)
    return emit(config, reports, args.out)
