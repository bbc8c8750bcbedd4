from pathlib import Path

from backend.cli.options import add_run_options, emit, partition_arg, workers_of
from backend.models.reports import RunConfig
from backend.settings import settings
from service.selberg_service import CHECKS, selberg_service

INT_FLAGS = ("k1", "k2", "i", "j")
FLOAT_FLAGS = ("alpha1", "alpha2", "beta1", "beta2", "gamma", "x", "y")


def register(subparsers):
    p = subparsers.add_parser("selberg", help="real sl3 Selberg integrals over weighted chains")
    p.add_argument("check", nargs="?", choices=CHECKS, default="chain_integral")
    p.add_argument("--suite", choices=("acceptance",), default=None)
    for flag in INT_FLAGS:
        p.add_argument(f"--{flag}", type=int, default=None)
    for flag in FLOAT_FLAGS:
        p.add_argument(f"--{flag}", default=None)
    p.add_argument("--lambda", dest="lam", type=partition_arg, default=None)
    p.add_argument("--mu", type=partition_arg, default=None)
    p.add_argument("--method", choices=("mc", "quad"), default="mc")
    p.add_argument("--samples", type=int, default=None, help=f"MC samples per domain (default {settings.mc_samples})")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--csv", type=Path, default=None, help="per-domain breakdown of a chain integral")
    add_run_options(p)
    p.set_defaults(handler=handle)


def handle(args) -> int:
    workers = workers_of(args)
    seed = settings.seed if args.seed is None else args.seed
    if args.suite == "acceptance":
        reports = selberg_service.run_suite(args.method, args.samples, seed, workers)
    else:
        params = {flag: getattr(args, flag) for flag in INT_FLAGS + FLOAT_FLAGS}
        params["lambda"], params["mu"] = args.lam, args.mu
        reports = [selberg_service.run(args.check, params, args.method, args.samples, seed, workers, args.csv)]
    config = RunConfig(subcommand="selberg", seed=seed, samples=args.samples or settings.mc_samples,
                       method=args.method, workers=workers, timings=args.timings)
    return emit(config, reports, args.out)
