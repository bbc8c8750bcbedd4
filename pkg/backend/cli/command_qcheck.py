from backend.cli.options import add_run_options, emit, partition_arg, workers_of
from backend.models.reports import RunConfig
from backend.settings import settings
from service.qcheck_service import THEOREMS, qcheck_service

INT_FLAGS = ("n", "m", "k")
NUMBER_FLAGS = ("alpha", "beta", "alpha1", "alpha2", "beta1")


def register(subparsers):
    p = subparsers.add_parser("qcheck", help="numeric q-integral identities at fixed q and precision")
    p.add_argument("theorem", nargs="?", choices=sorted(THEOREMS), default=None)
    p.add_argument("--suite", choices=("acceptance",), default=None)
    for flag in INT_FLAGS:
        p.add_argument(f"--{flag}", type=int, default=None)
    for flag in NUMBER_FLAGS:
        p.add_argument(f"--{flag}", default=None, help="rational such as 3/2 or a decimal")
    p.add_argument("--lambda", dest="lam", type=partition_arg, default=None)
    p.add_argument("--mu", type=partition_arg, default=None)
    p.add_argument("--q", default=None, help=f"base, default {settings.default_q}")
    p.add_argument("--precision", type=int, default=None, help="working precision in bits")
    p.add_argument("--trunc-k", type=int, default=None, help="lattice truncation order K")
    add_run_options(p)
    p.set_defaults(handler=handle)


def handle(args) -> int:
    workers = workers_of(args)
    q = args.q if args.q is not None else str(settings.default_q)
    precision = args.precision or settings.precision_bits
    trunc_k = args.trunc_k or settings.trunc_k
    if args.suite == "acceptance" or args.theorem is None:
        reports = qcheck_service.run_suite(q, precision, trunc_k, workers)
    else:
        params = {flag: getattr(args, flag) for flag in INT_FLAGS + NUMBER_FLAGS}
        params["lambda"], params["mu"] = args.lam, args.mu
        reports = [qcheck_service.run(args.theorem, params, q, precision, trunc_k)]
    config = RunConfig(subcommand="qcheck", q=q, precision=precision, trunc_k=trunc_k, workers=workers,
                       timings=args.timings)
    return emit(config, reports, args.out)
