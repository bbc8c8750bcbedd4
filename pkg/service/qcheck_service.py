import logging
import time
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import mpmath
from joblib import Parallel, delayed

from backend.settings import settings
from processing import qnum
from processing.coeffield import PochhammerPole

logger = logging.getLogger(__name__)


def parse_number(x):
    """int, float, mpf or a string such as '3/2' or '0.75' -> exact Fraction where possible."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return x


def to_mpf(x):
    x = parse_number(x)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _ctx(q=None, precision: Optional[int] = None, trunc_k: Optional[int] = None) -> qnum.QContext:
    prec = precision or settings.precision_bits
    with mpmath.workprec(prec):
        return qnum.QContext(to_mpf(q if q is not None else str(settings.default_q)), trunc_k or settings.trunc_k,
                             prec, mpmath.mpf(settings.tail_tolerance))


def _run_qbeta(p, ctx):
    return qnum.check_qbeta(to_mpf(p["alpha"]), to_mpf(p["beta"]), ctx)


def _run_ahk(p, ctx):
    return qnum.check_ahk(p["n"], p["k"], to_mpf(p["alpha"]), to_mpf(p["beta"]), ctx)


def _run_qkm(p, ctx):
    return qnum.check_qkm(p["n"], p["k"], to_mpf(p["alpha"]), to_mpf(p["beta"]), p["lambda"], ctx)


def _run_q_sl3(p, ctx):
    return qnum.check_q_sl3(p["n"], p["m"], p["k"], to_mpf(p["alpha1"]), to_mpf(p["alpha2"]), to_mpf(p["beta"]),
                            p["lambda"], p["mu"], ctx)


def _run_q_sl3_general(p, ctx):
    return qnum.check_q_sl3_general(p["n"], p["m"], p["k"], to_mpf(p["alpha1"]), to_mpf(p["alpha2"]), to_mpf(p["beta1"]),
                            p["lambda"], p["mu"], ctx)


def _run_q_sl3_readings(p, ctx):
    return qnum.adjudicate_q_sl3_general(p["n"], p["m"], p["k"], to_mpf(p["alpha1"]), to_mpf(p["alpha2"]),
                                 to_mpf(p["beta1"]), p["lambda"], p["mu"], ctx)


THEOREMS: Dict[str, Tuple[Callable, Dict[str, Any]]] = {
    "qbeta": (_run_qbeta, {"alpha": "2", "beta": "2"}),
    "ahk": (_run_ahk, {"n": 2, "k": 1, "alpha": "2", "beta": "2"}),
    "qkm": (_run_qkm, {"n": 2, "k": 1, "alpha": "2", "beta": "2", "lambda": [1]}),
    "q_sl3": (_run_q_sl3, {"n": 1, "m": 1, "k": 1, "alpha1": "2", "alpha2": "2", "beta": "2", "lambda": [1], "mu": []}),
    "q_sl3_general": (_run_q_sl3_general, {"n": 1, "m": 1, "k": 1, "alpha1": "2", "alpha2": "2", "beta1": "3/4",
                           "lambda": [], "mu": []}),
    "q_sl3_readings": (_run_q_sl3_readings, {"n": 3, "m": 1, "k": 1, "alpha1": "2", "alpha2": "2", "beta1": "3/4",
                                                 "lambda": [], "mu": []}),
}

SKIP_NOTES: Dict[Optional[str], str] = {
    None: "parameter on a pole; the identity was not evaluated at this point",
    "q_sl3_general": "integer beta1 puts poles of (q^beta1 x/y)_{-k} on the q-lattice; "
                     "the identity was not evaluated at this point",
}

_HALF_TWO = ("3/2", "2")
ACCEPTANCE_SUITE: List[Tuple[str, Dict[str, Any]]] = (
    [("qbeta", {"alpha": a, "beta": b}) for a in _HALF_TWO for b in _HALF_TWO]
    + [("ahk", {"n": n, "k": k, "alpha": a, "beta": b})
       for n, k in ((2, 1), (2, 2), (3, 1)) for a in _HALF_TWO for b in _HALF_TWO]
    + [("qkm", {"n": 2, "k": 1, "lambda": lam}) for lam in ([1, 0], [2, 1])]
    + [("q_sl3", {"n": 1, "m": 1, "k": 1, "lambda": lam, "mu": mu}) for lam, mu in (([1], []), ([1], [1]), ([2], []))]
    + [("q_sl3", {"n": 2, "m": 1, "k": 1, "lambda": lam, "mu": mu}) for lam, mu in (([1], []), ([1, 1], [1]))]
    + [("q_sl3_general", {"n": 1, "m": 1, "k": 1, "beta1": b1}) for b1 in ("1", "3/4")]
    + [("q_sl3_readings", {})]
)


def _json_safe(value):
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(value, 25)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def run_theorem(theorem: str, params: Dict[str, Any], q=None, precision: Optional[int] = None,
                trunc_k: Optional[int] = None) -> Dict[str, Any]:
    entry = THEOREMS.get(theorem)
    merged = dict(entry[1]) if entry else {}
    merged.update({k: v for k, v in params.items() if v is not None})
    report = {"id": theorem, "params": _json_safe(merged), "status": "error", "witness": None, "millis": None,
              "details": {}}
    if entry is None:
        report["details"] = {"error": "KeyError", "message": f"unknown theorem id {theorem!r}"}
        return report
    started = time.perf_counter()
    try:
        ctx = _ctx(q, precision, trunc_k)
        with mpmath.workprec(ctx.prec):
            out = entry[0](merged, ctx)
    except qnum.PoleProximity as e:
        logger.warning("qcheck %s %s skipped: %s", theorem, merged, e)
        report.update(status="skipped", details={"error": "PoleProximity", "message": str(e), "distance": e.distance,
                                                 "note": SKIP_NOTES.get(theorem, SKIP_NOTES[None])})
        return report
    except (qnum.TailBoundError, qnum.NonDecayingTail, qnum.GammaPoleError, PochhammerPole, ValueError) as e:
        logger.warning("qcheck %s %s errored: %s", theorem, merged, e)
        report.update(details={"error": type(e).__name__, "message": str(e)})
        return report
    report["millis"] = int(round(1000 * (time.perf_counter() - started)))
    run = {"q": mpmath.nstr(ctx.q, 20), "precision": ctx.prec, "K": ctx.K}
    if isinstance(out, dict):
        report.update(status=out["status"], details=_json_safe({**out, **run}))
        report["details"].pop("status", None)
        return report
    report["status"] = out.status
    report["details"] = _json_safe({"lhs": out.lhs, "rhs": out.rhs, "rel_diff": out.rel_diff,
                                    "tail_bound": out.tail_bound, **run, **out.details})
    if out.status == "fail":
        report["witness"] = _json_safe({"lhs": out.lhs, "rhs": out.rhs, "rel_diff": out.rel_diff})
    logger.info("qcheck %s -> %s", theorem, out.status)
    return report


class QCheckService:
    """Numeric q-integral identity checks at a fixed base and working precision."""

    def theorem_ids(self) -> List[str]:
        return sorted(THEOREMS)

    def run(self, theorem: str, params: Optional[Dict[str, Any]] = None, q=None, precision: Optional[int] = None,
            trunc_k: Optional[int] = None) -> Dict[str, Any]:
        return run_theorem(theorem, params or {}, q, precision, trunc_k)

    def run_suite(self, q=None, precision: Optional[int] = None, trunc_k: Optional[int] = None,
                  workers: int = 1) -> List[Dict[str, Any]]:
        logger.info("running %d q-integral checks", len(ACCEPTANCE_SUITE))
        if workers <= 1:
            return [run_theorem(t, p, q, precision, trunc_k) for t, p in ACCEPTANCE_SUITE]
        return Parallel(n_jobs=workers)(delayed(run_theorem)(t, p, q, precision, trunc_k) for t, p in ACCEPTANCE_SUITE)


# Singleton instance
qcheck_service = QCheckService()
