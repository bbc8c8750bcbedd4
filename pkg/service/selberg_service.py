import logging
import time
from math import comb
from typing import Any, Dict, List, Optional, Tuple

import mpmath

from backend.settings import settings
from processing import selberg as s
from processing.chains import (
    ChainConditionError, chain_b_form, chain_tv, compare_chains, drop_vanishing, enumerate_chain,
)
from processing.qnum import GammaPoleError
from service.qcheck_service import parse_number

logger = logging.getLogger(__name__)

CHECKS = ("chain_integral", "classical", "tv_overlap", "cc_symmetry", "sin_limit", "chain_cardinality", "chain_b_form",
          "chain_tv", "seed_agreement")

DEFAULTS: Dict[str, Any] = {
    "k1": 1, "k2": 1, "alpha1": 2.0, "alpha2": 2.0, "beta1": 0.7, "gamma": 0.2, "lambda": [], "mu": [],
    "i": 1, "j": 1, "x": 0.7, "y": 0.4,
}

# The gamma grid on which the chain weights are known to behave
GAMMA_GRID = (0.1, 0.15, 0.2, 0.25)
SUITE_SAMPLES = 10 ** 7

ACCEPTANCE_SUITE: List[Tuple[str, Dict[str, Any]]] = (
    [("classical", {"k2": 2, "alpha2": 2.0, "beta2": 2.0, "gamma": 0.5, "method": "quad"})]
    + [("chain_integral", {"k1": 1, "k2": 1, "beta1": 1.0, "gamma": 0.25}),
       ("chain_integral", {"k1": 1, "k2": 1, "beta1": 0.7, "gamma": 0.2}),
       ("chain_integral", {"k1": 1, "k2": 2, "beta1": 0.6, "gamma": 0.15}),
       ("chain_integral", {"k1": 1, "k2": 1, "beta1": 0.7, "gamma": 0.2, "lambda": [1]}),
       ("seed_agreement", {"k1": 1, "k2": 1, "beta1": 0.7, "gamma": 0.2})]
    + [(check, {"k1": k1, "k2": k2, "beta1": 0.6, "gamma": g})
       for check in ("chain_cardinality", "chain_b_form", "cc_symmetry")
       for k1, k2 in ((1, 1), (1, 2), (2, 1), (2, 2)) for g in GAMMA_GRID]
    + [("chain_tv", {"k1": k1, "k2": k2, "gamma": g}) for k1, k2 in ((1, 1), (1, 2), (2, 2)) for g in GAMMA_GRID]
    + [("tv_overlap", {"k1": k1, "k2": k2, "gamma": 0.25}) for k1, k2 in ((1, 1), (1, 2))]
    + [("sin_limit", {"beta1": 0.6, "gamma": 0.2, "k1": 1, "k2": 2, "i": 1, "j": j, "x": x, "y": y})
       for j in (1, 2) for x, y in ((0.7, 0.4), (0.3, 0.6))]
)


def resolve_params(params: Dict[str, Any]) -> Dict[str, Any]:
    """Merge with defaults; beta2 given alone fixes beta1 through beta1 + beta2 = gamma + 1."""
    out = dict(DEFAULTS)
    out.update({k: v for k, v in params.items() if v is not None})
    for key in ("alpha1", "alpha2", "beta1", "beta2", "gamma", "x", "y"):
        if key in out:
            out[key] = float(parse_number(out[key]))
    if params.get("beta2") is not None and params.get("beta1") is None:
        out["beta1"] = out["gamma"] + 1 - out["beta2"]
    out["beta2"] = out["gamma"] + 1 - out["beta1"]
    out["lambda"] = list(out["lambda"] or [])
    out["mu"] = list(out["mu"] or [])
    return out


def _budget(method: str, samples: Optional[int]) -> s.IntegrationBudget:
    return s.IntegrationBudget(samples=int(samples or settings.mc_samples))


def _chain_report(status: str, **details) -> Dict[str, Any]:
    return {"status": status, **details}


def _cardinality(p) -> Dict[str, Any]:
    domains = enumerate_chain(p["k1"], p["k2"], p["beta1"], p["gamma"])
    expected = comb(p["k1"] + p["k2"], p["k1"])
    with mpmath.workdps(40):
        weights = [mpmath.nstr(d.weight, 20) for d in domains]
    return _chain_report("pass" if len(domains) == expected else "fail", domains=len(domains), expected=expected,
                         weights=dict(zip((d.label() for d in domains), weights)))


def _b_form(p) -> Dict[str, Any]:
    result = compare_chains(enumerate_chain(p["k1"], p["k2"], p["beta1"], p["gamma"]),
                            chain_b_form(p["k1"], p["k2"], p["beta1"], p["gamma"]))
    return _chain_report("pass" if result["match"] else "fail", **result)


def _tv(p) -> Dict[str, Any]:
    result = compare_chains(drop_vanishing(enumerate_chain(p["k1"], p["k2"], 1, p["gamma"])),
                            chain_tv(p["k1"], p["k2"], p["gamma"]))
    return _chain_report("pass" if result["match"] else "fail", **result)


class SelbergService:
    """
    Real sl3 Selberg checks: weighted chain integrals against closed forms, plus the exact chain identities.
    """

    def __init__(self):
        self.last_report: Optional[s.SelbergReport] = None

    def _dispatch(self, check: str, p: Dict[str, Any], method: str, samples: Optional[int], seed: int,
                  workers: int):
        if check == "chain_integral":
            return s.check_chain_integral(p["k1"], p["k2"], p["alpha1"], p["alpha2"], p["beta1"], p["gamma"], p["lambda"],
                                 p["mu"], method, _budget(method, samples), seed, workers)
        if check == "classical":
            return s.check_classical_selberg(p["k2"], p["alpha2"], p["beta2"], p["gamma"], method,
                                             _budget(method, samples), seed, workers)
        if check == "seed_agreement":
            return self.seed_agreement(p, samples, seed, workers)
        if check == "tv_overlap":
            return s.check_tv_overlap(p["k1"], p["k2"], p["alpha1"], p["alpha2"], p["gamma"])
        if check == "cc_symmetry":
            return s.check_cc_symmetry(p["k1"], p["k2"], p["beta1"], p["gamma"])
        if check == "sin_limit":
            return s.check_sin_limit(p["beta1"], p["gamma"], p["k1"], p["k2"], p["i"], p["j"], p["x"], p["y"])
        if check == "chain_cardinality":
            return _cardinality(p)
        if check == "chain_b_form":
            return _b_form(p)
        if check == "chain_tv":
            return _tv(p)
        raise ValueError(f"unknown selberg check {check!r}; choose from {', '.join(CHECKS)}")

    def seed_agreement(self, p: Dict[str, Any], samples: Optional[int], seed: int, workers: int) -> Dict[str, Any]:
        """Two independent MC estimates of the same chain integral must agree within 3 combined errors."""
        runs = [s.check_chain_integral(p["k1"], p["k2"], p["alpha1"], p["alpha2"], p["beta1"], p["gamma"], p["lambda"],
                              p["mu"], "mc", _budget("mc", samples), sd, workers) for sd in (seed, seed + 1)]
        diff = abs(runs[0].lhs - runs[1].lhs)
        allowed = s.SAFETY_FACTOR * float((runs[0].lhs_error ** 2 + runs[1].lhs_error ** 2) ** 0.5)
        return {"status": "pass" if diff <= allowed else "fail", "seeds": [seed, seed + 1],
                "estimates": [r.lhs for r in runs], "errors": [r.lhs_error for r in runs], "diff": diff,
                "allowed": allowed}

    def run(self, check: str, params: Optional[Dict[str, Any]] = None, method: str = "mc",
            samples: Optional[int] = None, seed: Optional[int] = None, workers: int = 1,
            csv_path=None) -> Dict[str, Any]:
        seed = settings.seed if seed is None else seed
        try:
            p = resolve_params(params or {})
        except (ValueError, ZeroDivisionError) as e:
            return {"id": check, "params": params or {}, "status": "error", "witness": None, "millis": None,
                    "details": {"error": type(e).__name__, "message": str(e)}}
        method = p.pop("method", method)
        report = {"id": check, "params": p, "status": "error", "witness": None, "millis": None,
                  "details": {"method": method, "seed": seed}}
        started = time.perf_counter()
        try:
            out = self._dispatch(check, p, method, samples, seed, workers)
        except (s.BudgetExceeded, ChainConditionError, GammaPoleError, ValueError, ArithmeticError) as e:
            logger.warning("selberg %s %s errored: %s", check, p, e)
            report["details"].update(error=type(e).__name__, message=str(e))
            return report
        report["millis"] = int(round(1000 * (time.perf_counter() - started)))
        if isinstance(out, s.SelbergReport):
            self.last_report = out
            body = out.as_dict()
            report["status"] = body.pop("status")
            report["details"] = body
            if out.status == "fail":
                report["witness"] = {"lhs": out.lhs, "rhs": out.rhs, "lhs_error": out.lhs_error,
                                     "rel_diff": out.rel_diff}
            if csv_path is not None:
                s.export_breakdown_csv(out, csv_path)
        else:
            report["status"] = out.pop("status")
            report["details"] = {**out, "method": method, "seed": seed}
            if report["status"] == "fail":
                report["witness"] = out.get("witness") or out.get("mismatch")
        logger.info("selberg %s -> %s", check, report["status"])
        return report

    def run_suite(self, method: str = "mc", samples: Optional[int] = None, seed: Optional[int] = None,
                  workers: int = 1) -> List[Dict[str, Any]]:
        logger.info("running %d selberg checks with %d worker(s)", len(ACCEPTANCE_SUITE), workers)
        return [self.run(check, params, method, samples or SUITE_SAMPLES, seed, workers)
                for check, params in ACCEPTANCE_SUITE]


# Singleton instance
selberg_service = SelbergService()
