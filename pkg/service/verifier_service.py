import logging
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

from joblib import Parallel, delayed

from processing.coeffield import PochhammerPole, PolynomialZeroDivision
from processing.qnum import PoleProximity
from processing import verifier as v
from service.polynomial_service import polynomial_service

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CaseSpec:
    fn: Callable[..., v.ComparisonResult]
    params: Tuple[str, ...]  # keyword names in call order
    defaults: Dict[str, int]
    title: str


CASES: Dict[str, CaseSpec] = {
    "qbt": CaseSpec(v.verify_qbt, ("n", "D"), {"n": 2, "D": 4}, "q-binomial theorem for Macdonald polynomials"),
    "eval_symmetry": CaseSpec(v.verify_eval_symmetry, ("n", "wmax"), {"n": 3, "wmax": 3}, "evaluation symmetry"),
    "gen_eval_I": CaseSpec(v.verify_gen_eval_I, ("n", "wmax"), {"n": 2, "wmax": 3}, "generalized evaluation symmetry I"),
    "gen_eval_II": CaseSpec(v.verify_gen_eval_II, ("n", "wmax"), {"n": 2, "wmax": 3}, "generalized evaluation symmetry II"),
    "phi": CaseSpec(v.verify_phi_transformation, ("n", "m", "D"), {"n": 1, "m": 1, "D": 4}, "Phi transformation"),
    "heine": CaseSpec(v.verify_heine, ("D",), {"D": 6}, "Heine transformation"),
    "skew_cauchy": CaseSpec(v.verify_skew_cauchy, ("n", "D", "mumax"), {"n": 2, "D": 3, "mumax": 2}, "skew Cauchy identity"),
    "skew_binomial": CaseSpec(v.verify_skew_binomial, ("n", "wmax"), {"n": 2, "wmax": 3}, "skew P at the (1-a)/(1-t) alphabet"),
    "skew_factorization": CaseSpec(v.verify_skew_factorization, ("n", "wmax"), {"n": 2, "wmax": 3}, "a = 1 skew factorization"),
    "pieri": CaseSpec(v.verify_pieri_lemma, ("n", "mumax", "D"), {"n": 2, "mumax": 2, "D": 3}, "skew Pieri-type lemma"),
    "double_qbt": CaseSpec(v.verify_double_qbt, ("n", "m", "D"), {"n": 1, "m": 1, "D": 4}, "Cauchy-type double q-binomial identity"),
    "kawanaka": CaseSpec(v.verify_kawanaka_specialization, ("n", "m", "D"), {"n": 1, "m": 1, "D": 4}, "Kawanaka specialization"),
    "double_qbt_symmetry": CaseSpec(v.verify_double_qbt_symmetry, ("n", "m", "D"), {"n": 1, "m": 1, "D": 3}, "n <-> m symmetry"),
    "bilateral": CaseSpec(v.verify_bilateral, ("n", "m", "D", "r"), {"n": 1, "m": 1, "D": 3, "r": 2}, "bilateral generalization"),
    "bilateral_reduction": CaseSpec(v.verify_bilateral_reduction, ("n", "m", "D", "r"), {"n": 1, "m": 1, "D": 3, "r": 2},
                                "ab = q reduction of the bilateral sum"),
    "complement": CaseSpec(v.verify_complement_relations, ("N", "n"), {"N": 2, "n": 2}, "complementation relations"),
    "bfq": CaseSpec(v.verify_bfq, ("wmax",), {"wmax": 3}, "(b)_nu sum against the skew Q plethysm"),
    "coproduct": CaseSpec(v.verify_coproduct, ("lmax", "n1", "n2"), {"lmax": 3, "n1": 1, "n2": 1}, "coproduct on split alphabets"),
    "pq_intermediate": CaseSpec(v.verify_pq_intermediate, ("n", "wmax"), {"n": 1, "wmax": 2}, "b-deformed skew identity"),
    "principal_formula": CaseSpec(v.verify_principal_formula, ("n", "wmax"), {"n": 3, "wmax": 4}, "principal specialization"),
    "bla": CaseSpec(v.verify_bla, ("wmax",), {"wmax": 3}, "(a)_lambda as a Q plethysm"),
}

# The documented acceptance matrix for the exact suite, plus the supplementary relations.
ACCEPTANCE_SUITE: List[Tuple[str, Dict[str, int]]] = (
    [("double_qbt", {"n": n, "m": m, "D": D}) for n, m, D in ((1, 1, 4), (2, 1, 3), (2, 2, 3))]
    + [("qbt", {"n": n, "D": D}) for n, D in ((1, 5), (2, 4), (3, 3))]
    + [("eval_symmetry", {"n": n, "wmax": 3}) for n in (1, 2, 3)]
    + [("gen_eval_I", {"n": n, "wmax": 3}) for n in (1, 2)]
    + [("gen_eval_II", {"n": n, "wmax": 3}) for n in (1, 2)]
    + [("phi", {"n": n, "m": m, "D": D}) for n, m, D in ((1, 1, 4), (2, 1, 3))]
    + [("skew_binomial", {"n": n, "wmax": 3}) for n in (1, 2)]
    + [("pieri", {"n": 2, "mumax": 2, "D": 3})]
    + [("skew_cauchy", {"n": 2, "D": 3, "mumax": 2})]
    + [("bilateral", {"n": 1, "m": 1, "D": 3, "r": 2})]
    + [("kawanaka", {"n": 1, "m": 1, "D": 4})]
    + [("complement", {"N": 2, "n": 2})]
    + [("heine", {"D": 6}), ("skew_factorization", {"n": 2, "wmax": 3}), ("double_qbt_symmetry", {"n": 1, "m": 1, "D": 3}),
       ("bfq", {"wmax": 3}), ("coproduct", {"lmax": 3, "n1": 1, "n2": 1}), ("pq_intermediate", {"n": 1, "wmax": 2}),
       ("principal_formula", {"n": 3, "wmax": 4}), ("bla", {"wmax": 3})]
)


def _error_report(case_id: str, params: Dict[str, Any], status: str, e: Exception) -> Dict[str, Any]:
    return {"id": case_id, "params": params, "status": status, "witness": None, "millis": None,
            "details": {"error": type(e).__name__, "message": str(e)}}


def run_case(case_id: str, params: Dict[str, Any], cache_dir=None) -> Dict[str, Any]:
    """Run one exact case; domain errors become error/skipped reports instead of escaping."""
    spec = CASES.get(case_id)
    if spec is None:
        return _error_report(case_id, params, "error", KeyError(f"unknown case id {case_id!r}"))
    merged = {**spec.defaults, **{k: val for k, val in params.items() if val is not None and k in spec.params}}
    if not polynomial_service.attached:
        polynomial_service.attach(cache_dir)
    started = time.perf_counter()
    try:
        result = spec.fn(**{k: merged[k] for k in spec.params})
    except PoleProximity as e:
        logger.warning("case %s %s skipped: %s", case_id, merged, e)
        return _error_report(case_id, merged, "skipped", e)
    except (v.InfeasibleSize, PochhammerPole, PolynomialZeroDivision, ValueError, ArithmeticError) as e:
        logger.warning("case %s %s errored: %s", case_id, merged, e)
        return _error_report(case_id, merged, "error", e)
    millis = int(round(1000 * (time.perf_counter() - started)))
    logger.info("case %s %s -> %s (%d coefficients)", case_id, merged, result.status, result.checked)
    return {
        "id": case_id,
        "params": merged,
        "status": result.status,
        "witness": result.witness,
        "millis": millis,
        "details": {"checked": result.checked, **result.details},
    }


class VerifierService:
    """
    Runs the exact identity checks, one job per case, and returns plain report dicts.
    """

    def case_ids(self) -> List[str]:
        return sorted(CASES)

    def describe(self) -> List[Dict[str, Any]]:
        return [{"id": cid, "title": CASES[cid].title, "params": list(CASES[cid].params),
                 "defaults": CASES[cid].defaults} for cid in self.case_ids()]

    def run(self, case_id: str, params: Optional[Dict[str, Any]] = None, cache_dir=None) -> Dict[str, Any]:
        return run_case(case_id, params or {}, cache_dir)

    def run_many(self, jobs: List[Tuple[str, Dict[str, Any]]], workers: int = 1, cache_dir=None) -> List[Dict[str, Any]]:
        if workers <= 1:
            return [run_case(cid, p, cache_dir) for cid, p in jobs]
        return Parallel(n_jobs=workers)(delayed(run_case)(cid, p, cache_dir) for cid, p in jobs)

    def run_suite(self, suite: str = "acceptance", workers: int = 1, cache_dir=None) -> List[Dict[str, Any]]:
        if suite == "acceptance":
            jobs = ACCEPTANCE_SUITE
        elif suite == "defaults":
            jobs = [(cid, dict(CASES[cid].defaults)) for cid in self.case_ids()]
        else:
            raise ValueError(f"unknown suite {suite!r}")
        logger.info("running %d verification cases with %d worker(s)", len(jobs), workers)
        return self.run_many(list(jobs), workers, cache_dir)


# Singleton instance
verifier_service = VerifierService()
