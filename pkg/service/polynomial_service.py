import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from backend.models.db import get_conn, init_db
from backend.settings import settings
from processing.coeffield import RatFunc, configure_gcd
from processing.jack import jack_P, normalized_jack
from processing.partitions import Partition, as_partition, enumerate_partitions
from processing.symfunc import (
    CoefficientStore, SymSeries, clear_memo, macdonald_P, macdonald_Q, normalized_P, normalized_Q,
    normalized_tilde, set_store,
)
from processing.verifier import InfeasibleSize

logger = logging.getLogger(__name__)

BASES = ("P", "Q", "normalized_P", "normalized_Q", "tilde", "jack", "normalized_jack")
# Largest weight a single rendering request is allowed to build
MAX_POLY_WEIGHT = 8


class SqliteCoefficientStore(CoefficientStore):
    """Coefficient cache backed by the polynomials table; unreadable rows are deleted and rebuilt."""

    def __init__(self, cache_dir: Optional[Path] = None):
        self.cache_dir = cache_dir

    def load(self, family: str, lam: Partition) -> Optional[Dict[Partition, RatFunc]]:
        conn = get_conn(self.cache_dir)
        try:
            row = conn.execute(
                "SELECT payload FROM polynomials WHERE family = ? AND partition = ?",
                (family, json.dumps(list(lam))),
            ).fetchone()
            if row is None:
                logger.debug("cache miss for %s %s", family, list(lam))
                return None
            try:
                payload = json.loads(row["payload"])
                return {Partition(json.loads(k)): RatFunc.parse(v) for k, v in payload.items()}
            except Exception as e:
                logger.warning("Corrupt cache record for %s %s (%s), recomputing.", family, list(lam), e)
                conn.execute("DELETE FROM polynomials WHERE family = ? AND partition = ?",
                             (family, json.dumps(list(lam))))
                conn.commit()
                return None
        finally:
            conn.close()

    def save(self, family: str, lam: Partition, coeffs: Dict[Partition, RatFunc]):
        names = sorted({name for c in coeffs.values() for name in c.names})
        payload = {json.dumps(list(nu)): c.to_string() for nu, c in sorted(coeffs.items())}
        conn = get_conn(self.cache_dir)
        try:
            conn.execute(
                """
                INSERT OR IGNORE INTO polynomials (family, partition, n, indeterminates, payload, created_at)
                VALUES (?, ?, NULL, ?, ?, ?)
                """,
                (family, json.dumps(list(lam)), ",".join(names), json.dumps(payload, sort_keys=True),
                 datetime.now(timezone.utc).isoformat()),
            )
            conn.commit()
        finally:
            conn.close()


class PolynomialService:
    """
    Builds and renders Macdonald and Jack polynomials, and owns the persistent coefficient cache.
    """

    def __init__(self):
        self.cache_dir: Optional[Path] = None
        self.attached = False

    def attach(self, cache_dir: Optional[Path] = None, use_cache: bool = True):
        """Point the coefficient memo at the sqlite cache (or detach it)."""
        configure_gcd(settings.gcd_mode, settings.cancel_threshold)
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        if use_cache:
            init_db(self.cache_dir)
            set_store(SqliteCoefficientStore(self.cache_dir))
        else:
            set_store(None)
        clear_memo()
        self.attached = True

    def ensure_attached(self):
        if not self.attached:
            self.attach(self.cache_dir)

    def build(self, lam, n: int, basis: str = "P") -> SymSeries:
        lam = as_partition(lam)
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}; choose from {', '.join(BASES)}")
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        if lam.weight > MAX_POLY_WEIGHT:
            raise InfeasibleSize(f"|lambda| = {lam.weight} exceeds the feasible weight {MAX_POLY_WEIGHT}")
        self.ensure_attached()
        if basis == "jack":
            return jack_P(lam, n).series if lam.length <= n else SymSeries({}, n)
        if basis == "normalized_jack":
            return normalized_jack(lam, n).series if lam.length <= n else SymSeries({}, n)
        if basis == "tilde":
            return normalized_tilde(lam, n) if lam.length <= n else SymSeries({}, n)
        builders = {"P": macdonald_P, "Q": macdonald_Q, "normalized_P": normalized_P, "normalized_Q": normalized_Q}
        return builders[basis](lam, n)

    @staticmethod
    def render_text(f: SymSeries) -> str:
        """Canonical string: terms in reverse-lexicographic order of the monomial index."""
        if f.is_zero():
            return "0"
        out = []
        for nu in sorted(f.coeffs, reverse=True):
            c = f.coeffs[nu].normalize()
            m = "m[" + ",".join(map(str, nu)) + "]"
            out.append(m if c == RatFunc.coerce(1) else f"({c.to_string()})*{m}")
        return " + ".join(out)

    def render(self, lam, n: int, basis: str = "P", fmt: str = "text") -> Any:
        f = self.build(lam, n, basis)
        if fmt == "text":
            return self.render_text(f)
        if fmt == "json":
            return {
                "partition": list(as_partition(lam)),
                "n": n,
                "basis": basis,
                "terms": [{"m": list(nu), "coefficient": f.coeffs[nu].to_string()}
                          for nu in sorted(f.coeffs, reverse=True)],
            }
        raise ValueError(f"unknown format {fmt!r}")

    # ----- cache management -----
    def list_records(self) -> Dict[str, Any]:
        init_db(self.cache_dir)
        conn = get_conn(self.cache_dir)
        try:
            rows = conn.execute("SELECT family, COUNT(*) AS c FROM polynomials GROUP BY family ORDER BY family").fetchall()
            version = conn.execute("SELECT value FROM cache_meta WHERE key = 'schema_version'").fetchone()
        finally:
            conn.close()
        families = {r["family"]: r["c"] for r in rows}
        return {"records": sum(families.values()), "families": families,
                "schema_version": version["value"] if version else None}

    def clear(self) -> int:
        init_db(self.cache_dir)
        conn = get_conn(self.cache_dir)
        try:
            deleted = conn.execute("DELETE FROM polynomials").rowcount
            conn.commit()
        finally:
            conn.close()
        clear_memo()
        logger.info("cleared %d cached polynomials", deleted)
        return deleted

    def warm(self, wmax: int, n: int, families: List[str] = ("macdonald",)) -> Dict[str, Any]:
        """Precompute every P_lambda with |lambda| <= wmax and l(lambda) <= n; idempotent."""
        if wmax > MAX_POLY_WEIGHT:
            raise InfeasibleSize(f"wmax = {wmax} exceeds the feasible weight {MAX_POLY_WEIGHT}")
        self.ensure_attached()
        built = 0
        for lam in enumerate_partitions(wmax, n, wmax):
            for family in families:
                if family == "macdonald":
                    macdonald_P(lam, n)
                elif family == "jack":
                    jack_P(lam, n)
                else:
                    raise ValueError(f"unknown family {family!r}")
                built += 1
        logger.info("cache warm: %d polynomials up to weight %d in %d variables", built, wmax, n)
        return {"warmed": built, **self.list_records()}


# Singleton instance
polynomial_service = PolynomialService()
