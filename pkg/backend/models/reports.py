import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, validator

REPORT_SCHEMA = "macsel-report/1"
STATUSES = ("pass", "fail", "error", "skipped")


class RunConfig(BaseModel):
    """Every parameter that influences a run's numbers; embedded in the report bundle."""
    subcommand: str
    q: Optional[str] = None  # decimal string of the base for numeric runs
    precision: Optional[int] = None  # bits
    trunc_k: Optional[int] = None
    seed: Optional[int] = None
    samples: Optional[int] = None
    method: Optional[str] = None
    workers: int = 1
    timings: bool = False


class VerificationReport(BaseModel):
    """
    One case outcome. status is pass, fail, error or skipped; witness holds the first
    failing index with both sides; millis stays null unless timings were requested.
    """
    id: str
    params: Dict[str, Any]
    status: str
    witness: Optional[Dict[str, Any]] = None
    millis: Optional[int] = None
    details: Dict[str, Any] = {}

    @validator("status")
    def _known_status(cls, v):
        if v not in STATUSES:
            raise ValueError(f"unknown status {v!r}")
        return v


class ReportBundle(BaseModel):
    schema_id: str = Field(REPORT_SCHEMA, alias="schema")
    config: RunConfig
    reports: List[VerificationReport]
    summary: Dict[str, int] = {}

    class Config:
        allow_population_by_field_name = True

    @classmethod
    def build(cls, config: RunConfig, reports: List[Dict[str, Any]]) -> "ReportBundle":
        items = [VerificationReport(**r) for r in reports]
        if not config.timings:
            for item in items:
                item.millis = None
        summary = {s: sum(1 for r in items if r.status == s) for s in STATUSES}
        return cls(schema=REPORT_SCHEMA, config=config, reports=items, summary=summary)

    @property
    def failed(self) -> bool:
        return any(r.status in ("fail", "error") for r in self.reports)

    def to_json(self) -> str:
        return json.dumps(self.dict(by_alias=True), sort_keys=True, indent=2, default=str)
