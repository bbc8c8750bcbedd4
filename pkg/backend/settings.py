from pathlib import Path

from pydantic import BaseSettings, validator


class Settings(BaseSettings):
    """
    Process-wide defaults. Only the cache directory and the worker count are meant to be
    overridden from the environment (MACSEL_CACHE_DIR, MACSEL_WORKERS); command-line flags win over both.
    """
    cache_dir: Path = Path(__file__).resolve().parents[1] / "data"
    workers: int = 1
    gcd_mode: str = "lazy"  # lazy | always
    cancel_threshold: int = 48  # term count that forces a gcd in lazy mode
    default_q: float = 0.5
    precision_bits: int = 256
    trunc_k: int = 120
    tail_tolerance: float = 1e-30
    mc_samples: int = 10 ** 6
    seed: int = 0

    class Config:
        env_prefix = "MACSEL_"

    @validator("gcd_mode")
    def _known_mode(cls, v):
        if v not in ("lazy", "always"):
            raise ValueError(f"gcd_mode must be 'lazy' or 'always', got {v!r}")
        return v

    @validator("workers")
    def _positive_workers(cls, v):
        if v < 1:
            raise ValueError("workers must be at least 1")
        return v


settings = Settings()
