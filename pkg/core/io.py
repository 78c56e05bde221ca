# core/io.py
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .constants import (
    DEFAULT_BATCH_SIZE,
    DEFAULT_COPIES,
    DEFAULT_WORK_LIMIT,
    THREADS_ENV,
    WORK_LIMIT_ENV,
)
from .errors import PreconditionError

# ---- Helpers ---------------------------------------------------------------

def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw.replace("_", "").strip())
    except ValueError:
        raise PreconditionError(f"{name} must be an integer, got {raw!r}") from None

def _section(cfg: dict, name: str) -> dict:
    return dict(cfg.get(name) or {})

# ---- Public API ------------------------------------------------------------

def load_config(path="config.yaml") -> dict:
    if not os.path.exists(path):
        return {}
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}

@dataclass(frozen=True)
class Settings:
    work_limit: int = DEFAULT_WORK_LIMIT
    threads: int = 0                      # 0 = all cores
    reduction_copies: int = DEFAULT_COPIES
    batch_size: int = DEFAULT_BATCH_SIZE
    checks: dict = field(default_factory=dict)
    report: dict = field(default_factory=dict)

    @property
    def worker_threads(self) -> int:
        return self.threads or (os.cpu_count() or 1)

    def check_param(self, check: str, key: str, default, quick: bool = False):
        if quick:
            q = (self.checks.get("quick") or {}).get(check) or {}
            if key in q:
                return q[key]
        return (self.checks.get(check) or {}).get(key, default)

def load_settings(path=None, work_limit: int | None = None, threads: int | None = None) -> Settings:
    """
    Settings with precedence: built-in constants < config.yaml < environment < explicit arguments.
    - path None: config.yaml next to the package root, then the working directory.
    """
    if path is None:
        here = Path(__file__).resolve().parent.parent / "config.yaml"
        path = here if here.exists() else "config.yaml"
    cfg = load_config(path)
    D = _section(cfg, "defaults")

    wl = int(D.get("work_limit", DEFAULT_WORK_LIMIT))
    th = int(D.get("threads", 0))
    wl = _env_int(WORK_LIMIT_ENV) if _env_int(WORK_LIMIT_ENV) is not None else wl
    th = _env_int(THREADS_ENV) if _env_int(THREADS_ENV) is not None else th
    if work_limit is not None:
        wl = int(work_limit)
    if threads is not None:
        th = int(threads)
    if wl < 1:
        raise PreconditionError(f"work limit must be positive, got {wl}")
    if th < 0:
        raise PreconditionError(f"threads must be >= 0, got {th}")

    return Settings(
        work_limit=wl,
        threads=th,
        reduction_copies=int(D.get("reduction_copies", DEFAULT_COPIES)),
        batch_size=int(D.get("batch_size", DEFAULT_BATCH_SIZE)),
        checks=_section(cfg, "checks"),
        report=_section(cfg, "report"),
    )
