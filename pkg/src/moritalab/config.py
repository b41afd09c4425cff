"""Run settings shared by the CLI, the scripts and the test suite."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .numlin import DEFAULT_TOL
from .paragroup import AMBIENT_CAP, DEPTH_CAP
from .report import CHECK_TOL


@dataclass(frozen=True)
class RunConfig:
    check_tol: float = CHECK_TOL  # threshold on reported violations
    rank_tol: float = DEFAULT_TOL  # relative singular-value cutoff
    seed: int = 0
    depth: int = 2
    depth_cap: int = DEPTH_CAP
    ambient_cap: int = AMBIENT_CAP
    samples: int = 20
    filter: Optional[str] = None  # substring or glob selecting check names

    def with_overrides(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})
