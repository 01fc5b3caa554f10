"""Numerical tolerances and budgets shared by the bound searches."""
from __future__ import annotations

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Settings:
    tol: float = 1e-9            # |ds|, |dbound| stopping rule of the refinement
    max_iterations: int = 100    # per branch
    budget: int = 10_000         # function evaluations per optimizer call
    grid_points: int = 1_000     # approximate size of the seeding grid
    scan_cells: int = 2_000      # largest_root_of scan resolution
    cert_points: int = 2_000     # sampling density for shape certification
    root_tol: float = 1e-12
    seed: int = 0

    def with_overrides(self, **kw) -> "Settings":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT = Settings()
