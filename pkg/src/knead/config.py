from dataclasses import asdict, dataclass

from .pm_domain import DEFAULT_HORIZON, DEFAULT_LAP_BUDGET


@dataclass(frozen=True)
class RunConfig:
    degree: int = 64            # truncation degree N of every series
    n_max: int = 12             # largest iterate enumerated by laps
    lap_budget: int = DEFAULT_LAP_BUDGET
    horizon: int = DEFAULT_HORIZON
    root_tolerance: float = 1e-3
    fit_tolerance: float = 5e-2
    identity_n: int = 10        # iterates checked by the count identities
    identity_degree: int = 20   # degree of the series identities
    format: str = "json"
    jobs: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("degree", "n_max", "lap_budget", "horizon", "identity_n",
                     "identity_degree", "jobs"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("root_tolerance", "fit_tolerance"):
            if not 0 < getattr(self, name) < 1:
                raise ValueError(f"{name} must lie in (0, 1)")
        if self.format not in ("json", "csv", "text"):
            raise ValueError(f"unknown format {self.format!r}")

    def as_dict(self):
        return asdict(self)
