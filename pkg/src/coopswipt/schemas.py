"""Pydantic request/response models for the HTTP service."""

from pydantic import BaseModel, ConfigDict

from .config import SimConfig, build_config
from .engine import ReportRow


class ConfigModel(BaseModel):
    """Simulation parameters; omitted fields take the package defaults."""

    model_config = ConfigDict(extra="forbid")

    n_secondary: int | None = None
    slots: int | None = None
    slot_seconds: float | None = None
    bandwidth_hz: float | None = None
    eta: float | None = None
    kappa: float | None = None
    p_s: float | None = None
    p_c: float | None = None
    e_p: float | None = None
    k_r: int | None = None
    k_beam: int | None = None
    alpha: float | None = None
    scheme: str | None = None
    seed: int | None = None
    e_p_is_per_hz: bool | None = None
    paper_literal_interference: bool | None = None
    paper_literal_r: bool | None = None
    paper_literal_rate: bool | None = None
    omp_raw_correlation: bool | None = None

    def to_sim_config(self) -> SimConfig:
        return build_config(self.model_dump(exclude_none=True))

    @classmethod
    def from_sim_config(cls, cfg: SimConfig) -> "ConfigModel":
        return cls(
            n_secondary=cfg.n_secondary,
            slots=cfg.slots,
            slot_seconds=cfg.slot_seconds,
            bandwidth_hz=cfg.bandwidth_hz,
            eta=cfg.eta,
            kappa=cfg.kappa,
            p_s=cfg.p_s,
            p_c=cfg.p_c,
            e_p=cfg.e_p,
            k_r=cfg.k_r,
            k_beam=cfg.k_beam,
            alpha=cfg.alpha,
            scheme=cfg.scheme,
            seed=cfg.seed,
            e_p_is_per_hz=cfg.e_p_is_per_hz,
            paper_literal_interference=cfg.paper_literal_interference,
            paper_literal_r=cfg.paper_literal_r,
            paper_literal_rate=cfg.paper_literal_rate,
            omp_raw_correlation=cfg.omp_raw_correlation,
        )


class ReportRowModel(BaseModel):
    alpha: float
    scheme: str
    primary_rate_mean: float
    primary_rate_ci95: float
    secondary_sum_rate_mean: float
    secondary_sum_rate_ci95: float
    e_h1_mean: float
    e_h2_mean: float
    p_p_mean: float
    pt_alone_rate_mean: float

    @classmethod
    def from_row(cls, row: ReportRow) -> "ReportRowModel":
        return cls(**row.__dict__)

    def to_row(self) -> ReportRow:
        return ReportRow(**self.model_dump())


class SweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: ConfigModel = ConfigModel()
    alpha_grid: list[float] | None = None
    schemes: list[str] | None = None
    workers: int = 1


class SweepResponse(BaseModel):
    rows: list[ReportRowModel]


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str
    expected_divergent: bool = False


class ValidateResponse(BaseModel):
    passed: bool
    checks: list[CheckModel]


class HealthResponse(BaseModel):
    status: str
    version: str
