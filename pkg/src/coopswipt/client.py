"""Thin HTTP client used by the CLI's --server mode."""

import httpx

from .config import SimConfig
from .engine import ReportRow, ThroughputReport
from .errors import ConfigError, NumericalError
from .schemas import ConfigModel, ReportRowModel
from .validate import CheckResult, ValidationReport

_TIMEOUT = httpx.Timeout(10.0, read=3600.0)  # sweeps can run for minutes


def _raise_for_status(response: httpx.Response) -> None:
    if response.status_code == 422:
        raise ConfigError(response.json().get("detail", response.text))
    if response.status_code >= 500:
        raise NumericalError(response.json().get("detail", response.text))
    response.raise_for_status()


def _config_payload(cfg: SimConfig) -> dict:
    return ConfigModel.from_sim_config(cfg).model_dump(exclude_none=True)


def remote_simulate(base_url: str, cfg: SimConfig) -> ReportRow:
    response = httpx.post(f"{base_url}/simulate", json=_config_payload(cfg), timeout=_TIMEOUT)
    _raise_for_status(response)
    return ReportRowModel(**response.json()).to_row()


def remote_sweep(base_url: str, cfg: SimConfig, grid, schemes, workers: int) -> ThroughputReport:
    payload = {
        "config": _config_payload(cfg),
        "alpha_grid": list(grid),
        "schemes": list(schemes),
        "workers": workers,
    }
    response = httpx.post(f"{base_url}/sweep", json=payload, timeout=_TIMEOUT)
    _raise_for_status(response)
    rows = [ReportRowModel(**r).to_row() for r in response.json()["rows"]]
    return ThroughputReport(rows)


def remote_validate(base_url: str, cfg: SimConfig) -> ValidationReport:
    response = httpx.post(f"{base_url}/validate", json=_config_payload(cfg), timeout=_TIMEOUT)
    _raise_for_status(response)
    body = response.json()
    return ValidationReport([CheckResult(**c) for c in body["checks"]])
