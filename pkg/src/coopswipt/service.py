"""HTTP service wrapping the simulator.

POST /simulate runs one (alpha, scheme) cell, POST /sweep a full grid with
the PT-alone baseline rows, POST /validate the reduced-scale check suite.
GET /defaults returns the fully populated default configuration. Responses
carry the same numbers the library produces in-process.
"""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .config import SimConfig
from .engine import run_simulation, sweep
from .errors import ConfigError, NumericalError
from .schemas import (
    CheckModel,
    ConfigModel,
    HealthResponse,
    ReportRowModel,
    SweepRequest,
    SweepResponse,
    ValidateResponse,
)
from .validate import run_validate


def create_app() -> FastAPI:
    app = FastAPI(title="coopswipt", version=__version__)

    @app.exception_handler(ConfigError)
    async def _config_error(request: Request, exc: ConfigError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(NumericalError)
    async def _numerical_error(request: Request, exc: NumericalError):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.get("/defaults", response_model=ConfigModel)
    def defaults():
        return ConfigModel.from_sim_config(SimConfig())

    @app.post("/simulate", response_model=ReportRowModel)
    def simulate(config: ConfigModel):
        row = run_simulation(config.to_sim_config()).to_row()
        return ReportRowModel.from_row(row)

    @app.post("/sweep", response_model=SweepResponse)
    def run_sweep(request: SweepRequest):
        report = sweep(
            request.config.to_sim_config(),
            request.alpha_grid,
            request.schemes,
            workers=request.workers,
        )
        return SweepResponse(rows=[ReportRowModel.from_row(r) for r in report.rows])

    @app.post("/validate", response_model=ValidateResponse)
    def validate(config: ConfigModel):
        result = run_validate(config.to_sim_config())
        return ValidateResponse(
            passed=result.passed,
            checks=[CheckModel(**c.__dict__) for c in result.checks],
        )

    return app


app = create_app()
