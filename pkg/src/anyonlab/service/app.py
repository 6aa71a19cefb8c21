"""FastAPI application wrapping the simulation handlers."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import NumericalError
from . import handlers
from . import schemas as sc


def create_app() -> FastAPI:
    app = FastAPI(
        title="anyonlab",
        version=__version__,
        description=(
            "Numerical laboratory for Majorana braiding, magic-state protocols, "
            "and small-lattice anyon models."
        ),
    )

    def guarded(fn, req):
        try:
            return fn(req)
        except NumericalError as exc:
            raise HTTPException(status_code=500, detail=f"numerical failure: {exc}") from exc
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.get("/health", response_model=sc.HealthResponse)
    def health() -> sc.HealthResponse:
        return sc.HealthResponse(status="ok", version=__version__)

    @app.post("/phase-scan", response_model=sc.PhaseScanResponse)
    def phase_scan(req: sc.PhaseScanRequest) -> sc.PhaseScanResponse:
        return guarded(handlers.run_phase_scan, req)

    @app.post("/spectrum", response_model=sc.SpectrumResponse)
    def spectrum(req: sc.SpectrumRequest) -> sc.SpectrumResponse:
        return guarded(handlers.run_spectrum, req)

    @app.post("/ed-verify", response_model=sc.EdVerifyResponse)
    def ed_verify(req: sc.EdVerifyRequest) -> sc.EdVerifyResponse:
        return guarded(handlers.run_ed_verify, req)

    @app.post("/braid-run", response_model=sc.BraidRunResponse)
    def braid_run(req: sc.BraidRunRequest) -> sc.BraidRunResponse:
        return guarded(handlers.run_braid, req)

    @app.post("/protocol", response_model=sc.ProtocolResponse)
    def protocol(req: sc.ProtocolRequest) -> sc.ProtocolResponse:
        return guarded(handlers.run_protocol, req)

    @app.post("/toric-braid", response_model=sc.ToricBraidResponse)
    def toric_braid(req: sc.ToricBraidRequest) -> sc.ToricBraidResponse:
        return guarded(handlers.run_toric_braid, req)

    return app


app = create_app()
