"""FastAPI application: one POST endpoint per pipeline."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import handlers, schemas


def create_app() -> FastAPI:
    app = FastAPI(
        title="mcf",
        description=(
            "Exact Jacobi-Perron multidimensional continued fractions: expansions, "
            "convergents, periodicity/recurrence verification in both directions, "
            "and the periodic ternary representation of cubic irrationals."
        ),
        version="0.1.0",
    )

    def run(handler, request):
        try:
            return handler(request)
        except ArithmeticError as exc:
            # internal consistency violation, e.g. cycle matrices disagreeing
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/expand", response_model=schemas.ExpansionReportModel)
    def expand(request: schemas.ExpandRequest):
        return run(handlers.expand, request)

    @app.post("/convergents", response_model=schemas.TableDumpModel)
    def convergent_table(request: schemas.ConvergentsRequest):
        return run(handlers.convergent_table, request)

    @app.post("/verify/forward", response_model=schemas.ForwardReportModel)
    def verify_forward(request: schemas.VerifyForwardRequest):
        return run(handlers.verify_forward, request)

    @app.post("/verify/forward/batch", response_model=schemas.ForwardBatchReportModel)
    def verify_forward_batch(request: schemas.VerifyForwardBatchRequest):
        return run(handlers.verify_forward_batch, request)

    @app.post("/verify/converse", response_model=schemas.ConverseReportModel)
    def verify_converse(request: schemas.VerifyConverseRequest):
        return run(handlers.verify_converse, request)

    @app.post("/cubic", response_model=schemas.CubicReportModel)
    def cubic(request: schemas.CubicRequest):
        return run(handlers.cubic, request)

    @app.post("/lrs/fit", response_model=schemas.LrsFitReportModel)
    def lrs_fit(request: schemas.LrsFitRequest):
        return run(handlers.lrs_fit, request)

    return app


app = create_app()
