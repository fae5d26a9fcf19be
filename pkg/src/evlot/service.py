"""HTTP prediction service backing the layout studio.

POST /api/predict takes {"grid": ["DRP...", ...]} in layout-file
characters and returns per-EVSE predictions in physical units plus a
reachability flag. GET /api/health reports model metadata.
"""

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .features import door_distance_map, extract_features
from .grid import LayoutError, parse_layout, reachable_evses
from .mlp import MlpModel, load_model, predict_stats


class PredictRequest(BaseModel):
    grid: list[str]


class EvsePrediction(BaseModel):
    row: int
    col: int
    tau_kw: float
    p_tot_kwh: float
    reachable: bool


class PredictResponse(BaseModel):
    model_id: int
    m: int
    evses: list[EvsePrediction]


def predict_layout(model: MlpModel, layout) -> list:
    """Shared inference path for the service and the CLI `predict` command."""
    reachable = reachable_evses(layout)
    dmap = door_distance_map(layout) if model.features.include_door_distance else None
    out = []
    for r, c in layout.evse_cells():
        vec = extract_features(layout, (r, c), model.features, distance_map=dmap)
        tau, p_tot = predict_stats(model, vec)
        out.append(EvsePrediction(row=r, col=c, tau_kw=float(tau),
                                  p_tot_kwh=float(p_tot), reachable=(r, c) in reachable))
    return out


def create_app(model_path=None) -> FastAPI:
    app = FastAPI(title="EVSE usage predictor")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    app.state.model = load_model(model_path) if model_path else None

    @app.get("/api/health")
    def health():
        model = app.state.model
        if model is None:
            raise HTTPException(status_code=503, detail="model not loaded")
        return {"status": "ok", "model_id": model.config.model_id, "m": model.features.m}

    @app.post("/api/predict", response_model=PredictResponse)
    def predict(request: PredictRequest):
        model = app.state.model
        if model is None:
            raise HTTPException(status_code=503, detail="model not loaded")
        try:
            layout = parse_layout("\n".join(request.grid) + "\n")
        except LayoutError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        try:
            evses = predict_layout(model, layout)
        except ValueError as exc:
            raise HTTPException(status_code=500, detail=str(exc))
        return PredictResponse(model_id=model.config.model_id, m=model.features.m, evses=evses)

    return app
