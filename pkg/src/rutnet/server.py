"""Read-only HTTP service over one loaded model artifact.

Endpoints (JSON request/response bodies):

    GET  /api/model                 schema, layer dims, ranges, provenance
    POST /api/predict/curve         {mix, temp_c, grid?} -> curve + warnings
    POST /api/sweep                 {mix, temp_c, factor, values} -> curves
    POST /api/psd                   {mix, temp_c, fracture_energy, thresholds?}

Malformed bodies get 400 with per-field messages; domain errors (invalid
grade, unknown factor, missing threshold) get 422; anything unexpected gets
an opaque 500. No request mutates server state, so concurrent calls are
safe. With a ui directory configured, everything outside /api/ is served as
static files for the companion browser tool.
"""

from __future__ import annotations

import json
import logging
import math
import mimetypes
import os
from dataclasses import asdict
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .artifact import ModelArtifact
from .errors import RutnetError
from .mixture import CATEGORY_CODES, DEFAULT_RANGES, MixtureDesign, parse_grade, validate
from .predict import (
    DEFAULT_RUT_THRESHOLD_MM,
    PredictedCurve,
    predict_curve,
    psd_point,
    sensitivity_sweep,
)

log = logging.getLogger("rutnet.server")

MIX_NUMBER_FIELDS = (
    "htpg_c",
    "ltpg_c",
    "ac_pct",
    "nmas_mm",
    "rap_pct",
    "ras_pct",
    "crc_pct",
)
MIX_STRING_FIELDS = ("mix_type", "gradation", "agg_type")


class _ApiError(Exception):
    def __init__(self, status: int, payload: dict):
        super().__init__(str(payload))
        self.status = status
        self.payload = payload


def _bad_request(errors: dict) -> _ApiError:
    return _ApiError(400, {"errors": errors})


def _is_number(value) -> bool:
    # bool is an int subclass; NaN/inf can sneak through python's json parser
    return (
        isinstance(value, (int, float))
        and not isinstance(value, bool)
        and math.isfinite(value)
    )


def _build_mix(obj, errors: dict, prefix: str = "mix") -> MixtureDesign | None:
    if obj is None:
        obj = {}
    if not isinstance(obj, dict):
        errors[prefix] = "must be an object"
        return None
    kwargs = {}
    for name in MIX_NUMBER_FIELDS:
        if name in obj:
            if not _is_number(obj[name]):
                errors[f"{prefix}.{name}"] = "must be a number"
            else:
                kwargs[name] = float(obj[name])
    for name in MIX_STRING_FIELDS:
        if name in obj:
            if not isinstance(obj[name], str):
                errors[f"{prefix}.{name}"] = "must be a string"
            else:
                kwargs[name] = obj[name]
    unknown = set(obj) - set(MIX_NUMBER_FIELDS) - set(MIX_STRING_FIELDS)
    for name in sorted(unknown):
        errors[f"{prefix}.{name}"] = "unknown field"
    if errors:
        return None
    return MixtureDesign(**kwargs)


def _require_temp(body: dict, errors: dict) -> float:
    if "temp_c" not in body:
        errors["temp_c"] = "required"
        return 0.0
    if not _is_number(body["temp_c"]):
        errors["temp_c"] = "must be a number"
        return 0.0
    return float(body["temp_c"])


def _warnings(mix: MixtureDesign, temp_c: float) -> list[str]:
    return [v.describe() for v in validate(mix, temp_c)]


def _curve_json(curve: PredictedCurve) -> dict:
    return curve.as_dict()


class RutnetHandler(BaseHTTPRequestHandler):
    server_version = "rutnet"
    artifact: ModelArtifact = None
    ui_dir: str | None = None
    fe_threshold_default: float | None = None

    # ---- plumbing -------------------------------------------------------
    def log_message(self, fmt, *args):
        log.info("%s %s", self.address_string(), fmt % args)

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            body = json.loads(raw.decode("utf-8") or "null")
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise _bad_request({"body": f"not valid JSON: {exc}"}) from None
        if not isinstance(body, dict):
            raise _bad_request({"body": "must be a JSON object"})
        return body

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    # ---- GET ------------------------------------------------------------
    def do_GET(self):
        try:
            if self.path.split("?")[0] == "/api/model":
                self._send_json(200, self._model_info())
            elif self.path.startswith("/api/"):
                self._send_json(404, {"error": "NotFound", "message": self.path})
            else:
                self._serve_static()
        except Exception:
            log.exception("GET %s failed", self.path)
            self._send_json(500, {"error": "Internal"})

    def _model_info(self) -> dict:
        art = self.artifact
        return {
            "format_version": art.format_version,
            "layer_dims": list(art.network.layer_dims),
            "activations": list(art.network.activations),
            "features": {
                "names": list(art.feature_names),
                "categories": CATEGORY_CODES,
                "ranges": {k: list(v) for k, v in DEFAULT_RANGES.bounds.items()},
            },
            "thresholds": {
                "rut_mm": DEFAULT_RUT_THRESHOLD_MM,
                "fracture_energy": self.fe_threshold_default,
            },
            "provenance": art.provenance,
        }

    def _serve_static(self):
        if self.ui_dir is None:
            self._send_json(404, {"error": "NotFound", "message": "no UI configured"})
            return
        rel = self.path.split("?")[0].lstrip("/") or "index.html"
        root = os.path.realpath(self.ui_dir)
        full = os.path.realpath(os.path.join(root, rel))
        if not full.startswith(root + os.sep) and full != root:
            self._send_json(404, {"error": "NotFound"})
            return
        if os.path.isdir(full):
            full = os.path.join(full, "index.html")
        if not os.path.isfile(full):
            self._send_json(404, {"error": "NotFound", "message": rel})
            return
        ctype = mimetypes.guess_type(full)[0] or "application/octet-stream"
        with open(full, "rb") as fh:
            data = fh.read()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    # ---- POST -----------------------------------------------------------
    def do_POST(self):
        route = {
            "/api/predict/curve": self._post_curve,
            "/api/sweep": self._post_sweep,
            "/api/psd": self._post_psd,
        }.get(self.path.split("?")[0])
        if route is None:
            self._send_json(404, {"error": "NotFound", "message": self.path})
            return
        try:
            body = self._read_body()
            self._send_json(200, route(body))
        except _ApiError as exc:
            self._send_json(exc.status, exc.payload)
        except RutnetError as exc:
            self._send_json(422, {"error": exc.code, "message": str(exc)})
        except Exception:
            log.exception("POST %s failed", self.path)
            self._send_json(500, {"error": "Internal"})

    def _post_curve(self, body: dict) -> dict:
        errors: dict = {}
        mix = _build_mix(body.get("mix"), errors)
        temp_c = _require_temp(body, errors)
        grid = body.get("grid")
        if grid is not None and (
            not isinstance(grid, list) or not all(_is_number(g) for g in grid)
        ):
            errors["grid"] = "must be a list of numbers"
        if errors:
            raise _bad_request(errors)
        curve = (
            predict_curve(self.artifact, mix, temp_c)
            if grid is None
            else predict_curve(self.artifact, mix, temp_c, grid)
        )
        out = _curve_json(curve)
        out["warnings"] = _warnings(mix, temp_c)
        return out

    def _post_sweep(self, body: dict) -> dict:
        errors: dict = {}
        mix = _build_mix(body.get("mix"), errors)
        temp_c = _require_temp(body, errors)
        factor = body.get("factor")
        if not isinstance(factor, str):
            errors["factor"] = "required string"
        values = body.get("values")
        if not isinstance(values, list) or not values:
            errors["values"] = "required nonempty list"
        if errors:
            raise _bad_request(errors)
        if factor == "grade":
            parsed = []
            for v in values:
                if isinstance(v, str):
                    parsed.append(parse_grade(v))
                elif isinstance(v, list) and len(v) == 2 and all(_is_number(x) for x in v):
                    parsed.append((float(v[0]), float(v[1])))
                else:
                    raise _bad_request({"values": "grade values must be 'HIGH-LOW' or [high, low]"})
            values = parsed
        result = sensitivity_sweep(self.artifact, mix, temp_c, factor, values)

        def value_json(v):
            return list(v) if isinstance(v, tuple) else v

        return {
            "factor": result.factor,
            "base_value": value_json(result.base_value),
            "base": _curve_json(result.base_curve),
            "entries": [
                {"value": value_json(v), "curve": _curve_json(c)} for v, c in result.entries
            ],
            "warnings": _warnings(mix, temp_c),
        }

    def _post_psd(self, body: dict) -> dict:
        errors: dict = {}
        mix = _build_mix(body.get("mix"), errors)
        temp_c = _require_temp(body, errors)
        fe = body.get("fracture_energy")
        if not _is_number(fe):
            errors["fracture_energy"] = "required number"
        elif fe < 0:
            errors["fracture_energy"] = "must be >= 0"
        thresholds = body.get("thresholds") or {}
        if not isinstance(thresholds, dict):
            errors["thresholds"] = "must be an object"
            thresholds = {}
        rut_thr = thresholds.get("rut_mm", DEFAULT_RUT_THRESHOLD_MM)
        fe_thr = thresholds.get("fracture_energy", self.fe_threshold_default)
        if not _is_number(rut_thr):
            errors["thresholds.rut_mm"] = "must be a number"
        if fe_thr is not None and not _is_number(fe_thr):
            errors["thresholds.fracture_energy"] = "must be a number"
        if errors:
            raise _bad_request(errors)
        point = psd_point(
            self.artifact,
            mix,
            temp_c,
            float(fe),
            rut_threshold_mm=float(rut_thr),
            fe_threshold=None if fe_thr is None else float(fe_thr),
        )
        out = asdict(point)
        out["warnings"] = _warnings(mix, temp_c)
        return out


def make_server(
    artifact: ModelArtifact,
    host: str = "127.0.0.1",
    port: int = 8000,
    ui_dir: str | None = None,
    fe_threshold: float | None = None,
) -> ThreadingHTTPServer:
    handler = type(
        "BoundRutnetHandler",
        (RutnetHandler,),
        {"artifact": artifact, "ui_dir": ui_dir, "fe_threshold_default": fe_threshold},
    )
    return ThreadingHTTPServer((host, port), handler)


def run_server(
    artifact: ModelArtifact,
    host: str = "127.0.0.1",
    port: int = 8000,
    ui_dir: str | None = None,
    fe_threshold: float | None = None,
) -> None:
    server = make_server(artifact, host, port, ui_dir, fe_threshold)
    print(f"serving on http://{host}:{server.server_address[1]}/ (ctrl-c to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
