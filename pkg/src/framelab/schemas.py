"""Request and response envelopes for the HTTP service.

Structural validation of the numeric payloads (frame documents, window
vectors) stays in the wire-format parsers; these models only type the
envelope so that every endpoint has a stable request/response shape.
"""

from typing import Optional, Union

from pydantic import BaseModel


class ToleranceSpec(BaseModel):
    """Partial override of the shared numerical thresholds."""

    rel_eq: Optional[float] = None
    rank_rel: Optional[float] = None
    psd_floor: Optional[float] = None


class FrameDoc(BaseModel):
    """Frame wire document: columns of [re, im] pairs, column-major."""

    d: int
    n: int
    columns: list


WindowSpec = Union[str, list]


class AnalyzeRequest(BaseModel):
    frame: FrameDoc
    tol: Optional[ToleranceSpec] = None


class AnalyzeResponse(BaseModel):
    d: int
    n: int
    diagnostics: dict
    duals: Optional[dict] = None
    naimark: Optional[dict] = None


class GaborRequest(BaseModel):
    L: int
    a: int
    b: int
    window: WindowSpec = "box"
    tol: Optional[ToleranceSpec] = None


class GaborResponse(BaseModel):
    system: dict
    is_frame: bool
    bounds: dict
    cc: dict
    tight: dict
    duality: dict
    wexler_raz: Optional[dict] = None
    dual_window: Optional[list] = None
    zak_spectrum: Optional[list] = None


class ZakRequest(BaseModel):
    L: int
    a: int
    window: WindowSpec = "box"
    b: Optional[int] = None  # companion modulation step; defaults to L // a
    normalized: bool = False
    tol: Optional[ToleranceSpec] = None


class ZakResponse(BaseModel):
    zak: dict
    roundtrip_dev: float
    critical: Optional[dict] = None


class TranslatesRequest(BaseModel):
    L: int
    b: int
    phi: WindowSpec
    tol: Optional[ToleranceSpec] = None


class TranslatesResponse(BaseModel):
    L: int
    b: int
    verdict: str
    A: float
    B: float
    p: list
    gram_eigenvalues: list


class PerturbRequest(BaseModel):
    frame_f: FrameDoc
    frame_g: FrameDoc
    lam1: float = 0.1
    lam2: float = 0.1
    mu: float = 0.05
    seed: int = 0
    tol: Optional[ToleranceSpec] = None


class PerturbResponse(BaseModel):
    report: dict


class ProjMethodRequest(BaseModel):
    frame: FrameDoc
    index_sets: Optional[list] = None  # list of integer lists, nested chain
    probes: Optional[list] = None  # list of length-d vectors
    n_probes: int = 0  # extra seeded random probes
    seed: int = 0
    tol: Optional[ToleranceSpec] = None


class ProjMethodResponse(BaseModel):
    trace: dict
    riesz: dict


class ScanRequest(BaseModel):
    L: int
    window: WindowSpec = "rand:0"
    tol: Optional[ToleranceSpec] = None


class ScanRow(BaseModel):
    L: int
    a: int
    b: int
    redundancy: float
    is_frame: bool
    A: float
    B: float
    is_tight: bool


class ScanResponse(BaseModel):
    L: int
    rows: list[ScanRow]


class BenchRequest(BaseModel):
    sizes: list[int]
    a: int
    b: int
    reps: int = 50
    seed: int = 0
    tol: Optional[ToleranceSpec] = None


class BenchResponse(BaseModel):
    rows: list[dict]
    all_ok: bool


class SuiteRequest(BaseModel):
    seed: int = 0
    names: Optional[list[str]] = None
    tol: Optional[ToleranceSpec] = None
    list_only: bool = False


class SuiteResponse(BaseModel):
    names: Optional[list[str]] = None
    report: Optional[dict] = None
