"""HTTP service exposing the toolkit.

Every endpoint is a POST taking a typed request envelope and returning a
sanitized report: complex numbers as [re, im] pairs, infinities as "inf"
strings, keys stable. Domain errors (bad divisors, malformed documents,
non-frames, invalid section chains) map to status 400 with the error class
name, so clients can distinguish input problems from transport failures.
"""

import dataclasses

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .errors import FrameLabError
from .frames import Frame, canonical_dual, diagnostics, naimark_dilate
from .gabor import (
    DENSE_LIMIT,
    GaborSystem,
    cc_bounds,
    dual_window,
    is_frame_system,
    make_window,
    param_scan,
    spectral_bounds,
    tight_classification,
    duality_verdict,
    walnut_benchmark,
    wexler_raz_check,
    wexler_raz_table,
)
from .linalg import DEFAULT_TOL, TolerancePolicy, rng_for
from .projection import conditional_riesz_report, finite_sections
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    BenchRequest,
    BenchResponse,
    FrameDoc,
    GaborRequest,
    GaborResponse,
    PerturbRequest,
    PerturbResponse,
    ProjMethodRequest,
    ProjMethodResponse,
    ScanRequest,
    ScanResponse,
    SuiteRequest,
    SuiteResponse,
    ToleranceSpec,
    TranslatesRequest,
    TranslatesResponse,
    ZakRequest,
    ZakResponse,
)
from .perturb import perturbation_report
from .serialize import frame_from_json, frame_to_json, sanitize, vector_from_json, zak_to_json
from .suite import list_names, run_suite
from .translates import classify_translates, gram_oracle, translate_system
from .zak import critical_spectrum, zak_forward, zak_inverse

app = FastAPI(title="framelab", description="finite frame and Gabor analysis service")


@app.exception_handler(FrameLabError)
async def _domain_error(request: Request, exc: FrameLabError):
    return JSONResponse(
        status_code=400,
        content={"detail": {"error": type(exc).__name__, "message": str(exc)}},
    )


@app.exception_handler(ValueError)
async def _value_error(request: Request, exc: ValueError):
    return JSONResponse(
        status_code=400,
        content={"detail": {"error": "ValueError", "message": str(exc)}},
    )


def _policy(spec: ToleranceSpec):
    if spec is None:
        return DEFAULT_TOL
    overrides = {k: v for k, v in spec.model_dump().items() if v is not None}
    return dataclasses.replace(DEFAULT_TOL, **overrides) if overrides else DEFAULT_TOL


def _frame(doc: FrameDoc, tol: TolerancePolicy) -> Frame:
    return Frame(frame_from_json(doc.model_dump()).matrix, tol)


def _step_window(L: int, step: int, spec) -> np.ndarray:
    """Window for translate systems: specs are interpreted at shift step b."""
    if isinstance(spec, str) and spec == "delta":
        g = np.zeros(L, dtype=np.complex128)
        g[0] = 1.0
        return g
    return make_window(L, step, step, spec)


def _fixed_window(L: int, spec) -> np.ndarray:
    """Window for parameter scans: must not depend on the lattice steps."""
    if isinstance(spec, str):
        kind = spec.partition(":")[0]
        if kind in ("box", "pc"):
            raise ValueError(
                f"window spec {spec!r} depends on the lattice steps; "
                "use gauss:, rand:, delta, or explicit samples for a scan"
            )
    return _step_window(L, 1, spec)


@app.post("/analyze", response_model=AnalyzeResponse)
def analyze(req: AnalyzeRequest):
    tol = _policy(req.tol)
    fr = _frame(req.frame, tol)
    diag = diagnostics(fr)
    duals = naimark = None
    if diag.is_frame:
        dual = canonical_dual(fr)
        duals = {
            "canonical": frame_to_json(Frame(dual.matrix, tol)),
            "kernel_dimension": diag.excess,
        }
        P = naimark_dilate(fr).projection
        naimark = {
            "ambient": fr.n,
            "projection_defect": float(np.linalg.norm(P @ P - P)),
            "trace_gap": float(abs(np.trace(P).real - fr.d)),
        }
    return AnalyzeResponse(
        d=fr.d,
        n=fr.n,
        diagnostics=sanitize(diag),
        duals=sanitize(duals),
        naimark=sanitize(naimark),
    )


@app.post("/gabor", response_model=GaborResponse)
def gabor(req: GaborRequest):
    tol = _policy(req.tol)
    g = make_window(req.L, req.a, req.b, req.window)
    sys = GaborSystem(req.L, g, req.a, req.b, tol)
    A, B = spectral_bounds(sys)
    method = "dense" if sys.L <= DENSE_LIMIT else ("zak" if sys.is_critical else "power")
    frame = is_frame_system(sys)
    A_cc, B_cc = cc_bounds(sys)
    sys_is_frame, adjoint_is_riesz = duality_verdict(sys)
    wr = dualw = zspec = None
    if frame:
        h = dual_window(sys)
        ips, target = wexler_raz_table(sys, h)
        wr = {
            "accepts_canonical_dual": wexler_raz_check(sys, h),
            "inner_product": complex(ips[0, 0]),
            "target": target,
        }
        dualw = h
    if sys.is_critical:
        zspec = critical_spectrum(sys)
    return GaborResponse(
        system=sanitize(
            {
                "L": sys.L,
                "a": sys.a,
                "b": sys.b,
                "M": sys.M,
                "N": sys.N,
                "redundancy": sys.redundancy,
                "is_critical": sys.is_critical,
                "window": sys.window,
            }
        ),
        is_frame=frame,
        bounds=sanitize({"A": A, "B": B, "method": method}),
        cc=sanitize({"A_cc": A_cc, "B_cc": B_cc}),
        tight=sanitize(tight_classification(sys)),
        duality=sanitize(
            {"system_is_frame": sys_is_frame, "adjoint_is_riesz": adjoint_is_riesz}
        ),
        wexler_raz=sanitize(wr),
        dual_window=sanitize(dualw),
        zak_spectrum=sanitize(zspec),
    )


@app.post("/zak", response_model=ZakResponse)
def zak(req: ZakRequest):
    tol = _policy(req.tol)
    b = req.b if req.b is not None else max(req.L // req.a, 1)
    g = make_window(req.L, req.a, b, req.window)
    Z = zak_forward(g, req.a)
    dev = float(np.linalg.norm(zak_inverse(Z, req.L) - g))
    critical = None
    if req.a * b == req.L:
        sys = GaborSystem(req.L, g, req.a, b, tol)
        vals = critical_spectrum(sys)
        critical = {
            "eigenvalues": vals,
            "A": float(vals[0]),
            "B": float(vals[-1]),
            "is_frame": is_frame_system(sys),
        }
    return ZakResponse(
        zak=sanitize(zak_to_json(Z, normalized=req.normalized)),
        roundtrip_dev=dev,
        critical=sanitize(critical),
    )


@app.post("/translates", response_model=TranslatesResponse)
def translates(req: TranslatesRequest):
    tol = _policy(req.tol)
    phi = _step_window(req.L, req.b, req.phi)
    ts = translate_system(req.L, phi, req.b, tol)
    verdict = classify_translates(ts, tol)
    return TranslatesResponse(
        L=req.L,
        b=req.b,
        verdict=verdict.verdict,
        A=float(verdict.A),
        B=float(verdict.B),
        p=sanitize(verdict.p),
        gram_eigenvalues=sanitize(gram_oracle(ts)),
    )


@app.post("/perturb", response_model=PerturbResponse)
def perturb(req: PerturbRequest):
    tol = _policy(req.tol)
    fr_f = _frame(req.frame_f, tol)
    fr_g = _frame(req.frame_g, tol)
    rep = perturbation_report(fr_f, fr_g, req.lam1, req.lam2, req.mu, req.seed)
    return PerturbResponse(report=sanitize(rep))


@app.post("/projmethod", response_model=ProjMethodResponse)
def projmethod(req: ProjMethodRequest):
    tol = _policy(req.tol)
    fr = _frame(req.frame, tol)
    sets = req.index_sets
    if sets is not None:
        sets = [tuple(s) for s in sets]
    probes = [vector_from_json(p, fr.d) for p in req.probes or []]
    if req.n_probes > 0:
        rng = rng_for(req.seed, 0x9B0E)
        probes += [
            rng.standard_normal(fr.d) + 1j * rng.standard_normal(fr.d)
            for _ in range(req.n_probes)
        ]
    trace = finite_sections(fr, sets, probes)
    return ProjMethodResponse(
        trace=sanitize(trace),
        riesz=sanitize(conditional_riesz_report(fr, sets)),
    )


@app.post("/scan", response_model=ScanResponse)
def scan(req: ScanRequest):
    tol = _policy(req.tol)
    g = _fixed_window(req.L, req.window)
    rows = [{"L": req.L, **row} for row in param_scan(req.L, g, tol)]
    return ScanResponse(L=req.L, rows=sanitize(rows))


@app.post("/bench", response_model=BenchResponse)
def bench(req: BenchRequest):
    tol = _policy(req.tol)
    rows = [
        walnut_benchmark(L, req.a, req.b, reps=req.reps, seed=req.seed, tol=tol)
        for L in req.sizes
    ]
    return BenchResponse(rows=sanitize(rows), all_ok=all(bool(r["ok"]) for r in rows))


@app.post("/suite", response_model=SuiteResponse)
def suite(req: SuiteRequest):
    if req.list_only:
        return SuiteResponse(names=list_names())
    tol = None if req.tol is None else _policy(req.tol)
    return SuiteResponse(report=run_suite(seed=req.seed, tol=tol, names=req.names))
