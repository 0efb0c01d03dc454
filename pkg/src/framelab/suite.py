"""Named, seeded self-checks spanning every module.

run_suite executes each registered check and collects pass/fail verdicts into
a deterministic report: same seed and tolerances give identical bytes once
rendered. Checks draw randomness only through rng_for(seed, counter) keyed by
their registry position, never from the clock or OS entropy, so serial runs,
partial runs, and repeated runs all agree check by check.
"""

import math

import numpy as np

from .frames import (
    Frame,
    canonical_dual,
    canonical_tight,
    diagnostics,
    dual_parametrization,
    frame_bounds,
    frames_equivalent,
    is_dual,
    mean_centered_tight_frame,
    minimal_norm_check,
    naimark_dilate,
    select_riesz_subset,
    staircase_frame,
    three_unitary_decomposition,
    two_unitary_decomposition,
)
from .gabor import (
    GaborSystem,
    atoms,
    cc_bounds,
    dual_window,
    frame_operator_direct,
    is_frame_system,
    random_window,
    spectral_bounds,
    tight_classification,
    walnut_apply,
    wexler_raz_check,
    wh_equivalent,
    wh_frame_identity,
)
from .linalg import (
    DEFAULT_TOL,
    TolerancePolicy,
    dft,
    hermitian_eig,
    kernel_basis,
    orthonormal_range,
    polar,
    pseudoinverse,
    psd_power,
    rng_for,
    subspace_equal,
)
from .perturb import analysis_closeness, mixed_criterion, paley_wiener_lambda
from .projection import conditional_riesz_report, finite_sections
from .serialize import dumps_canonical, frame_from_json, frame_to_json
from .translates import classify_translates, gram_oracle, translate_system
from .zak import critical_spectrum, walnut_partial_norm, zak_extend, zak_forward, zak_inverse

_REGISTRY = []


def _check(name):
    def deco(fn):
        _REGISTRY.append((name, fn))
        return fn

    return deco


def _crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _random_frame(rng, d, n):
    while True:
        F = _crandn(rng, d, n)
        if np.linalg.svd(F, compute_uv=False)[d - 1] > 1e-3:
            return F


def _require(cond, msg):
    if not cond:
        raise AssertionError(msg)


# ---------------------------------------------------------------- numerics


@_check("numerics.hermitian_eig_reconstructs")
def _c_eig(rng, tol):
    A = _crandn(rng, 8, 8)
    A = (A + A.conj().T) / 2.0
    w, V = hermitian_eig(A, tol)
    defect = np.linalg.norm((V * w) @ V.conj().T - A)
    _require(defect <= 10 * tol.rel_eq * max(np.linalg.norm(A), 1.0), f"defect {defect:.3e}")


@_check("numerics.pseudoinverse_moore_penrose")
def _c_pinv(rng, tol):
    A = _crandn(rng, 4, 6)
    P = pseudoinverse(A, tol)
    s = np.linalg.norm(A)
    _require(np.linalg.norm(A @ P @ A - A) <= 1e-10 * s, "APA != A")
    _require(np.linalg.norm(P @ A @ P - P) <= 1e-10 * s, "PAP != P")
    _require(np.linalg.norm((A @ P).conj().T - A @ P) <= 1e-10, "AP not hermitian")
    _require(np.linalg.norm((P @ A).conj().T - P @ A) <= 1e-10, "PA not hermitian")


@_check("numerics.psd_power_inverts")
def _c_psd(rng, tol):
    B = _crandn(rng, 6, 6)
    S = B @ B.conj().T + np.eye(6)
    R = psd_power(S, 0.5, tol)
    _require(np.linalg.norm(R @ R - S) <= 1e-9 * np.linalg.norm(S), "sqrt square")
    _require(
        np.linalg.norm(psd_power(S, -1.0, tol) @ S - np.eye(6)) <= 1e-8, "inverse"
    )


@_check("numerics.polar_factorization")
def _c_polar(rng, tol):
    A = _crandn(rng, 5, 5)
    V, P = polar(A, tol)
    _require(np.linalg.norm(V @ V.conj().T - np.eye(5)) <= 1e-9, "V not unitary")
    _require(np.linalg.norm(V @ P - A) <= 1e-9 * np.linalg.norm(A), "VP != A")
    _require(float(np.linalg.eigvalsh(P)[0]) >= -1e-9, "P not psd")


@_check("numerics.dft_parseval_roundtrip")
def _c_dft(rng, tol):
    x = _crandn(rng, 16)
    X = dft(x, -1)
    _require(
        abs(np.linalg.norm(X) ** 2 - 16 * np.linalg.norm(x) ** 2) <= 1e-9, "Parseval"
    )
    _require(np.linalg.norm(dft(X, 1) / 16 - x) <= 1e-12, "roundtrip")


@_check("numerics.subspace_detects_rotation")
def _c_subspace(rng, tol):
    Q = orthonormal_range(_crandn(rng, 6, 3), tol)
    C = _crandn(rng, 3, 3) + 3.0 * np.eye(3)
    _require(subspace_equal(Q, Q @ C, tol), "rotated basis should match")
    extra = np.column_stack([Q, _crandn(rng, 6)])
    _require(not subspace_equal(Q, extra, tol), "extra direction should differ")


# ------------------------------------------------------------------ frames


@_check("frames.bounds_bracket_energy")
def _c_bounds(rng, tol):
    fr = Frame(_random_frame(rng, 4, 9), tol)
    A, B = frame_bounds(fr)
    for _ in range(20):
        f = _crandn(rng, 4)
        e = np.linalg.norm(fr.matrix.conj().T @ f) ** 2
        n2 = np.linalg.norm(f) ** 2
        _require(A * n2 - 1e-9 <= e <= B * n2 + 1e-9, "energy outside [A,B]")


@_check("frames.canonical_dual_reconstructs")
def _c_dual(rng, tol):
    fr = Frame(_random_frame(rng, 3, 7), tol)
    H = canonical_dual(fr).matrix
    _require(np.linalg.norm(fr.matrix @ H.conj().T - np.eye(3)) <= 1e-9, "FH* != I")
    _require(is_dual(fr, H), "canonical dual rejected")


@_check("frames.dual_parametrization_spans")
def _c_param(rng, tol):
    fr = Frame(_random_frame(rng, 3, 6), tol)
    h0, K = dual_parametrization(fr)
    c = _crandn(rng, K.shape[1])
    W = (K @ c).reshape(3, 6, order="F")
    _require(np.linalg.norm(fr.matrix @ W.conj().T) <= 1e-9, "offset not annihilated")
    _require(is_dual(fr, h0.matrix + W), "offset dual rejected")


@_check("frames.canonical_tight_parseval")
def _c_tight(rng, tol):
    fr = Frame(_random_frame(rng, 4, 7), tol)
    T = canonical_tight(fr)
    _require(np.linalg.norm(T.frame_operator() - np.eye(4)) <= 1e-9, "S != I")
    _require(diagnostics(T).is_normalized_tight, "not flagged tight")


@_check("frames.naimark_projection")
def _c_naimark(rng, tol):
    fr = Frame(_random_frame(rng, 3, 6), tol)
    P = naimark_dilate(fr).projection
    _require(np.linalg.norm(P @ P - P) <= 1e-9, "not idempotent")
    _require(abs(np.trace(P).real - 3) <= 1e-9, "trace != d")


@_check("frames.mean_centered_tight")
def _c_mean_centered(rng, tol):
    for n in range(2, 7):
        fr = mean_centered_tight_frame(n, tol)
        _require(
            np.linalg.norm(fr.frame_operator() - np.eye(n)) <= 1e-10, f"S != I at n={n}"
        )
        _require(diagnostics(fr).is_normalized_tight, f"not tight at n={n}")


@_check("frames.minimal_norm_identity")
def _c_minnorm(rng, tol):
    fr = Frame(_random_frame(rng, 3, 6), tol)
    f = _crandn(rng, 3)
    b = canonical_dual(fr).matrix.conj().T @ f + kernel_basis(fr.matrix, tol) @ _crandn(rng, 3)
    lhs, rhs = minimal_norm_check(fr, f, b)
    _require(abs(lhs - rhs) <= 1e-8 * max(lhs, 1.0), f"identity off by {abs(lhs - rhs):.3e}")


@_check("frames.unitary_decompositions")
def _c_unitary(rng, tol):
    A = _crandn(rng, 4, 4)
    a3, (U1, U2, U3) = three_unitary_decomposition(A, 0.5, tol)
    _require(np.linalg.norm(a3 * (U1 + U2 + U3) - A) <= 1e-9 * max(np.linalg.norm(A), 1.0), "3U")
    a2, (W1, W2) = two_unitary_decomposition(A, tol)
    _require(np.linalg.norm(0.5 * a2 * (W1 + W2) - A) <= 1e-9 * max(np.linalg.norm(A), 1.0), "2U")
    for U in (U1, U2, U3, W1, W2):
        _require(np.linalg.norm(U @ U.conj().T - np.eye(4)) <= 1e-9, "factor not unitary")


@_check("frames.riesz_subset_spans")
def _c_riesz(rng, tol):
    F = _random_frame(rng, 3, 5)
    F[:, 3] = F[:, 0]  # plant a duplicate
    idx = select_riesz_subset(Frame(F, tol))
    sub = F[:, idx]
    _require(len(idx) == 3, f"selected {len(idx)} columns")
    _require(np.linalg.svd(sub, compute_uv=False)[-1] > 1e-6, "subset not independent")


# ------------------------------------------------------------------- gabor


@_check("gabor.walnut_matches_direct")
def _c_walnut(rng, tol):
    sys = GaborSystem(12, _crandn(rng, 12), 2, 3, tol)
    S = frame_operator_direct(sys)
    f = _crandn(rng, 12)
    dev = np.linalg.norm(walnut_apply(sys, f) - S @ f)
    _require(dev <= 1e-9 * np.linalg.norm(S) * np.linalg.norm(f), f"deviation {dev:.3e}")


@_check("gabor.frame_identity_splits")
def _c_identity(rng, tol):
    sys = GaborSystem(12, _crandn(rng, 12), 3, 2, tol)
    f = _crandn(rng, 12)
    total, diag, off = wh_frame_identity(sys, f)
    direct = float(np.linalg.norm(atoms(sys).matrix.conj().T @ f) ** 2)
    _require(abs(total - (diag + off)) <= 1e-9 * max(total, 1.0), "split")
    _require(abs(total - direct) <= 1e-9 * max(direct, 1.0), "total vs atoms")


@_check("gabor.cc_sandwich")
def _c_cc(rng, tol):
    sys = GaborSystem(16, _crandn(rng, 16), 2, 4, tol)
    lo, hi = spectral_bounds(sys)
    A_cc, B_cc = cc_bounds(sys)
    _require(B_cc >= hi - 1e-9, "B_cc below top eigenvalue")
    if A_cc > 0:
        _require(A_cc <= lo + 1e-9, "positive A_cc above bottom eigenvalue")


@_check("gabor.tight_five_way_agreement")
def _c_fiveway(rng, tol):
    base = GaborSystem(12, _crandn(rng, 12), 2, 2, tol)
    gt = psd_power(frame_operator_direct(base), -0.5, tol) @ base.window
    checks = tight_classification(GaborSystem(12, gt, 2, 2, tol))
    votes = [
        checks.tight_eigen,
        checks.corr_criterion,
        checks.adjoint_orthogonal,
        checks.norm_matches,
        checks.fixed_point,
    ]
    _require(all(votes), f"constructed tight window voted {votes}")


@_check("gabor.ron_shen_duality")
def _c_ronshen(rng, tol):
    sys = GaborSystem(12, _crandn(rng, 12), 2, 3, tol)
    lo, _ = spectral_bounds(sys)
    _require(is_frame_system(sys) == (lo > 1e-9), "adjoint verdict vs spectrum")
    crit = GaborSystem(12, random_window(12, seed=5), 4, 3, tol)
    lo2, _ = spectral_bounds(crit)
    _require(is_frame_system(crit) == (lo2 > 1e-9), "critical verdict vs spectrum")


@_check("gabor.wexler_raz_accepts_dual")
def _c_wr(rng, tol):
    sys = GaborSystem(12, _crandn(rng, 12), 2, 3, tol)
    h = dual_window(sys)
    _require(wexler_raz_check(sys, h), "canonical dual window rejected")


@_check("gabor.dual_window_inverts")
def _c_dualwin(rng, tol):
    sys = GaborSystem(18, _crandn(rng, 18), 3, 3, tol)
    h = dual_window(sys)
    res = np.linalg.norm(walnut_apply(sys, h) - sys.window)
    _require(res <= 1e-8 * max(np.linalg.norm(sys.window), 1.0), f"S h != g ({res:.3e})")


@_check("gabor.spectral_routes_agree")
def _c_routes(rng, tol):
    crit = GaborSystem(16, random_window(16, seed=11), 4, 4, tol)
    d_lo, d_hi = spectral_bounds(crit, method="dense")
    z_lo, z_hi = spectral_bounds(crit, method="zak")
    _require(abs(d_lo - z_lo) <= 1e-9 * max(d_hi, 1.0), "zak lower")
    _require(abs(d_hi - z_hi) <= 1e-9 * max(d_hi, 1.0), "zak upper")
    over = GaborSystem(16, random_window(16, seed=12), 2, 4, tol)
    p_lo, p_hi = spectral_bounds(over, method="power")
    e_lo, e_hi = spectral_bounds(over, method="dense")
    _require(abs(p_hi - e_hi) <= 1e-6 * max(e_hi, 1.0), "power upper")
    _require(abs(p_lo - e_lo) <= 1e-6 * max(e_hi, 1.0), "power lower")


@_check("gabor.equivalence_routes_agree")
def _c_equiv(rng, tol):
    sys = GaborSystem(12, random_window(12, seed=21), 2, 3, tol)
    t = np.arange(12)
    g2 = np.zeros(12, dtype=np.complex128)
    for mu in range(sys.a):
        for nu in range(sys.b):
            g2 += (
                _crandn(rng)
                * np.exp(2j * np.pi * mu * sys.N * t / 12)
                * np.roll(sys.window, nu * sys.M)
            )
    _require(wh_equivalent(sys, GaborSystem(12, g2, 2, 3, tol)), "lattice image inequivalent")
    other = GaborSystem(12, random_window(12, seed=22), 2, 3, tol)
    _require(not wh_equivalent(sys, other), "unrelated windows equivalent")


# --------------------------------------------------------------------- zak


@_check("zak.roundtrip")
def _c_zak_round(rng, tol):
    g = _crandn(rng, 24)
    Z = zak_forward(g, 4)
    _require(np.linalg.norm(zak_inverse(Z, 24) - g) <= 1e-12 * np.linalg.norm(g), "roundtrip")


@_check("zak.quasi_periodicity")
def _c_zak_quasi(rng, tol):
    g = _crandn(rng, 12)
    Z = zak_forward(g, 3)
    for r in range(3):
        for j in range(4):
            lhs = zak_extend(Z, r + 3, j)
            rhs = Z.values[r, j] * np.exp(-2j * np.pi * j / 4)
            _require(abs(lhs - rhs) <= 1e-12, "translation phase")
            _require(abs(zak_extend(Z, r, j + 4) - Z.values[r, j]) <= 1e-12, "periodic in j")


@_check("zak.critical_spectrum_matches_dense")
def _c_zak_spec(rng, tol):
    sys = GaborSystem(18, _crandn(rng, 18), 3, 6, tol)
    vals = critical_spectrum(sys)
    dense = np.linalg.eigvalsh(frame_operator_direct(sys))
    _require(
        np.max(np.abs(np.sort(vals) - np.sort(dense))) <= 1e-9 * max(dense[-1], 1.0),
        "spectrum mismatch",
    )


@_check("zak.partial_norm_matches_dense")
def _c_zak_partial(rng, tol):
    sys = GaborSystem(12, _crandn(rng, 12), 3, 4, tol)
    M = sys.M
    from .gabor import correlation_table

    G = correlation_table(sys).table
    for kset in ((0,), (0, 2), (1, 3)):
        op = np.zeros((12, 12), dtype=np.complex128)
        for k in kset:
            weights = M * np.tile(G[k], 12 // sys.a)
            for t in range(12):
                op[(t + k * M) % 12, t] = weights[t]
        dense = np.linalg.norm(op, 2)
        _require(
            abs(walnut_partial_norm(sys, kset) - dense) <= 1e-9 * max(dense, 1.0),
            f"partial norm {kset}",
        )


# -------------------------------------------------------------- translates


@_check("translates.gram_eigenvalues_match")
def _c_trans_gram(rng, tol):
    ts = translate_system(20, _crandn(rng, 20), 4, tol)
    eig = gram_oracle(ts)
    pred = np.sort(ts.p / 4)
    _require(np.max(np.abs(eig - pred)) <= 1e-9 * max(pred[-1], 1.0), "gram spectrum")


@_check("translates.delta_orthonormal")
def _c_trans_delta(rng, tol):
    phi = np.zeros(12)
    phi[0] = 1.0
    v = classify_translates(translate_system(12, phi, 3, tol), tol)
    _require(v.verdict == "orthonormal", f"verdict {v.verdict}")
    _require(abs(v.A - 1.0) <= 1e-12 and abs(v.B - 1.0) <= 1e-12, "bounds")


@_check("translates.verdict_bounds_bracket")
def _c_trans_bounds(rng, tol):
    ts = translate_system(16, _crandn(rng, 16), 4, tol)
    v = classify_translates(ts, tol)
    eig = gram_oracle(ts)
    live = eig[eig > 1e-9 * max(float(eig[-1]), 1.0)]
    _require(v.A <= live[0] + 1e-9 and v.B >= live[-1] - 1e-9, "bounds not bracketing")


# ----------------------------------------------------------------- perturb


@_check("perturb.paley_wiener_small_deviation")
def _c_pw(rng, tol):
    F = _random_frame(rng, 3, 6)
    w = np.linalg.svd(F, compute_uv=False)
    E = _crandn(rng, 3, 3)
    E *= 0.3 * (w[-1] / w[0]) / np.linalg.norm(E, 2)
    fa = Frame(F, tol)
    fb = Frame(F - E @ F, tol)
    lam = paley_wiener_lambda(fa, fb)
    _require(lam <= 0.35, f"lambda {lam}")
    _require(frames_equivalent(fa, fb), "perturbed frame not equivalent")


@_check("perturb.closeness_flags_frame")
def _c_closeness(rng, tol):
    F = _random_frame(rng, 3, 6)
    G = F.copy()
    fine, ok = analysis_closeness(Frame(F, tol), Frame(G * 0.5, tol))
    _require(math.isfinite(fine) and ok, "scaled copy should be finite")
    G2 = G.copy()
    G2[2, :] = 0.0  # rank drops
    bad, ok2 = analysis_closeness(Frame(F, tol), Frame(G2, tol))
    _require(bad == math.inf and not ok2, "rank-deficient comparison should be infinite")


@_check("perturb.mixed_criterion_certifies")
def _c_mixed(rng, tol):
    F = _random_frame(rng, 3, 6)
    w = np.linalg.svd(F, compute_uv=False)
    E = _crandn(rng, 3, 3)
    E *= 0.3 * (w[-1] / w[0]) / np.linalg.norm(E, 2)
    res = mixed_criterion(Frame(F, tol), Frame(F - E @ F, tol), 0.4, 0.4, 0.05 * w[-1])
    _require(res.gate_ok, "gate should pass")
    _require(res.analysis.holds, "analysis inequality should hold")
    _require(res.conclusion_verified, "conclusion not verified")


# -------------------------------------------------------------- projection


@_check("projection.staircase_profile")
def _c_proj_stairs(rng, tol):
    fr = staircase_frame("repeat_staircase", 6, tol)
    rep = conditional_riesz_report(fr)
    prof = rep["growth_profile"]
    for j in range(1, 7):
        stage = j * (j - 1) // 2
        _require(abs(prof[stage] - j) <= 1e-9 * j, f"level {j} profile {prof[stage]}")
    _require(abs(rep["sup_inv_norm"] - 6.0) <= 1e-9 * 6, "sup")


@_check("projection.full_stage_recovery")
def _c_proj_full(rng, tol):
    fr = Frame(_random_frame(rng, 3, 7), tol)
    probes = [_crandn(rng, 3) for _ in range(2)]
    tr = finite_sections(fr, probes=probes)
    _require(all(e <= 1e-9 for e in tr.strong_errors[-1]), "coefficients not recovered")
    _require(all(tr.cond106.values()), f"flags {tr.cond106}")


# --------------------------------------------------------------- serialize


@_check("serialize.roundtrip")
def _c_serialize(rng, tol):
    fr = Frame(_crandn(rng, 3, 5), tol)
    back = frame_from_json(frame_to_json(fr))
    _require(np.array_equal(back.matrix, fr.matrix), "frame roundtrip")
    a = dumps_canonical({"z": [1 + 2j], "m": math.inf})
    b = dumps_canonical({"m": math.inf, "z": [1 + 2j]})
    _require(a == b, "canonical dumps not canonical")


# ----------------------------------------------------------------- runner


def list_names():
    """Registered check names, in execution order."""
    return [name for name, _ in _REGISTRY]


def run_suite(seed: int = 0, tol: TolerancePolicy = None, names=None) -> dict:
    """Run the checks and assemble a deterministic report.

    names, when given, selects a subset; each check keeps the rng stream of
    its registry position, so a subset run agrees with the matching slice of
    a full run.
    """
    tol = DEFAULT_TOL if tol is None else tol
    if names is not None:
        wanted = set(names)
        known = set(list_names())
        unknown = wanted - known
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
    results = []
    failed = 0
    for idx, (name, fn) in enumerate(_REGISTRY):
        if names is not None and name not in wanted:
            continue
        rng = rng_for(seed, 0xC0DE, idx)
        try:
            fn(rng, tol)
        except Exception as exc:
            results.append(
                {"name": name, "passed": False, "detail": f"{type(exc).__name__}: {exc}"}
            )
            failed += 1
        else:
            results.append({"name": name, "passed": True, "detail": ""})
    return {
        "seed": int(seed),
        "tolerance": {
            "rel_eq": tol.rel_eq,
            "rank_rel": tol.rank_rel,
            "psd_floor": tol.psd_floor,
        },
        "counts": {"total": len(results), "passed": len(results) - failed, "failed": failed},
        "ok": failed == 0,
        "checks": results,
    }
