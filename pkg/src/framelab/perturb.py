"""Perturbation bounds for frames: when does closeness to a frame make a
family a frame, and how the deviation operator controls equivalence.

Throughout, F and G are synthesis matrices of the same shape and D = F - G.
Ratios of quadratic forms are taken as generalized top eigenvalues restricted
to the range of the denominator; a numerator that survives on the
denominator's kernel makes the ratio +infinity.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import CountMismatch, NotAFrame, ShapeMismatch
from .frames import Frame, frames_equivalent
from .linalg import (
    DEFAULT_TOL,
    TolerancePolicy,
    operator_norm,
    psd_power,
    rank,
    rng_for,
)

_TINY = 1e-300


@dataclass
class BoundCheck:
    holds: bool
    method: str  # "certified" or "numerical"
    margin: float  # worst violation found (numerical) or PSD slack (certified)


@dataclass
class MixedCriterionResult:
    gate_values: tuple
    gate_ok: bool
    analysis: BoundCheck
    synthesis: BoundCheck
    hypothesis_holds: bool
    which: str  # "analysis_form", "synthesis_form" or ""
    conclusion_verified: bool


@dataclass
class PerturbationReport:
    paley_wiener_lambda: float
    analysis_bound: float
    synthesis_bound: float
    mixed: MixedCriterionResult
    g_is_frame: bool
    equivalent: bool


def _hermitize(A):
    return (A + A.conj().T) / 2.0


def _gen_eig_max(num: np.ndarray, den: np.ndarray, tol: TolerancePolicy) -> float:
    """sup x*num*x / x*den*x over the range of den; +inf if num survives on
    ker(den). Both inputs Hermitian PSD."""
    num = _hermitize(num)
    den = _hermitize(den)
    w, V = np.linalg.eigh(den)
    top = max(float(w[-1]), 0.0)
    num_scale = max(operator_norm(num), _TINY)
    if top <= _TINY:
        return 0.0 if num_scale <= 1e-12 else math.inf
    keep = w > tol.rank_rel * top
    K = V[:, ~keep]
    if K.shape[1] and operator_norm(num @ K) > tol.rel_eq * num_scale:
        return math.inf
    W = V[:, keep] * (w[keep] ** -0.5)[None, :]
    red = _hermitize(W.conj().T @ num @ W)
    return max(float(np.linalg.eigvalsh(red)[-1]), 0.0)


def _deviation(fr_f: Frame, fr_g: Frame) -> np.ndarray:
    if fr_f.matrix.shape[0] != fr_g.matrix.shape[0]:
        raise ShapeMismatch("frames live in different ambient dimensions")
    if fr_f.n != fr_g.n:
        raise CountMismatch(f"vector counts differ: {fr_f.n} != {fr_g.n}")
    return fr_f.matrix - fr_g.matrix


def paley_wiener_lambda(fr_f: Frame, fr_g: Frame) -> float:
    """Smallest lambda with ||sum a_i (f_i - g_i)|| <= lambda ||sum a_i f_i||
    for all coefficients; below one it forces G to be an equivalent frame."""
    D = _deviation(fr_f, fr_g)
    F = fr_f.matrix
    val = _gen_eig_max(D.conj().T @ D, F.conj().T @ F, fr_f.tol)
    return math.sqrt(val) if val != math.inf else math.inf


def analysis_closeness(fr_f: Frame, fr_g: Frame):
    """Two-sided analysis deviation bound M = max over both frames of
    sup ||D* x||^2 / ||X* x||^2. Finite exactly when G is a frame.

    Returns (M, g_is_frame) with the verdict computed independently by rank.
    """
    D = _deviation(fr_f, fr_g)
    F, G = fr_f.matrix, fr_g.matrix
    if rank(F, fr_f.tol) != fr_f.d:
        raise NotAFrame("the reference family must be a frame")
    DD = D @ D.conj().T
    mu_f = _gen_eig_max(DD, F @ F.conj().T, fr_f.tol)
    mu_g = _gen_eig_max(DD, G @ G.conj().T, fr_f.tol)
    M = max(mu_f, mu_g)
    return M, rank(G, fr_f.tol) == fr_g.d


def synthesis_closeness(fr_f: Frame, fr_g: Frame):
    """Synthesis-side counterpart, M = max of sup ||D x||^2 / ||X x||^2.
    Finite exactly when the two families are equivalent.

    Returns (M, equivalent) with equivalence decided separately via kernels.
    """
    D = _deviation(fr_f, fr_g)
    F, G = fr_f.matrix, fr_g.matrix
    DD = D.conj().T @ D
    nu_f = _gen_eig_max(DD, F.conj().T @ F, fr_f.tol)
    nu_g = _gen_eig_max(DD, G.conj().T @ G, fr_f.tol)
    return max(nu_f, nu_g), frames_equivalent(fr_f, fr_g)


def _psd_check(Y: np.ndarray, X: np.ndarray, tol: TolerancePolicy):
    """Is X <= Y^2 in the PSD order (with relative slack)?"""
    gap = _hermitize(Y @ Y - X)
    w = np.linalg.eigvalsh(gap)
    slack = tol.rel_eq * max(operator_norm(Y) ** 2, 1.0)
    return float(w[0]) >= -slack, float(w[0])


def _sphere_ascent(value_grad, dim, seed, restarts=20, iters=200, step=0.1):
    """Maximize a scale-invariant objective over the unit sphere. Returns the
    best value found; a crude certificate hunter, not a solver."""
    best = -math.inf
    for r in range(restarts):
        rng = rng_for(seed, 0xA5C, r)
        f = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        f /= np.linalg.norm(f)
        for _ in range(iters):
            val, grad = value_grad(f)
            best = max(best, val)
            g = grad - np.real(np.vdot(f, grad)) * f
            gn = np.linalg.norm(g)
            if gn <= 1e-14:
                break
            f = f + step * g / gn
            f /= np.linalg.norm(f)
        best = max(best, value_grad(f)[0])
    return best


def _norm_bound_check(terms, dim, tol: TolerancePolicy, seed: int) -> BoundCheck:
    """Check ||T_0 x|| <= sum_i c_i ||T_i x|| + mu ||x|| for all x.

    terms = (T0, [(c_i, T_i), ...], mu). First tries the sufficient PSD
    certificate T0* T0 <= (sum c_i (T_i* T_i)^(1/2) + mu I)^2, then hunts for
    a violating x on the sphere.
    """
    T0, scaled, mu = terms
    X = T0.conj().T @ T0
    Y = mu * np.eye(dim, dtype=np.complex128)
    for c, T in scaled:
        Y = Y + c * psd_power(T.conj().T @ T, 0.5, tol)
    ok, slack = _psd_check(Y, X, tol)
    if ok:
        return BoundCheck(holds=True, method="certified", margin=slack)

    mats = [(1.0, T0.conj().T @ T0)] + [(c, T.conj().T @ T) for c, T in scaled]

    def value_grad(x):
        norms = [math.sqrt(max(float(np.real(np.vdot(x, Q @ x))), 0.0)) for _, Q in mats]
        val = norms[0] - sum(c * nv for (c, _), nv in zip(mats[1:], norms[1:])) - mu
        grad = np.zeros_like(x)
        if norms[0] > _TINY:
            grad = grad + (mats[0][1] @ x) / norms[0]
        for (c, Q), nv in zip(mats[1:], norms[1:]):
            if nv > _TINY:
                grad = grad - c * (Q @ x) / nv
        return val, grad

    worst = _sphere_ascent(value_grad, dim, seed)
    scale = max(operator_norm(T0), 1.0)
    return BoundCheck(holds=worst <= tol.rel_eq * scale, method="numerical", margin=worst)


def mixed_criterion(fr_f: Frame, fr_g: Frame, lam1: float, lam2: float, mu: float,
                    seed: int = 0) -> MixedCriterionResult:
    """Gated perturbation criterion.

    Hypothesis: lam1 + mu / sqrt(A) < 1 and lam2 < 1 (A the lower bound of F),
    together with one of

      analysis form    ||D* x|| <= lam1 ||F* x|| + mu ||x||
      synthesis form   ||D x||  <= lam1 ||F x|| + lam2 ||G x|| + mu ||x||

    holding for every vector. When the hypothesis holds G must be a frame;
    conclusion_verified reports that implication on this input.
    """
    for name, v in (("lam1", lam1), ("lam2", lam2), ("mu", mu)):
        if v < 0:
            raise ValueError(f"{name} must be nonnegative")
    tol = fr_f.tol
    D = _deviation(fr_f, fr_g)
    F, G = fr_f.matrix, fr_g.matrix
    w = np.linalg.eigvalsh(_hermitize(F @ F.conj().T))
    A = max(float(w[0]), 0.0)
    if A <= tol.rel_eq * max(float(w[-1]), _TINY):
        raise NotAFrame("the reference family must be a frame")

    gate_values = (lam1 + mu / math.sqrt(A), lam2)
    gate_ok = max(gate_values) < 1.0

    analysis = _norm_bound_check(
        (D.conj().T, [(lam1, F.conj().T)], mu), fr_f.d, tol, seed
    )
    synthesis = _norm_bound_check(
        (D, [(lam1, F), (lam2, G)], mu), fr_f.n, tol, seed + 1
    )

    hypothesis = gate_ok and (analysis.holds or synthesis.holds)
    which = "analysis_form" if analysis.holds else ("synthesis_form" if synthesis.holds else "")
    g_is_frame = rank(G, tol) == fr_g.d
    return MixedCriterionResult(
        gate_values=gate_values,
        gate_ok=gate_ok,
        analysis=analysis,
        synthesis=synthesis,
        hypothesis_holds=hypothesis,
        which=which if hypothesis else which,
        conclusion_verified=(not hypothesis) or g_is_frame,
    )


def perturbation_report(fr_f: Frame, fr_g: Frame, lam1: float = 0.1, lam2: float = 0.1,
                        mu: float = 0.05, seed: int = 0) -> PerturbationReport:
    M_a, g_is_frame = analysis_closeness(fr_f, fr_g)
    M_s, equivalent = synthesis_closeness(fr_f, fr_g)
    return PerturbationReport(
        paley_wiener_lambda=paley_wiener_lambda(fr_f, fr_g),
        analysis_bound=M_a,
        synthesis_bound=M_s,
        mixed=mixed_criterion(fr_f, fr_g, lam1, lam2, mu, seed),
        g_is_frame=g_is_frame,
        equivalent=equivalent,
    )
