"""Systems of translates on Z_L.

For b | L the system {T_{nb} phi : n = 0..L/b - 1} is governed by the
periodized spectral weight

    p[j] = sum_{k=0}^{b-1} |phi_hat[(j + k*L/b) mod L]|^2,   j = 0..L/b - 1,

where phi_hat is the unnormalized DFT of phi. The Gram matrix of the
translates is circulant and its eigenvalue multiset is exactly {p[j] / b}.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadDivisor
from .linalg import DEFAULT_TOL, TolerancePolicy, as_vector, dft

_TINY = 1e-300


@dataclass
class TranslateSystem:
    L: int
    phi: np.ndarray
    b: int  # translation step
    count: int  # number of translates, L / b
    p: np.ndarray  # spectral weight, length L / b


@dataclass
class TranslateVerdict:
    verdict: str  # orthonormal | exact_frame_sequence | frame_sequence | not_frame_sequence
    A: float
    B: float
    p: np.ndarray


def translate_system(L: int, phi, b: int, tol: TolerancePolicy = DEFAULT_TOL) -> TranslateSystem:
    L, b = int(L), int(b)
    if b < 1 or L % b != 0:
        raise BadDivisor(f"b = {b} does not divide L = {L}")
    phi = as_vector(phi)
    if phi.size != L:
        raise BadDivisor(f"phi has length {phi.size}, expected L = {L}")
    count = L // b
    p = (np.abs(dft(phi, -1)) ** 2).reshape(b, count).sum(axis=0)
    return TranslateSystem(L=L, phi=phi, b=b, count=count, p=p)


def translate_matrix(ts: TranslateSystem) -> np.ndarray:
    cols = [np.roll(ts.phi, n * ts.b) for n in range(ts.count)]
    return np.column_stack(cols)


def gram_oracle(ts: TranslateSystem) -> np.ndarray:
    """Ascending eigenvalues of the translate Gram matrix, computed densely.

    Serves as the independent route against the spectral weight: the sorted
    multiset equals sorted(p / b)."""
    V = translate_matrix(ts)
    G = V.conj().T @ V
    return np.linalg.eigvalsh((G + G.conj().T) / 2.0)


def classify_translates(ts: TranslateSystem, tol: TolerancePolicy = DEFAULT_TOL) -> TranslateVerdict:
    """Four-way verdict with frame-sequence bounds read off the weight p.

    orthonormal            p identically b
    exact_frame_sequence   p positive everywhere (a Riesz sequence)
    frame_sequence         phi nonzero; bounds over the nonvanishing part of p
    not_frame_sequence     only the zero vector
    """
    p = ts.p
    top = float(p.max()) if p.size else 0.0
    if top <= _TINY:
        return TranslateVerdict("not_frame_sequence", 0.0, 0.0, p)
    thr = tol.rel_eq * top
    if float(np.abs(p - ts.b).max()) <= tol.rel_eq * ts.b:
        verdict = "orthonormal"
    elif float(p.min()) > thr:
        verdict = "exact_frame_sequence"
    else:
        verdict = "frame_sequence"
    live = p[p > thr]
    return TranslateVerdict(verdict, float(live.min()) / ts.b, float(live.max()) / ts.b, p)
