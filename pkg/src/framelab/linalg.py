"""Dense complex linear algebra substrate with one shared tolerance policy.

Everything downstream funnels its eigen/SVD/inverse needs through this module
so that rank decisions and equality checks are made consistently.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailure,
    NotHermitian,
    NotPositiveSemidefinite,
    ShapeMismatch,
    SingularMatrix,
)

_TINY = 1e-300


@dataclass(frozen=True)
class TolerancePolicy:
    """Shared numerical thresholds.

    rel_eq    relative threshold for "equal" / "zero" decisions
    rank_rel  singular values below rank_rel * sigma_max count as zero
    psd_floor eigenvalues above -psd_floor * lambda_max are clamped to zero
    """

    rel_eq: float = 1e-9
    rank_rel: float = 1e-10
    psd_floor: float = 1e-10

    def __post_init__(self):
        for name in ("rel_eq", "rank_rel", "psd_floor"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {v}")


DEFAULT_TOL = TolerancePolicy()


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2:
        raise ShapeMismatch(f"expected a 2-d array, got shape {A.shape}")
    if not (np.all(np.isfinite(A.real)) and np.all(np.isfinite(A.imag))):
        raise ValueError("matrix entries must be finite")
    return A


def as_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 1:
        raise ShapeMismatch(f"expected a 1-d array, got shape {x.shape}")
    if not (np.all(np.isfinite(x.real)) and np.all(np.isfinite(x.imag))):
        raise ValueError("vector entries must be finite")
    return x


def rng_for(seed, *key):
    """Deterministic generator for (seed, key...) without streams colliding."""
    key = tuple(int(k) & 0xFFFFFFFF for k in key)
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=key))


def _phase_fix(V: np.ndarray, tol: TolerancePolicy) -> np.ndarray:
    # Rotate each column so its first component of non-negligible magnitude
    # is real and positive. Makes eigenbases reproducible across runs.
    V = V.copy()
    for j in range(V.shape[1]):
        col = V[:, j]
        mags = np.abs(col)
        top = mags.max()
        if top <= _TINY:
            continue
        i = int(np.argmax(mags > tol.rel_eq * top))
        V[:, j] = col * (np.conj(col[i]) / mags[i])
    return V


def hermitian_defect(A: np.ndarray) -> float:
    return float(np.linalg.norm(A - A.conj().T))


def check_hermitian(A, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"square matrix required, got {A.shape}")
    scale = max(float(np.linalg.norm(A)), 1.0)
    if hermitian_defect(A) > tol.rel_eq * scale:
        raise NotHermitian(f"hermitian defect {hermitian_defect(A):.3e} exceeds tolerance")
    return (A + A.conj().T) / 2.0


def hermitian_eig(A, tol: TolerancePolicy = DEFAULT_TOL):
    """Eigenvalues (ascending, real) and a phase-fixed orthonormal eigenbasis."""
    H = check_hermitian(A, tol)
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as e:
        raise ConvergenceFailure(str(e)) from e
    return w, _phase_fix(V, tol)


def svd(A, tol: TolerancePolicy = DEFAULT_TOL):
    """Full SVD. Returns (U, s, V) with A = U @ diag(s) @ V*."""
    A = as_matrix(A)
    try:
        U, s, Vh = np.linalg.svd(A, full_matrices=True)
    except np.linalg.LinAlgError as e:
        raise ConvergenceFailure(str(e)) from e
    return U, s, Vh.conj().T


def rank(A, tol: TolerancePolicy = DEFAULT_TOL) -> int:
    A = as_matrix(A)
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[0] <= _TINY:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel * s[0]))


def pseudoinverse(A, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse with singular values truncated at rank_rel."""
    U, s, V = svd(A, tol)
    if s.size == 0 or s[0] <= _TINY:
        return np.zeros((A.shape[1], A.shape[0]), dtype=np.complex128)
    inv = np.where(s > tol.rank_rel * s[0], 1.0 / np.where(s > _TINY, s, 1.0), 0.0)
    r = inv.size
    return V[:, :r] @ (inv[:, None] * U[:, :r].conj().T)


def psd_power(A, p: float, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """A**p for Hermitian PSD A and p in {1/2, -1/2, -1}."""
    if p not in (0.5, -0.5, -1.0):
        raise ValueError(f"unsupported power {p}")
    w, V = hermitian_eig(A, tol)
    lam_max = max(float(w[-1]), 0.0) if w.size else 0.0
    floor = -tol.psd_floor * max(lam_max, _TINY)
    if float(w[0]) < floor:
        raise NotPositiveSemidefinite(f"eigenvalue {w[0]:.3e} below PSD slack {floor:.3e}")
    w = np.clip(w, 0.0, None)
    if p < 0:
        cut = tol.rank_rel * max(lam_max, _TINY)
        if np.any(w <= cut):
            raise SingularMatrix("negative power of a rank-deficient matrix")
        wp = w**p
    else:
        wp = np.sqrt(w)
    return (V * wp[None, :]) @ V.conj().T


def polar(A, tol: TolerancePolicy = DEFAULT_TOL):
    """Polar decomposition A = V P with V unitary and P = (A* A)**(1/2).

    For rank-deficient A the unitary factor pairs the null directions of the
    matched SVD bases, so V acts as the identity map between them. The zero
    matrix returns (I, 0).
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"square matrix required, got {A.shape}")
    d = A.shape[0]
    if float(np.linalg.norm(A)) <= _TINY:
        return np.eye(d, dtype=np.complex128), np.zeros((d, d), dtype=np.complex128)
    U, s, V = svd(A, tol)
    Vh = V.conj().T
    unitary = U @ Vh
    P = V @ (s[:, None] * Vh)
    P = (P + P.conj().T) / 2.0
    return unitary, P


def dft(x, sign: int = -1) -> np.ndarray:
    """Unnormalized DFT, kernel exp(sign * 2*pi*i * j*k / L)."""
    x = as_vector(x)
    if sign == -1:
        return np.fft.fft(x)
    if sign == 1:
        return np.fft.ifft(x) * x.size
    raise ValueError("sign must be -1 or +1")


def orthonormal_range(A, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis for the column space, shape (m, rank)."""
    A = as_matrix(A)
    U, s, _ = svd(A, tol)
    if s.size == 0 or s[0] <= _TINY:
        return np.zeros((A.shape[0], 0), dtype=np.complex128)
    r = int(np.count_nonzero(s > tol.rank_rel * s[0]))
    return U[:, :r]


def kernel_basis(A, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis for the null space, shape (n, n - rank)."""
    A = as_matrix(A)
    _, s, V = svd(A, tol)
    n = A.shape[1]
    if s.size == 0 or s[0] <= _TINY:
        r = 0
    else:
        r = int(np.count_nonzero(s > tol.rank_rel * s[0]))
    return V[:, r:] if r < n else np.zeros((n, 0), dtype=np.complex128)


def subspace_equal(B1, B2, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Do the column spaces of B1 and B2 coincide?"""
    B1, B2 = as_matrix(B1), as_matrix(B2)
    if B1.shape[0] != B2.shape[0]:
        raise ShapeMismatch("bases live in different ambient dimensions")
    Q1 = orthonormal_range(B1, tol)
    Q2 = orthonormal_range(B2, tol)
    if Q1.shape[1] != Q2.shape[1]:
        return False
    if Q1.shape[1] == 0:
        return True
    r1 = Q1 - Q2 @ (Q2.conj().T @ Q1)
    r2 = Q2 - Q1 @ (Q1.conj().T @ Q2)
    return bool(max(np.abs(r1).max(), np.abs(r2).max()) <= tol.rel_eq)


def operator_norm(A) -> float:
    A = as_matrix(A)
    if min(A.shape) == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))
