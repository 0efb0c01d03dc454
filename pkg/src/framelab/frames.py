"""Finite frames for C^d: diagnostics, duals, tight canonicalization, dilation,
unitary decompositions and Riesz subset machinery.

A frame is stored through its synthesis matrix F (d x n, columns are the frame
vectors). The frame operator is S = F F*, the Gram matrix is F* F, and the
optimal bounds A, B are the extreme eigenvalues of S.
"""

from dataclasses import dataclass, field
from itertools import combinations
import math

import numpy as np

from .errors import (
    CountMismatch,
    NotAFrame,
    NotARepresentation,
    NotOrthonormal,
    ShapeMismatch,
    TooLarge,
)
from .linalg import (
    DEFAULT_TOL,
    TolerancePolicy,
    as_matrix,
    as_vector,
    kernel_basis,
    operator_norm,
    polar,
    pseudoinverse,
    psd_power,
    rank,
    rng_for,
    subspace_equal,
)

_TINY = 1e-300


@dataclass
class Frame:
    """A finite sequence of vectors in C^d, stored as synthesis-matrix columns."""

    matrix: np.ndarray
    tol: TolerancePolicy = field(default_factory=TolerancePolicy)

    def __post_init__(self):
        self.matrix = as_matrix(self.matrix)
        if self.matrix.shape[0] < 1 or self.matrix.shape[1] < 1:
            raise ShapeMismatch("frame needs at least one vector in dimension >= 1")

    @classmethod
    def from_columns(cls, cols, tol: TolerancePolicy = DEFAULT_TOL):
        return cls(np.column_stack([as_vector(c) for c in cols]), tol)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    def frame_operator(self) -> np.ndarray:
        return self.matrix @ self.matrix.conj().T

    def gram(self) -> np.ndarray:
        return self.matrix.conj().T @ self.matrix


@dataclass
class VectorClass:
    norm_sq: float
    classification: str  # "boundary" or "interior"
    verified: bool


@dataclass
class FrameDiagnostics:
    A: float
    B: float
    is_frame: bool
    is_tight: bool
    is_normalized_tight: bool
    is_exact: bool
    excess: int
    condition: float
    per_vector: list


@dataclass
class DualFrame:
    matrix: np.ndarray
    canonical: bool


@dataclass
class NaimarkDilation:
    projection: np.ndarray  # n x n orthogonal projection
    embed: np.ndarray  # n x d isometry onto its range
    change: np.ndarray  # d x d invertible map sending the tight frame to the input


@dataclass
class RieszFrameReport:
    is_riesz_frame: bool
    worst_subset: tuple
    worst_bounds: tuple
    exhaustive: bool


def frame_bounds(fr: Frame):
    """Optimal (A, B) as the extreme eigenvalues of the frame operator."""
    w = np.linalg.eigvalsh(fr.frame_operator())
    return max(float(w[0]), 0.0), max(float(w[-1]), 0.0)


def _span_projector(S_rest: np.ndarray, tol: TolerancePolicy) -> np.ndarray:
    w, V = np.linalg.eigh((S_rest + S_rest.conj().T) / 2.0)
    top = max(float(w[-1]), 0.0)
    if top <= _TINY:
        return np.zeros((S_rest.shape[0], 0), dtype=np.complex128)
    keep = w > tol.rank_rel * top
    return V[:, keep]


def diagnostics(fr: Frame) -> FrameDiagnostics:
    """Frame bounds, tightness flags, excess and a per-vector classification.

    A vector is labeled "boundary" when its norm square reaches the upper
    bound B (it must then be orthogonal to the span of the others) and
    "interior" otherwise (below A it must lie inside that span). In the band
    between A and B neither geometric property is forced, so each label comes
    with a verified flag stating whether the claimed property actually holds.
    """
    tol = fr.tol
    F = fr.matrix
    S = fr.frame_operator()
    A, B = frame_bounds(fr)
    r = rank(F, tol)
    is_frame = r == fr.d
    is_tight = (B - A) <= tol.rel_eq * B
    is_normalized_tight = is_tight and abs(A - 1.0) <= tol.rel_eq and abs(B - 1.0) <= tol.rel_eq
    is_exact = is_frame and fr.n == fr.d
    condition = B / A if is_frame and A > 0 else math.inf

    tol_abs = tol.rel_eq * max(B, 1.0)
    per_vector = []
    for i in range(fr.n):
        f_i = F[:, i]
        ns = float(np.real(np.vdot(f_i, f_i)))
        S_rest = S - np.outer(f_i, f_i.conj())
        Q = _span_projector(S_rest, tol)
        proj = Q @ (Q.conj().T @ f_i) if Q.shape[1] else np.zeros_like(f_i)
        vtol = tol.rel_eq * max(1.0, math.sqrt(ns))
        if ns >= B - tol_abs:
            cls = "boundary"
            ok = float(np.linalg.norm(proj)) <= vtol
        else:
            cls = "interior"
            ok = float(np.linalg.norm(f_i - proj)) <= vtol
        per_vector.append(VectorClass(ns, cls, ok))

    return FrameDiagnostics(
        A=A,
        B=B,
        is_frame=is_frame,
        is_tight=is_tight,
        is_normalized_tight=is_normalized_tight,
        is_exact=is_exact,
        excess=fr.n - r,
        condition=condition,
        per_vector=per_vector,
    )


def _require_frame(fr: Frame):
    if rank(fr.matrix, fr.tol) != fr.d:
        raise NotAFrame(f"vectors span a proper subspace of C^{fr.d}")


def canonical_dual(fr: Frame) -> DualFrame:
    """Dual with synthesis matrix S^(-1) F; reconstruction uses its analysis."""
    _require_frame(fr)
    S_inv = psd_power(fr.frame_operator(), -1.0, fr.tol)
    return DualFrame(S_inv @ fr.matrix, canonical=True)


def is_dual(fr: Frame, H) -> bool:
    """Does synthesis with H against analysis with F reproduce the identity?"""
    H = as_matrix(H)
    if H.shape != fr.matrix.shape:
        raise ShapeMismatch(f"dual candidate shape {H.shape} != {fr.matrix.shape}")
    defect = np.linalg.norm(fr.matrix @ H.conj().T - np.eye(fr.d))
    return float(defect) <= fr.tol.rel_eq * math.sqrt(fr.d)


def dual_parametrization(fr: Frame):
    """Canonical dual plus an orthonormal basis K of the space of dual offsets.

    Every dual of F is H0 + W where F W* = 0. Such W have each row in the
    conjugate kernel of F, so with u_1..u_k an orthonormal kernel basis the
    matrices e_j u_k* form an orthonormal basis of the offset space. K holds
    their column-major vectorizations, ordered with the kernel index slowest.
    """
    _require_frame(fr)
    h0 = canonical_dual(fr)
    U = kernel_basis(fr.matrix, fr.tol)
    d, n = fr.d, fr.n
    k = U.shape[1]
    K = np.zeros((d * n, d * k), dtype=np.complex128)
    for ki in range(k):
        for j in range(d):
            W = np.outer(np.eye(d, dtype=np.complex128)[:, j], U[:, ki].conj())
            K[:, ki * d + j] = W.flatten(order="F")
    return h0, K


def canonical_tight(fr: Frame) -> Frame:
    """Closest normalized tight frame, S^(-1/2) F."""
    _require_frame(fr)
    return Frame(psd_power(fr.frame_operator(), -0.5, fr.tol) @ fr.matrix, fr.tol)


def frames_equivalent(fr1: Frame, fr2: Frame) -> bool:
    """Equivalent frames are related by an invertible map, i.e. equal kernels."""
    if fr1.n != fr2.n:
        raise CountMismatch(f"vector counts differ: {fr1.n} != {fr2.n}")
    K1 = kernel_basis(fr1.matrix, fr1.tol)
    K2 = kernel_basis(fr2.matrix, fr2.tol)
    if K1.shape[1] != K2.shape[1]:
        return False
    if K1.shape[1] == 0:
        return True
    return subspace_equal(K1, K2, fr1.tol)


def minimal_norm_check(fr: Frame, f, b):
    """Pythagoras split of a coefficient representation of f.

    Returns (|b|^2, |c|^2 + |b - c|^2) where c are the canonical-dual analysis
    coefficients. The two numbers agree for every valid representation, which
    makes c the minimal-norm one.
    """
    _require_frame(fr)
    f = as_vector(f)
    b = as_vector(b)
    if f.size != fr.d or b.size != fr.n:
        raise ShapeMismatch("vector or coefficient length is off")
    resid = np.linalg.norm(fr.matrix @ b - f)
    if float(resid) > fr.tol.rel_eq * max(float(np.linalg.norm(f)), 1.0):
        raise NotARepresentation(f"synthesis residual {resid:.3e}")
    S_inv = psd_power(fr.frame_operator(), -1.0, fr.tol)
    c = fr.matrix.conj().T @ (S_inv @ f)
    lhs = float(np.sum(np.abs(b) ** 2))
    rhs = float(np.sum(np.abs(c) ** 2) + np.sum(np.abs(b - c) ** 2))
    return lhs, rhs


def solve_moment(fr: Frame, a):
    """Least squares solve of the moment problem <f, f_i> = a_i.

    Returns the minimal-norm minimizer together with the data residual
    ||F* f - a||, which is zero exactly when the moments are attainable.
    """
    a = as_vector(a)
    if a.size != fr.n:
        raise ShapeMismatch(f"moment vector length {a.size} != {fr.n}")
    analysis = fr.matrix.conj().T
    f = pseudoinverse(analysis, fr.tol) @ a
    residual = float(np.linalg.norm(analysis @ f - a))
    return f, residual


def naimark_dilate(fr: Frame) -> NaimarkDilation:
    """Dilate to an orthonormal basis: the Gram matrix of the canonical tight
    frame is an orthogonal projection P with trace d, and compressing the
    standard basis of C^n by P reproduces the tight frame. The change factor
    S^(1/2) carries that tight frame back to the input frame."""
    _require_frame(fr)
    S = fr.frame_operator()
    T = canonical_tight(fr)
    embed = T.matrix.conj().T
    P = embed @ T.matrix
    P = (P + P.conj().T) / 2.0
    change = psd_power(S, 0.5, fr.tol)
    return NaimarkDilation(projection=P, embed=embed, change=change)


def hyperplane_energy(fr: Frame, V) -> float:
    """Energy of the frame inside the subspace spanned by orthonormal columns V."""
    V = as_matrix(V)
    if V.shape[0] != fr.d:
        raise ShapeMismatch("subspace lives in the wrong ambient dimension")
    k = V.shape[1]
    if np.linalg.norm(V.conj().T @ V - np.eye(k)) > fr.tol.rel_eq * max(1.0, math.sqrt(k)):
        raise NotOrthonormal("columns of V are not orthonormal")
    return float(np.linalg.norm(V.conj().T @ fr.matrix) ** 2)


def three_unitary_decomposition(A, eps: float = 0.5, tol: TolerancePolicy = DEFAULT_TOL):
    """Write A = a (U1 + U2 + U3) with unitary U_i and a = ||A|| / (1 - eps).

    Shift-and-scale A into an invertible contraction T = I/2 + cA, split its
    polar positive part P as the real part of the unitary W = P + i(I-P^2)^(1/2),
    and undo the shift with U3 = -I.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch("square matrix required")
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0, 1)")
    d = A.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    an = operator_norm(A)
    if an <= _TINY:
        return 0.0, (eye.copy(), eye.copy(), eye.copy())
    T = 0.5 * eye + ((1.0 - eps) / (2.0 * an)) * A
    V, P = polar(T, tol)
    W = P + 1j * psd_power(eye - P @ P, 0.5, tol)
    U1 = V @ W
    U2 = V @ W.conj().T
    U3 = -eye
    return an / (1.0 - eps), (U1, U2, U3)


def two_unitary_decomposition(A, tol: TolerancePolicy = DEFAULT_TOL):
    """Write A = (a/2)(U1 + U2) with unitary U_i and a = ||A||."""
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch("square matrix required")
    d = A.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    an = operator_norm(A)
    if an <= _TINY:
        return 0.0, (eye.copy(), -eye.copy())
    V, P = polar(A, tol)
    Pn = P / an
    W = Pn + 1j * psd_power(eye - Pn @ Pn, 0.5, tol)
    return an, (V @ W, V @ W.conj().T)


def select_riesz_subset(fr: Frame):
    """Greedy pivoted selection of a linearly independent spanning subset.

    Repeatedly takes the column with the largest residual norm (first index on
    ties) and deflates. Returns sorted 0-based indices, rank(F) of them.
    """
    F = fr.matrix
    r = rank(F, fr.tol)
    R = F.copy()
    chosen = []
    for _ in range(r):
        norms = np.sum(np.abs(R) ** 2, axis=0)
        j = int(np.argmax(norms))
        chosen.append(j)
        q = R[:, j] / np.linalg.norm(R[:, j])
        R = R - np.outer(q, q.conj() @ R)
    return sorted(chosen)


def _subset_bounds(G: np.ndarray, tol: TolerancePolicy):
    # frame bounds of a subfamily inside its own span = nonzero Gram eigenvalues
    w = np.linalg.eigvalsh((G + G.conj().T) / 2.0)
    top = max(float(w[-1]), 0.0)
    if top <= _TINY:
        return None
    nz = w[w > tol.rank_rel * top]
    return float(nz[0]), float(nz[-1])


def riesz_frame_check(
    fr: Frame,
    max_subsets: int = 20000,
    seed: int = 0,
    exhaustive=None,
) -> RieszFrameReport:
    """Do all subfamilies obey the full frame bounds inside their spans?

    Exhausts all nonempty subsets when n is small (or when forced), otherwise
    samples max_subsets random subsets. Subsets of zero vectors span {0} and
    impose no constraint.
    """
    tol = fr.tol
    F = fr.matrix
    n = fr.n
    A, B = frame_bounds(fr)
    tol_abs = tol.rel_eq * max(B, 1.0)

    if exhaustive is None:
        exhaustive = n <= 14
    if exhaustive and n > 20:
        raise TooLarge(f"exhaustive subset check infeasible for n = {n}")

    def subsets():
        if exhaustive:
            for size in range(1, n + 1):
                yield from combinations(range(n), size)
        else:
            rng = rng_for(seed, 0x51E5)
            for _ in range(max_subsets):
                mask = rng.integers(0, 2, size=n).astype(bool)
                if not mask.any():
                    mask[int(rng.integers(0, n))] = True
                yield tuple(np.nonzero(mask)[0])

    worst_violation = -1.0
    worst_subset = tuple(range(n))
    worst_bounds = (A, B)
    G_full = fr.gram()
    for J in subsets():
        idx = np.asarray(J, dtype=int)
        bounds = _subset_bounds(G_full[np.ix_(idx, idx)], tol)
        if bounds is None:
            continue
        A_J, B_J = bounds
        violation = max(A - A_J, B_J - B)
        if violation > worst_violation:
            worst_violation = violation
            worst_subset = J
            worst_bounds = (A_J, B_J)

    return RieszFrameReport(
        is_riesz_frame=worst_violation <= tol_abs,
        worst_subset=tuple(int(i) for i in worst_subset),
        worst_bounds=worst_bounds,
        exhaustive=bool(exhaustive),
    )


def mean_centered_tight_frame(n: int, tol: TolerancePolicy = DEFAULT_TOL) -> Frame:
    """Normalized tight frame of n+1 vectors in C^n: the basis vectors with
    their mean removed, plus the normalized all-ones vector. For n = 1 this
    degenerates to {0, e_1}, zero vector included."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ones = np.ones(n, dtype=np.complex128)
    cols = [np.eye(n, dtype=np.complex128)[:, i] - ones / n for i in range(n)]
    cols.append(ones / math.sqrt(n))
    return Frame(np.column_stack(cols), tol)


def staircase_frame(kind: str, depth: int, tol: TolerancePolicy = DEFAULT_TOL) -> Frame:
    """Normalized tight test families with growing substructure.

    "repeat_staircase": k copies of e_k / sqrt(k) for k = 1..depth, in C^depth.
    "block_staircase": direct sum of the mean-centered families of sizes
    1..depth, one per coordinate block.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if kind == "repeat_staircase":
        d = depth
        cols = []
        for k in range(1, depth + 1):
            e = np.eye(d, dtype=np.complex128)[:, k - 1]
            cols.extend([e / math.sqrt(k)] * k)
        return Frame(np.column_stack(cols), tol)
    if kind == "block_staircase":
        d = depth * (depth + 1) // 2
        n_total = sum(k + 1 for k in range(1, depth + 1))
        M = np.zeros((d, n_total), dtype=np.complex128)
        row = col = 0
        for k in range(1, depth + 1):
            blk = mean_centered_tight_frame(k, tol).matrix
            M[row : row + k, col : col + k + 1] = blk
            row += k
            col += k + 1
        return Frame(M, tol)
    raise ValueError(f"unknown staircase kind {kind!r}")
