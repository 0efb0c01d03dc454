"""Finite sections of the frame operator and projection-method diagnostics.

Given a nested chain of index sets I_1 ⊆ ... ⊆ I_p covering all columns, the
m-th section operator is S_m = sum_{i in I_m} f_i f_i*, inverted on its span
K_m. Inverting sections approximates the true dual coefficients <f, S^(-1)f_i>;
the trace records stage by stage how well, together with the growth of the
section inverse norms. A chain whose inverse norms stay uniformly small is the
finite rendering of a conditional Riesz frame, and for such chains the
coefficient approximation converges; spiky profiles are where it stalls.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import BadIndexSets, NotAFrame, ShapeMismatch
from .frames import Frame
from .linalg import (
    TolerancePolicy,
    as_vector,
    kernel_basis,
    orthonormal_range,
    psd_power,
    rank,
)

_TINY = 1e-300


@dataclass(frozen=True)
class ProjectionTrace:
    """Stage-by-stage record of the finite-section approximation.

    strong_errors[m][p] is the squared coefficient mismatch
    sum_{i in I_m} |<f_p, S_m^(-1) f_i> - <f_p, S^(-1) f_i>|^2 for probe p;
    projection_errors[m][p] is ||S^(-1) P_m f_p - S^(-1) f_p|| with P_m the
    orthogonal projection onto K_m; kernel_errors[m][j] is the norm of the
    section dual applied to the j-th synthesis-kernel direction, restricted
    to I_m. The cond106 flags summarize whether each diagnostic reached zero
    at the final (full) stage and whether the inverse norms stayed bounded.
    """

    index_sets: tuple
    dims: tuple
    inv_norms: tuple
    strong_errors: tuple
    projection_errors: tuple
    kernel_errors: tuple
    cond106: dict


def prefix_sections(n: int) -> list:
    """The increasing prefix chain (0,), (0,1), ..., full."""
    if n < 1:
        raise ValueError("need at least one column")
    return [tuple(range(m + 1)) for m in range(n)]


def _normalize_index_sets(index_sets, n: int) -> tuple:
    if index_sets is None:
        index_sets = prefix_sections(n)
    chain = list(index_sets)
    if not chain:
        raise BadIndexSets("at least one index set is required")
    out = []
    prev = set()
    for raw in chain:
        idx = list(raw)
        if not idx:
            raise BadIndexSets("index sets must be nonempty")
        for i in idx:
            if not isinstance(i, (int, np.integer)):
                raise BadIndexSets(f"index {i!r} is not an integer")
            if not 0 <= int(i) < n:
                raise BadIndexSets(f"index {int(i)} out of range for {n} columns")
        cur = {int(i) for i in idx}
        if len(cur) != len(idx):
            raise BadIndexSets("duplicate index within a set")
        if not prev <= cur:
            raise BadIndexSets("index sets must be nested")
        prev = cur
        out.append(tuple(sorted(cur)))
    if out[-1] != tuple(range(n)):
        raise BadIndexSets("the last index set must cover every column")
    return tuple(out)


def _section_pinv(cols: np.ndarray, tol: TolerancePolicy):
    """Pseudo-inverse of cols @ cols* on its span, plus span data.

    Returns (Q, S_m^+, 1/lambda_min^+). The compression Q* S_m Q to an
    orthonormal basis of K_m is positive definite whenever K_m is nontrivial.
    """
    d = cols.shape[0]
    Q = orthonormal_range(cols, tol)
    if Q.shape[1] == 0:
        return Q, np.zeros((d, d), dtype=np.complex128), 0.0
    C = Q.conj().T @ cols
    C = C @ C.conj().T
    C = (C + C.conj().T) / 2.0
    w, V = np.linalg.eigh(C)
    lam = max(float(w[0]), _TINY)
    QV = Q @ V
    pinv = (QV / w) @ QV.conj().T
    return Q, pinv, 1.0 / lam


def finite_sections(fr: Frame, index_sets=None, probes=()) -> ProjectionTrace:
    """Run the section chain and compare against the exact dual coefficients.

    index_sets defaults to the prefix chain of the column order; any nested
    nonempty chain ending at the full index set is accepted.
    """
    sets = _normalize_index_sets(index_sets, fr.n)
    F = fr.matrix
    tol = fr.tol
    if rank(F, tol) < fr.d:
        raise NotAFrame("section traces compare against the inverse frame operator")
    S_inv = psd_power(fr.frame_operator(), -1.0, tol)
    dual = S_inv @ F

    probe_vecs = []
    for p in probes:
        v = as_vector(p)
        if v.shape[0] != fr.d:
            raise ShapeMismatch(f"probe length {v.shape[0]} != dimension {fr.d}")
        probe_vecs.append(v)
    refs = [dual.conj().T @ f for f in probe_vecs]
    sref = [S_inv @ f for f in probe_vecs]
    KB = kernel_basis(F, tol)

    dims, inv_norms = [], []
    strong, proj, kerr = [], [], []
    for idx in sets:
        ii = list(idx)
        cols = F[:, ii]
        Q, Smp, inv_norm = _section_pinv(cols, tol)
        dims.append(Q.shape[1])
        inv_norms.append(inv_norm)
        sm_cols = Smp @ cols
        row_s, row_p = [], []
        for f, ref, sf in zip(probe_vecs, refs, sref):
            approx = sm_cols.conj().T @ f
            row_s.append(float(np.linalg.norm(approx - ref[ii]) ** 2))
            captured = Q @ (Q.conj().T @ f)
            row_p.append(float(np.linalg.norm(S_inv @ captured - sf)))
        strong.append(tuple(row_s))
        proj.append(tuple(row_p))
        row_k = []
        for j in range(KB.shape[1]):
            v = cols @ KB[ii, j]
            row_k.append(float(np.linalg.norm(Smp @ v)))
        kerr.append(tuple(row_k))

    sup_inv = max(inv_norms)
    ok_strong = all(
        strong[-1][p] <= tol.rel_eq * max(1.0, float(np.linalg.norm(refs[p]) ** 2))
        for p in range(len(probe_vecs))
    )
    ok_proj = all(
        proj[-1][p] <= tol.rel_eq * max(1.0, float(np.linalg.norm(sref[p])))
        for p in range(len(probe_vecs))
    )
    ok_kernel = all(e <= tol.rel_eq * max(1.0, sup_inv) for e in kerr[-1])
    cond106 = {
        "bounded_inverses": bool(math.isfinite(sup_inv)),
        "strong_method": bool(ok_strong),
        "projection_limit": bool(ok_proj),
        "kernel_vanishing": bool(ok_kernel),
    }
    return ProjectionTrace(
        index_sets=sets,
        dims=tuple(dims),
        inv_norms=tuple(inv_norms),
        strong_errors=tuple(strong),
        projection_errors=tuple(proj),
        kernel_errors=tuple(kerr),
        cond106=cond106,
    )


def conditional_riesz_report(fr: Frame, index_sets=None) -> dict:
    """Growth of the section inverse norms along the chain.

    Every finite chain has a finite sup, so the profile against stage index
    carries the content: flat means the sections are uniformly invertible,
    spikes mark stages whose span is captured only by ill-conditioned pieces.
    """
    tr = finite_sections(fr, index_sets)
    return {
        "sup_inv_norm": max(tr.inv_norms),
        "growth_profile": list(tr.inv_norms),
    }
