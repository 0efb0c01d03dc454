import numpy as np

from framelab.linalg import rng_for


def crandn(rng, *shape):
    """Complex standard normal array."""
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(rng, d):
    A = crandn(rng, d, d)
    return (A + A.conj().T) / 2.0


def random_psd(rng, d, r=None):
    r = d if r is None else r
    B = crandn(rng, d, r)
    return B @ B.conj().T


def random_frame_matrix(rng, d, n):
    """Random d x n matrix that spans C^d (n >= d)."""
    assert n >= d
    while True:
        F = crandn(rng, d, n)
        s = np.linalg.svd(F, compute_uv=False)
        if s[d - 1] > 1e-3:
            return F


def random_unit_vector(rng, d):
    v = crandn(rng, d)
    return v / np.linalg.norm(v)


__all__ = [
    "crandn",
    "random_hermitian",
    "random_psd",
    "random_frame_matrix",
    "random_unit_vector",
    "rng_for",
]
