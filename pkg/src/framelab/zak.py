"""Discrete Zak transform on Z_L.

For a | L and N = L/a the transform of g is the a x N array

    Zg[r][j] = sum_{k=0}^{N-1} g[(r + k*a) mod L] * exp(2*pi*i*k*j/N),

r = 0..a-1, j = 0..N-1. It is a bijection onto C^(a x N) with
sum |Zg|^2 = N ||g||^2, and extends to all integer indices through

    Zg[r + a][j] = exp(-2*pi*i*j/N) * Zg[r][j],      Zg[r][j + N] = Zg[r][j].

At critical density (a*b = L) the Zak transform diagonalizes the frame
operator: the spectrum of S is exactly {M * |Zg[r][j]|^2}.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadDivisor, NotCriticalDensity, ShapeMismatch
from .gabor import GaborSystem, correlation_table
from .linalg import as_vector


@dataclass
class ZakArray:
    a: int
    N: int
    values: np.ndarray  # a x N


def zak_forward(g, a: int) -> ZakArray:
    g = as_vector(g)
    L = g.size
    a = int(a)
    if a < 1 or L % a != 0:
        raise BadDivisor(f"a = {a} does not divide L = {L}")
    N = L // a
    arr = g.reshape(N, a)  # arr[k, r] = g[k*a + r]
    Z = (np.fft.ifft(arr, axis=0) * N).T
    return ZakArray(a=a, N=N, values=np.ascontiguousarray(Z))


def zak_inverse(Z: ZakArray, L: int) -> np.ndarray:
    if Z.values.shape != (Z.a, Z.N) or Z.a * Z.N != L:
        raise ShapeMismatch(f"Zak array {Z.values.shape} does not match a*N = L = {L}")
    G = np.fft.fft(Z.values, axis=1) / Z.N  # G[r, k] = g[k*a + r]
    return np.ascontiguousarray(G.T).reshape(L)


def zak_extend(Z: ZakArray, r: int, j: int) -> complex:
    """Value at arbitrary integer indices via quasi-periodicity."""
    p, r0 = divmod(int(r), Z.a)
    j0 = int(j) % Z.N
    return complex(np.exp(-2j * np.pi * p * j0 / Z.N) * Z.values[r0, j0])


def critical_spectrum(sys: GaborSystem) -> np.ndarray:
    """Eigenvalues of the frame operator at critical density, ascending.

    The system is complete iff all values exceed zero at tolerance, and an
    orthonormal basis iff they all equal one.
    """
    if not sys.is_critical:
        raise NotCriticalDensity(f"a*b = {sys.a * sys.b} != L = {sys.L}")
    Z = zak_forward(sys.window, sys.a)
    return np.sort((sys.M * np.abs(Z.values) ** 2).ravel())


def walnut_partial_norm(sys: GaborSystem, kset) -> float:
    """Operator norm of the Walnut partial sum over k in kset, at critical
    density, where the Zak symbol M * sum_k G[k][r] e^(-2 pi i k j / N)
    diagonalizes it (the j-range is reflection closed, so either kernel sign
    yields the same maximum)."""
    if not sys.is_critical:
        raise NotCriticalDensity(f"a*b = {sys.a * sys.b} != L = {sys.L}")
    ks = sorted(set(int(k) for k in kset))
    if any(k < 0 or k >= sys.b for k in ks):
        raise ValueError(f"k indices must lie in [0, {sys.b})")
    if not ks:
        return 0.0
    G = correlation_table(sys).table
    j = np.arange(sys.N)
    symbol = np.zeros((sys.a, sys.N), dtype=np.complex128)
    for k in ks:
        symbol += G[k][:, None] * np.exp(-2j * np.pi * k * j / sys.N)[None, :]
    return float(sys.M * np.abs(symbol).max())
