"""Convolutional windowed graph Fourier transform (comparison baseline).

Windows are heat kernels ``g_hat_k = exp(-tau * lambda_k)`` over the
combinatorial Laplacian spectrum, moved to vertex ``i`` by spectral-domain
translation and modulated by the Laplacian eigenvectors ``V``. The window is
never renormalized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .localization import _run_blocks, BLOCK_SIZE
from .spectral import EigenBasis, gft
from .transform import SpectrogramMatrix, _check_frequency, spectrogram_from_windows

__all__ = [
    "HeatKernelWindow",
    "heat_kernel",
    "graph_convolve",
    "translate",
    "translation_matrix",
    "baseline_modulate",
    "baseline_sgft",
    "baseline_spectrogram",
]


@dataclass(frozen=True, eq=False)
class HeatKernelWindow:
    tau: float
    spectrum: np.ndarray
    values: np.ndarray


def _require_combinatorial(basis: EigenBasis) -> None:
    if basis.operator_kind != "combinatorial_laplacian":
        raise DataError(f"baseline needs a combinatorial-Laplacian basis, got {basis.operator_kind}")


def _vec(basis: EigenBasis, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.n,):
        raise DataError(f"vector has shape {x.shape}, expected ({basis.n},)")
    return x


def heat_kernel(basis: EigenBasis, tau: float) -> HeatKernelWindow:
    """Heat-kernel window ``g = V exp(-tau Lambda_L)``."""
    if not (np.isfinite(tau) and tau > 0):
        raise DataError(f"tau must be positive, got {tau}")
    basis.require_full()
    lam = np.maximum(basis.eigenvalues, 0.0)
    # the Laplacian kernel eigenvalue is exactly zero; snap its rounding error
    # so the constant mode passes unattenuated
    if lam[0] <= 1e-10 * max(1.0, lam[-1]):
        lam = lam.copy()
        lam[0] = 0.0
    ghat = np.exp(-tau * lam)
    return HeatKernelWindow(tau=float(tau), spectrum=ghat, values=basis.eigenvectors @ ghat)


def graph_convolve(basis: EigenBasis, f, g) -> np.ndarray:
    """Spectral convolution ``V (f_hat * g_hat)``."""
    basis.require_full()
    return basis.eigenvectors @ (gft(basis, _vec(basis, f)) * gft(basis, _vec(basis, g)))


def translate(basis: EigenBasis, i: int, g) -> np.ndarray:
    """Generalized translation ``T_i g = sqrt(n) V (V[i, :] * g_hat)``."""
    basis.require_full()
    if not 0 <= i < basis.n:
        raise DataError(f"vertex {i} outside [0, {basis.n})")
    ghat = gft(basis, _vec(basis, g))
    return np.sqrt(basis.n) * (basis.eigenvectors @ (basis.eigenvectors[i] * ghat))


def translation_matrix(basis: EigenBasis, ghat: np.ndarray, vertices) -> np.ndarray:
    """Columns ``T_i g`` for each vertex, given the window spectrum ``ghat``."""
    basis.require_full()
    V = basis.eigenvectors
    return np.sqrt(basis.n) * ((V * ghat) @ V[vertices].T)


def baseline_modulate(basis: EigenBasis, k: int, f) -> np.ndarray:
    """``M~_k f = sqrt(n) f * V[:, k]`` (``k`` is 1-based)."""
    k = _check_frequency(k, basis.K)
    return np.sqrt(basis.n) * _vec(basis, f) * basis.eigenvectors[:, k - 1]


def baseline_sgft(basis: EigenBasis, f, i: int, k: int, tau: float) -> float:
    """``<f, M~_k T_i g>`` with the heat-kernel window ``g``."""
    _require_combinatorial(basis)
    g = heat_kernel(basis, tau)
    return float(_vec(basis, f) @ baseline_modulate(basis, k, translate(basis, i, g.values)))


def baseline_spectrogram(
    basis: EigenBasis,
    f,
    tau: float,
    num_eigs: int | None = None,
    vertices=None,
    *,
    threads: int = 1,
) -> SpectrogramMatrix:
    """Spectrogram of the convolutional transform for ``k = 1..num_eigs``.

    Translation always uses every mode of ``basis``; ``num_eigs`` limits only
    the modulation frequencies.
    """
    _require_combinatorial(basis)
    f = _vec(basis, f)
    K = basis.K if num_eigs is None else int(num_eigs)
    if not 1 <= K <= basis.K:
        raise DataError(f"num_eigs must be in [1, {basis.K}], got {num_eigs}")
    if vertices is None:
        vertices = np.arange(basis.n)
    vertices = np.asarray(vertices, dtype=np.int64)
    if vertices.size and (vertices.min() < 0 or vertices.max() >= basis.n):
        raise DataError(f"vertices must lie in [0, {basis.n})")
    ghat = heat_kernel(basis, tau).spectrum
    T = np.empty((basis.n, len(vertices)))
    blocks = [slice(k, k + BLOCK_SIZE) for k in range(0, len(vertices), BLOCK_SIZE)]

    def run(sl):
        T[:, sl] = translation_matrix(basis, ghat, vertices[sl])

    _run_blocks(run, blocks, threads)
    modulation = np.sqrt(basis.n) * basis.eigenvectors[:, :K]
    values = spectrogram_from_windows(f, T, modulation, threads=threads)
    return SpectrogramMatrix(values=values, vertices=vertices, method="conv", params={"tau": float(tau), "K": K})
