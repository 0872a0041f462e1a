"""Graph modulation, the short-graph Fourier transform and spectrograms.

Frequency indices ``k`` are 1-based throughout (``k = 1`` is the constant
mode), vertex indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DimensionMismatch, FrequencyOutOfRange, VertexOutOfRange, ZeroVarianceSignature
from .graph import Graph
from .localization import (
    BLOCK_SIZE,
    LocalizationParams,
    WindowCache,
    _check_vertex,
    _run_blocks,
    window,
    window_matrix,
)
from .spectral import EigenBasis, eigenvalue_clusters

__all__ = [
    "SpectrogramMatrix",
    "modulate",
    "modulation_matrix",
    "sgft",
    "spectrogram",
    "spectrogram_from_windows",
    "dominant_frequency_map",
    "signature_correlation",
    "cluster_energies",
]


@dataclass(frozen=True, eq=False)
class SpectrogramMatrix:
    """Squared SGFT magnitudes, one row per vertex and one column per frequency.

    ``values[r, k - 1]`` is the spectrogram at vertex ``vertices[r]`` and
    frequency ``k``.
    """

    values: np.ndarray
    vertices: np.ndarray
    method: str = "ppr"
    params: dict = field(default_factory=dict)

    @property
    def K(self) -> int:
        return self.values.shape[1]

    def row(self, vertex: int) -> np.ndarray:
        return self.values[self.row_index(vertex)]

    def row_index(self, vertex: int) -> int:
        hits = np.flatnonzero(self.vertices == vertex)
        if hits.size == 0:
            raise VertexOutOfRange(f"vertex {vertex} is not in this spectrogram")
        return int(hits[0])


def _signal(g: Graph, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (g.n,):
        raise DimensionMismatch(f"signal has shape {f.shape}, graph has n={g.n}")
    return f


def _check_frequency(k, K: int) -> int:
    if isinstance(k, (bool, np.bool_)) or not float(k).is_integer() or not 1 <= k <= K:
        raise FrequencyOutOfRange(f"frequency index {k!r} outside [1, {K}]")
    return int(k)


def modulation_matrix(g: Graph, basis: EigenBasis) -> np.ndarray:
    """Columns ``sqrt(vol V) D^(-1/2) u_k``; column ``k - 1`` modulates by ``k``."""
    if basis.operator_kind != "normalized_laplacian":
        raise DataError(f"modulation needs a normalized-Laplacian basis, got {basis.operator_kind}")
    if basis.n != g.n:
        raise DataError(f"basis has n={basis.n}, graph has n={g.n}")
    return np.sqrt(g.vol) * basis.eigenvectors / np.sqrt(g.degrees)[:, None]


def modulate(g: Graph, basis: EigenBasis, k: int, f) -> np.ndarray:
    """Graph modulation ``M_k f = sqrt(vol V) f * (D^(-1/2) U)[:, k]``."""
    k = _check_frequency(k, basis.K)
    f = _signal(g, f)
    if basis.operator_kind != "normalized_laplacian":
        raise DataError(f"modulation needs a normalized-Laplacian basis, got {basis.operator_kind}")
    return np.sqrt(g.vol) * f * basis.eigenvectors[:, k - 1] / np.sqrt(g.degrees)


def sgft(g: Graph, basis: EigenBasis, f, i: int, k: int, params: LocalizationParams) -> float:
    """``SGFT_f(i, k) = <f, M_k w_i>``."""
    f = _signal(g, f)
    K = params.restrict(basis).K
    k = _check_frequency(k, K)
    w = window(g, basis, i, params)
    return float(f @ modulate(g, basis, k, w.values))


def spectrogram_from_windows(
    f: np.ndarray,
    windows: np.ndarray,
    modulation: np.ndarray,
    threads: int = 1,
) -> np.ndarray:
    """Squared inner products ``<f, m_k * w_i>`` for window columns ``w_i``.

    Shared by the PPR transform and the convolutional baseline; only the
    window family and the modulation vectors differ between the two.
    """
    n_vert = windows.shape[1]
    out = np.empty((n_vert, modulation.shape[1]))
    blocks = [slice(k, k + BLOCK_SIZE) for k in range(0, n_vert, BLOCK_SIZE)]

    def run(sl):
        coeffs = (f[:, None] * windows[:, sl]).T @ modulation
        out[sl] = coeffs * coeffs

    _run_blocks(run, blocks, threads)
    return out


def spectrogram(
    g: Graph,
    basis: EigenBasis,
    f,
    params: LocalizationParams,
    vertices=None,
    *,
    threads: int = 1,
    cache: WindowCache | None = None,
) -> SpectrogramMatrix:
    """Spectrogram ``|SGFT_f(i, k)|^2`` for ``k = 1..K`` and the given vertices.

    Each window is computed once and reused for every frequency. Rows are
    independent, so ``vertices`` selects rows without changing their values.
    """
    f = _signal(g, f)
    sub = params.restrict(basis)
    if vertices is None:
        vertices = np.arange(g.n)
    vertices = np.array([_check_vertex(g, v) for v in vertices], dtype=np.int64)
    if cache is not None:
        W = cache.get(params, vertices, threads=threads)
    else:
        W = window_matrix(g, basis, params, vertices, threads=threads)
    values = spectrogram_from_windows(f, W, modulation_matrix(g, sub), threads=threads)
    return SpectrogramMatrix(
        values=values,
        vertices=vertices,
        method="ppr",
        params={"beta": params.beta, "K": sub.K},
    )


def dominant_frequency_map(spec: SpectrogramMatrix) -> np.ndarray:
    """Per-vertex 1-based index of the largest spectrogram entry.

    Ties go to the smallest index, so an all-zero row maps to 1.
    """
    if spec.values.size == 0:
        raise DataError("empty spectrogram")
    return np.argmax(spec.values, axis=1) + 1


def signature_correlation(spec: SpectrogramMatrix, i: int) -> np.ndarray:
    """Pearson correlation between the signature of vertex ``i`` and all others.

    A signature is a vertex's spectrogram row. Entries for vertices whose
    signature is constant are NaN; a constant signature at ``i`` itself raises
    :class:`ZeroVarianceSignature`.
    """
    r = spec.row_index(i)
    X = spec.values - spec.values.mean(axis=1, keepdims=True)
    norms = np.linalg.norm(X, axis=1)
    if norms[r] == 0:
        raise ZeroVarianceSignature(f"signature of vertex {i} is constant")
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = (X @ X[r]) / (norms * norms[r])
    corr[norms == 0] = np.nan
    corr[r] = 1.0
    return np.clip(corr, -1.0, 1.0)


def cluster_energies(spec: SpectrogramMatrix, eigenvalues, tol: float = 1e-8) -> np.ndarray:
    """Spectrogram energy summed over each degenerate eigenvalue cluster.

    Individual columns inside a cluster depend on the arbitrary basis chosen
    by the eigensolver; the per-cluster sums do not.
    """
    lam = np.asarray(eigenvalues)[: spec.K]
    clusters = eigenvalue_clusters(lam, tol)
    return np.column_stack([spec.values[:, c].sum(axis=1) for c in clusters])
