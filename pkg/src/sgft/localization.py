"""Personalized-PageRank windows from the closed-form local spectral solution.

The locally biased spectral problem is never solved iteratively. Its optimum
is ``x* = c (L - gamma D)^+ D s``, which in terms of the normalized-Laplacian
eigenbasis ``U`` reads::

    x* = c * D^(-1/2) U (Lambda - gamma I)^+ U^T D^(1/2) s

so once ``U`` is known a window costs one small diagonal scaling and one
matrix-vector product. ``gamma`` is always parameterized as
``lambda_1 - beta`` with ``beta > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DataError,
    DegenerateWindow,
    GammaOutOfRange,
    PreconditionViolated,
    VertexOutOfRange,
)
from .graph import Graph, SeedVector, unit_seed
from .spectral import EigenBasis

__all__ = [
    "LocalizationParams",
    "Window",
    "WindowCache",
    "local_spectral_solution",
    "verify_ppr",
    "window",
    "window_matrix",
    "write_window",
]

#: spectral modes with |lambda_k - gamma| below this are dropped (pseudoinverse)
PINV_TOL = 1e-12

#: vertices per block in batched window computation; fixed so that results do
#: not depend on how blocks are distributed over threads
BLOCK_SIZE = 64


@dataclass(frozen=True)
class LocalizationParams:
    """Parameters of the local spectral solution.

    Attributes
    ----------
    beta : float
        Positive offset; ``gamma = lambda_1 - beta``.
    c : float
        Positive output scale. Windows do not depend on it.
    num_eigs : int, optional
        Number of leading eigenpairs used (default: every mode in the basis).
    """

    beta: float
    c: float = 1.0
    num_eigs: int | None = None

    def __post_init__(self):
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise DataError(f"beta must be positive, got {self.beta}")
        if not (np.isfinite(self.c) and self.c > 0):
            raise DataError(f"c must be positive, got {self.c}")
        if self.num_eigs is not None and self.num_eigs < 1:
            raise DataError(f"num_eigs must be >= 1, got {self.num_eigs}")

    @classmethod
    def ppr(cls, basis: EigenBasis, beta: float, num_eigs: int | None = None):
        """Parameters with ``c = -gamma``, the personalized PageRank scaling."""
        gamma = float(basis.eigenvalues[0]) - beta
        if gamma >= 0:
            raise PreconditionViolated(f"gamma = {gamma:g} is not negative")
        return cls(beta=beta, c=-gamma, num_eigs=num_eigs)

    def gamma(self, basis: EigenBasis) -> float:
        return float(basis.eigenvalues[0]) - self.beta

    def restrict(self, basis: EigenBasis) -> EigenBasis:
        """The basis truncated to ``num_eigs`` modes."""
        if self.num_eigs is None:
            return basis
        if self.num_eigs > basis.K:
            raise DataError(f"num_eigs={self.num_eigs} exceeds the {basis.K} available modes")
        return basis.truncate(self.num_eigs)

    def key(self, basis: EigenBasis) -> tuple:
        return (self.beta, self.c, self.num_eigs or basis.K)


@dataclass(frozen=True, eq=False)
class Window:
    """Nonnegative, L1-normalized vertex function centred on ``seed``."""

    values: np.ndarray
    seed: int
    params: LocalizationParams

    @property
    def argmax(self) -> int:
        return int(np.argmax(self.values))


def _spectral_setup(g: Graph, basis: EigenBasis, params: LocalizationParams, gamma=None):
    if basis.operator_kind != "normalized_laplacian":
        raise DataError(f"localization needs a normalized-Laplacian basis, got {basis.operator_kind}")
    if basis.n != g.n:
        raise DataError(f"basis has n={basis.n}, graph has n={g.n}")
    basis = params.restrict(basis)
    lam = basis.eigenvalues
    if gamma is None:
        gamma = float(lam[0]) - params.beta
    if basis.K >= 2 and gamma >= lam[1]:
        raise GammaOutOfRange(f"gamma={gamma:g} must be below lambda_2={lam[1]:g}")
    shift = lam - gamma
    keep = np.abs(shift) >= PINV_TOL
    inv = np.zeros_like(shift)
    inv[keep] = 1.0 / shift[keep]
    return basis, inv


def local_spectral_solution(
    g: Graph,
    basis: EigenBasis,
    s: SeedVector | np.ndarray,
    params: LocalizationParams,
    *,
    gamma: float | None = None,
) -> np.ndarray:
    """Closed-form optimum ``x*`` for seed vector ``s``.

    ``gamma`` defaults to ``lambda_1 - params.beta``. Passing it explicitly
    reaches the rest of the admissible range ``(lambda_1, lambda_2)``.

    Raises
    ------
    GammaOutOfRange
        If ``gamma >= lambda_2``.
    """
    basis, inv = _spectral_setup(g, basis, params, gamma)
    s = np.asarray(getattr(s, "values", s), dtype=float)
    if s.shape != (g.n,):
        raise DataError(f"seed vector has shape {s.shape}, expected ({g.n},)")
    sqrt_d = np.sqrt(g.degrees)
    U = basis.eigenvectors
    coef = U.T @ (sqrt_d * s)
    return params.c * (U @ (inv * coef)) / sqrt_d


def verify_ppr(
    g: Graph,
    basis: EigenBasis,
    x_star: np.ndarray,
    s: SeedVector | np.ndarray,
    params: LocalizationParams,
) -> float:
    """Relative residual of ``x_star`` in the degree-normalized PPR equation.

    With ``alpha = 1 / (1 - gamma)`` this returns::

        || D p - (1 - alpha) D s - alpha A D^(-1) D p || / || D p ||

    for ``p = x_star``. Only meaningful when ``gamma < 0``, ``c = -gamma``
    and the basis is complete; otherwise :class:`PreconditionViolated`.
    """
    gamma = params.gamma(basis)
    if gamma >= 0:
        raise PreconditionViolated(f"gamma = {gamma:g} must be negative")
    if not np.isclose(params.c, -gamma, rtol=1e-12, atol=0.0):
        raise PreconditionViolated(f"c = {params.c:g} must equal -gamma = {-gamma:g}")
    if not params.restrict(basis).is_full:
        raise PreconditionViolated("PPR identity requires the full eigenbasis")
    s = np.asarray(getattr(s, "values", s), dtype=float)
    p = np.asarray(x_star, dtype=float)
    alpha = 1.0 / (1.0 - gamma)
    Dp = g.degrees * p
    resid = Dp - (1.0 - alpha) * (g.degrees * s) - alpha * (g.adjacency @ p)
    return float(np.linalg.norm(resid) / np.linalg.norm(Dp))


def _check_vertex(g: Graph, i) -> int:
    if isinstance(i, (bool, np.bool_)) or not float(i).is_integer():
        raise VertexOutOfRange(f"vertex index must be an integer, got {i!r}")
    i = int(i)
    if not 0 <= i < g.n:
        raise VertexOutOfRange(f"vertex {i} outside [0, {g.n})")
    return i


def _normalize(x: np.ndarray, seed: int) -> np.ndarray:
    pos = np.maximum(x, 0.0)
    mass = pos.sum()
    if not mass > 0:
        raise DegenerateWindow(f"local solution at vertex {seed} has no positive entry")
    return pos / mass


def _seed_inverse(g, basis, params):
    # unit seeds satisfy s^T D 1 = 0, so their projection on the constant mode
    # u_1 is exactly zero; dropping that term avoids amplifying its rounding
    # error by 1 / beta
    basis, inv = _spectral_setup(g, basis, params)
    inv = inv.copy()
    inv[0] = 0.0
    return basis, inv


def window(g: Graph, basis: EigenBasis, i: int, params: LocalizationParams) -> Window:
    """Localized window at vertex ``i``: ``max(0, x*) / ||max(0, x*)||_1``."""
    i = _check_vertex(g, i)
    basis, inv = _seed_inverse(g, basis, params)
    s = unit_seed(g, [i]).values
    sqrt_d = np.sqrt(g.degrees)
    U = basis.eigenvectors
    x = params.c * (U @ (inv * (U.T @ (sqrt_d * s)))) / sqrt_d
    w = _normalize(x, i)
    w.flags.writeable = False
    return Window(values=w, seed=i, params=params)


def _window_block(g, basis, inv, c, sqrt_d, proj_sqrt_d, vertices) -> np.ndarray:
    # For s = unit({i}): D^(1/2) s = a_i sqrt(d_i) e_i - r_i sqrt(d), so its
    # projection onto U is a rank-one update of the shared vector U^T sqrt(d).
    d = g.degrees[vertices]
    vol = g.vol
    b = np.sqrt(d * (vol - d) / vol)
    r = b / (vol - d)
    a = b / d + r
    U = basis.eigenvectors
    coef = (a * np.sqrt(d))[None, :] * U[vertices, :].T - np.outer(proj_sqrt_d, r)
    X = (c * (U @ (inv[:, None] * coef))) / sqrt_d[:, None]
    W = np.maximum(X, 0.0)
    mass = W.sum(axis=0)
    bad = ~(mass > 0)
    if bad.any():
        raise DegenerateWindow(f"local solution at vertex {vertices[np.argmax(bad)]} has no positive entry")
    return W / mass


def window_matrix(
    g: Graph,
    basis: EigenBasis,
    params: LocalizationParams,
    vertices: Sequence[int] | None = None,
    threads: int = 1,
) -> np.ndarray:
    """Windows for several vertices at once, one per column.

    Returns an array of shape ``(n, len(vertices))``. Vertices are processed in
    fixed blocks of :data:`BLOCK_SIZE`, so the result is bitwise independent
    of ``threads``.
    """
    basis, inv = _seed_inverse(g, basis, params)
    if vertices is None:
        vertices = np.arange(g.n)
    vertices = np.array([_check_vertex(g, v) for v in vertices], dtype=np.int64)
    sqrt_d = np.sqrt(g.degrees)
    proj = basis.eigenvectors.T @ sqrt_d
    out = np.empty((g.n, len(vertices)))
    blocks = [slice(k, k + BLOCK_SIZE) for k in range(0, len(vertices), BLOCK_SIZE)]

    def run(sl):
        out[:, sl] = _window_block(g, basis, inv, params.c, sqrt_d, proj, vertices[sl])

    _run_blocks(run, blocks, threads)
    return out


def _run_blocks(fn, blocks, threads: int) -> None:
    if threads <= 1 or len(blocks) <= 1:
        for b in blocks:
            fn(b)
        return
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        for fut in [pool.submit(fn, b) for b in blocks]:
            fut.result()


class WindowCache:
    """Memoizes window columns per ``(beta, c, K, vertex)``."""

    def __init__(self, g: Graph, basis: EigenBasis):
        self.g = g
        self.basis = basis
        self._store: dict[tuple, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self._store)

    def get(self, params: LocalizationParams, vertices: Iterable[int], threads: int = 1) -> np.ndarray:
        vertices = [_check_vertex(self.g, v) for v in vertices]
        key = params.key(self.basis)
        missing = sorted({v for v in vertices if key + (v,) not in self._store})
        if missing:
            W = window_matrix(self.g, self.basis, params, missing, threads=threads)
            for col, v in enumerate(missing):
                self._store[key + (v,)] = W[:, col]
        if not vertices:
            return np.empty((self.g.n, 0))
        return np.column_stack([self._store[key + (v,)] for v in vertices])


def write_window(w: Window | np.ndarray, path: str | PathLike, header: str | None = None) -> None:
    """Two-column text export: vertex index and weight."""
    values = np.asarray(getattr(w, "values", w))
    with open(path, "w") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for i, v in enumerate(values):
            fh.write(f"{i} {v:.17g}\n")
