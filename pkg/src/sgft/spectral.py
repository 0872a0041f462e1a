"""Symmetric eigendecomposition, the graph Fourier transform and basis caching."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from os import PathLike

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .errors import CacheError, ConvergenceFailure, DataError, NotSymmetric, TruncatedBasis
from .graph import Graph, laplacian, normalized_laplacian

__all__ = [
    "EigenBasis",
    "eigendecompose",
    "normalized_basis",
    "combinatorial_basis",
    "gft",
    "igft",
    "eigenvalue_clusters",
    "save_basis",
    "load_basis",
    "CACHE_MAGIC",
]

OPERATOR_KINDS = ("normalized_laplacian", "combinatorial_laplacian", "generic")

#: eigenvalues closer than this are treated as one degenerate cluster
CLUSTER_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """The ``K`` smallest eigenpairs of a symmetric operator.

    Eigenvalues are nondecreasing and each eigenvector is scaled so that its
    entry of largest magnitude is positive.
    """

    operator_kind: str
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    graph_hash: str | None = None

    @property
    def n(self) -> int:
        return self.eigenvectors.shape[0]

    @property
    def K(self) -> int:
        return self.eigenvectors.shape[1]

    @property
    def is_full(self) -> bool:
        return self.K == self.n

    def truncate(self, K: int) -> "EigenBasis":
        if not 1 <= K <= self.K:
            raise DataError(f"cannot truncate a {self.K}-mode basis to K={K}")
        if K == self.K:
            return self
        return EigenBasis(
            self.operator_kind,
            _frozen(self.eigenvalues[:K]),
            _frozen(self.eigenvectors[:, :K]),
            self.graph_hash,
        )

    def require_full(self) -> None:
        if not self.is_full:
            raise TruncatedBasis(f"operation needs the full basis (K={self.K} < n={self.n})")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def _fix_signs(Q: np.ndarray) -> np.ndarray:
    cols = np.arange(Q.shape[1])
    pivot = np.argmax(np.abs(Q), axis=0)
    signs = np.where(Q[pivot, cols] < 0, -1.0, 1.0)
    return Q * signs


def eigendecompose(
    matrix,
    K: int | None = None,
    *,
    operator_kind: str = "generic",
    graph_hash: str | None = None,
    driver: str | None = None,
) -> EigenBasis:
    """Return the ``K`` smallest eigenpairs of a symmetric matrix.

    Parameters
    ----------
    matrix : array_like or sparse matrix, shape (n, n)
    K : int, optional
        Number of eigenpairs to keep (default: all ``n``).
    operator_kind : str
        Tag stored on the basis; one of ``normalized_laplacian``,
        ``combinatorial_laplacian`` or ``generic``.
    driver : str, optional
        LAPACK driver passed to :func:`scipy.linalg.eigh`. The default picks
        ``evd`` for full decompositions and ``evr`` for partial ones.
    """
    if operator_kind not in OPERATOR_KINDS:
        raise DataError(f"unknown operator kind {operator_kind!r}")
    M = matrix.toarray() if sp.issparse(matrix) else np.array(matrix, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DataError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    K = n if K is None else int(K)
    if not 1 <= K <= n:
        raise DataError(f"K must be in [1, {n}], got {K}")
    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    if np.abs(M - M.T).max(initial=0.0) > 1e-10 * scale:
        raise NotSymmetric("matrix is not symmetric within 1e-10")
    M = 0.5 * (M + M.T)

    if driver is None:
        driver = "evd" if K == n else "evr"
    kwargs = {"driver": driver, "check_finite": True}
    if K < n:
        kwargs["subset_by_index"] = (0, K - 1)
    try:
        w, Q = sla.eigh(M, **kwargs)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f"eigensolver failed: {exc}") from exc
    order = np.argsort(w, kind="stable")
    w, Q = w[order][:K], Q[:, order][:, :K]
    return EigenBasis(operator_kind, _frozen(w), _frozen(_fix_signs(Q)), graph_hash)


def _pin_null_vector(basis: EigenBasis, null: np.ndarray) -> EigenBasis:
    """Replace the first eigenpair by the exact kernel ``(0, null)``.

    A connected graph's Laplacian has a one-dimensional kernel with a known
    vector. When ``lambda_2`` is tiny (weakly joined clusters) the solver's
    first column carries an ``eps / lambda_2`` admixture of the second one,
    so the known vector is pinned and projected out of the other columns.
    """
    u = null / np.linalg.norm(null)
    Q = np.array(basis.eigenvectors)
    Q[:, 0] = u
    rest = Q[:, 1:]
    rest -= np.outer(u, u @ rest)
    rest /= np.linalg.norm(rest, axis=0)
    w = np.array(basis.eigenvalues)
    w[0] = 0.0
    w[1:] = np.maximum(w[1:], 0.0)
    return EigenBasis(basis.operator_kind, _frozen(w), _frozen(_fix_signs(Q)), basis.graph_hash)


def normalized_basis(g: Graph, K: int | None = None, **kwargs) -> EigenBasis:
    """Eigenbasis ``U`` of the normalized Laplacian of ``g``."""
    basis = eigendecompose(
        normalized_laplacian(g), K,
        operator_kind="normalized_laplacian", graph_hash=g.content_hash(), **kwargs,
    )
    return _pin_null_vector(basis, np.sqrt(g.degrees))


def combinatorial_basis(g: Graph, K: int | None = None, **kwargs) -> EigenBasis:
    """Eigenbasis ``V`` of the combinatorial Laplacian of ``g``."""
    basis = eigendecompose(
        laplacian(g), K,
        operator_kind="combinatorial_laplacian", graph_hash=g.content_hash(), **kwargs,
    )
    return _pin_null_vector(basis, np.ones(g.n))


def _check_signal(basis: EigenBasis, x, what: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[0] != basis.n:
        raise DataError(f"{what} has length {x.shape[0]}, basis has n={basis.n}")
    return x


def gft(basis: EigenBasis, f) -> np.ndarray:
    """Graph Fourier transform ``V^T f`` (requires the full basis)."""
    basis.require_full()
    return basis.eigenvectors.T @ _check_signal(basis, f, "signal")


def igft(basis: EigenBasis, fhat) -> np.ndarray:
    """Inverse graph Fourier transform ``V fhat`` (requires the full basis)."""
    basis.require_full()
    return basis.eigenvectors @ _check_signal(basis, fhat, "spectrum")


def eigenvalue_clusters(eigenvalues, tol: float = CLUSTER_TOL) -> list[np.ndarray]:
    """Group consecutive sorted eigenvalues whose gap is below ``tol``."""
    lam = np.asarray(eigenvalues)
    if lam.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(lam) >= tol) + 1
    return np.split(np.arange(lam.size), breaks)


# -- cache file ---------------------------------------------------------------
#
# Layout (version 1):
#   line 1: magic  b"SGFT-EIGENBASIS v1\n"
#   line 2: JSON header terminated by b"\n" with keys
#           operator_kind, n, K, graph_hash, dtype ("<f8"), sha256 (of payload)
#   payload: K eigenvalues, then the n*K eigenvector matrix in column-major
#            order, all little-endian float64.

CACHE_MAGIC = b"SGFT-EIGENBASIS v1\n"


def save_basis(basis: EigenBasis, path: str | PathLike) -> None:
    payload = (
        np.asarray(basis.eigenvalues, dtype="<f8").tobytes()
        + np.asarray(basis.eigenvectors, dtype="<f8").tobytes(order="F")
    )
    header = {
        "operator_kind": basis.operator_kind,
        "n": basis.n,
        "K": basis.K,
        "graph_hash": basis.graph_hash,
        "dtype": "<f8",
        "sha256": hashlib.sha256(payload).hexdigest(),
    }
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        fh.write(payload)


def load_basis(
    path: str | PathLike,
    *,
    graph_hash: str | None = None,
    operator_kind: str | None = None,
) -> EigenBasis:
    """Read a cached basis, refusing corrupt, foreign or stale files."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise CacheError(f"cannot read eigenbasis cache {path}: {exc}") from exc
    if not blob.startswith(CACHE_MAGIC):
        raise CacheError(f"{path}: not an eigenbasis cache (bad magic)")
    rest = blob[len(CACHE_MAGIC):]
    nl = rest.find(b"\n")
    if nl < 0:
        raise CacheError(f"{path}: truncated header")
    try:
        header = json.loads(rest[:nl])
        n, K = int(header["n"]), int(header["K"])
        kind = header["operator_kind"]
        digest = header["sha256"]
    except (ValueError, KeyError, TypeError) as exc:
        raise CacheError(f"{path}: malformed header ({exc})") from None
    if header.get("dtype") != "<f8" or kind not in OPERATOR_KINDS or not 1 <= K <= n:
        raise CacheError(f"{path}: unsupported header {header!r}")
    payload = rest[nl + 1:]
    if len(payload) != 8 * (K + n * K):
        raise CacheError(f"{path}: payload has {len(payload)} bytes, expected {8 * (K + n * K)}")
    if hashlib.sha256(payload).hexdigest() != digest:
        raise CacheError(f"{path}: payload checksum mismatch")
    if graph_hash is not None and header.get("graph_hash") != graph_hash:
        raise CacheError(f"{path}: stale cache, built for a different graph")
    if operator_kind is not None and kind != operator_kind:
        raise CacheError(f"{path}: cache holds a {kind} basis, need {operator_kind}")
    lam = np.frombuffer(payload, dtype="<f8", count=K).astype(float)
    Q = np.frombuffer(payload, dtype="<f8", offset=8 * K).reshape((n, K), order="F").astype(float)
    return EigenBasis(kind, _frozen(lam), _frozen(Q), header.get("graph_hash"))
