"""Undirected weighted graphs, Laplacians and seed vectors."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import (
    DataError,
    DisconnectedGraph,
    DuplicateEdge,
    EmptySeed,
    FullSeed,
    InvalidEdge,
    SelfLoop,
    VertexOutOfRange,
)

__all__ = [
    "Graph",
    "SeedVector",
    "build_graph",
    "laplacian",
    "normalized_laplacian",
    "volume",
    "unit_seed",
    "read_edgelist",
    "write_edgelist",
]


@dataclass(frozen=True, eq=False)
class Graph:
    """Connected undirected graph with positive edge weights.

    Use :func:`build_graph` to construct one; it validates the edge list.

    Attributes
    ----------
    n : int
        Number of vertices.
    edges : ndarray, shape (m, 3)
        One row ``(i, j, w)`` per undirected edge with ``i < j``, sorted.
    adjacency : scipy.sparse.csr_matrix
        Symmetric weighted adjacency with zero diagonal.
    degrees : ndarray, shape (n,)
        Weighted degrees ``d_i = sum_j A_ij``.
    """

    n: int
    edges: np.ndarray
    adjacency: sp.csr_matrix = field(repr=False)
    degrees: np.ndarray = field(repr=False)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def vol(self) -> float:
        return float(self.degrees.sum())

    def dense(self) -> np.ndarray:
        """Dense copy of the adjacency matrix."""
        return self.adjacency.toarray()

    def edge_list(self) -> list[tuple[int, int, float]]:
        return [(int(i), int(j), float(w)) for i, j, w in self.edges]

    def neighbors(self, i: int) -> np.ndarray:
        a = self.adjacency
        return a.indices[a.indptr[i]:a.indptr[i + 1]]

    def content_hash(self) -> str:
        """SHA-256 of the vertex count and canonical edge list."""
        h = hashlib.sha256()
        h.update(f"n={self.n};m={self.num_edges};".encode())
        h.update(np.ascontiguousarray(self.edges, dtype="<f8").tobytes())
        return h.hexdigest()

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges}, vol={self.vol:g})"


@dataclass(frozen=True, eq=False)
class SeedVector:
    """The D-orthonormalized indicator ``unit(S)`` of a vertex subset."""

    values: np.ndarray
    seed_set: frozenset


def build_graph(edges: Iterable[Sequence[float]], n: int) -> Graph:
    """Build and validate an undirected graph.

    Parameters
    ----------
    edges : iterable of (i, j, w)
        Undirected edges, each listed once, 0-based indices, ``w > 0``.
    n : int
        Number of vertices.

    Raises
    ------
    InvalidEdge
        Out-of-range index or nonpositive/non-finite weight.
    SelfLoop
        An edge ``(i, i, w)``.
    DuplicateEdge
        The same unordered pair appears twice.
    DisconnectedGraph
        More than one connected component.
    """
    n = int(n)
    if n < 1:
        raise DataError(f"graph needs at least one vertex, got n={n}")
    rows = list(edges)
    arr = np.asarray(rows, dtype=float).reshape(-1, 3) if rows else np.zeros((0, 3))
    i = arr[:, 0]
    j = arr[:, 1]
    w = arr[:, 2]

    bad_index = (i != np.round(i)) | (j != np.round(j)) | (i < 0) | (j < 0) | (i >= n) | (j >= n)
    if bad_index.any():
        k = int(np.flatnonzero(bad_index)[0])
        raise InvalidEdge(f"edge {rows[k]!r}: vertex index outside [0, {n})")
    bad_weight = ~np.isfinite(w) | (w <= 0)
    if bad_weight.any():
        k = int(np.flatnonzero(bad_weight)[0])
        raise InvalidEdge(f"edge {rows[k]!r}: weight must be positive and finite")
    if (i == j).any():
        k = int(np.flatnonzero(i == j)[0])
        raise SelfLoop(f"edge {rows[k]!r}: self-loops are not allowed")

    lo = np.minimum(i, j).astype(np.int64)
    hi = np.maximum(i, j).astype(np.int64)
    order = np.lexsort((hi, lo))
    lo, hi, w = lo[order], hi[order], w[order]
    dup = (lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])
    if dup.any():
        k = int(np.flatnonzero(dup)[0])
        raise DuplicateEdge(f"edge ({lo[k]}, {hi[k]}) listed more than once")

    canon = np.column_stack([lo, hi, w]).astype(float)
    adj = sp.coo_matrix(
        (np.concatenate([w, w]), (np.concatenate([lo, hi]), np.concatenate([hi, lo]))),
        shape=(n, n),
    ).tocsr()
    adj.sort_indices()

    ncomp, _ = connected_components(adj, directed=False)
    if ncomp != 1:
        raise DisconnectedGraph(f"graph has {ncomp} connected components")

    degrees = np.asarray(adj.sum(axis=1)).ravel()
    for a in (canon, degrees, adj.data, adj.indices, adj.indptr):
        a.flags.writeable = False
    return Graph(n=n, edges=canon, adjacency=adj, degrees=degrees)


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian ``L = D - A`` as a dense array."""
    L = -g.dense()
    L[np.diag_indices(g.n)] = g.degrees
    return L


def normalized_laplacian(g: Graph) -> np.ndarray:
    """Symmetric normalized Laplacian ``D^(-1/2) (D - A) D^(-1/2)``."""
    inv_sqrt = 1.0 / np.sqrt(g.degrees)
    N = -(inv_sqrt[:, None] * g.dense() * inv_sqrt[None, :])
    N[np.diag_indices(g.n)] = 1.0
    return N


def _as_index_set(g: Graph, S: Iterable[int]) -> np.ndarray:
    idx = np.unique(np.asarray(list(S), dtype=np.int64))
    if idx.size and (idx[0] < 0 or idx[-1] >= g.n):
        raise VertexOutOfRange(f"vertex subset must lie in [0, {g.n})")
    return idx


def volume(g: Graph, S: Iterable[int]) -> float:
    """Sum of degrees over the vertex subset ``S`` (0 for the empty set)."""
    idx = _as_index_set(g, S)
    return float(g.degrees[idx].sum())


def unit_seed(g: Graph, S: Iterable[int]) -> SeedVector:
    """Seed vector for the subset ``S``.

    Entries are ``b/vol(S)`` on ``S`` and ``-b/vol(V \\ S)`` elsewhere, with
    ``b = sqrt(vol(S) vol(V \\ S) / vol(V))``, so that ``s^T D 1 = 0`` and
    ``s^T D s = 1``.
    """
    idx = _as_index_set(g, S)
    if idx.size == 0:
        raise EmptySeed("seed set is empty")
    if idx.size == g.n:
        raise FullSeed("seed set covers every vertex; vol(V \\ S) = 0")
    mask = np.zeros(g.n, dtype=bool)
    mask[idx] = True
    vol_s = g.degrees[mask].sum()
    vol_c = g.degrees[~mask].sum()
    b = np.sqrt(vol_s * vol_c / (vol_s + vol_c))
    s = np.where(mask, b / vol_s, -b / vol_c)
    s.flags.writeable = False
    return SeedVector(values=s, seed_set=frozenset(int(v) for v in idx))


def read_edgelist(path: str | PathLike, n: int | None = None) -> Graph:
    """Read an ``i j w`` edge list (``#`` starts a comment).

    ``n`` defaults to the value of an ``n=<count>`` token in a comment (as
    written by :func:`write_edgelist`), else one more than the largest index.
    """
    edges = []
    header_n = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line, _, comment = line.partition("#")
            m = re.search(r"\bn=(\d+)", comment)
            if m and header_n is None:
                header_n = int(m.group(1))
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise InvalidEdge(f"{path}:{lineno}: expected 'i j w', got {line!r}")
            try:
                i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError as exc:
                raise InvalidEdge(f"{path}:{lineno}: {exc}") from None
            edges.append((i, j, w))
    if n is None:
        n = header_n
    if n is None:
        n = 1 + max((max(i, j) for i, j, _ in edges), default=-1)
    return build_graph(edges, n)


def write_edgelist(g: Graph, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(f"# n={g.n} m={g.num_edges}\n")
        for i, j, w in g.edge_list():
            fh.write(f"{i} {j} {w!r}\n")
