"""Graph and signal generators for the ring, torus-grid and station experiments."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from importlib import resources
from os import PathLike
from pathlib import Path

import numpy as np
from scipy.sparse.csgraph import connected_components
import scipy.sparse as sp

from .errors import DataError, DuplicatePoints, EmptyDataset, MalformedRow, NotARingEdge
from .graph import Graph, build_graph

__all__ = [
    "linear_graph",
    "grid_graph",
    "two_waveform_signal",
    "knn_graph",
    "StationData",
    "load_station_csv",
    "weather_fixture_path",
    "RING_WEAK_EDGES",
]

log = logging.getLogger(__name__)

#: the two low-weight ring edges of the localization experiment
RING_WEAK_EDGES = ((40, 41, 1e-3), (159, 160, 1e-3))


def linear_graph(n: int, weak_edges=()) -> Graph:
    """Periodic path (ring) on ``n`` vertices with unit weights.

    ``weak_edges`` lists ``(i, j, w)`` triples overriding the weight of
    existing ring edges.
    """
    if n < 3:
        raise DataError(f"ring needs n >= 3, got {n}")
    weights = {}
    for i, j, w in weak_edges:
        i, j = int(i), int(j)
        lo, hi = min(i, j), max(i, j)
        if not (0 <= lo and hi < n) or not (hi - lo == 1 or (lo == 0 and hi == n - 1)):
            raise NotARingEdge(f"({i}, {j}) is not an edge of the {n}-ring")
        weights[(lo, hi)] = float(w)
    edges = []
    for i in range(n):
        j = (i + 1) % n
        key = (min(i, j), max(i, j))
        edges.append((key[0], key[1], weights.get(key, 1.0)))
    return build_graph(edges, n)


def grid_graph(
    rows: int,
    cols: int,
    periodic: bool = True,
    boundary_weight: float = 1.0,
    boundary: int | None = None,
) -> Graph:
    """Four-neighbour grid, vertex ``r * cols + c``.

    Horizontal edges joining column ``boundary - 1`` to column ``boundary``
    get ``boundary_weight``; on a torus so does the wrap-around edge between
    the last and first column, since it also joins the two halves. The
    default ``boundary`` is ``cols // 2``.
    """
    if rows < 3 or cols < 3:
        raise DataError(f"grid needs rows, cols >= 3, got {rows}x{cols}")
    if boundary is None:
        boundary = cols // 2
    if not 0 < boundary < cols:
        raise DataError(f"boundary column must be in (0, {cols}), got {boundary}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols or periodic:
                c2 = (c + 1) % cols
                crosses = c2 == boundary or c2 == 0
                edges.append((v, r * cols + c2, boundary_weight if crosses else 1.0))
            if r + 1 < rows or periodic:
                edges.append((v, ((r + 1) % rows) * cols + c, 1.0))
    return build_graph(edges, rows * cols)


def two_waveform_signal(
    rows: int,
    cols: int,
    freq_left: float = 2,
    freq_right: float = 10,
    boundary: int | None = None,
) -> np.ndarray:
    """Two sinusoids side by side on a ``rows x cols`` grid.

    Columns left of ``boundary`` carry ``sin(2 pi freq_left x)`` and the rest
    ``sin(2 pi freq_right x)``, where ``x`` runs over ``[0, 1)`` across the
    width of each half, so ``freq_*`` counts cycles per half. The signal is
    constant down each column. Defaults (2 and 10) are an arbitrary choice.
    """
    if boundary is None:
        boundary = cols // 2
    c = np.arange(cols)
    left = c < boundary
    x = np.where(left, c / boundary, (c - boundary) / (cols - boundary))
    freq = np.where(left, freq_left, freq_right)
    row = np.sin(2 * np.pi * freq * x)
    return np.tile(row, rows)


def _pairwise(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def knn_graph(points, k: int, weight_mode: str = "distance", sigma: float | None = None) -> Graph:
    """Symmetrized k-nearest-neighbour graph of planar points.

    An edge is kept when either endpoint selects the other. Distance ties are
    broken by vertex index. ``weight_mode`` is ``distance`` (the raw
    Euclidean distance), ``inverse_distance`` or ``gaussian`` (with
    ``sigma``). Components left disconnected are joined through their
    closest cross-component pair.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DataError(f"points must have shape (m, 2), got {pts.shape}")
    m = len(pts)
    if k < 1 or m < 2:
        raise DataError(f"need k >= 1 and at least two points, got k={k}, {m} points")
    k = min(int(k), m - 1)
    dist = _pairwise(pts)
    off = ~np.eye(m, dtype=bool)
    if (dist[off] == 0).any():
        i, j = np.argwhere((dist == 0) & off)[0]
        raise DuplicatePoints(f"points {i} and {j} coincide")

    if weight_mode == "distance":
        weight = dist
    elif weight_mode == "inverse_distance":
        weight = np.divide(1.0, dist, out=np.zeros_like(dist), where=off)
    elif weight_mode == "gaussian":
        if sigma is None or not sigma > 0:
            raise DataError("gaussian weights need sigma > 0")
        weight = np.exp(-(dist ** 2) / (2 * sigma ** 2))
    else:
        raise DataError(f"unknown weight mode {weight_mode!r}")

    select = np.zeros((m, m), dtype=bool)
    order = np.argsort(np.where(off, dist, -1.0), axis=1, kind="stable")
    rows = np.repeat(np.arange(m), k)
    select[rows, order[:, 1:k + 1].ravel()] = True
    select |= select.T

    ncomp, labels = connected_components(sp.csr_matrix(select), directed=False)
    while ncomp > 1:
        inside = labels == labels[0]
        sub = np.where(inside[:, None] & ~inside[None, :], dist, np.inf)
        i, j = np.unravel_index(np.argmin(sub), sub.shape)
        log.info("knn_graph: joining components via (%d, %d), distance %.6g", i, j, dist[i, j])
        select[i, j] = select[j, i] = True
        ncomp, labels = connected_components(sp.csr_matrix(select), directed=False)

    iu, ju = np.nonzero(np.triu(select, 1))
    w = weight[iu, ju]
    if (w <= 0).any():
        raise DataError("edge weights underflowed to zero; increase sigma")
    return build_graph(zip(iu.tolist(), ju.tolist(), w.tolist()), m)


@dataclass(frozen=True, eq=False)
class StationData:
    """Station coordinates ``(longitude, latitude)`` and their signal values."""

    station_ids: list
    points: np.ndarray
    values: np.ndarray
    dropped: int = 0

    def __iter__(self):
        # allows ``points, values = load_station_csv(path)``-style unpacking
        return iter((self.points, self.values))


_MISSING = {"", "na", "nan", "null", "none", "-"}


def load_station_csv(path: str | PathLike) -> StationData:
    """Read ``station_id, latitude, longitude, value`` rows.

    Rows whose value is missing are dropped and counted; a row that cannot be
    parsed otherwise raises :class:`MalformedRow`.
    """
    required = ("station_id", "latitude", "longitude", "value")
    ids, pts, vals = [], [], []
    dropped = 0
    with open(path, newline="") as fh:
        reader = csv.DictReader(line for line in fh if not line.lstrip().startswith("#"))
        if reader.fieldnames is None or any(c not in reader.fieldnames for c in required):
            raise MalformedRow(f"{path}: header must contain {', '.join(required)}")
        for lineno, row in enumerate(reader, 2):
            if None in row or any(row[c] is None for c in required):
                raise MalformedRow(f"{path}: row {lineno} has the wrong number of fields")
            if any(row[c].strip().lower() in _MISSING for c in required[1:]):
                dropped += 1
                continue
            try:
                lat, lon, val = (float(row[c]) for c in required[1:])
            except ValueError:
                raise MalformedRow(f"{path}: row {lineno} has a non-numeric field") from None
            if not all(map(math.isfinite, (lat, lon, val))):
                dropped += 1
                continue
            ids.append(row["station_id"].strip())
            pts.append((lon, lat))
            vals.append(val)
    if dropped:
        log.warning("%s: dropped %d row(s) with missing values", path, dropped)
    if not ids:
        raise EmptyDataset(f"{path}: no usable rows")
    return StationData(ids, np.array(pts), np.array(vals), dropped)


def weather_fixture_path() -> Path:
    """Path of the bundled synthetic station fixture."""
    return Path(str(resources.files("sgft") / "data" / "weather_fixture.csv"))
