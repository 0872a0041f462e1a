"""Plain-text and PGM writers for spectrograms and derived maps."""

from __future__ import annotations

from os import PathLike

import numpy as np

from .transform import SpectrogramMatrix

__all__ = ["write_spectrogram_csv", "write_dominant_csv", "write_correlation_csv", "write_pgm", "read_pgm"]


def _tag(spec: SpectrogramMatrix) -> str:
    parts = [f"method={spec.method}"] + [f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                                         for k, v in spec.params.items()]
    return "# " + " ".join(parts) + "\n"


def write_spectrogram_csv(spec: SpectrogramMatrix, path: str | PathLike) -> None:
    """One comment line with the method tag, a header of 1-based frequency
    indices, then one row per vertex."""
    with open(path, "w") as fh:
        fh.write(_tag(spec))
        fh.write("vertex," + ",".join(str(k) for k in range(1, spec.K + 1)) + "\n")
        for v, row in zip(spec.vertices, spec.values):
            fh.write(f"{v}," + ",".join(f"{x:.17g}" for x in row) + "\n")


def write_dominant_csv(spec: SpectrogramMatrix, dominant, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(_tag(spec))
        fh.write("vertex,frequency\n")
        for v, k in zip(spec.vertices, dominant):
            fh.write(f"{v},{k}\n")


def write_correlation_csv(spec: SpectrogramMatrix, vertex: int, corr, path: str | PathLike, points=None) -> None:
    """Signature correlations, with coordinates when ``points`` is given."""
    with open(path, "w") as fh:
        fh.write(_tag(spec).rstrip("\n") + f" seed={vertex}\n")
        fh.write("vertex,x,y,correlation\n" if points is not None else "vertex,correlation\n")
        for r, (v, c) in enumerate(zip(spec.vertices, corr)):
            val = "nan" if np.isnan(c) else f"{c:.17g}"
            if points is not None:
                x, y = points[v]
                fh.write(f"{v},{x:.17g},{y:.17g},{val}\n")
            else:
                fh.write(f"{v},{val}\n")


def write_pgm(matrix, path: str | PathLike) -> tuple[float, float]:
    """Binary (P5) 8-bit grayscale image, linearly scaled to [0, 255].

    Writes ``<path>.txt`` next to the image recording the min and max that
    map to 0 and 255. Returns ``(min, max)``.
    """
    M = np.asarray(matrix, dtype=float)
    if M.ndim == 1:
        M = M[:, None]
    lo, hi = float(np.nanmin(M)), float(np.nanmax(M))
    span = hi - lo
    scaled = np.zeros_like(M) if span == 0 else (M - lo) / span * 255.0
    img = np.nan_to_num(np.rint(scaled), nan=0.0).astype(np.uint8)
    rows, cols = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
    with open(f"{path}.txt", "w") as fh:
        fh.write(f"min {lo:.17g}\nmax {hi:.17g}\nrows {rows}\ncols {cols}\n")
    return lo, hi


def read_pgm(path: str | PathLike) -> np.ndarray:
    """Read back a P5 image written by :func:`write_pgm`."""
    with open(path, "rb") as fh:
        data = fh.read()
    fields = data.split(maxsplit=4)
    if fields[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM")
    cols, rows, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    if maxval != 255:
        raise ValueError(f"{path}: unsupported maxval {maxval}")
    pixels = np.frombuffer(data[len(data) - rows * cols:], dtype=np.uint8)
    return pixels.reshape(rows, cols)
