"""Command-line frontend.

    sgft window ring --n 200 --weak 40:41:1e-3 --weak 159:160:1e-3 --seed-vertex 45
    sgft spectrogram grid --rows 50 --cols 50 --boundary-weight 1e-5 --out-prefix out/grid
    sgft signature stations --vertex 280 --beta 1e-3 --out corr.csv
    sgft eigcache grid --num-eigs 500 --out grid.eig

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np
from scipy.sparse.csgraph import shortest_path

from . import __version__
from .baseline import baseline_spectrogram, heat_kernel, translate
from .datasets import grid_graph, knn_graph, linear_graph, load_station_csv, two_waveform_signal, weather_fixture_path
from .errors import CacheError, DataError, NumericalError, SGFTError
from .export import write_correlation_csv, write_dominant_csv, write_pgm, write_spectrogram_csv
from .graph import read_edgelist
from .localization import LocalizationParams, window, write_window
from .spectral import combinatorial_basis, load_basis, normalized_basis, save_basis
from .transform import dominant_frequency_map, signature_correlation, spectrogram

log = logging.getLogger("sgft")

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3
DEFAULT_NUM_EIGS = 500
KIND = {"ppr": "normalized_laplacian", "conv": "combinatorial_laplacian"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (np.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _weak_edge(text):
    try:
        i, j, w = text.split(":")
        return int(i), int(j), float(w)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected i:j:weight, got {text!r}") from None


# -- graph and signal sources ---------------------------------------------------

def _add_source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("source", choices=["ring", "grid", "edgelist", "stations"], help="graph source")
    g = p.add_argument_group("ring")
    g.add_argument("--n", type=_positive_int, default=200, help="ring size (default 200)")
    g.add_argument("--weak", type=_weak_edge, action="append", default=[], metavar="I:J:W",
                   help="override a ring edge weight (repeatable)")
    g = p.add_argument_group("grid")
    g.add_argument("--rows", type=_positive_int, default=50)
    g.add_argument("--cols", type=_positive_int, default=50)
    g.add_argument("--boundary-weight", type=_positive_float, default=1.0,
                   help="weight of the edges joining the two halves (default 1)")
    g.add_argument("--boundary", type=int, default=None, help="first column of the right half")
    g.add_argument("--no-periodic", dest="periodic", action="store_false")
    g.add_argument("--freq-left", type=float, default=2.0, help="cycles per half, left (default 2)")
    g.add_argument("--freq-right", type=float, default=10.0, help="cycles per half, right (default 10)")
    g = p.add_argument_group("edgelist")
    g.add_argument("--edges", type=Path, help="edge-list file ('i j w' per line)")
    g = p.add_argument_group("stations")
    g.add_argument("--stations", type=Path, default=None,
                   help="station CSV (default: bundled synthetic fixture)")
    g.add_argument("--knn", type=_positive_int, default=6)
    g.add_argument("--weight-mode", choices=["distance", "inverse_distance", "gaussian"], default="distance")
    g.add_argument("--sigma", type=_positive_float, default=None)


def _load_graph(args):
    """Return ``(graph, default_signal_or_None, points_or_None)``."""
    if args.source == "ring":
        return linear_graph(args.n, args.weak), None, None
    if args.source == "grid":
        g = grid_graph(args.rows, args.cols, args.periodic, args.boundary_weight, args.boundary)
        f = two_waveform_signal(args.rows, args.cols, args.freq_left, args.freq_right, args.boundary)
        return g, f, None
    if args.source == "edgelist":
        if args.edges is None:
            raise UsageError("edgelist source needs --edges PATH")
        return read_edgelist(args.edges), None, None
    path = args.stations or weather_fixture_path()
    data = load_station_csv(path)
    return knn_graph(data.points, args.knn, args.weight_mode, args.sigma), data.values, data.points


def _load_signal(args, g, default):
    if getattr(args, "signal", None) is not None:
        f = np.loadtxt(args.signal, dtype=float, comments="#", ndmin=1)
    elif default is not None:
        f = default
    else:
        raise UsageError(f"source '{args.source}' has no built-in signal; pass --signal PATH")
    if f.shape != (g.n,):
        raise DataError(f"signal has {f.size} values, graph has {g.n} vertices")
    return f


# -- eigenbasis with caching --------------------------------------------------------

def _cache_path(args, g, kind: str, K: int):
    if args.eig_cache is not None:
        return Path(args.eig_cache)
    cache_dir = os.environ.get("SGFT_CACHE_DIR")
    if cache_dir:
        return Path(cache_dir) / f"{g.content_hash()[:16]}-{kind}-K{K}.eig"
    return None


def _basis(args, g, kind: str, K: int, info: dict):
    path = _cache_path(args, g, kind, K)
    t0 = time.perf_counter()
    if path is not None and path.exists():
        basis = load_basis(path, graph_hash=g.content_hash(), operator_kind=kind)
        if basis.K < K:
            raise CacheError(f"{path}: cache holds K={basis.K} modes, {K} requested")
        basis = basis.truncate(K)
        info["eig_cache"] = f"hit {path}"
    else:
        make = normalized_basis if kind == "normalized_laplacian" else combinatorial_basis
        basis = make(g, K)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            save_basis(basis, path)
            info["eig_cache"] = f"stored {path}"
        else:
            info["eig_cache"] = "none"
    info["eig_seconds"] = time.perf_counter() - t0
    info["eig_cache_key"] = f"{g.content_hash()}:{kind}:K={K}"
    log.info("eigendecomposition (%s, K=%d): %.3f s, cache %s", kind, K, info["eig_seconds"], info["eig_cache"])
    return basis


def _num_eigs(args, g, kind: str) -> int:
    if kind == "combinatorial_laplacian":
        return g.n  # translation needs every mode
    return min(args.num_eigs or DEFAULT_NUM_EIGS, g.n)


def _freq_count(args, g) -> int:
    return min(args.num_eigs or DEFAULT_NUM_EIGS, g.n)


# -- commands ---------------------------------------------------------------------

def _hop_mass(g, values, seed, hops=10) -> float:
    dist = shortest_path(g.adjacency, unweighted=True, indices=seed)
    a = np.abs(values)
    return float(a[dist <= hops].sum() / a.sum())


def cmd_window(args) -> int:
    g, _, _ = _load_graph(args)
    info = {}
    kind = KIND[args.method]
    basis = _basis(args, g, kind, _num_eigs(args, g, kind), info)
    if args.method == "ppr":
        values = window(g, basis, args.seed_vertex, LocalizationParams(args.beta)).values
        header = f"method=ppr beta={args.beta:g} K={basis.K} seed={args.seed_vertex}"
    else:
        if not 0 <= args.seed_vertex < g.n:
            raise DataError(f"vertex {args.seed_vertex} outside [0, {g.n})")
        values = translate(basis, args.seed_vertex, heat_kernel(basis, args.tau).values)
        header = f"method=conv tau={args.tau:g} K={basis.K} seed={args.seed_vertex}"
    if args.out:
        write_window(values, args.out, header=header)
    peak = int(np.argmax(values))
    print(f"{header} argmax={peak} mass_within_10_hops={_hop_mass(g, values, args.seed_vertex):.6f}")
    return 0


def _spectrogram(args, g, f, info, vertices=None):
    kind = KIND[args.method]
    K = _freq_count(args, g)
    basis = _basis(args, g, kind, _num_eigs(args, g, kind), info)
    if args.method == "ppr":
        return spectrogram(g, basis, f, LocalizationParams(args.beta), vertices, threads=args.threads)
    return baseline_spectrogram(basis, f, args.tau, num_eigs=K, vertices=vertices, threads=args.threads)


def cmd_spectrogram(args) -> int:
    t0 = time.perf_counter()
    g, default, _ = _load_graph(args)
    f = _load_signal(args, g, default)
    info = {}
    spec = _spectrogram(args, g, f, info)
    dom = dominant_frequency_map(spec)
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    outputs = {
        "spectrogram_csv": f"{prefix}.spectrogram.csv",
        "spectrogram_pgm": f"{prefix}.spectrogram.pgm",
        "dominant_csv": f"{prefix}.dominant.csv",
    }
    write_spectrogram_csv(spec, outputs["spectrogram_csv"])
    write_pgm(spec.values, outputs["spectrogram_pgm"])
    write_dominant_csv(spec, dom, outputs["dominant_csv"])
    manifest = f"{prefix}.manifest.txt"
    with open(manifest, "w") as fh:
        fh.write(f"sgft {__version__}\ncommand spectrogram\n")
        for key, val in sorted(vars(args).items()):
            if key != "func":
                fh.write(f"arg.{key} {val}\n")
        fh.write(f"graph.n {g.n}\ngraph.m {g.num_edges}\ngraph.hash {g.content_hash()}\n")
        fh.write(f"eig.cache_key {info['eig_cache_key']}\neig.cache {info['eig_cache']}\n")
        fh.write(f"eig.seconds {info['eig_seconds']:.6f}\n")
        for key, val in outputs.items():
            fh.write(f"output.{key} {val}\n")
        fh.write(f"wall_seconds {time.perf_counter() - t0:.6f}\n")
    print(f"method={spec.method} n={g.n} K={spec.K} eig_seconds={info['eig_seconds']:.3f} wrote {prefix}.*")
    return 0


def cmd_signature(args) -> int:
    g, default, points = _load_graph(args)
    f = _load_signal(args, g, default)
    if not 0 <= args.vertex < g.n:
        raise DataError(f"vertex {args.vertex} outside [0, {g.n})")
    spec = _spectrogram(args, g, f, {})
    corr = signature_correlation(spec, args.vertex)
    if args.out:
        write_correlation_csv(spec, args.vertex, corr, args.out, points)
    order = np.argsort(-np.nan_to_num(corr, nan=-np.inf), kind="stable")
    top = ", ".join(f"{v}:{corr[v]:.3f}" for v in order[1:6])
    print(f"vertex {args.vertex} self-correlation {corr[args.vertex]:.1f}; most similar: {top}")
    return 0


def cmd_eigcache(args) -> int:
    g, _, _ = _load_graph(args)
    kind = "normalized_laplacian" if args.operator == "normalized" else "combinatorial_laplacian"
    K = min(args.num_eigs or DEFAULT_NUM_EIGS, g.n) if kind == "normalized_laplacian" else g.n
    if args.out is None and not os.environ.get("SGFT_CACHE_DIR"):
        raise UsageError("eigcache needs --out PATH or SGFT_CACHE_DIR")
    args.eig_cache = args.out
    path = _cache_path(args, g, kind, K)
    if path.exists():
        path.unlink()
    info = {}
    _basis(args, g, kind, K, info)
    print(f"stored {kind} basis n={g.n} K={K} in {path} ({info['eig_seconds']:.3f} s)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sgft", description="Short-graph Fourier transform toolkit.")
    parser.add_argument("--version", action="version", version=f"sgft {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, spectral=True):
        _add_source_args(p)
        p.add_argument("--num-eigs", type=_positive_int, default=None,
                       help=f"eigenpairs / frequencies retained (default min({DEFAULT_NUM_EIGS}, n))")
        p.add_argument("--eig-cache", type=Path, default=None, help="eigenbasis cache file (read or create)")
        if spectral:
            p.add_argument("--method", choices=["ppr", "conv"], default="ppr")
            p.add_argument("--beta", type=_positive_float, default=1e-4, help="PPR offset (default 1e-4)")
            p.add_argument("--tau", type=_positive_float, default=200.0, help="heat-kernel scale (default 200)")
            p.add_argument("--threads", type=_positive_int, default=1)

    p = sub.add_parser("window", help="localized window around one vertex")
    common(p)
    p.add_argument("--seed-vertex", type=int, required=True)
    p.add_argument("--out", type=Path, default=None, help="two-column window file")
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("spectrogram", help="spectrogram, dominant-frequency map and manifest")
    common(p)
    p.add_argument("--signal", type=Path, default=None, help="signal file, one value per line")
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_spectrogram)

    p = sub.add_parser("signature", help="spectral-signature correlation against one vertex")
    common(p)
    p.add_argument("--signal", type=Path, default=None)
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("--out", type=Path, default=None, help="correlation CSV")
    p.set_defaults(func=cmd_signature)

    p = sub.add_parser("eigcache", help="precompute and store an eigenbasis")
    common(p, spectral=False)
    p.add_argument("--operator", choices=["normalized", "combinatorial"], default="normalized")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_eigcache)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sgft: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"sgft: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, SGFTError, OSError) as exc:
        print(f"sgft: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
