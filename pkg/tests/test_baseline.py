import numpy as np
import pytest

from sgft import (
    baseline_modulate,
    baseline_sgft,
    baseline_spectrogram,
    combinatorial_basis,
    gft,
    graph_convolve,
    heat_kernel,
    igft,
    normalized_basis,
    translate,
)
from sgft.datasets import grid_graph, linear_graph
from sgft.errors import DataError, FrequencyOutOfRange, TruncatedBasis

from conftest import random_connected_graph


@pytest.fixture(scope="module")
def ring8():
    return combinatorial_basis(linear_graph(8))


@pytest.fixture(scope="module")
def weighted_small():
    g = random_connected_graph(np.random.default_rng(7), 25)
    return g, combinatorial_basis(g)


def circular_convolution(f, kernel):
    n = len(f)
    return np.array([sum(f[j] * kernel[(i - j) % n] for j in range(n)) for i in range(n)])


def circulant_kernel(h, n):
    """Kernel of h(L) for the unweighted n-ring, by explicit DFT sums."""
    lam = 2 - 2 * np.cos(2 * np.pi * np.arange(n) / n)
    return np.array([sum(h(lam[m]) * np.cos(2 * np.pi * m * t / n) for m in range(n)) / n for t in range(n)])


def test_identity_kernel(weighted_small):
    g, b = weighted_small
    f = np.random.default_rng(0).standard_normal(g.n)
    delta_spectrum = igft(b, np.ones(g.n))
    np.testing.assert_allclose(graph_convolve(b, f, delta_spectrum), f, atol=1e-12)


def test_commutative(weighted_small):
    g, b = weighted_small
    f, h = np.random.default_rng(1).standard_normal((2, g.n))
    np.testing.assert_allclose(graph_convolve(b, f, h), graph_convolve(b, h, f), atol=1e-10)


def test_spectral_identity(weighted_small):
    g, b = weighted_small
    f, h = np.random.default_rng(2).standard_normal((2, g.n))
    np.testing.assert_allclose(gft(b, graph_convolve(b, f, h)), gft(b, f) * gft(b, h), atol=1e-10)


@pytest.mark.parametrize("h", [lambda lam: np.exp(-0.7 * lam), lambda lam: 1 / (1 + lam)])
def test_ring_convolution_matches_circular(ring8, h):
    # a kernel whose spectrum depends only on the eigenvalue is basis-free
    f = np.random.default_rng(3).standard_normal(8)
    g_vertex = igft(ring8, h(ring8.eigenvalues))
    expected = circular_convolution(f, circulant_kernel(h, 8))
    np.testing.assert_allclose(graph_convolve(ring8, f, g_vertex), expected, atol=1e-10)


def test_translate_unweighted_ring_peaks_at_vertex():
    b = combinatorial_basis(linear_graph(200))
    g = heat_kernel(b, 200.0).values
    for i in (45, 50, 55, 199):
        assert np.argmax(translate(b, i, g)) == i


def test_translate_sum_identity(weighted_small):
    g, b = weighted_small
    h = heat_kernel(b, 1.5)
    V = b.eigenvectors
    for i in (0, 9):
        expected = np.sqrt(g.n) * h.spectrum[0] * V[i, 0] * V[:, 0].sum()
        assert translate(b, i, h.values).sum() == pytest.approx(expected, rel=1e-10)


def test_weighted_ring_conv_misses_seed(weighted_ring, weighted_ring_bases):
    b = weighted_ring_bases[1]
    g = heat_kernel(b, 200.0).values
    assert np.argmax(translate(b, 45, g)) != 45


def test_heat_kernel_properties(weighted_small):
    _, b = weighted_small
    a = heat_kernel(b, 1.0).spectrum
    c = heat_kernel(b, 3.0).spectrum
    assert np.all((a > 0) & (a <= 1))
    assert np.all(np.diff(a) <= 0)
    assert np.all(c <= a)
    assert c[0] == a[0] == 1.0
    assert np.all(c[1:] < a[1:])
    with pytest.raises(DataError):
        heat_kernel(b, 0.0)


def test_baseline_modulate(weighted_small):
    g, b = weighted_small
    f = np.random.default_rng(4).standard_normal(g.n)
    np.testing.assert_allclose(baseline_modulate(b, 1, f), f, atol=1e-10)
    np.testing.assert_array_equal(baseline_modulate(b, 3, np.zeros(g.n)), 0)
    for k in range(1, g.n + 1):
        bound = np.sqrt(g.n) * np.abs(b.eigenvectors[:, k - 1]).max() * np.linalg.norm(f)
        assert np.linalg.norm(baseline_modulate(b, k, f)) <= bound * (1 + 1e-12)
    with pytest.raises(FrequencyOutOfRange):
        baseline_modulate(b, g.n + 1, f)


def test_baseline_sgft_self(weighted_small):
    g, b = weighted_small
    Tg = translate(b, 4, heat_kernel(b, 2.0).values)
    assert baseline_sgft(b, Tg, 4, 1, 2.0) == pytest.approx(Tg @ Tg, rel=1e-10)
    assert baseline_sgft(b, np.zeros(g.n), 4, 6, 2.0) == 0.0


def test_baseline_spectrogram_matches_sgft(weighted_small):
    g, b = weighted_small
    f = np.random.default_rng(5).standard_normal(g.n)
    S = baseline_spectrogram(b, f, 2.0, num_eigs=12, threads=2)
    assert S.values.shape == (g.n, 12) and S.method == "conv"
    for i, k in [(0, 1), (7, 5), (24, 12)]:
        assert S.values[i, k - 1] == pytest.approx(baseline_sgft(b, f, i, k, 2.0) ** 2, rel=1e-9, abs=1e-14)


def test_baseline_requirements(weighted_small):
    g, b = weighted_small
    with pytest.raises(TruncatedBasis):
        translate(combinatorial_basis(g, 5), 0, np.ones(g.n))
    with pytest.raises(DataError):
        baseline_spectrogram(normalized_basis(g), np.ones(g.n), 1.0)
    with pytest.raises(DataError):
        baseline_spectrogram(b, np.ones(g.n), 1.0, num_eigs=g.n + 1)


def test_baseline_m1_identity_grid():
    g = grid_graph(6, 6, boundary_weight=1e-5)
    b = combinatorial_basis(g)
    f = np.arange(g.n, dtype=float)
    assert np.abs(baseline_modulate(b, 1, f) - f).max() <= 1e-10 * np.abs(f).max()
