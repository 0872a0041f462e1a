import numpy as np
import pytest

from sgft import build_graph, combinatorial_basis, normalized_basis
from sgft.datasets import RING_WEAK_EDGES, knn_graph, linear_graph, load_station_csv, weather_fixture_path


def ring_edges(n, w=1.0):
    return [(i, (i + 1) % n, w) for i in range(n)]


def random_connected_graph(rng, n, extra=None, wmin=0.1, wmax=3.0):
    """Random spanning tree plus ``extra`` random chords, random weights."""
    perm = rng.permutation(n)
    pairs = {tuple(sorted((int(perm[k]), int(perm[rng.integers(k)])))) for k in range(1, n)}
    extra = n if extra is None else extra
    extra = min(extra, n * (n - 1) // 2 - len(pairs))
    while extra > 0:
        i, j = (int(v) for v in rng.integers(n, size=2))
        if i != j and (min(i, j), max(i, j)) not in pairs:
            pairs.add((min(i, j), max(i, j)))
            extra -= 1
    return build_graph([(i, j, float(rng.uniform(wmin, wmax))) for i, j in sorted(pairs)], n)


@pytest.fixture(scope="session")
def triangle():
    return build_graph([(0, 1, 1), (1, 2, 1), (0, 2, 1)], 3)


@pytest.fixture(scope="session")
def ring200():
    return linear_graph(200)


@pytest.fixture(scope="session")
def ring200_basis(ring200):
    return normalized_basis(ring200)


@pytest.fixture(scope="session")
def weighted_ring():
    return linear_graph(200, RING_WEAK_EDGES)


@pytest.fixture(scope="session")
def weighted_ring_bases(weighted_ring):
    return normalized_basis(weighted_ring), combinatorial_basis(weighted_ring)


@pytest.fixture(scope="session")
def stations():
    return load_station_csv(weather_fixture_path())


@pytest.fixture(scope="session")
def station_graph(stations):
    return knn_graph(stations.points, 6)


# -- acceptance reporting ---------------------------------------------------------

_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        _ACCEPTANCE.append((number, title, item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, name, outcome in sorted(_ACCEPTANCE, key=lambda r: (r[0], r[2])):
        status = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"AC{number:<3} {status:<7} {title}  [{name}]")
