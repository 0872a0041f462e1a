import numpy as np
import pytest

from sgft.cli import main


def run(argv, capsys=None):
    try:
        code = main([str(a) for a in argv])
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr().out if capsys is not None else ""
    return code, out


WEIGHTED_RING = ["ring", "--n", 200, "--weak", "40:41:1e-3", "--weak", "159:160:1e-3"]


def test_window_ppr_and_conv(capsys, tmp_path):
    code, out = run(["window", *WEIGHTED_RING, "--seed-vertex", 45, "--out", tmp_path / "w.txt"], capsys)
    assert code == 0 and "argmax=45" in out
    w = np.loadtxt(tmp_path / "w.txt")
    assert w.shape == (200, 2) and w[:, 1].sum() == pytest.approx(1.0)
    code, out = run(["window", *WEIGHTED_RING, "--seed-vertex", 45, "--method", "conv"], capsys)
    assert code == 0 and "argmax=41" in out


@pytest.mark.parametrize("argv, expected", [
    (["window", "ring", "--seed-vertex", 999], 2),
    (["window", "ring", "--seed-vertex", 3, "--num-eigs", 0], 1),
    (["window", "ring", "--seed-vertex", 3, "--beta", -1], 1),
    (["signature", "ring"], 1),
    (["spectrogram", "ring", "--out-prefix", "x"], 1),
    (["window", "edgelist", "--seed-vertex", 0], 1),
    (["window", "ring", "--weak", "0:5:1", "--seed-vertex", 0], 2),
    (["bogus"], 1),
])
def test_exit_codes(argv, expected, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(argv)[0] == expected


def test_edgelist_source(tmp_path, capsys):
    p = tmp_path / "g.txt"
    p.write_text("# n=6\n" + "".join(f"{i} {(i + 1) % 6} 1.0\n" for i in range(6)))
    code, out = run(["window", "edgelist", "--edges", p, "--seed-vertex", 2, "--beta", 1e-2], capsys)
    assert code == 0 and "argmax=2" in out
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1 1\n2 3 1\n")
    assert run(["window", "edgelist", "--edges", bad, "--seed-vertex", 0])[0] == 2


def _grid_args(*extra):
    return ["spectrogram", "grid", "--rows", 12, "--cols", 12, "--boundary-weight", 1e-5, "--num-eigs", 40, *extra]


def test_spectrogram_outputs(tmp_path, capsys):
    prefix = tmp_path / "out" / "g"
    code, out = run(_grid_args("--out-prefix", prefix), capsys)
    assert code == 0 and "K=40" in out
    for suffix in ("spectrogram.csv", "spectrogram.pgm", "spectrogram.pgm.txt", "dominant.csv", "manifest.txt"):
        assert (tmp_path / "out" / f"g.{suffix}").exists()
    S = np.loadtxt(f"{prefix}.spectrogram.csv", delimiter=",", skiprows=2)
    assert S.shape == (144, 41)
    dom = np.loadtxt(f"{prefix}.dominant.csv", delimiter=",", skiprows=2)
    np.testing.assert_array_equal(dom[:, 1], S[:, 1:].argmax(axis=1) + 1)
    manifest = (tmp_path / "out" / "g.manifest.txt").read_text()
    for key in ("arg.beta 0.0001", "graph.n 144", "eig.cache_key", "eig.seconds", "output.dominant_csv"):
        assert key in manifest


def test_ppr_and_conv_share_layout(tmp_path):
    for method in ("ppr", "conv"):
        assert run(_grid_args("--method", method, "--out-prefix", tmp_path / method))[0] == 0
    a = (tmp_path / "ppr.spectrogram.csv").read_text().splitlines()
    b = (tmp_path / "conv.spectrogram.csv").read_text().splitlines()
    assert a[0].startswith("# method=ppr") and b[0].startswith("# method=conv")
    assert a[1] == b[1] and len(a) == len(b)


def test_signal_file(tmp_path):
    sig = tmp_path / "f.txt"
    np.savetxt(sig, np.cos(np.arange(30)))
    assert run(["spectrogram", "ring", "--n", 30, "--signal", sig, "--out-prefix", tmp_path / "r"])[0] == 0
    short = tmp_path / "short.txt"
    np.savetxt(short, np.ones(29))
    assert run(["spectrogram", "ring", "--n", 30, "--signal", short, "--out-prefix", tmp_path / "r"])[0] == 2


def test_eig_cache_hit_identical(tmp_path):
    cache = tmp_path / "basis.eig"
    run(_grid_args("--eig-cache", cache, "--out-prefix", tmp_path / "a"))
    assert cache.exists()
    run(_grid_args("--eig-cache", cache, "--out-prefix", tmp_path / "b"))
    assert "eig.cache hit" in (tmp_path / "b.manifest.txt").read_text()
    for suffix in ("spectrogram.csv", "spectrogram.pgm", "dominant.csv"):
        assert (tmp_path / f"a.{suffix}").read_bytes() == (tmp_path / f"b.{suffix}").read_bytes()


def test_eig_cache_refuses_other_graph(tmp_path, capsys):
    cache = tmp_path / "basis.eig"
    assert run(["eigcache", "ring", "--n", 50, "--out", cache])[0] == 0
    code = run(["window", "ring", "--n", 50, "--weak", "3:4:0.5", "--seed-vertex", 1, "--eig-cache", cache])[0]
    assert code == 2
    assert "stale" in capsys.readouterr().err


def test_eig_cache_refuses_corruption(tmp_path):
    cache = tmp_path / "basis.eig"
    run(["eigcache", "ring", "--n", 50, "--out", cache])
    data = bytearray(cache.read_bytes())
    data[-5] ^= 0xFF
    cache.write_bytes(bytes(data))
    assert run(["window", "ring", "--n", 50, "--seed-vertex", 1, "--eig-cache", cache])[0] == 2


def test_cache_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("SGFT_CACHE_DIR", str(tmp_path / "cache"))
    assert run(["eigcache", "ring", "--n", 40])[0] == 0
    assert len(list((tmp_path / "cache").iterdir())) == 1
    assert run(["spectrogram", "ring", "--n", 40, "--signal", _ones(tmp_path, 40), "--out-prefix", tmp_path / "r"])[0] == 0
    assert "eig.cache hit" in (tmp_path / "r.manifest.txt").read_text()
    monkeypatch.delenv("SGFT_CACHE_DIR")
    assert run(["eigcache", "ring", "--n", 40])[0] == 1


def _ones(tmp_path, n):
    p = tmp_path / "ones.txt"
    np.savetxt(p, np.ones(n))
    return p


def test_threads_byte_identical(tmp_path):
    for t in (1, 4):
        assert run(_grid_args("--threads", t, "--out-prefix", tmp_path / f"t{t}"))[0] == 0
    for suffix in ("spectrogram.csv", "spectrogram.pgm", "dominant.csv"):
        assert (tmp_path / f"t1.{suffix}").read_bytes() == (tmp_path / f"t4.{suffix}").read_bytes()


def test_signature_on_fixture(tmp_path, capsys):
    out = tmp_path / "sig.csv"
    code, text = run(["signature", "stations", "--vertex", 0, "--beta", 1e-3, "--out", out], capsys)
    assert code == 0 and "self-correlation 1.0" in text
    rows = np.genfromtxt(out, delimiter=",", skip_header=2)
    assert rows[0, 3] == pytest.approx(1.0)
    assert run(["signature", "stations", "--vertex", 10**6])[0] == 2
