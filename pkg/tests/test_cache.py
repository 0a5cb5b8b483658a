import logging

from qlab.cache import Cache
from qlab.graphs import build_commuting_graph, build_kneser_graph
from qlab.perm import GroundSet
from qlab.simplicial import boundary_matrix


def graph(n=6):
    return build_commuting_graph(GroundSet.range(n), 2, 1)


def test_disabled_cache():
    cx, prov = Cache(None).complex(graph(), 1)
    assert prov == {"status": "disabled", "hash": None}
    assert cx.n_simplices(0) == 15


def test_miss_then_hit(tmp_path):
    cache = Cache(tmp_path)
    cx1, p1 = cache.complex(graph(), 2)
    cx2, p2 = cache.complex(graph(), 2)
    assert p1["status"] == "miss" and p2["status"] == "hit"
    assert p1["hash"] == p2["hash"]
    assert cx1.skeleton == cx2.skeleton
    # different parameters use different entries
    _, p3 = cache.complex(graph(7), 2)
    _, p4 = cache.complex(build_kneser_graph(GroundSet.range(6), 2), 2)
    assert p3["status"] == p4["status"] == "miss"


def test_corrupted_complex_is_rebuilt(tmp_path, caplog):
    cache = Cache(tmp_path)
    cx, _ = cache.complex(graph(), 1)
    (entry,) = [p for p in tmp_path.iterdir() if p.name.startswith("complex") and p.suffix == ".txt"]
    entry.write_text(entry.read_text().replace("1: 0", "1: 9", 1))
    with caplog.at_level(logging.WARNING):
        cx2, prov = cache.complex(graph(), 1)
    assert prov["status"] == "miss"
    assert "corrupted" in caplog.text
    assert cx2.skeleton == cx.skeleton
    assert cache.complex(graph(), 1)[1]["status"] == "hit"


def test_malformed_but_hashed_entry_is_rebuilt(tmp_path, caplog):
    cache = Cache(tmp_path)
    cx, _ = cache.complex(graph(), 1)
    (entry,) = [p for p in tmp_path.iterdir() if p.name.startswith("complex") and p.suffix == ".txt"]
    bad = entry.read_text().replace("0: 0\n", "0: 99\n", 1)
    cache._write(entry.name, bad)  # consistent hash, invalid content
    with caplog.at_level(logging.WARNING):
        cx2, prov = cache.complex(graph(), 1)
    assert prov["status"] == "miss" and "malformed" in caplog.text
    assert cx2.skeleton == cx.skeleton


def test_missing_sidecar(tmp_path, caplog):
    cache = Cache(tmp_path)
    cache.complex(graph(), 1)
    for p in tmp_path.glob("*.sha256"):
        p.unlink()
    with caplog.at_level(logging.WARNING):
        assert cache.complex(graph(), 1)[1]["status"] == "miss"


def test_boundary_cache(tmp_path, caplog):
    cache = Cache(tmp_path)
    cx, _ = cache.complex(graph(7), 1)
    d1 = cache.boundary(cx, 1)
    assert d1 == boundary_matrix(cx, 1)
    assert cache.boundary(cx, 1) == d1
    assert cache.boundary(cx, 0, reduced=False) == boundary_matrix(cx, 0, reduced=False)
    (entry,) = [p for p in tmp_path.iterdir() if "-k1-red" in p.name and p.suffix == ".txt"]
    entry.write_text("qlab-matrix v1 2 2 0\n")
    with caplog.at_level(logging.WARNING):
        assert cache.boundary(cx, 1) == d1
    assert "corrupted" in caplog.text
    cache._write(entry.name, "qlab-matrix v1 2 2 0\n")
    assert cache.boundary(cx, 1) == d1
