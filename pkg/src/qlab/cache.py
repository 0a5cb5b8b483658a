"""On-disk cache of clique complexes and boundary matrices.

Entries are keyed by (kind, n, p, a, max_dim, format version).  Each file
has a ``.sha256`` sidecar; an entry whose content no longer matches its hash,
or fails to parse, is reported, ignored and rebuilt.
"""

from __future__ import annotations

import hashlib
import logging
import os
from pathlib import Path
from typing import Optional

from .graphs import COMMUTING, LabeledGraph
from .simplicial import DEFAULT_MAX_SIMPLICES, CliqueComplex, boundary_matrix, clique_complex, parse_complex
from .sparse import SparseIntMatrix

FORMAT_VERSION = "v1"

log = logging.getLogger(__name__)


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _graph_tag(graph: LabeledGraph) -> str:
    kind = graph.kind
    if kind.name == COMMUTING:
        a = "u" if kind.unbounded else str(kind.a)
        return "commuting-n%d-p%d-a%s" % (graph.n, kind.p, a)
    return "kneser-n%d-p%d" % (graph.n, kind.p)


class Cache:
    def __init__(self, root: Optional[os.PathLike]):
        self.root = Path(root) if root is not None else None
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)

    @property
    def enabled(self) -> bool:
        return self.root is not None

    def _read(self, name: str) -> Optional[tuple[str, str]]:
        path = self.root / name
        sidecar = self.root / (name + ".sha256")
        if not path.exists():
            return None
        try:
            text = path.read_text()
            expected = sidecar.read_text().strip()
        except OSError as exc:
            log.warning("cache entry %s unreadable (%s); recomputing", name, exc)
            return None
        digest = content_hash(text)
        if digest != expected:
            log.warning("cache entry %s is corrupted (hash mismatch); recomputing", name)
            return None
        return text, digest

    def _write(self, name: str, text: str) -> str:
        digest = content_hash(text)
        tmp = self.root / (name + ".tmp")
        tmp.write_text(text)
        tmp.replace(self.root / name)
        (self.root / (name + ".sha256")).write_text(digest + "\n")
        return digest

    def complex(
        self, graph: LabeledGraph, max_dim: int, max_simplices: int = DEFAULT_MAX_SIMPLICES
    ) -> tuple[CliqueComplex, dict]:
        """Load or build the clique complex; returns it with provenance ``{"status", "hash"}``."""
        if not self.enabled:
            return clique_complex(graph, max_dim, max_simplices), {"status": "disabled", "hash": None}
        name = "complex-%s-d%d-%s.txt" % (_graph_tag(graph), max_dim, FORMAT_VERSION)
        hit = self._read(name)
        if hit is not None:
            try:
                cx = parse_complex(hit[0], graph)
                _validate(cx)
                return cx, {"status": "hit", "hash": hit[1]}
            except (ValueError, IndexError) as exc:
                log.warning("cache entry %s is malformed (%s); recomputing", name, exc)
        cx = clique_complex(graph, max_dim, max_simplices)
        digest = self._write(name, cx.dumps())
        return cx, {"status": "miss", "hash": digest}

    def boundary(self, cx: CliqueComplex, k: int, reduced: bool = True) -> SparseIntMatrix:
        if not self.enabled:
            return boundary_matrix(cx, k, reduced)
        name = "matrix-%s-d%d-k%d-%s-%s.txt" % (
            _graph_tag(cx.graph), cx.max_dim, k, "red" if reduced else "unred", FORMAT_VERSION
        )
        hit = self._read(name)
        if hit is not None:
            rows = cx.n_simplices(k - 1) if k > 0 else int(reduced)
            try:
                mat = SparseIntMatrix.loads(hit[0])
                if mat.shape != (rows, cx.n_simplices(k)):
                    raise ValueError("shape %s does not match the complex" % (mat.shape,))
                return mat
            except ValueError as exc:
                log.warning("cache entry %s is malformed (%s); recomputing", name, exc)
        mat = boundary_matrix(cx, k, reduced)
        self._write(name, mat.dumps())
        return mat


def _validate(cx: CliqueComplex) -> None:
    """Cheap structural checks on a loaded complex: sorted, in range, cliques."""
    m = len(cx.graph)
    for k, simplices in enumerate(cx.skeleton):
        if simplices != sorted(simplices):
            raise ValueError("dimension %d not sorted" % k)
        for s in simplices:
            if any(not 0 <= v < m for v in s) or list(s) != sorted(set(s)):
                raise ValueError("bad simplex %r" % (s,))
    for s in cx.skeleton[1] if len(cx.skeleton) > 1 else []:
        if not cx.graph.adjacent(s[0], s[1]):
            raise ValueError("edge %r not in graph" % (s,))
