"""Job specifications and the computations behind the CLI commands."""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

from sympy import isprime

from .cache import Cache
from .errors import BudgetExceeded, ParameterError
from .graphs import LabeledGraph, build_commuting_graph, build_kneser_graph
from .homology import HomologyGroup, homology, reduced_h0_from_components
from .perm import GroundSet
from .simplicial import DEFAULT_MAX_SIMPLICES
from .snf import Budget

# above this many edges, reduced H_0 is read from a component count ("auto" mode)
H0_COMPONENT_THRESHOLD = 200_000


@dataclass
class JobSpec:
    command: str = "homology"
    p: int = 2
    a: Optional[int] = 1  # None: unbounded
    kneser: bool = False
    n: Optional[int] = None
    n_min: Optional[int] = None
    n_max: Optional[int] = None
    k_min: int = 0
    k_max: int = 0
    max_dim: Optional[int] = None
    reduced: bool = True
    threads: int = 1
    seed: int = 42
    cache_dir: Optional[str] = None
    format: str = "json"
    budget_entries: int = Budget().max_entries
    budget_bits: int = Budget().max_bits
    max_simplices: int = DEFAULT_MAX_SIMPLICES
    h0_method: str = "auto"
    coreduce: bool = False

    def validate(self) -> JobSpec:
        if self.p < 1:
            raise ParameterError("p must be positive")
        if not self.kneser and not isprime(self.p):
            raise ParameterError("p must be prime for commuting complexes (got %d)" % self.p)
        if not self.kneser and self.a is not None and self.a < 1:
            raise ParameterError("a must be at least 1 (or use --unbounded)")
        if self.k_min < 0 or self.k_max < self.k_min:
            raise ParameterError("invalid degree range %d..%d" % (self.k_min, self.k_max))
        if self.max_dim is None:
            self.max_dim = self.k_max
        if self.k_max > self.max_dim:
            raise ParameterError("k=%d exceeds max_dim=%d" % (self.k_max, self.max_dim))
        for name in ("n", "n_min", "n_max"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ParameterError("%s must be nonnegative" % name)
        if self.n_min is not None and self.n_max is not None and self.n_min > self.n_max:
            raise ParameterError("n_min exceeds n_max")
        if self.threads < 1:
            raise ParameterError("threads must be at least 1")
        if self.h0_method not in ("auto", "snf", "components"):
            raise ParameterError("unknown h0 method %r" % self.h0_method)
        if self.format not in ("json", "csv"):
            raise ParameterError("unknown format %r" % self.format)
        return self

    @property
    def budget(self) -> Budget:
        return Budget(self.budget_entries, self.budget_bits)

    def a_label(self):
        if self.kneser:
            return None
        return "unbounded" if self.a is None else self.a


def build_graph(n: int, p: int, a: Optional[int], kneser: bool = False, workers: int = 1) -> LabeledGraph:
    ground = GroundSet.range(n)
    if kneser:
        return build_kneser_graph(ground, p, workers)
    return build_commuting_graph(ground, p, a, workers)


@dataclass
class ResultRecord:
    command: str
    kind: str
    n: int
    p: int
    a: object
    homology: dict = field(default_factory=dict)  # degree (str) -> {"betti", "torsion"}
    methods: dict = field(default_factory=dict)
    chain_ranks: list = field(default_factory=list)
    timing_s: float = 0.0
    cache: dict = field(default_factory=dict)
    error: Optional[str] = None

    def homology_json(self) -> str:
        """The deterministic part of the record, for cross-run comparisons."""
        return json.dumps(self.homology, sort_keys=True, separators=(",", ":"))

    def to_json(self) -> dict:
        d = asdict(self)
        if d["error"] is None:
            del d["error"]
        return d


def compute_homology(spec: JobSpec, n: int, cache: Optional[Cache] = None) -> ResultRecord:
    """Reduced (or unreduced) homology in degrees k_min..k_max of one complex."""
    start = time.perf_counter()
    cache = cache or Cache(spec.cache_dir)
    g = build_graph(n, spec.p, spec.a, spec.kneser, spec.threads)
    rec = ResultRecord(
        spec.command, "kneser" if spec.kneser else "commuting", n, spec.p, spec.a_label(), cache={"status": "n/a"}
    )
    degrees = list(range(spec.k_min, spec.k_max + 1))
    use_components = (
        spec.reduced
        and 0 in degrees
        and (spec.h0_method == "components" or (spec.h0_method == "auto" and g.n_edges > H0_COMPONENT_THRESHOLD))
    )
    if use_components:
        rec.homology["0"] = reduced_h0_from_components(g.n_components()).to_json()
        rec.methods["0"] = "components"
        degrees.remove(0)
    if degrees:
        cx, prov = cache.complex(g, spec.max_dim, spec.max_simplices)
        rec.cache = prov
        rec.chain_ranks = [len(s) for s in cx.skeleton]
        for k in degrees:
            if not cx.simplices(0):
                grp = HomologyGroup(0)
            else:
                grp = homology(
                    cache.boundary(cx, k, spec.reduced),
                    cache.boundary(cx, k + 1, spec.reduced),
                    coreduce=spec.coreduce,
                    budget=spec.budget,
                )
            rec.homology[str(k)] = grp.to_json()
            rec.methods[str(k)] = "snf"
    rec.timing_s = round(time.perf_counter() - start, 4)
    return rec


def append_log(cache_dir: Optional[str], rec: ResultRecord) -> None:
    """Append one record to ``results.jsonl`` in the cache directory (parent process only)."""
    if cache_dir is None:
        return
    line = json.dumps(rec.to_json(), sort_keys=True, separators=(",", ":")) + "\n"
    os.makedirs(cache_dir, exist_ok=True)
    with open(os.path.join(cache_dir, "results.jsonl"), "a") as fh:
        fh.write(line)


def _sweep_cell(args):
    spec, n = args
    try:
        return compute_homology(spec, n)
    except BudgetExceeded as exc:
        return ResultRecord(spec.command, "kneser" if spec.kneser else "commuting", n, spec.p, spec.a_label(), error=str(exc))


def run_sweep(spec: JobSpec) -> dict:
    """One row per n; records where all computed groups vanish, without extrapolating."""
    if spec.n_min is None or spec.n_max is None:
        raise ParameterError("sweep needs --n-min and --n-max")
    jobs = [(spec, n) for n in range(spec.n_min, spec.n_max + 1)]
    if spec.threads > 1:
        with ProcessPoolExecutor(max_workers=spec.threads) as pool:
            rows = list(pool.map(_sweep_cell, jobs))
    else:
        rows = [_sweep_cell(job) for job in jobs]
    for rec in rows:
        append_log(spec.cache_dir, rec)
    vanishing_from = None
    for rec in reversed(rows):
        zero = rec.error is None and all(h["betti"] == 0 and not h["torsion"] for h in rec.homology.values())
        if not zero:
            break
        vanishing_from = rec.n
    return {
        "rows": rows,
        "vanishing_from": vanishing_from,
        "note": "vanishing observed for n in %s..%d only (within computed range)"
        % (vanishing_from, spec.n_max)
        if vanishing_from is not None
        else "no vanishing tail within computed range %d..%d" % (spec.n_min, spec.n_max),
    }


def sweep_csv(spec: JobSpec, table: dict) -> str:
    degrees = range(spec.k_min, spec.k_max + 1)
    lines = ["n," + ",".join("H%d_betti,H%d_torsion" % (k, k) for k in degrees) + ",error"]
    for rec in table["rows"]:
        cells = [str(rec.n)]
        for k in degrees:
            h = rec.homology.get(str(k))
            cells += [str(h["betti"]), " ".join(map(str, h["torsion"]))] if h else ["", ""]
        cells.append(rec.error or "")
        lines.append(",".join(cells))
    lines.append("# " + table["note"])
    return "\n".join(lines) + "\n"
