"""Explicit strong blocking-set constructions.

Each recipe builds an (s+1)-uniform hypergraph on the vertices of a graph
whose vertices carry general-position supply columns, then dumps every
projective point in the span of every edge.  Cherries (paths of length two)
give strong 2-blocking sets; for general s the edges are r-subsets of balls
(radius r = s+1 around a common center) or of closed neighborhoods.

The asymptotic parameter schedules from the analysis (alpha = 1/8, d = 258
for cherries; p > 64 r^2 for the ball recipe; p > 16 q^(4s)/eps^2 for the
neighborhood recipe) are recorded as provenance presets only: desk-scale
instances cannot meet them, and the verifier is the source of truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from itertools import combinations
import json
import math

import numpy as np

from .budgets import Budgets, DEFAULT_BUDGETS
from .errors import BudgetExceededError
from .expander import Graph, ball, power_graph, clique_hypergraph
from .gf import FieldSpec
from .lincomb import Hypergraph
from .linalg import MatrixGF, format_matrix, parse_matrix, projective_reps
from .supply import (GeneralPositionReport, PointSupply, normalize_column,
                     verify_general_position)

ASYMPTOTIC_PRESETS = {
    "cherry": {"alpha": 0.125, "d": 258},
    "ballpower": {"p_min": "64*(s+1)^2", "radius": "s+1"},
    "neighborhood": {"p_min": "16*q^(4s)/eps^2", "radius": 1},
}


@dataclass(frozen=True)
class BlockingSet:
    """Normalized, sorted, deduplicated projective point set in PG(k-1, q)."""

    field: FieldSpec
    k: int
    points: np.ndarray  # (num_points, k), first nonzero coordinate of each row is 1
    provenance: dict = dataclass_field(default_factory=dict)

    @classmethod
    def from_points(cls, fld: FieldSpec, points, provenance=None) -> "BlockingSet":
        seen = {}
        for pt in points:
            arr = np.asarray(pt, dtype=np.int64)
            if not arr.any():
                raise ValueError("the zero vector is not a projective point")
            norm = normalize_column(fld, arr)
            seen[tuple(int(v) for v in norm)] = None
        if seen:
            k = len(next(iter(seen)))
            data = np.array(sorted(seen), dtype=np.int64)
        else:
            raise ValueError("a blocking set needs at least one point")
        data.setflags(write=False)
        return cls(fld, k, data, dict(provenance or {}))

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def __eq__(self, other):
        return (isinstance(other, BlockingSet) and self.field == other.field
                and self.k == other.k and np.array_equal(self.points, other.points))

    def __hash__(self):
        return hash((self.field, self.k, self.points.tobytes()))


def lower_bound(q: int, k: int, s: int) -> int:
    """Minimum possible size of a strong s-blocking set in PG(k-1, q):
    ceil((q^(s+1) - 1) (k - s) / (q - 1))."""
    if s < 1 or k <= s:
        raise ValueError(f"need k > s >= 1, got k={k}, s={s}")
    if q < 2:
        raise ValueError(f"q={q} is not a prime power")
    num = (q ** (s + 1) - 1) * (k - s)
    return -(-num // (q - 1))


# ---------------------------------------------------------------------------
# Span dumps
# ---------------------------------------------------------------------------

def edge_span_union(h: Hypergraph, supply: PointSupply, *,
                    point_cap: int = DEFAULT_BUDGETS.points,
                    provenance=None) -> BlockingSet:
    """All projective points of span(f) over every edge f, deduplicated."""
    fld = supply.field
    seen: set[tuple[int, ...]] = set()
    for e in h.edges:
        cols = supply.matrix.data[:, list(e)]  # k x |e|
        for block in projective_reps(fld, len(e)):
            pts = fld.matmul_arr(cols, block)  # k x cnt
            for j in range(pts.shape[1]):
                col = pts[:, j]
                if not col.any():
                    continue  # dependent columns can cancel; skip the zero vector
                seen.add(tuple(int(v) for v in normalize_column(fld, col)))
                if len(seen) > point_cap:
                    raise BudgetExceededError("points", point_cap, len(seen))
    prov = dict(provenance or {})
    prov.setdefault("construction", "edge_span_union")
    return BlockingSet.from_points(fld, [np.array(p) for p in sorted(seen)], prov)


def _require_report(supply: PointSupply, report, budgets: Budgets):
    if report is None:
        report = verify_general_position(supply, budgets=budgets)
    return report


def cherry_hypergraph(g: Graph) -> Hypergraph:
    """3-sets {x, y, z} with xy and xz both edges of g."""
    cherries = set()
    for x in range(g.n):
        for y, z in combinations(g.adjacency[x], 2):
            cherries.add(tuple(sorted((x, y, z))))
    return Hypergraph.from_edges(g.n, cherries, max_edge_size=3)


def construct_cherry(g: Graph, supply: PointSupply, *,
                     report: GeneralPositionReport | None = None,
                     budgets: Budgets = DEFAULT_BUDGETS) -> BlockingSet:
    """Strong 2-blocking set candidate from the cherries of g."""
    if supply.n != g.n:
        raise ValueError(f"supply has {supply.n} columns but the graph has {g.n} vertices")
    report = _require_report(supply, report, budgets)
    if report.s_independence < 2:
        raise ValueError(f"cherry construction needs every 3 columns independent "
                         f"(measured s_independence={report.s_independence})")
    h = cherry_hypergraph(g)
    if h.m == 0:
        raise ValueError("graph has no path of length two, so there are no cherries")
    prov = {"construction": "cherry", "s": 2, "graph_n": g.n, "graph_m": g.m,
            "presets": ASYMPTOTIC_PRESETS["cherry"]}
    return edge_span_union(h, supply, point_cap=budgets.points, provenance=prov)


def ball_power_hypergraph(g: Graph, s: int, *, variant: str = "ball",
                          budgets: Budgets = DEFAULT_BUDGETS) -> Hypergraph:
    """(s+1)-uniform edge set for the radius-(s+1) recipe.

    variant="ball" (default): edges are the r-subsets of some ball B_r(x);
    this is the common-center reading that the covering argument actually
    manipulates.  variant="pairwise": the r-cliques of the r-th graph power,
    i.e. r-sets of pairwise distance <= r.  The two differ in general and
    both are provided.
    """
    r = s + 1
    if variant == "pairwise":
        return clique_hypergraph(power_graph(g, r), r, budget=budgets.cliques)
    if variant != "ball":
        raise ValueError(f"unknown variant {variant!r}")
    edges = set()
    for x in range(g.n):
        bx = ball(g, x, r)
        if len(bx) < r:
            continue
        if math.comb(len(bx), r) + len(edges) > budgets.cliques:
            raise BudgetExceededError("cliques", budgets.cliques,
                                      len(edges) + math.comb(len(bx), r))
        for f in combinations(bx, r):
            edges.add(f)
    return Hypergraph.from_edges(g.n, edges, max_edge_size=r)


def construct_ball_power(g: Graph, supply: PointSupply, s: int, *,
                         variant: str = "ball",
                         report: GeneralPositionReport | None = None,
                         budgets: Budgets = DEFAULT_BUDGETS) -> BlockingSet:
    """Strong s-blocking set candidate from r-subsets of radius-r balls."""
    if supply.n != g.n:
        raise ValueError(f"supply has {supply.n} columns but the graph has {g.n} vertices")
    if s < 1:
        raise ValueError("s must be >= 1")
    report = _require_report(supply, report, budgets)
    if report.s_independence < s:
        raise ValueError(f"ball construction needs every {s + 1} columns independent "
                         f"(measured s_independence={report.s_independence})")
    h = ball_power_hypergraph(g, s, variant=variant, budgets=budgets)
    prov = {"construction": "ballpower", "s": s, "variant": variant,
            "graph_n": g.n, "graph_m": g.m,
            "presets": ASYMPTOTIC_PRESETS["ballpower"]}
    return edge_span_union(h, supply, point_cap=budgets.points, provenance=prov)


def neighborhood_hypergraph(g: Graph, s: int, *,
                            budgets: Budgets = DEFAULT_BUDGETS) -> Hypergraph:
    """(s+1)-subsets of closed neighborhoods N[x]."""
    r = s + 1
    edges = set()
    skipped = 0
    for x in range(g.n):
        closed = sorted(set(g.adjacency[x]) | {x})
        if len(closed) < r:
            skipped += 1
            continue
        if math.comb(len(closed), r) + len(edges) > budgets.cliques:
            raise BudgetExceededError("cliques", budgets.cliques,
                                      len(edges) + math.comb(len(closed), r))
        for f in combinations(closed, r):
            edges.add(f)
    h = Hypergraph.from_edges(g.n, edges, max_edge_size=r)
    return h


def construct_neighborhood(g: Graph, supply: PointSupply, s: int, *,
                           report: GeneralPositionReport | None = None,
                           budgets: Budgets = DEFAULT_BUDGETS) -> BlockingSet:
    """Strong s-blocking set candidate from (s+1)-subsets of closed
    neighborhoods; the small-q recipe."""
    if supply.n != g.n:
        raise ValueError(f"supply has {supply.n} columns but the graph has {g.n} vertices")
    if s < 1:
        raise ValueError("s must be >= 1")
    report = _require_report(supply, report, budgets)
    r = s + 1
    h = neighborhood_hypergraph(g, s, budgets=budgets)
    degenerate = sum(1 for x in range(g.n) if len(g.adjacency[x]) + 1 < r)
    prov = {"construction": "neighborhood", "s": s, "graph_n": g.n, "graph_m": g.m,
            "span_threshold": report.span_threshold,
            "vertices_below_edge_size": degenerate,
            "presets": ASYMPTOTIC_PRESETS["neighborhood"]}
    return edge_span_union(h, supply, point_cap=budgets.points, provenance=prov)


# ---------------------------------------------------------------------------
# File I/O: points as matrix rows + JSON provenance sidecar
# ---------------------------------------------------------------------------

def format_blocking_set(b: BlockingSet) -> str:
    return format_matrix(MatrixGF(b.field, b.points))


def parse_blocking_set(text: str, provenance=None) -> BlockingSet:
    m = parse_matrix(text)
    prov = dict(provenance or {})
    prov.setdefault("construction", "file")
    return BlockingSet.from_points(m.field, m.data, prov)


def write_blocking_set(path, b: BlockingSet) -> None:
    with open(path, "w") as f:
        f.write(format_blocking_set(b))
    with open(str(path) + ".json", "w") as f:
        json.dump(b.provenance, f, sort_keys=True, indent=2, default=str)
        f.write("\n")


def read_blocking_set(path) -> BlockingSet:
    with open(path) as f:
        text = f.read()
    prov = None
    try:
        with open(str(path) + ".json") as f:
            prov = json.load(f)
    except FileNotFoundError:
        pass
    return parse_blocking_set(text, provenance=prov)
