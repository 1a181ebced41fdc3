"""Proper-linear-combination hypergraphs and tree-like rank certificates.

A *proper* combination has every coefficient nonzero.  Given a supply W and
a target subspace L, a vertex subset X is an edge when some proper
combination of the X-columns of W lands in L; a witness records the
coefficients and the resulting vector.  A hypergraph with an elimination
order in which each early vertex has degree exactly one in the remaining
suffix yields a triangular coefficient matrix M, and the rank of M @ N
(N = the ordered points) certifies how much of L the proper span covers:
at least rank(N) - s + 1 for an s-bounded hypergraph.

The full edge-is-an-oracle hypergraph is never materialized; candidate edges
always come from a construction (cherries, cliques, subsets of balls) and are
tested one at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .budgets import DEFAULT_BUDGETS
from .errors import BudgetExceededError, CertificateError
from .linalg import (MatrixGF, kernel_basis, matmul, projective_reps,
                     quotient_map, rank, SubspaceBasis)
from .supply import PointSupply


@dataclass(frozen=True)
class Hypergraph:
    """Edge lists over vertices 0..n-1 (vertex i names column i of a supply)."""

    n: int
    edges: tuple[tuple[int, ...], ...]
    max_edge_size: int

    @classmethod
    def from_edges(cls, n: int, edges, max_edge_size: int | None = None) -> "Hypergraph":
        canon = sorted({tuple(sorted(int(v) for v in e)) for e in edges})
        for e in canon:
            if not e:
                raise ValueError("empty hyperedge")
            if len(set(e)) != len(e):
                raise ValueError(f"repeated vertex in edge {e}")
            if e[0] < 0 or e[-1] >= n:
                raise ValueError(f"edge {e} out of range for n={n}")
        width = max((len(e) for e in canon), default=0)
        if max_edge_size is not None and width > max_edge_size:
            raise ValueError(f"edge of size {width} exceeds the bound {max_edge_size}")
        return cls(n, tuple(canon), max_edge_size if max_edge_size is not None else width)

    @property
    def m(self) -> int:
        return len(self.edges)

    def is_bounded(self, s: int) -> bool:
        return all(len(e) <= s for e in self.edges)


@dataclass(frozen=True)
class EdgeWitness:
    """A proper combination of an edge's supply columns that lies in the
    target subspace: sum(coefficients[i] * W[edge[i]]) == target."""

    edge: tuple[int, ...]
    coefficients: tuple[int, ...]
    target: tuple[int, ...]

    def __post_init__(self):
        if len(self.edge) != len(self.coefficients):
            raise ValueError("one coefficient per edge vertex required")
        if any(c == 0 for c in self.coefficients):
            raise ValueError("proper combinations have no zero coefficients")

    def check(self, supply: PointSupply, L: SubspaceBasis | None = None) -> None:
        fld = supply.field
        acc = np.zeros(supply.k, dtype=np.int64)
        for v, c in zip(self.edge, self.coefficients):
            acc = fld.add_arr(acc, fld.mul_arr(c, supply.column(v)))
        if not np.array_equal(acc, np.asarray(self.target)):
            raise ValueError("witness target does not match its combination")
        if L is not None and not L.contains(acc):
            raise ValueError("witness target is not in the target subspace")


@dataclass(frozen=True)
class EliminationOrder:
    """A vertex ordering v_1..v_n where each v_i for i <= n-s+1 has degree
    exactly 1 in the hypergraph induced on the suffix {v_i, ..., v_n};
    witness_edges[i] is that unique edge."""

    order: tuple[int, ...]
    s: int
    witness_edges: tuple[tuple[int, ...], ...]


def _edge_to_witness_coeff_map(w: EdgeWitness) -> dict[int, int]:
    return dict(zip(w.edge, w.coefficients))


# ---------------------------------------------------------------------------
# Witness search
# ---------------------------------------------------------------------------

def _nonzero_tuple_blocks(field, width: int, chunk: int = 8192):
    """Columns (1, a_2, ..., a_width) over nonzero field elements, ascending
    lexicographically in the encoding order."""
    q = field.q
    nonzero = np.arange(1, q, dtype=np.int64)
    total = (q - 1) ** (width - 1)
    for lo in range(0, total, chunk):
        cnt = min(chunk, total - lo)
        block = np.ones((width, cnt), dtype=np.int64)
        offs = np.arange(lo, lo + cnt, dtype=np.int64)
        for pos in range(width - 1):
            digit = (offs // (q - 1) ** (width - 2 - pos)) % (q - 1)
            block[1 + pos] = nonzero[digit]
        yield block


ENUM_TUPLE_LIMIT = 10 ** 6


def plc_edge(supply: PointSupply, X, L: SubspaceBasis, *,
             size_cap: int | None = None,
             coeff_budget: int = DEFAULT_BUDGETS.coeff_tuples,
             method: str = "auto"):
    """Witness that X is an edge of the proper-combination hypergraph toward
    L, or None.

    The first coefficient is pinned to 1 (witnesses are scale-invariant), and
    the remaining tuples are scanned in lexicographic order, so a found
    witness is deterministic.  When the tuple space exceeds ENUM_TUPLE_LIMIT
    the search solves Q W_X a = 0 instead and scans the projective null space
    for an all-nonzero vector (method="enumerate"/"nullspace" forces a path).
    """
    X = tuple(sorted(int(v) for v in X))
    if len(X) < 1 or len(set(X)) != len(X):
        raise ValueError("X must be a nonempty set of distinct vertex indices")
    if any(v < 0 or v >= supply.n for v in X):
        raise ValueError(f"vertex indices {X} out of range")
    fld = supply.field
    k = supply.k
    if L.ambient_dim != k:
        raise ValueError("subspace ambient dimension disagrees with the supply")
    s = L.codim
    cap = size_cap if size_cap is not None else s + 1
    if s >= 1 and len(X) > cap:
        raise ValueError(f"edge size {len(X)} exceeds the bound {cap}")

    cols = supply.matrix.data[:, X]  # k x |X|
    if s == 0:
        # Everything lies in the full space; take the all-ones combination.
        coeffs = (1,) * len(X)
        target = fld.matmul_arr(cols, np.ones((len(X), 1), dtype=np.int64))[:, 0]
        return EdgeWitness(X, coeffs, tuple(int(v) for v in target))

    Q = quotient_map(L)
    A = fld.matmul_arr(Q.data, cols)  # s x |X|

    q = fld.q
    if method == "auto":
        method = ("enumerate" if (q - 1) ** (len(X) - 1) <= min(ENUM_TUPLE_LIMIT, coeff_budget)
                  else "nullspace")
    if method == "enumerate":
        total = (q - 1) ** (len(X) - 1)
        if total > coeff_budget:
            raise BudgetExceededError("coeff_tuples", coeff_budget, total)
        for block in _nonzero_tuple_blocks(fld, len(X)):
            images = fld.matmul_arr(A, block)
            hits = np.nonzero(~images.any(axis=0))[0]
            if hits.size:
                a = block[:, int(hits[0])]
                target = fld.matmul_arr(cols, a[:, None])[:, 0]
                return EdgeWitness(X, tuple(int(c) for c in a),
                                   tuple(int(v) for v in target))
        return None
    if method != "nullspace":
        raise ValueError(f"unknown method {method!r}")

    kern = kernel_basis(MatrixGF(fld, A))  # nu x |X|
    nu = kern.rows
    if nu == 0:
        return None
    total = (q ** nu - 1) // (q - 1)
    if total > coeff_budget:
        raise BudgetExceededError("coeff_tuples", coeff_budget, total)
    for block in projective_reps(fld, nu):
        cand = fld.matmul_arr(block.T, kern.data)  # cnt x |X|
        hits = np.nonzero((cand != 0).all(axis=1))[0]
        if hits.size:
            a = cand[int(hits[0])]
            target = fld.matmul_arr(cols, a[:, None])[:, 0]
            return EdgeWitness(X, tuple(int(c) for c in a),
                               tuple(int(v) for v in target))
    return None


def build_plc_hypergraph(supply: PointSupply, L: SubspaceBasis, candidate_edges, *,
                         size_cap: int | None = None,
                         coeff_budget: int = DEFAULT_BUDGETS.coeff_tuples):
    """Restrict the proper-combination hypergraph to the candidate edges.

    Returns (Hypergraph, {edge: EdgeWitness}).  Candidates are deduplicated
    and queried independently, so callers may shard this loop.
    """
    witnesses: dict[tuple[int, ...], EdgeWitness] = {}
    for cand in sorted({tuple(sorted(int(v) for v in e)) for e in candidate_edges}):
        w = plc_edge(supply, cand, L, size_cap=size_cap, coeff_budget=coeff_budget)
        if w is not None:
            witnesses[cand] = w
    h = Hypergraph.from_edges(supply.n, witnesses.keys(),
                              max_edge_size=size_cap)
    return h, witnesses


# ---------------------------------------------------------------------------
# Tree-like recognition
# ---------------------------------------------------------------------------

BACKTRACK_LIMIT = 20


def _live_degrees(edges, alive):
    deg: dict[int, list[tuple[int, ...]]] = {v: [] for v in alive}
    for e in edges:
        if all(v in alive for v in e):
            for v in e:
                deg[v].append(e)
    return deg


def tree_like_order(h: Hypergraph, s: int):
    """Find an elimination order proving h is s-tree-like, or None.

    Greedy: repeatedly remove the least-index vertex of degree exactly 1 in
    the currently induced hypergraph.  If greedy stalls and n <= 20, an
    exhaustive backtracking search decides; for larger n a stall is reported
    as failure (which then means "unknown", not a proof of non-tree-likeness).
    """
    if not h.is_bounded(s):
        raise ValueError(f"hypergraph is not {s}-bounded")
    n = h.n
    need = n - s + 1
    if need <= 0:
        order = tuple(range(n))
        return EliminationOrder(order, s, ())

    def greedy():
        seq: list[int] = []
        picked: list[tuple[int, ...]] = []
        alive = set(range(n))
        while len(seq) < need:
            deg = _live_degrees(h.edges, alive)
            choice = next((v for v in sorted(alive) if len(deg[v]) == 1), None)
            if choice is None:
                return None
            seq.append(choice)
            picked.append(deg[choice][0])
            alive.remove(choice)
        return seq, picked, alive

    found = greedy()
    if found is not None:
        seq, picked, alive = found
        return EliminationOrder(tuple(seq) + tuple(sorted(alive)), s, tuple(picked))

    if n > BACKTRACK_LIMIT:
        return None

    failed: set[frozenset[int]] = set()

    def backtrack(alive: frozenset[int], seq, picked):
        if len(seq) >= need:
            return seq, picked
        if alive in failed:
            return None
        deg = _live_degrees(h.edges, alive)
        for v in sorted(alive):
            if len(deg[v]) == 1:
                res = backtrack(alive - {v}, seq + [v], picked + [deg[v][0]])
                if res is not None:
                    return res
        failed.add(alive)
        return None

    res = backtrack(frozenset(range(n)), [], [])
    if res is None:
        return None
    seq, picked = res
    order = tuple(seq) + tuple(sorted(set(range(n)) - set(seq)))
    return EliminationOrder(order, s, tuple(picked))


def check_elimination_order(h: Hypergraph, order: EliminationOrder) -> bool:
    """Recount the degree-1 suffix property from scratch."""
    n = h.n
    if sorted(order.order) != list(range(n)):
        return False
    need = max(n - order.s + 1, 0)
    if len(order.witness_edges) != need:
        return False
    for i in range(need):
        suffix = set(order.order[i:])
        v = order.order[i]
        live = [e for e in h.edges if all(u in suffix for u in e) and v in e]
        if len(live) != 1 or live[0] != order.witness_edges[i]:
            return False
    return True


# ---------------------------------------------------------------------------
# Rank certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """Triangular coefficient matrix M, ordered point matrix N, and the
    certified dimension rank(M @ N) >= rank(N) - s + 1."""

    hypergraph: Hypergraph
    order: EliminationOrder
    witnesses: dict
    m_matrix: MatrixGF
    n_matrix: MatrixGF
    achieved_dim: int

    def to_dict(self) -> dict:
        return {
            "order": list(self.order.order),
            "s": self.order.s,
            "edges": [{"edge": list(e),
                       "coefficients": list(self.witnesses[e].coefficients)}
                      for e in self.order.witness_edges],
            "achieved_dim": self.achieved_dim,
        }


def certify(supply: PointSupply, L: SubspaceBasis, h: Hypergraph,
            witnesses: dict, order: EliminationOrder) -> Certificate:
    """Assemble the rank certificate for an s-tree-like hypergraph.

    Row l of M carries the witness coefficients of the l-th elimination edge,
    placed at the order positions of its vertices; N stacks the supply
    columns in order.  Raises CertificateError on a missing witness or a
    non-triangular order, and refuses to return a certificate whose rows fail
    to land in L or whose rank falls below rank(N) - s + 1 (that bound is a
    theorem, so a violation means a broken witness or order).
    """
    fld = supply.field
    n = h.n
    s = order.s
    if sorted(order.order) != list(range(n)):
        raise CertificateError("order is not a permutation of the vertex set")
    pos = {v: i for i, v in enumerate(order.order)}
    nrows = len(order.witness_edges)
    m_data = np.zeros((nrows, n), dtype=np.int64)
    for ell, e in enumerate(order.witness_edges):
        w = witnesses.get(tuple(e))
        if w is None:
            raise CertificateError(f"no witness for elimination edge {e}")
        w.check(supply)
        for v, c in zip(w.edge, w.coefficients):
            p = pos[v]
            if p < ell:
                raise CertificateError(
                    f"edge {e} reaches position {p} before its row {ell}: order is not triangular")
            m_data[ell, p] = c
        if m_data[ell, ell] == 0:
            raise CertificateError(f"row {ell} has a zero diagonal: order is not triangular")
    n_data = supply.matrix.data[:, list(order.order)].T  # n x k
    m_mat = MatrixGF(fld, m_data)
    n_mat = MatrixGF(fld, n_data)
    product = matmul(m_mat, n_mat)
    for ell, e in enumerate(order.witness_edges):
        row = product.data[ell]
        if not np.array_equal(row, np.asarray(witnesses[tuple(e)].target)):
            raise CertificateError(f"certificate row {ell} is not the witness combination")
        if not L.contains(row):
            raise CertificateError(f"certificate row {ell} is not in the target subspace")
    achieved = rank(product)
    floor = rank(n_mat) - s + 1
    if achieved < floor:
        raise CertificateError(
            f"achieved dimension {achieved} fell below the certified floor {floor}")
    return Certificate(h, order, dict(witnesses), m_mat, n_mat, achieved)


def exactly_s_plus_one_edge(supply: PointSupply, U, L: SubspaceBasis, s: int, *,
                            coeff_budget: int = DEFAULT_BUDGETS.coeff_tuples):
    """Search the (s+1)-subsets of U for a full-support witness toward L.

    Requires q > s.  When every s+1 supply columns are independent and
    |U| >= (s+2)!, such an edge always exists; the first subset (in index
    order) with a witness is returned.
    """
    if supply.field.q <= s:
        raise ValueError(f"need q > s, got q={supply.field.q}, s={s}")
    U = sorted(int(v) for v in U)
    if len(U) < s + 1:
        return None
    for X in combinations(U, s + 1):
        w = plc_edge(supply, X, L, size_cap=s + 1, coeff_budget=coeff_budget)
        if w is not None:
            return w
    return None


# ---------------------------------------------------------------------------
# Hypergraph file format
# ---------------------------------------------------------------------------

def format_hypergraph(h: Hypergraph) -> str:
    lines = [f"hypergraph {h.n} {h.m}"]
    for e in h.edges:
        lines.append(" ".join(str(v) for v in e))
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty hypergraph file")
    head = lines[0].split()
    if head[0] != "hypergraph" or len(head) != 3:
        raise ValueError(f"malformed hypergraph header: {lines[0]!r}")
    n, m = int(head[1]), int(head[2])
    if len(lines) != 1 + m:
        raise ValueError(f"expected {m} edges, found {len(lines) - 1}")
    edges = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
    return Hypergraph.from_edges(n, edges)
