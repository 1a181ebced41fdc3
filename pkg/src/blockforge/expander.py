"""Expander graphs: LPS Ramanujan construction, spectral-gap bounds, mixing
checks, and the graph operators (powers, blow-ups, clique hypergraphs, balls)
used by the blocking-set constructions.

Graphs are immutable after construction.  BFS-style operators shard naturally
by start vertex; the spectral routines deflate the trivial eigenvectors
analytically (the all-ones vector for regular graphs, the bipartition sign
vector for bipartite ones) so the reported bound concerns only the
non-trivial spectrum.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .budgets import DEFAULT_BUDGETS
from .errors import BudgetExceededError
from .gf import is_prime
from .lincomb import Hypergraph


class Graph:
    """Simple undirected graph, vertices 0..n-1, sorted adjacency lists."""

    def __init__(self, n: int, edges):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.adjacency = tuple(tuple(sorted(s)) for s in adj)
        self.neighbor_sets = tuple(frozenset(s) for s in adj)
        self.m = sum(len(a) for a in self.adjacency) // 2
        self._csr = None

    def degrees(self):
        return [len(a) for a in self.adjacency]

    def is_regular(self) -> bool:
        degs = self.degrees()
        return self.n == 0 or min(degs) == max(degs)

    @property
    def degree(self) -> int:
        if not self.is_regular():
            raise ValueError("graph is not regular")
        return len(self.adjacency[0]) if self.n else 0

    def edges(self):
        for u in range(self.n):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    @property
    def csr(self) -> sp.csr_matrix:
        if self._csr is None:
            rows, cols = [], []
            for u in range(self.n):
                for v in self.adjacency[u]:
                    rows.append(u)
                    cols.append(v)
            data = np.ones(len(rows), dtype=np.float64)
            self._csr = sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        return self._csr

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = self._bfs_reach(0)
        return len(seen) == self.n

    def _bfs_reach(self, start: int) -> set[int]:
        seen = {start}
        dq = deque([start])
        while dq:
            u = dq.popleft()
            for v in self.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    dq.append(v)
        return seen

    def bipartition(self):
        """Return a +-1 coloring vector if the graph is bipartite, else None."""
        color = np.zeros(self.n, dtype=np.int64)
        for s in range(self.n):
            if color[s]:
                continue
            color[s] = 1
            dq = deque([s])
            while dq:
                u = dq.popleft()
                for v in self.adjacency[u]:
                    if color[v] == 0:
                        color[v] = -color[u]
                        dq.append(v)
                    elif color[v] == color[u]:
                        return None
        return color

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def complete_graph(n: int) -> Graph:
    """K_n: the (n, n-1, 1) fallback expander for sizes LPS cannot hit."""
    return Graph(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


# ---------------------------------------------------------------------------
# LPS Ramanujan graphs
# ---------------------------------------------------------------------------

def _legendre(a: int, p: int) -> int:
    ls = pow(a % p, (p - 1) // 2, p)
    return -1 if ls == p - 1 else ls


def _sqrt_minus_one(q2: int) -> int:
    # q2 = 1 mod 4, so a square root of -1 exists; take the least one.
    for x in range(2, q2):
        if (x * x) % q2 == q2 - 1:
            return x
    raise ValueError(f"-1 is not a square mod {q2}")  # pragma: no cover


def _lps_quadruples(p: int) -> list[tuple[int, int, int, int]]:
    # All (a,b,c,d) with a^2+b^2+c^2+d^2 = p, a odd positive, b,c,d even.
    sols = []
    lim = math.isqrt(p)
    for a in range(1, lim + 1, 2):
        r1 = p - a * a
        bl = math.isqrt(r1)
        for b in range(-bl - (bl % 2), bl + 1, 2):
            r2 = r1 - b * b
            if r2 < 0:
                continue
            cl = math.isqrt(r2)
            for c in range(-cl - (cl % 2), cl + 1, 2):
                r3 = r2 - c * c
                if r3 < 0:
                    continue
                d = math.isqrt(r3)
                if d * d == r3 and d % 2 == 0:
                    for dd in ({d, -d} if d else {0}):
                        sols.append((a, b, c, dd))
    return sorted(set(sols))


def _pgl_normalize(mat: tuple[int, int, int, int], q2: int) -> tuple[int, int, int, int]:
    for entry in mat:
        if entry % q2:
            inv = pow(entry, q2 - 2, q2)
            return tuple((x * inv) % q2 for x in mat)
    raise ValueError("zero matrix cannot represent a PGL element")


def _mat_mul(x, y, q2):
    return ((x[0] * y[0] + x[1] * y[2]) % q2,
            (x[0] * y[1] + x[1] * y[3]) % q2,
            (x[2] * y[0] + x[3] * y[2]) % q2,
            (x[2] * y[1] + x[3] * y[3]) % q2)


def lps_graph(p: int, q2: int) -> Graph:
    """The Lubotzky-Phillips-Sarnak Cayley graph X^{p,q2}.

    Generators are the p+1 integer quadruple solutions of
    a^2+b^2+c^2+d^2 = p (a odd positive, b,c,d even) mapped to 2x2 matrices
    over GF(q2).  The closure under right multiplication is PSL2(q2) when p
    is a quadratic residue mod q2 (non-bipartite) and PGL2(q2) otherwise
    (bipartite).  Always (p+1)-regular and connected.
    """
    if not (is_prime(p) and is_prime(q2)):
        raise ValueError("p and q2 must both be prime")
    if p == q2:
        raise ValueError("p and q2 must be distinct")
    if p % 4 != 1 or q2 % 4 != 1:
        raise ValueError("p and q2 must both be congruent to 1 mod 4")
    if q2 <= 2 * math.sqrt(p):
        raise ValueError(f"need q2 > 2*sqrt(p) = {2 * math.sqrt(p):.3f}")

    quads = _lps_quadruples(p)
    if len(quads) != p + 1:  # pragma: no cover - Jacobi guarantees p+1
        raise RuntimeError(f"expected {p + 1} generator quadruples, found {len(quads)}")
    i_unit = _sqrt_minus_one(q2)
    gens = []
    for a, b, c, d in quads:
        mat = ((a + i_unit * b) % q2, (c + i_unit * d) % q2,
               (-c + i_unit * d) % q2, (a - i_unit * b) % q2)
        gens.append(_pgl_normalize(mat, q2))
    if len(set(gens)) != p + 1:  # pragma: no cover
        raise RuntimeError("generators collide in PGL2; parameters too small")

    identity = (1, 0, 0, 1)
    index = {identity: 0}
    order = [identity]
    edges = []
    dq = deque([identity])
    while dq:
        g = dq.popleft()
        gi = index[g]
        for s in gens:
            h = _pgl_normalize(_mat_mul(g, s, q2), q2)
            hi = index.get(h)
            if hi is None:
                hi = len(order)
                index[h] = hi
                order.append(h)
                dq.append(h)
            if gi < hi:
                edges.append((gi, hi))

    n = len(order)
    expected = q2 * (q2 * q2 - 1)
    if _legendre(p, q2) == 1:
        expected //= 2
    if n != expected:  # pragma: no cover - sanity net
        raise RuntimeError(f"group closure has {n} elements, expected {expected}")
    g = Graph(n, edges)
    if not g.is_regular() or g.degree != p + 1:  # pragma: no cover
        raise RuntimeError("LPS graph is not (p+1)-regular; parameters too small")
    return g


# ---------------------------------------------------------------------------
# Spectral bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralReport:
    n: int
    d: int
    lambda_bound: float
    method: str  # "exact" | "power-iteration"
    bipartite: bool
    tol: float

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "lambda_bound": self.lambda_bound,
                "method": self.method, "bipartite": self.bipartite}


def second_eigenvalue(g: Graph, tol: float = 1e-8, *, method: str = "auto",
                      exact_threshold: int = 2000, seed: int = 0,
                      max_iter: int = 1_000_000) -> SpectralReport:
    """Upper bound on |lambda| over all adjacency eigenvalues other than d
    (and -d for bipartite graphs, which is flagged).

    Dense eigensolve for small graphs; otherwise power iteration on the
    adjacency operator with the trivial eigenvectors projected out, run to
    residual <= tol, reporting estimate + tol.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    if not g.is_regular():
        raise ValueError("spectral report requires a regular graph")
    if not g.is_connected():
        raise ValueError("spectral report requires a connected graph")
    d = g.degree
    coloring = g.bipartition()
    bipartite = coloring is not None

    if method == "auto":
        method = "exact" if g.n <= exact_threshold else "power"
    if method == "exact":
        evs = np.linalg.eigvalsh(g.csr.toarray())
        evs = np.sort(evs)
        assert abs(evs[-1] - d) < 1e-6
        evs = evs[:-1]
        if bipartite and evs.size:
            assert abs(evs[0] + d) < 1e-6
            evs = evs[1:]
        bound = float(np.max(np.abs(evs))) if evs.size else 0.0
        return SpectralReport(g.n, d, bound, "exact", bipartite, tol)

    a = g.csr
    n = g.n
    deflate = [np.full(n, 1.0 / math.sqrt(n))]
    if bipartite:
        deflate.append(coloring.astype(np.float64) / math.sqrt(n))

    def apply(v):
        w = a @ v
        for u in deflate:
            w -= (u @ w) * u
        return w

    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    for u in deflate:
        x -= (u @ x) * u
    x /= np.linalg.norm(x)

    theta = 0.0
    for _ in range(max_iter):
        z = apply(apply(x))  # one step of power iteration on A'^2
        theta = float(x @ z)
        resid = float(np.linalg.norm(z - theta * x))
        nz = float(np.linalg.norm(z))
        if nz == 0.0:
            break
        x = z / nz
        if resid <= tol:
            break
    else:
        raise RuntimeError(f"power iteration did not reach residual {tol} "
                           f"in {max_iter} iterations")
    estimate = math.sqrt(max(theta, 0.0))
    return SpectralReport(g.n, d, estimate + tol, "power-iteration", bipartite, tol)


# ---------------------------------------------------------------------------
# Mixing-lemma checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixingReport:
    lam: float
    trials: int
    violations: int
    max_ratio: float

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "trials": self.trials,
                "violations": self.violations, "max_ratio": self.max_ratio}


def _edges_inside(g: Graph, mask: np.ndarray) -> int:
    x = mask.astype(np.float64)
    return int(round((x @ (g.csr @ x)) / 2))


def _edges_between(g: Graph, mu: np.ndarray, mv: np.ndarray) -> int:
    return int(round(mu.astype(np.float64) @ (g.csr @ mv.astype(np.float64))))


def check_mixing(g: Graph, lam: float, trials: int, seed: int = 0) -> MixingReport:
    """Sample vertex sets and test both mixing inequalities with the given
    lambda:

        |2 e(G[U]) - (d/n)|U|^2|        <= lam |U|
        |e(G[U,V]) - (d/n)|U||V||       <= lam sqrt(|U||V|)   (U, V disjoint)

    Returns the violation count and the largest observed LHS/RHS ratio.
    """
    if not g.is_regular():
        raise ValueError("mixing check requires a regular graph")
    d, n = g.degree, g.n
    rng = np.random.default_rng(seed)
    violations = 0
    max_ratio = 0.0
    eps = 1e-9
    for _ in range(trials):
        mask = rng.random(n) < 0.5
        u = int(mask.sum())
        if u:
            lhs = abs(2 * _edges_inside(g, mask) - d / n * u * u)
            rhs = lam * u
            max_ratio = max(max_ratio, lhs / rhs)
            if lhs > rhs + eps:
                violations += 1
        c = rng.integers(0, 3, n)
        mu, mv = c == 0, c == 1
        u, v = int(mu.sum()), int(mv.sum())
        if u and v:
            lhs = abs(_edges_between(g, mu, mv) - d / n * u * v)
            rhs = lam * math.sqrt(u * v)
            max_ratio = max(max_ratio, lhs / rhs)
            if lhs > rhs + eps:
                violations += 1
    return MixingReport(lam, trials, violations, max_ratio)


# ---------------------------------------------------------------------------
# Component / star lemmas as runnable operations
# ---------------------------------------------------------------------------

def largest_component(g: Graph, subset) -> tuple[int, ...]:
    """Vertex set of a maximum connected component of G[subset].

    Ties are broken toward the component containing the smallest vertex, so
    the result is deterministic.
    """
    inside = set(int(v) for v in subset)
    best: tuple[int, ...] = ()
    seen: set[int] = set()
    for s in sorted(inside):
        if s in seen:
            continue
        comp = {s}
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for v in g.adjacency[u]:
                if v in inside and v not in comp:
                    comp.add(v)
                    dq.append(v)
        seen |= comp
        if len(comp) > len(best):
            best = tuple(sorted(comp))
    return best


def find_star_vertex(g: Graph, u0, *others):
    """A vertex of u0 adjacent to every one of the other sets, or None.

    The sets must be pairwise disjoint.  Scans u0 in ascending order, so the
    answer is deterministic.
    """
    sets = [set(int(v) for v in u0)] + [set(int(v) for v in s) for s in others]
    for a, b in combinations(sets, 2):
        if a & b:
            raise ValueError("vertex sets must be pairwise disjoint")
    for x in sorted(sets[0]):
        nbrs = g.neighbor_sets[x]
        if all(nbrs & s for s in sets[1:]):
            return x
    return None


# ---------------------------------------------------------------------------
# Graph operators
# ---------------------------------------------------------------------------

def _bfs_within(g: Graph, start: int, radius: int) -> dict[int, int]:
    dist = {start: 0}
    dq = deque([start])
    while dq:
        u = dq.popleft()
        if dist[u] == radius:
            continue
        for v in g.adjacency[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                dq.append(v)
    return dist


def ball(g: Graph, x: int, t: int) -> tuple[int, ...]:
    """All vertices at distance at most t from x (BFS)."""
    if t < 0:
        raise ValueError("radius must be >= 0")
    return tuple(sorted(_bfs_within(g, x, t)))


def power_graph(g: Graph, u: int) -> Graph:
    """Edge xy iff 1 <= dist(x, y) <= u."""
    if u < 1:
        raise ValueError("power must be >= 1")
    edges = []
    for x in range(g.n):
        for y in _bfs_within(g, x, u):
            if x < y:
                edges.append((x, y))
    return Graph(g.n, edges)


def blowup(g: Graph, d: int) -> Graph:
    """Replace each vertex by a clique of size d, joining cliques completely
    across original edges.  n*d vertices."""
    if d < 1:
        raise ValueError("blow-up factor must be >= 1")
    edges = []
    for v in range(g.n):
        for i, j in combinations(range(d), 2):
            edges.append((v * d + i, v * d + j))
    for u, v in g.edges():
        for i in range(d):
            for j in range(d):
                edges.append((u * d + i, v * d + j))
    return Graph(g.n * d, edges)


def clique_hypergraph(g: Graph, r: int, *, budget: int = DEFAULT_BUDGETS.cliques) -> Hypergraph:
    """The r-uniform hypergraph of all r-cliques of g."""
    if r < 2:
        raise ValueError("clique size must be >= 2")
    edges: list[tuple[int, ...]] = []

    def extend(clique: list[int], candidates: list[int]):
        if len(clique) == r:
            if len(edges) >= budget:
                raise BudgetExceededError("cliques", budget, len(edges) + 1)
            edges.append(tuple(clique))
            return
        for idx, v in enumerate(candidates):
            nxt = [w for w in candidates[idx + 1:] if g.has_edge(v, w)]
            if len(clique) + 1 + len(nxt) >= r:
                extend(clique + [v], nxt)

    for v in range(g.n):
        extend([v], [w for w in g.adjacency[v] if w > v])
    return Hypergraph.from_edges(g.n, edges, max_edge_size=r)


# ---------------------------------------------------------------------------
# Graph file format
# ---------------------------------------------------------------------------

def format_graph(g: Graph) -> str:
    lines = [f"graph {g.n} {g.m}"]
    for u, v in g.edges():
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty graph file")
    head = lines[0].split()
    if head[0] != "graph" or len(head) != 3:
        raise ValueError(f"malformed graph header: {lines[0]!r}")
    n, m = int(head[1]), int(head[2])
    if len(lines) != 1 + m:
        raise ValueError(f"expected {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        u, v = ln.split()
        edges.append((int(u), int(v)))
    return Graph(n, edges)


def write_graph(path, g: Graph) -> None:
    with open(path, "w") as f:
        f.write(format_graph(g))


def read_graph(path) -> Graph:
    with open(path) as f:
        return parse_graph(f.read())
