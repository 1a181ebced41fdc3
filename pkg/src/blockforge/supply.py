"""Vector supplies in general position.

The constructions consume a set W of n column vectors in F_q^k with two
measured properties: every s+1 columns linearly independent (s_independence)
and every t columns spanning (span_threshold).  At desk scale the asymptotic
code families are replaced by extended Reed-Solomon columns (MDS, when
q >= n-1) or by seeded random supplies that are certified by exhaustive
verification.  Constructions downstream read the measured report, never the
provenance.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .budgets import Budgets, DEFAULT_BUDGETS
from .errors import BudgetExceededError
from .gf import FieldSpec
from .linalg import (MatrixGF, format_matrix, parse_matrix, projective_reps,
                     rank, rref)


def normalize_column(field: FieldSpec, col: np.ndarray) -> np.ndarray:
    """Scale so the first nonzero coordinate is 1."""
    nz = np.nonzero(col)[0]
    if nz.size == 0:
        raise ValueError("cannot normalize the zero vector")
    lead = int(col[nz[0]])
    if lead == 1:
        return col.astype(np.int64)
    return field.mul_arr(field.inv(lead), col)


@dataclass(frozen=True)
class PointSupply:
    """k x n matrix whose columns are projectively distinct nonzero vectors."""

    matrix: MatrixGF
    provenance: str

    def __post_init__(self):
        data = self.matrix.data
        field = self.matrix.field
        seen = set()
        for j in range(data.shape[1]):
            col = data[:, j]
            if not col.any():
                raise ValueError(f"column {j} is the zero vector")
            key = tuple(int(v) for v in normalize_column(field, col))
            if key in seen:
                raise ValueError(f"column {j} repeats an earlier projective point")
            seen.add(key)

    @property
    def field(self) -> FieldSpec:
        return self.matrix.field

    @property
    def k(self) -> int:
        return self.matrix.rows

    @property
    def n(self) -> int:
        return self.matrix.cols

    def column(self, j: int) -> np.ndarray:
        return self.matrix.data[:, j]


@dataclass(frozen=True)
class GeneralPositionReport:
    s_independence: int
    span_threshold: int | None  # None when the columns do not span F_q^k
    method: str  # "exhaustive" | "sampled"

    def to_dict(self) -> dict:
        return {"s_independence": self.s_independence,
                "span_threshold": self.span_threshold,
                "method": self.method}

    @classmethod
    def from_dict(cls, d: dict) -> "GeneralPositionReport":
        return cls(d["s_independence"], d["span_threshold"], d["method"])


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def supply_mds(field: FieldSpec, k: int, n: int) -> PointSupply:
    """Extended Reed-Solomon columns (1, a, a^2, ..., a^(k-1)).

    Needs q >= n-1.  Every min(k, j) columns are independent for all j, and
    every k columns span, which is exactly what a Vandermonde system gives.
    """
    q = field.q
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    if q < n - 1:
        raise ValueError(f"q={q} is too small for n={n} (need q >= n-1)")
    cols = []
    for a in range(min(n, q)):
        cols.append([field.pow(a, i) for i in range(k)])
    if n == q + 1:
        cols.append([0] * (k - 1) + [1])
    data = np.array(cols, dtype=np.int64).T
    return PointSupply(MatrixGF(field, data), provenance="mds")


def supply_random_verified(field: FieldSpec, k: int, n: int, s: int, t: int,
                           seed: int = 0, max_tries: int = 50,
                           budgets: Budgets = DEFAULT_BUDGETS):
    """Seeded random supply certified by verify_general_position.

    Returns (PointSupply, GeneralPositionReport).  Raises after max_tries
    failed candidates; deterministic for a given seed.
    """
    if s >= k:
        raise ValueError(f"s={s} is impossible: {k + 1} vectors in F_q^{k} are never independent")
    if t < k or t > n or n < k:
        raise ValueError(f"infeasible parameters: need n >= k and k <= t <= n")
    q = field.q
    n_projective = (q ** k - 1) // (q - 1)
    if n > n_projective:
        raise ValueError(f"n={n} exceeds the {n_projective} projective points available")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        cols = []
        seen = set()
        attempts = 0
        while len(cols) < n and attempts < 100 * n:
            attempts += 1
            cand = rng.integers(0, q, size=k)
            if not cand.any():
                continue
            key = tuple(int(v) for v in normalize_column(field, cand))
            if key in seen:
                continue
            seen.add(key)
            cols.append(cand)
        if len(cols) < n:
            continue
        supply = PointSupply(MatrixGF(field, np.array(cols, dtype=np.int64).T),
                             provenance="random-verified")
        report = verify_general_position(supply, s, t, budgets=budgets)
        if (report.s_independence >= s and report.span_threshold is not None
                and report.span_threshold <= t):
            return supply, report
    raise ValueError(f"no supply with s={s}, t={t} found in {max_tries} tries (seed={seed})")


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def dual_distance_by_ranks(matrix: MatrixGF, *,
                           budget: int = DEFAULT_BUDGETS.subsets):
    """Smallest number of linearly dependent columns, or None when every
    subset of columns is independent (only possible for n <= k).

    Scans subset sizes upward and rank-checks each submatrix; if no dependent
    subset of size <= k exists and n > k, the answer is k+1.
    """
    k, n = matrix.rows, matrix.cols
    field = matrix.field
    checked = 0
    for j in range(1, min(k, n) + 1):
        count = math.comb(n, j)
        if checked + count > budget:
            raise BudgetExceededError("subsets", budget, checked + count)
        checked += count
        for cols in itertools.combinations(range(n), j):
            sub = MatrixGF(field, matrix.data[:, cols])
            if rank(sub) < j:
                return j
    return k + 1 if n > k else None


def dual_distance_by_codewords(matrix: MatrixGF, *,
                               budget: int = DEFAULT_BUDGETS.codewords):
    """Same value computed the other way: minimum weight over the null space
    of the matrix (enumerated projectively)."""
    field = matrix.field
    q = field.q
    _, r, piv = rref(matrix)
    nullity = matrix.cols - r
    if nullity == 0:
        return None
    total = (q ** nullity - 1) // (q - 1)
    if total > budget:
        raise BudgetExceededError("codewords", budget, total)
    from .linalg import kernel_basis
    kern = kernel_basis(matrix)  # nullity x n
    best = None
    for block in projective_reps(field, nullity):
        words = field.matmul_arr(block.T, kern.data)  # cnt x n
        weights = np.count_nonzero(words, axis=1)
        wmin = int(weights.min())
        if best is None or wmin < best:
            best = wmin
    return best


def _min_distance(matrix: MatrixGF, *, budget: int) -> int | None:
    """Minimum Hamming weight of the row-space code; None if rank < rows."""
    field = matrix.field
    k, n = matrix.rows, matrix.cols
    q = field.q
    if rank(matrix) < k:
        return None
    total = (q ** k - 1) // (q - 1)
    if total > budget:
        raise BudgetExceededError("codewords", budget, total)
    best = n
    for block in projective_reps(field, k):
        words = field.matmul_arr(block.T, matrix.data)
        weights = np.count_nonzero(words, axis=1)
        best = min(best, int(weights.min()))
    return best


def verify_general_position(supply: PointSupply, s: int | None = None,
                            t: int | None = None, *,
                            budgets: Budgets = DEFAULT_BUDGETS,
                            samples: int = 100_000, seed: int = 0) -> GeneralPositionReport:
    """Measure s_independence and span_threshold.

    Exhaustive when both the subset sweep and the codeword sweep fit the
    budgets: independence via the dual distance (rank of every small column
    subset), span via the minimum distance of the column code
    (span_threshold = n - d + 1).  Otherwise falls back to checking the
    requested (s, t) on `samples` seeded random subsets; that path only
    refutes, so the report is flagged method="sampled".
    """
    mat = supply.matrix
    k, n = mat.rows, mat.cols
    q = supply.field.q
    indep_cost = sum(math.comb(n, j) for j in range(1, min(k, n) + 1))
    span_cost = (q ** k - 1) // (q - 1)
    if indep_cost <= budgets.subsets and span_cost <= budgets.codewords:
        dd = dual_distance_by_ranks(mat, budget=budgets.subsets)
        s_ind = k - 1 if dd is None else min(k - 1, dd - 2)
        d = _min_distance(mat, budget=budgets.codewords)
        span = None if d is None else n - d + 1
        return GeneralPositionReport(s_ind, span, "exhaustive")

    if s is None or t is None:
        raise BudgetExceededError(
            "subsets", budgets.subsets, indep_cost,
            "exhaustive check over budget; pass target (s, t) for sampled mode")
    rng = np.random.default_rng(seed)
    field = supply.field
    for _ in range(samples):
        cols = rng.choice(n, size=min(s + 1, n), replace=False)
        if rank(MatrixGF(field, mat.data[:, cols])) < len(cols):
            return GeneralPositionReport(0, None, "sampled")
    for _ in range(samples):
        cols = rng.choice(n, size=min(t, n), replace=False)
        if rank(MatrixGF(field, mat.data[:, cols])) < k:
            return GeneralPositionReport(s, None, "sampled")
    return GeneralPositionReport(s, t, "sampled")


# ---------------------------------------------------------------------------
# File I/O: matrix file + JSON sidecar
# ---------------------------------------------------------------------------

def sidecar_path(path) -> str:
    return str(path) + ".json"


def write_supply(path, supply: PointSupply,
                 report: GeneralPositionReport | None = None) -> None:
    with open(path, "w") as f:
        f.write(format_matrix(supply.matrix))
    side = {"provenance": supply.provenance}
    if report is not None:
        side["report"] = report.to_dict()
    with open(sidecar_path(path), "w") as f:
        json.dump(side, f, sort_keys=True, indent=2)
        f.write("\n")


def read_supply(path):
    """Returns (PointSupply, GeneralPositionReport | None)."""
    with open(path) as f:
        matrix = parse_matrix(f.read())
    provenance = "file"
    report = None
    try:
        with open(sidecar_path(path)) as f:
            side = json.load(f)
        provenance = side.get("provenance", "file")
        if "report" in side:
            report = GeneralPositionReport.from_dict(side["report"])
    except FileNotFoundError:
        pass
    return PointSupply(matrix, provenance=provenance), report
