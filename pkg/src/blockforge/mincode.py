"""s-minimal codes and their duality with strong blocking sets.

A code is s-minimal when the supports of its s-dimensional subspaces form an
antichain: no distinct pair X != Y with supp(X) contained in supp(Y)
(containment here is inclusive, which is the reading under which the
equivalence with strong blocking sets is exact, equal supports included).
The row space of a generator matrix with nonzero, pairwise projectively
distinct columns is s-minimal iff those columns form a strong s-blocking
set; duality_check runs both oracles and treats disagreement as a fatal
internal error.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .budgets import DEFAULT_BUDGETS
from .construct import BlockingSet
from .errors import BudgetExceededError, DualityMismatchError
from .gf import FieldSpec
from .linalg import (MatrixGF, SubspaceBasis, enumerate_subspaces,
                     gaussian_binomial, matmul, rank)
from .supply import normalize_column
from .verify import is_strong_blocking


@dataclass(frozen=True)
class LinearCode:
    """A [n, k] code held as a full-rank generator matrix."""

    generator: MatrixGF

    def __post_init__(self):
        if rank(self.generator) != self.generator.rows:
            raise ValueError("generator matrix is rank-deficient")

    @property
    def field(self) -> FieldSpec:
        return self.generator.field

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return self.generator.rows

    def minimum_distance(self, *, budget: int = DEFAULT_BUDGETS.codewords) -> int:
        from .supply import _min_distance
        d = _min_distance(self.generator, budget=budget)
        assert d is not None  # full-rank generator
        return d


def blocking_to_code(b: BlockingSet) -> LinearCode:
    """Generator matrix whose columns are the points of b (must span)."""
    gen = MatrixGF(b.field, b.points.T)
    if rank(gen) < b.k:
        raise ValueError("point set does not span; the code would be rank-deficient")
    return LinearCode(gen)


def code_to_blocking(code: LinearCode, provenance=None) -> BlockingSet:
    return BlockingSet.from_points(code.field, code.generator.data.T,
                                   provenance or {"construction": "code-columns"})


def support(x: SubspaceBasis) -> frozenset[int]:
    """Coordinate positions where some vector of the subspace is nonzero.

    The union of supports over any spanning set equals the subspace support,
    so this is basis-independent.
    """
    return frozenset(int(j) for j in np.nonzero(x.basis.data.any(axis=0))[0])


def _support_mask(rows: np.ndarray) -> int:
    mask = 0
    for j in np.nonzero(rows.any(axis=0))[0]:
        mask |= 1 << int(j)
    return mask


@dataclass(frozen=True)
class MinimalityReport:
    s: int
    subspaces_examined: int
    result: str  # "pass" | "fail"
    violating_pair: tuple | None  # (basis rows of X, basis rows of Y) with supp X <= supp Y
    wall_time: float

    @property
    def passed(self) -> bool:
        return self.result == "pass"

    def to_dict(self, include_wall_time: bool = False) -> dict:
        d = {"s": self.s, "subspaces_examined": self.subspaces_examined,
             "result": self.result,
             "violating_pair": None if self.violating_pair is None else
             [self.violating_pair[0].tolist(), self.violating_pair[1].tolist()]}
        if include_wall_time:
            d["wall_time"] = self.wall_time
        return d


def is_s_minimal(code: LinearCode, s: int, *,
                 budget: int = DEFAULT_BUDGETS.minimal_subspaces) -> MinimalityReport:
    """Brute-force antichain check over every s-dimensional subspace.

    Subspaces are enumerated in the k-dimensional message space and pushed
    through the generator, so the work is q^k-sized, never q^n-sized.
    Supports are bitmasks; the pair scan is the naive quadratic pass with an
    early exit.
    """
    fld = code.field
    k = code.k
    if s < 1:
        raise ValueError("s must be >= 1")
    t0 = time.perf_counter()
    if s > k:
        return MinimalityReport(s, 0, "pass", None, time.perf_counter() - t0)
    total = gaussian_binomial(k, s, fld.q)
    if total > budget:
        raise BudgetExceededError("minimal_subspaces", budget, total)
    entries = []  # (support mask, code-subspace basis rows)
    for M in enumerate_subspaces(fld, k, k - s, budget=None):
        rows = fld.matmul_arr(M.basis.data, code.generator.data)  # s x n
        entries.append((_support_mask(rows), rows))
    for i in range(len(entries)):
        mi, ri = entries[i]
        for j in range(len(entries)):
            if i == j:
                continue
            mj, rj = entries[j]
            if mi & ~mj == 0:  # supp(X_i) subseteq supp(X_j)
                # Recount directly before reporting.
                si = set(np.nonzero(ri.any(axis=0))[0])
                sj = set(np.nonzero(rj.any(axis=0))[0])
                assert si <= sj
                return MinimalityReport(s, len(entries), "fail", (ri, rj),
                                        time.perf_counter() - t0)
    return MinimalityReport(s, len(entries), "pass", None, time.perf_counter() - t0)


def _validate_admissible(columns: MatrixGF) -> None:
    fld = columns.field
    data = columns.data
    seen = set()
    for j in range(data.shape[1]):
        col = data[:, j]
        if not col.any():
            raise ValueError(f"column {j} is zero")
        key = tuple(int(v) for v in normalize_column(fld, col))
        if key in seen:
            raise ValueError(f"columns {j} repeats an earlier projective point")
        seen.add(key)
    if rank(columns) != columns.rows:
        raise ValueError("columns do not have full row rank")


def duality_check(columns: MatrixGF, s: int, *,
                  subspace_budget: int = DEFAULT_BUDGETS.subspaces,
                  minimal_budget: int = DEFAULT_BUDGETS.minimal_subspaces):
    """Run both sides of the blocking-set / minimal-code equivalence.

    Returns (columns form a strong s-blocking set, row space is s-minimal).
    The two booleans are equal by theorem; inequality raises
    DualityMismatchError because it can only mean a broken oracle.
    """
    _validate_admissible(columns)
    k = columns.rows
    if not 1 <= s < k:
        raise ValueError(f"need 1 <= s < k, got s={s}, k={k}")
    b = BlockingSet.from_points(columns.field, columns.data.T,
                                {"construction": "duality-input"})
    blocking = is_strong_blocking(b, s, budget=subspace_budget).passed
    minimal = is_s_minimal(LinearCode(columns), s, budget=minimal_budget).passed
    if blocking != minimal:
        raise DualityMismatchError(
            f"verifier says blocking={blocking} but minimality says {minimal}; "
            "the two are provably equivalent, so one oracle is broken")
    return blocking, minimal
