"""Dense matrices, RREF, and subspace enumeration over GF(q).

Subspaces are canonicalized as the RREF of a basis together with the pivot
columns, so equality is a cheap comparison and enumeration has a stable
order (lexicographic over pivot sets, then over free entries).  GF(2)
elimination additionally runs on bit-packed integer rows; both paths produce
the identical canonical RREF.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .budgets import DEFAULT_BUDGETS
from .errors import BudgetExceededError
from .gf import FieldSpec, parse_field_header


class MatrixGF:
    """An immutable dense matrix over a FieldSpec, entries int64 in [0, q)."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data):
        arr = np.array(data, dtype=np.int64, ndmin=2)
        if arr.ndim != 2:
            raise ValueError(f"matrix data must be 2-D, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError(f"entries out of range for {field!r}")
        arr.setflags(write=False)
        self.field = field
        self.data = arr

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "MatrixGF":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "MatrixGF":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    def transpose(self) -> "MatrixGF":
        return MatrixGF(self.field, self.data.T.copy())

    def __eq__(self, other):
        return (isinstance(other, MatrixGF) and self.field == other.field
                and self.data.shape == other.data.shape
                and np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.field, self.data.shape, self.data.tobytes()))

    def __repr__(self):
        return f"MatrixGF({self.field!r}, {self.data.tolist()})"


def matmul(a: MatrixGF, b: MatrixGF) -> MatrixGF:
    if a.field != b.field:
        raise ValueError("matrices live over different fields")
    if a.cols != b.rows:
        raise ValueError(f"inner dimensions disagree: {a.shape} @ {b.shape}")
    return MatrixGF(a.field, a.field.matmul_arr(a.data, b.data))


# ---------------------------------------------------------------------------
# RREF
# ---------------------------------------------------------------------------

def _rref_generic(field: FieldSpec, data: np.ndarray):
    R = data.astype(np.int64, copy=True)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        pv = int(R[r, c])
        if pv != 1:
            R[r] = field.mul_arr(R[r], field.inv(pv))
        col = R[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            R[hit] = field.sub_arr(R[hit], field.mul_arr(col[hit, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, r, tuple(pivots)


def _rref_gf2_bits(field: FieldSpec, data: np.ndarray):
    # Rows packed into Python ints, bit j <-> column j.
    rows, cols = data.shape
    weights = [1 << j for j in range(cols)]
    packed = [int(sum(int(v) * w for v, w in zip(row, weights))) for row in data]
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = next((i for i in range(r, rows) if (packed[i] >> c) & 1), None)
        if pr is None:
            continue
        packed[r], packed[pr] = packed[pr], packed[r]
        for i in range(rows):
            if i != r and (packed[i] >> c) & 1:
                packed[i] ^= packed[r]
        pivots.append(c)
        r += 1
    out = np.zeros((rows, cols), dtype=np.int64)
    for i, word in enumerate(packed):
        for j in range(cols):
            out[i, j] = (word >> j) & 1
    return out, r, tuple(pivots)


def rref(m: MatrixGF):
    """Reduced row echelon form.  Returns (MatrixGF, rank, pivot columns)."""
    if m.field.q == 2:
        R, r, piv = _rref_gf2_bits(m.field, m.data)
    else:
        R, r, piv = _rref_generic(m.field, m.data)
    return MatrixGF(m.field, R), r, piv


def rank(m: MatrixGF) -> int:
    return rref(m)[1]


def rank_product(a: MatrixGF, b: MatrixGF) -> int:
    """rank(a @ b); always >= rank(a) + rank(b) - inner_dim (Sylvester)."""
    return rank(matmul(a, b))


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------

class SubspaceBasis:
    """Canonical RREF basis of a subspace of F_q^k.

    Because the RREF of a row space is unique, two SubspaceBasis objects are
    equal iff they describe the same subspace.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: MatrixGF, pivots: tuple[int, ...]):
        if basis.cols != ambient_dim:
            raise ValueError("basis width disagrees with ambient dimension")
        if basis.rows != len(pivots):
            raise ValueError("pivot list length disagrees with basis row count")
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = tuple(pivots)

    @property
    def field(self) -> FieldSpec:
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    def contains(self, vec) -> bool:
        w = np.asarray(vec, dtype=np.int64).copy()
        if w.shape != (self.ambient_dim,):
            raise ValueError("vector has the wrong length")
        fld = self.field
        for i, pc in enumerate(self.pivots):
            c = int(w[pc])
            if c:
                w = fld.sub_arr(w, fld.mul_arr(c, self.basis.data[i]))
        return not w.any()

    def __eq__(self, other):
        return (isinstance(other, SubspaceBasis)
                and self.ambient_dim == other.ambient_dim
                and self.pivots == other.pivots
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots, self.basis))

    def __repr__(self):
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient_dim}, pivots={self.pivots})"


def subspace_from_rows(m: MatrixGF) -> SubspaceBasis:
    """Canonical basis of the row space (zero rows dropped)."""
    R, r, piv = rref(m)
    return SubspaceBasis(m.cols, MatrixGF(m.field, R.data[:r]), piv)


def gaussian_binomial(k: int, s: int, q: int) -> int:
    """Number of s-dimensional subspaces of F_q^k, exact integer."""
    if not 0 <= s <= k:
        raise ValueError(f"need 0 <= s <= k, got s={s}, k={k}")
    num = 1
    den = 1
    for i in range(s):
        num *= q ** (k - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def subspace_count(k: int, codim: int, q: int) -> int:
    return gaussian_binomial(k, k - codim, q)


def enumerate_subspaces(field: FieldSpec, k: int, codim: int, *,
                        budget: int | None = DEFAULT_BUDGETS.subspaces,
                        start: int = 0, stop: int | None = None):
    """Yield every codimension-`codim` subspace of F_q^k exactly once.

    Canonical order: pivot column sets lexicographically, then the free RREF
    entries counted in base q (first free position most significant).  The
    [start, stop) window selects a contiguous shard of that order, which is
    what the parallel verifier uses.
    """
    if not 0 <= codim <= k:
        raise ValueError(f"need 0 <= codim <= k, got codim={codim}, k={k}")
    dim = k - codim
    q = field.q
    total = gaussian_binomial(k, dim, q)
    if budget is not None and total > budget:
        raise BudgetExceededError("subspaces", budget, total,
                                  "switch to sampled verification or raise the budget")
    stop = total if stop is None else min(stop, total)
    start = max(start, 0)
    if start >= stop:
        return
    base = 0
    for pivots in itertools.combinations(range(k), dim):
        pivset = set(pivots)
        free = [(i, j) for i in range(dim)
                for j in range(pivots[i] + 1, k) if j not in pivset]
        cell = q ** len(free)
        if base + cell <= start:
            base += cell
            continue
        if base >= stop:
            break
        lo = max(start - base, 0)
        hi = min(stop - base, cell)
        for off in range(lo, hi):
            mat = np.zeros((dim, k), dtype=np.int64)
            for i, pc in enumerate(pivots):
                mat[i, pc] = 1
            rem = off
            for pos in range(len(free) - 1, -1, -1):
                rem, digit = divmod(rem, q)
                mat[free[pos][0], free[pos][1]] = digit
            yield SubspaceBasis(k, MatrixGF(field, mat), pivots)
        base += cell


def kernel_basis(m: MatrixGF) -> MatrixGF:
    """Basis of the right null space {x : m x = 0}, one row per free column."""
    R, r, piv = rref(m)
    k = m.cols
    fld = m.field
    pivset = set(piv)
    rows = []
    for j in range(k):
        if j in pivset:
            continue
        v = np.zeros(k, dtype=np.int64)
        v[j] = 1
        for i, pc in enumerate(piv):
            v[pc] = fld.neg(int(R.data[i, j]))
        rows.append(v)
    if not rows:
        return MatrixGF.zeros(fld, 0, k)
    return MatrixGF(fld, np.stack(rows))


def quotient_map(L: SubspaceBasis) -> MatrixGF:
    """An s x k matrix Q with null space exactly L (s = codim of L).

    Membership test: x in L  <=>  Q @ x == 0.
    """
    s = L.codim
    if s < 1:
        raise ValueError("the full space has no quotient map (codim 0)")
    Q = kernel_basis(L.basis)
    assert Q.rows == s
    return Q


def projective_reps(field: FieldSpec, dim: int, chunk: int = 8192):
    """Yield blocks of projective representatives of F_q^dim as columns.

    Every nonzero vector up to scalar appears exactly once, normalized so the
    first nonzero coordinate is 1.  Order: leading position ascending, then
    the free coordinates in base q (first free coordinate most significant).
    """
    q = field.q
    for lead in range(dim):
        nfree = dim - lead - 1
        total = q ** nfree
        for lo in range(0, total, chunk):
            cnt = min(chunk, total - lo)
            block = np.zeros((dim, cnt), dtype=np.int64)
            block[lead] = 1
            offs = np.arange(lo, lo + cnt, dtype=np.int64)
            for pos in range(nfree):
                block[lead + 1 + pos] = (offs // q ** (nfree - 1 - pos)) % q
            yield block


# ---------------------------------------------------------------------------
# Matrix file format
# ---------------------------------------------------------------------------

def format_matrix(m: MatrixGF) -> str:
    lines = [m.field.header_line(), f"dims {m.rows} {m.cols}"]
    for row in m.data:
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> MatrixGF:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ValueError("matrix file needs a field header and a dims line")
    field = parse_field_header(lines[0])
    dtoks = lines[1].split()
    if dtoks[0] != "dims" or len(dtoks) != 3:
        raise ValueError(f"malformed dims line: {lines[1]!r}")
    rows, cols = int(dtoks[1]), int(dtoks[2])
    if len(lines) != 2 + rows:
        raise ValueError(f"expected {rows} matrix rows, found {len(lines) - 2}")
    data = np.zeros((rows, cols), dtype=np.int64)
    for i, ln in enumerate(lines[2:]):
        vals = [int(t) for t in ln.split()]
        if len(vals) != cols:
            raise ValueError(f"row {i} has {len(vals)} entries, expected {cols}")
        data[i] = vals
    return MatrixGF(field, data)


def write_matrix(path, m: MatrixGF) -> None:
    with open(path, "w") as f:
        f.write(format_matrix(m))


def read_matrix(path) -> MatrixGF:
    with open(path) as f:
        return parse_matrix(f.read())


def random_matrix(field: FieldSpec, rows: int, cols: int, rng) -> MatrixGF:
    return MatrixGF(field, rng.integers(0, field.q, size=(rows, cols)))


def binomial(n: int, k: int) -> int:
    return math.comb(n, k)
