"""Arithmetic in GF(p^m).

Scalars are plain integers in [0, q) encoding polynomials over GF(p) in
base p: value = a_0 + a_1*p + ... + a_{m-1}*p^(m-1).  A FieldSpec owns the
modulus and the multiplication tables; it is immutable after construction
and safe to share across threads.  Scalar methods validate their operands,
the *_arr methods are the unchecked fast path for numpy arrays.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

# Fields are capped at 2^16 elements: log/exp tables stay small and the
# desk-scale constructions never need more.
MAX_ORDER = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# polynomial helpers (coefficient lists over GF(p), low degree first)
# ---------------------------------------------------------------------------

def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    # mod must be monic
    a = list(a)
    d = len(mod) - 1
    while len(a) - 1 >= d and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - d
            for i, c in enumerate(mod):
                a[shift + i] = (a[shift + i] - lead * c) % p
        a.pop()
    return _poly_trim(a)


def poly_is_irreducible(coeffs: list[int], p: int) -> bool:
    """Trial division against every lower-degree monic polynomial."""
    coeffs = list(coeffs)
    m = len(coeffs) - 1
    if m < 1 or coeffs[-1] != 1:
        return False
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for digits in itertools.product(range(p), repeat=d):
            divisor = list(digits) + [1]
            if not _poly_mod(coeffs, divisor, p):
                return False
    return True


def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree m over GF(p).

    Deterministic so that file headers written on different machines agree.
    """
    for digits in itertools.product(range(p), repeat=m):
        cand = list(digits) + [1]
        if poly_is_irreducible(cand, p):
            return tuple(cand)
    raise RuntimeError(f"no irreducible of degree {m} over GF({p})")  # unreachable


# ---------------------------------------------------------------------------
# FieldSpec
# ---------------------------------------------------------------------------

class FieldSpec:
    """GF(p^m) with table-driven multiplication.  Use :func:`field_create`."""

    def __init__(self, p: int, m: int, modulus):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if m < 1:
            raise ValueError(f"extension degree m={m} must be >= 1")
        q = p ** m
        if q > MAX_ORDER:
            raise ValueError(f"field order {q} exceeds the supported bound {MAX_ORDER}")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {m}, got {modulus}")
        if not poly_is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = modulus
        self._pows = p ** np.arange(m, dtype=np.int64)
        self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _decode(self, a: int) -> list[int]:
        digits = []
        for _ in range(self.m):
            a, r = divmod(a, self.p)
            digits.append(r)
        return digits

    def _encode(self, digits) -> int:
        v = 0
        for d in reversed(list(digits)):
            v = v * self.p + (d % self.p)
        return v

    def _mul_raw(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        prod = _poly_mul(self._decode(a), self._decode(b), self.p)
        prod = _poly_mod(prod, list(self.modulus), self.p)
        prod += [0] * (self.m - len(prod))
        return self._encode(prod)

    def _build_tables(self):
        q = self.q
        if q == 2:
            exp = [1]
        else:
            exp = None
            for g in range(2, q):
                seq = [1]
                e = g
                while e != 1:
                    seq.append(e)
                    e = self._mul_raw(e, g)
                    if len(seq) > q:  # pragma: no cover - defensive
                        raise RuntimeError("multiplication table is inconsistent")
                if len(seq) == q - 1:
                    exp = seq
                    break
            if exp is None:  # pragma: no cover - every finite field is cyclic
                raise RuntimeError(f"no generator found for GF({q})")
        self._exp = np.asarray(exp, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        log[self._exp] = np.arange(q - 1, dtype=np.int64)
        self._log = log
        inv = np.zeros(q, dtype=np.int64)
        inv[self._exp] = self._exp[(-np.arange(q - 1)) % (q - 1)]
        self._inv = inv

    # -- identity ------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"

    # -- scalar operations (validated) ---------------------------------------

    def _check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise ValueError(f"scalar {a} is not an element of {self!r}")
        return a

    def add(self, a: int, b: int) -> int:
        a, b = self._check(a), self._check(b)
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._encode((x + y) % self.p for x, y in zip(self._decode(a), self._decode(b)))

    def neg(self, a: int) -> int:
        a = self._check(a)
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self._encode((-x) % self.p for x in self._decode(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        a, b = self._check(a), self._check(b)
        if a == 0 or b == 0:
            return 0
        return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        a = self._check(a)
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self!r}")
        return int(self._inv[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        a = self._check(a)
        e = int(e)
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0
        return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])

    def elements(self):
        return range(self.q)

    # -- array operations (unchecked fast path) -------------------------------

    def add_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        da = (a[..., None] // self._pows) % self.p
        db = (b[..., None] // self._pows) % self.p
        return ((da + db) % self.p) @ self._pows

    def neg_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        if self.m == 1:
            return (-a) % self.p
        d = (a[..., None] // self._pows) % self.p
        return ((-d) % self.p) @ self._pows

    def sub_arr(self, a, b):
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a * b) % self.p
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=np.int64)
        mask = (a != 0) & (b != 0)
        if mask.any():
            out[mask] = self._exp[(self._log[a[mask]] + self._log[b[mask]]) % (self.q - 1)]
        return out

    def inv_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ZeroDivisionError(f"0 has no inverse in {self!r}")
        return self._inv[a]

    def matmul_arr(self, a, b):
        """(r x t) @ (t x c) over the field, plain int64 arrays in and out."""
        a = np.atleast_2d(np.asarray(a, dtype=np.int64))
        b = np.atleast_2d(np.asarray(b, dtype=np.int64))
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"inner dimensions disagree: {a.shape} @ {b.shape}")
        if self.m == 1:
            return (a @ b) % self.p
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for t in range(a.shape[1]):
            out = self.add_arr(out, self.mul_arr(a[:, t:t + 1], b[t:t + 1, :]))
        return out

    # -- file header ----------------------------------------------------------

    def header_line(self) -> str:
        return "field {} {} {}".format(self.p, self.m, " ".join(str(c) for c in self.modulus))


@functools.lru_cache(maxsize=64)
def _cached_field(p: int, m: int, modulus: tuple[int, ...]) -> FieldSpec:
    return FieldSpec(p, m, modulus)


def field_create(p: int, m: int = 1, modulus=None) -> FieldSpec:
    """Create (or fetch from cache) GF(p^m).

    When no modulus is given the lexicographically least monic irreducible of
    degree m is used, so the default field for a given (p, m) is identical
    across runs and machines.
    """
    p, m = int(p), int(m)
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if m < 1:
        raise ValueError(f"extension degree m={m} must be >= 1")
    if p ** m > MAX_ORDER:
        raise ValueError(f"field order {p ** m} exceeds the supported bound {MAX_ORDER}")
    if modulus is None:
        modulus = default_modulus(p, m)
    return _cached_field(p, m, tuple(int(c) for c in modulus))


def parse_field_header(line: str) -> FieldSpec:
    toks = line.split()
    if len(toks) < 4 or toks[0] != "field":
        raise ValueError(f"malformed field header: {line!r}")
    p, m = int(toks[1]), int(toks[2])
    modulus = [int(t) for t in toks[3:]]
    if len(modulus) != m + 1:
        raise ValueError(f"field header lists {len(modulus)} coefficients, expected {m + 1}")
    return field_create(p, m, modulus)
