"""Square matrices over GF(2) and block lower-triangular affine (BLTA) groups.

Rows are stored as integer bitmasks: bit ``j - 1`` of ``rows[i - 1]`` is the
entry ``M(i, j)`` with 1-based indices, so row 1 / column 1 are the first
row / column in the usual matrix picture.  A column vector ``a`` in F_2^m is an
integer whose bit ``i - 1`` holds ``a_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 32


class SingularMatrixError(ValueError):
    pass


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


@dataclass(frozen=True)
class Gf2Matrix:
    m: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.m <= MAX_DIM:
            raise ValueError(f"dimension {self.m} outside [1, {MAX_DIM}]")
        if len(self.rows) != self.m:
            raise ValueError("need exactly m rows")
        full = (1 << self.m) - 1
        for r in self.rows:
            if r < 0 or r & ~full:
                raise ValueError("row has bits outside the matrix")

    @classmethod
    def identity(cls, m: int) -> "Gf2Matrix":
        return cls(m, tuple(1 << i for i in range(m)))

    @classmethod
    def from_array(cls, arr) -> "Gf2Matrix":
        a = np.asarray(arr, dtype=np.int64) & 1
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square 2-d array")
        m = a.shape[0]
        weights = 1 << np.arange(m, dtype=np.int64)
        return cls(m, tuple(int(v) for v in (a * weights).sum(axis=1)))

    @classmethod
    def from_entries(cls, m: int, ones: Iterable[tuple[int, int]]) -> "Gf2Matrix":
        """Identity-free constructor from 1-based (row, col) positions of ones."""
        rows = [0] * m
        for i, j in ones:
            rows[i - 1] ^= 1 << (j - 1)
        return cls(m, tuple(rows))

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.m, self.m), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in range(self.m):
                out[i, j] = (r >> j) & 1
        return out

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i - 1] >> (j - 1)) & 1

    def apply(self, a: int) -> int:
        """Matrix-vector product ``M a`` with ``a`` packed as an integer."""
        out = 0
        for i, r in enumerate(self.rows):
            out |= _parity(r & a) << i
        return out

    def column(self, j: int) -> int:
        out = 0
        for i, r in enumerate(self.rows):
            out |= ((r >> (j - 1)) & 1) << i
        return out

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix(self.m, tuple(self.column(j) for j in range(1, self.m + 1)))

    def rank(self) -> int:
        return gf2_rank(self.rows)

    def is_invertible(self) -> bool:
        return self.rank() == self.m

    def submatrix(self, lo: int, hi: int) -> "Gf2Matrix":
        """Principal submatrix on the 1-based index range [lo, hi]."""
        width = hi - lo + 1
        mask = (1 << width) - 1
        return Gf2Matrix(width, tuple((self.rows[i - 1] >> (lo - 1)) & mask
                                      for i in range(lo, hi + 1)))

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        return mat_mul(self, other)

    def to_text(self) -> str:
        lines = [str(self.m)]
        for r in self.rows:
            lines.append("".join(str((r >> j) & 1) for j in range(self.m)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Gf2Matrix":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty matrix text")
        m = int(lines[0])
        body = lines[1:1 + m]
        if len(body) != m or any(len(ln) != m or set(ln) - {"0", "1"} for ln in body):
            raise ValueError(f"expected {m} lines of {m} characters in {{0,1}}")
        return cls.from_array([[int(ch) for ch in ln] for ln in body])


def gf2_rank(rows: Sequence[int]) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


def mat_mul(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    if a.m != b.m:
        raise ValueError(f"dimension mismatch: {a.m} vs {b.m}")
    out = []
    for r in a.rows:
        acc = 0
        j = 0
        while r:
            if r & 1:
                acc ^= b.rows[j]
            r >>= 1
            j += 1
        out.append(acc)
    return Gf2Matrix(a.m, tuple(out))


def mat_inv(a: Gf2Matrix) -> Gf2Matrix:
    m = a.m
    work = list(a.rows)
    inv = [1 << i for i in range(m)]
    for col in range(m):
        bit = 1 << col
        pivot = next((r for r in range(col, m) if work[r] & bit), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular over GF(2)")
        work[col], work[pivot] = work[pivot], work[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        for r in range(m):
            if r != col and work[r] & bit:
                work[r] ^= work[col]
                inv[r] ^= inv[col]
    return Gf2Matrix(m, tuple(inv))


@dataclass(frozen=True)
class AffineMap:
    """The map ``a -> M a + b`` on F_2^m."""

    matrix: Gf2Matrix
    shift: int = 0

    def __post_init__(self):
        if not self.matrix.is_invertible():
            raise SingularMatrixError("affine map needs an invertible matrix")
        if self.shift < 0 or self.shift >> self.m:
            raise ValueError("shift has bits outside F_2^m")

    @property
    def m(self) -> int:
        return self.matrix.m

    @classmethod
    def identity(cls, m: int) -> "AffineMap":
        return cls(Gf2Matrix.identity(m), 0)

    def __call__(self, a: int) -> int:
        return self.matrix.apply(a) ^ self.shift

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """``self o inner``: apply ``inner`` first."""
        return AffineMap(self.matrix @ inner.matrix, self.matrix.apply(inner.shift) ^ self.shift)

    def inverse(self) -> "AffineMap":
        inv = mat_inv(self.matrix)
        return AffineMap(inv, inv.apply(self.shift))

    def shift_bits(self) -> list[int]:
        return [(self.shift >> i) & 1 for i in range(self.m)]

    def to_text(self) -> str:
        return self.matrix.to_text() + "".join(map(str, self.shift_bits())) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "AffineMap":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        mat = Gf2Matrix.from_text("\n".join(lines))
        shift = 0
        if len(lines) > mat.m + 1:
            bits = lines[mat.m + 1]
            if len(bits) != mat.m or set(bits) - {"0", "1"}:
                raise ValueError("shift line must hold m characters in {0,1}")
            shift = sum(int(ch) << i for i, ch in enumerate(bits))
        return cls(mat, shift)


@dataclass(frozen=True)
class BlockStructure:
    """Ordered block sizes <s_1, ..., s_l> of a block lower-triangular pattern."""

    sizes: tuple[int, ...]

    def __init__(self, sizes: Iterable[int]):
        sizes = tuple(int(s) for s in sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError(f"block sizes must be positive, got {list(sizes)}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def m(self) -> int:
        return sum(self.sizes)

    def __len__(self) -> int:
        return len(self.sizes)

    def __iter__(self):
        return iter(self.sizes)

    def __repr__(self) -> str:
        return f"BlockStructure({list(self.sizes)})"

    def prefix(self, t: int) -> int:
        """S_t = s_1 + ... + s_{t-1} (1-based t, S_1 = 0)."""
        if not 1 <= t <= len(self.sizes) + 1:
            raise IndexError(t)
        return sum(self.sizes[:t - 1])

    def breakpoints(self) -> frozenset[int]:
        """Interior cut positions S_2, ..., S_l."""
        return frozenset(self.prefix(t) for t in range(2, len(self.sizes) + 1))

    @classmethod
    def from_breakpoints(cls, m: int, cuts: Iterable[int]) -> "BlockStructure":
        edges = sorted({0, m, *cuts})
        return cls(b - a for a, b in zip(edges, edges[1:]))

    def block_of(self) -> list[int]:
        """0-based block index of each coordinate 1..m (list position i-1)."""
        out = []
        for k, s in enumerate(self.sizes):
            out.extend([k] * s)
        return out

    def upper_mask(self) -> tuple[int, ...]:
        """Per row, the column bits that must be zero for BLTA membership."""
        masks = []
        for t, s in enumerate(self.sizes, start=1):
            end = self.prefix(t) + s
            forbidden = ((1 << self.m) - 1) & ~((1 << end) - 1)
            masks.extend([forbidden] * s)
        return tuple(masks)


def _zero_above(M: Gf2Matrix, lo: int, cut: int) -> bool:
    """True iff M([lo, cut], [cut+1, m]) = 0."""
    mask = ~((1 << cut) - 1)
    return all(M.rows[i - 1] & mask == 0 for i in range(lo, cut + 1))


def block_structure(M: Gf2Matrix) -> BlockStructure:
    if not M.is_invertible():
        raise SingularMatrixError("block structure is defined for invertible matrices")
    sizes = []
    start = 1
    while start <= M.m:
        cut = start
        while cut < M.m and not _zero_above(M, start, cut):
            cut += 1
        sizes.append(cut - start + 1)
        start = cut + 1
    return BlockStructure(sizes)


def is_unit_lower(M: Gf2Matrix) -> bool:
    return all(r >> i == 1 for i, r in enumerate(M.rows))


def is_unit_upper(M: Gf2Matrix) -> bool:
    return all(r & ((1 << (i + 1)) - 1) == 1 << i for i, r in enumerate(M.rows))


def lt_normalize(M: Gf2Matrix) -> tuple[Gf2Matrix, Gf2Matrix, Gf2Matrix]:
    """Return unit lower-triangular L1, L2 and unit upper-triangular U = L1 M L2.

    Works from the last row upward: a row addition from an earlier row puts a
    one on the diagonal, then column additions from the diagonal column into
    earlier columns clear the rest of the row.
    """
    if not M.is_invertible():
        raise SingularMatrixError("lt_normalize needs an invertible matrix")
    m = M.m
    rows = list(M.rows)
    left = [1 << i for i in range(m)]
    right = [1 << i for i in range(m)]
    for k in range(m - 1, -1, -1):
        kbit = 1 << k
        if not rows[k] & kbit:
            src = next(i for i in range(k) if rows[i] & kbit)
            rows[k] ^= rows[src]
            left[k] ^= left[src]
        for j in range(k):
            if rows[k] >> j & 1:
                # column j += column k, for the working matrix and for L2
                for r in range(m):
                    if rows[r] & kbit:
                        rows[r] ^= 1 << j
                    if right[r] & kbit:
                        right[r] ^= 1 << j
    return Gf2Matrix(m, tuple(left)), Gf2Matrix(m, tuple(rows)), Gf2Matrix(m, tuple(right))


def decompose_upper(U: Gf2Matrix) -> tuple[Gf2Matrix, Gf2Matrix]:
    """Split U = M1 M2 at the last block boundary of s(U)."""
    if not is_unit_upper(U):
        raise ValueError("decompose_upper needs a unit upper-triangular matrix")
    s = block_structure(U)
    cut = U.m - s.sizes[-1]
    low = (1 << cut) - 1
    m1 = tuple(r & low if i < cut else 1 << i for i, r in enumerate(U.rows))
    m2 = tuple(1 << i if i < cut else r & ~low for i, r in enumerate(U.rows))
    return Gf2Matrix(U.m, m1), Gf2Matrix(U.m, m2)


def is_member_blta(M: Gf2Matrix, s: BlockStructure) -> bool:
    if M.m != s.m:
        raise ValueError(f"dimension mismatch: matrix {M.m}, structure {s.m}")
    if any(r & f for r, f in zip(M.rows, s.upper_mask())):
        return False
    return M.is_invertible()


def gl_order(k: int) -> tuple[int, int]:
    """|GL(k, 2)| as (odd_factor, pow2)."""
    odd = 1
    for j in range(1, k + 1):
        odd *= (1 << j) - 1
    return odd, k * (k - 1) // 2


def blta_order(s: BlockStructure) -> tuple[int, int]:
    """Number of invertible matrices with block pattern ``s`` as (odd, pow2).

    This counts linear parts only; multiply by 2**m for the affine group.
    """
    odd, pow2 = 1, 0
    for k in s.sizes:
        o, p = gl_order(k)
        odd *= o
        pow2 += p
    pow2 += (s.m ** 2 - sum(k * k for k in s.sizes)) // 2
    return odd, pow2


def factored_int(order: tuple[int, int]) -> int:
    odd, pow2 = order
    return odd << pow2


def format_factored(order: tuple[int, int]) -> str:
    odd, pow2 = order
    return f"{odd}*2^{pow2}"


def gro(s1: BlockStructure, s2: BlockStructure) -> BlockStructure:
    """Structure of BLTA(s1) ∩ BLTA(s2): the union of both breakpoint sets."""
    if s1.m != s2.m:
        raise ValueError(f"mismatched dimensions {s1.m} and {s2.m}")
    return BlockStructure.from_breakpoints(s1.m, s1.breakpoints() | s2.breakpoints())


def _random_bits(rng: np.random.Generator, width: int) -> int:
    if width == 0:
        return 0
    bits = rng.integers(0, 2, size=width)
    return int(np.dot(bits, 1 << np.arange(width, dtype=np.int64)))


def sample_blta(s: BlockStructure, rng: np.random.Generator, *, with_shift: bool = True) -> AffineMap:
    """Uniform element of BLTA(s); diagonal blocks by rejection sampling."""
    m = s.m
    rows = [0] * m
    for t, size in enumerate(s.sizes, start=1):
        start = s.prefix(t)
        block = [1]  # GL(1, 2) is trivial
        while size > 1:
            block = [_random_bits(rng, size) for _ in range(size)]
            if gf2_rank(block) == size:
                break
        for i in range(size):
            rows[start + i] = _random_bits(rng, start) | (block[i] << start)
    shift = _random_bits(rng, m) if with_shift else 0
    return AffineMap(Gf2Matrix(m, tuple(rows)), shift)
