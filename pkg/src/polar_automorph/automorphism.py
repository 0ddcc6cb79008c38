"""Affine automorphisms of decreasing monomial codes as position permutations."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .gf2 import AffineMap, BlockStructure, Gf2Matrix, is_member_blta, sample_blta
from .monomial import InfoSet, NotDecreasingError, is_decreasing


@dataclass(frozen=True)
class Permutation:
    """Forward table p on positions; acting on vectors as ``v'[i] = v[p(i)]``."""

    table: tuple[int, ...]

    def __init__(self, table):
        table = tuple(int(t) for t in table)
        if sorted(table) != list(range(len(table))):
            raise ValueError("table is not a bijection on 0..n-1")
        object.__setattr__(self, "table", table)

    @property
    def n(self) -> int:
        return len(self.table)

    def __call__(self, z: int) -> int:
        return self.table[z]

    def array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.intp)

    def compose(self, inner: "Permutation") -> "Permutation":
        """(self o inner)(z) = self(inner(z))."""
        return Permutation(self.table[j] for j in inner.table)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.table):
            inv[j] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.table))

    def to_json(self) -> str:
        return json.dumps(list(self.table))

    @classmethod
    def from_json(cls, text: str) -> "Permutation":
        return cls(json.loads(text))


def perm_from_affine(t: AffineMap) -> Permutation:
    n = 1 << t.m
    top = n - 1
    return Permutation(top - t(top - z) for z in range(n))


def apply_perm(p: Permutation, v):
    """pi(v) with pi(v)[i] = v[p(i)], along the last axis."""
    v = np.asarray(v)
    if v.shape[-1] != p.n:
        raise ValueError(f"vector length {v.shape[-1]} != permutation size {p.n}")
    return v[..., p.array()]


@dataclass(frozen=True)
class AffineAutomorphism:
    map: AffineMap
    perm: Permutation

    @classmethod
    def from_map(cls, t: AffineMap) -> "AffineAutomorphism":
        return cls(t, perm_from_affine(t))

    @property
    def m(self) -> int:
        return self.map.m

    def forward(self, v):
        return apply_perm(self.perm, v)

    def backward(self, v):
        return apply_perm(self.perm.inverse(), v)


def _substitute(a: int, M: Gf2Matrix) -> set[int]:
    """Monomials of prod_{i in a} (row_i . x), expanded with x_i^2 = x_i."""
    poly = {0}
    i = 0
    while a:
        if a & 1:
            row = M.rows[i]
            nxt: set[int] = set()
            for mono in poly:
                r = row
                j = 0
                while r:
                    if r & 1:
                        nxt ^= {mono | (1 << j)}
                    r >>= 1
                    j += 1
            poly = nxt
        a >>= 1
        i += 1
    return poly


def is_automorphism(M: Gf2Matrix, info: InfoSet) -> bool:
    """Whether a -> M a (+ any b) maps C(info) onto itself."""
    if M.m != info.m:
        raise ValueError("dimension mismatch")
    members = info.members
    # high-degree monomials first: they fail soonest
    for a in sorted(members, key=lambda v: -bin(v).count("1")):
        if not _substitute(a, M) <= members:
            return False
    return True


def _adjacent_transvection(m: int, j: int) -> Gf2Matrix:
    rows = [1 << i for i in range(m)]
    rows[j - 1] |= 1 << j
    return Gf2Matrix(m, tuple(rows))


def automorphism_group(info: InfoSet, *, spot_checks: int = 8, seed: int = 0) -> BlockStructure:
    """Block structure s* with Aut_affine(C(info)) = BLTA(s*)."""
    if not is_decreasing(info):
        raise NotDecreasingError("automorphism group requires a decreasing set")
    m = info.m
    if m == 0:
        raise ValueError("code of length 1 has no coordinates")
    cuts = [j for j in range(1, m) if not is_automorphism(_adjacent_transvection(m, j), info)]
    s = BlockStructure.from_breakpoints(m, cuts)
    rng = np.random.default_rng(seed)
    for _ in range(spot_checks):
        if not is_automorphism(sample_blta(s, rng).matrix, info):
            raise AssertionError("BLTA sample is not an automorphism; completeness assumption broken")
    return s


def is_code_automorphism(t: AffineMap, info: InfoSet) -> bool:
    return is_automorphism(t.matrix, info)


def in_aut(M: Gf2Matrix, aut: BlockStructure) -> bool:
    return is_member_blta(M, aut)
