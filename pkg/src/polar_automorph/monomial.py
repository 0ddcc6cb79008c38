"""Decreasing monomial codes.

Code positions carry two labels.  ``z`` is the ordinary position / row index
of ``G_m``.  ``a`` is the bit vector of ``2^m - 1 - z`` with ``a_1`` the least
significant bit, and names the monomial ``x_1^{a_1} ... x_m^{a_m}``.  All
internal bookkeeping is done on ``a`` packed as an integer; ``z`` only appears
at input/output boundaries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np


class NotDecreasingError(ValueError):
    pass


def z_to_a(z: int, m: int) -> int:
    n = 1 << m
    if not 0 <= z < n:
        raise ValueError(f"position {z} outside [0, {n - 1}]")
    return n - 1 - z


a_to_z = z_to_a


def a_bits(a: int, m: int) -> tuple[int, ...]:
    """(a_1, ..., a_m)."""
    return tuple((a >> i) & 1 for i in range(m))


def bits_to_int(bits: Sequence[int]) -> int:
    return sum((int(b) & 1) << i for i, b in enumerate(bits))


@dataclass(frozen=True, order=True)
class Monomial:
    m: int
    exps: int

    @classmethod
    def from_vars(cls, m: int, variables: Iterable[int]) -> "Monomial":
        """Build x_{i_1} ... x_{i_t} from 1-based variable indices."""
        exps = 0
        for i in variables:
            if not 1 <= i <= m:
                raise ValueError(f"variable x_{i} outside 1..{m}")
            exps |= 1 << (i - 1)
        return cls(m, exps)

    @classmethod
    def from_z(cls, z: int, m: int) -> "Monomial":
        return cls(m, z_to_a(z, m))

    @property
    def degree(self) -> int:
        return bin(self.exps).count("1")

    @property
    def variables(self) -> list[int]:
        return [i + 1 for i in range(self.m) if self.exps >> i & 1]

    @property
    def z(self) -> int:
        return a_to_z(self.exps, self.m)

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        return "".join(f"x{i}" for i in self.variables)


def _vars(a: int) -> list[int]:
    out = []
    i = 0
    while a:
        if a & 1:
            out.append(i)
        a >>= 1
        i += 1
    return out


def precedes_a(f: int, g: int) -> bool:
    """f ≼ g on packed exponent vectors."""
    fi, gj = _vars(f), _vars(g)
    t, r = len(fi), len(gj)
    if t > r:
        return False
    return all(fi[l] <= gj[r - t + l] for l in range(t))


def precedes(f: Monomial, g: Monomial) -> bool:
    if f.m != g.m:
        raise ValueError("monomials live in different dimensions")
    return precedes_a(f.exps, g.exps)


def _lower_covers(a: int, m: int) -> Iterable[int]:
    """Monomials directly below ``a``: drop a variable, or shift x_j to x_{j-1}."""
    for i in range(m):
        bit = 1 << i
        if a & bit:
            yield a ^ bit
            if i > 0 and not a & (bit >> 1):
                yield a ^ bit ^ (bit >> 1)


@dataclass(frozen=True)
class InfoSet:
    """Information set as packed a-vectors (monomial exponents)."""

    m: int
    members: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("negative dimension")
        object.__setattr__(self, "members", frozenset(int(a) for a in self.members))
        n = 1 << self.m
        if any(not 0 <= a < n for a in self.members):
            raise ValueError(f"index vector outside F_2^{self.m}")

    @classmethod
    def from_z(cls, m: int, zs: Iterable[int]) -> "InfoSet":
        return cls(m, frozenset(z_to_a(z, m) for z in zs))

    @classmethod
    def from_mask(cls, mask: Sequence[bool] | np.ndarray) -> "InfoSet":
        """From a boolean information mask in z-order."""
        mask = np.asarray(mask, dtype=bool)
        m = int(mask.size).bit_length() - 1
        if 1 << m != mask.size:
            raise ValueError("mask length must be a power of two")
        return cls.from_z(m, np.flatnonzero(mask).tolist())

    @classmethod
    def full(cls, m: int) -> "InfoSet":
        return cls(m, frozenset(range(1 << m)))

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def k(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, a: int) -> bool:
        return a in self.members

    def frozen(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.members

    def z_labels(self) -> list[int]:
        return sorted(a_to_z(a, self.m) for a in self.members)

    def mask(self) -> np.ndarray:
        """Boolean information mask indexed by position z."""
        out = np.zeros(self.n, dtype=bool)
        for a in self.members:
            out[self.n - 1 - a] = True
        return out

    def key(self) -> tuple[int, frozenset[int]]:
        return self.m, self.members


def decreasing_closure(gens: Iterable[Monomial], m: int | None = None) -> InfoSet:
    gens = list(gens)
    if m is None:
        if not gens:
            raise ValueError("dimension required for an empty generator set")
        m = gens[0].m
    if any(g.m != m for g in gens):
        raise ValueError("generators from different dimensions")
    seen: set[int] = set()
    stack = [g.exps for g in gens]
    while stack:
        a = stack.pop()
        if a in seen:
            continue
        seen.add(a)
        stack.extend(b for b in _lower_covers(a, m) if b not in seen)
    return InfoSet(m, frozenset(seen))


def closure_from_z(m: int, i_min: Iterable[int]) -> InfoSet:
    return decreasing_closure([Monomial.from_z(z, m) for z in i_min], m)


def is_decreasing(info: InfoSet) -> bool:
    return all(b in info.members for a in info.members for b in _lower_covers(a, info.m))


def subcode_info(info: InfoSet, constraint: Mapping[int, int] | Iterable[tuple[int, int]]) -> InfoSet:
    """Members satisfying ``a_i = c`` for each (i, c), with those coordinates deleted.

    Positions ``i`` are 1-based.
    """
    pairs = dict(constraint.items() if isinstance(constraint, Mapping) else constraint)
    for i in pairs:
        if not 1 <= i <= info.m:
            raise ValueError(f"constraint position {i} outside 1..{info.m}")
    fixed_mask = 0
    fixed_val = 0
    for i, c in pairs.items():
        fixed_mask |= 1 << (i - 1)
        fixed_val |= (int(c) & 1) << (i - 1)
    keep = [i for i in range(info.m) if not fixed_mask >> i & 1]
    out = set()
    for a in info.members:
        if a & fixed_mask == fixed_val:
            out.add(sum(((a >> src) & 1) << dst for dst, src in enumerate(keep)))
    return InfoSet(len(keep), frozenset(out))


def polar_transform(u: np.ndarray) -> np.ndarray:
    """x = u G_m over GF(2); works along the last axis."""
    x = np.array(u, dtype=np.uint8, copy=True)
    n = x.shape[-1]
    half = 1
    while half < n:
        v = x.reshape(x.shape[:-1] + (n // (2 * half), 2, half))
        v[..., 0, :] ^= v[..., 1, :]
        half *= 2
    return x


def eval_monomial(a: int, m: int) -> np.ndarray:
    """eval(g) with position z holding g(z_to_a(z))."""
    n = 1 << m
    pts = n - 1 - np.arange(n)
    return ((pts & a) == a).astype(np.uint8)


@dataclass(frozen=True)
class PolarCode:
    info: InfoSet
    verified: bool = True

    def __init__(self, info: InfoSet, *, allow_non_decreasing: bool = False):
        object.__setattr__(self, "info", info)
        ok = is_decreasing(info)
        if not ok and not allow_non_decreasing:
            raise NotDecreasingError("information set is not decreasing")
        object.__setattr__(self, "verified", ok)

    @property
    def m(self) -> int:
        return self.info.m

    @property
    def n(self) -> int:
        return self.info.n

    @property
    def k(self) -> int:
        return self.info.k

    @property
    def rate(self) -> float:
        return self.k / self.n

    def mask(self) -> np.ndarray:
        return self.info.mask()

    def generator_matrix(self) -> np.ndarray:
        rows = np.flatnonzero(self.mask())
        return polar_transform(np.eye(self.n, dtype=np.uint8)[rows])


def encode(code: PolarCode, message) -> np.ndarray:
    """Encode message bits (placed on information positions in ascending z)."""
    msg = np.asarray(message, dtype=np.uint8)
    if msg.shape[-1] != code.k:
        raise ValueError(f"message length {msg.shape[-1]} != K = {code.k}")
    u = np.zeros(msg.shape[:-1] + (code.n,), dtype=np.uint8)
    u[..., code.mask()] = msg & 1
    return polar_transform(u)


def bhattacharyya_bec(m: int, erasure, exact: bool | None = None) -> list:
    """Bhattacharyya parameters of the 2^m synthetic BEC channels, by position z."""
    if exact is None:
        exact = m <= 10
    z0 = Fraction(erasure) if exact else float(erasure)
    params = [z0]
    # Most significant bit of z chooses the first split: 0 -> worse, 1 -> better.
    for _ in range(m):
        params = [2 * p - p * p for p in params] + [p * p for p in params]
    # after the loop the first split sits in the least significant position
    n = 1 << m
    return [params[_bit_reverse(z, m)] for z in range(n)]


def _bit_reverse(x: int, m: int) -> int:
    out = 0
    for _ in range(m):
        out = (out << 1) | (x & 1)
        x >>= 1
    return out


def bec_construct(m: int, k: int, erasure) -> InfoSet:
    if not 0 < float(erasure) < 1:
        raise ValueError("erasure probability must lie in (0, 1)")
    n = 1 << m
    if not 0 <= k <= n:
        raise ValueError(f"K={k} outside [0, {n}]")
    params = bhattacharyya_bec(m, erasure)
    order = sorted(range(n), key=lambda z: (params[z], -z))
    info = InfoSet.from_z(m, order[:k])
    if not is_decreasing(info):
        raise NotDecreasingError("BEC construction produced a non-decreasing set")
    return info


def load_code_spec(spec: Mapping | str) -> InfoSet:
    """Resolve a code description ``{"m": ..., one of i_min_z / info_z / bec}``."""
    if isinstance(spec, str):
        spec = json.loads(spec)
    m = int(spec["m"])
    keys = [k for k in ("i_min_z", "info_z", "bec") if k in spec]
    if len(keys) != 1:
        raise ValueError("code spec needs exactly one of i_min_z, info_z, bec")
    key = keys[0]
    if key == "i_min_z":
        return closure_from_z(m, spec["i_min_z"])
    if key == "info_z":
        return InfoSet.from_z(m, spec["info_z"])
    bec = spec["bec"]
    return bec_construct(m, int(bec["K"]), bec["erasure"])


def describe_code(info: InfoSet) -> dict:
    return {
        "m": info.m,
        "n": info.n,
        "K": info.k,
        "decreasing": is_decreasing(info),
        "info_z": info.z_labels(),
        "info_a": sorted(info.members),
    }
