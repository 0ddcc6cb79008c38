"""SC-invariant affine automorphisms.

``dec_aut`` decides, from a block structure alone, whether every automorphism
with that structure commutes with SC decoding of ``C(I)``; ``dec_group``
returns the block structure of the full SC-invariant affine subgroup.  The
commuting oracle is an independent empirical falsifier built on the decoder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .automorphism import apply_perm, automorphism_group, is_automorphism, perm_from_affine
from .gf2 import (
    AffineMap,
    BlockStructure,
    Gf2Matrix,
    block_structure,
    blta_order,
    factored_int,
    gro,
    is_member_blta,
    mat_inv,
    mat_mul,
    sample_blta,
)
from .monomial import InfoSet, NotDecreasingError, is_decreasing, subcode_info
from .sc import OpposingInfinitiesError, sc_decode_batch

DEFAULT_EPS = 1e-3
_FINITE_BIG = 1e12


class NotAnAutomorphismError(ValueError):
    pass


def _tail_mask(m: int, width: int) -> int:
    """Bits for coordinates m-width+1 .. m."""
    return ((1 << width) - 1) << (m - width)


def _frozen_in_ones(info: InfoSet, mask: int) -> bool:
    return all(a & mask == mask for a in range(info.n) if a not in info.members)


def _info_in_zeros(info: InfoSet, mask: int) -> bool:
    return all(a & mask == 0 for a in info.members)


def _tail_subcode(info: InfoSet, width: int, bit: int) -> InfoSet:
    m = info.m
    return subcode_info(info, {i: bit for i in range(m - width + 1, m + 1)})


@dataclass
class TraceStep:
    depth: int
    structure: tuple[int, ...]
    info_z: list[int]
    branch: str
    verdict: bool | None = None


@dataclass
class InvarianceVerdict:
    value: bool
    trace: list[TraceStep] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.value


def dec_aut(s: BlockStructure, info: InfoSet) -> InvarianceVerdict:
    """Decide whether automorphisms with structure ``s`` commute with SC on C(info)."""
    if s.m != info.m:
        raise ValueError(f"structure has m={s.m}, code has m={info.m}")
    trace: list[TraceStep] = []
    value = _dec_aut(tuple(s.sizes), info, 0, trace)
    return InvarianceVerdict(value, trace)


def _dec_aut(sizes: tuple[int, ...], info: InfoSet, depth: int, trace: list[TraceStep]) -> bool:
    last = sizes[-1]
    mask = _tail_mask(info.m, last)
    step = TraceStep(depth, sizes, info.z_labels(), "")
    trace.append(step)
    if len(sizes) == 1:
        step.branch = "base"
        value = _frozen_in_ones(info, mask) or _info_in_zeros(info, mask)
    elif last == 1:
        step.branch = "split"
        v1 = _dec_aut(sizes[:-1], _tail_subcode(info, 1, 1), depth + 1, trace)
        v2 = _dec_aut(sizes[:-1], _tail_subcode(info, 1, 0), depth + 1, trace)
        value = v1 and v2
    elif _frozen_in_ones(info, mask):
        step.branch = "frozen-first-block"
        value = _dec_aut(sizes[:-1], _tail_subcode(info, last, 1), depth + 1, trace)
    elif _info_in_zeros(info, mask):
        step.branch = "info-last-block"
        value = _dec_aut(sizes[:-1], _tail_subcode(info, last, 0), depth + 1, trace)
    else:
        step.branch = "reject"
        value = False
    step.verdict = value
    return value


def sc_invariant(M: Gf2Matrix, info: InfoSet) -> bool:
    if not is_automorphism(M, info):
        raise NotAnAutomorphismError("matrix is not an automorphism of the code")
    return dec_aut(block_structure(M), info).value


def dec_group(info: InfoSet) -> BlockStructure:
    """Block structure s with BLTA(s) equal to the SC-invariant affine group."""
    if not is_decreasing(info):
        raise NotDecreasingError("dec_group requires a decreasing set")
    if info.m == 0:
        raise ValueError("code of length 1 has no coordinates")
    return BlockStructure(_dec_group(info.m, info.members))


@lru_cache(maxsize=None)
def _dec_group(m: int, members: frozenset[int]) -> tuple[int, ...]:
    if m == 0:
        return ()
    info = InfoSet(m, members)
    for t in range(m, 1, -1):
        mask = _tail_mask(m, t)
        if _frozen_in_ones(info, mask):
            return _dec_group(m - t, _tail_subcode(info, t, 1).members) + (t,)
        if _info_in_zeros(info, mask):
            return _dec_group(m - t, _tail_subcode(info, t, 0).members) + (t,)
    upper = BlockStructure(_dec_group(m - 1, _tail_subcode(info, 1, 1).members) + (1,))
    lower = BlockStructure(_dec_group(m - 1, _tail_subcode(info, 1, 0).members) + (1,))
    return gro(upper, lower).sizes


# ---------------------------------------------------------------------------
# empirical commuting oracle


@lru_cache(maxsize=None)
def _embed_positions(m: int, k: int, c: int) -> np.ndarray:
    """Positions z of Ind_m(a_k = c), ordered by the subcode's own position index."""
    n = 1 << m
    low = (1 << (k - 1)) - 1
    out = np.empty(n // 2, dtype=np.intp)
    for z in range(n):
        a = n - 1 - z
        if (a >> (k - 1)) & 1 != c:
            continue
        sub_a = (a & low) | ((a >> k) << (k - 1))
        out[n // 2 - 1 - sub_a] = z
    return out


def structured_probes(m: int, rng: np.random.Generator, *, eps: float = DEFAULT_EPS,
                      leaf_count: int = 4, depth: int | None = None) -> np.ndarray:
    """Probe LLR vectors built by nesting sub-probes into half-size index blocks.

    A sub-probe of dimension m-1 is written onto Ind_m(a_k = 1) with +inf on
    the complement, or onto Ind_m(a_k = 0) with small positive values on the
    complement, for every coordinate k.  Leaves are Gaussian vectors.
    """
    if depth is None:
        depth = m
    n = 1 << m
    leaves = rng.standard_normal((leaf_count, n))
    if m == 0 or depth == 0:
        return leaves
    subs = structured_probes(m - 1, rng, eps=eps, leaf_count=leaf_count, depth=depth - 1)
    blocks = [leaves]
    for k in range(1, m + 1):
        for c in (1, 0):
            pos = _embed_positions(m, k, c)
            if c == 1:
                out = np.full((len(subs), n), np.inf)
            else:
                out = eps * rng.uniform(0.5, 1.5, size=(len(subs), n))
            out[:, pos] = subs
            blocks.append(out)
    return np.concatenate(blocks, axis=0)


@dataclass
class OracleResult:
    commutes: bool
    trials: int
    counterexample: np.ndarray | None = None
    index: int | None = None
    kind: str | None = None

    def __bool__(self) -> bool:
        return self.commutes


def _decode_rows(mask: np.ndarray, rows: np.ndarray, minsum: bool) -> np.ndarray:
    """SC codewords for each row; rows meeting +inf + -inf come back as 255."""
    try:
        return sc_decode_batch(mask, rows, minsum=minsum).codeword
    except OpposingInfinitiesError:
        if len(rows) == 1:
            return np.full(rows.shape, 255, dtype=np.uint8)  # resolved by the caller
    h = len(rows) // 2
    return np.concatenate([_decode_rows(mask, rows[:h], minsum), _decode_rows(mask, rows[h:], minsum)])


def _finite(y: np.ndarray) -> np.ndarray:
    return np.where(np.isposinf(y), _FINITE_BIG, np.where(np.isneginf(y), -_FINITE_BIG, y))


def _probe_matrix(info: InfoSet, trials: int, rng: np.random.Generator, structured: bool,
                  eps: float, leaf_count: int, probe_depth: int | None) -> np.ndarray:
    parts = [rng.standard_normal((trials, info.n))]
    if structured:
        if probe_depth is None:
            probe_depth = min(info.m, 4)
        parts.append(structured_probes(info.m, rng, eps=eps, leaf_count=leaf_count, depth=probe_depth))
    return np.concatenate(parts, axis=0)


def _verdicts(maps: Sequence[AffineMap], info: InfoSet, probes: list[np.ndarray], trials: int,
              minsum: bool) -> list[OracleResult]:
    """Oracle verdicts; ``probes[i]`` belongs to ``maps[i]`` and may be a shared array."""
    mask = info.mask()
    perms = [perm_from_affine(t) for t in maps]
    # decode each distinct probe array once without permutation
    uniq: dict[int, np.ndarray] = {}
    for y in probes:
        uniq.setdefault(id(y), y)
    ids = list(uniq)
    dec = _decode_rows(mask, np.concatenate([uniq[i] for i in ids]), minsum)
    direct_of, start = {}, 0
    for i in ids:
        direct_of[i] = dec[start:start + len(uniq[i])]
        start += len(uniq[i])
    permuted = _decode_rows(mask, np.concatenate([apply_perm(p, y) for p, y in zip(perms, probes)]),
                            minsum)
    results, start = [], 0
    for perm, y in zip(perms, probes):
        stop = start + len(y)
        d, q = direct_of[id(y)].copy(), permuted[start:stop]
        start = stop
        bad = np.flatnonzero((d == 255).any(axis=1) | (q == 255).any(axis=1))
        if bad.size:
            y = y.copy()
        for r in bad:
            # +inf/-inf met in g: fall back to a large finite surrogate for this probe
            y[r] = _finite(y[r])
            d[r] = sc_decode_batch(mask, y[r][None], minsum=minsum).codeword[0]
            q[r] = sc_decode_batch(mask, apply_perm(perm, y[r])[None], minsum=minsum).codeword[0]
        mismatch = np.flatnonzero((q != apply_perm(perm, d)).any(axis=1))
        if mismatch.size == 0:
            results.append(OracleResult(True, len(y)))
        else:
            idx = int(mismatch[0])
            kind = "random" if idx < trials else "structured"
            results.append(OracleResult(False, len(y), y[idx].copy(), idx, kind))
    return results


def commute_oracle(M: Gf2Matrix, b: int, info: InfoSet, trials: int, rng: np.random.Generator,
                   *, structured: bool = True, eps: float = DEFAULT_EPS,
                   leaf_count: int = 4, probe_depth: int | None = None,
                   minsum: bool = True) -> OracleResult:
    """Look for y with SC(pi(y)) != pi(SC(y)) for pi = (M, b).

    A pass is one-sided evidence only.  The first failing probe in generation
    order (random probes, then structured ones) is reported.
    """
    Y = _probe_matrix(info, trials, rng, structured, eps, leaf_count, probe_depth)
    return _verdicts([AffineMap(M, b)], info, [Y], trials, minsum)[0]


def commute_oracle_many(maps: Sequence[AffineMap], info: InfoSet, trials: int,
                        rng: np.random.Generator, *, structured: bool = True,
                        eps: float = DEFAULT_EPS, leaf_count: int = 4,
                        probe_depth: int | None = None, minsum: bool = True,
                        share_probes: bool = False) -> list[OracleResult]:
    """commute_oracle for several maps at once.

    All probes go through the decoder in one batch, which is much faster than
    one call per map for short codes.  With ``share_probes`` every map is
    tested on the same fresh probe set, so the unpermuted decode runs once.
    """
    if share_probes:
        Y = _probe_matrix(info, trials, rng, structured, eps, leaf_count, probe_depth)
        probes = [Y] * len(maps)
    else:
        probes = [_probe_matrix(info, trials, rng, structured, eps, leaf_count, probe_depth)
                  for _ in maps]
    return _verdicts(list(maps), info, probes, trials, minsum)


# ---------------------------------------------------------------------------
# equivalence classes


def equivalent(t1: AffineMap, t2: AffineMap, info: InfoSet, *, inv: BlockStructure | None = None,
               check: bool = True) -> bool:
    """pi_1 ~ pi_2 for C(info), decided by coset membership.

    Vectors are permuted as ``pi(v)[i] = v[p(i)]``, under which the operator of
    ``t1`` followed by that of ``t2`` is the operator of ``t2 o t1``.  Two maps
    are equivalent iff ``t1^{-1} o t2`` lies in the SC-invariant group, and only
    the linear part ``M1^{-1} M2`` matters.
    """
    if check and not (is_automorphism(t1.matrix, info) and is_automorphism(t2.matrix, info)):
        raise NotAnAutomorphismError("equivalence is defined between code automorphisms")
    if inv is None:
        inv = dec_group(info)
    return is_member_blta(mat_mul(mat_inv(t1.matrix), t2.matrix), inv)


@dataclass(frozen=True)
class EquivClassSummary:
    aut_structure: BlockStructure
    inv_structure: BlockStructure
    class_count: tuple[int, int]

    @property
    def classes(self) -> int:
        return factored_int(self.class_count)


def _divide(num: tuple[int, int], den: tuple[int, int]) -> tuple[int, int]:
    q, r = divmod(num[0], den[0])
    if r or num[1] < den[1]:
        raise ArithmeticError(f"group order {num} not divisible by {den}")
    return q, num[1] - den[1]


def count_classes(info: InfoSet, *, inv_structure: BlockStructure | None = None) -> EquivClassSummary:
    aut = automorphism_group(info)
    inv = dec_group(info) if inv_structure is None else inv_structure
    return EquivClassSummary(aut, inv, _divide(blta_order(aut), blta_order(inv)))


def sample_ensemble(info: InfoSet, t: int, rng: np.random.Generator, *,
                    max_attempts: int = 100_000) -> list[AffineMap]:
    """t pairwise non-equivalent automorphisms, the identity first."""
    summary = count_classes(info)
    if t > summary.classes:
        raise ValueError(f"requested {t} maps but only {summary.classes} classes exist")
    if t <= 0:
        return []
    chosen = [AffineMap.identity(info.m)]
    attempts = 0
    while len(chosen) < t:
        attempts += 1
        if attempts > max_attempts:
            raise RuntimeError("rejection sampling did not find enough distinct classes")
        cand = sample_blta(summary.aut_structure, rng)
        if not any(equivalent(c, cand, info, inv=summary.inv_structure, check=False) for c in chosen):
            chosen.append(cand)
    return chosen


def sample_invariant(info: InfoSet, t: int, rng: np.random.Generator) -> list[AffineMap]:
    """Identity plus t-1 random elements of the SC-invariant group."""
    inv = dec_group(info)
    return [AffineMap.identity(info.m)] + [sample_blta(inv, rng) for _ in range(t - 1)]


def sample_automorphisms(info: InfoSet, t: int, rng: np.random.Generator) -> list[AffineMap]:
    """Identity plus t-1 uniform automorphisms, with no class filtering."""
    aut = automorphism_group(info)
    return [AffineMap.identity(info.m)] + [sample_blta(aut, rng) for _ in range(t - 1)]
