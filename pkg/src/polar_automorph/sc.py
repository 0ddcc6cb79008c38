"""Successive cancellation (SC) decoding over the polar factor graph.

The decoder follows the factor graph of ``G_m``: the first half of the
u-vector is decoded from ``f(y_upper, y_lower)``, the second half from
``g(u, y_upper, y_lower)``, and the two halves re-combine as ``(x1 ^ x2, x2)``.
Extended-real LLRs are supported; ``f(+inf, x) = x`` holds exactly.

Two check-node rules are available.  ``minsum`` (the default) takes
``sign(a) sign(b) min(|a|, |b|)``; with it SC is maximum-likelihood on Rate-0,
Rate-1, repetition and single-parity-check nodes, which is what makes
SC-invariance a property of the block structure alone.  The exact boxplus
rule ``f_llr`` is available via ``minsum=False``; under it SC is not ML on SPC
nodes of length >= 4 and some structurally invariant automorphisms stop
commuting with the decoder.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .monomial import InfoSet, PolarCode


class OpposingInfinitiesError(ArithmeticError):
    """g was asked to add +inf and -inf."""


def f_llr(a, b):
    """Exact boxplus of two LLRs (scalar or array)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    abs_a, abs_b = np.abs(a), np.abs(b)
    with np.errstate(invalid="ignore", over="ignore"):
        mag = (np.minimum(abs_a, abs_b)
               + np.log1p(np.exp(-(abs_a + abs_b)))
               - np.log1p(np.exp(-np.abs(abs_a - abs_b))))
        mag = np.where(np.isinf(abs_a) & np.isinf(abs_b), np.inf, mag)
        out = np.sign(a) * np.sign(b) * mag
    return out if out.ndim else float(out)


def f_minsum(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.minimum(np.abs(a), np.abs(b))
    out *= np.sign(a)
    out *= np.sign(b)
    return out if out.ndim else float(out)


def g_llr(u, a, b):
    """(-1)^u a + b; raises on +inf + -inf."""
    u = np.asarray(u)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(invalid="ignore"):
        out = np.where(u & 1, b - a, b + a)
    if np.isnan(out).any():
        raise OpposingInfinitiesError("g_llr: opposing infinite LLRs")
    return out if out.ndim else float(out)


@dataclass
class DecodeResult:
    codeword: np.ndarray
    message: np.ndarray
    leaf_llrs: np.ndarray | None = None

    def info_bits(self, code: PolarCode) -> np.ndarray:
        return self.message[..., code.mask()]


def _sc(llr, mask, boxplus, leaves):
    """Decode LLRs laid out position-major, shape (n, batch), for mask (n,).

    Position-major keeps both halves contiguous, which matters for the large
    probe batches the commuting oracle pushes through.
    """
    n, batch = llr.shape
    if not mask.any():
        zeros = np.zeros((n, batch), dtype=np.uint8)
        if leaves is not None:
            leaves.append(np.full((n, batch), np.nan))
        return zeros, zeros
    if n == 1:
        if leaves is not None:
            leaves.append(llr.copy())
        bit = (llr < 0).astype(np.uint8)
        return bit, bit
    h = n // 2
    top, bot = llr[:h], llr[h:]
    x1, u1 = _sc(boxplus(top, bot), mask[:h], boxplus, leaves)
    x2, u2 = _sc(g_llr(x1, top, bot), mask[h:], boxplus, leaves)
    return np.concatenate([x1 ^ x2, x2]), np.concatenate([u1, u2])


def sc_decode_batch(mask: np.ndarray, llrs: np.ndarray, *, minsum: bool = True,
                    keep_leaves: bool = False) -> DecodeResult:
    """Decode a batch of LLR rows against a boolean information mask (z-order)."""
    mask = np.asarray(mask, dtype=bool)
    llrs = np.atleast_2d(np.asarray(llrs, dtype=float))
    if llrs.shape[1] != mask.size:
        raise ValueError(f"LLR length {llrs.shape[1]} != n = {mask.size}")
    if np.isnan(llrs).any():
        raise ValueError("NaN in LLR input")
    leaves = [] if keep_leaves else None
    x, u = _sc(np.ascontiguousarray(llrs.T), mask, f_minsum if minsum else f_llr, leaves)
    leaf = np.concatenate(leaves).T if keep_leaves else None
    return DecodeResult(x.T, u.T, leaf)


def sc_decode(code: PolarCode | InfoSet, y, *, minsum: bool = True,
              keep_leaves: bool = False) -> DecodeResult:
    info = code.info if isinstance(code, PolarCode) else code
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size != info.n:
        raise ValueError(f"expected an LLR vector of length {info.n}")
    res = sc_decode_batch(info.mask(), y[None, :], minsum=minsum, keep_leaves=keep_leaves)
    leaf = res.leaf_llrs[0] if keep_leaves else None
    return DecodeResult(res.codeword[0], res.message[0], leaf)


class NodeClass(enum.Enum):
    RATE0 = "Rate0"
    RATE1 = "Rate1"
    REP = "Rep"
    SPC = "SPC"
    OTHER = "Other"


def classify_node(info: InfoSet) -> NodeClass:
    n = info.n
    if info.k == 0:
        return NodeClass.RATE0
    if info.k == n:
        return NodeClass.RATE1
    if info.members == {0}:
        return NodeClass.REP
    if info.frozen() == {n - 1}:
        return NodeClass.SPC
    return NodeClass.OTHER
