"""AWGN/BPSK channel, automorphism-ensemble SC decoding and BLER estimation."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import binomtest

from .automorphism import AffineAutomorphism, is_automorphism
from .gf2 import AffineMap, format_factored
from .invariance import (
    NotAnAutomorphismError,
    count_classes,
    sample_automorphisms,
    sample_ensemble,
    sample_invariant,
)
from .monomial import InfoSet, PolarCode, encode, load_code_spec
from .sc import sc_decode_batch

MODES = ("distinct_classes", "invariant_only", "stage_permutations_off")
DECODERS = ("minsum", "exact")
THREADS_ENV = "POLAR_AUTOMORPH_THREADS"


def noise_variance(ebn0_db: float, rate: float) -> float:
    if not 0 < rate <= 1:
        raise ValueError("rate must lie in (0, 1]")
    return 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))


def awgn_llr(codeword, ebn0_db: float, rate: float, rng: np.random.Generator) -> np.ndarray:
    """BPSK (0 -> +1, 1 -> -1) over AWGN, returned as channel LLRs 2 r / sigma^2."""
    c = np.asarray(codeword)
    sigma2 = noise_variance(ebn0_db, rate)
    received = 1.0 - 2.0 * c + np.sqrt(sigma2) * rng.standard_normal(c.shape)
    return 2.0 * received / sigma2


def _as_autos(perms) -> list[AffineAutomorphism]:
    return [p if isinstance(p, AffineAutomorphism) else AffineAutomorphism.from_map(p) for p in perms]


@dataclass
class AeOutput:
    codeword: np.ndarray      # (B, n)
    choice: np.ndarray        # (B,) index of the selected branch
    candidates: np.ndarray    # (t, B, n)
    metrics: np.ndarray       # (t, B)


def ae_decode_batch(code: PolarCode, perms: Sequence, llrs, *, minsum: bool = True,
                    check: bool = True) -> AeOutput:
    """Decode each permuted copy with SC, undo the permutation, keep the best fit."""
    autos = _as_autos(perms)
    if not autos:
        raise ValueError("empty ensemble")
    if check:
        for a in autos:
            if not is_automorphism(a.map.matrix, code.info):
                raise NotAnAutomorphismError("ensemble entry is not a code automorphism")
    Y = np.atleast_2d(np.asarray(llrs, dtype=float))
    mask = code.mask()
    cands = np.empty((len(autos),) + Y.shape, dtype=np.uint8)
    for j, a in enumerate(autos):
        fwd = a.perm.array()
        x = sc_decode_batch(mask, Y[:, fwd], minsum=minsum).codeword
        out = np.empty_like(x)
        out[:, fwd] = x
        cands[j] = out
    metrics = ((1.0 - 2.0 * cands) * Y[None]).sum(axis=2)
    choice = np.argmax(metrics, axis=0)
    chosen = cands[choice, np.arange(Y.shape[0])]
    return AeOutput(chosen, choice, cands, metrics)


def ae_decode(code: PolarCode, perms: Sequence, y, *, minsum: bool = True) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size != code.n:
        raise ValueError(f"expected an LLR vector of length {code.n}")
    return ae_decode_batch(code, perms, y[None], minsum=minsum).codeword[0]


@dataclass
class SimConfig:
    code: dict
    t: int = 1
    mode: str = "distinct_classes"
    ebn0_db: list[float] = field(default_factory=lambda: [2.0])
    max_frames: int = 10_000
    max_errors: int = 100
    seed: int = 0
    decoder: str = "minsum"
    chunk: int = 500

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("ensemble size t must be at least 1")
        if self.max_frames < 1:
            raise ValueError("max_frames must be at least 1")
        if self.max_errors < 1:
            raise ValueError("max_errors must be at least 1")
        if not self.ebn0_db:
            raise ValueError("empty SNR grid")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.decoder not in DECODERS:
            raise ValueError(f"decoder must be one of {DECODERS}")
        self.ebn0_db = [float(v) for v in self.ebn0_db]

    @classmethod
    def from_json(cls, text: str) -> "SimConfig":
        raw = json.loads(text)
        return cls(**raw)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


@dataclass
class SnrRecord:
    ebn0_db: float
    frames: int
    errors: int
    bler: float
    ci_lo: float
    ci_hi: float
    seconds: float


@dataclass
class SimReport:
    mode: str
    t: int
    decoder: str
    n: int
    k: int
    aut_structure: list[int]
    inv_structure: list[int]
    class_count: str
    records: list[SnrRecord]

    def to_json(self) -> str:
        return json.dumps({"schema": 1, **asdict(self)}, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["ebn0_db", "frames", "errors", "bler", "ci_lo", "ci_hi", "mode", "t"])
        for r in self.records:
            w.writerow([r.ebn0_db, r.frames, r.errors, r.bler, r.ci_lo, r.ci_hi, self.mode, self.t])
        return buf.getvalue()


def clopper_pearson(errors: int, frames: int) -> tuple[float, float]:
    ci = binomtest(errors, frames).proportion_ci(confidence_level=0.95, method="exact")
    return float(ci.low), float(ci.high)


def frame_rng(seed: int, snr_index: int, frame: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, snr_index, frame]))


def build_ensemble(info: InfoSet, t: int, mode: str, seed: int) -> list[AffineMap]:
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0xE5]))
    if t == 1:
        return [AffineMap.identity(info.m)]
    if mode == "distinct_classes":
        return sample_ensemble(info, t, rng)
    if mode == "invariant_only":
        return sample_invariant(info, t, rng)
    return sample_automorphisms(info, t, rng)


def _worker_count() -> int:
    cap = os.environ.get(THREADS_ENV)
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def _chunk_errors(code, autos, cfg, snr_index, ebn0, start, stop) -> np.ndarray:
    rows_c, rows_y = [], []
    for frame in range(start, stop):
        rng = frame_rng(cfg.seed, snr_index, frame)
        msg = rng.integers(0, 2, code.k, dtype=np.uint8)
        c = encode(code, msg)
        rows_c.append(c)
        rows_y.append(awgn_llr(c, ebn0, code.rate, rng))
    C = np.asarray(rows_c)
    out = ae_decode_batch(code, autos, np.asarray(rows_y), minsum=cfg.decoder == "minsum", check=False)
    return (out.codeword != C).any(axis=1)


def run_bler(cfg: SimConfig, *, workers: int | None = None) -> SimReport:
    info = load_code_spec(cfg.code)
    code = PolarCode(info)
    summary = count_classes(info)
    autos = _as_autos(build_ensemble(info, cfg.t, cfg.mode, cfg.seed))
    if workers is None:
        workers = _worker_count()
    records = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for si, ebn0 in enumerate(cfg.ebn0_db):
            t0 = time.perf_counter()
            frames = errors = 0
            start = 0
            while start < cfg.max_frames and errors < cfg.max_errors:
                # a wave of chunks, then trim at the exact frame where max_errors is hit
                bounds = []
                for _ in range(workers):
                    if start >= cfg.max_frames:
                        break
                    stop = min(start + cfg.chunk, cfg.max_frames)
                    bounds.append((start, stop))
                    start = stop
                flags = np.concatenate(list(pool.map(
                    lambda b: _chunk_errors(code, autos, cfg, si, ebn0, *b), bounds)))
                cum = errors + np.cumsum(flags)
                hit = np.flatnonzero(cum >= cfg.max_errors)
                if hit.size:
                    used = int(hit[0]) + 1
                    frames += used
                    errors = int(cum[hit[0]])
                    break
                frames += len(flags)
                errors = int(cum[-1]) if len(cum) else errors
            lo, hi = clopper_pearson(errors, frames)
            records.append(SnrRecord(ebn0, frames, errors, errors / frames, lo, hi,
                                     time.perf_counter() - t0))
    return SimReport(cfg.mode, cfg.t, cfg.decoder, code.n, code.k,
                     list(summary.aut_structure.sizes), list(summary.inv_structure.sizes),
                     format_factored(summary.class_count), records)
