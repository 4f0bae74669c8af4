"""Two-stage receiver and Monte-Carlo sweep engine.

One frame is M channel symbols; each symbol carries one bit of the first
codeword (BPSK polarity) and one bit of the second (quarter-turn rotation).
The receiver stores the whole frame because every symbol is used twice:

1. axis-bit soft information -> decode the second stream;
2. re-encode the decoded info word to rebuild the rotation pattern
   (realistic mode) or take the true pattern (genie mode);
3. derotate the stored symbols, demap polarity -> decode the first stream.

Genie mode models the idealised error-free rotation estimate.  Because the
quarter-turn derotation is implemented exactly, a genie-aided frame yields
polarity LLRs that are bit-identical to a plain BPSK link observing the
same (isometrically re-expressed) noise, which is what
:func:`paired_genie_vs_bpsk` exercises.

Frames are keyed by index: data bits come from stream 1 and channel noise
from stream 0 of a counter-based generator, so results do not depend on
batch size, worker count, or execution order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import linear_code, modem
from .channel import (
    GAUSSIAN_METHOD,
    ChannelConfig,
    block_rng,
    ebn0_to_esn0,
    esn0_to_ebn0,
    noise_block,
    snr_to_sigma2,
)

DATA_STREAM = 1  # channel noise occupies stream 0 of each frame's generator

SCHEMES = ("dmm_realistic", "dmm_genie", "bpsk_baseline", "uncoded")

_BATCH_FRAMES = 64  # internal work unit; results are batch-size invariant


@dataclass(frozen=True)
class FrameContext:
    """Everything the receiver needs for one stored frame, plus the truth
    needed to score it."""

    y: np.ndarray
    code1: linear_code.BinaryCode
    code2: object
    es: float
    sigma2: float
    c1: np.ndarray
    c2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        if self.y.shape != self.v1.shape or self.y.shape != self.v2.shape:
            raise ValueError("stored symbols and code bits must share length")
        if self.code1.n != self.y.size or self.code2.n != self.y.size:
            raise ValueError(
                f"both codewords must match the frame length {self.y.size}; "
                f"got {self.code1.n} and {self.code2.n}"
            )


@dataclass(frozen=True)
class FrameResult:
    c1_hat: np.ndarray
    c2_hat: np.ndarray
    bit_errors_1: int
    bit_errors_2: int
    beta_hat_errors: int
    status1: linear_code.DecodeStatus
    status2: linear_code.DecodeStatus


def frame_data(code1, code2, seed: int, frame_index: int):
    """The two info words of a frame, deterministic in (seed, frame_index)."""
    rng = block_rng(seed, frame_index, stream=DATA_STREAM)
    c1 = rng.integers(0, 2, size=code1.k, dtype=np.uint8)
    c2 = rng.integers(0, 2, size=code2.k, dtype=np.uint8)
    return c1, c2


def make_frame(code1, code2, cfg: ChannelConfig, frame_index: int) -> FrameContext:
    """Encode, map, rotate and transmit one frame."""
    c1, c2 = frame_data(code1, code2, cfg.seed, frame_index)
    v1 = linear_code.encode(code1, c1)
    v2 = linear_code.encode(code2, c2)
    beta = modem.beta_from_bits(v2)
    s = modem.rotate(modem.map_bpsk(v1, cfg.es), beta)
    y = s + noise_block(cfg, frame_index, s.size)
    return FrameContext(y=y, code1=code1, code2=code2, es=cfg.es, sigma2=cfg.sigma2,
                        c1=c1, c2=c2, v1=v1, v2=v2, beta=beta)


def _decode(code, llr, max_iter):
    if isinstance(code, linear_code.RepetitionExtendedCode):
        return linear_code.decode_repetition(code, llr, max_iter=max_iter)
    return linear_code.decode_bp(code, llr, max_iter=max_iter)


def reencode_rotation(code2, c2_hat: np.ndarray) -> np.ndarray:
    """Rebuild the rotation pattern the transmitter would have used."""
    return modem.beta_from_bits(linear_code.encode(code2, c2_hat))


def stage1_llrs(y, beta_hat, es: float, sigma2: float) -> np.ndarray:
    """Derotate stored symbols with the estimated pattern and demap polarity."""
    return modem.derotate_and_llr_v1(y, beta_hat, es, sigma2)


def receive_frame(ctx: FrameContext, mode: str = "realistic",
                  max_iter: int = 50) -> FrameResult:
    """Run the two-stage procedure on one stored frame.

    mode "realistic" rebuilds the rotation pattern from the decoded second
    stream; mode "genie" uses the true pattern.  Decoder failures are
    reported in the statuses, never raised.
    """
    if mode not in ("realistic", "genie"):
        raise ValueError(f"mode must be 'realistic' or 'genie', got {mode!r}")
    constellation = modem.Constellation.quadrature_pair(ctx.es)
    llr2 = modem.llr_v2(ctx.y, constellation, ctx.sigma2)
    c2_hat, status2 = _decode(ctx.code2, llr2, max_iter)

    if mode == "genie":
        beta_hat = ctx.beta
    else:
        beta_hat = reencode_rotation(ctx.code2, c2_hat)

    llr1 = stage1_llrs(ctx.y, beta_hat, ctx.es, ctx.sigma2)
    c1_hat, status1 = linear_code.decode_bp(ctx.code1, llr1, max_iter=max_iter)

    return FrameResult(
        c1_hat=c1_hat,
        c2_hat=c2_hat,
        bit_errors_1=int(np.count_nonzero(c1_hat != ctx.c1)),
        bit_errors_2=int(np.count_nonzero(c2_hat != ctx.c2)),
        beta_hat_errors=int(np.count_nonzero(beta_hat != ctx.beta)),
        status1=status1,
        status2=status2,
    )


# ---------------------------------------------------------------------------
# Point-level Monte-Carlo
# ---------------------------------------------------------------------------

def wilson_interval(k: int, n: int, z: float = 1.96):
    """Wilson score interval for a binomial proportion."""
    if n == 0:
        return (math.nan, math.nan)
    center = (k + z * z / 2.0) / (n + z * z)
    half = z * math.sqrt(k * (n - k) / n + z * z / 4.0) / (n + z * z)
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class SimResult:
    """One SNR point of a sweep with full provenance."""

    scheme: str
    code1_name: str
    code2_name: str
    rate1: float
    rate2: float
    rate_overall: float
    snr_db: float
    snr_convention: str
    es_n0_db: float
    eb_n0_stream1_db: float
    eb_n0_overall_db: float
    es: float
    sigma2: float
    seed: int
    max_iter: int
    frames: int
    frame_errors: int
    bits1: int
    errors1: int
    bits2: int
    errors2: int
    beta_symbols: int
    beta_errors: int
    stop_reason: str
    wall_time_s: float
    gaussian_method: str = GAUSSIAN_METHOD

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames if self.frames else math.nan

    @property
    def ber1(self) -> float:
        return self.errors1 / self.bits1 if self.bits1 else math.nan

    @property
    def ber2(self) -> float:
        return self.errors2 / self.bits2 if self.bits2 else math.nan

    @property
    def ber_overall(self) -> float:
        total = self.bits1 + self.bits2
        return (self.errors1 + self.errors2) / total if total else math.nan

    @property
    def ber1_ci(self):
        return wilson_interval(self.errors1, self.bits1)

    @property
    def ber2_ci(self):
        return wilson_interval(self.errors2, self.bits2) if self.bits2 else (math.nan, math.nan)

    @property
    def ber_overall_ci(self):
        return wilson_interval(self.errors1 + self.errors2, self.bits1 + self.bits2)

    @property
    def fer_ci(self):
        return wilson_interval(self.frame_errors, self.frames)


def _resolve_point(snr_db, convention, es, rate1, rate_overall):
    """Interpret a grid value under the declared convention.

    Returns (es_n0_db in the complex reading, sigma2).  The per-dim reading
    changes sigma2 only; Eb/N0 readings are rate-shifted complex Es/N0.
    """
    if convention == "es_n0_complex":
        return snr_db, snr_to_sigma2(snr_db, es, "es_n0_complex")
    if convention == "es_n0_per_dim":
        sigma2 = snr_to_sigma2(snr_db, es, "es_n0_per_dim")
        return snr_db, sigma2
    if convention == "eb_n0_stream1":
        es_n0 = ebn0_to_esn0(snr_db, rate1)
        return es_n0, snr_to_sigma2(es_n0, es, "es_n0_complex")
    if convention == "eb_n0_overall":
        es_n0 = ebn0_to_esn0(snr_db, rate_overall)
        return es_n0, snr_to_sigma2(es_n0, es, "es_n0_complex")
    raise ValueError(f"unknown SNR convention {convention!r}")


def _batch_indices(start: int, count: int):
    return np.arange(start, start + count, dtype=np.int64)


def _accumulate(stop_min_fe, stop_max_frames, frames_done, fe_done, frame_err_flags):
    """How many frames of this batch count, and why we stop (or None)."""
    take = len(frame_err_flags)
    reason = None
    cum = fe_done + np.cumsum(frame_err_flags)
    hit = np.nonzero(cum >= stop_min_fe)[0]
    if hit.size:
        take = min(take, int(hit[0]) + 1)
        reason = "min_frame_errors"
    if frames_done + take >= stop_max_frames:
        take = stop_max_frames - frames_done
        reason = "max_frames"
    return take, reason


def run_point(scheme: str, code1=None, code2=None, *, snr_db: float,
              snr_convention: str = "es_n0_complex", es: float = 1.0,
              seed: int = 0, min_frame_errors: int = 100,
              max_frames: int = 1_000_000, max_iter: int = 50,
              uncoded_block_bits: int = 4096) -> SimResult:
    """Monte-Carlo one SNR point until ``min_frame_errors`` frames are in
    error or ``max_frames`` frames have been simulated, whichever is first.

    The result is fully determined by the arguments; batch size and worker
    scheduling cannot change it.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; pick one of {SCHEMES}")
    if scheme in ("dmm_realistic", "dmm_genie"):
        if code1 is None or code2 is None:
            raise ValueError(f"{scheme} needs code1 and code2")
        if code1.n != code2.n:
            raise ValueError(
                f"codeword lengths must match (one symbol carries one bit of each): "
                f"{code1.n} != {code2.n}"
            )
        rate1, rate2 = code1.rate, code2.rate
    elif scheme == "bpsk_baseline":
        if code1 is None:
            raise ValueError("bpsk_baseline needs code1")
        rate1, rate2 = code1.rate, 0.0
    else:
        rate1, rate2 = 1.0, 0.0
    rate_overall = rate1 + rate2

    es_n0_db, sigma2 = _resolve_point(snr_db, snr_convention, es, rate1, rate_overall)
    cfg = ChannelConfig(sigma2=sigma2, seed=seed, es=es)

    t0 = time.perf_counter()
    frames = fe = errors1 = errors2 = beta_errors = 0
    stop_reason = "max_frames"

    while frames < max_frames:
        want = min(_BATCH_FRAMES, max_frames - frames)
        idx = _batch_indices(frames, want)
        if scheme == "uncoded":
            e1, bflags = _uncoded_batch(cfg, idx, uncoded_block_bits)
            e2 = berr = np.zeros(want, dtype=np.int64)
        elif scheme == "bpsk_baseline":
            e1, bflags = _bpsk_batch(code1, cfg, idx, max_iter)
            e2 = berr = np.zeros(want, dtype=np.int64)
        else:
            e1, e2, berr = _dmm_batch(code1, code2, cfg, idx, max_iter,
                                      genie=(scheme == "dmm_genie"))
            bflags = (e1 + e2) > 0
        take, reason = _accumulate(min_frame_errors, max_frames, frames, fe, bflags)
        frames += take
        fe += int(np.sum(bflags[:take]))
        errors1 += int(np.sum(e1[:take]))
        errors2 += int(np.sum(e2[:take]))
        beta_errors += int(np.sum(berr[:take]))
        if reason is not None:
            stop_reason = reason
            break

    k1 = uncoded_block_bits if scheme == "uncoded" else code1.k
    k2 = code2.k if scheme in ("dmm_realistic", "dmm_genie") else 0
    n_sym = uncoded_block_bits if scheme == "uncoded" else code1.n
    return SimResult(
        scheme=scheme,
        code1_name=(code1.name or "code1") if code1 is not None else "",
        code2_name=(code2.name or "code2") if k2 else "",
        rate1=rate1, rate2=rate2, rate_overall=rate_overall,
        snr_db=snr_db, snr_convention=snr_convention,
        es_n0_db=es_n0_db,
        eb_n0_stream1_db=esn0_to_ebn0(es_n0_db, rate1),
        eb_n0_overall_db=esn0_to_ebn0(es_n0_db, rate_overall),
        es=es, sigma2=sigma2, seed=seed, max_iter=max_iter,
        frames=frames, frame_errors=fe,
        bits1=frames * k1, errors1=errors1,
        bits2=frames * k2, errors2=errors2,
        beta_symbols=frames * n_sym if scheme in ("dmm_realistic", "dmm_genie") else 0,
        beta_errors=beta_errors,
        stop_reason=stop_reason,
        wall_time_s=time.perf_counter() - t0,
    )


def _uncoded_batch(cfg, indices, block_bits):
    errors = np.empty(indices.size, dtype=np.int64)
    for j, i in enumerate(indices):
        rng = block_rng(cfg.seed, int(i), stream=DATA_STREAM)
        bits = rng.integers(0, 2, size=block_bits, dtype=np.uint8)
        y = modem.map_bpsk(bits, cfg.es) + noise_block(cfg, int(i), block_bits)
        errors[j] = np.count_nonzero((y.real < 0).astype(np.uint8) != bits)
    return errors, errors > 0


def _bpsk_batch(code1, cfg, indices, max_iter):
    b = indices.size
    c1 = np.empty((b, code1.k), dtype=np.uint8)
    y = np.empty((b, code1.n), dtype=np.complex128)
    for j, i in enumerate(indices):
        rng = block_rng(cfg.seed, int(i), stream=DATA_STREAM)
        c1[j] = rng.integers(0, 2, size=code1.k, dtype=np.uint8)
        y[j] = noise_block(cfg, int(i), code1.n)
    v1 = linear_code.encode(code1, c1)
    y += modem.map_bpsk(v1, cfg.es)
    llr1 = 2.0 * math.sqrt(cfg.es) * y.real / cfg.sigma2
    c1_hat, _, _ = linear_code.decode_soft_batch(code1, llr1, max_iter=max_iter)
    errors = np.count_nonzero(c1_hat != c1, axis=1)
    return errors, errors > 0


def _dmm_batch(code1, code2, cfg, indices, max_iter, genie: bool):
    b = indices.size
    c1 = np.empty((b, code1.k), dtype=np.uint8)
    c2 = np.empty((b, code2.k), dtype=np.uint8)
    noise = np.empty((b, code1.n), dtype=np.complex128)
    for j, i in enumerate(indices):
        rng = block_rng(cfg.seed, int(i), stream=DATA_STREAM)
        c1[j] = rng.integers(0, 2, size=code1.k, dtype=np.uint8)
        c2[j] = rng.integers(0, 2, size=code2.k, dtype=np.uint8)
        noise[j] = noise_block(cfg, int(i), code1.n)
    v1 = linear_code.encode(code1, c1)
    v2 = linear_code.encode(code2, c2)
    beta = modem.beta_from_bits(v2)
    y = modem.rotate(modem.map_bpsk(v1, cfg.es), beta) + noise

    constellation = modem.Constellation.quadrature_pair(cfg.es)
    llr2 = modem.llr_v2(y, constellation, cfg.sigma2)
    c2_hat, _, _ = linear_code.decode_soft_batch(code2, llr2, max_iter=max_iter)

    if genie:
        beta_hat = beta
    else:
        beta_hat = modem.beta_from_bits(linear_code.encode(code2, c2_hat))
    llr1 = modem.derotate_and_llr_v1(y, beta_hat, cfg.es, cfg.sigma2)
    c1_hat, _, _ = linear_code.decode_soft_batch(code1, llr1, max_iter=max_iter)

    errors1 = np.count_nonzero(c1_hat != c1, axis=1)
    errors2 = np.count_nonzero(c2_hat != c2, axis=1)
    beta_errors = np.count_nonzero(beta_hat != beta, axis=1)
    return errors1, errors2, beta_errors


# ---------------------------------------------------------------------------
# Exact genie/BPSK pairing and curve utilities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairedRun:
    """Genie-aided stream-1 LLRs next to a plain BPSK link fed the same
    noise realization (re-expressed through the same derotation isometry)."""

    llr_genie: np.ndarray
    llr_bpsk: np.ndarray
    errors_genie: np.ndarray
    errors_bpsk: np.ndarray


def paired_genie_vs_bpsk(code1, code2, cfg: ChannelConfig, frames: int,
                         max_iter: int = 50) -> PairedRun:
    """Run ``frames`` frames through both links with shared noise.

    The genie receiver sees y = Rot(x1) + n and derotates exactly; the BPSK
    link sees x1 + Rot^{-1}(n), the same noise realization expressed in the
    derotated frame.  Rotation is an isometry, so the two LLR streams should
    agree bit for bit; any difference is an implementation defect.
    """
    lg = np.empty((frames, code1.n))
    lb = np.empty((frames, code1.n))
    eg = np.empty(frames, dtype=np.int64)
    eb = np.empty(frames, dtype=np.int64)
    for i in range(frames):
        c1, c2 = frame_data(code1, code2, cfg.seed, i)
        v1 = linear_code.encode(code1, c1)
        beta = modem.beta_from_bits(linear_code.encode(code2, c2))
        x1 = modem.map_bpsk(v1, cfg.es)
        n = noise_block(cfg, i, code1.n)

        y = modem.rotate(x1, beta) + n
        llr_genie = stage1_llrs(y, beta, cfg.es, cfg.sigma2)
        y_bpsk = x1 + modem.rotate(n, -beta)
        llr_bpsk = stage1_llrs(y_bpsk, 0.0, cfg.es, cfg.sigma2)

        lg[i] = llr_genie
        lb[i] = llr_bpsk
        g_hat, _ = linear_code.decode_bp(code1, llr_genie, max_iter=max_iter)
        b_hat, _ = linear_code.decode_bp(code1, llr_bpsk, max_iter=max_iter)
        eg[i] = np.count_nonzero(g_hat != c1)
        eb[i] = np.count_nonzero(b_hat != c1)
    return PairedRun(llr_genie=lg, llr_bpsk=lb, errors_genie=eg, errors_bpsk=eb)


def snr_at_ber(snr_db: np.ndarray, ber: np.ndarray, target: float):
    """SNR at which a monotone BER curve crosses ``target``.

    Linear interpolation of log10(BER) against dB.  Returns None when the
    curve does not bracket the target.
    """
    snr_db = np.asarray(snr_db, dtype=np.float64)
    ber = np.asarray(ber, dtype=np.float64)
    keep = ber > 0
    snr_db, ber = snr_db[keep], ber[keep]
    if snr_db.size < 2:
        return None
    order = np.argsort(snr_db)
    snr_db, ber = snr_db[order], np.log10(ber[order])
    t = math.log10(target)
    for a in range(snr_db.size - 1):
        lo, hi = sorted((ber[a], ber[a + 1]))
        if lo <= t <= hi and ber[a] != ber[a + 1]:
            frac = (t - ber[a]) / (ber[a + 1] - ber[a])
            return float(snr_db[a] + frac * (snr_db[a + 1] - snr_db[a]))
    return None
