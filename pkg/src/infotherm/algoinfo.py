"""Upper bounds on the algorithmic information of bit strings.

Prefix complexity is uncomputable, so everything here is the length of a
concrete self-delimiting code:

    header(n) + log2(3) + min(kt(x), tail(x), n)

``header(n) = 2 ceil(log2(n + 1))`` is the Elias-gamma code of n plus one
spare bit, ``log2(3)`` selects one of three body modes, ``kt`` is the
sequential Krichevsky-Trofimov code length under an order-k context model,
the second mode is a mixture over cut points m (uniform over the n + 1
choices, n being known from the header) of "KT-code x[:m], then zeros":

    tail(x) = -log2( sum_{m >= last one} 2^-kt(x[:m]) / (n + 1) )

and the third mode stores the bits literally.
Each mode satisfies Kraft on its own, so the minimum does too.
"""
from __future__ import annotations

import lzma
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInput

MODE_BITS = math.log2(3)
DEFAULT_EPS_SLOPE = 0.01


@dataclass(frozen=True)
class CompressorSpec:
    kind: str = "kt"
    context_order: int = 2
    tail_code: bool = True

    def __post_init__(self):
        if self.kind not in ("kt", "external"):
            raise InvalidInput(f"unknown compressor kind {self.kind!r}")
        if not 0 <= self.context_order <= 8:
            raise InvalidInput("context_order must be in 0..8")


@dataclass(frozen=True)
class EntropyLedger:
    H_prob: float
    I_alg_estimate: float
    bennett: float


def header_bits(n: int) -> int:
    return 2 * math.ceil(math.log2(n + 1))


def elias_gamma_bits(m: int) -> int:
    if m < 1:
        raise ValueError("Elias gamma codes positive integers only")
    return 2 * (m.bit_length() - 1) + 1


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8).ravel()
    if arr.size and arr.max() > 1:
        raise InvalidInput("bit sequence contains values other than 0 and 1")
    return arr


class StreamingEstimator:
    """Incremental version of :func:`estimate_I` for growing prefixes.

    Single-owner; feed bits with :meth:`push` and read :attr:`estimate`.
    """

    def __init__(self, spec: CompressorSpec = CompressorSpec()):
        if spec.kind != "kt":
            raise InvalidInput("streaming is only available for the KT model")
        self.spec = spec
        self._mask = (1 << spec.context_order) - 1
        self._counts = [[0, 0] for _ in range(1 << spec.context_order)]
        self._ctx = 0
        self.n = 0
        self.kt_bits = 0.0
        self._kt_at_last_one = 0.0
        # sum of 2^-(kt(x[:m]) - kt at last one) over admissible cut points m
        self._cut_mass = 1.0

    def push(self, bit: int) -> float:
        c = self._counts[self._ctx]
        cost = -math.log2((c[bit] + 0.5) / (c[0] + c[1] + 1.0))
        c[bit] += 1
        self.kt_bits += cost
        self.n += 1
        if self._mask:
            self._ctx = ((self._ctx << 1) | bit) & self._mask
        if bit:
            self._kt_at_last_one = self.kt_bits
            self._cut_mass = 1.0
        else:
            self._cut_mass += 2.0 ** (self._kt_at_last_one - self.kt_bits)
        return cost

    def extend(self, bits: Iterable[int]) -> None:
        for b in bits:
            self.push(int(b))

    @property
    def body_bits(self) -> float:
        best = min(self.kt_bits, float(self.n))
        if self.spec.tail_code:
            tail = self._kt_at_last_one - math.log2(self._cut_mass) + math.log2(self.n + 1)
            best = min(best, tail)
        return best

    @property
    def estimate(self) -> float:
        if self.n == 0:
            raise InvalidInput("no bits pushed yet")
        return header_bits(self.n) + MODE_BITS + self.body_bits


def kt_code_length(bits, context_order: int = 2) -> float:
    """Plain sequential KT code length in bits (no header, no modes)."""
    est = StreamingEstimator(CompressorSpec(context_order=context_order, tail_code=False))
    est.extend(_as_bits(bits).tolist())
    return est.kt_bits


def estimate_I(bits, spec: CompressorSpec = CompressorSpec()) -> float:
    """Self-delimiting code length of ``bits``, an upper bound on I(bits)."""
    arr = _as_bits(bits)
    if arr.size == 0:
        raise InvalidInput("cannot estimate an empty sequence")
    if spec.kind == "external":
        packed = np.packbits(arr).tobytes()
        body = 8 * len(lzma.compress(packed, format=lzma.FORMAT_RAW,
                                     filters=[{"id": lzma.FILTER_LZMA2, "preset": 9}]))
        return header_bits(arr.size) + MODE_BITS + min(float(body), float(arr.size))
    est = StreamingEstimator(spec)
    est.extend(arr.tolist())
    return est.estimate


def prefix_estimates(bits, checkpoints: Sequence[int],
                     spec: CompressorSpec = CompressorSpec()) -> np.ndarray:
    """``estimate_I(bits[:c])`` for each checkpoint c, in one pass."""
    arr = _as_bits(bits).tolist()
    cps = list(checkpoints)
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise InvalidInput("checkpoints must be strictly increasing")
    if cps and (cps[0] < 1 or cps[-1] > len(arr)):
        raise InvalidInput("checkpoint outside the sequence")
    est = StreamingEstimator(spec)
    out = np.empty(len(cps))
    pos = 0
    for i, c in enumerate(cps):
        est.extend(arr[pos:c])
        pos = c
        out[i] = est.estimate
    return out


def borel_deviation(bits, block_size: int = 1) -> float:
    """max over k-blocks b of |freq(b) - 2^-k|, overlapping block counts."""
    if block_size not in (1, 2, 3):
        raise InvalidInput("block_size must be 1, 2 or 3")
    arr = _as_bits(bits).astype(np.int64)
    if arr.size < 16 * block_size:
        raise InvalidInput(f"need at least {16 * block_size} bits")
    windows = arr.size - block_size + 1
    code = np.zeros(windows, dtype=np.int64)
    for j in range(block_size):
        code = (code << 1) | arr[j:j + windows]
    freq = np.bincount(code, minlength=1 << block_size) / windows
    return float(np.max(np.abs(freq - 2.0 ** -block_size)))


def windowed_one_frequency(bits, window: int = 256) -> np.ndarray:
    arr = _as_bits(bits)
    full = arr.size // window
    return arr[: full * window].reshape(full, window).mean(axis=1)


def bennett_entropy(H_prob: float, I_alg: float) -> EntropyLedger:
    if H_prob < 0 or I_alg < 0:
        raise InvalidInput("entropies must be nonnegative")
    return EntropyLedger(H_prob, I_alg, H_prob + I_alg)


def description_bits(params: Sequence[float], precision_bits: int = 32) -> int:
    """Code length of a distribution given by a parameter list.

    Used as I(P) for analytically specified laws: an Elias-gamma count
    followed by each parameter at fixed precision.
    """
    return elias_gamma_bits(len(params) + 1) + precision_bits * len(params)


def plateau_detect(series: Sequence[tuple[float, float]],
                   eps_slope: float = DEFAULT_EPS_SLOPE):
    """First step from which the least-squares slope of the rest is < eps.

    Returns None when no such step exists.  The final point on its own has
    no slope and is never reported.
    """
    if len(series) < 16:
        raise InvalidInput("plateau detection needs at least 16 points")
    pts = np.asarray(series, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    if np.any(np.diff(x) <= 0):
        raise InvalidInput("steps must be strictly increasing")
    # shift for conditioning; slopes are translation invariant
    x = x - x[0]
    y = y - y[0]
    # suffix sums give every tail regression in O(n)
    rev = lambda a: np.cumsum(a[::-1])[::-1]
    cnt = rev(np.ones_like(x))
    sx, sy, sxx, sxy = rev(x), rev(y), rev(x * x), rev(x * y)
    for i in range(len(x) - 1):
        var = sxx[i] - sx[i] ** 2 / cnt[i]
        slope = (sxy[i] - sx[i] * sy[i] / cnt[i]) / var
        if slope < eps_slope:
            return series[i][0]
    return None
