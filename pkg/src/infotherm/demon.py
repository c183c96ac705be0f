"""Two-chamber Maxwell demon with a two-speed gas and a memory tape.

Molecules never change speed; the demon only decides, for the molecule at
the trapdoor, whether it passes (bit 1) or is reflected (bit 0).  Every
decision is written to the tape.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Optional

import numpy as np

from . import rng as rngmod
from .algoinfo import CompressorSpec, StreamingEstimator
from .errors import InvalidConfig
from .qstate import shannon_entropy


class Side(IntEnum):
    LEFT = 0
    RIGHT = 1


Policy = Callable[[Side, float, float], int]


def semaphore_p(side: Side, speed: float, v_T: float) -> int:
    """Pass (1) fast molecules leaving the left and slow ones leaving the right."""
    if side == Side.LEFT:
        return 0 if speed <= v_T else 1
    return 0 if speed > v_T else 1


def semaphore_p_tilde(side: Side, speed: float, v_T: float):
    """Reversible variant: the decision plus the input kept as garbage.

    The bit follows :func:`semaphore_p`; the echoed input makes the map
    injective.
    """
    return (Side(side), speed), semaphore_p(side, speed, v_T)


def always_pass(side: Side, speed: float, v_T: float) -> int:
    return 1


def always_stop(side: Side, speed: float, v_T: float) -> int:
    return 0


@dataclass
class GasEnsemble:
    chambers: np.ndarray  # int8, Side values
    speeds: np.ndarray
    v_L: float
    v_H: float
    v_T: float
    alpha: float = 0.5

    def __post_init__(self):
        if not self.v_L < self.v_T < self.v_H:
            raise InvalidConfig(f"need v_L < v_T < v_H, got {self.v_L}, {self.v_T}, {self.v_H}")
        self.chambers = np.asarray(self.chambers, dtype=np.int8)
        self.speeds = np.asarray(self.speeds, dtype=float)
        if self.chambers.shape != self.speeds.shape:
            raise InvalidConfig("chambers and speeds differ in length")

    @property
    def n(self) -> int:
        return self.chambers.size

    def counts(self) -> np.ndarray:
        """2x2 table indexed [side, fast]."""
        fast = (self.speeds > self.v_T).astype(np.int64)
        table = np.zeros((2, 2), dtype=np.int64)
        np.add.at(table, (self.chambers.astype(np.int64), fast), 1)
        return table

    def is_sorted(self) -> bool:
        c = self.counts()
        return c[Side.LEFT, 1] == 0 and c[Side.RIGHT, 0] == 0


@dataclass
class MemoryTape:
    bits: bytearray = field(default_factory=bytearray)
    records: Optional[list] = None

    def append(self, bit: int, record=None) -> None:
        self.bits.append(bit)
        if self.records is not None:
            self.records.append(record)

    def __len__(self) -> int:
        return len(self.bits)

    def as_array(self) -> np.ndarray:
        return np.frombuffer(bytes(self.bits), dtype=np.uint8).copy()


TRAJECTORY_COLUMNS = ("step", "left_slow", "left_fast", "right_slow", "right_fast",
                      "left_T", "right_T", "tape_len", "tape_I_bits")


@dataclass
class TrajectoryStats:
    rows: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(TRAJECTORY_COLUMNS) + "\n")
        for row in self.rows:
            buf.write(",".join("" if v is None else repr(v) for v in row) + "\n")
        return buf.getvalue()

    def column(self, name: str) -> list:
        i = TRAJECTORY_COLUMNS.index(name)
        return [r[i] for r in self.rows]


@dataclass(frozen=True)
class DemonConfig:
    molecules: int = 1000
    alpha: float = 0.5
    v_L: float = 1.0
    v_H: float = 3.0
    v_T: float = 2.0
    steps: int = 100_000
    # extra decisions recorded once the gas is sorted; None runs to `steps`
    tail_steps: Optional[int] = 2048
    seed: int = 7
    keep_garbage: bool = False
    record_every: int = 256
    context_order: int = 2

    def validate(self) -> None:
        if not self.v_L < self.v_T < self.v_H:
            raise InvalidConfig("speed ordering v_L < v_T < v_H violated")
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidConfig("alpha must be a probability")
        if self.molecules < 2 or self.molecules % 2:
            raise InvalidConfig("molecule count must be even and at least 2")
        if self.steps < 1:
            raise InvalidConfig("steps must be at least 1")
        if self.tail_steps is not None and self.tail_steps < 0:
            raise InvalidConfig("tail_steps must be nonnegative")
        if self.record_every < 1:
            raise InvalidConfig("record_every must be positive")


@dataclass
class ChamberStats:
    left_T: Optional[float]
    right_T: Optional[float]
    counts: np.ndarray


@dataclass
class DemonResult:
    gas: GasEnsemble
    tape: MemoryTape
    stats: TrajectoryStats
    n_ord: Optional[int]
    steps_taken: int

    @property
    def sorted(self) -> bool:
        return self.n_ord is not None


def init_gas(n: int, alpha: float, v_L: float, v_H: float, v_T: float, seed: int) -> GasEnsemble:
    if n < 2 or n % 2:
        raise InvalidConfig("molecule count must be even and at least 2")
    if not 0.0 <= alpha <= 1.0:
        raise InvalidConfig("alpha must be a probability")
    if not v_L < v_T < v_H:
        raise InvalidConfig(f"need v_L < v_T < v_H, got {v_L}, {v_T}, {v_H}")
    g = rngmod.stream(seed, "demon.init")
    chambers = g.integers(0, 2, size=n).astype(np.int8)
    fast = g.random(n) < alpha
    speeds = np.where(fast, v_H, v_L).astype(float)
    return GasEnsemble(chambers, speeds, v_L, v_H, v_T, alpha)


def _decide(gas: GasEnsemble, tape: MemoryTape, g: np.random.Generator, policy: Policy):
    i = int(g.integers(gas.n))
    side = Side(int(gas.chambers[i]))
    speed = float(gas.speeds[i])
    bit = int(policy(side, speed, gas.v_T))
    if bit:
        gas.chambers[i] = 1 - side
    tape.append(bit, (side, speed) if tape.records is not None else None)
    return side, speed, bit


def step(gas: GasEnsemble, tape: MemoryTape, rng: np.random.Generator,
         policy: Policy = semaphore_p):
    """One demon decision on a uniformly chosen molecule; mutates and returns both."""
    if gas.n == 0:
        raise InvalidConfig("empty gas")
    _decide(gas, tape, rng, policy)
    return gas, tape


def chamber_stats(gas: GasEnsemble) -> ChamberStats:
    """Mean squared speed per chamber as a temperature proxy; None if empty."""
    out = []
    for side in (Side.LEFT, Side.RIGHT):
        v = gas.speeds[gas.chambers == side]
        out.append(float(np.mean(v * v)) if v.size else None)
    return ChamberStats(out[0], out[1], gas.counts())


def _proxy(table: np.ndarray, side: int, v_L: float, v_H: float):
    slow, fast = int(table[side, 0]), int(table[side, 1])
    if slow + fast == 0:
        return None
    return (slow * v_L * v_L + fast * v_H * v_H) / (slow + fast)


def run(config: DemonConfig, policy: Policy = semaphore_p,
        gas: Optional[GasEnsemble] = None) -> DemonResult:
    """Apply the demon until the step cap, or until sorted plus ``tail_steps``.

    ``n_ord`` is the decision count at which the gas last became sorted and
    stayed sorted to the end of the run (None if unsorted at the end).
    """
    config.validate()
    if gas is None:
        gas = init_gas(config.molecules, config.alpha, config.v_L, config.v_H,
                       config.v_T, config.seed)
    g = rngmod.stream(config.seed, "demon.steps")
    tape = MemoryTape(records=[] if config.keep_garbage else None)
    est = StreamingEstimator(CompressorSpec(context_order=config.context_order))
    table = gas.counts()
    stats = TrajectoryStats()

    def record(t: int) -> None:
        stats.rows.append((
            t, int(table[0, 0]), int(table[0, 1]), int(table[1, 0]), int(table[1, 1]),
            _proxy(table, 0, gas.v_L, gas.v_H), _proxy(table, 1, gas.v_L, gas.v_H),
            len(tape), est.estimate if est.n else None,
        ))

    record(0)
    sorted_since = 0 if table[0, 1] == 0 and table[1, 0] == 0 else None
    t = 0
    while t < config.steps:
        side, speed, bit = _decide(gas, tape, g, policy)
        t += 1
        est.push(bit)
        if bit:
            fast = int(speed > gas.v_T)
            table[side, fast] -= 1
            table[1 - side, fast] += 1
        now_sorted = table[0, 1] == 0 and table[1, 0] == 0
        if now_sorted and sorted_since is None:
            sorted_since = t
        elif not now_sorted:
            sorted_since = None
        if t % config.record_every == 0:
            record(t)
        if (config.tail_steps is not None and sorted_since is not None
                and t - sorted_since >= config.tail_steps):
            break
    if not stats.rows or stats.rows[-1][0] != t:
        record(t)
    return DemonResult(gas, tape, stats, sorted_since, t)


def joint_entropy_bits(gas: GasEnsemble) -> float:
    """Empirical Shannon entropy of the (chamber, speed class) distribution."""
    table = gas.counts().ravel()
    return shannon_entropy(table / table.sum())


def out_of_equilibrium(gas: GasEnsemble, z_threshold: float = 3.0) -> bool:
    """Spatial non-uniformity beyond ``z_threshold`` standard errors.

    Flags either unequal occupancy of the chambers or unequal fast-molecule
    fractions between them.
    """
    table = gas.counts()
    n_left, n_right = table.sum(axis=1)
    n = n_left + n_right
    if abs(n_left - n / 2) > z_threshold * 0.5 * np.sqrt(n):
        return True
    if n_left == 0 or n_right == 0:
        return False
    p = table[:, 1].sum() / n
    if p in (0.0, 1.0):
        return False
    se = np.sqrt(p * (1 - p) * (1 / n_left + 1 / n_right))
    diff = table[0, 1] / n_left - table[1, 1] / n_right
    return bool(abs(diff) > z_threshold * se)


@dataclass(frozen=True)
class IntelligenceReport:
    delta_H_bits: float
    out_of_equilibrium: bool
    deterministic: bool

    @property
    def intelligent(self) -> bool:
        return self.deterministic and self.out_of_equilibrium and self.delta_H_bits < 0


def _is_deterministic(policy: Policy, v_L: float, v_H: float, v_T: float) -> bool:
    domain = [(s, v) for s in Side for v in (v_L, v_H)]
    first = [policy(s, v, v_T) for s, v in domain]
    second = [policy(s, v, v_T) for s, v in domain]
    return first == second and all(b in (0, 1) for b in first)


def intelligence_score(policy: Policy, config: DemonConfig) -> IntelligenceReport:
    """Classify ``policy`` by the three-part intelligence condition."""
    config.validate()
    gas = init_gas(config.molecules, config.alpha, config.v_L, config.v_H,
                   config.v_T, config.seed)
    h0 = joint_entropy_bits(gas)
    result = run(config, policy, gas=gas)
    dh = joint_entropy_bits(result.gas) - h0
    return IntelligenceReport(
        delta_H_bits=dh,
        out_of_equilibrium=out_of_equilibrium(result.gas),
        deterministic=_is_deterministic(policy, config.v_L, config.v_H, config.v_T),
    )
