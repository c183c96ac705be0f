"""Ledger of the magic-membrane engine cycle.

Units: k_B = 1, so temperatures are energies and entropies are in nats.
``dW`` is work done by the gas and ``dQ`` heat drawn from the reservoir.

The cycle is analytic.  ``dS_gas`` on each phase is the reversible heat
over T, i.e. the operational entropy change of the working gas.  Because
the gas ends where it started, the universe audit without membranes counts
only the reservoir, -sum(dQ)/T; the corrected audit adds the entropy stored
in the membranes' records, which must be erased to close the cycle.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import rng as rngmod
from .algoinfo import CompressorSpec, estimate_I
from .demon import MemoryTape
from .errors import InvalidConfig, InvalidReport
from .qstate import (
    KET0,
    PLUS,
    DensityOperator,
    density_from_mixture,
    eigendecompose,
    von_neumann_entropy,
)

PHASES = (
    "init",
    "isothermal_expansion",
    "magic_merge",
    "relabel",
    "orthogonal_separation",
    "isothermal_compression",
    "unitary_reset",
)
ERASE_PHASE = "memory_erase"
AUDIT_TOL = 1e-12


@dataclass(frozen=True)
class Region:
    species: Optional[str]  # None marks an empty region
    volume: float
    concentration: float = 0.0


@dataclass(frozen=True)
class EngineState:
    n: float
    T: float
    phase: str
    chambers: dict
    species: dict

    def __post_init__(self):
        total = sum(r.volume for r in self.chambers.values())
        if abs(total - 1.0) > 1e-12:
            raise InvalidConfig(f"volume fractions sum to {total}")


@dataclass(frozen=True)
class LedgerEntry:
    phase: str
    dW: float
    dQ: float
    dS_gas: float
    dS_memory: float = 0.0


@dataclass(frozen=True)
class CycleReport:
    n: float
    T: float
    entries: tuple
    eigenvalues: tuple = ()
    relabel_residual: float = 0.0
    states: tuple = field(default=(), compare=False)

    @property
    def net_work(self) -> float:
        return sum(e.dW for e in self.entries)

    @property
    def memory_entropy(self) -> float:
        return sum(e.dS_memory for e in self.entries)

    @property
    def uncorrected_dS_universe(self) -> float:
        return -sum(e.dQ for e in self.entries) / self.T if self.entries else 0.0

    @property
    def corrected_dS_universe(self) -> float:
        return self.uncorrected_dS_universe + self.memory_entropy

    @property
    def paradox_exhibited(self) -> bool:
        return self.net_work > 0 and self.uncorrected_dS_universe < 0

    @property
    def second_law_restored(self) -> bool:
        return self.corrected_dS_universe >= -AUDIT_TOL

    def entry(self, phase: str) -> LedgerEntry:
        for e in self.entries:
            if e.phase == phase:
                return e
        raise KeyError(phase)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "T": self.T,
            "eigenvalues": list(self.eigenvalues),
            "relabel_residual": self.relabel_residual,
            "entries": [asdict(e) for e in self.entries],
            "net_work": self.net_work,
            "memory_entropy": self.memory_entropy,
            "uncorrected_dS_universe": self.uncorrected_dS_universe,
            "corrected_dS_universe": self.corrected_dS_universe,
            "paradox_exhibited": self.paradox_exhibited,
            "second_law_restored": self.second_law_restored,
            "clausius_without_memory": clausius_audit(self, False)[0],
            "clausius_with_memory": clausius_audit(self, True)[0],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["phase", "dW", "dQ", "dS_gas", "dS_memory"])
        for e in self.entries:
            w.writerow([e.phase, repr(e.dW), repr(e.dQ), repr(e.dS_gas), repr(e.dS_memory)])
        return buf.getvalue()


def peres_mixture() -> DensityOperator:
    """Equal mixture of |0> and |+>."""
    return density_from_mixture([(0.5, KET0), (0.5, PLUS)])


def mixing_entropy(rho: DensityOperator) -> float:
    return von_neumann_entropy(rho)


def _state(n, T, phase, chambers, species) -> EngineState:
    return EngineState(n, T, phase, {k: Region(*v) for k, v in chambers.items()}, species)


def run_cycle(n: float, T: float, memory_booking: str = "merge") -> CycleReport:
    """Run the two-species cycle and return both audits.

    ``memory_booking`` places the n ln 2 membrane-record entropy either on
    the merge phase ("merge") or on a trailing erase phase ("erase").
    """
    if not n >= 1:
        raise InvalidConfig("n must be at least 1")
    if not T > 0:
        raise InvalidConfig("T must be positive")
    if memory_booking not in ("merge", "erase"):
        raise InvalidConfig(f"unknown memory_booking {memory_booking!r}")

    rho = peres_mixture()
    spectrum = eigendecompose(rho)
    lam = [float(l) for l in spectrum.eigenvalues]
    e_plus, e_minus = spectrum.eigenstates
    # Schatten relabeling must describe the very same operator
    relabel_residual = float(abs(spectrum.reconstruct() - rho.matrix).max())

    ln2 = math.log(2.0)
    work_expand = n * T * ln2
    work_compress = n * T * sum(l * math.log(l) for l in lam if l > 0)
    memory = n * ln2  # one binary species label per molecule

    species = {"0": KET0, "plus": PLUS, "e_plus": e_plus, "e_minus": e_minus}
    states = (
        _state(n, T, "init", {"LL": (None, .25), "LR": ("0", .25, .5),
                              "RL": ("plus", .25, .5), "RR": (None, .25)}, species),
        _state(n, T, "isothermal_expansion", {"L": ("0", .5, .5), "R": ("plus", .5, .5)}, species),
        _state(n, T, "magic_merge", {"L": ("0+plus", .5, 1.0), "R": (None, .5)}, species),
        _state(n, T, "relabel", {"L": ("e_plus+e_minus", .5, 1.0), "R": (None, .5)}, species),
        _state(n, T, "orthogonal_separation",
               {"L": ("e_plus", .5, float(lam[0])), "R": ("e_minus", .5, float(lam[1]))}, species),
        _state(n, T, "isothermal_compression",
               {"LR": ("e_plus", float(lam[0]) / 2, .5), "RL": ("e_minus", float(lam[1]) / 2, .5),
                "empty": (None, .5)}, species),
        _state(n, T, "unitary_reset", {"LL": (None, .25), "LR": ("0", .25, .5),
                                       "RL": ("plus", .25, .5), "RR": (None, .25)}, species),
    )

    entries = [
        LedgerEntry("init", 0.0, 0.0, 0.0),
        LedgerEntry("isothermal_expansion", work_expand, work_expand, work_expand / T),
        LedgerEntry("magic_merge", 0.0, 0.0, 0.0, memory if memory_booking == "merge" else 0.0),
        LedgerEntry("relabel", 0.0, 0.0, 0.0),
        LedgerEntry("orthogonal_separation", 0.0, 0.0, 0.0),
        LedgerEntry("isothermal_compression", work_compress, work_compress, work_compress / T),
        LedgerEntry("unitary_reset", 0.0, 0.0, 0.0),
    ]
    if memory_booking == "erase":
        entries.append(LedgerEntry(ERASE_PHASE, 0.0, 0.0, 0.0, memory))
    return CycleReport(n, T, tuple(entries), tuple(lam),
                       relabel_residual, states)


def clausius_audit(report: CycleReport, include_memory: bool):
    """Cyclic sum of dQ/T, optionally minus the stored record entropy.

    Returns ``(integral, passes)`` with ``passes`` meaning integral <= 0.
    """
    phases = tuple(e.phase for e in report.entries)
    if phases and phases not in (PHASES, PHASES + (ERASE_PHASE,)):
        raise InvalidReport(f"not a complete cycle: {phases}")
    integral = sum(e.dQ for e in report.entries) / report.T if phases else 0.0
    if include_memory:
        integral -= report.memory_entropy
    return float(integral), bool(integral <= AUDIT_TOL)


def membrane_tape_monte_carlo(n: int, seed: int, concentration: float = 0.5) -> MemoryTape:
    """Record of species labels a membrane writes while sorting n molecules.

    ``concentration`` is the fraction of species 0; label 1 marks the other
    species.  Each record holds the arrival side and the label.
    """
    if n < 1:
        raise InvalidConfig("n must be at least 1")
    if not 0.0 <= concentration <= 1.0:
        raise InvalidConfig("concentration must be in [0, 1]")
    g = rngmod.stream(seed, "engine.membrane")
    labels = (g.random(n) >= concentration).astype(int)
    sides = g.integers(0, 2, size=n)
    tape = MemoryTape(records=[])
    for s, i in zip(sides.tolist(), labels.tolist()):
        tape.append(i, (s, i))
    return tape


def empirical_memory_entropy(tape: MemoryTape,
                             spec: CompressorSpec = CompressorSpec()) -> float:
    """Compressed size of a membrane tape, in nats."""
    return estimate_I(tape.as_array(), spec) * math.log(2.0)
