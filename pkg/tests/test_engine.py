import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infotherm.algoinfo import estimate_I
from infotherm.engine import (
    ERASE_PHASE,
    PHASES,
    CycleReport,
    EngineState,
    LedgerEntry,
    Region,
    clausius_audit,
    empirical_memory_entropy,
    membrane_tape_monte_carlo,
    mixing_entropy,
    peres_mixture,
    run_cycle,
)
from infotherm.errors import InvalidConfig, InvalidReport
from infotherm.qstate import KET0, KET1, density_from_mixture

LN2 = math.log(2)
LAM = ((2 + math.sqrt(2)) / 4, (2 - math.sqrt(2)) / 4)
S_MIX = 0.4164955306996875          # -sum(l ln l) over LAM
NET = 0.2766516498602578            # ln 2 - S_MIX


class TestCycle:
    def test_peres_numbers(self):
        r = run_cycle(1, 1)
        assert r.net_work == pytest.approx(NET, abs=1e-12)
        assert r.entry("isothermal_expansion").dW == LN2
        assert r.entry("isothermal_compression").dW == pytest.approx(-S_MIX, abs=1e-12)
        assert np.allclose(r.eigenvalues, LAM, atol=1e-12)
        assert r.uncorrected_dS_universe == pytest.approx(-NET, abs=1e-12)
        assert r.corrected_dS_universe == pytest.approx(S_MIX, abs=1e-12)
        assert r.paradox_exhibited and r.second_law_restored

    def test_phase_order(self):
        assert tuple(e.phase for e in run_cycle(1, 1).entries) == PHASES
        assert tuple(e.phase for e in run_cycle(1, 1, "erase").entries) == PHASES + (ERASE_PHASE,)

    def test_booking_totals_agree(self):
        a, b = run_cycle(3, 2), run_cycle(3, 2, "erase")
        assert a.corrected_dS_universe == b.corrected_dS_universe
        assert a.entry("magic_merge").dS_memory == 3 * LN2
        assert b.entry("magic_merge").dS_memory == 0
        assert b.entry(ERASE_PHASE).dS_memory == 3 * LN2

    def test_zero_delta_phases(self):
        r = run_cycle(2, 5)
        for ph in ("init", "relabel", "orthogonal_separation", "unitary_reset"):
            e = r.entry(ph)
            assert (e.dW, e.dQ, e.dS_gas, e.dS_memory) == (0, 0, 0, 0)
        m = r.entry("magic_merge")
        assert m.dW == 0 and m.dQ == 0

    def test_isothermal_contract(self):
        r = run_cycle(2.5, 0.7)
        for ph in ("isothermal_expansion", "isothermal_compression"):
            e = r.entry(ph)
            assert e.dQ == e.dW
            assert e.dS_gas == pytest.approx(e.dQ / r.T)

    def test_relabel_equivalence(self):
        r = run_cycle(1, 1)
        assert r.relabel_residual < 1e-10

    def test_states_conserve_volume(self):
        r = run_cycle(1, 1)
        assert [s.phase for s in r.states] == list(PHASES)
        for s in r.states:
            assert sum(reg.volume for reg in s.chambers.values()) == pytest.approx(1)
        with pytest.raises(InvalidConfig):
            EngineState(1, 1, "init", {"L": Region("0", .4)}, {})

    @pytest.mark.parametrize("n, T", [(0, 1), (0.5, 1), (1, 0), (1, -2)])
    def test_invalid(self, n, T):
        with pytest.raises(InvalidConfig):
            run_cycle(n, T)
        with pytest.raises(InvalidConfig):
            run_cycle(1, 1, "later")

    def test_linearity_grid(self):
        base = run_cycle(1, 1)
        for n in (1, 2, 7):
            for T in (0.5, 1, 3):
                r = run_cycle(n, T)
                for e, e0 in zip(r.entries, base.entries):
                    assert e.dW == pytest.approx(n * T * e0.dW, abs=1e-12)
                    assert e.dQ == pytest.approx(n * T * e0.dQ, abs=1e-12)
                    assert e.dS_gas == pytest.approx(n * e0.dS_gas, abs=1e-12)
                    assert e.dS_memory == pytest.approx(n * e0.dS_memory, abs=1e-12)

    def test_temperature_scaling(self):
        a, b = run_cycle(1, 1), run_cycle(1, 2)
        assert b.net_work == pytest.approx(2 * a.net_work)
        assert b.corrected_dS_universe == pytest.approx(a.corrected_dS_universe)

    @settings(max_examples=50, deadline=None)
    @given(n=st.floats(1, 1e4), T=st.floats(1e-3, 1e4))
    def test_paradox_and_restoration_everywhere(self, n, T):
        r = run_cycle(n, T)
        assert r.net_work > 0 and r.paradox_exhibited and r.second_law_restored
        assert r.corrected_dS_universe == pytest.approx(n * mixing_entropy(peres_mixture()), rel=1e-12)
        assert r.net_work == pytest.approx(sum(e.dW for e in r.entries))
        assert r.corrected_dS_universe == pytest.approx(
            r.uncorrected_dS_universe + sum(e.dS_memory for e in r.entries))

    def test_serialization(self):
        r = run_cycle(1, 1)
        doc = r.to_json()
        assert doc["paradox_exhibited"] is True and doc["second_law_restored"] is True
        assert len(doc["entries"]) == 7
        lines = r.to_csv().splitlines()
        assert lines[0] == "phase,dW,dQ,dS_gas,dS_memory" and len(lines) == 8


class TestMixingEntropy:
    def test_values(self):
        assert mixing_entropy(peres_mixture()) == pytest.approx(S_MIX, abs=1e-12)
        assert mixing_entropy(density_from_mixture([(1, KET0)])) == pytest.approx(0, abs=1e-14)
        half = density_from_mixture([(0.5, KET0), (0.5, KET1)])
        assert mixing_entropy(half) == pytest.approx(LN2, abs=1e-14)

    def test_peres_matrix(self):
        assert np.allclose(peres_mixture().matrix, [[0.75, 0.25], [0.25, 0.25]])


class TestClausius:
    def test_paradox(self):
        r = run_cycle(1, 1)
        val, ok = clausius_audit(r, False)
        assert val == pytest.approx(NET, abs=1e-12) and not ok
        val, ok = clausius_audit(r, True)
        assert val == pytest.approx(-S_MIX, abs=1e-12) and ok

    def test_empty_cycle(self):
        assert clausius_audit(CycleReport(1, 1, ()), True) == (0.0, True)
        assert clausius_audit(CycleReport(1, 1, ()), False) == (0.0, True)

    def test_incomplete(self):
        r = run_cycle(1, 1)
        with pytest.raises(InvalidReport):
            clausius_audit(CycleReport(1, 1, r.entries[:3]), True)
        with pytest.raises(InvalidReport):
            clausius_audit(CycleReport(1, 1, r.entries[::-1]), False)


class TestMembraneTape:
    def test_small_reproducible(self):
        a, b = membrane_tape_monte_carlo(8, 1), membrane_tape_monte_carlo(8, 1)
        assert len(a) == 8 and a.bits == b.bits and a.records == b.records
        assert all(rec[1] == bit for rec, bit in zip(a.records, a.bits))

    def test_fair_labels_cost_a_bit_each(self):
        for seed in (3, 4, 5):
            tape = membrane_tape_monte_carlo(4096, seed)
            assert estimate_I(tape.as_array()) >= 3686

    def test_forced_species(self):
        tape = membrane_tape_monte_carlo(4096, 3, concentration=1.0)
        assert not tape.as_array().any()
        assert estimate_I(tape.as_array()) < 100
        full = empirical_memory_entropy(membrane_tape_monte_carlo(4096, 3))
        assert empirical_memory_entropy(tape) < 0.05 * full
        assert full == pytest.approx(4096 * LN2, rel=0.02)

    def test_invalid(self):
        with pytest.raises(InvalidConfig):
            membrane_tape_monte_carlo(0, 1)
        with pytest.raises(InvalidConfig):
            membrane_tape_monte_carlo(8, 1, concentration=2)
