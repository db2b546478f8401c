import numpy as np
import pytest

from magicspread import dense
from magicspread.codestate import NoMagicInjected, apply_clifford, dense_state, inject_t
from magicspread.lengthscales import (
    Interval,
    MlmiSet,
    extractable,
    fleom,
    lml,
    minimal_intervals,
    typical_length,
)
from magicspread.magic import MagicClass, dense_oracle_sre2, subsystem_magic_alg1
from magicspread.pauli import parse_pauli
from magicspread.tableau import StabilizerState, apply_gate, sample_clifford_2q

LOG43 = float(np.log2(4 / 3))


def bell_pairs_state(n):
    gens = []
    for i in range(0, n, 2):
        gens.append(parse_pauli("+" + "I" * i + "XX" + "I" * (n - i - 2)))
        gens.append(parse_pauli("+" + "I" * i + "ZZ" + "I" * (n - i - 2)))
    return StabilizerState(n, tuple(gens))


def doped_bell(n=6):
    return inject_t(bell_pairs_state(n), n // 2 - 1)


def random_doped(rng, n, layers):
    while True:
        st = StabilizerState.all_zero(n)
        for _ in range(layers):
            g = sample_clifford_2q(rng)
            st = apply_gate(st, g, rng.choice(n, size=2, replace=False).tolist())
        try:
            cs = inject_t(st, int(rng.integers(0, n)))
        except NoMagicInjected:
            continue
        for _ in range(int(rng.integers(0, layers))):
            g = sample_clifford_2q(rng)
            cs = apply_clifford(cs, g, rng.choice(n, size=2, replace=False).tolist())
        return cs


class TestInterval:
    def test_width(self):
        assert Interval(2, 5).width(8) == 4
        assert Interval(6, 1, wraps=True).width(8) == 4

    def test_qubits(self):
        assert Interval(6, 1, wraps=True).qubits(8) == {6, 7, 0, 1}

    def test_contains_across_wrap(self):
        ring = Interval(6, 1, wraps=True)
        assert ring.contains(Interval(7, 0, wraps=True), 8)
        assert ring.contains(Interval(6, 7), 8)
        assert not ring.contains(Interval(2, 4), 8)


class TestExtractable:
    def test_full_system(self):
        cs = doped_bell()
        assert extractable(cs, Interval(0, 5))

    def test_single_site(self):
        cs = doped_bell()
        assert not extractable(cs, Interval(2, 2))

    def test_hosting_pair(self):
        cs = doped_bell()
        assert extractable(cs, Interval(2, 3))


class TestMinimalIntervals:
    def test_bell_t0(self):
        m = minimal_intervals(doped_bell())
        assert m.intervals == (Interval(2, 3),)
        m.check()

    def test_matches_dense_scan(self):
        rng = np.random.default_rng(3)
        for _ in range(8):
            cs = random_doped(rng, 6, 8)
            vec = dense_state(cs)
            full_ivs = []
            for l in range(6):
                for r in range(l, 6):
                    val = dense_oracle_sre2(vec, set(range(l, r + 1)))
                    if abs(val - LOG43) < 1e-9:
                        full_ivs.append(Interval(l, r))
            minimal = [
                a
                for a in full_ivs
                if not any(b != a and a.contains(b, 6) for b in full_ivs)
            ]
            m = minimal_intervals(cs)
            assert set(m.intervals) == set(minimal)
            m.check()

    def test_minimality_by_shrinking(self):
        rng = np.random.default_rng(4)
        for _ in range(6):
            cs = random_doped(rng, 8, 10)
            for iv in minimal_intervals(cs).intervals:
                region = sorted(iv.qubits(8))
                assert subsystem_magic_alg1(cs, region) is MagicClass.FULL
                if len(region) > 1:
                    assert subsystem_magic_alg1(cs, region[1:]) is not MagicClass.FULL
                    assert subsystem_magic_alg1(cs, region[:-1]) is not MagicClass.FULL

    def test_periodic_wrapped_candidates(self):
        # cyclically shift the doped Bell chain until the hosting pair
        # straddles the seam, then ask under periodic boundaries
        from magicspread.tableau import SWAP

        shifted = doped_bell()
        for _ in range(3):  # each swap chain shifts every qubit down by one
            for q in range(5):
                shifted = apply_clifford(shifted, SWAP, [q, q + 1])
        m = minimal_intervals(shifted, wrap_intervals=True)
        m.check()
        assert m.intervals == (Interval(5, 0, wraps=True),)
        assert fleom(m) == 2


class TestLml:
    def test_bell_t0(self):
        assert lml(doped_bell()) == 2

    def test_consistency_invariant(self):
        rng = np.random.default_rng(5)
        for _ in range(6):
            cs = random_doped(rng, 8, 6)
            w = lml(cs)
            c = 4  # center_right for n=8
            left, right = c - w // 2, c + w // 2 - 1
            assert subsystem_magic_alg1(cs, range(left, right + 1)) is MagicClass.FULL
            if w > 2 and left + 1 <= right - 1:
                smaller = range(left + 1, right)
                assert subsystem_magic_alg1(cs, smaller) is not MagicClass.FULL

    def test_edge_injection_saturates_through_clamp(self):
        # logicals pinned at the open edge: the centered interval must
        # grow (clamping at the walls) until it spans the system
        cs = inject_t(bell_pairs_state(6), 0)
        assert lml(cs) == 6


class TestFleom:
    def test_single_interval(self):
        m = MlmiSet((Interval(2, 5),), 8, 3)
        assert fleom(m) == 4

    def test_overlapping_union(self):
        m = MlmiSet((Interval(1, 4), Interval(3, 6)), 8, 3)
        assert fleom(m) == 6

    def test_wrapped_union(self):
        m = MlmiSet((Interval(6, 1, wraps=True), Interval(0, 3)), 8, 0)
        # covered {6,7,0,1,2,3}: largest gap {4,5} -> width 6
        assert fleom(m) == 6

    def test_full_cover(self):
        m = MlmiSet((Interval(0, 4), Interval(3, 7)), 8, 3)
        assert fleom(m) == 8

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            fleom(MlmiSet((), 8, 3))


class TestDebugLinearScan:
    def test_binary_searches_agree_with_linear_scans(self, monkeypatch):
        import magicspread.lengthscales as ls

        monkeypatch.setattr(ls, "DEBUG_LINEAR_SCAN", True)
        rng = np.random.default_rng(6)
        for _ in range(6):
            cs = random_doped(rng, 8, 10)
            minimal_intervals(cs)
            lml(cs)
        cs = doped_bell()
        minimal_intervals(cs, wrap_intervals=True)


class TestTypicalLength:
    def test_degenerate(self):
        assert typical_length({2: 100}) == 2

    def test_tie_break_to_smallest(self):
        assert typical_length({4: 7, 2: 7, 3: 5}) == 2

    def test_list_input(self):
        assert typical_length([2, 2, 3]) == 2

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            typical_length([])
