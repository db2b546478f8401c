import itertools

import numpy as np
import pytest

from magicspread.channel import (
    CapacityEstimate,
    ErasureResult,
    capacity_proxy,
    erase_and_coherent_info,
    global_random_code,
)
from magicspread.codestate import NoMagicInjected, apply_clifford, extend_with_reference, inject_t
from magicspread.magic import logical_flags
from magicspread.pauli import parse_pauli
from magicspread.tableau import StabilizerState, apply_gate, entropy, sample_clifford_2q


def bell_pairs_state(n):
    gens = []
    for i in range(0, n, 2):
        gens.append(parse_pauli("+" + "I" * i + "XX" + "I" * (n - i - 2)))
        gens.append(parse_pauli("+" + "I" * i + "ZZ" + "I" * (n - i - 2)))
    return StabilizerState(n, tuple(gens))


def doped_bell(n=6):
    return inject_t(bell_pairs_state(n), n // 2 - 1)


class TestCoherentInfo:
    def test_empty_erasure(self):
        ext = extend_with_reference(doped_bell())
        res = erase_and_coherent_info(ext, ())
        assert res.coherent_info == 1 and res.preserved

    def test_total_erasure(self):
        ext = extend_with_reference(doped_bell())
        res = erase_and_coherent_info(ext, range(6))
        assert res.coherent_info == -1 and not res.preserved

    def test_erasing_logical_support(self):
        ext = extend_with_reference(doped_bell())
        res = erase_and_coherent_info(ext, {2, 3})
        assert res.coherent_info < 1 and not res.preserved

    def test_reference_protected(self):
        ext = extend_with_reference(doped_bell())
        with pytest.raises(ValueError):
            erase_and_coherent_info(ext, {6})

    def test_values_always_in_range(self):
        rng = np.random.default_rng(0)
        cs = doped_bell()
        for _ in range(30):
            g = sample_clifford_2q(rng)
            cs = apply_clifford(cs, g, rng.choice(6, size=2, replace=False).tolist())
        ext = extend_with_reference(cs)
        for _ in range(50):
            size = int(rng.integers(0, 7))
            b = rng.choice(6, size=size, replace=False)
            res = erase_and_coherent_info(ext, b)
            assert res.coherent_info in (-1, 0, 1)

    def test_equivalence_with_reducibility(self):
        # preserved iff all logicals fit on the surviving side, checked
        # exhaustively over subsets at small size
        rng = np.random.default_rng(1)
        for _ in range(6):
            n = 6
            cs = doped_bell(n)
            for _ in range(int(rng.integers(0, 20))):
                g = sample_clifford_2q(rng)
                cs = apply_clifford(cs, g, rng.choice(n, size=2, replace=False).tolist())
            ext = extend_with_reference(cs)
            for size in range(n + 1):
                for b in itertools.combinations(range(n), size):
                    res = erase_and_coherent_info(ext, b)
                    a_set = set(range(n)) - set(b)
                    f = logical_flags(cs, a_set)
                    all_reducible = f.x[0] and f.y[0] and f.z[0]
                    assert res.preserved == all_reducible

    def test_measurement_variant_runs(self):
        ext = extend_with_reference(doped_bell())
        rng = np.random.default_rng(5)
        res = erase_and_coherent_info(ext, {0, 1}, rng=rng, channel="measure")
        assert res.coherent_info in (-1, 0, 1)


class TestCapacityProxy:
    def test_f_zero_is_one(self):
        rng = np.random.default_rng(2)
        est = capacity_proxy(doped_bell(), 0.0, 25, rng)
        assert est.c_tilde == 1.0 and est.n_erased == 0

    def test_f_one_is_zero(self):
        rng = np.random.default_rng(3)
        est = capacity_proxy(doped_bell(), 1.0, 25, rng)
        assert est.c_tilde == 0.0

    def test_rounding_half_to_even(self):
        rng = np.random.default_rng(4)
        est = capacity_proxy(doped_bell(6), 0.25, 4, rng)  # 1.5 -> 2
        assert est.n_erased == 2
        est = capacity_proxy(doped_bell(10), 0.25, 4, rng)  # 2.5 -> 2
        assert est.n_erased == 2

    def test_monotone_in_f_statistically(self):
        rng = np.random.default_rng(6)
        cs = global_random_code(10, rng)
        vals = []
        for f in (0.1, 0.3, 0.5, 0.7, 0.9):
            est = capacity_proxy(cs, f, 400, rng)
            vals.append((est.c_tilde, est.stderr))
        for (c1, s1), (c2, s2) in zip(vals, vals[1:]):
            assert c2 <= c1 + 3 * np.hypot(s1, s2) + 1e-12


class TestGlobalRandomCode:
    def test_structure(self):
        rng = np.random.default_rng(7)
        cs = global_random_code(8, rng)
        cs.check()

    def test_half_cut_entropy_near_maximal(self):
        rng = np.random.default_rng(8)
        L = 12
        vals = []
        for _ in range(20):
            cs = global_random_code(L, rng)
            ext = extend_with_reference(cs)
            vals.append(entropy(ext, range(L // 2)))
        assert np.mean(vals) > L / 2 - 1.5

    def test_capacity_crosses_half_near_half(self):
        rng = np.random.default_rng(9)
        cs = global_random_code(14, rng)
        lo = capacity_proxy(cs, 0.3, 200, rng).c_tilde
        hi = capacity_proxy(cs, 0.7, 200, rng).c_tilde
        assert lo > 0.5 > hi
