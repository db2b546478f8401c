import numpy as np
import pytest

from magicspread import dense
from magicspread import tableau as tb
from magicspread.pauli import PauliString, parse_pauli
from magicspread.tableau import (
    CNOT,
    CZ,
    H,
    ONE_QUBIT_CLIFFORDS,
    S,
    SDKI_F,
    StabilizerState,
    apply_gate,
    dumps_state,
    entropy,
    loads_state,
    measure_pauli,
    sample_clifford_2q,
    symplectic_from_index,
    symplectic_group_order,
)


def bell_state():
    return StabilizerState(2, (parse_pauli("+XX"), parse_pauli("+ZZ")))


def random_pure_state(rng, n, depth=None):
    st = StabilizerState.all_zero(n)
    depth = depth if depth is not None else 3 * n
    for _ in range(depth):
        g = sample_clifford_2q(rng)
        sites = rng.choice(n, size=2, replace=False).tolist()
        st = apply_gate(st, g, sites)
    return st


class TestApplyGate:
    def test_h_on_zero_gives_plus(self):
        st = StabilizerState.all_zero(1)
        out = apply_gate(st, H, [0])
        assert out.generators == (parse_pauli("+X"),)

    def test_cz_conjugation(self):
        st = StabilizerState(2, (parse_pauli("+XI"),))
        out = apply_gate(st, CZ, [0, 1])
        assert out.generators == (parse_pauli("+XZ"),)

    def test_sdkif_on_zi(self):
        st = StabilizerState(2, (parse_pauli("+ZI"),))
        out = apply_gate(st, SDKI_F, [0, 1])
        assert out.generators == (parse_pauli("+XZ"),)

    def test_sdkif_matches_dense_composition(self):
        uh = dense.gate_unitary(H)
        ucz = dense.gate_unitary(CZ)
        lhs = ucz @ np.kron(uh, uh) @ ucz
        usd = dense.gate_unitary(SDKI_F)
        ratio = lhs @ np.linalg.inv(usd)
        assert np.allclose(ratio, ratio[0, 0] * np.eye(4))

    def test_bad_sites(self):
        st = StabilizerState.all_zero(3)
        with pytest.raises(ValueError):
            apply_gate(st, CZ, [0, 0])
        with pytest.raises(ValueError):
            apply_gate(st, CZ, [0, 3])
        with pytest.raises(ValueError):
            apply_gate(st, H, [0, 1])

    def test_preserves_invariants_bulk(self):
        rng = np.random.default_rng(42)
        for _ in range(10_000):
            n = int(rng.integers(2, 5))
            st = random_pure_state(rng, n, depth=4)
            g = sample_clifford_2q(rng)
            sites = rng.choice(n, size=2, replace=False).tolist()
            out = apply_gate(st, g, sites)
            out.check()

    def test_agrees_with_dense_unitary(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            n = 3
            st = StabilizerState.all_zero(n)
            vec = dense.statevector(st)
            for _ in range(8):
                g = sample_clifford_2q(rng)
                sites = rng.choice(n, size=2, replace=False).tolist()
                st = apply_gate(st, g, sites)
                vec = dense.apply_gate(vec, g, sites)
            assert abs(abs(np.vdot(dense.statevector(st), vec)) - 1) < 1e-9


class TestSampler:
    def test_group_order(self):
        assert symplectic_group_order(2) == 720
        mats = {tuple(symplectic_from_index(i, 2)) for i in range(720)}
        assert len(mats) == 720

    def test_golden_fixture(self):
        g = sample_clifford_2q(np.random.default_rng(12345))
        assert [str(im) for im in g.images] == ["-XZ", "-YZ", "+IZ", "+ZX"]

    def test_composition_closure(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            a, b = sample_clifford_2q(rng), sample_clifford_2q(rng)
            c = a.then(b)
            c._check()

    def test_image_marginal_uniform(self):
        # image of X(x)I is uniform over the 30 signed non-identity Paulis
        rng = np.random.default_rng(2024)
        draws = 60_000
        counts = {}
        for _ in range(draws):
            im = sample_clifford_2q(rng).images[0]
            counts[(im.x, im.z, im.phase)] = counts.get((im.x, im.z, im.phase), 0) + 1
        assert len(counts) == 30
        expect = draws / 30
        # 5 sigma multinomial band per cell
        sigma = (expect * (1 - 1 / 30)) ** 0.5
        for v in counts.values():
            assert abs(v - expect) < 5 * sigma

    @pytest.mark.slow
    def test_image_marginal_uniform_large(self):
        rng = np.random.default_rng(77)
        draws = 1_000_000
        counts = np.zeros(30)
        keys = {}
        for _ in range(draws):
            im = sample_clifford_2q(rng).images[0]
            k = (im.x, im.z, im.phase)
            if k not in keys:
                keys[k] = len(keys)
            counts[keys[k]] += 1
        expect = draws / 30
        sigma = (expect * (1 - 1 / 30)) ** 0.5
        assert len(keys) == 30
        assert np.all(np.abs(counts - expect) < 5 * sigma)


class TestEntropy:
    def test_bell_pair(self):
        assert entropy(bell_state(), {0}) == 1

    def test_product_state(self):
        assert entropy(StabilizerState.all_zero(2), {0}) == 0

    def test_ghz_two_of_three(self):
        ghz = StabilizerState(
            3, (parse_pauli("+XXX"), parse_pauli("+ZZI"), parse_pauli("+IZZ"))
        )
        assert entropy(ghz, {0, 1}) == 1
        rho = dense.reduced_density_matrix(dense.statevector(ghz), {0, 1})
        assert abs(dense.entropy_vn(rho) - 1) < 1e-9

    def test_pure_state_complement_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(150):
            n = int(rng.integers(2, 7))
            st = random_pure_state(rng, n)
            mask = int(rng.integers(0, 1 << n))
            comp = ((1 << n) - 1) & ~mask
            assert entropy(st, mask) == entropy(st, comp)

    def test_matches_dense_all_bipartitions(self):
        rng = np.random.default_rng(4)
        for _ in range(12):
            n = int(rng.integers(2, 6))
            st = random_pure_state(rng, n)
            vec = dense.statevector(st)
            for mask in range(1 << n):
                s_dense = dense.entropy_vn(dense.reduced_density_matrix(vec, mask))
                assert abs(entropy(st, mask) - s_dense) < 1e-8

    def test_mixed_state(self):
        # one generator on two qubits: classical correlation, S(1 qubit)=1
        st = StabilizerState(2, (parse_pauli("+ZZ"),))
        assert entropy(st, {0}) == 1
        assert entropy(st, {0, 1}) == 1


class TestMeasurement:
    def test_deterministic_z_on_zero(self):
        rng = np.random.default_rng(0)
        st = StabilizerState.all_zero(1)
        outcome, post = measure_pauli(st, parse_pauli("+Z"), rng)
        assert outcome == 1 and post == st

    def test_x_on_zero_is_fair_coin(self):
        outcomes = []
        for seed in range(200):
            rng = np.random.default_rng(seed)
            st = StabilizerState.all_zero(1)
            outcome, post = measure_pauli(st, parse_pauli("+X"), rng)
            outcomes.append(outcome)
            want = parse_pauli("+X") if outcome == 1 else parse_pauli("-X")
            assert post.generators == (want,)
        frac = outcomes.count(1) / len(outcomes)
        assert 0.35 < frac < 0.65

    def test_bell_zz_deterministic(self):
        rng = np.random.default_rng(0)
        outcome, post = measure_pauli(bell_state(), parse_pauli("+ZZ"), rng)
        assert outcome == 1 and post == bell_state()

    def test_minus_operator_deterministic(self):
        rng = np.random.default_rng(0)
        st = StabilizerState(1, (parse_pauli("-Z"),))
        outcome, _ = measure_pauli(st, parse_pauli("+Z"), rng)
        assert outcome == -1

    def test_logical_extension_on_mixed_state(self):
        rng = np.random.default_rng(1)
        st = StabilizerState(2, (parse_pauli("+ZZ"),))
        outcome, post = measure_pauli(st, parse_pauli("+ZI"), rng)
        assert outcome in (1, -1)
        assert len(post.generators) == 2


class TestTextFormat:
    def test_round_trip(self):
        rng = np.random.default_rng(8)
        st = random_pure_state(rng, 5)
        assert loads_state(dumps_state(st)) == st

    def test_header(self):
        text = dumps_state(bell_state())
        assert text.splitlines()[0] == "n=2 k=2"


def test_one_qubit_clifford_table():
    assert len(ONE_QUBIT_CLIFFORDS) == 24
    # closed under composition
    seen = {g.images for g in ONE_QUBIT_CLIFFORDS}
    for a in ONE_QUBIT_CLIFFORDS[:6]:
        for b in ONE_QUBIT_CLIFFORDS[:6]:
            assert a.then(b).images in seen
