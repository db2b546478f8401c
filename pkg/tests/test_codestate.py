import numpy as np
import pytest

from magicspread import dense
from magicspread import tableau as tb
from magicspread.codestate import (
    CodeState,
    NoMagicInjected,
    apply_clifford,
    build_interplay_state,
    dense_state,
    dumps_codestate,
    extend_with_reference,
    inject_t,
    loads_codestate,
)
from magicspread.pauli import parse_pauli
from magicspread.tableau import H, StabilizerState, apply_gate, entropy, sample_clifford_2q


def bell_pairs_state(n):
    gens = []
    for i in range(0, n, 2):
        gens.append(parse_pauli("+" + "I" * i + "XX" + "I" * (n - i - 2)))
        gens.append(parse_pauli("+" + "I" * i + "ZZ" + "I" * (n - i - 2)))
    return StabilizerState(n, tuple(gens))


class TestInjectT:
    def test_all_zero_fails(self):
        for site in range(3):
            with pytest.raises(NoMagicInjected):
                inject_t(StabilizerState.all_zero(3), site)

    def test_plus_state(self):
        st = StabilizerState(1, (parse_pauli("+X"),))
        cs = inject_t(st, 0)
        assert cs.logical_x == parse_pauli("+Z")
        assert cs.logical_z == parse_pauli("+X")
        assert cs.stabilizers == ()
        cs.check()

    def test_bell_chain_example(self):
        cs = inject_t(bell_pairs_state(6), 2)
        assert cs.logical_x == parse_pauli("+IIZIII")
        assert cs.logical_z == parse_pauli("+IIXXII")
        assert set(cs.stabilizers) == {
            parse_pauli("+XXIIII"),
            parse_pauli("+ZZIIII"),
            parse_pauli("+IIZZII"),
            parse_pauli("+IIIIXX"),
            parse_pauli("+IIIIZZ"),
        }
        cs.check()

    def test_dense_state_matches_t_application(self):
        rng = np.random.default_rng(0)
        hits = 0
        while hits < 25:
            n = int(rng.integers(2, 7))
            st = StabilizerState.all_zero(n)
            for _ in range(3 * n):
                g = sample_clifford_2q(rng)
                sites = rng.choice(n, size=2, replace=False).tolist()
                st = apply_gate(st, g, sites)
            site = int(rng.integers(0, n))
            try:
                cs = inject_t(st, site)
            except NoMagicInjected:
                continue
            hits += 1
            direct = dense.apply_t_gate(dense.statevector(st), site)
            rebuilt = dense_state(cs)
            assert abs(abs(np.vdot(direct, rebuilt)) - 1) < 1e-9
            assert abs(dense.sre2_statevector(direct) - np.log2(4 / 3)) < 1e-12

    def test_no_injection_when_diagonal(self):
        # Z-basis product states commute with Z everywhere
        st = StabilizerState(2, (parse_pauli("-ZI"), parse_pauli("+IZ")))
        with pytest.raises(NoMagicInjected):
            inject_t(st, 0)


class TestApplyClifford:
    def test_identity(self):
        cs = inject_t(bell_pairs_state(6), 2)
        out = apply_clifford(cs, tb.I1, [0])
        assert out == cs

    def test_h_at_injection_site(self):
        st = StabilizerState(1, (parse_pauli("+X"),))
        cs = inject_t(st, 0)
        out = apply_clifford(cs, H, [0])
        assert out.logical_x == parse_pauli("+X")
        assert out.logical_z == parse_pauli("+Z")

    def test_structure_preserved_under_random_layers(self):
        rng = np.random.default_rng(5)
        cs = inject_t(bell_pairs_state(6), 2)
        for _ in range(60):
            g = sample_clifford_2q(rng)
            sites = rng.choice(6, size=2, replace=False).tolist()
            cs = apply_clifford(cs, g, sites)
            cs.check()

    def test_logical_y_tracks(self):
        cs = inject_t(bell_pairs_state(6), 2)
        ly = cs.logical_y
        assert ly.is_hermitian()
        assert not ly.commutes_with(cs.logical_x)
        assert not ly.commutes_with(cs.logical_z)


class TestInterplay:
    def test_trivial_circuits_reduce_to_inject(self):
        psi0 = bell_pairs_state(6)
        cs = build_interplay_state([], [], psi0, 2)
        assert cs == inject_t(psi0, 2)

    def test_entanglement_only_case(self):
        # u = identity, v nontrivial: magic injected into the evolved state
        rng = np.random.default_rng(7)
        psi0 = bell_pairs_state(6)
        v = []
        for _ in range(6):
            v.append((sample_clifford_2q(rng), rng.choice(6, size=2, replace=False).tolist()))
        cs = build_interplay_state([], v, psi0, 2)
        cs.check()
        assert cs.logical_x == parse_pauli("+IIZIII")

    def test_operator_only_case(self):
        rng = np.random.default_rng(8)
        psi0 = bell_pairs_state(6)
        u = [(sample_clifford_2q(rng), [2, 3])]
        cs = build_interplay_state(u, [], psi0, 2)
        cs.check()
        # logical_x is the spread operator, supported on the gate's cone
        assert cs.logical_x.support() <= {2, 3}

    def test_postselection_error(self):
        psi0 = StabilizerState.all_zero(4)
        with pytest.raises(NoMagicInjected):
            build_interplay_state([], [], psi0, 1)


class TestExtendWithReference:
    def test_single_qubit_t(self):
        st = StabilizerState(1, (parse_pauli("+X"),))
        ext = extend_with_reference(inject_t(st, 0))
        assert ext.generators == (parse_pauli("+ZX"), parse_pauli("+XZ"))
        assert ext.is_pure
        assert entropy(ext, {1}) == 1

    def test_bell_example_entropies(self):
        ext = extend_with_reference(inject_t(bell_pairs_state(6), 2))
        assert ext.is_pure and ext.n == 7
        assert entropy(ext, {6}) == 1
        assert entropy(ext, {2, 3, 6}) == 0

    def test_tracing_r_gives_code_space_mixture(self):
        # dense check at small size: rho_AB = (P_code)/2^k ... equivalently
        # the reduced state has entropy 1 and commutes with the stabilizers
        st = bell_pairs_state(4)
        cs = inject_t(st, 1)
        ext = extend_with_reference(cs)
        vec = dense.statevector(ext)
        rho = dense.reduced_density_matrix(vec, set(range(4)))
        assert abs(dense.entropy_vn(rho) - 1) < 1e-9
        # projector onto code space: (1+g)/2 products, dimension 2
        proj = np.eye(16, dtype=complex)
        for g in cs.stabilizers:
            mat = np.zeros((16, 16), dtype=complex)
            for col in range(16):
                e = np.zeros(16, dtype=complex)
                e[col] = 1
                mat[:, col] = dense.apply_pauli(e, g)
            proj = proj @ (np.eye(16) + mat) / 2
        assert np.allclose(rho, proj / 2, atol=1e-9)


class TestSnapshotFormat:
    def test_round_trip(self):
        cs = inject_t(bell_pairs_state(6), 2)
        text = dumps_codestate(cs)
        assert loads_codestate(text) == cs
        assert text.splitlines()[0] == "n=6 k=7 logicals=2 site=2"
