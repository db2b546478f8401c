"""Single-qubit magic injection and the resulting dynamically generated code.

Applying T on qubit j of a pure stabilizer state splits off one generator:
T = alpha*1 + beta*Z_j, so the gate acts nontrivially only when Z_j
anticommutes with at least one stabilizer.  After gauge fixing, the state
carries logical operators logical_x = Z_j and logical_z = s1 (the unique
anticommuting generator) over the remaining L-1 stabilizers, with the
magic sitting in the fixed coefficient pair (1/sqrt2, -1/sqrt2) on the
(logical_z, logical_y) axes.  logical_y is always i * logical_x * logical_z.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .pauli import PauliString, format_pauli, parse_pauli, rank_gf2
from .tableau import CliffordGate, StabilizerState, conjugate_row, conjugate_rows

AMPLITUDE_PAIR = (2 ** -0.5, -(2 ** -0.5))

Circuit = Sequence[tuple[CliffordGate, Sequence[int]]]


class NoMagicInjected(Exception):
    """The non-Clifford gate acted as a phase: no stabilizer anticommutes."""


@dataclass(frozen=True)
class CodeState:
    """One logical qubit worth of magic tracked through its generators."""

    n: int
    logical_x: PauliString
    logical_z: PauliString
    stabilizers: tuple[PauliString, ...]
    injection_site: int
    amplitude_pair: tuple[float, float] = AMPLITUDE_PAIR

    @property
    def logical_y(self) -> PauliString:
        p = self.logical_x * self.logical_z
        return PauliString(self.n, p.x, p.z, p.phase + 1)

    def check(self) -> None:
        if self.logical_x.commutes_with(self.logical_z):
            raise ValueError("logical pair must anticommute")
        for g in self.stabilizers:
            if not g.is_hermitian():
                raise ValueError("non-Hermitian stabilizer")
            if not (self.logical_x.commutes_with(g) and self.logical_z.commutes_with(g)):
                raise ValueError("logicals must commute with every stabilizer")
        for i in range(len(self.stabilizers)):
            for j in range(i + 1, len(self.stabilizers)):
                if not self.stabilizers[i].commutes_with(self.stabilizers[j]):
                    raise ValueError("stabilizers must pairwise commute")
        rows = [self.logical_x.vec, self.logical_z.vec] + [g.vec for g in self.stabilizers]
        if rank_gf2(rows) != len(rows):
            raise ValueError("logicals and stabilizers must be independent")


def inject_t(state: StabilizerState, site: int) -> CodeState:
    """Gauge-fix the generators of a pure state against Z_site.

    The first anticommuting generator (in stored order) becomes logical_z;
    the others are multiplied by it where needed so they all commute with
    Z_site.  Raises NoMagicInjected when Z_site commutes with everything.
    """
    if not state.is_pure:
        raise ValueError("magic injection needs a pure state")
    if not 0 <= site < state.n:
        raise ValueError(f"site {site} out of range")
    z_site = PauliString.single(state.n, site, "Z")
    return _gauge_fix(state, z_site, site)


def _gauge_fix(state: StabilizerState, pauli_part: PauliString, site: int) -> CodeState:
    anti = [i for i, g in enumerate(state.generators) if not g.commutes_with(pauli_part)]
    if not anti:
        raise NoMagicInjected(
            f"the gate's Pauli part commutes with all stabilizers (site {site})"
        )
    s1 = state.generators[anti[0]]
    stabs = []
    for i, g in enumerate(state.generators):
        if i == anti[0]:
            continue
        stabs.append(g if g.commutes_with(pauli_part) else g * s1)
    return CodeState(
        n=state.n,
        logical_x=pauli_part,
        logical_z=s1,
        stabilizers=tuple(stabs),
        injection_site=site,
    )


def apply_clifford(cs: CodeState, gate: CliffordGate, sites: Sequence[int]) -> CodeState:
    """Conjugate logicals and stabilizers; the code structure is preserved."""
    if gate.arity != len(sites):
        raise ValueError("sites must match gate arity")
    for q in sites:
        if not 0 <= q < cs.n:
            raise ValueError(f"site {q} out of range")
    rows = conjugate_rows((cs.logical_x, cs.logical_z) + cs.stabilizers, gate, sites)
    return replace(
        cs,
        logical_x=rows[0],
        logical_z=rows[1],
        stabilizers=tuple(rows[2:]),
    )


def apply_clifford_circuit(cs: CodeState, circuit: Circuit) -> CodeState:
    for gate, sites in circuit:
        cs = apply_clifford(cs, gate, sites)
    return cs


def build_interplay_state(
    u_circuit: Circuit,
    v_circuit: Circuit,
    psi0: StabilizerState,
    site: int,
) -> CodeState:
    """Code state of (U T U^dag) V |psi0>.

    The gate's Pauli part Z_site is spread through u_circuit while psi0 is
    entangled by v_circuit; injection is then gauge-fixed exactly as for
    the plain doped circuit.  Raises NoMagicInjected on the post-selected
    failure case.
    """
    if not psi0.is_pure:
        raise ValueError("interplay construction needs a pure initial state")
    z_tilde = PauliString.single(psi0.n, site, "Z")
    for gate, sites in u_circuit:
        z_tilde = conjugate_row(z_tilde, gate, sites)
    evolved = psi0
    for gate, sites in v_circuit:
        evolved = StabilizerState(
            evolved.n, tuple(conjugate_rows(evolved.generators, gate, sites))
        )
    return _gauge_fix(evolved, z_tilde, site)


def extend_with_reference(cs: CodeState) -> StabilizerState:
    """Pure (L+1)-qubit state with a reference qubit R at index L.

    Generators are {logical_x * X_R, logical_z * Z_R} plus the stabilizers;
    tracing R leaves the uniform mixture over the code space.
    """
    n = cs.n
    xr = PauliString.single(n + 1, n, "X")
    zr = PauliString.single(n + 1, n, "Z")

    def lift(p: PauliString) -> PauliString:
        return PauliString(n + 1, p.x, p.z, p.phase)

    gens = [lift(cs.logical_x) * xr, lift(cs.logical_z) * zr]
    gens += [lift(g) for g in cs.stabilizers]
    return StabilizerState(n + 1, tuple(gens))


# -- snapshot format -------------------------------------------------------


def dumps_codestate(cs: CodeState) -> str:
    lines = [f"n={cs.n} k={2 + len(cs.stabilizers)} logicals=2 site={cs.injection_site}"]
    lines.append(format_pauli(cs.logical_x))
    lines.append(format_pauli(cs.logical_z))
    lines += [format_pauli(g) for g in cs.stabilizers]
    return "\n".join(lines) + "\n"


def loads_codestate(text: str) -> CodeState:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    header = dict(tok.split("=") for tok in lines[0].split())
    n = int(header["n"])
    k = int(header["k"])
    rows = [parse_pauli(ln) for ln in lines[1 : 1 + k]]
    if len(rows) != k:
        raise ValueError("row count does not match header")
    cs = CodeState(
        n=n,
        logical_x=rows[0],
        logical_z=rows[1],
        stabilizers=tuple(rows[2:]),
        injection_site=int(header["site"]),
    )
    cs.check()
    return cs


def dense_state(cs: CodeState):
    """Statevector reconstructed from the generator algebra alone.

    rho = (1 + (logical_z - logical_y)/sqrt2)/2 * prod (1+g)/2 is a rank-1
    projector; applying it to a basis state and normalizing recovers the
    state up to a fixed global phase.
    """
    import numpy as np

    from . import dense as _dense

    _dense._check_cap(cs.n)
    dim = 1 << cs.n
    ly = cs.logical_y
    for seed in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[seed] = 1.0
        for g in cs.stabilizers:
            v = 0.5 * (v + _dense.apply_pauli(v, g))
        v = 0.5 * (
            v
            + (_dense.apply_pauli(v, cs.logical_z) - _dense.apply_pauli(v, ly))
            / np.sqrt(2.0)
        )
        norm = np.linalg.norm(v)
        if norm > 1e-9:
            return _dense._fix_phase(v / norm)
    raise ValueError("projector annihilated every basis state")
