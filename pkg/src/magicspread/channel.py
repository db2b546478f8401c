"""Late-time delocalization diagnostics through an erasure channel.

The code state is lifted to a pure state with one reference qubit R; for a
random erased subset B the coherent information I_c = S(A) - S(AR) of the
surviving side says whether the logical qubit (equivalently, the magic)
got through: I_c = 1 preserved, I_c < 1 lost.  No state update is needed,
both entropies are subgroup ranks of the lifted pure state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .codestate import CodeState, extend_with_reference, inject_t
from .pauli import PauliString, qubits_mask
from .tableau import StabilizerState, entropy, measure_pauli, random_clifford_images


@dataclass(frozen=True)
class ErasureResult:
    erased: frozenset[int]
    coherent_info: int

    @property
    def preserved(self) -> bool:
        return self.coherent_info == 1


def erase_and_coherent_info(
    ext: StabilizerState, b_set: Iterable[int], rng: np.random.Generator | None = None,
    channel: str = "erase",
) -> ErasureResult:
    """Coherent information after losing ``b_set`` of the physical qubits.

    The reference qubit is the last index of the lifted state and may not
    be erased.  ``channel='measure'`` instead measures every erased qubit
    in the Z basis (exploratory variant; needs an rng).
    """
    n_phys = ext.n - 1
    b_mask = qubits_mask(b_set)
    if b_mask >> n_phys:
        raise ValueError("the reference qubit cannot be erased")
    if channel == "measure":
        if rng is None:
            raise ValueError("the measurement variant needs an rng")
        state = ext
        for q in range(n_phys):
            if (b_mask >> q) & 1:
                _, state = measure_pauli(state, PauliString.single(ext.n, q, "Z"), rng)
        ext = state
    elif channel != "erase":
        raise ValueError("channel must be 'erase' or 'measure'")
    a_mask = ((1 << n_phys) - 1) & ~b_mask
    r_bit = 1 << n_phys
    s_a = entropy(ext, a_mask)
    s_ar = entropy(ext, a_mask | r_bit)
    ic = s_a - s_ar
    if ic not in (-1, 0, 1):
        raise AssertionError(f"coherent information {ic} outside [-1, 1]")
    return ErasureResult(frozenset(q for q in range(n_phys) if (b_mask >> q) & 1), ic)


@dataclass(frozen=True)
class CapacityEstimate:
    f: float
    n_erased: int
    c_tilde: float
    stderr: float
    n_samples: int


def capacity_proxy(
    cs: CodeState,
    f: float,
    n_samples: int,
    rng: np.random.Generator,
    channel: str = "erase",
) -> CapacityEstimate:
    """Fraction of random |B| = round(fL) erasures that preserve the unit.

    One circuit instance, many subset samples; the error bar is the
    binomial standard error.
    """
    if not 0.0 <= f <= 1.0:
        raise ValueError("f must lie in [0, 1]")
    if n_samples < 1:
        raise ValueError("need at least one sample")
    ext = extend_with_reference(cs)
    n_erased = round(f * cs.n)  # banker's rounding on the half-integers
    hits = 0
    for _ in range(n_samples):
        b = rng.choice(cs.n, size=n_erased, replace=False) if n_erased else []
        if erase_and_coherent_info(ext, b, rng=rng, channel=channel).preserved:
            hits += 1
    c = hits / n_samples
    stderr = float(np.sqrt(c * (1.0 - c) / n_samples))
    return CapacityEstimate(f, n_erased, c, stderr, n_samples)


def global_random_code(L: int, rng: np.random.Generator) -> CodeState:
    """One magic unit scrambled by a uniform global Clifford.

    Injects into |+>|0...0> (always succeeds) and conjugates every
    generator through a uniform L-qubit Clifford element, giving the
    random-code baseline for the capacity curves.
    """
    if L < 2:
        raise ValueError("L must be at least 2")
    gens = [PauliString.single(L, 0, "X")]
    gens += [PauliString.single(L, q, "Z") for q in range(1, L)]
    cs = inject_t(StabilizerState(L, tuple(gens)), 0)
    images = random_clifford_images(rng, L)

    def conj(p: PauliString) -> PauliString:
        out = PauliString(L, 0, 0, p.phase)
        for q in range(L):
            if (p.x >> q) & 1:
                out = out * images[2 * q]
        for q in range(L):
            if (p.z >> q) & 1:
                out = out * images[2 * q + 1]
        return out

    return CodeState(
        n=L,
        logical_x=conj(cs.logical_x),
        logical_z=conj(cs.logical_z),
        stabilizers=tuple(conj(g) for g in cs.stabilizers),
        injection_site=cs.injection_site,
    )
