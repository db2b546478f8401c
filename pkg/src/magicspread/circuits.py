"""Brickwork circuit ensembles, analytic velocities, and per-realization runs.

One time step is one brickwork layer.  Odd layers (t = 1, 3, ...) pair
qubits (1,2)(3,4)... and add the seam pair (L-1, 0) under periodic
boundaries; even layers pair (0,1)(2,3)..., aligned with the Bell-pair
initial state.  Each slot is independently the identity with probability
p, otherwise a gate from the chosen family.

Randomness: every realization owns a generator spawned from the master
seed and the realization index, so results are bit-identical for a given
(spec, index) regardless of scheduling.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .codestate import CodeState, NoMagicInjected, _gauge_fix, apply_clifford, inject_t
from .lengthscales import fleom, lml, minimal_intervals
from .magic import IntervalMagicCache, full_system_is_full
from .pauli import PauliString, format_pauli
from .tableau import (
    SDKI_F,
    CliffordGate,
    StabilizerState,
    conjugate_row,
    conjugate_rows,
    sample_clifford_1q,
    sample_clifford_2q,
    tensor,
)

ENSEMBLES = ("random_clifford", "sdki_r", "sdki_f")
BOUNDARIES = ("open", "periodic")
INITIAL_STATES = ("bell_pairs", "random_product", "all_zero")


@dataclass(frozen=True)
class CircuitSpec:
    L: int
    boundary: str = "open"
    ensemble: str = "random_clifford"
    p: float = 0.0
    t_max: int = 0
    seed: int = 0
    initial: str = "bell_pairs"
    injection_site: Optional[int] = None

    def __post_init__(self):
        if self.L < 2:
            raise ValueError("L must be at least 2")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"ensemble must be one of {ENSEMBLES}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.initial not in INITIAL_STATES:
            raise ValueError(f"initial must be one of {INITIAL_STATES}")
        if self.injection_site is None:
            object.__setattr__(self, "injection_site", self.L // 2 - 1)
        if not 0 <= self.injection_site < self.L:
            raise ValueError("injection_site out of range")
        if self.L % 4 != 2:
            warnings.warn(
                f"L={self.L}: the centered default scenario wants L = 2 (mod 4) "
                "so a Bell pair straddles the central bond",
                stacklevel=2,
            )

    @property
    def periodic(self) -> bool:
        return self.boundary == "periodic"

    def as_dict(self) -> dict:
        return {
            "L": self.L,
            "boundary": self.boundary,
            "ensemble": self.ensemble,
            "p": self.p,
            "t_max": self.t_max,
            "seed": self.seed,
            "initial": self.initial,
            "injection_site": self.injection_site,
        }


@dataclass
class TimeSeriesRecord:
    t: int
    lml: Optional[int] = None
    fleom: Optional[int] = None
    mlmi_widths: Optional[list[int]] = None
    full_state_class: Optional[str] = None
    logical_z: Optional[str] = None
    logical_y: Optional[str] = None


@dataclass
class RealizationResult:
    realization: int
    rejected: bool
    records: list[TimeSeriesRecord] = field(default_factory=list)


def layer_pairs(L: int, t: int, periodic: bool) -> list[tuple[int, int]]:
    """Site pairs of brickwork layer t (t >= 1)."""
    if t < 1:
        raise ValueError("layers are counted from t = 1")
    if t % 2 == 0:
        return [(i, i + 1) for i in range(0, L - 1, 2)]
    pairs = [(i, i + 1) for i in range(1, L - 1, 2)]
    if periodic:
        pairs.append((L - 1, 0))
    return pairs


def _ensemble_gate(ensemble: str, rng: np.random.Generator) -> CliffordGate:
    if ensemble == "random_clifford":
        return sample_clifford_2q(rng)
    if ensemble == "sdki_f":
        return SDKI_F
    if ensemble == "sdki_r":
        v1 = sample_clifford_1q(rng)
        v2 = sample_clifford_1q(rng)
        return SDKI_F.then(tensor(v1, v2))
    raise ValueError(f"unknown ensemble {ensemble!r}")


def brickwork_layer(
    spec: CircuitSpec, t: int, rng: np.random.Generator
) -> list[tuple[CliffordGate, tuple[int, int]]]:
    """Gates of layer t; identity slots are omitted from the list."""
    out = []
    for pair in layer_pairs(spec.L, t, spec.periodic):
        if spec.p > 0.0 and rng.random() < spec.p:
            continue
        out.append((_ensemble_gate(spec.ensemble, rng), pair))
    return out


# -- analytic velocities ----------------------------------------------------


def front_reversal_rates(p: float) -> tuple[float, float]:
    """Per-step direction-reversal probabilities of an operator end in the
    doped random-Clifford brickwork (outward-moving and inward-moving)."""
    return p + (1.0 - p) / 5.0, p + 4.0 * (1.0 - p) / 5.0


def v_butterfly(p: float, ensemble: str = "random_clifford") -> float:
    """Closed-form mean operator-front speed for the gate family."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if ensemble == "random_clifford":
        a_plus, a_minus = front_reversal_rates(p)
        return (a_minus - a_plus) / (a_minus + a_plus)
    if ensemble == "sdki_r":
        if p == 1.0:
            return 0.0
        return 1.0 / (1.0 + (8.0 / 3.0) * p / (1.0 - p))
    raise ValueError(f"no closed-form front speed for ensemble {ensemble!r}")


def v_entanglement(v_b: float) -> float:
    """Entanglement growth rate implied by the front speed."""
    if not 0.0 <= v_b < 1.0:
        raise ValueError("v_b must lie in [0, 1)")
    if v_b == 0.0:
        return 0.0
    return (math.log(1.0 - v_b) + math.log(1.0 + v_b)) / (
        math.log(1.0 - v_b) - math.log(1.0 + v_b)
    )


# -- initial states ----------------------------------------------------------


def initial_state(kind: str, L: int, rng: np.random.Generator | None = None) -> StabilizerState:
    if kind == "all_zero":
        return StabilizerState.all_zero(L)
    if kind == "bell_pairs":
        if L % 2:
            raise ValueError("bell_pairs needs even L")
        gens = []
        for i in range(0, L, 2):
            x = (1 << i) | (1 << (i + 1))
            gens.append(PauliString(L, x, 0, 0))
            gens.append(PauliString(L, 0, x, 0))
        return StabilizerState(L, tuple(gens))
    if kind == "random_product":
        if rng is None:
            raise ValueError("random_product needs a generator")
        gens = []
        for q in range(L):
            kind_q = ("X", "Y", "Z")[int(rng.integers(0, 3))]
            sign = 1 if int(rng.integers(0, 2)) == 0 else -1
            gens.append(PauliString.single(L, q, kind_q, sign))
        return StabilizerState(L, tuple(gens))
    raise ValueError(f"unknown initial state {kind!r}")


# -- per-realization run ------------------------------------------------------


def realization_rng(seed: int, realization: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(realization, stream))
    )


def _measure(
    cs: CodeState, spec: CircuitSpec, t: int, observables: frozenset[str]
) -> TimeSeriesRecord:
    rec = TimeSeriesRecord(t=t)
    needs_cache = observables & {"lml", "fleom", "mlmi_widths"}
    cache = IntervalMagicCache(cs) if needs_cache else None
    # length scales live on the fixed qubit labeling for either boundary
    if "lml" in observables:
        rec.lml = lml(cs, cache=cache)
    if observables & {"fleom", "mlmi_widths"}:
        m = minimal_intervals(cs, cache=cache)
        if "fleom" in observables:
            rec.fleom = fleom(m)
        if "mlmi_widths" in observables:
            rec.mlmi_widths = m.widths()
    if "full_class" in observables:
        rec.full_state_class = "FULL" if full_system_is_full(cs) else "BROKEN"
    if "logicals" in observables:
        rec.logical_z = format_pauli(cs.logical_z)
        rec.logical_y = format_pauli(cs.logical_y)
    return rec


DEFAULT_OBSERVABLES = frozenset({"lml", "fleom", "mlmi_widths"})


def run_realization(
    spec: CircuitSpec,
    observables: Iterable[str] = DEFAULT_OBSERVABLES,
    rng: np.random.Generator | None = None,
    realization: int = 0,
) -> RealizationResult:
    """Evolve one doped circuit realization, recording observables at
    t = 0 and after every layer.  A failed injection marks the realization
    rejected instead of raising."""
    observables = frozenset(observables)
    if rng is None:
        rng = realization_rng(spec.seed, realization)
    psi0 = initial_state(spec.initial, spec.L, rng)
    try:
        cs = inject_t(psi0, spec.injection_site)
    except NoMagicInjected:
        return RealizationResult(realization, rejected=True)
    result = RealizationResult(realization, rejected=False)
    result.records.append(_measure(cs, spec, 0, observables))
    for t in range(1, spec.t_max + 1):
        for gate, pair in brickwork_layer(spec, t, rng):
            cs = apply_clifford(cs, gate, pair)
        result.records.append(_measure(cs, spec, t, observables))
    return result


# -- split-evolution (operator vs entanglement) runs --------------------------

INTERPLAY_CASES = ("entanglement_only", "operator_only", "independent", "equal")


def run_interplay_realization(
    spec: CircuitSpec,
    case: str,
    realization: int = 0,
    observables: Iterable[str] = frozenset({"fleom"}),
) -> RealizationResult:
    """Evolve (U T U^dag) V |psi0> layer by layer with equal depths.

    The four cases choose U and V as identity/brickwork combinations; for
    'independent' the two circuits draw from independent streams, for
    'equal' they share every layer.  Injection is gauge-fixed afresh at
    each depth; a failed injection leaves that record with empty fields
    rather than rejecting the whole realization.
    """
    if case not in INTERPLAY_CASES:
        raise ValueError(f"case must be one of {INTERPLAY_CASES}")
    observables = frozenset(observables)
    rng_u = realization_rng(spec.seed, realization, stream=1)
    rng_v = realization_rng(spec.seed, realization, stream=2)
    rng_init = realization_rng(spec.seed, realization, stream=3)
    psi = initial_state(spec.initial, spec.L, rng_init)
    z_tilde = PauliString.single(spec.L, spec.injection_site, "Z")
    result = RealizationResult(realization, rejected=False)
    gens = list(psi.generators)
    for t in range(0, spec.t_max + 1):
        if t >= 1:
            if case in ("operator_only", "independent"):
                u_layer = brickwork_layer(spec, t, rng_u)
            elif case == "equal":
                u_layer = brickwork_layer(spec, t, rng_u)
            else:
                u_layer = []
            if case in ("entanglement_only", "independent"):
                v_layer = brickwork_layer(spec, t, rng_v)
            elif case == "equal":
                v_layer = u_layer
            else:
                v_layer = []
            for gate, pair in u_layer:
                z_tilde = conjugate_row(z_tilde, gate, pair)
            for gate, pair in v_layer:
                gens = conjugate_rows(gens, gate, pair)
        try:
            cs = _gauge_fix(
                StabilizerState(spec.L, tuple(gens)), z_tilde, spec.injection_site
            )
        except NoMagicInjected:
            result.records.append(TimeSeriesRecord(t=t))
            continue
        result.records.append(_measure(cs, spec, t, observables))
    return result
