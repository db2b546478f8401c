"""Exact subsystem magic of a singly doped code state.

Three independent routes produce the same three-valued answer
{0, log2(6/5), log2(4/3)}:

* route 1 looks up the joint reducibility pattern of the two weighted
  logicals in the five-case table;
* route 2 splits the state into two pseudostabilizer operators (logical
  generator carrying weight sqrt(2)) and classifies each into one of four
  terminal normal-form shapes, each worth zero or half a unit;
* route 3 constructs the bipartite gauge explicitly: a generating set
  split into region-supported, complement-supported and straddling
  stabilizers, from which the Pauli spectrum shape (the magical-to-regular
  count ratio omega) follows.

The dense statevector oracle closes the loop at small sizes.

Reducibility of an operator p to a region is always relative to the
stabilizer group: does some p*g have support inside the region?  That is
one GF(2) linear solve.  For sweeps over contiguous intervals the module
also offers a per-state cache built on a two-sided (clipped) echelon
gauge, which answers every interval query by counting contained rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import log2
from typing import Iterable, Optional, Sequence

import numpy as np

from . import dense as _dense
from .codestate import CodeState, dense_state
from .pauli import (
    PauliString,
    as_mask,
    bits_of,
    parse_pauli,
    rank_gf2,
    reduce_support,
    solve_in_span,
)
from .tableau import (
    CNOT,
    ONE_QUBIT_CLIFFORDS,
    SQRT_X,
    X_GATE,
    Z_GATE,
    CliffordGate,
)


class NotExtractable(Exception):
    """No local Clifford on the region can distill the magic state."""


class MagicClass(Enum):
    ZERO = 0
    HALF = 1
    FULL = 2

    @property
    def bits(self) -> float:
        return _CLASS_BITS[self]

    @property
    def omega(self) -> int:
        return self.value


_CLASS_BITS = {
    MagicClass.ZERO: 0.0,
    MagicClass.HALF: log2(6.0 / 5.0),
    MagicClass.FULL: log2(4.0 / 3.0),
}

MAGIC_VALUES = tuple(sorted(_CLASS_BITS.values()))


def _region_masks(n: int, region: Iterable[int] | int) -> tuple[int, int]:
    mask = as_mask(region)
    full = (1 << n) - 1
    if mask & ~full:
        raise ValueError("region outside the system")
    return mask, full & ~mask


def _reducible(p: PauliString, gens: Sequence[PauliString], region_mask: int) -> bool:
    return reduce_support(p, gens, region_mask) is not None


@dataclass(frozen=True)
class ReducibilityFlags:
    """(to region, to complement) for each logical."""

    z: tuple[bool, bool]
    y: tuple[bool, bool]
    x: tuple[bool, bool]


def logical_flags(cs: CodeState, region: Iterable[int] | int) -> ReducibilityFlags:
    a_mask, b_mask = _region_masks(cs.n, region)
    gens = cs.stabilizers
    return ReducibilityFlags(
        z=(_reducible(cs.logical_z, gens, a_mask), _reducible(cs.logical_z, gens, b_mask)),
        y=(_reducible(cs.logical_y, gens, a_mask), _reducible(cs.logical_y, gens, b_mask)),
        x=(_reducible(cs.logical_x, gens, a_mask), _reducible(cs.logical_x, gens, b_mask)),
    )


def _case_from_flags(f: ReducibilityFlags) -> tuple[str, MagicClass]:
    za, zb = f.z
    ya, yb = f.y
    xa, xb = f.x
    if (za, zb, ya, yb) == (True, False, True, False):
        if not (xa and not xb):
            raise ValueError(f"inconsistent reducibility pattern {f}")
        return "i", MagicClass.FULL
    if (za, zb, ya, yb) == (False, True, False, True):
        if not (xb and not xa):
            raise ValueError(f"inconsistent reducibility pattern {f}")
        return "ii", MagicClass.ZERO
    if (za, zb, ya, yb) == (False, False, False, False):
        if not (xa and xb):
            raise ValueError(f"inconsistent reducibility pattern {f}")
        return "iii", MagicClass.ZERO
    if (za, zb, ya, yb) == (True, True, False, False):
        if xa or xb:
            raise ValueError(f"inconsistent reducibility pattern {f}")
        return "iv", MagicClass.HALF
    if (za, zb, ya, yb) == (False, False, True, True):
        if xa or xb:
            raise ValueError(f"inconsistent reducibility pattern {f}")
        return "v", MagicClass.HALF
    raise ValueError(f"reducibility pattern outside the five-case table: {f}")


def table_case(cs: CodeState, region: Iterable[int] | int) -> tuple[str, MagicClass]:
    """Case id (i..v) and subsystem magic class for the bipartition."""
    return _case_from_flags(logical_flags(cs, region))


def subsystem_magic_alg1(cs: CodeState, region: Iterable[int] | int) -> MagicClass:
    """Classify a region by the reducibility of the two weighted logicals."""
    return table_case(cs, region)[1]


def destroyable(cs: CodeState, region: Iterable[int] | int) -> bool:
    """True iff some logical representative fits inside the region, i.e.
    a single measurement there can collapse the state to a stabilizer one."""
    a_mask, _ = _region_masks(cs.n, region)
    return any(
        _reducible(p, cs.stabilizers, a_mask)
        for p in (cs.logical_x, cs.logical_y, cs.logical_z)
    )


# -- pseudostabilizer route (route 2) -----------------------------------


@dataclass(frozen=True)
class PseudoStabilizer:
    """Stabilizer-like operator whose logical generator carries weight
    beta != 1, which forbids multiplying the logical into a stabilizer."""

    logical: PauliString
    stabilizers: tuple[PauliString, ...]
    beta: float = 2 ** 0.5

    def __post_init__(self):
        if self.beta == 1:
            raise ValueError("beta must differ from 1")
        for g in self.stabilizers:
            if not self.logical.commutes_with(g):
                raise ValueError("logical must commute with the stabilizers")


@dataclass(frozen=True)
class Alg2Outcome:
    case: str  # 'i' | 'ii' | 'iii' | 'iv'
    contributes: bool
    logical_rep: PauliString  # terminal logical generator row
    partner: Optional[PauliString]  # straddling generator in case iv


def pseudostabilizers(cs: CodeState) -> tuple[PseudoStabilizer, PseudoStabilizer]:
    """The two weighted halves of the state, on the Z and -Y logicals."""
    return (
        PseudoStabilizer(cs.logical_z, cs.stabilizers),
        PseudoStabilizer(cs.logical_y.negate(), cs.stabilizers),
    )


def classify_pseudostabilizer_alg2(
    ps: PseudoStabilizer, region: Iterable[int] | int
) -> Alg2Outcome:
    """Terminal normal-form shape of one pseudostabilizer operator.

    The restricted multiplication rule (a stabilizer may be multiplied
    into the logical row, never the reverse) leaves four shapes:
    (i) the logical sits in a cross pair and dies under the partial trace;
    (ii) it reduces to a lone generator inside the region; (iii) same but
    on the complement; (iv) it reduces to either side, the two witnesses
    differing by a straddling stabilizer that cannot be shortened without
    the forbidden move.  Shapes (ii) and (iv) contribute half a unit.
    """
    n = ps.logical.n
    a_mask, b_mask = _region_masks(n, region)
    rep_a = reduce_support(ps.logical, ps.stabilizers, a_mask)
    rep_b = reduce_support(ps.logical, ps.stabilizers, b_mask)
    if rep_a is not None and rep_b is not None:
        return Alg2Outcome("iv", True, rep_a, rep_a * rep_b)
    if rep_a is not None:
        return Alg2Outcome("ii", True, rep_a, None)
    if rep_b is not None:
        return Alg2Outcome("iii", False, rep_b, None)
    return Alg2Outcome("i", False, ps.logical, None)


def subsystem_magic_alg2(cs: CodeState, region: Iterable[int] | int) -> MagicClass:
    """Combine the half-unit contributions of the two pseudostabilizers."""
    ps_z, ps_my = pseudostabilizers(cs)
    halves = int(classify_pseudostabilizer_alg2(ps_z, region).contributes)
    halves += int(classify_pseudostabilizer_alg2(ps_my, region).contributes)
    return MagicClass(halves)


# -- explicit bipartite gauge (route 3) ----------------------------------


@dataclass(frozen=True)
class PauliSpectrumSummary:
    """Counts of the two nonzero plateau values in the reduced spectrum."""

    n_regular: int
    n_magical: int

    @property
    def omega(self) -> int:
        if self.n_magical % self.n_regular:
            raise ValueError("magical count must be a multiple of the regular count")
        return self.n_magical // self.n_regular

    @property
    def magic_class(self) -> MagicClass:
        return MagicClass(self.omega)


@dataclass(frozen=True)
class BmgDecomposition:
    a_list: tuple[PauliString, ...]  # reducible to the region, not out of it
    b_list: tuple[PauliString, ...]  # the mirror image
    h_list: tuple[PauliString, ...]  # reducible to neither side
    case_id: str
    flags: ReducibilityFlags

    @property
    def spectrum(self) -> PauliSpectrumSummary:
        n_reg = 1 << len(self.a_list)
        omega = int(self.flags.z[0]) + int(self.flags.y[0])
        return PauliSpectrumSummary(n_reg, omega * n_reg)

    @property
    def magic_class(self) -> MagicClass:
        return self.spectrum.magic_class

    def check(self, region_mask: int, n: int) -> None:
        full = (1 << n) - 1
        comp = full & ~region_mask
        all_rows = self.a_list + self.b_list + self.h_list
        for g in self.a_list:
            if g.support_mask() & ~region_mask:
                raise ValueError("region stabilizer leaks outside the region")
        for g in self.b_list:
            if g.support_mask() & ~comp:
                raise ValueError("complement stabilizer leaks outside")
        for idx, g in enumerate(all_rows):
            others = [h for j, h in enumerate(all_rows) if j != idx]
            to_a = reduce_support(g, others, region_mask) is not None
            to_b = reduce_support(g, others, comp) is not None
            kind = "a" if idx < len(self.a_list) else (
                "b" if idx < len(self.a_list) + len(self.b_list) else "h"
            )
            want = {"a": (True, False), "b": (False, True), "h": (False, False)}[kind]
            if (to_a, to_b) != want:
                raise ValueError(f"{kind}-row has reducibility {(to_a, to_b)}")


def _supported_subgroup_basis(
    gens: Sequence[PauliString], region_mask: int, n: int
) -> list[PauliString]:
    """Basis (as phase-tracked products of gens) of the subgroup with
    support inside the region: the kernel of restriction to the outside."""
    outside = ((1 << n) - 1) & ~region_mask
    cols = outside | (outside << n)
    echelon: dict[int, tuple[int, int]] = {}
    kernel_masks = []
    for i, g in enumerate(gens):
        row = g.vec & cols
        combo = 1 << i
        while row:
            col = (row & -row).bit_length() - 1
            if col not in echelon:
                echelon[col] = (row, combo)
                break
            erow, ecombo = echelon[col]
            row ^= erow
            combo ^= ecombo
        else:
            kernel_masks.append(combo)
    out = []
    for mask in kernel_masks:
        acc = PauliString.identity(n)
        for i in bits_of(mask):
            acc = acc * gens[i]
        out.append(acc)
    return out


def compute_bmg_alg3(cs: CodeState, region: Iterable[int] | int) -> BmgDecomposition:
    """Explicit bipartite gauge: bases of the two one-sided subgroups plus
    a completion of straddling generators, with the table case id."""
    a_mask, b_mask = _region_masks(cs.n, region)
    gens = cs.stabilizers
    a_list = _supported_subgroup_basis(gens, a_mask, cs.n)
    b_list = _supported_subgroup_basis(gens, b_mask, cs.n)
    span: dict[int, int] = {}

    def _absorb(vec: int) -> bool:
        while vec:
            col = (vec & -vec).bit_length() - 1
            if col not in span:
                span[col] = vec
                return True
            vec ^= span[col]
        return False

    for g in a_list + b_list:
        if not _absorb(g.vec):
            raise AssertionError("one-sided bases overlap")
    h_list = [g for g in gens if _absorb(g.vec)]
    if len(a_list) + len(b_list) + len(h_list) != len(gens):
        raise AssertionError("gauge does not span the stabilizer group")
    flags = logical_flags(cs, a_mask)
    case_id, _ = _case_from_flags(flags)
    return BmgDecomposition(tuple(a_list), tuple(b_list), tuple(h_list), case_id, flags)


def pauli_spectrum_summary(cs: CodeState, region: Iterable[int] | int) -> PauliSpectrumSummary:
    """Plateau counts of the reduced Pauli spectrum: 2^(dim of the
    region-supported stabilizer subgroup) regular entries and omega times
    that many magical ones, omega counting the region-reducible logicals."""
    a_mask, b_mask = _region_masks(cs.n, region)
    outside_cols = b_mask | (b_mask << cs.n)
    restricted = [g.vec & outside_cols for g in cs.stabilizers]
    dim_a = len(cs.stabilizers) - rank_gf2(restricted)
    omega = int(_reducible(cs.logical_z, cs.stabilizers, a_mask)) + int(
        _reducible(cs.logical_y, cs.stabilizers, a_mask)
    )
    n_reg = 1 << dim_a
    return PauliSpectrumSummary(n_reg, omega * n_reg)


def sre2_from_spectrum(s: PauliSpectrumSummary) -> float:
    """-log2(sum xi^2 / sum xi) for the two-plateau spectrum; the overall
    scale cancels, leaving a function of omega alone."""
    reg, mag = s.n_regular, s.n_magical
    num = reg + mag / 4.0
    den = reg + mag / 2.0
    return -log2(num / den)


def subsystem_magic_alg3(cs: CodeState, region: Iterable[int] | int) -> MagicClass:
    return compute_bmg_alg3(cs, region).magic_class


# -- dense oracle ---------------------------------------------------------


def dense_oracle_sre2(statevector: np.ndarray, region: Iterable[int] | int) -> float:
    """Literal normalized 2-SRE of the reduced state by full enumeration."""
    return _dense.dense_oracle_sre2(statevector, region)


def dense_oracle_spectrum(statevector: np.ndarray, region: Iterable[int] | int) -> np.ndarray:
    return _dense.dense_pauli_spectrum(statevector, region)


# -- unitary extraction witness ------------------------------------------


@lru_cache(maxsize=None)
def _rotation_mapping(src_letter: str, dst_letter: str) -> CliffordGate:
    src = parse_pauli("+" + src_letter)
    dst = parse_pauli("+" + dst_letter)
    for g in ONE_QUBIT_CLIFFORDS:
        if g.conjugate_local(src) == dst:
            return g
    raise AssertionError(f"no single-qubit Clifford maps {src_letter} to {dst_letter}")


@lru_cache(maxsize=None)
def _final_t_rotation() -> CliffordGate:
    """Z -> X and Y -> -Y, turning the (Z - Y)/sqrt2 axis into (X + Y)/sqrt2."""
    z, y = parse_pauli("+Z"), parse_pauli("+Y")
    for g in ONE_QUBIT_CLIFFORDS:
        if g.conjugate_local(z) == parse_pauli("+X") and g.conjugate_local(y) == parse_pauli("-Y"):
            return g
    raise AssertionError("required single-qubit rotation missing")


def extraction_witness(
    cs: CodeState, region: Iterable[int] | int
) -> tuple[list[tuple[CliffordGate, tuple[int, ...]]], int]:
    """Local Clifford circuit on the region mapping the state to the magic
    state on one designated region qubit times a stabilizer state.

    Exists iff the region holds the full unit; raises NotExtractable
    otherwise.  The circuit sends region-supported representatives of the
    two logicals to +X and +Z on the designated qubit, then rotates that
    qubit's (Z, -Y) magic axis onto (X, Y).
    """
    a_mask, _ = _region_masks(cs.n, region)
    if subsystem_magic_alg1(cs, a_mask) is not MagicClass.FULL:
        raise NotExtractable("region does not hold the full magic unit")
    work_x = reduce_support(cs.logical_x, cs.stabilizers, a_mask)
    work_z = reduce_support(cs.logical_z, cs.stabilizers, a_mask)
    assert work_x is not None and work_z is not None
    circuit: list[tuple[CliffordGate, tuple[int, ...]]] = []

    def emit(gate: CliffordGate, sites: tuple[int, ...]):
        nonlocal work_x, work_z
        circuit.append((gate, sites))
        from .tableau import conjugate_row

        work_x = conjugate_row(work_x, gate, sites)
        work_z = conjugate_row(work_z, gate, sites)

    for q in sorted(work_x.support()):
        letter = work_x.letter(q)
        if letter != "X":
            emit(_rotation_mapping(letter, "X"), (q,))
    xs = sorted(work_x.support())
    a = xs[0]
    for q in xs[1:]:
        emit(CNOT, (a, q))
    assert work_x.support() == {a}

    for q in sorted(work_z.support()):
        letter = work_z.letter(q)
        if q == a:
            if letter == "Y":
                emit(SQRT_X, (q,))  # X -> X, Y -> Z
        elif letter != "Z":
            emit(_rotation_mapping(letter, "Z"), (q,))
    assert work_z.letter(a) == "Z"
    for q in sorted(work_z.support() - {a}):
        emit(CNOT, (q, a))
    assert work_z.support() == {a}

    if work_x.sign() == -1:
        emit(Z_GATE, (a,))
    if work_z.sign() == -1:
        emit(X_GATE, (a,))
    assert work_x == PauliString.single(cs.n, a, "X")
    assert work_z == PauliString.single(cs.n, a, "Z")
    emit(_final_t_rotation(), (a,))
    return circuit, a


def witness_fidelity(
    cs: CodeState,
    circuit: Sequence[tuple[CliffordGate, Sequence[int]]],
    qubit: int,
) -> tuple[float, float]:
    """Dense verification of a witness circuit.

    Returns (fidelity of the designated qubit with the magic state,
    residual 2-SRE of the complement factor conditioned on it).
    """
    vec = dense_state(cs)
    vec = _dense.apply_circuit(vec, circuit)
    rho = _dense.reduced_density_matrix(vec, {qubit})
    tvec = np.array([1.0, np.exp(1j * np.pi / 4)]) / np.sqrt(2.0)
    fid = float((tvec.conj() @ rho @ tvec).real)
    if cs.n == 1:
        return fid, 0.0
    # conditional complement state
    n = cs.n
    t = vec.reshape([2] * n)
    axis = n - 1 - qubit
    t = np.moveaxis(t, axis, 0)
    rest = (tvec.conj()[0] * t[0] + tvec.conj()[1] * t[1]).reshape(-1)
    norm = np.linalg.norm(rest)
    if norm < 1e-12:
        return fid, float("nan")
    rest = rest / norm
    resid = _dense.dense_oracle_sre2(rest, (1 << (n - 1)) - 1)
    return fid, resid


# -- fast contiguous-interval classification -----------------------------


def clipped_gauge(vecs: Sequence[int], n: int) -> list[int]:
    """Two-sided echelon gauge of independent symplectic rows.

    After the left and right sweeps, at most two rows start (end) on any
    qubit, with independent symbols there; the subgroup supported inside
    any interval is then generated exactly by the rows it contains.
    """
    rows = list(vecs)
    zmask = (1 << n) - 1

    def sym(row: int, q: int) -> int:
        return ((row >> q) & 1) | ((((row >> n) >> q) & 1) << 1)

    # left sweep: row echelon on (x,z) symbol pairs per qubit
    r = 0
    for q in range(n):
        if r >= len(rows):
            break
        pivots = []
        for i in range(r, len(rows)):
            s = sym(rows[i], q)
            if s and all(s != sym(rows[p], q) for p in pivots):
                pivots.append(i)
                if len(pivots) == 2:
                    break
        for k, i in enumerate(pivots):
            rows[r + k], rows[i] = rows[i], rows[r + k]
        if not pivots:
            continue
        p0 = rows[r]
        p1 = rows[r + 1] if len(pivots) == 2 else None
        s0 = sym(p0, q)
        s1 = sym(p1, q) if p1 is not None else 0
        for i in range(r + len(pivots), len(rows)):
            s = sym(rows[i], q)
            if not s:
                continue
            if s == s0:
                rows[i] ^= p0
            elif s == s1:
                rows[i] ^= p1
            else:
                rows[i] ^= p0 ^ p1 if p1 is not None else 0
                if sym(rows[i], q):
                    raise AssertionError("left sweep could not clear a symbol")
        r += len(pivots)

    def left_end(row: int) -> int:
        support = (row | (row >> n)) & zmask
        return (support & -support).bit_length() - 1

    def right_end(row: int) -> int:
        support = (row | (row >> n)) & zmask
        return support.bit_length() - 1

    # right sweep: keep at most two independent end symbols per qubit.
    # Every reduction strictly shrinks one row's right endpoint, and the
    # shrunken row is always the one with the smallest left endpoint among
    # those combined, so leading symbols (the left structure) survive.
    buckets: list[list[int]] = [[] for _ in range(n)]
    for i, row in enumerate(rows):
        buckets[right_end(row)].append(i)
    for q in range(n - 1, -1, -1):
        basis: dict[int, int] = {}  # end symbol -> seated row index
        queue = buckets[q]
        k = 0
        while k < len(queue):
            i = queue[k]
            k += 1
            if right_end(rows[i]) != q:
                continue  # stale entry: the row dropped to a later bucket
            s = sym(rows[i], q)
            if basis.get(s) == i:
                continue  # duplicate entry of a seated row
            if s in basis:
                j = basis[s]
                if left_end(rows[i]) <= left_end(rows[j]):
                    rows[i] ^= rows[j]  # symbol cancels: i shrinks
                    shrunk = i
                else:
                    rows[j] ^= rows[i]  # j shrinks; i takes its seat
                    basis[s] = i
                    shrunk = j
            elif len(basis) < 2:
                basis[s] = i
                continue
            else:
                # third symbol: the trio's symbols XOR to zero, so one
                # combined reduction clears the smallest-left row
                j1, j2 = basis.values()
                trio = sorted((i, j1, j2), key=lambda r: left_end(rows[r]))
                shrunk = trio[0]
                rows[shrunk] ^= rows[trio[1]] ^ rows[trio[2]]
                if shrunk != i:
                    key = next(key for key, v in basis.items() if v == shrunk)
                    del basis[key]
                    basis[s] = i
            if rows[shrunk] == 0:
                raise AssertionError("rows must stay independent")
            r_new = right_end(rows[shrunk])
            if r_new >= q:
                raise AssertionError("reduction must shrink the row")
            buckets[r_new].append(shrunk)
    return rows


def _contain_table(vecs: Sequence[int], n: int) -> np.ndarray:
    """C[l, r] = number of gauge rows supported inside [l, r]."""
    zmask = (1 << n) - 1
    hist = np.zeros((n, n), dtype=np.int64)
    for row in vecs:
        support = (row | (row >> n)) & zmask
        left = (support & -support).bit_length() - 1
        right = support.bit_length() - 1
        hist[left, right] += 1
    pref = np.cumsum(hist, axis=1)
    table = np.cumsum(pref[::-1], axis=0)[::-1]
    return table


class IntervalMagicCache:
    """Per-state cache answering 'does interval [l, r] hold the full unit'
    in O(1) after an O(L^2) gauge construction.

    An operator p is reducible to a region iff adjoining p to the
    stabilizer group raises the dimension of the region-supported subgroup
    by one; contained-row counts of the clipped gauges of G, G+Z, G+Y give
    those dimensions for every contiguous interval at once.
    """

    def __init__(self, cs: CodeState):
        self.n = cs.n
        base = [g.vec for g in cs.stabilizers]
        self._base = _contain_table(clipped_gauge(base, cs.n), cs.n)
        self._with_z = _contain_table(
            clipped_gauge(base + [cs.logical_z.vec], cs.n), cs.n
        )
        self._with_y = _contain_table(
            clipped_gauge(base + [cs.logical_y.vec], cs.n), cs.n
        )

    def z_reducible(self, left: int, right: int) -> bool:
        return self._with_z[left, right] - self._base[left, right] == 1

    def y_reducible(self, left: int, right: int) -> bool:
        return self._with_y[left, right] - self._base[left, right] == 1

    def is_full(self, left: int, right: int) -> bool:
        if left > right:
            return False
        base = self._base[left, right]
        return (
            self._with_z[left, right] - base == 1
            and self._with_y[left, right] - base == 1
        )


def full_system_is_full(cs: CodeState) -> bool:
    """Fast whole-system classification: the class is the full unit iff
    neither weighted logical has collapsed into the stabilizer span."""
    gvecs = [g.vec for g in cs.stabilizers]
    return (
        solve_in_span(cs.logical_z.vec, gvecs) is None
        and solve_in_span(cs.logical_y.vec, gvecs) is None
    )
