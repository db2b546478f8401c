"""Stabilizer states and Clifford gates in the Heisenberg picture.

A gate is stored by the conjugated images of the single-site X and Z
operators on its support.  Applying a gate to a state conjugates every
generator through a per-gate lookup table, so one 2-qubit gate costs O(1)
bit operations per generator row.

Uniform 2-qubit Clifford elements are drawn by sampling a uniform 4x4
binary symplectic matrix (transvection construction of Koenig and Smolin)
plus independent sign bits for the images, 720 * 16 = 11520 elements in
total.  The same construction, driven level by level from the caller's
random generator, supplies uniform n-qubit elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .pauli import (
    DimensionMismatch,
    PauliString,
    as_mask,
    bits_of,
    combine,
    format_pauli,
    parse_pauli,
    rank_gf2,
    solve_in_span,
)


class CliffordGate:
    """Clifford unitary on 1 or 2 (or more) qubits, stored by its images.

    ``images[2k]`` is the conjugated X of leg ``k``, ``images[2k+1]`` the
    conjugated Z, both Hermitian Pauli strings on ``arity`` qubits.
    """

    __slots__ = ("arity", "images", "_table", "name")

    def __init__(self, images: Sequence[PauliString], name: str = "", validate: bool = True):
        images = tuple(images)
        if not images or len(images) % 2:
            raise ValueError("need an (X image, Z image) pair per leg")
        arity = len(images) // 2
        for im in images:
            if im.n != arity:
                raise DimensionMismatch("image width != arity")
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_table", None)
        object.__setattr__(self, "name", name)
        if validate:
            self._check()

    def __setattr__(self, *_):
        raise AttributeError("CliffordGate is immutable")

    def _check(self):
        a = self.arity
        for im in self.images:
            if not im.is_hermitian():
                raise ValueError("gate images must be Hermitian")
        for i in range(2 * a):
            for j in range(i + 1, 2 * a):
                want = not (j == i + 1 and i % 2 == 0)  # X_k,Z_k anticommute
                if self.images[i].commutes_with(self.images[j]) != want:
                    raise ValueError("images break the symplectic condition")

    # conjugation table: in-code x|(z<<arity) -> (out_x, out_z, dphase)
    @property
    def table(self):
        tab = self._table
        if tab is None:
            a = self.arity
            tab = []
            for code in range(1 << (2 * a)):
                ix, iz = code & ((1 << a) - 1), code >> a
                acc = PauliString.identity(a)
                for k in bits_of(ix):
                    acc = acc * self.images[2 * k]
                for k in bits_of(iz):
                    acc = acc * self.images[2 * k + 1]
                tab.append((acc.x, acc.z, acc.phase))
            object.__setattr__(self, "_table", tab)
        return tab

    def conjugate_local(self, p: PauliString) -> PauliString:
        """U p U^dag for p on this gate's own qubits."""
        if p.n != self.arity:
            raise DimensionMismatch("operand width != arity")
        ox, oz, dp = self.table[p.x | (p.z << self.arity)]
        return PauliString(self.arity, ox, oz, p.phase + dp)

    def then(self, after: "CliffordGate") -> "CliffordGate":
        """Gate equal to applying self first, then ``after``."""
        if after.arity != self.arity:
            raise DimensionMismatch("arity mismatch in composition")
        images = tuple(after.conjugate_local(im) for im in self.images)
        return CliffordGate(images, name=f"{after.name}*{self.name}", validate=False)

    def __eq__(self, other):
        return isinstance(other, CliffordGate) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"CliffordGate({self.name or self.images!r})"


def tensor(a: CliffordGate, b: CliffordGate) -> CliffordGate:
    """a on the first legs, b on the remaining legs."""
    na, nb = a.arity, b.arity
    images = []
    for im in a.images:
        images.append(PauliString(na + nb, im.x, im.z, im.phase))
    for im in b.images:
        images.append(PauliString(na + nb, im.x << na, im.z << na, im.phase))
    return CliffordGate(images, name=f"({a.name})x({b.name})", validate=False)


def _g1(name, imx, imz):
    return CliffordGate((parse_pauli(imx), parse_pauli(imz)), name=name)


def _g2(name, *ims):
    return CliffordGate(tuple(parse_pauli(s) for s in ims), name=name)


I1 = _g1("I", "+X", "+Z")
H = _g1("H", "+Z", "+X")
S = _g1("S", "+Y", "+Z")
S_DAG = _g1("Sdg", "-Y", "+Z")
X_GATE = _g1("X", "+X", "-Z")
Y_GATE = _g1("Y", "-X", "-Z")
Z_GATE = _g1("Z", "-X", "+Z")
SQRT_X = _g1("sqrtX", "+X", "-Y")
CZ = _g2("CZ", "+XZ", "+ZI", "+ZX", "+IZ")
CNOT = _g2("CNOT", "+XX", "+ZI", "+IX", "+ZZ")
SWAP = _g2("SWAP", "+IX", "+IZ", "+XI", "+ZI")
SDKI_F = CliffordGate(CZ.then(tensor(H, H)).then(CZ).images, name="SDKI-f")


def _enumerate_one_qubit_cliffords() -> tuple[CliffordGate, ...]:
    seen = {}
    frontier = [I1]
    while frontier:
        nxt = []
        for g in frontier:
            key = g.images
            if key in seen:
                continue
            seen[key] = g
            for step in (H, S):
                nxt.append(g.then(step))
        frontier = nxt
    gates = sorted(
        seen.values(),
        key=lambda g: tuple((im.x, im.z, im.phase) for im in g.images),
    )
    return tuple(gates)


ONE_QUBIT_CLIFFORDS = _enumerate_one_qubit_cliffords()


def find_one_qubit_gate(x_image: PauliString | None = None, z_image: PauliString | None = None) -> CliffordGate:
    """First enumerated 1-qubit Clifford matching the requested images."""
    for g in ONE_QUBIT_CLIFFORDS:
        if x_image is not None and g.images[0] != x_image:
            continue
        if z_image is not None and g.images[1] != z_image:
            continue
        return g
    raise ValueError("no single-qubit Clifford with the requested images")


# -- uniform symplectic sampling (transvection construction) -----------
#
# Vectors are 2n-bit ints in the alternating layout: bit 2q is the X
# component of qubit q, bit 2q+1 the Z component.

_EVEN_MASKS: dict[int, int] = {}


def _even_mask(n: int) -> int:
    m = _EVEN_MASKS.get(n)
    if m is None:
        m = 0
        for q in range(n):
            m |= 1 << (2 * q)
        _EVEN_MASKS[n] = m
    return m


def _sp_inner_exact(v: int, w: int, n: int) -> int:
    even = _even_mask(n)
    t = ((v & even) & (w >> 1)) ^ (((v >> 1) & even) & w)
    return (t & even).bit_count() & 1


def _transvection(k: int, v: int, n: int) -> int:
    return v ^ k if _sp_inner_exact(k, v, n) else v


def _pair(v: int, i: int) -> int:
    return (v >> (2 * i)) & 3


def _find_transvection(x: int, y: int, n: int) -> tuple[int, int]:
    """(h1, h2) with y = T_h1 T_h2 x (the transvection-pair decomposition)."""
    if x == y:
        return 0, 0
    if _sp_inner_exact(x, y, n):
        return x ^ y, 0
    z = 0
    for i in range(n):
        if _pair(x, i) and _pair(y, i):
            zp = _pair(x, i) ^ _pair(y, i)
            if zp == 0:
                zp = 2  # z bit
                if ((x >> (2 * i)) & 1) != ((x >> (2 * i + 1)) & 1):
                    zp |= 1
            z = zp << (2 * i)
            return x ^ z, y ^ z
    for i in range(n):
        if _pair(x, i) and not _pair(y, i):
            xb = (x >> (2 * i)) & 1
            zb = (x >> (2 * i + 1)) & 1
            zp = 2 if xb == zb else ((xb << 1) | zb)
            z |= zp << (2 * i)
            break
    for i in range(n):
        if _pair(y, i) and not _pair(x, i):
            xb = (y >> (2 * i)) & 1
            zb = (y >> (2 * i + 1)) & 1
            zp = 2 if xb == zb else ((xb << 1) | zb)
            z |= zp << (2 * i)
            break
    return x ^ z, y ^ z


def _symplectic_step(k: int, bits: int, n: int, rest: Sequence[int]) -> list[int]:
    nn = 2 * n
    f1 = k
    e1 = 1
    t0, t1 = _find_transvection(e1, f1, n)
    eprime = e1 | (bits & ~1 & ((1 << nn) - 1))  # bits[1:] land on e2..f_n
    h0 = _transvection(t0, eprime, n)
    h0 = _transvection(t1, h0, n)
    if bits & 1:
        f1 = 0
    rows = [1, 2] + [r << 2 for r in rest]
    out = []
    for r in rows:
        r = _transvection(t0, r, n)
        r = _transvection(t1, r, n)
        r = _transvection(h0, r, n)
        r = _transvection(f1, r, n)
        out.append(r)
    return out


def symplectic_from_index(i: int, n: int) -> list[int]:
    """Canonical 2n x 2n binary symplectic matrix for index ``i``.

    Rows are the images of the alternating basis (x_0, z_0, x_1, ...).
    The map is a bijection from [0, |Sp(2n, 2)|) onto the group.
    """
    nn = 2 * n
    s = (1 << nn) - 1
    k = (i % s) + 1
    i //= s
    bits = i % (1 << (nn - 1))
    i >>= nn - 1
    rest = symplectic_from_index(i, n - 1) if n > 1 else []
    # reshuffle: the per-level data eat (k, bits); recursion gets the rest
    return _symplectic_step(k, _expand_bits(bits, nn), n, rest)


def _expand_bits(bits: int, nn: int) -> int:
    # bits[0] controls f1 zeroing; bits[1:] fill eprime positions 2..nn-1
    b0 = bits & 1
    high = (bits >> 1) << 2
    return b0 | high


def symplectic_group_order(n: int) -> int:
    order = 1 << (n * n)
    for j in range(1, n + 1):
        order *= (1 << (2 * j)) - 1
    return order


def random_symplectic(rng: np.random.Generator, n: int) -> list[int]:
    """Uniform element of Sp(2n, 2), drawing per-level integers from rng."""
    rest: list[int] = []
    levels = []
    for m in range(n, 0, -1):
        nn = 2 * m
        k = 1 + _rand_bits(rng, nn, nonzero_below=(1 << nn) - 1)
        bits = _rand_bits(rng, nn - 1)
        levels.append((k, bits, m))
    for k, bits, m in reversed(levels):
        rest = _symplectic_step(k, _expand_bits(bits, 2 * m), m, rest)
    return rest


def _rand_bits(rng: np.random.Generator, width: int, nonzero_below: int | None = None) -> int:
    """Uniform int in [0, 2^width), or [0, nonzero_below) when given."""
    if nonzero_below is not None:
        if width <= 62:
            return int(rng.integers(0, nonzero_below))
        while True:
            v = _rand_bits(rng, width)
            if v < nonzero_below:
                return v
    v = 0
    for lo in range(0, width, 32):
        take = min(32, width - lo)
        v |= int(rng.integers(0, 1 << take)) << lo
    return v


def _images_from_symplectic(rows: Sequence[int], n: int, sign_bits: int) -> tuple[PauliString, ...]:
    images = []
    for j in range(2 * n):
        r = rows[j]
        x = z = 0
        for q in range(n):
            x |= ((r >> (2 * q)) & 1) << q
            z |= ((r >> (2 * q + 1)) & 1) << q
        phase = (x & z).bit_count() + 2 * ((sign_bits >> j) & 1)
        images.append(PauliString(n, x, z, phase))
    return tuple(images)


_SP2_CACHE: list[list[int]] | None = None


def _sp2_table() -> list[list[int]]:
    global _SP2_CACHE
    if _SP2_CACHE is None:
        _SP2_CACHE = [symplectic_from_index(i, 2) for i in range(720)]
    return _SP2_CACHE


def sample_clifford_2q(rng: np.random.Generator) -> CliffordGate:
    """Uniform 2-qubit Clifford modulo global phase (11520 elements)."""
    idx = int(rng.integers(0, 720))
    signs = int(rng.integers(0, 16))
    images = _images_from_symplectic(_sp2_table()[idx], 2, signs)
    return CliffordGate(images, name=f"C2[{idx},{signs}]", validate=False)


def sample_clifford_1q(rng: np.random.Generator) -> CliffordGate:
    """Uniform single-qubit Clifford modulo global phase (24 elements)."""
    return ONE_QUBIT_CLIFFORDS[int(rng.integers(0, 24))]


def random_clifford_images(rng: np.random.Generator, n: int) -> tuple[PauliString, ...]:
    """Images of a uniform n-qubit Clifford element (symplectic + signs)."""
    rows = random_symplectic(rng, n)
    signs = _rand_bits(rng, 2 * n)
    return _images_from_symplectic(rows, n, signs)


# -- stabilizer states ---------------------------------------------------


@dataclass(frozen=True)
class StabilizerState:
    """n qubits stabilized by independent, pairwise commuting generators."""

    n: int
    generators: tuple[PauliString, ...]

    def __post_init__(self):
        for g in self.generators:
            if g.n != self.n:
                raise DimensionMismatch("generator width != n")

    @property
    def is_pure(self) -> bool:
        return len(self.generators) == self.n

    def check(self) -> None:
        """Validate hermiticity, commutation and independence (O(k^2))."""
        gens = self.generators
        for g in gens:
            if not g.is_hermitian():
                raise ValueError("non-Hermitian generator")
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if not gens[i].commutes_with(gens[j]):
                    raise ValueError(f"generators {i},{j} anticommute")
        if rank_gf2([g.vec for g in gens]) != len(gens):
            raise ValueError("generators are dependent")

    @classmethod
    def all_zero(cls, n: int) -> "StabilizerState":
        return cls(n, tuple(PauliString.single(n, q, "Z") for q in range(n)))


def _check_sites(n: int, sites: Sequence[int], arity: int):
    if len(sites) != arity or len(set(sites)) != arity:
        raise ValueError("sites must be distinct and match gate arity")
    for q in sites:
        if not 0 <= q < n:
            raise ValueError(f"site {q} out of range")


def conjugate_row(row: PauliString, gate: CliffordGate, sites: Sequence[int]) -> PauliString:
    a = gate.arity
    ax = az = 0
    rx, rz = row.x, row.z
    for k in range(a):
        q = sites[k]
        ax |= ((rx >> q) & 1) << k
        az |= ((rz >> q) & 1) << k
    code = ax | (az << a)
    if code == 0:
        return row
    ox, oz, dp = gate.table[code]
    for k in range(a):
        q = sites[k]
        bit = 1 << q
        rx = (rx & ~bit) | (((ox >> k) & 1) << q)
        rz = (rz & ~bit) | (((oz >> k) & 1) << q)
    return PauliString(row.n, rx, rz, row.phase + dp)


def conjugate_rows(rows: Iterable[PauliString], gate: CliffordGate, sites: Sequence[int]) -> list[PauliString]:
    table = gate.table
    if gate.arity == 2:
        q1, q2 = sites
        keep = ~((1 << q1) | (1 << q2))
        out = []
        for row in rows:
            rx, rz = row.x, row.z
            code = (
                ((rx >> q1) & 1)
                | (((rx >> q2) & 1) << 1)
                | (((rz >> q1) & 1) << 2)
                | (((rz >> q2) & 1) << 3)
            )
            if code == 0:
                out.append(row)
                continue
            ox, oz, dp = table[code]
            rx = (rx & keep) | ((ox & 1) << q1) | (((ox >> 1) & 1) << q2)
            rz = (rz & keep) | ((oz & 1) << q1) | (((oz >> 1) & 1) << q2)
            out.append(PauliString(row.n, rx, rz, row.phase + dp))
        return out
    return [conjugate_row(r, gate, sites) for r in rows]


def apply_gate(state: StabilizerState, gate: CliffordGate, sites: Sequence[int]) -> StabilizerState:
    """New state with every generator conjugated through the gate."""
    _check_sites(state.n, sites, gate.arity)
    return StabilizerState(state.n, tuple(conjugate_rows(state.generators, gate, sites)))


def apply_circuit(state: StabilizerState, circuit: Iterable[tuple[CliffordGate, Sequence[int]]]) -> StabilizerState:
    for gate, sites in circuit:
        state = apply_gate(state, gate, sites)
    return state


def entropy(state: StabilizerState, region: Iterable[int] | int) -> int:
    """Entanglement entropy of the region in bits.

    |region| minus the dimension of the stabilizer subgroup supported on
    the region; the subgroup dimension is k - rank(generators restricted
    to the complement).
    """
    n = state.n
    region_mask = as_mask(region)
    comp = ((1 << n) - 1) & ~region_mask
    cols = comp | (comp << n)
    restricted = [g.vec & cols for g in state.generators]
    supported = len(state.generators) - rank_gf2(restricted)
    return region_mask.bit_count() - supported


def measure_pauli(
    state: StabilizerState, p: PauliString, rng: np.random.Generator
) -> tuple[int, StabilizerState]:
    """Projective measurement of a Hermitian Pauli.

    Deterministic outcome when p is in +/- the stabilizer group, a fair
    coin otherwise; randomness comes only from the supplied generator.
    """
    if not p.is_hermitian():
        raise ValueError("measured operator must be Hermitian")
    gens = list(state.generators)
    anti = [i for i, g in enumerate(gens) if not g.commutes_with(p)]
    if anti:
        outcome = 1 if int(rng.integers(0, 2)) == 0 else -1
        s = gens[anti[0]]
        for i in anti[1:]:
            gens[i] = gens[i] * s
        gens[anti[0]] = p if outcome == 1 else p.negate()
        return outcome, StabilizerState(state.n, tuple(gens))
    mask = solve_in_span(p.vec, [g.vec for g in gens], 2 * state.n)
    if mask is not None:
        prod = combine(gens, mask)
        if prod == p:
            return 1, state
        if prod == p.negate():
            return -1, state
        raise AssertionError("span witness does not reproduce the operator")
    # p is an undetermined logical of a mixed state: coin plus extension
    outcome = 1 if int(rng.integers(0, 2)) == 0 else -1
    gens.append(p if outcome == 1 else p.negate())
    return outcome, StabilizerState(state.n, tuple(gens))


# -- text format ---------------------------------------------------------


def dumps_state(state: StabilizerState) -> str:
    lines = [f"n={state.n} k={len(state.generators)}"]
    lines += [format_pauli(g) for g in state.generators]
    return "\n".join(lines) + "\n"


def loads_state(text: str) -> StabilizerState:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    header = dict(tok.split("=") for tok in lines[0].split())
    n, k = int(header["n"]), int(header["k"])
    gens = tuple(parse_pauli(ln) for ln in lines[1 : 1 + k])
    if len(gens) != k:
        raise ValueError("generator count does not match header")
    state = StabilizerState(n, gens)
    state.check()
    return state
