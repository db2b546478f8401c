"""Phase-tracked Pauli strings and GF(2) symplectic linear algebra.

Conventions used throughout the package:

* Qubits are 0-indexed.  In text literals like ``"+XIZY"`` the leftmost
  letter is qubit 0.
* A Pauli string is ``i**phase * X^x * Z^z`` with ``x`` and ``z`` stored as
  integer bitmasks (bit ``q`` refers to qubit ``q``) and ``phase`` an
  exponent of ``i`` modulo 4.  All X factors are written to the left of all
  Z factors; every multiplication rule derives from this single convention.
* A string is Hermitian iff ``phase == popcount(x & z) (mod 2)``.  The
  canonical positive form of a Hermitian string has
  ``phase == popcount(x & z) (mod 4)``.
* The symplectic vector of a string over ``n`` qubits is the 2n-bit integer
  ``x | (z << n)``; GF(2) elimination scans columns left to right, x half
  before z half (bit 0 upward), with deterministic pivoting.

Bitmask integers keep every row operation a couple of machine-word XORs for
the system sizes used here (L up to a few hundred).
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Integral as _Integral
from typing import Iterable, Optional, Sequence


class DimensionMismatch(ValueError):
    """Operands act on different qubit counts or incompatible widths."""


_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


class PauliString:
    """Immutable phase-tracked Pauli string on ``n`` qubits."""

    __slots__ = ("n", "x", "z", "phase")

    def __init__(self, n: int, x: int = 0, z: int = 0, phase: int = 0):
        if n < 0:
            raise ValueError("n must be non-negative")
        mask = (1 << n) - 1
        if x & ~mask or z & ~mask:
            raise ValueError("x/z bits outside the qubit range")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", phase & 3)

    def __setattr__(self, *_):
        raise AttributeError("PauliString is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 0)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str, sign: int = 1) -> "PauliString":
        """Single-qubit X/Y/Z factor on ``qubit``, sign +1 or -1."""
        if not 0 <= qubit < n:
            raise ValueError(f"qubit {qubit} out of range for n={n}")
        xb, zb = _LETTER_TO_BITS[kind]
        phase = (xb & zb) + (0 if sign == 1 else 2)
        return cls(n, xb << qubit, zb << qubit, phase)

    # -- basic structure ----------------------------------------------

    @property
    def vec(self) -> int:
        """Symplectic 2n-bit vector x | (z << n)."""
        return self.x | (self.z << self.n)

    def support(self) -> frozenset[int]:
        return frozenset(bits_of(self.x | self.z))

    def support_mask(self) -> int:
        return self.x | self.z

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def is_hermitian(self) -> bool:
        return (self.phase - (self.x & self.z).bit_count()) % 2 == 0

    def sign(self) -> int:
        """+1 or -1 for a Hermitian string."""
        d = (self.phase - (self.x & self.z).bit_count()) % 4
        if d == 0:
            return 1
        if d == 2:
            return -1
        raise ValueError("sign undefined for non-Hermitian string")

    def negate(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.phase + 2)

    def letter(self, qubit: int) -> str:
        return _BITS_TO_LETTER[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    # -- algebra -------------------------------------------------------

    def commutes_with(self, other: "PauliString") -> bool:
        if self.n != other.n:
            raise DimensionMismatch("qubit counts differ")
        t = (self.x & other.z).bit_count() + (self.z & other.x).bit_count()
        return t % 2 == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise DimensionMismatch("qubit counts differ")
        # (i^p1 X^x1 Z^z1)(i^p2 X^x2 Z^z2): commuting Z^z1 past X^x2
        # contributes (-1)^(z1.x2).
        phase = self.phase + other.phase + 2 * (self.z & other.x).bit_count()
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z, phase)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliString)
            and self.n == other.n
            and self.x == other.x
            and self.z == other.z
            and self.phase == other.phase
        )

    def __hash__(self):
        return hash((self.n, self.x, self.z, self.phase))

    def equals_up_to_sign(self, other: "PauliString") -> bool:
        return self.n == other.n and self.x == other.x and self.z == other.z

    # -- text form -----------------------------------------------------

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliString({format_pauli(self)!r})"


def bits_of(mask: int):
    """Iterate set bit positions of a non-negative int, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def qubits_mask(qubits: Iterable[int]) -> int:
    m = 0
    for q in qubits:
        m |= 1 << int(q)
    return m


def as_mask(region) -> int:
    """Region given as a bitmask (any integer type) or an iterable of
    qubit indices, normalized to a plain int bitmask."""
    if isinstance(region, _Integral):
        return int(region)
    return qubits_mask(region)


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the symplectic form of the two strings vanishes mod 2."""
    return p.commutes_with(q)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Product p*q with the phase accumulated exactly (mod 4)."""
    return p * q


def parse_pauli(text: str) -> PauliString:
    """Parse a literal like ``+XIZY`` / ``-ZZ`` / ``XI`` (left = qubit 0).

    ``i``/``-i`` prefixes are accepted for non-Hermitian strings.
    """
    s = text.strip()
    sign = 1
    imag = 0
    if s.startswith(("+i", "-i")):
        sign = 1 if s[0] == "+" else -1
        imag = 1
        s = s[2:]
    elif s.startswith("i"):
        imag = 1
        s = s[1:]
    elif s.startswith(("+", "-")):
        sign = 1 if s[0] == "+" else -1
        s = s[1:]
    x = z = 0
    for q, ch in enumerate(s):
        try:
            xb, zb = _LETTER_TO_BITS[ch]
        except KeyError:
            raise ValueError(f"bad Pauli letter {ch!r} in {text!r}") from None
        x |= xb << q
        z |= zb << q
    # canonical positive Hermitian phase, then the sign / explicit i factor
    phase = (x & z).bit_count() + (0 if sign == 1 else 2) + imag
    return PauliString(len(s), x, z, phase)


def format_pauli(p: PauliString) -> str:
    """Inverse of :func:`parse_pauli`; Hermitian strings get ``+``/``-``."""
    d = (p.phase - (p.x & p.z).bit_count()) % 4
    prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[d]
    letters = "".join(p.letter(q) for q in range(p.n))
    return prefix + letters


# -- GF(2) matrices over symplectic rows -------------------------------


@dataclass
class BinaryMatrix:
    """Rows of 2n-bit vectors (x half then z half) as plain integers."""

    rows: list[int]
    width: int

    def __post_init__(self):
        mask = (1 << self.width) - 1
        for r in self.rows:
            if r & ~mask:
                raise DimensionMismatch("row wider than declared width")

    @classmethod
    def from_paulis(cls, paulis: Sequence[PauliString]) -> "BinaryMatrix":
        if not paulis:
            return cls([], 0)
        n = paulis[0].n
        for p in paulis:
            if p.n != n:
                raise DimensionMismatch("mixed qubit counts")
        return cls([p.vec for p in paulis], 2 * n)

    @property
    def row_count(self) -> int:
        return len(self.rows)


def rank_gf2(m: BinaryMatrix | Sequence[int], width: int | None = None) -> int:
    """GF(2) row rank; the input is not modified."""
    if isinstance(m, BinaryMatrix):
        rows = list(m.rows)
    else:
        rows = list(m)
    rank = 0
    pivots: list[int] = []  # rows in echelon, ascending lowest set bit
    for row in rows:
        for piv in pivots:
            low = piv & -piv
            if row & low:
                row ^= piv
        if row:
            pivots.append(row)
            pivots.sort(key=lambda r: r & -r)
            rank += 1
    return rank


def solve_in_span(
    target: int, basis: BinaryMatrix | Sequence[int], width: int | None = None
) -> Optional[int]:
    """Bitmask c with XOR of selected basis rows equal to ``target``.

    Returns None when the target is outside the span.  Elimination scans
    columns left to right (bit 0 upward) with first-available pivoting, so
    the witness is deterministic for a fixed row order.
    """
    if isinstance(basis, BinaryMatrix):
        rows = basis.rows
        width = basis.width
    else:
        rows = list(basis)
    if width is not None and target >= (1 << width):
        raise DimensionMismatch("target wider than basis rows")
    # echelon with combination tracking: pivot_col -> (row, combo mask)
    echelon: dict[int, tuple[int, int]] = {}
    for i, row in enumerate(rows):
        combo = 1 << i
        while row:
            col = (row & -row).bit_length() - 1
            if col in echelon:
                erow, ecombo = echelon[col]
                row ^= erow
                combo ^= ecombo
            else:
                echelon[col] = (row, combo)
                break
    t = target
    mask = 0
    while t:
        col = (t & -t).bit_length() - 1
        if col not in echelon:
            return None
        erow, ecombo = echelon[col]
        t ^= erow
        mask ^= ecombo
    return mask


def combine(gens: Sequence[PauliString], mask: int) -> PauliString:
    """Phase-tracked product of the generators selected by ``mask``."""
    if not gens:
        raise ValueError("no generators")
    out = PauliString.identity(gens[0].n)
    for i in bits_of(mask):
        out = out * gens[i]
    return out


def reduce_support(
    p: PauliString, gens: Sequence[PauliString], region: Iterable[int] | int
) -> Optional[PauliString]:
    """p' = p * g with support(p') inside ``region`` for some g in <gens>.

    Returns the reduced string with its phase tracked through the
    multiplications, or None when no such g exists.  Deterministic for a
    fixed generator order.
    """
    n = p.n
    for g in gens:
        if g.n != n:
            raise DimensionMismatch("qubit counts differ")
    region_mask = as_mask(region)
    outside = ((1 << n) - 1) & ~region_mask
    b_cols = outside | (outside << n)
    target = p.vec & b_cols
    mask = solve_in_span(target, [g.vec & b_cols for g in gens], 2 * n)
    if mask is None:
        return None
    out = p
    for i in bits_of(mask):
        out = out * gens[i]
    return out
