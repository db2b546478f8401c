"""Brute-force statevector routines used as the small-size oracle.

Basis packing is little-endian: basis index s has bit q equal to the
computational value of qubit q.  Everything here is exponential in the
qubit count and capped accordingly.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .pauli import PauliString, as_mask, bits_of
from .tableau import CliffordGate, StabilizerState

DENSE_CAP = 12

_I4 = np.array([1, 1j, -1, -1j])


class SizeCapExceeded(ValueError):
    """Dense-path request beyond the configured qubit cap."""


def _check_cap(n: int):
    if n > DENSE_CAP:
        raise SizeCapExceeded(f"dense path capped at {DENSE_CAP} qubits, got {n}")


def _parity_table(n: int, mask: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.uint64)
    return np.bitwise_count(idx & np.uint64(mask)).astype(np.int64) & 1


def apply_pauli(vec: np.ndarray, p: PauliString) -> np.ndarray:
    """P |psi> for P = i^phase X^x Z^z."""
    n = p.n
    idx = np.arange(1 << n)
    signs = 1.0 - 2.0 * _parity_table(n, p.z)
    out = np.empty_like(vec, dtype=complex)
    out[idx ^ p.x] = _I4[p.phase] * signs * vec
    return out


def state_from_generators(gens: Sequence[PauliString], n: int) -> np.ndarray:
    """Statevector stabilized by the (pure-state) generator list.

    Projects basis states through prod (1+g)/2 until one survives; the
    global phase is fixed by making the first nonzero amplitude real
    positive, so equal states compare bit-for-bit.
    """
    _check_cap(n)
    dim = 1 << n
    for seed in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[seed] = 1.0
        for g in gens:
            v = 0.5 * (v + apply_pauli(v, g))
        norm = np.linalg.norm(v)
        if norm > 1e-9:
            v /= norm
            return _fix_phase(v)
    raise ValueError("no state survives the projector; generators inconsistent?")


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-12))
    ph = v[k] / abs(v[k])
    return v / ph


def statevector(state: StabilizerState) -> np.ndarray:
    if not state.is_pure:
        raise ValueError("statevector needs a pure state")
    return state_from_generators(state.generators, state.n)


@lru_cache(maxsize=512)
def _unitary_from_images(arity: int, images: tuple[PauliString, ...]) -> np.ndarray:
    z_images = [images[2 * k + 1] for k in range(arity)]
    col0 = state_from_generators(z_images, arity)  # U|0...0> up to phase
    dim = 1 << arity
    u = np.empty((dim, dim), dtype=complex)
    u[:, 0] = col0
    for j in range(1, dim):
        col = col0
        for k in bits_of(j):
            col = apply_pauli(col, images[2 * k])
        u[:, j] = col
    return u


def gate_unitary(gate: CliffordGate) -> np.ndarray:
    """Unitary matrix of a gate, reconstructed from its images (up to a
    global phase fixed by the stabilizer-projector construction)."""
    return _unitary_from_images(gate.arity, gate.images)


def apply_gate(vec: np.ndarray, gate: CliffordGate, sites: Sequence[int]) -> np.ndarray:
    n = int(np.log2(len(vec)) + 0.5)
    a = gate.arity
    u = gate_unitary(gate)
    t = vec.reshape([2] * n)
    src = [n - 1 - q for q in reversed(sites)]
    t = np.moveaxis(t, src, range(a))
    shape = t.shape
    m = t.reshape(1 << a, -1)
    m = u @ m
    t = m.reshape(shape)
    t = np.moveaxis(t, range(a), src)
    return t.reshape(-1)


def apply_circuit(vec: np.ndarray, circuit: Iterable[tuple[CliffordGate, Sequence[int]]]) -> np.ndarray:
    for gate, sites in circuit:
        vec = apply_gate(vec, gate, sites)
    return vec


def apply_t_gate(vec: np.ndarray, site: int) -> np.ndarray:
    n = int(np.log2(len(vec)) + 0.5)
    idx = np.arange(1 << n)
    factor = np.where((idx >> site) & 1, np.exp(1j * np.pi / 4), 1.0)
    return vec * factor


def reduced_density_matrix(vec: np.ndarray, region: Iterable[int] | int) -> np.ndarray:
    n = int(np.log2(len(vec)) + 0.5)
    region_mask = as_mask(region)
    qs = sorted(bits_of(region_mask))
    a = len(qs)
    t = vec.reshape([2] * n)
    src = [n - 1 - q for q in reversed(qs)]
    t = np.moveaxis(t, src, range(a))
    m = t.reshape(1 << a, -1)
    return m @ m.conj().T


def entropy_vn(rho: np.ndarray) -> float:
    """Von Neumann entropy in bits."""
    evals = np.linalg.eigvalsh(rho)
    evals = evals[evals > 1e-12]
    return float(-(evals * np.log2(evals)).sum())


def _fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform along the last axis."""
    a = a.copy()
    h = 1
    width = a.shape[-1]
    while h < width:
        a = a.reshape(*a.shape[:-1], width // (2 * h), 2, h)
        top = a[..., 0, :] + a[..., 1, :]
        bot = a[..., 0, :] - a[..., 1, :]
        a = np.stack([top, bot], axis=-2).reshape(*a.shape[:-3], width)
        h *= 2
    return a


def pauli_coefficients(rho: np.ndarray) -> np.ndarray:
    """Tr[rho P] for all Hermitian canonical P, indexed [x, z]."""
    dim = rho.shape[0]
    m = int(np.log2(dim) + 0.5)
    idx = np.arange(dim)
    d = np.empty((dim, dim), dtype=complex)
    for x in range(dim):
        d[x] = rho[idx ^ x, idx]
    t = _fwht(d)  # t[x, z] = sum_s (-1)^(z.s) rho[s^x, s] = Tr[rho X^x Z^z]
    ycount = np.bitwise_count(
        np.arange(dim, dtype=np.uint64)[:, None] & np.arange(dim, dtype=np.uint64)[None, :]
    ).astype(np.int64)
    coeff = t * _I4[ycount & 3]
    if np.abs(coeff.imag).max() > 1e-9:
        raise AssertionError("Pauli coefficients of a Hermitian matrix must be real")
    return coeff.real


def dense_oracle_sre2(vec: np.ndarray, region: Iterable[int] | int) -> float:
    """Normalized 2-SRE of the reduced state, in bits, by full Pauli
    enumeration: -log2(sum Tr[P rho]^4 / sum Tr[P rho]^2)."""
    n = int(np.log2(len(vec)) + 0.5)
    _check_cap(n)
    rho = reduced_density_matrix(vec, region)
    c = pauli_coefficients(rho)
    c2 = c * c
    s2 = float(c2.sum())
    s4 = float((c2 * c2).sum())
    return float(-np.log2(s4 / s2))


def dense_pauli_spectrum(vec: np.ndarray, region: Iterable[int] | int) -> np.ndarray:
    """Sorted (descending) spectrum Tr[P rho]^2 / 2^|region|."""
    rho = reduced_density_matrix(vec, as_mask(region))
    c = pauli_coefficients(rho)
    xi = np.sort((c * c).ravel())[::-1] / rho.shape[0]
    return xi


def sre2_statevector(vec: np.ndarray) -> float:
    n = int(np.log2(len(vec)) + 0.5)
    return dense_oracle_sre2(vec, (1 << n) - 1)
