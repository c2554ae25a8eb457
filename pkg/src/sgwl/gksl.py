"""Hermitian operator bases, Kossakowski-form generators and their semigroups.

A generator acting on ``M_d`` is stored as a dense ``d^2 x d^2`` matrix on
column-stacked vectorized operators.  It is assembled from a Hamiltonian
``H``, a Hermitian coefficient matrix ``C`` (the Kossakowski matrix) and an
orthonormal Hermitian basis ``{F_0 = 1/sqrt(d), F_1, ..., F_{d^2-1}}`` as

    L[rho] = -i [H, rho] + sum_ab C[a,b] (F_a rho F_b - (1/2){F_b F_a, rho})

with the double-operator sum running over the traceless elements only.  The
noise part ``N[rho] = sum_ab C[a,b] F_a rho F_b`` and the remaining
pseudo-Hamiltonian part are kept separately; they always recompose to the
full generator exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matcore
from .matcore import (
    DomainError,
    PreconditionError,
    ShapeError,
    as_cmatrix,
    as_hermitian,
    devectorize,
    vectorize,
)

SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class HermitianBasis:
    """Orthonormal Hermitian basis of M_d with the identity element first.

    ``elements[0]`` is ``1/sqrt(d)``; the remaining ``d^2 - 1`` elements are
    traceless.  Orthonormality is in the Hilbert-Schmidt inner product.
    """

    dim: int
    elements: tuple[np.ndarray, ...]

    def traceless(self) -> tuple[np.ndarray, ...]:
        return self.elements[1:]


def pauli_basis() -> HermitianBasis:
    """The qubit basis (1, sigma_1, sigma_2, sigma_3)/sqrt(2)."""
    return HermitianBasis(2, tuple(s / np.sqrt(2) for s in SIGMA))


def gell_mann_basis(d: int) -> HermitianBasis:
    """Generalized Gell-Mann basis in (symmetric, antisymmetric, diagonal) order.

    For d = 2 this coincides with :func:`pauli_basis`.
    """
    if d < 2:
        raise DomainError(f"basis dimension must be >= 2, got {d}")
    elems = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = 1.0
            elems.append(m / np.sqrt(2))
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            elems.append(m / np.sqrt(2))
    for l in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        for i in range(l):
            m[i, i] = 1.0
        m[l, l] = -l
        elems.append(m / np.sqrt(l * (l + 1)))
    return HermitianBasis(d, tuple(elems))


def standard_basis(d: int) -> HermitianBasis:
    return pauli_basis() if d == 2 else gell_mann_basis(d)


@dataclass(frozen=True)
class KossakowskiSpec:
    """Input data for a generator: dimension, Hamiltonian, Kossakowski matrix.

    ``c_matrix`` is ``(d^2-1) x (d^2-1)`` Hermitian, indexed by the traceless
    basis elements in the basis' fixed order.
    """

    dim: int
    hamiltonian: np.ndarray
    c_matrix: np.ndarray
    basis: HermitianBasis
    label: str = ""

    def __post_init__(self):
        h = as_hermitian(self.hamiltonian)
        c = as_hermitian(self.c_matrix)
        if h.shape != (self.dim, self.dim):
            raise ShapeError(f"Hamiltonian must be {self.dim}x{self.dim}, got {h.shape}")
        n = self.dim * self.dim - 1
        if c.shape != (n, n):
            raise ShapeError(f"Kossakowski matrix must be {n}x{n}, got {c.shape}")
        if self.basis.dim != self.dim:
            raise ShapeError(
                f"basis dimension {self.basis.dim} does not match spec dimension {self.dim}"
            )
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "c_matrix", c)


def qubit_spec(c_matrix, hamiltonian=None, label: str = "") -> KossakowskiSpec:
    """Convenience constructor for d = 2 specs in the Pauli basis."""
    h = np.zeros((2, 2), dtype=complex) if hamiltonian is None else hamiltonian
    return KossakowskiSpec(2, h, np.asarray(c_matrix, dtype=complex), pauli_basis(), label)


@dataclass(frozen=True)
class Generator:
    """Assembled generator: full = noise + pseudo_h, all d^2 x d^2 matrices."""

    dim: int
    full: np.ndarray
    noise: np.ndarray
    pseudo_h: np.ndarray
    k_matrix: np.ndarray
    spec: KossakowskiSpec | None = field(default=None, compare=False)


def superop_from_action(action, d: int) -> np.ndarray:
    """Matrix of a linear map on M_d from its action on matrix units."""
    s = np.zeros((d * d, d * d), dtype=complex)
    basis_vec = np.zeros(d * d)
    for col in range(d * d):
        basis_vec[:] = 0.0
        basis_vec[col] = 1.0
        s[:, col] = vectorize(action(devectorize(basis_vec, d)))
    return s


def apply_superop(s, x) -> np.ndarray:
    """Action of a vectorized-operator matrix on an operator."""
    sm = as_cmatrix(s)
    xm = as_cmatrix(x)
    d = xm.shape[0]
    if sm.shape != (d * d, d * d):
        raise ShapeError(f"superoperator {sm.shape} does not act on {d}x{d} matrices")
    return devectorize(sm @ vectorize(xm), d)


def identity_superop(d: int) -> np.ndarray:
    return np.eye(d * d, dtype=complex)


def transpose_superop(d: int) -> np.ndarray:
    """The map X -> X^T in the computational basis (a permutation matrix)."""
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[i * d + j, j * d + i] = 1.0
    return s.astype(complex)


def trace_to_identity_superop(d: int) -> np.ndarray:
    """The map X -> Tr(X) * identity (completely positive, trace-scaling)."""
    v = vectorize(np.eye(d, dtype=complex))
    return np.outer(v, v.conj())


def conjugation_superop(a, b) -> np.ndarray:
    """Superoperator of X -> A X B, i.e. kron(B.T, A) on stacked columns."""
    am = as_cmatrix(a)
    bm = as_cmatrix(b)
    return np.kron(bm.T, am)


def kron_superop(sa, sb, da: int, db: int) -> np.ndarray:
    """Lift two maps to the map ``Lambda_A (x) Lambda_B`` on M_{da*db}.

    The result acts on vectorized operators of the composite system whose
    computational basis is the Kronecker basis ``|a> (x) |i>``.
    """
    sam = as_cmatrix(sa)
    sbm = as_cmatrix(sb)
    if sam.shape != (da * da, da * da) or sbm.shape != (db * db, db * db):
        raise ShapeError("factor superoperators do not match the stated dimensions")
    dd = da * db
    # vec index of the composite (row=(a,i), col=(b,j)) regrouped into
    # (vec index on factor A) x (vec index on factor B)
    big = np.kron(sam, sbm).reshape(da, da, db, db, da, da, db, db)
    out = big.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(dd * dd, dd * dd)
    return out


def build_generator(spec: KossakowskiSpec) -> Generator:
    """Assemble full, noise and pseudo-Hamiltonian superoperators from a spec."""
    d = spec.dim
    fs = spec.basis.traceless()
    c = spec.c_matrix
    n = len(fs)
    noise = np.zeros((d * d, d * d), dtype=complex)
    k = np.zeros((d, d), dtype=complex)
    for a in range(n):
        for b in range(n):
            cab = c[a, b]
            if cab != 0:
                noise += cab * conjugation_superop(fs[a], fs[b].conj().T)
                k += cab * (fs[b].conj().T @ fs[a])
    ident = np.eye(d, dtype=complex)
    h = spec.hamiltonian
    pseudo = -1j * (conjugation_superop(h, ident) - conjugation_superop(ident, h))
    pseudo += -0.5 * (conjugation_superop(k, ident) + conjugation_superop(ident, k))
    return Generator(d, noise + pseudo, noise, pseudo, k, spec)


def product_generator(g1: Generator, g2: Generator) -> Generator:
    """Generator of the product semigroup, ``L1 (x) id + id (x) L2``."""
    if g1.dim != g2.dim:
        raise ShapeError(f"factor dimensions differ: {g1.dim} vs {g2.dim}")
    d = g1.dim
    ident = identity_superop(d)
    full = kron_superop(g1.full, ident, d, d) + kron_superop(ident, g2.full, d, d)
    noise = kron_superop(g1.noise, ident, d, d) + kron_superop(ident, g2.noise, d, d)
    pseudo = kron_superop(g1.pseudo_h, ident, d, d) + kron_superop(ident, g2.pseudo_h, d, d)
    k = np.kron(g1.k_matrix, np.eye(d)) + np.kron(np.eye(d), g2.k_matrix)
    return Generator(d * d, full, noise, pseudo, k, None)


def evolve(gen: Generator, t: float) -> np.ndarray:
    """Semigroup element exp(t L) as a superoperator matrix."""
    if t < 0:
        raise DomainError(f"evolution time must be nonnegative, got {t}")
    return matcore.expm(t * gen.full)


def _orthonormalize_pair(psi, phi, tol: float = 1e-10):
    p = np.asarray(psi, dtype=complex).reshape(-1)
    q = np.asarray(phi, dtype=complex).reshape(-1)
    if p.shape != q.shape:
        raise ShapeError("psi and phi must have the same dimension")
    np_, nq = np.linalg.norm(p), np.linalg.norm(q)
    if np_ < 1e-14 or nq < 1e-14:
        raise PreconditionError("psi and phi must be nonzero")
    p = p / np_
    q = q / nq
    overlap = abs(np.vdot(p, q))
    if overlap > tol:
        raise PreconditionError(f"|<phi|psi>| = {overlap:.3e} exceeds tolerance {tol:.1e}")
    # optimizer iterates drift; remove the residual component exactly
    q = q - np.vdot(p, q) * p
    q = q / np.linalg.norm(q)
    return p, q


def positivity_functional(gen: Generator, psi, phi) -> float:
    """Re <phi| L[|psi><psi|] |phi> for an orthonormal pair (phi re-orthogonalized).

    Nonnegativity of this functional over all orthonormal pairs is exactly
    positivity of the generated semigroup for all times.
    """
    p, q = _orthonormalize_pair(psi, phi)
    if p.size != gen.dim:
        raise ShapeError(f"vectors of dimension {p.size} do not match generator dim {gen.dim}")
    m = apply_superop(gen.full, np.outer(p, p.conj()))
    val = np.vdot(q, m @ q)
    if abs(val.imag) > 1e-10:
        raise matcore.NumericalError(f"functional has imaginary part {val.imag:.3e}")
    return float(val.real)


def map_functional(s, psi, phi) -> float:
    """Re <phi| S[|psi><psi|] |phi> with no orthogonality requirement.

    Negativity for some pair proves the map S is not positive.
    """
    p = np.asarray(psi, dtype=complex).reshape(-1)
    q = np.asarray(phi, dtype=complex).reshape(-1)
    p = p / np.linalg.norm(p)
    q = q / np.linalg.norm(q)
    m = apply_superop(s, np.outer(p, p.conj()))
    val = np.vdot(q, m @ q)
    if abs(val.imag) > 1e-10:
        raise matcore.NumericalError(f"functional has imaginary part {val.imag:.3e}")
    return float(val.real)


def basis_rotation_matrix(v, basis: HermitianBasis, tol: float = 1e-10) -> np.ndarray:
    """Matrix R with ``V F_a V^{-1} = sum_b R[a,b] F_b`` over traceless elements.

    Requires unitary ``V`` so that the rotated elements stay Hermitian and
    traceless and R is real orthogonal.
    """
    vm = as_cmatrix(v)
    d = basis.dim
    if vm.shape != (d, d):
        raise ShapeError(f"V must be {d}x{d}, got {vm.shape}")
    if np.abs(vm @ vm.conj().T - np.eye(d)).max() > tol:
        raise PreconditionError("V must be unitary to tolerance 1e-10")
    fs = basis.traceless()
    n = len(fs)
    r = np.zeros((n, n))
    for a in range(n):
        rot = vm @ fs[a] @ vm.conj().T
        for b in range(n):
            coeff = np.trace(fs[b].conj().T @ rot)
            r[a, b] = coeff.real
    return r
