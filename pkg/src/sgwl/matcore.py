"""Dense complex matrix kernel.

Everything downstream works on plain ``numpy.ndarray`` objects with
``complex128`` entries.  This module fixes the conventions the rest of the
package relies on:

* vectorization is column-stacking, so ``vec(A X B) == kron(B.T, A) @ vec(X)``;
* Hermitian inputs are gated at a relative tolerance and symmetrized;
* PSD decisions use the slack ``lmin >= -PSD_SLACK * max(1, ||X||_2)`` and
  always report the raw minimum eigenvalue alongside the verdict;
* the matrix exponential is scaling-and-squaring with a fixed order-13
  diagonal Pade approximant (generators are non-normal, eigendecomposition
  is not safe).

All functions are pure; nothing here mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
EIG_RESIDUAL_TOL = 1e-10
PSD_SLACK = 1e-10
FEASIBILITY_TOL = 1e-8
MAX_DIM = 4096


class ShapeError(ValueError):
    """Matrix dimensions do not match the operation's contract."""


class SizeError(ValueError):
    """Requested dimensions exceed the configured maximum."""


class DomainError(ValueError):
    """Scalar argument outside its admissible range."""


class HermiticityError(ValueError):
    """Input failed the Hermiticity gate."""


class PreconditionError(ValueError):
    """A documented precondition on the inputs does not hold."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its accuracy contract."""


def as_cmatrix(x) -> np.ndarray:
    """Validate and return a dense complex matrix (finite entries only)."""
    a = np.asarray(x, dtype=complex)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-d array, got ndim={a.ndim}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise DomainError("matrix entries must be finite (no NaN/Inf)")
    if max(a.shape) > MAX_DIM:
        raise SizeError(f"dimension {max(a.shape)} exceeds maximum {MAX_DIM}")
    return a


def as_hermitian(x, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Gate on Hermiticity and return the symmetrized matrix (X + X†)/2.

    Rejects inputs whose anti-Hermitian part exceeds ``tol`` relative to the
    largest entry; small asymmetries inside the gate are symmetrized away.
    """
    a = as_cmatrix(x)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"Hermitian matrix must be square, got {a.shape}")
    scale = max(np.abs(a).max(), 1.0)
    dev = np.abs(a - a.conj().T).max()
    if dev > tol * scale:
        raise HermiticityError(
            f"matrix is not Hermitian: max |X - X^dag| = {dev:.3e} "
            f"exceeds {tol:.1e} * {scale:.3e}"
        )
    return (a + a.conj().T) / 2


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""

    values: np.ndarray
    vectors: np.ndarray


def hermitian_eig(h, check: bool = True) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix with a residual guarantee.

    Raises ``NumericalError`` when ``||H v_i - w_i v_i|| > EIG_RESIDUAL_TOL
    * ||H||`` for any eigenpair, or when the eigenvector matrix is not
    unitary to the same tolerance.
    """
    hm = as_hermitian(h)
    try:
        w, v = np.linalg.eigh(hm)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed to converge: {exc}") from exc
    if check:
        scale = max(np.linalg.norm(hm, 2), 1e-300)
        resid = np.linalg.norm(hm @ v - v * w, axis=0).max()
        if resid > EIG_RESIDUAL_TOL * scale:
            raise NumericalError(
                f"eigenpair residual {resid:.3e} exceeds {EIG_RESIDUAL_TOL:.1e} * ||H||"
            )
        unit = np.abs(v.conj().T @ v - np.eye(hm.shape[0])).max()
        if unit > 1e-10:
            raise NumericalError(f"eigenvector matrix not unitary: deviation {unit:.3e}")
    return Spectrum(values=w, vectors=v)


def min_eigenvalue(h) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(np.linalg.eigvalsh(as_hermitian(h))[0])


def is_psd(h, slack: float = PSD_SLACK) -> tuple[bool, float]:
    """PSD decision with relative slack; returns (verdict, raw min eigenvalue)."""
    hm = as_hermitian(h)
    lmin = float(np.linalg.eigvalsh(hm)[0])
    bound = -slack * max(1.0, float(np.linalg.norm(hm, 2)))
    return lmin >= bound, lmin


def psd_part(h) -> np.ndarray:
    """Projection onto the PSD cone: clip negative eigenvalues to zero."""
    w, v = np.linalg.eigh(as_hermitian(h))
    return (v * np.clip(w, 0.0, None)) @ v.conj().T


def negative_part(h) -> np.ndarray:
    """Negative spectral part, so that ``h == psd_part(h) + negative_part(h)``."""
    w, v = np.linalg.eigh(as_hermitian(h))
    return (v * np.where(w < 0.0, w, 0.0)) @ v.conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product with the dimension cap enforced."""
    am = as_cmatrix(a)
    bm = as_cmatrix(b)
    if am.shape[0] * bm.shape[0] > MAX_DIM or am.shape[1] * bm.shape[1] > MAX_DIM:
        raise SizeError(
            f"kron output {am.shape[0] * bm.shape[0]}x{am.shape[1] * bm.shape[1]} "
            f"exceeds maximum {MAX_DIM}"
        )
    return np.kron(am, bm)


def vectorize(x) -> np.ndarray:
    """Column-stacking vec: |i><j| goes to the basis vector at index j*d + i."""
    return as_cmatrix(x).T.reshape(-1)


def devectorize(v, dim: int | None = None) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    vv = np.asarray(v, dtype=complex).reshape(-1)
    if dim is None:
        dim = int(round(np.sqrt(vv.size)))
    if dim * dim != vv.size:
        raise ShapeError(f"vector of length {vv.size} is not a stacked {dim}x{dim} matrix")
    return vv.reshape(dim, dim).T


def partial_transpose(x, dim_a: int, dim_b: int, side: str = "A") -> np.ndarray:
    """Transpose one tensor factor in the computational product basis.

    ``side`` selects the factor ("A" is the first, ``dim_a``-dimensional
    one).  Involutive: applying it twice is the identity.
    """
    xm = as_cmatrix(x)
    n = dim_a * dim_b
    if xm.shape != (n, n):
        raise ShapeError(f"expected {n}x{n} matrix for dims ({dim_a},{dim_b}), got {xm.shape}")
    if side not in ("A", "B"):
        raise DomainError(f"side must be 'A' or 'B', got {side!r}")
    x4 = xm.reshape(dim_a, dim_b, dim_a, dim_b)
    if side == "A":
        x4 = x4.transpose(2, 1, 0, 3)
    else:
        x4 = x4.transpose(0, 3, 2, 1)
    return x4.reshape(n, n)


def partial_trace(x, dim_a: int, dim_b: int, keep: str = "A") -> np.ndarray:
    """Trace out one tensor factor, keeping the other."""
    xm = as_cmatrix(x)
    n = dim_a * dim_b
    if xm.shape != (n, n):
        raise ShapeError(f"expected {n}x{n} matrix for dims ({dim_a},{dim_b}), got {xm.shape}")
    x4 = xm.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("ikjk->ij", x4)
    if keep == "B":
        return np.einsum("kikj->ij", x4)
    raise DomainError(f"keep must be 'A' or 'B', got {keep!r}")


# Pade-13 coefficients and the scaling threshold theta_13 (Higham 2005).
_PADE13 = np.array(
    [
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0,
        670442572800.0, 33522128640.0, 1323241920.0,
        40840800.0, 960960.0, 16380.0, 182.0, 1.0,
    ]
)
_THETA13 = 5.371920351148152


def expm(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring with the order-13 Pade core."""
    am = as_cmatrix(a)
    if am.shape[0] != am.shape[1]:
        raise ShapeError(f"expm requires a square matrix, got {am.shape}")
    n = am.shape[0]
    norm1 = float(np.linalg.norm(am, 1))
    squarings = 0
    if norm1 > _THETA13:
        squarings = int(np.ceil(np.log2(norm1 / _THETA13)))
        am = am / (2.0 ** squarings)
    ident = np.eye(n, dtype=complex)
    a2 = am @ am
    a4 = a2 @ a2
    a6 = a4 @ a2
    b = _PADE13
    u = am @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
              + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2) \
        + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident
    try:
        r = np.linalg.solve(v - u, u + v)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Pade denominator is singular: {exc}") from exc
    for _ in range(squarings):
        r = r @ r
    return r
