"""Verdicts on maps and generators.

Complete positivity is decided through the Choi matrix.  Positivity of a
generated semigroup is decided through the sign of the two-vector functional

    f(psi, phi) = Re <phi| L[|psi><psi|] |phi>,   <phi|psi> = 0,

which is nonnegative for all orthonormal pairs exactly when every map of
the semigroup is positive.  There is no closed-form test beyond d = 2, so
the checker minimizes f by multistart projected gradient descent; violation
reports are always re-validated by direct evaluation before being returned,
while a "positive" outcome is a statement about the search, not a proof
(hence the Undetermined status when starts disagree).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gksl, matcore
from .gksl import Generator, HermitianBasis, apply_superop
from .matcore import PSD_SLACK, PreconditionError, ShapeError, as_cmatrix, as_hermitian

STATUS_CP = "CompletelyPositive"
STATUS_POSITIVE_NOT_CP = "PositiveNotCP"
STATUS_NOT_POSITIVE = "NotPositive"
STATUS_UNDETERMINED = "Undetermined"

DEFAULT_BUDGET = 64
DEFAULT_SEED = 0x5EED
SPREAD_TOL = 1e-8


@dataclass
class PositivityVerdict:
    """Outcome of a positivity / complete-positivity question.

    Exactly one kind of certificate is populated, depending on how the
    verdict was reached: the minimal Choi eigenpair, a violating vector
    pair with its functional value, or the best minimum found by the
    optimizer together with its per-start statistics.
    """

    status: str
    min_value: float | None = None
    pair: tuple[np.ndarray, np.ndarray] | None = None
    choi_min_eig: float | None = None
    choi_min_vector: np.ndarray | None = None
    start_values: np.ndarray | None = field(default=None, repr=False)
    spread: float | None = None

    @property
    def is_cp(self) -> bool:
        return self.status == STATUS_CP

    @property
    def is_positive(self) -> bool:
        """True when the verdict asserts positivity (CP included)."""
        return self.status in (STATUS_CP, STATUS_POSITIVE_NOT_CP)


def choi(s) -> np.ndarray:
    """Choi matrix of a map on M_d: the image of the maximally entangled
    projector under ``Lambda (x) id``, trace 1 for trace-preserving maps.

    With column-stacking this is an index reshuffle of the superoperator.
    """
    sm = as_cmatrix(s)
    d = int(round(np.sqrt(sm.shape[0])))
    if sm.shape != (d * d, d * d):
        raise ShapeError(f"superoperator must be d^2 x d^2, got {sm.shape}")
    return sm.reshape(d, d, d, d).transpose(1, 3, 0, 2).reshape(d * d, d * d) / d


def maximally_entangled_projector(d: int) -> np.ndarray:
    """Rank-one trace-one projector onto sum_i |ii>/sqrt(d)."""
    v = np.zeros(d * d, dtype=complex)
    for i in range(d):
        v[i * d + i] = 1.0
    v /= np.sqrt(d)
    return np.outer(v, v.conj())


def is_completely_positive(s, slack: float = PSD_SLACK) -> PositivityVerdict:
    """CP verdict via positivity of the Choi matrix.

    Returns status CompletelyPositive or Undetermined (not CP says nothing
    about plain positivity); the minimal Choi eigenpair is attached.
    """
    j = as_hermitian(choi(s))
    eig = matcore.hermitian_eig(j)
    lmin = float(eig.values[0])
    bound = -slack * max(1.0, float(np.abs(eig.values).max()))
    status = STATUS_CP if lmin >= bound else STATUS_UNDETERMINED
    return PositivityVerdict(
        status=status,
        choi_min_eig=lmin,
        choi_min_vector=eig.vectors[:, 0],
    )


def _normalize_params(x: np.ndarray, d: int) -> np.ndarray:
    psi = x[:d] + 1j * x[d:]
    n = np.linalg.norm(psi)
    if n < 1e-14:
        psi = np.zeros(d, dtype=complex)
        psi[0] = 1.0
        return np.concatenate([psi.real, psi.imag])
    return x / n


def _params_to_state(x: np.ndarray, d: int) -> np.ndarray:
    psi = x[:d] + 1j * x[d:]
    return psi / np.linalg.norm(psi)


def _orthogonal_complement(psi: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane orthogonal to psi, as columns."""
    d = psi.size
    a = np.column_stack([psi, np.eye(d, dtype=complex)])
    q = np.linalg.qr(a)[0]
    return q[:, 1:d]


def _batch_states(xs: np.ndarray, d: int) -> np.ndarray:
    psi = xs[:, :d] + 1j * xs[:, d:]
    return psi / np.linalg.norm(psi, axis=1, keepdims=True)


def _batch_images(l_mat: np.ndarray, psi: np.ndarray, d: int) -> np.ndarray:
    """Hermitian matrices L[|psi><psi|] for a batch of unit vectors."""
    proj = psi[:, :, None] * psi[:, None, :].conj()
    vecs = proj.transpose(0, 2, 1).reshape(psi.shape[0], d * d)
    imgs = (vecs @ l_mat.T).reshape(psi.shape[0], d, d).transpose(0, 2, 1)
    return (imgs + imgs.conj().transpose(0, 2, 1)) / 2


def _restricted_min_values(l_mat: np.ndarray, xs: np.ndarray, d: int) -> np.ndarray:
    """min over unit phi orthogonal to psi of <phi| L[|psi><psi|] |phi>."""
    psi = _batch_states(xs, d)
    m = _batch_images(l_mat, psi, d)
    if d == 2:
        q = np.stack([-psi[:, 1].conj(), psi[:, 0].conj()], axis=1)
        return np.einsum("mi,mij,mj->m", q.conj(), m, q).real
    a = np.concatenate(
        [psi[:, :, None], np.broadcast_to(np.eye(d, dtype=complex), (psi.shape[0], d, d))],
        axis=2,
    )
    q = np.linalg.qr(a)[0][:, :, 1:d]
    mc = q.conj().transpose(0, 2, 1) @ m @ q
    return np.linalg.eigvalsh(mc)[:, 0].real


def _free_min_values(l_mat: np.ndarray, xs: np.ndarray, d: int) -> np.ndarray:
    """min over all unit phi of <phi| S[|psi><psi|] |phi> (map positivity)."""
    psi = _batch_states(xs, d)
    m = _batch_images(l_mat, psi, d)
    return np.linalg.eigvalsh(m)[:, 0].real


def _descend(value_fn, d: int, rng: np.random.Generator, max_iter: int):
    """Projected gradient descent on the unit sphere with step halving."""
    x = _normalize_params(rng.normal(size=2 * d), d)
    val = float(value_fn(x[None, :])[0])
    step = 0.25
    h = 1e-6
    eye = np.eye(2 * d) * h
    for _ in range(max_iter):
        pts = np.concatenate([x + eye, x - eye])
        vs = value_fn(pts)
        grad = (vs[: 2 * d] - vs[2 * d :]) / (2 * h)
        if np.linalg.norm(grad) < 1e-12:
            break
        accepted = False
        while step >= 1e-12:
            xn = _normalize_params(x - step * grad, d)
            vn = float(value_fn(xn[None, :])[0])
            if vn < val - 1e-15:
                x, val = xn, vn
                step = min(step * 1.5, 1.0)
                accepted = True
                break
            step /= 2
        if not accepted:
            break
    return val, x


def _multistart(value_fn, d: int, budget: int, seed: int, max_iter: int,
                stop_below: float):
    """Independent descents with per-start derived seeds; min over starts."""
    best_val = np.inf
    best_x = None
    start_values = []
    for s in range(budget):
        rng = np.random.default_rng(seed + s)
        val, x = _descend(value_fn, d, rng, max_iter)
        start_values.append(val)
        if val < best_val:
            best_val, best_x = val, x
        if best_val < stop_below:
            break
    return best_val, best_x, np.array(start_values)


def _spread(start_values: np.ndarray, k: int = 5) -> float:
    top = np.sort(start_values)[: min(k, start_values.size)]
    return float(top[-1] - top[0])


def kossakowski_positivity_check(
    gen: Generator,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
    max_iter: int = 200,
) -> PositivityVerdict:
    """Decide positivity of the generated semigroup by minimizing the
    orthogonal-pair functional of the generator.

    For each start psi is drawn uniformly on the unit sphere; the inner
    problem over phi is solved exactly as the minimal eigenvalue of
    L[|psi><psi|] compressed to the orthogonal complement of psi, and the
    outer problem runs projected gradient descent with a numerical
    gradient.  A NotPositive verdict always carries a re-validated pair;
    otherwise the verdict is CompletelyPositive (when the Kossakowski
    matrix itself is PSD), PositiveNotCP, or Undetermined when the best
    starts disagree by more than the spread tolerance.
    """
    if budget < 1:
        raise PreconditionError(f"budget must be >= 1, got {budget}")
    d = gen.dim
    l_mat = gen.full

    def values(xs):
        return _restricted_min_values(l_mat, xs, d)

    best_val, best_x, start_values = _multistart(
        values, d, budget, seed, max_iter, stop_below=-1e-8
    )

    if best_val < -PSD_SLACK:
        psi = _params_to_state(best_x, d)
        m = as_hermitian(apply_superop(l_mat, np.outer(psi, psi.conj())))
        comp = _orthogonal_complement(psi)
        sub = matcore.hermitian_eig(comp.conj().T @ m @ comp, check=False)
        phi = comp @ sub.vectors[:, 0]
        value = gksl.positivity_functional(gen, psi, phi)
        if value < -PSD_SLACK:
            return PositivityVerdict(
                status=STATUS_NOT_POSITIVE,
                min_value=value,
                pair=(psi, phi),
                start_values=start_values,
            )

    spread = _spread(start_values)
    status = STATUS_POSITIVE_NOT_CP if spread <= SPREAD_TOL else STATUS_UNDETERMINED
    if gen.spec is not None:
        c_psd, _ = matcore.is_psd(gen.spec.c_matrix)
        if c_psd:
            status = STATUS_CP
    return PositivityVerdict(
        status=status,
        min_value=float(best_val),
        start_values=start_values,
        spread=spread,
    )


def map_positivity_check(
    s,
    budget: int = 16,
    seed: int = DEFAULT_SEED,
    max_iter: int = 200,
) -> PositivityVerdict:
    """Decide positivity of a single map by minimizing the smallest
    eigenvalue of S[|psi><psi|] over pure states (no orthogonality here:
    a map is positive iff these images are all PSD).

    CP maps short-circuit through the Choi check.
    """
    sm = as_cmatrix(s)
    d = int(round(np.sqrt(sm.shape[0])))
    cp = is_completely_positive(sm)
    if cp.is_cp:
        return cp

    def values(xs):
        return _free_min_values(sm, xs, d)

    best_val, best_x, start_values = _multistart(
        values, d, budget, seed, max_iter, stop_below=-1e-8
    )
    if best_val < -PSD_SLACK:
        psi = _params_to_state(best_x, d)
        m = as_hermitian(apply_superop(sm, np.outer(psi, psi.conj())))
        sub = matcore.hermitian_eig(m, check=False)
        phi = sub.vectors[:, 0]
        value = gksl.map_functional(sm, psi, phi)
        if value < -PSD_SLACK:
            return PositivityVerdict(
                status=STATUS_NOT_POSITIVE,
                min_value=value,
                pair=(psi, phi),
                start_values=start_values,
                choi_min_eig=cp.choi_min_eig,
            )
    spread = _spread(start_values)
    status = STATUS_POSITIVE_NOT_CP if spread <= SPREAD_TOL else STATUS_UNDETERMINED
    return PositivityVerdict(
        status=status,
        min_value=float(best_val),
        start_values=start_values,
        spread=spread,
        choi_min_eig=cp.choi_min_eig,
    )


def qubit_positivity_conditions(c1: float, c2: float, c3: float) -> bool:
    """Closed-form qubit test: positive semigroup iff all pairwise sums of
    the (diagonal, real) Kossakowski coefficients are nonnegative."""
    return c1 + c2 >= 0 and c2 + c3 >= 0 and c1 + c3 >= 0


@dataclass
class ProductConditionReport:
    """Result of the necessary spectral test for product-semigroup positivity."""

    combined: np.ndarray
    min_eigenvalue: float
    v_matrix: np.ndarray
    necessary_ok: bool
    sufficient_ok: bool | None = None


def product_positivity_necessary(
    c1, c2, basis: HermitianBasis, v
) -> ProductConditionReport:
    """Necessary condition for positivity of a product semigroup: for any
    unitary V, the matrix ``C1 + R^T C2 R`` must be PSD, where R is the
    rotation V induces on the traceless basis sector."""
    c1m = as_hermitian(c1)
    c2m = as_hermitian(c2)
    r = gksl.basis_rotation_matrix(v, basis)
    combined = as_hermitian(c1m + r.T @ c2m @ r)
    ok, lmin = matcore.is_psd(combined)
    return ProductConditionReport(
        combined=combined,
        min_eigenvalue=lmin,
        v_matrix=as_cmatrix(v),
        necessary_ok=ok,
    )


def product_positivity_sufficient(c1, c2) -> bool:
    """Sufficient condition for positivity of a product semigroup with both
    coefficient matrices diagonal: with at most one negative rate, in the
    second factor only, every other rate must dominate its magnitude."""
    a1 = np.asarray(c1, dtype=float)
    a2 = np.asarray(c2, dtype=float)
    if a1.shape != a2.shape or a1.ndim != 1:
        raise ShapeError("c1 and c2 must be equal-length 1-d real arrays")
    if np.any(a1 < 0):
        raise PreconditionError("all first-factor rates must be nonnegative")
    negatives = np.flatnonzero(a2 < 0)
    if negatives.size > 1:
        raise PreconditionError("at most one negative rate is allowed in the second factor")
    if negatives.size == 0:
        return True
    k = negatives[0]
    mag = abs(a2[k])
    others = np.delete(a2, k)
    return bool(np.all(a1 >= mag) and np.all(others >= mag))


def qubit_product_positivity(c1, c2) -> bool:
    """Full qubit product criterion (the sufficient condition is also
    necessary in d = 2): all cross sums ``c1_i + c2_j`` must be nonnegative.

    Both triples must individually pass the closed-form qubit test.
    """
    a1 = np.asarray(c1, dtype=float)
    a2 = np.asarray(c2, dtype=float)
    if a1.shape != (3,) or a2.shape != (3,):
        raise ShapeError("expected two triples of real rates")
    for name, a in (("first", a1), ("second", a2)):
        if not qubit_positivity_conditions(*a):
            raise PreconditionError(f"{name} factor is not a positive semigroup")
    return bool(np.all(a1[:, None] + a2[None, :] >= 0))
