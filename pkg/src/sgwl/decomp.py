"""Decomposability machinery and bound-entanglement witnessing.

A map is decomposable when it splits as ``Lambda_1 + Lambda_2 T`` with both
blocks completely positive.  In Choi space this is a convex feasibility
problem: find ``J2 >= 0`` with ``(T (x) id)[J2] <= J``; then
``J1 = J - (T (x) id)[J2]`` completes a certificate.  The solver alternates
exact projections between those two sets (both projections are
eigendecomposition + spectral clipping, using that the partial transpose is
a Frobenius-isometric involution).

Non-decomposability is certified through the duality pairing

    <Lambda, X> = Tr( (Lambda (x) id)[P+] X^T ):

decomposable maps pair nonnegatively with every PPT state, so a PPT state
with a negative pairing simultaneously proves the map non-decomposable and
the state bound-entangled.  The witness search minimizes the pairing over
convex combinations of a fixed family of maximally entangled basis
projectors, subject to the PPT constraint, which for this family reduces to
finitely many linear inequalities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from . import gksl, matcore, posmap
from .gksl import (
    Generator,
    SIGMA,
    identity_superop,
    kron_superop,
    qubit_spec,
    trace_to_identity_superop,
    transpose_superop,
)
from .matcore import (
    FEASIBILITY_TOL,
    PSD_SLACK,
    DomainError,
    NumericalError,
    ShapeError,
    as_cmatrix,
    as_hermitian,
    negative_part,
    partial_transpose,
    psd_part,
)
from .posmap import choi

FEASIBLE = "Feasible"
INFEASIBLE_WITNESSED = "InfeasibleWitnessed"
MAX_ITERATIONS = "MaxIterations"


@dataclass
class WitnessState:
    """A trace-one PSD state on the doubled system, optionally PPT-checked."""

    mat: np.ndarray
    ppt_checked: bool = False

    def __post_init__(self):
        m = as_hermitian(self.mat)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > 1e-12:
            raise DomainError(f"witness state must have trace 1, got {tr}")
        ok, lmin = matcore.is_psd(m)
        if not ok:
            raise DomainError(f"witness state must be PSD, min eigenvalue {lmin:.3e}")
        if self.ppt_checked:
            d = int(round(np.sqrt(m.shape[0])))
            ok, lmin = matcore.is_psd(partial_transpose(m, d, d, "A"))
            if not ok:
                raise DomainError(
                    f"state marked PPT has partial-transpose min eigenvalue {lmin:.3e}"
                )
        self.mat = m


@dataclass
class DecompositionCertificate:
    """PSD Choi blocks realizing ``J = J1 + (T (x) id)[J2]``."""

    j1: np.ndarray
    j2: np.ndarray
    residual: float


@dataclass
class FeasibilityResult:
    status: str
    certificate: DecompositionCertificate | None = None
    witness: WitnessState | None = None
    pairing: float | None = None
    gap: float | None = None
    iterations: int = 0


def pairing_with_choi(j, x) -> float:
    """Duality pairing evaluated from a Choi matrix: Tr(J X^T), real part."""
    jm = as_cmatrix(j)
    xm = as_cmatrix(x)
    if jm.shape != xm.shape:
        raise ShapeError(f"shape mismatch {jm.shape} vs {xm.shape}")
    val = np.trace(jm @ xm.T)
    if abs(val.imag) > 1e-10:
        raise NumericalError(f"pairing has imaginary part {val.imag:.3e}")
    return float(val.real)


def pairing(s, x) -> float:
    """Duality pairing <Lambda, X> of a map (as superoperator) with a state."""
    xm = x.mat if isinstance(x, WitnessState) else x
    return pairing_with_choi(choi(s), xm)


def _qubit_factors(d: int) -> list[np.ndarray]:
    """Unitaries sigma_mu (x) ... twisting the entangled projector: the 4
    Paulis for d = 2, the 16 Pauli pairs for d = 4."""
    if d == 2:
        return list(SIGMA)
    if d == 4:
        return [np.kron(a, b) for a in SIGMA for b in SIGMA]
    raise DomainError(f"no entangled witness family available for d = {d}")


def bell_state_projector(mu: int, nu: int) -> WitnessState:
    """Maximally entangled basis projector of the 4 (x) 4 system obtained by
    twisting the entangled projector with ``sigma_mu (x) sigma_nu`` on the
    second subsystem.  The 16 of them are rank one and mutually orthogonal.
    """
    if not (0 <= mu <= 3 and 0 <= nu <= 3):
        raise DomainError(f"indices must be in 0..3, got ({mu}, {nu})")
    u = np.kron(np.eye(4, dtype=complex), np.kron(SIGMA[mu], SIGMA[nu]))
    p = posmap.maximally_entangled_projector(4)
    return WitnessState(u @ p @ u, ppt_checked=False)


def bell_projector_family(d: int) -> list[WitnessState]:
    """The twisted entangled-projector family for one factor of dimension d."""
    p = posmap.maximally_entangled_projector(d)
    out = []
    for u in _qubit_factors(d):
        ud = np.kron(np.eye(d, dtype=complex), u)
        out.append(WitnessState(ud @ p @ ud.conj().T, ppt_checked=False))
    return out


def bound_entangled_state() -> WitnessState:
    """The 4 (x) 4 bound-entangled state: an equal mixture of six of the
    entangled basis projectors, PPT yet orthogonal to the entangled
    projector itself."""
    support = [(0, 2), (1, 1), (2, 3), (3, 1), (3, 2), (3, 3)]
    m = sum(bell_state_projector(mu, nu).mat for mu, nu in support) / 6.0
    return WitnessState(m, ppt_checked=True)


def witness_product_generator() -> Generator:
    """Generator of the flagship two-qubit product semigroup: a depolarizing
    factor (all rates 1) times a transpose-mixing factor (rates 1, -1, 1)."""
    g1 = gksl.build_generator(qubit_spec(np.diag([1.0, 1.0, 1.0]), label="depolarizing"))
    g2 = gksl.build_generator(qubit_spec(np.diag([1.0, -1.0, 1.0]), label="transpose-mixing"))
    return gksl.product_generator(g1, g2)


def witness_product_map(t: float) -> np.ndarray:
    """The flagship product semigroup at time t, assembled from its closed
    form: (a id + (1-a)/2 Tr) (x) ((1+a)/2 id + (1-a)/2 T), a = exp(-2t)."""
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    a = np.exp(-2.0 * t)
    ident = identity_superop(2)
    first = a * ident + (1 - a) / 2 * trace_to_identity_superop(2)
    second = (1 + a) / 2 * ident + (1 - a) / 2 * transpose_superop(2)
    return kron_superop(first, second, 2, 2)


def explicit_decomposition(t: float) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form blocks (S1, S2) with ``map(t) = S1 + S2 o T`` on M_4.

    S1 is completely positive for every t; S2 is completely positive only
    once exp(-2t) <= 1/3, which is where the family becomes decomposable.
    """
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    a = np.exp(-2.0 * t)
    ident = identity_superop(2)
    tr2 = trace_to_identity_superop(2)
    s1 = kron_superop((1 + a) / 2 * (a * ident + (1 - a) / 2 * tr2), ident, 2, 2)
    s2 = kron_superop((1 - a) / 2 * (a * transpose_superop(2) + (1 - a) / 2 * tr2), ident, 2, 2)
    return s1, s2


def pairing_table(t: float) -> np.ndarray:
    """Pairings of the flagship map with all 16 entangled basis projectors."""
    s = witness_product_map(t)
    j = choi(s)
    table = np.zeros((4, 4))
    for mu in range(4):
        for nu in range(4):
            table[mu, nu] = pairing_with_choi(j, bell_state_projector(mu, nu).mat)
    return table


def noise_pairing_table() -> tuple[np.ndarray, float]:
    """Pairings of the flagship generator's noise part with the entangled
    basis projectors, and with the bound-entangled state.

    Only the row and column of index 0 are nonzero; within the support of
    the bound-entangled state the single contribution is the (0, 2) entry.
    """
    noise = witness_product_generator().noise
    j = choi(noise)
    table = np.zeros((4, 4))
    for mu in range(4):
        for nu in range(4):
            table[mu, nu] = pairing_with_choi(j, bell_state_projector(mu, nu).mat)
    value = pairing_with_choi(j, bound_entangled_state().mat)
    return table, value


def _ppt_inequalities(family: list[WitnessState], d: int):
    """The partial transposes of the family share one eigenbasis; in it the
    PPT constraint on a mixture is a finite set of linear inequalities.

    Returns the matrix M with ``M[e, k] = <v_e| PT[Z_k] |v_e>`` so that a
    weight vector w yields a PPT state iff ``M w >= 0``.
    """
    n = len(family)
    pts = [partial_transpose(z.mat, d, d, "A") for z in family]
    probe = sum((k + 1) * pts[k] for k in range(n))
    basis = np.linalg.eigh(probe)[1]
    m = np.zeros((d * d, n))
    for k, pt in enumerate(pts):
        diag = basis.conj().T @ pt @ basis
        off = np.abs(diag - np.diag(np.diag(diag))).max()
        if off > 1e-10:
            raise NumericalError(
                f"family partial transposes are not simultaneously diagonal (off={off:.2e})"
            )
        m[:, k] = np.diag(diag).real
    return m


def _witness_search(j: np.ndarray, d: int, slack: float) -> tuple[WitnessState, float] | None:
    """Minimize the pairing over PPT mixtures of the entangled basis family.

    Candidates are validated by direct eigendecomposition before anything
    is returned; ties within 1e-11 prefer the canonical bound-entangled
    state so certificates are reproducible.
    """
    try:
        family = bell_projector_family(d)
    except DomainError:
        return None
    values = np.array([pairing_with_choi(j, z.mat) for z in family])
    candidates: list[np.ndarray] = []
    if d == 4:
        candidates.append(bound_entangled_state().mat)
    ineq = _ppt_inequalities(family, d)
    n = len(family)
    res = linprog(
        values,
        A_ub=-ineq,
        b_ub=np.zeros(ineq.shape[0]),
        A_eq=np.ones((1, n)),
        b_eq=[1.0],
        bounds=[(0.0, 1.0)] * n,
        method="highs",
    )
    if res.status == 0:
        w = np.clip(res.x, 0.0, None)
        w /= w.sum()
        candidates.append(sum(w[k] * family[k].mat for k in range(n)))
    best = None
    scored = []
    for mat in candidates:
        ppt_ok, _ = matcore.is_psd(partial_transpose(mat, d, d, "A"))
        if not ppt_ok:
            continue
        val = pairing_with_choi(j, mat)
        scored.append((val, mat))
    if not scored:
        return None
    vmin = min(v for v, _ in scored)
    if vmin >= -slack:
        return None
    for val, mat in scored:
        if val <= vmin + 1e-11:
            return WitnessState(mat, ppt_checked=True), val
    return None


def decomposability_feasibility(
    j,
    max_iter: int = 50000,
    tol: float = FEASIBILITY_TOL,
    stall_window: int = 200,
) -> FeasibilityResult:
    """Decide whether a Choi matrix belongs to the decomposable cone.

    Alternating exact projections search for ``J2 >= 0`` with
    ``(T (x) id)[J2] <= J``.  On success the certificate blocks are returned
    with their assembly residual (which is zero by construction, bounded by
    ``tol``).  When the iteration stalls, a witness is extracted from the
    PPT mixtures of the entangled basis family; if neither certificate can
    be produced the result is an honest MaxIterations with the residual gap.
    """
    jm = as_hermitian(j)
    n = jm.shape[0]
    d = int(round(np.sqrt(n)))
    if d * d != n:
        raise ShapeError(f"Choi matrix must be d^2 x d^2, got {jm.shape}")
    slack = PSD_SLACK * max(1.0, float(np.linalg.norm(jm, 2)))

    ok, _ = matcore.is_psd(jm)
    if ok:
        cert = DecompositionCertificate(j1=jm, j2=np.zeros_like(jm), residual=0.0)
        return FeasibilityResult(status=FEASIBLE, certificate=cert, iterations=0)

    def pt(x):
        return partial_transpose(x, d, d, "A")

    x = np.zeros_like(jm)
    gap = np.inf
    best_gap = np.inf
    since_improvement = 0
    best_lmin = -np.inf
    best_x = None
    polish_left = None
    it = 0
    for it in range(1, max_iter + 1):
        x = x + pt(negative_part(jm - pt(x)))
        x = psd_part(x)
        j1 = jm - pt(x)
        lmin = float(np.linalg.eigvalsh(as_hermitian(j1))[0])
        gap = max(0.0, -lmin)
        if lmin > best_lmin:
            best_lmin = lmin
            best_x = x
        if best_lmin >= -slack:
            # inside the slack zone; run a short polish phase, keep the best
            if polish_left is None:
                polish_left = 100
            polish_left -= 1
            if best_lmin >= -0.02 * slack or polish_left <= 0:
                break
        if gap < best_gap * (1.0 - 1e-12):
            best_gap = gap
            since_improvement = 0
        else:
            since_improvement += 1
            if since_improvement >= stall_window:
                break
    if best_lmin >= -slack and best_x is not None:
        j1 = jm - pt(best_x)
        residual = float(np.linalg.norm(jm - j1 - pt(best_x)))
        if residual <= tol:
            cert = DecompositionCertificate(j1=j1, j2=best_x, residual=residual)
            return FeasibilityResult(status=FEASIBLE, certificate=cert, iterations=it)

    found = _witness_search(jm, d, slack)
    if found is not None:
        witness, value = found
        return FeasibilityResult(
            status=INFEASIBLE_WITNESSED,
            witness=witness,
            pairing=value,
            gap=gap,
            iterations=it,
        )
    return FeasibilityResult(status=MAX_ITERATIONS, gap=gap, iterations=it)


def choi_min_criterion(s) -> float:
    """Threshold criterion: smallest eigenvalue of the Choi matrix."""
    return float(np.linalg.eigvalsh(as_hermitian(choi(s)))[0])


def pairing_criterion(x):
    """Threshold criterion factory: pairing with a fixed state."""
    xm = x.mat if isinstance(x, WitnessState) else as_cmatrix(x)

    def criterion(s) -> float:
        return pairing_with_choi(choi(s), xm)

    return criterion


def find_threshold(
    family,
    criterion,
    t_lo: float,
    t_hi: float,
    tol: float = 1e-9,
    zero_tol: float = 1e-12,
) -> float:
    """Bisection for the sign change of ``criterion(family(t))`` on a bracket.

    Values within ``zero_tol`` of zero count as nonnegative; criteria such
    as a Choi minimum eigenvalue sit on an exact zero plateau past their
    threshold and only roundoff distinguishes them from zero there.
    """
    if not t_lo < t_hi:
        raise DomainError(f"invalid bracket [{t_lo}, {t_hi}]")

    def sgn(v: float) -> int:
        return -1 if v < -zero_tol else 1

    f_lo = criterion(family(t_lo))
    f_hi = criterion(family(t_hi))
    if sgn(f_lo) == sgn(f_hi):
        raise DomainError(
            f"criterion does not change sign on [{t_lo}, {t_hi}]: {f_lo:.3e} vs {f_hi:.3e}"
        )
    lo, hi = t_lo, t_hi
    s_lo = sgn(f_lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = criterion(family(mid))
        if sgn(f_mid) == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass
class NoisePropagationReport:
    """Sub-verdicts for the sufficient condition that propagates
    decomposability from the noise part to the whole semigroup."""

    noise_positivity: posmap.PositivityVerdict
    noise_feasibility: FeasibilityResult
    holds: bool


def decomposability_propagation_check(
    gen: Generator,
    budget: int = 16,
    seed: int = posmap.DEFAULT_SEED,
    max_iter: int = 5000,
) -> NoisePropagationReport:
    """Check the hypothesis under which every map of the semigroup is
    decomposable: the noise part must be a positive map and itself
    decomposable.  Both sub-verdicts are reported; ``holds`` requires the
    positivity search to certify no violation and the feasibility solver to
    return a certificate."""
    noise = gen.noise
    pos = posmap.map_positivity_check(noise, budget=budget, seed=seed)
    feas = decomposability_feasibility(choi(noise), max_iter=max_iter)
    holds = pos.is_positive and feas.status == FEASIBLE
    return NoisePropagationReport(noise_positivity=pos, noise_feasibility=feas, holds=holds)
