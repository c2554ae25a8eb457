import numpy as np
import pytest

from sgwl import gksl, matcore
from sgwl.gksl import (
    SIGMA,
    HermitianBasis,
    apply_superop,
    build_generator,
    evolve,
    gell_mann_basis,
    kron_superop,
    pauli_basis,
    positivity_functional,
    product_generator,
    qubit_spec,
)
from sgwl.matcore import DomainError, PreconditionError

from helpers import (
    random_complex,
    random_density,
    random_hermitian,
    random_orthonormal_pair,
    random_unitary,
)


def gram(elems):
    n = len(elems)
    g = np.zeros((n, n), dtype=complex)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            g[i, j] = np.trace(a.conj().T @ b)
    return g


class TestBases:
    def test_pauli_orthonormal_traceless(self):
        b = pauli_basis()
        assert np.abs(gram(b.elements) - np.eye(4)).max() < 1e-12
        for f in b.traceless():
            assert abs(np.trace(f)) < 1e-12
        # sigma_2 element: unit Hilbert-Schmidt norm, traceless
        f2 = b.elements[2]
        assert abs(np.trace(f2.conj().T @ f2) - 1.0) < 1e-12

    def test_pauli_ordering(self):
        b = pauli_basis()
        for k in range(4):
            assert np.abs(b.elements[k] - SIGMA[k] / np.sqrt(2)).max() < 1e-15

    def test_gell_mann_3(self):
        b = gell_mann_basis(3)
        assert len(b.elements) == 9
        assert all(abs(np.trace(f)) < 1e-12 for f in b.traceless())
        assert np.abs(gram(b.elements) - np.eye(9)).max() < 1e-12

    def test_gell_mann_4_gram(self):
        b = gell_mann_basis(4)
        assert np.abs(gram(b.elements) - np.eye(16)).max() < 1e-12

    def test_gell_mann_2_matches_pauli(self):
        b2 = gell_mann_basis(2)
        bp = pauli_basis()
        for x, y in zip(b2.elements, bp.elements):
            assert np.abs(x - y).max() < 1e-15

    def test_dimension_gate(self):
        with pytest.raises(DomainError):
            gell_mann_basis(1)


class TestBuildGenerator:
    def test_depolarizing_closed_form(self):
        # all rates 1: L[rho] = Tr(rho) id - 2 rho
        gen = build_generator(qubit_spec(np.diag([1.0, 1.0, 1.0])))
        rng = np.random.default_rng(11)
        for _ in range(5):
            rho = random_complex(rng, 2)
            expect = np.trace(rho) * np.eye(2) - 2 * rho
            assert np.abs(apply_superop(gen.full, rho) - expect).max() < 1e-12

    def test_transpose_mixing_closed_form(self):
        # rates (1, -1, 1): L[rho] = -2 r2 sigma_2
        gen = build_generator(qubit_spec(np.diag([1.0, -1.0, 1.0])))
        rng = np.random.default_rng(12)
        for _ in range(5):
            rho = random_complex(rng, 2)
            r2 = np.trace(rho @ SIGMA[2]) / 2
            assert np.abs(apply_superop(gen.full, rho) + 2 * r2 * SIGMA[2]).max() < 1e-12

    def test_pure_hamiltonian(self):
        rng = np.random.default_rng(13)
        h = random_hermitian(rng, 2)
        gen = build_generator(qubit_spec(np.zeros((3, 3)), hamiltonian=h))
        rho = random_density(rng, 2)
        expect = -1j * (h @ rho - rho @ h)
        assert np.abs(apply_superop(gen.full, rho) - expect).max() < 1e-13

    def test_parts_recompose(self):
        rng = np.random.default_rng(14)
        gen = build_generator(qubit_spec(random_hermitian(rng, 3), random_hermitian(rng, 2)))
        assert np.abs(gen.full - gen.noise - gen.pseudo_h).max() < 1e-12

    def test_trace_preservation(self):
        rng = np.random.default_rng(15)
        gen = build_generator(qubit_spec(random_hermitian(rng, 3), random_hermitian(rng, 2)))
        for _ in range(5):
            x = random_complex(rng, 2)
            assert abs(np.trace(apply_superop(gen.full, x))) < 1e-10

    def test_basis_independence(self):
        # conjugating the basis by a unitary and rotating C accordingly
        # leaves the assembled generator unchanged
        rng = np.random.default_rng(16)
        for d in (2, 3):
            basis = gksl.standard_basis(d)
            c = random_hermitian(rng, d * d - 1)
            h = random_hermitian(rng, d)
            gen = build_generator(gksl.KossakowskiSpec(d, h, c, basis))
            u = random_unitary(rng, d)
            rot = gksl.basis_rotation_matrix(u, basis)
            rotated = HermitianBasis(
                d, (basis.elements[0],) + tuple(u @ f @ u.conj().T for f in basis.traceless())
            )
            gen2 = build_generator(
                gksl.KossakowskiSpec(d, h, rot @ c @ rot.T, rotated)
            )
            assert np.abs(gen.full - gen2.full).max() < 1e-9


class TestProductGenerator:
    def test_one_sided_action(self):
        g1 = build_generator(qubit_spec(np.diag([1.0, 1.0, 1.0])))
        g0 = build_generator(qubit_spec(np.zeros((3, 3))))
        gp = product_generator(g1, g0)
        rng = np.random.default_rng(17)
        r1, r2 = random_density(rng, 2), random_density(rng, 2)
        t = 0.7
        lhs = apply_superop(evolve(gp, t), np.kron(r1, r2))
        rhs = np.kron(apply_superop(evolve(g1, t), r1), r2)
        assert np.abs(lhs - rhs).max() < 1e-12

    def test_product_closed_forms(self):
        g1 = build_generator(qubit_spec(np.diag([1.0, 1.0, 1.0])))
        g2 = build_generator(qubit_spec(np.diag([1.0, -1.0, 1.0])))
        gp = product_generator(g1, g2)
        rng = np.random.default_rng(18)
        t = 0.3
        a = np.exp(-2 * t)
        s = evolve(gp, t)
        for _ in range(5):
            r1, r2 = random_density(rng, 2), random_density(rng, 2)
            out1 = a * r1 + (1 - a) / 2 * np.eye(2)
            out2 = r2 - (1 - a) * (np.trace(r2 @ SIGMA[2]) / 2) * SIGMA[2]
            assert np.abs(apply_superop(s, np.kron(r1, r2)) - np.kron(out1, out2)).max() < 1e-10

    def test_trace_preserved(self):
        g1 = build_generator(qubit_spec(np.diag([1.0, 1.0, 1.0])))
        g2 = build_generator(qubit_spec(np.diag([1.0, -1.0, 1.0])))
        s = evolve(product_generator(g1, g2), 0.9)
        rng = np.random.default_rng(19)
        x = random_complex(rng, 4)
        assert abs(np.trace(apply_superop(s, x)) - np.trace(x)) < 1e-12

    def test_dim_mismatch(self):
        g2 = build_generator(qubit_spec(np.diag([1.0, 1.0, 1.0])))
        g3 = build_generator(
            gksl.KossakowskiSpec(3, np.zeros((3, 3)), np.eye(8), gell_mann_basis(3))
        )
        with pytest.raises(matcore.ShapeError):
            product_generator(g2, g3)


class TestEvolve:
    def test_time_zero_is_identity(self):
        gen = build_generator(qubit_spec(np.diag([1.0, -1.0, 1.0])))
        assert np.abs(evolve(gen, 0.0) - np.eye(4)).max() < 1e-15

    def test_half_mixing_action(self):
        # a = 1/2 at t = log(2)/2: rho -> rho - (1/2) r2 sigma_2
        gen = build_generator(qubit_spec(np.diag([1.0, -1.0, 1.0])))
        out = apply_superop(evolve(gen, np.log(2) / 2), (SIGMA[0] + SIGMA[2]) / 2)
        assert np.abs(out - (SIGMA[0] + SIGMA[2] / 2) / 2).max() < 1e-12

    def test_composition_law(self):
        rng = np.random.default_rng(20)
        gen = build_generator(qubit_spec(random_hermitian(rng, 3), random_hermitian(rng, 2)))
        lhs = evolve(gen, 0.4) @ evolve(gen, 1.1)
        assert np.abs(lhs - evolve(gen, 1.5)).max() < 1e-9

    def test_negative_time_rejected(self):
        gen = build_generator(qubit_spec(np.eye(3)))
        with pytest.raises(DomainError):
            evolve(gen, -0.1)

    def test_hermiticity_preserved(self):
        rng = np.random.default_rng(21)
        gen = build_generator(qubit_spec(random_hermitian(rng, 3), random_hermitian(rng, 2)))
        rho = random_density(rng, 2)
        out = apply_superop(evolve(gen, 0.8), rho)
        assert np.abs(out - out.conj().T).max() < 1e-10


class TestKronSuperop:
    def test_matches_direct_action(self):
        rng = np.random.default_rng(22)
        for da, db in ((2, 2), (2, 3)):
            sa = random_complex(rng, da * da)
            sb = random_complex(rng, db * db)
            s = kron_superop(sa, sb, da, db)
            x = random_complex(rng, da * db)
            direct = np.zeros_like(x)
            for a in range(da):
                for b in range(da):
                    ea = np.zeros((da, da), dtype=complex)
                    ea[a, b] = 1.0
                    blk = x[a * db:(a + 1) * db, b * db:(b + 1) * db]
                    direct += np.kron(apply_superop(sa, ea), apply_superop(sb, blk))
            assert np.abs(apply_superop(s, x) - direct).max() < 1e-12


class TestPositivityFunctional:
    def test_cp_generator_nonnegative(self):
        gen = build_generator(qubit_spec(np.diag([1.0, 1.0, 1.0])))
        rng = np.random.default_rng(23)
        for _ in range(20):
            psi, phi = random_orthonormal_pair(rng, 2)
            assert positivity_functional(gen, psi, phi) >= -1e-12

    def test_map_functional_on_noise(self):
        # the transpose-mixing noise is not positive: value -1/2 at (1, i)/sqrt(2)
        gen = build_generator(qubit_spec(np.diag([1.0, -1.0, 1.0])))
        psi = np.array([1.0, 1.0j]) / np.sqrt(2)
        assert gksl.map_functional(gen.noise, psi, psi) == pytest.approx(-0.5, abs=1e-12)

    def test_product_functional_identity(self):
        # for a product generator the functional is a quadratic form of the
        # two coefficient matrices in the overlap vectors w and v
        rng = np.random.default_rng(24)
        basis = pauli_basis()
        c1 = random_hermitian(rng, 3)
        c2 = random_hermitian(rng, 3)
        g1 = build_generator(gksl.KossakowskiSpec(2, np.zeros((2, 2)), c1, basis))
        g2 = build_generator(gksl.KossakowskiSpec(2, np.zeros((2, 2)), c2, basis))
        gp = product_generator(g1, g2)
        fs = basis.traceless()
        for _ in range(10):
            psi, phi = random_orthonormal_pair(rng, 4)
            big_psi = psi.reshape(2, 2)
            big_phi = phi.reshape(2, 2)
            w = np.array([np.trace(f.conj().T @ big_phi @ big_psi.conj().T) for f in fs])
            v = np.array([np.trace(f.conj().T @ (big_psi.conj().T @ big_phi).T) for f in fs])
            expect = (w.conj() @ c1 @ w + v.conj() @ c2 @ v).real
            assert positivity_functional(gp, psi, phi) == pytest.approx(expect, abs=1e-10)

    def test_orthogonality_gate(self):
        gen = build_generator(qubit_spec(np.eye(3)))
        psi = np.array([1.0, 0.0])
        with pytest.raises(PreconditionError):
            positivity_functional(gen, psi, psi)
