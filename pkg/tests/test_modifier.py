import numpy as np
import pytest

from conjlim.criteria import keeps_image_invariant, keeps_kernel_invariant
from conjlim.goodpath import construct_good_path
from conjlim.modifier import (
    ConjugationFamilyError,
    Modifier,
    apply,
    conjugation_family_bound,
    diagonal_bound_certificate,
    gershgorin_region,
    nilpotent_faithful,
    nilpotent_faithful_randomized,
    some_path_bounded,
    some_path_bounded_dual,
)
from conjlim.numkit import (
    InvalidInputError,
    ginibre,
    kernel_basis,
    operator_norm,
    random_singular,
)


def unit(n, i, j):
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1.0
    return e


def corner_example():
    """3x3 rank-one diagonal base with the (1,3) Hadamard pattern."""
    z = np.diag([1.0, 0.0, 0.0]).astype(complex)
    return z, Modifier.hadamard(unit(3, 0, 2))


def random_member(z, rng):
    from conjlim.criteria import kernel_algebra_basis

    basis = kernel_algebra_basis(z)
    coeff = ginibre(len(basis), 1, rng).reshape(-1)
    return sum(c * b for c, b in zip(coeff, basis))


class TestApply:
    def test_delete_diagonal_kills_identity(self):
        j = Modifier.delete_diagonal(3)
        assert np.allclose(apply(j, np.eye(3)), 0.0)

    def test_delete_diagonal_fixes_offdiagonal_unit(self):
        j = Modifier.delete_diagonal(3)
        assert np.allclose(apply(j, unit(3, 0, 1)), unit(3, 0, 1))

    def test_general_identity(self):
        phi = Modifier.general(np.eye(9))
        a = ginibre(3, rng=np.random.default_rng(0))
        assert np.allclose(apply(phi, a), a)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            apply(Modifier.identity(2), np.eye(3))

    def test_operator_matrix_consistency(self):
        rng = np.random.default_rng(1)
        a = ginibre(3, rng=rng)
        for phi in (
            Modifier.identity(3),
            Modifier.hadamard(ginibre(3, rng=rng)),
            Modifier.general(ginibre(9, rng=rng)),
        ):
            via_op = (phi.as_operator() @ a.reshape(-1, order="F")).reshape((3, 3), order="F")
            assert np.allclose(apply(phi, a), via_op, atol=1e-12)


class TestSomePathBounded:
    def test_corner_pattern_accepts_every_matrix(self):
        z, phi = corner_example()
        rng = np.random.default_rng(2)
        for s in range(30):
            a = ginibre(3, rng=rng)
            verdict = some_path_bounded(a, z, phi, seed=s)
            assert verdict.member
            # witness is an admissible companion making the pole term vanish
            c = verdict.witness
            assert np.linalg.norm(z @ c, 2) < 1e-10
            assert np.linalg.norm(apply(phi, z @ a @ c), 2) < 1e-8

    def test_identity_modifier_matches_kernel_criterion(self):
        rng = np.random.default_rng(3)
        for i in range(200):
            n = int(rng.integers(2, 6))
            z = random_singular(n, int(rng.integers(1, n)), rng)
            a = random_member(z, rng) if i % 2 == 0 else ginibre(n, rng=rng)
            got = some_path_bounded(a, z, Modifier.identity(n), seed=i).member
            assert got == keeps_kernel_invariant(a, z).member

    def test_delete_diagonal_collapses_to_kernel_criterion(self):
        rng = np.random.default_rng(4)
        for i in range(30):
            n = int(rng.integers(2, 6))
            z = random_singular(n, int(rng.integers(1, n)), rng)
            a = random_member(z, rng) if i % 2 == 0 else ginibre(n, rng=rng)
            got = some_path_bounded(a, z, Modifier.delete_diagonal(n), seed=i).member
            assert got == keeps_kernel_invariant(a, z).member

    def test_invertible_base_accepts_everything(self):
        rng = np.random.default_rng(5)
        z = np.eye(3) + 0.2 * ginibre(3, rng=rng)
        verdict = some_path_bounded(ginibre(3, rng=rng), z, Modifier.identity(3), seed=0)
        assert verdict.member

    def test_verdicts_stable_across_seeds(self):
        rng = np.random.default_rng(6)
        z = random_singular(4, 2, rng)
        member = random_member(z, rng)
        generic = ginibre(4, rng=rng)
        j = Modifier.delete_diagonal(4)
        for a, expected in ((member, True), (generic, False)):
            verdicts = {some_path_bounded(a, z, j, seed=s).member for s in range(5)}
            assert verdicts == {expected}


class TestSomePathBoundedDual:
    def test_identity_matches_image_criterion(self):
        rng = np.random.default_rng(7)
        for i in range(30):
            n = int(rng.integers(2, 6))
            z = random_singular(n, int(rng.integers(1, n)), rng)
            if i % 2 == 0:
                a = random_member(z.conj().T, rng).conj().T
            else:
                a = ginibre(n, rng=rng)
            got = some_path_bounded_dual(a, z, Modifier.identity(n), seed=i).member
            assert got == keeps_image_invariant(a, z).member

    def test_identity_matrix_always_member(self):
        # C I Z = C Z = 0 for every admissible companion
        rng = np.random.default_rng(8)
        z = random_singular(4, 2, rng)
        for phi in (Modifier.identity(4), Modifier.delete_diagonal(4), Modifier.hadamard(ginibre(4, rng=rng))):
            assert some_path_bounded_dual(np.eye(4), z, phi, seed=1).member

    def test_corner_pattern_dual_accepts_everything(self):
        z, phi = corner_example()
        rng = np.random.default_rng(9)
        for s in range(20):
            assert some_path_bounded_dual(ginibre(3, rng=rng), z, phi, seed=s).member


class TestNilpotentFaithful:
    def test_delete_diagonal_is_faithful(self):
        for n in (2, 3, 5):
            report = nilpotent_faithful(Modifier.delete_diagonal(n))
            assert report.faithful and report.exact

    def test_corner_pattern_counterexample(self):
        report = nilpotent_faithful(Modifier.hadamard(unit(3, 0, 2)))
        assert not report.faithful
        assert np.allclose(report.counterexample, unit(3, 0, 1))

    def test_identity_is_faithful(self):
        report = nilpotent_faithful(Modifier.identity(4))
        assert report.faithful and report.exact

    def test_randomized_falsifier_agrees_on_patterns(self):
        rng = np.random.default_rng(10)
        for i in range(12):
            n = int(rng.integers(2, 5))
            h = ginibre(n, rng=rng)
            if i % 3:
                mask = rng.uniform(size=(n, n)) < 0.4
                np.fill_diagonal(mask, False)
                h = h * ~mask
            phi = Modifier.hadamard(h)
            exact = nilpotent_faithful(phi)
            sampled = nilpotent_faithful_randomized(phi, seed=i, trials=60)
            assert exact.faithful == sampled.faithful
            for rep in (exact, sampled):
                if rep.counterexample is not None:
                    t = rep.counterexample
                    assert operator_norm(t) > 0
                    assert operator_norm(t @ t) < 1e-10
                    assert operator_norm(apply(phi, t)) < 1e-10

    def test_general_kind_uses_randomized_route(self):
        phi = Modifier.general(np.eye(4))  # identity map on 2x2 via vec
        report = nilpotent_faithful(phi, seed=0, trials=50)
        assert report.faithful and not report.exact


class TestDeleteDiagonalAnnihilator:
    def test_offdiagonal_vanishing_forces_zero_on_pole_products(self):
        # Z A C is square-zero whenever C Z = 0, and a square-zero matrix
        # with zero off-diagonal part is zero: deleting the diagonal loses
        # nothing on these products
        rng = np.random.default_rng(16)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            z = random_singular(n, int(rng.integers(1, n)), rng)
            kb = kernel_basis(z).basis
            lb = kernel_basis(z.conj().T).basis
            c = kb @ ginibre(kb.shape[1], rng=rng) @ lb.conj().T
            a = ginibre(n, rng=rng)
            prod = z @ a @ c
            assert operator_norm(prod @ prod) < 1e-10 * max(1.0, operator_norm(prod) ** 2)
            offdiag = apply(Modifier.delete_diagonal(n), prod)
            if operator_norm(offdiag) < 1e-12:
                assert operator_norm(prod) < 1e-10


class TestGershgorin:
    def test_diagonal_radii_vanish(self):
        region = gershgorin_region(np.diag([1.0, 2.0, 3.0]))
        assert np.allclose(region.radii, 0.0)
        assert region.contains(np.array([1.0, 2.0, 3.0]))

    def test_swap_matrix(self):
        region = gershgorin_region(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(region.centers, 0.0)
        assert np.allclose(region.radii, 1.0)
        assert region.contains(np.array([1.0, -1.0]))

    def test_random_containment(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(1, 7))
            a = ginibre(n, rng=rng)
            region = gershgorin_region(a)
            assert region.contains(np.linalg.eigvals(a), margin=1e-8)


class TestDiagonalBound:
    def test_tight_for_diagonal(self):
        cert = diagonal_bound_certificate(np.diag([1.0, -2.0, 3.0j]))
        assert cert.radii_sum == pytest.approx(0.0)
        assert cert.diag_sum == pytest.approx(cert.eigenvalue_sum)
        assert cert.diag_sum <= cert.bound + 1e-12

    def test_strict_upper_triangle(self):
        cert = diagonal_bound_certificate(np.array([[0.0, 7.5], [0.0, 0.0]]))
        assert cert.diag_sum == pytest.approx(0.0)
        assert cert.bound == pytest.approx(2 * 7.5)

    def test_random_ensemble(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            n = int(rng.integers(1, 7))
            diagonal_bound_certificate(ginibre(n, rng=rng))  # must not raise


class TestConjugationFamilyBound:
    def test_constant_family(self):
        b = ginibre(3, rng=np.random.default_rng(13))
        report = conjugation_family_bound([b] * 4)
        assert report.ok and not report.vacuous

    def test_unbounded_offdiagonal_family_is_vacuous(self):
        a0 = np.ones((2, 2), dtype=complex)
        family = []
        for t in np.geomspace(1e-1, 1e-8, 8):
            family.append(np.diag([1.0, t]) @ a0 @ np.diag([1.0, 1.0 / t]))
        report = conjugation_family_bound(family)
        assert report.ok and report.vacuous

    def test_bounded_member_family(self):
        rng = np.random.default_rng(14)
        z = random_singular(3, 2, rng)
        gp = construct_good_path(z, order=2)
        member = random_member(z, rng)
        family = []
        for t in np.geomspace(1e-1, 1e-5, 9):
            u = gp.at(float(t))
            family.append(u @ member @ np.linalg.inv(u))
        report = conjugation_family_bound(family)
        assert report.ok and not report.vacuous

    def test_rejects_dissimilar_matrices(self):
        rng = np.random.default_rng(15)
        with pytest.raises(ConjugationFamilyError):
            conjugation_family_bound([ginibre(3, rng=rng), ginibre(3, rng=rng)])


class TestModifierValidation:
    def test_wrong_hadamard_shape(self):
        with pytest.raises(InvalidInputError):
            Modifier("hadamard", 3, np.eye(2))

    def test_wrong_general_shape(self):
        with pytest.raises(InvalidInputError):
            Modifier.general(np.eye(5))

    def test_unknown_kind(self):
        with pytest.raises(InvalidInputError):
            Modifier("fourier", 2)
