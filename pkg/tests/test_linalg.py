import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qelicit.linalg import (
    as_density,
    as_hermitian,
    as_unitary,
    density_from_json,
    eigenvalues_desc,
    frob_dist,
    hs_inner,
    matrix_from_json,
    matrix_to_json,
    random_density,
    random_hermitian,
    random_pure,
    random_unitary,
    spectral_decompose,
)


class TestValidation:
    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            as_hermitian(np.ones((2, 3)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            as_hermitian([[0.0, 1.0], [0.0, 0.0]])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="finite"):
            as_hermitian([[np.inf, 0.0], [0.0, 1.0]])

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            as_density(np.eye(2))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError, match="PSD"):
            as_density(np.diag([1.5, -0.5]))

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError, match="unitary"):
            as_unitary(np.diag([1.0, 2.0]))


class TestHsInner:
    def test_identity_vs_density_is_trace(self, rng):
        for n in (2, 3, 5):
            rho = random_density(n, rng=rng)
            assert hs_inner(np.eye(n), rho) == pytest.approx(1.0, abs=1e-12)

    def test_example_state_standard_projector(self, rho_example):
        proj = np.diag([1.0, 0.0]).astype(complex)
        assert hs_inner(proj, rho_example) == pytest.approx(1.0 / 6.0, abs=1e-15)

    def test_matches_elementwise_sum(self, rng):
        A = random_hermitian(3, rng=rng)
        B = random_hermitian(3, rng=rng)
        direct = np.sum(np.conj(A) * B).real
        assert hs_inner(A, B) == pytest.approx(direct, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            hs_inner(np.eye(2), np.eye(3))

    def test_psd_pairs_nonnegative(self, rng):
        for _ in range(200):
            A = random_density(3, rank=int(rng.integers(1, 4)), rng=rng)
            B = random_density(3, rank=int(rng.integers(1, 4)), rng=rng)
            assert hs_inner(A, B) >= -1e-10

    def test_zero_inner_product_means_zero_product(self, rng):
        # build B on A's kernel: <A, B> ~ 0 and A @ B ~ 0
        for _ in range(50):
            A = random_density(4, rank=2, rng=rng)
            kernel = spectral_decompose(A).eigenvectors[:, 2:]
            G = kernel @ (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
            B = G @ G.conj().T
            B = B / np.trace(B).real
            assert abs(hs_inner(A, B)) <= 1e-12 or np.abs(A @ B).max() > 1e-8
            if abs(hs_inner(A, B)) <= 1e-12:
                assert np.abs(A @ B).max() <= 1e-8


class TestTraceInequality:
    def test_upper_bound_and_shared_basis_equality(self, rng):
        # <A, B> <= <lambda(A), lambda(B)>, tight when B reuses A's eigenbasis
        for _ in range(500):
            n = int(rng.integers(2, 7))
            A = random_hermitian(n, rng=rng)
            B = random_hermitian(n, rng=rng)
            bound = eigenvalues_desc(A) @ eigenvalues_desc(B)
            assert hs_inner(A, B) <= bound + 1e-9
            V = spectral_decompose(A).eigenvectors
            lamB = eigenvalues_desc(B)
            shared = (V * lamB) @ V.conj().T
            assert hs_inner(A, shared) == pytest.approx(
                eigenvalues_desc(A) @ lamB, abs=1e-8
            )


class TestSpectralDecompose:
    def test_diagonal_reordering(self):
        dec = spectral_decompose(np.diag([0.25, 0.75]))
        assert np.allclose(dec.eigenvalues, [0.75, 0.25])
        assert np.allclose(np.abs(dec.eigenvectors[:, 0]), [0.0, 1.0], atol=1e-12)
        assert np.allclose(np.abs(dec.eigenvectors[:, 1]), [1.0, 0.0], atol=1e-12)

    def test_example_state_characteristic_roots(self, rho_example):
        # roots of t^2 - t + 1/9, independent of the eigensolver
        disc = np.sqrt(1.0 - 4.0 / 9.0)
        expected = np.array([(1 + disc) / 2, (1 - disc) / 2])
        assert np.allclose(spectral_decompose(rho_example).eigenvalues, expected, atol=1e-12)

    def test_reconstruction(self, rng):
        for n in (2, 4, 6):
            A = random_hermitian(n, rng=rng)
            dec = spectral_decompose(A)
            assert frob_dist(dec.reconstruct(), A) <= 1e-8

    def test_orthonormal_columns(self, rng):
        V = spectral_decompose(random_hermitian(5, rng=rng)).eigenvectors
        assert np.abs(V.conj().T @ V - np.eye(5)).max() <= 1e-9

    def test_eigenvalues_invariant_under_conjugation(self, rng):
        A = random_hermitian(4, rng=rng)
        U = random_unitary(4, rng=rng)
        rotated = U @ A @ U.conj().T
        assert np.allclose(
            eigenvalues_desc(A), eigenvalues_desc((rotated + rotated.conj().T) / 2), atol=1e-8
        )

    def test_phase_convention_is_deterministic(self, rng):
        A = random_hermitian(4, rng=rng)
        V1 = spectral_decompose(A).eigenvectors
        V2 = spectral_decompose(A.copy()).eigenvectors
        assert np.array_equal(V1, V2)
        idx = np.argmax(np.abs(V1), axis=0)
        lead = V1[idx, np.arange(4)]
        assert np.abs(lead.imag).max() <= 1e-12
        assert (lead.real > 0).all()

    def test_degenerate_spectrum_reconstructs(self):
        A = np.diag([0.5, 0.5, 0.0]).astype(complex)
        dec = spectral_decompose(A)
        assert frob_dist(dec.reconstruct(), A) <= 1e-10


class TestRandomStates:
    def test_rank_one_is_pure(self, rng):
        rho = random_density(4, rank=1, rng=rng)
        lam = eigenvalues_desc(rho)
        assert lam[0] == pytest.approx(1.0, abs=1e-10)
        assert np.abs(lam[1:]).max() <= 1e-10

    def test_full_rank_has_positive_spectrum(self, rng):
        lam = eigenvalues_desc(random_density(4, rng=rng))
        assert lam[-1] > 0

    def test_requested_rank(self, rng):
        lam = eigenvalues_desc(random_density(5, rank=3, rng=rng))
        assert (lam[:3] > 1e-12).all()
        assert np.abs(lam[3:]).max() <= 1e-12

    def test_rank_bounds(self, rng):
        with pytest.raises(ValueError, match="rank"):
            random_density(3, rank=4, rng=rng)

    def test_seed_42_golden(self):
        rho = random_density(2, rng=42)
        golden = np.array(
            [
                [0.81018984 + 0.0j, -0.07124455 - 0.37093189j],
                [-0.07124455 + 0.37093189j, 0.18981016 + 0.0j],
            ]
        )
        assert np.abs(rho - golden).max() <= 1e-8
        assert np.array_equal(rho, random_density(2, rng=42))

    def test_random_unitary_valid(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 9))
            U = random_unitary(n, rng=rng)
            assert np.abs(U @ U.conj().T - np.eye(n)).max() <= 1e-9

    def test_random_pure_unit_and_isometry(self, rng):
        x = random_pure(5, rng=rng)
        assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)
        U = random_unitary(5, rng=rng)
        assert np.linalg.norm(U @ x) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=2, max_value=5))
def test_trace_inequality_property(seed, n):
    g = np.random.default_rng(seed)
    A = random_hermitian(n, rng=g)
    B = random_hermitian(n, rng=g)
    assert hs_inner(A, B) <= eigenvalues_desc(A) @ eigenvalues_desc(B) + 1e-9


class TestJson:
    def test_round_trip_bit_exact(self, rng):
        import json

        A = random_hermitian(4, rng=rng)
        blob = json.dumps(matrix_to_json(A))
        back = matrix_from_json(json.loads(blob))
        assert np.array_equal(A, back)

    def test_density_validated_on_load(self):
        with pytest.raises(ValueError, match="trace"):
            density_from_json(matrix_to_json(np.eye(2)))

    def test_malformed_json(self):
        with pytest.raises(ValueError, match="malformed"):
            matrix_from_json({"dim": 2})

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            matrix_from_json({"dim": 3, "re": [[1.0]], "im": [[0.0]]})
