"""Ladder-basis tests: exactness of coefficients, compressions, norms."""

from __future__ import annotations

import numpy as np
import pytest

from nehari.errors import InputError, ZeroRestrictionWarning
from nehari.hankel import hankel_norm
from nehari.realization import Realization, gramians
from nehari.subspace import (
    LadderBasis,
    RationalFunction,
    build_ladder,
    restricted_norm,
    w_on_basis,
)


def scalar_system(a: float = 0.5) -> Realization:
    return Realization(np.array([[a]]), np.array([[1.0]]), np.array([[1.0]]))


def restricted_gram_oracle(R: Realization, lb: LadderBasis, n_hankel: int = 200,
                           n_taylor: int = 400) -> np.ndarray:
    """Independent oracle for the restriction Gram matrix.

    Applies the Hankel operator coefficient-wise: the coefficient of index
    -t of the image of a basis element b is sum_j g_{-(t+j)} b_j, with the
    symbol coefficients g_{-m} = C A^{m-1} B taken from the raw series.
    """
    g = [R.C @ np.linalg.matrix_power(R.A, m - 1) @ R.B
         for m in range(1, n_hankel + n_taylor + 1)]
    images = []
    for f, s in lb.basis:
        b = f.taylor(n_taylor)
        img = np.zeros((n_hankel, R.q), dtype=complex)
        for t in range(1, n_hankel + 1):
            img[t - 1] = sum(g[t + j - 1][:, s] * b[j] for j in range(n_taylor))
        images.append(img.ravel())
    V = np.stack(images, axis=1)
    return V.conj().T @ V


class TestRationalFunction:
    def test_monomial_taylor(self):
        f = RationalFunction(shift=3, num=np.array([1.0 + 0j]), den=np.array([1.0 + 0j]))
        np.testing.assert_allclose(f.taylor(6), [0, 0, 0, 1, 0, 0])

    def test_geometric_series(self):
        a = 0.4 + 0.1j
        f = RationalFunction(shift=0, num=np.array([1.0 + 0j]),
                             den=np.array([1.0, -np.conj(a)]))
        np.testing.assert_allclose(f.taylor(8), np.conj(a) ** np.arange(8), atol=1e-15)

    def test_eval_matches_series(self):
        f = RationalFunction(shift=1, num=np.array([2.0, 1.0j]),
                             den=np.array([1.0, -0.3, 0.1j]))
        lam = 0.55 * np.exp(0.7j)
        series = np.dot(f.taylor(300), lam ** np.arange(300))
        assert f.eval(lam) == pytest.approx(series, abs=1e-13)

    def test_eval_matrix_is_rational_function_of_A(self):
        rng = np.random.default_rng(2)
        A = rng.standard_normal((3, 3))
        A *= 0.6 / np.max(np.abs(np.linalg.eigvals(A)))
        f = RationalFunction(shift=2, num=np.array([1.0, -0.2]),
                             den=np.array([1.0, -0.5]))
        # series evaluation of f(A)
        coef = f.taylor(200)
        expected = sum(c * np.linalg.matrix_power(A, j) for j, c in enumerate(coef))
        np.testing.assert_allclose(f.eval_matrix(A), expected, atol=1e-12)

    def test_rejects_inner_denominator_root(self):
        with pytest.raises(InputError):
            RationalFunction(shift=0, num=np.array([1.0 + 0j]),
                             den=np.array([1.0, -2.0]))


class TestBuildLadder:
    def test_monomial_ladder(self):
        lb = build_ladder([], k=2, p=1)
        assert lb.m == 2
        np.testing.assert_allclose(lb.Qm, [[0, 0], [1, 0]], atol=1e-14)
        np.testing.assert_allclose(lb.Emat, [[1], [0]], atol=1e-14)
        np.testing.assert_allclose(lb.Rm, [[1, 0], [0, 0]], atol=1e-14)

    def test_single_root_model_space(self):
        a = 0.5
        lb = build_ladder([a], k=0, p=1)
        assert lb.m == 1
        np.testing.assert_allclose(lb.Sstar, [[np.conj(a)]], atol=1e-13)
        f = lb.funcs[0]
        np.testing.assert_allclose(
            f.taylor(6), np.sqrt(1 - a**2) * a ** np.arange(6), atol=1e-14
        )

    def test_two_channels(self):
        lb = build_ladder([], k=1, p=2)
        assert lb.m == 2
        np.testing.assert_allclose(lb.Qm, np.zeros((2, 2)), atol=1e-14)
        np.testing.assert_allclose(lb.Rm, np.zeros((2, 2)), atol=1e-14)
        np.testing.assert_allclose(lb.Emat, np.eye(2), atol=1e-14)

    @pytest.mark.parametrize(
        "roots,k,p",
        [
            ([], 3, 1),
            ([0.5], 2, 1),
            ([0.5, -0.3 + 0.4j], 1, 2),
            ([0.6, 0.6], 2, 1),  # duplicate roots
            ([0.9], 4, 1),
        ],
    )
    def test_structure_invariants(self, roots, k, p):
        lb = build_ladder(roots, k=k, p=p)
        m = lb.m
        assert lb.gram_residual <= 1e-12
        np.testing.assert_allclose(lb.Sstar, lb.Qm.conj().T)
        np.testing.assert_allclose(lb.Qm.conj().T @ lb.Qm, lb.Rm, atol=1e-12)
        np.testing.assert_allclose(lb.Sstar @ lb.Emat, np.zeros((m, p)), atol=1e-12)
        if k >= 2:  # constants lie in S^* M_k only from level 2 on
            np.testing.assert_allclose(lb.Rm @ lb.Emat, lb.Emat, atol=1e-11)
        # Rm is an orthogonal projection of rank p*(k-1+d)
        np.testing.assert_allclose(lb.Rm @ lb.Rm, lb.Rm, atol=1e-11)
        rank = int(round(float(np.trace(lb.Rm).real)))
        assert rank == p * (k - 1 + len(roots))

    @pytest.mark.parametrize("roots,k", [([], 3), ([0.5], 2), ([0.6, -0.2j], 1)])
    def test_backward_shift_consistency(self, roots, k):
        # coordinates produced by Sstar reconstruct the shifted coefficients
        lb = build_ladder(roots, k=k, p=1)
        n = 60
        T = np.stack([f.taylor(n + 1) for f in lb.funcs])
        for j in range(len(lb.funcs)):
            reconstructed = lb.Sstar[:, j] @ T[:, :n]
            np.testing.assert_allclose(reconstructed, T[j, 1:], atol=1e-13)

    def test_values_match_taylor(self):
        lb = build_ladder([0.4, -0.2 + 0.3j], k=1, p=2)
        lam = np.exp(0.9j)
        vals = lb.basis_values(lam)
        assert vals.shape == (2, lb.m)
        for idx, (f, s) in enumerate(lb.basis):
            expected = np.zeros(2, dtype=complex)
            expected[s] = np.dot(f.taylor(2000), lam ** np.arange(2000))
            np.testing.assert_allclose(vals[:, idx], expected, atol=1e-10)

    def test_rejections(self):
        with pytest.raises(InputError):
            build_ladder([1.0], k=1, p=1)
        with pytest.raises(InputError):
            build_ladder([], k=0, p=1)
        with pytest.raises(InputError):
            build_ladder([], k=600, p=1)
        with pytest.raises(InputError):
            build_ladder([], k=2, p=0)


class TestWOnBasis:
    def test_scalar_monomials(self):
        R = scalar_system(0.5)
        lb = build_ladder([], k=2, p=1)
        np.testing.assert_allclose(w_on_basis(R, lb), [[1.0, 0.5]], atol=1e-14)

    def test_monomial_columns_are_powers(self):
        rng = np.random.default_rng(8)
        A = rng.standard_normal((3, 3))
        A *= 0.7 / np.max(np.abs(np.linalg.eigvals(A)))
        B = rng.standard_normal((3, 2))
        R = Realization(A, B, rng.standard_normal((1, 3)))
        lb = build_ladder([], k=3, p=2)
        H = w_on_basis(R, lb)
        for j in range(3):
            np.testing.assert_allclose(
                H[:, 2 * j : 2 * j + 2], np.linalg.matrix_power(A, j) @ B, atol=1e-12
            )

    def test_nilpotent_state(self):
        R = Realization(np.array([[0.0]]), np.array([[1.0]]), np.array([[1.0]]))
        lb = build_ladder([0.5], k=1, p=1)
        H = w_on_basis(R, lb)
        # only the j = 0 Taylor term survives: column = B * b(0)
        vals = [f.taylor(1)[0] for f in lb.funcs]
        np.testing.assert_allclose(H, np.array(vals)[None, :], atol=1e-14)

    def test_channel_mismatch(self):
        with pytest.raises(InputError):
            w_on_basis(scalar_system(), build_ladder([], k=1, p=2))


class TestRestrictedNorm:
    def test_level_one(self):
        R = scalar_system(0.5)
        lb = build_ladder([], k=1, p=1)
        gamma, G = restricted_norm(w_on_basis(R, lb), gramians(R), lb)
        assert gamma == pytest.approx(2 / np.sqrt(3), abs=1e-12)

    def test_level_two_closed_form(self):
        R = scalar_system(0.5)
        gp = gramians(R)
        lb = build_ladder([], k=2, p=1)
        gamma, G = restricted_norm(w_on_basis(R, lb), gp, lb)
        np.testing.assert_allclose(
            G, (4 / 3) * np.array([[1, 0.5], [0.5, 0.25]]), atol=1e-12
        )
        assert gamma == pytest.approx(np.sqrt(5 / 3), abs=1e-12)
        # independent coefficient-series oracle
        G_oracle = restricted_gram_oracle(R, lb)
        np.testing.assert_allclose(G, G_oracle, atol=1e-10)

    def test_oracle_with_model_space(self):
        R = Realization(np.diag([0.6, -0.3]), np.array([[1.0], [0.5]]),
                        np.array([[1.0, -1.0]]))
        gp = gramians(R)
        lb = build_ladder([0.4 + 0.2j], k=2, p=1)
        gamma, G = restricted_norm(w_on_basis(R, lb), gp, lb)
        G_oracle = restricted_gram_oracle(R, lb)
        np.testing.assert_allclose(G, G_oracle, atol=1e-9)

    def test_monotone_in_k_and_bounded(self):
        R = scalar_system(0.5)
        gp = gramians(R)
        gamma = hankel_norm(gp)
        previous = 0.0
        for k in range(1, 14):
            lb = build_ladder([], k=k, p=1)
            gk, _ = restricted_norm(w_on_basis(R, lb), gp, lb)
            assert gk >= previous - 1e-12
            assert gk <= gamma + 1e-12
            previous = gk
        assert previous == pytest.approx(gamma, abs=1e-4)

    def test_gamma_converges_at_predicted_square_rate(self):
        # |gamma_k^2 - gamma^2| ~ r0^(2k); ratio test on consecutive levels
        a = 0.6
        R = scalar_system(a)
        gp = gramians(R)
        gamma = hankel_norm(gp)
        gaps = []
        for k in range(1, 12):
            lb = build_ladder([], k=k, p=1)
            gk, _ = restricted_norm(w_on_basis(R, lb), gp, lb)
            gaps.append(abs(gk**2 - gamma**2))
        ratios = [gaps[i + 1] / gaps[i] for i in range(5, 10) if gaps[i] > 1e-13]
        assert np.median(ratios) == pytest.approx(a**2, rel=0.2)

    def test_shift_contraction(self):
        # largest eigenvalue of Qm^* G Qm never exceeds that of G
        rng = np.random.default_rng(12)
        for _ in range(5):
            n = int(rng.integers(1, 5))
            A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            A *= 0.8 / np.max(np.abs(np.linalg.eigvals(A)))
            R = Realization(A, rng.standard_normal((n, 1)), rng.standard_normal((1, n)))
            gp = gramians(R)
            for k in (1, 3):
                lb = build_ladder([0.3], k=k, p=1)
                _, G = restricted_norm(w_on_basis(R, lb), gp, lb)
                compressed = lb.Qm.conj().T @ G @ lb.Qm
                top = np.linalg.eigvalsh(0.5 * (compressed + compressed.conj().T))[-1]
                assert top <= np.linalg.eigvalsh(G)[-1] + 1e-11

    def test_zero_restriction_warns(self):
        R = Realization(np.array([[0.0]]), np.array([[1.0]]), np.array([[1.0]]))
        gp = gramians(R)
        lb = build_ladder([], k=2, p=1)
        H = w_on_basis(R, lb)
        # drop the constant column: restriction to span{z} is zero
        lb1 = build_ladder([], k=1, p=1)
        with pytest.warns(ZeroRestrictionWarning):
            restricted_norm(np.zeros((1, 1)), gp, lb1)
        assert H.shape == (1, 2)
