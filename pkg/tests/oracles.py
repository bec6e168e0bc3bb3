"""Shared independent oracles and instance generators for the test suite.

Everything here evaluates the underlying operators through raw truncated
series or explicit block matrices, never through the solver formulas under
test.
"""

from __future__ import annotations

import numpy as np

from nehari.realization import Realization, spectral_radius


def circle_grid(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def scalar_system(a: float = 0.5) -> Realization:
    return Realization(np.array([[a]]), np.array([[1.0]]), np.array([[1.0]]))


def random_stable_system(rng, n_max: int = 6, p: int = 1, q: int = 1,
                         radius: float = 0.9) -> Realization:
    """Random minimal-ish stable instance with eigenvalues in |z| <= radius."""
    n = int(rng.integers(1, n_max + 1))
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    r = spectral_radius(A)
    if r > 0:
        A *= radius * rng.uniform(0.5, 1.0) / r
    B = rng.standard_normal((n, p)) + 1j * rng.standard_normal((n, p))
    C = rng.standard_normal((q, n)) + 1j * rng.standard_normal((q, n))
    return Realization(A, B, C)


def duplicate_diag(R: Realization) -> Realization:
    """Block-diagonal duplicate carrying the same symbol on two channels."""
    n, p, q = R.n, R.p, R.q
    zn = np.zeros((n, n))
    return Realization(
        np.block([[R.A, zn], [zn, R.A]]),
        np.block([[R.B, np.zeros((n, p))], [np.zeros((n, p)), R.B]]),
        np.block([[R.C, np.zeros((q, n))], [np.zeros((q, n)), R.C]]),
    )


def series_length(R: Realization, tail: float = 1e-14) -> int:
    r = spectral_radius(R.A)
    if r == 0:
        return R.n + 2
    return int(np.ceil(np.log(tail) / np.log(r))) + 2


def coanalytic_coefficients(R: Realization, x: np.ndarray, N: int) -> np.ndarray:
    """Coefficients of the co-analytic function with state x: entry t is the
    coefficient of z^{-(t+1)}, i.e. C A^t x."""
    out = np.empty((N, R.q), dtype=complex)
    v = np.asarray(x, dtype=complex)
    for t in range(N):
        out[t] = R.C @ v
        v = R.A @ v
    return out


def state_from_coefficients(R: Realization, coeffs: np.ndarray) -> np.ndarray:
    """Recover the state of a co-analytic series by least squares against the
    observability stack [C; C A; C A^2; ...]."""
    N = coeffs.shape[0]
    rows = []
    Ak = np.eye(R.n, dtype=complex)
    for _ in range(N):
        rows.append(R.C @ Ak)
        Ak = R.A @ Ak
    O = np.vstack(rows)
    x, *_ = np.linalg.lstsq(O, coeffs.reshape(-1), rcond=None)
    return x


def adjoint_coefficients(R: Realization, Q: np.ndarray, x: np.ndarray, N: int) -> np.ndarray:
    """Taylor coefficients of the pre-image test function: entry j equals
    B^* (A^*)^j Q x (a p-vector)."""
    out = np.empty((N, R.p), dtype=complex)
    v = Q @ np.asarray(x, dtype=complex)
    for j in range(N):
        out[j] = R.B.conj().T @ v
        v = R.A.conj().T @ v
    return out


def hankel_apply_series(R: Realization, taylor: np.ndarray) -> np.ndarray:
    """State vector of the Hankel image of a function given by its Taylor
    coefficients (rows are p-vectors): sum_j A^j B f_j."""
    v = np.zeros(R.n, dtype=complex)
    Ak = np.eye(R.n, dtype=complex)
    for f in np.asarray(taylor, dtype=complex):
        v = v + Ak @ (R.B @ f)
        Ak = R.A @ Ak
    return v
