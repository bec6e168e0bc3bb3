"""Hankel operator analysis: norm, maximizing vectors, spectral conditions.

In the Q-metric state coordinates of :mod:`nehari.realization`, the Hankel
operator of the symbol has ``W W^* = P Q``, so its norm is the square root of
the top eigenvalue of ``P Q``, computed from the Hermitian matrix
``L P L^*`` (``Q = L^* L``).  The eigenvectors at the top eigenvalue are the
state coordinates of the maximizing vectors; a maximizing vector, as a
function, is ``x -> B^*(I - z A^*)^{-1} Q x`` and its value at the origin is
``B^* Q x``.

Two verdicts matter downstream:

* full maximizing multiplicity p with nonsingular matrix of values at 0
  (guarantees a unique optimal solution of the full problem), and
* no maximizing vector vanishing at the origin (invertibility of the
  shifted defect operator, which every central-solution formula divides by).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousMultiplicityWarning, InputError, NumericalGuardError
from .realization import (
    GramianPair,
    Realization,
    complex_matrix_to_pairs,
    spectral_radius,
)

DEFAULT_GAP_RTOL = 1e-8


@dataclass(frozen=True)
class HankelReport:
    """Hankel norm, maximizing-vector data and condition verdicts.

    ``max_vectors`` holds state coordinates (columns, Q-metric normalized);
    ``eval0`` holds the values at the origin ``B^* Q x_i`` as columns.
    """

    gamma: float
    multiplicity: int
    max_vectors: np.ndarray
    eval0: np.ndarray
    c2_holds: bool
    d0_invertible: bool
    minimal: bool

    def to_json_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "multiplicity": self.multiplicity,
            "max_vectors": complex_matrix_to_pairs(self.max_vectors),
            "eval0": complex_matrix_to_pairs(self.eval0),
            "c2_holds": self.c2_holds,
            "d0_invertible": self.d0_invertible,
            "minimal": self.minimal,
        }


@dataclass(frozen=True)
class RatePredictor:
    """Spectral-radius data predicting the restricted-solution decay rate.

    ``z0_radius`` is the spectral radius of the state map compressed to the
    image of the initial-space complement; the restricted central solutions
    converge geometrically with this ratio (up to a constant), against the
    crude bound ``z_radius`` for the trivial initial space.
    """

    q_roots: tuple
    x0_dim: int
    z0_radius: float
    z_radius: float

    def to_json_dict(self) -> dict:
        return {
            "q_roots": [[r.real, r.imag] for r in self.q_roots],
            "x0_dim": self.x0_dim,
            "z0_radius": self.z0_radius,
            "z_radius": self.z_radius,
        }


def hankel_block(R: Realization, i: int, j: int) -> np.ndarray:
    """Block ``C A^{i+j} B`` of the Hankel matrix; Fourier coefficient of
    index -(i+j+1) of the symbol."""
    if i < 0 or j < 0:
        raise InputError("block indices must be nonnegative")
    return R.C @ np.linalg.matrix_power(R.A, i + j) @ R.B


def _euclidean_gram(gp: GramianPair) -> np.ndarray:
    """Hermitian matrix L P L^*, similar to P Q."""
    M = gp.L @ gp.P @ gp.L.conj().T
    return 0.5 * (M + M.conj().T)


def hankel_norm(gp: GramianPair, tol: float = 1e-12) -> float:
    """Hankel norm sqrt(lambda_max(P Q)) via the Hermitian form L P L^*."""
    w = np.linalg.eigvalsh(_euclidean_gram(gp))
    gamma = float(np.sqrt(max(w[-1], 0.0)))
    if gamma <= tol:
        raise NumericalGuardError("degenerate Hankel operator: norm is zero")
    return gamma


def check_conditions(
    R: Realization,
    gp: GramianPair,
    gap_rtol: float = DEFAULT_GAP_RTOL,
    zero_tol: float = 1e-8,
) -> HankelReport:
    """Compute the Hankel norm, the maximizing-vector space and the verdicts.

    Multiplicity counts eigenvalues of ``L P L^*`` within relative ``gap_rtol``
    of the top one; eigenvalues falling into the buffer just below the cut
    trigger an :class:`AmbiguousMultiplicityWarning`. ``c2_holds`` also
    requires the p x p matrix of values at 0 to be nonsingular;
    ``d0_invertible`` only requires those values to be linearly independent
    (no maximizing vector vanishes at the origin).
    """
    minimal = gp.minimal
    M = _euclidean_gram(gp)
    w, V = np.linalg.eigh(M)
    mu_max = float(w[-1])
    if mu_max <= zero_tol**2:
        raise NumericalGuardError("degenerate Hankel operator: norm is zero")
    gamma = float(np.sqrt(mu_max))

    keep = w >= (1.0 - gap_rtol) * mu_max
    buffer = (w >= (1.0 - 2.0 * gap_rtol) * mu_max) & ~keep
    if np.any(buffer):
        warnings.warn(
            "eigenvalues within the multiplicity-gap buffer; the reported "
            "multiplicity is sensitive to gap_rtol",
            AmbiguousMultiplicityWarning,
            stacklevel=2,
        )
    multiplicity = int(np.count_nonzero(keep))

    # back to state coordinates: x = L^{-1} xi, unit vectors in the Q-metric
    xi = V[:, keep]
    x = np.linalg.solve(gp.L, xi)
    eval0 = R.B.conj().T @ gp.Q @ x

    sv = np.linalg.svd(eval0, compute_uv=False) if eval0.size else np.zeros(1)
    threshold = zero_tol * max(1.0, float(sv[0]) if sv.size else 0.0)
    d0_invertible = multiplicity <= R.p and bool(sv.size == multiplicity and sv[-1] > threshold)
    c2_holds = (multiplicity == R.p) and d0_invertible

    return HankelReport(
        gamma=gamma,
        multiplicity=multiplicity,
        max_vectors=x,
        eval0=eval0,
        c2_holds=bool(c2_holds),
        d0_invertible=bool(d0_invertible),
        minimal=minimal,
    )


def rate_predictor(R: Realization, q_roots) -> RatePredictor:
    """Predict the ladder convergence rate for an initial model space.

    The initial space is the model space of the Blaschke product with the
    given roots (tensored over input channels); the image of its complement
    under the Hankel map is the span of the Krylov matrix
    ``[q(A) B, A q(A) B, ..., A^{n-1} q(A) B]`` with ``q(A)`` the product of
    ``(A - a_i I)``.  That span is A-invariant, and the spectral radius of
    the restriction of ``A`` to it is the predicted geometric ratio.
    """
    q_roots = tuple(complex(r) for r in q_roots)
    for r in q_roots:
        if abs(r) >= 1.0:
            raise InputError(f"root {r} is not strictly inside the unit disk")
    n = R.n
    qA = np.eye(n, dtype=complex)
    for r in q_roots:
        qA = qA @ (R.A - r * np.eye(n))
    blocks = []
    Mk = qA @ R.B
    for _ in range(n):
        blocks.append(Mk)
        Mk = R.A @ Mk
    K = np.hstack(blocks) if blocks else np.zeros((n, 0), dtype=complex)

    z_radius = spectral_radius(R.A)
    if K.size == 0:
        return RatePredictor(q_roots, 0, 0.0, z_radius)
    U, s, _ = np.linalg.svd(K, full_matrices=False)
    rank_tol = max(K.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    dim = int(np.count_nonzero(s > max(rank_tol, 1e-13 * (s[0] if s.size else 1.0))))
    if dim == 0:
        return RatePredictor(q_roots, 0, 0.0, z_radius)
    U = U[:, :dim]
    z0_radius = spectral_radius(U.conj().T @ R.A @ U)
    return RatePredictor(q_roots, dim, z0_radius, z_radius)
