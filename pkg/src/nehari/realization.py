"""State-space carriers for strictly co-analytic rational matrix symbols.

A symbol with only negative Fourier coefficients is represented as

    G_-(lambda) = C (lambda I - A)^{-1} B,

with all eigenvalues of ``A`` strictly inside the unit disk, so that the
Fourier coefficient of index -m equals ``C A^{m-1} B``.  The discrete
Lyapunov (Stein) equations

    P = A P A^* + B B^*,        Q = A^* Q A + C^* C

define the controllability and observability Gramians.  ``Q`` is the metric
in which all state-coordinate computations downstream take place: the range
of the Hankel operator of ``G_-`` is identified with C^n carrying the inner
product ``<x, y> = y^* Q x``.

Everything here works with complex matrices even when the data is real,
since eigenvalues and interpolation nodes are generally complex.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericalGuardError

#: Default absolute tolerance (max-abs norm) for Stein residuals.
DEFAULT_TOL = 1e-10

#: Dense Kronecker solve is used up to this state dimension; beyond it the
#: squaring (doubling) iteration X <- X + A^{2^k} X (A^*)^{2^k} takes over.
_KRON_LIMIT = 60


def _as_complex_matrix(M, name: str) -> np.ndarray:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if M.ndim != 2:
        raise InputError(f"{name} must be a 2-D matrix, got ndim={M.ndim}")
    return M


def spectral_radius(M: np.ndarray) -> float:
    """Largest eigenvalue modulus of a square matrix (0.0 for empty)."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(M))))


def solve_stein(A: np.ndarray, M: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Solve the Stein equation ``X = A X A^* + M`` for Hermitian PSD ``M``.

    Uses the vectorized dense solve ``(I - conj(A) kron A) vec(X) = vec(M)``
    for small state dimension and the squaring iteration otherwise.  The
    result is symmetrized, i.e. exactly Hermitian.

    Raises
    ------
    InputError
        If ``A`` is not strictly stable (spectral radius >= 1).
    NumericalGuardError
        If the residual of the computed solution exceeds ``tol``.
    """
    A = _as_complex_matrix(A, "A")
    M = _as_complex_matrix(M, "M")
    n = A.shape[0]
    if A.shape != (n, n) or M.shape != (n, n):
        raise InputError(f"shape mismatch: A is {A.shape}, M is {M.shape}")
    if spectral_radius(A) >= 1.0:
        raise InputError("Stein equation requires spectral radius of A < 1")

    if n <= _KRON_LIMIT:
        K = np.eye(n * n, dtype=complex) - np.kron(A.conj(), A)
        x = np.linalg.solve(K, M.reshape(-1, order="F"))
        X = x.reshape((n, n), order="F")
    else:
        X = M.astype(complex)
        Ak = A.astype(complex)
        # X_j = sum_{i < 2^j} A^i M A*^i; iterate until A^{2^j} is negligible
        while np.max(np.abs(Ak)) > 1e-150:
            X = X + Ak @ X @ Ak.conj().T
            Ak = Ak @ Ak

    X = 0.5 * (X + X.conj().T)
    resid = float(np.max(np.abs(X - A @ X @ A.conj().T - M))) if n else 0.0
    if resid > tol:
        raise NumericalGuardError(
            f"Stein residual {resid:.3e} exceeds tolerance {tol:.3e}"
        )
    return X


@dataclass(frozen=True)
class Realization:
    """Minimal data for a strictly co-analytic symbol C (lambda I - A)^{-1} B.

    Attributes
    ----------
    A : (n, n) complex ndarray
        State map, spectral radius strictly below 1.
    B : (n, p) complex ndarray
        Input map.
    C : (q, n) complex ndarray
        Output map.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    eigvals: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        A = _as_complex_matrix(self.A, "A")
        B = _as_complex_matrix(self.B, "B")
        C = _as_complex_matrix(self.C, "C")
        n = A.shape[0]
        if A.shape != (n, n):
            raise InputError(f"A must be square, got {A.shape}")
        if B.shape[0] != n:
            raise InputError(f"B must have {n} rows, got {B.shape}")
        if C.shape[1] != n:
            raise InputError(f"C must have {n} columns, got {C.shape}")
        eigs = np.linalg.eigvals(A) if n else np.zeros(0, dtype=complex)
        if n and float(np.max(np.abs(eigs))) >= 1.0:
            raise InputError(
                "realization is not stable: spectral radius of A is "
                f"{float(np.max(np.abs(eigs))):.6g} >= 1"
            )
        for name, val in (("A", A), ("B", B), ("C", C), ("eigvals", eigs)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def p(self) -> int:
        return self.B.shape[1]

    @property
    def q(self) -> int:
        return self.C.shape[0]

    def to_json_dict(self) -> dict:
        return {
            "A": complex_matrix_to_pairs(self.A),
            "B": complex_matrix_to_pairs(self.B),
            "C": complex_matrix_to_pairs(self.C),
        }

    @staticmethod
    def from_json_dict(obj: dict) -> "Realization":
        try:
            A = pairs_to_complex_matrix(obj["A"], "A")
            B = pairs_to_complex_matrix(obj["B"], "B")
            C = pairs_to_complex_matrix(obj["C"], "C")
        except KeyError as exc:
            raise InputError(f"realization is missing field {exc}") from exc
        return Realization(A, B, C)


@dataclass(frozen=True)
class GramianPair:
    """Controllability/observability Gramians of a realization.

    ``L`` factors the observability Gramian as ``Q = L^* L``; the map
    ``x -> L x`` carries the Q-metric state coordinates to Euclidean ones.
    """

    P: np.ndarray
    Q: np.ndarray
    residual_P: float
    residual_Q: float
    L: np.ndarray
    controllable: bool
    observable: bool

    @property
    def minimal(self) -> bool:
        return self.controllable and self.observable


def _psd_rank_ok(X: np.ndarray, rtol: float) -> bool:
    w = np.linalg.eigvalsh(X)
    if w.size == 0:
        return True
    return bool(w[0] > rtol * max(w[-1], 0.0))


def _factor_psd(Q: np.ndarray) -> np.ndarray:
    """Factor Hermitian PSD ``Q`` as ``L^* L`` via eigendecomposition."""
    w, V = np.linalg.eigh(Q)
    w = np.clip(w, 0.0, None)
    return np.sqrt(w)[:, None] * V.conj().T


def gramians(R: Realization, tol: float = DEFAULT_TOL, min_rtol: float = 1e-9) -> GramianPair:
    """Solve both Stein equations of a realization and factor the metric.

    Parameters
    ----------
    R : Realization
    tol : float
        Residual tolerance passed to the Stein solver.
    min_rtol : float
        Relative eigenvalue threshold for the controllability/observability
        flags (rank decisions on P and Q).
    """
    A, B, C = R.A, R.B, R.C
    P = solve_stein(A, B @ B.conj().T, tol=tol)
    Q = solve_stein(A.conj().T, C.conj().T @ C, tol=tol)
    residual_P = float(np.max(np.abs(P - A @ P @ A.conj().T - B @ B.conj().T)))
    residual_Q = float(np.max(np.abs(Q - A.conj().T @ Q @ A - C.conj().T @ C)))
    gp = GramianPair(
        P=P,
        Q=Q,
        residual_P=residual_P,
        residual_Q=residual_Q,
        L=_factor_psd(Q),
        controllable=_psd_rank_ok(P, min_rtol),
        observable=_psd_rank_ok(Q, min_rtol),
    )
    if not gp.minimal:
        warnings.warn(
            "realization is not minimal "
            f"(controllable={gp.controllable}, observable={gp.observable})",
            UserWarning,
            stacklevel=2,
        )
    return gp


def check_minimal(R: Realization, gp: GramianPair, rtol: float = 1e-9) -> bool:
    """True iff both Gramians have full numerical rank at relative ``rtol``."""
    return _psd_rank_ok(gp.P, rtol) and _psd_rank_ok(gp.Q, rtol)


def eval_coanalytic(R: Realization, lam: complex, tol: float = 1e-9) -> np.ndarray:
    """Evaluate ``C (lambda I - A)^{-1} B`` at a point off the spectrum of A.

    Raises
    ------
    NumericalGuardError
        If ``lam`` is within ``tol`` of an eigenvalue of ``A``.
    """
    lam = complex(lam)
    if R.n == 0:
        return np.zeros((R.q, R.p), dtype=complex)
    gap = float(np.min(np.abs(R.eigvals - lam)))
    if gap < tol:
        raise NumericalGuardError(
            f"resolvent evaluated too close to the spectrum: "
            f"|lambda - eig| = {gap:.3e} < {tol:.3e}"
        )
    return R.C @ np.linalg.solve(lam * np.eye(R.n) - R.A, R.B)


def eval_coanalytic_grid(R: Realization, lams: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Evaluate the symbol on an array of points; returns shape (len, q, p)."""
    lams = np.asarray(lams, dtype=complex).ravel()
    out = np.empty((lams.size, R.q, R.p), dtype=complex)
    for i, lam in enumerate(lams):
        out[i] = eval_coanalytic(R, lam, tol=tol)
    return out


# --- JSON codec: complex scalars travel as [re, im] pairs -------------------

def complex_matrix_to_pairs(M: np.ndarray) -> list:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return [[[float(v.real), float(v.imag)] for v in row] for row in M]


def pairs_to_complex_matrix(obj, name: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: expected nested [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise InputError(
            f"{name}: expected shape (rows, cols, 2) of [re, im] pairs, "
            f"got {arr.shape}"
        )
    return arr[..., 0] + 1j * arr[..., 1]
