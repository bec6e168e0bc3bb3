"""Central optimal solutions of the full and restricted problems.

Every route produces the analytic correction ``Phi_+``; the optimal
approximation error of the symbol is ``Phi = G_- + Phi_+`` and attains the
(restricted) Hankel norm.  Four routes are implemented:

1. resolvent of the finite compression ``Lambda`` on the ladder member
   (strictly inside the disk),
2. ``N(lam) M(lam)^{-1}`` built from the backward-shift compression on the
   ladder member (valid up to the boundary),
3. the state-space split ``N = N_1 + N_2``, ``M = M_1 + M_2`` whose leading
   terms live on the n-dimensional state space and whose correction terms
   are evaluated in closed form,
4. for a single input channel, the quotient of the Hankel image of a
   maximizing vector by the vector itself.

Routes 2-4 coincide with route 1 wherever both are defined; the test suite
enforces this pointwise.

State-coordinate dictionary (each entry is unit-tested against raw
truncated series before any solver test runs): the range of the Hankel
operator is C^n with inner product ``<x,y> = y^* Q x``; the compressed
forward shift acts as ``A`` with adjoint ``Q^{-1} A^* Q``; the Hankel map
applied to constants is ``B``; ``W W^* = P Q``; reading off the first
co-analytic coefficient composes to ``C``; hence the output functional of
the Hankel map is ``C P Q`` and its input functional is ``B^* Q``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConditionError,
    InputError,
    NonUniqueMaximizerWarning,
    NumericalGuardError,
)
from .hankel import HankelReport
from .realization import (
    GramianPair,
    Realization,
    complex_matrix_to_pairs,
    eval_coanalytic,
    solve_stein,
    spectral_radius,
)
from .subspace import LadderBasis, restricted_norm, w_on_basis

#: Condition-number ceiling for every inversion the theory requires.
COND_LIMIT = 1e12

#: Spectral-radius slack for the contraction bound on Lambda.
LAMBDA_RADIUS_SLACK = 1e-10


def _guarded_solve(M: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    """Solve M x = rhs, refusing ill-conditioned systems."""
    if M.size == 0:
        return np.zeros((0, rhs.shape[1]) if rhs.ndim > 1 else 0, dtype=complex)
    s = np.linalg.svd(M, compute_uv=False)
    if not np.all(np.isfinite(s)) or s[-1] <= 0 or s[0] / s[-1] > COND_LIMIT:
        cond = np.inf if s[-1] <= 0 else float(s[0] / s[-1])
        raise NumericalGuardError(
            f"{what} is singular to working precision (cond ~ {cond:.3e})"
        )
    return np.linalg.solve(M, rhs)


def _right_divide(N: np.ndarray, M: np.ndarray, what: str) -> np.ndarray:
    """Compute N M^{-1} with the same conditioning guard."""
    return _guarded_solve(M.conj().T, N.conj().T, what).conj().T


def _sqrt_psd(H: np.ndarray, scale: float) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix; eigenvalues below
    -1e-12 * scale are treated as data errors."""
    w, V = np.linalg.eigh(0.5 * (H + H.conj().T))
    if w.size and w[0] < -1e-12 * scale:
        raise NumericalGuardError(
            f"matrix expected PSD has eigenvalue {w[0]:.3e}"
        )
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


@dataclass(frozen=True)
class AnalyticRealization:
    """State-space form ``D + lam C (I - lam A)^{-1} B`` of an H-infinity
    function, analytic on the closed disk when A is strictly stable."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def eval(self, lam: complex) -> np.ndarray:
        lam = complex(lam)
        if self.n == 0:
            return self.D.copy()
        y = np.linalg.solve(np.eye(self.n) - lam * self.A, self.B)
        return self.D + lam * (self.C @ y)

    def to_json_dict(self) -> dict:
        return {
            "A": complex_matrix_to_pairs(self.A),
            "B": complex_matrix_to_pairs(self.B),
            "C": complex_matrix_to_pairs(self.C),
            "D": complex_matrix_to_pairs(self.D),
        }


@dataclass(frozen=True)
class CentralSolution:
    """A central optimal solution: norm, evaluator, and state data.

    ``evaluator`` maps a point of the closed unit disk to the q x p value of
    the analytic correction ``Phi_+``.  For the full problem ``realization``
    carries a composite state-space form of ``Phi_+`` (minimalized by
    Gramian truncation).
    """

    gamma: float
    kind: str
    k: Optional[int]
    q_roots: Optional[tuple]
    lambda_m: Optional[np.ndarray]
    state_data: dict
    evaluator: Callable[[complex], np.ndarray]
    realization: Optional[AnalyticRealization] = None

    def eval_grid(self, lams) -> np.ndarray:
        lams = np.asarray(lams, dtype=complex).ravel()
        vals = [self.evaluator(lam) for lam in lams]
        return np.stack(vals)

    def to_json_dict(self) -> dict:
        out = {
            "gamma": self.gamma,
            "kind": self.kind,
        }
        if self.kind == "restricted":
            out["k"] = self.k
            out["q_roots"] = [[r.real, r.imag] for r in (self.q_roots or ())]
        if self.lambda_m is not None:
            out["lambda_m"] = complex_matrix_to_pairs(self.lambda_m)
        out["state_data"] = {
            key: complex_matrix_to_pairs(val) if isinstance(val, np.ndarray) else val
            for key, val in self.state_data.items()
        }
        if self.realization is not None:
            out["realization"] = self.realization.to_json_dict()
        return out


# --------------------------------------------------------------------------
# Route 1: the finite Lambda compression
# --------------------------------------------------------------------------

def lambda_matrix(G_H: np.ndarray, Qm: np.ndarray, gamma_k: float) -> np.ndarray:
    """Compression of the central-solution generator to the ladder member.

    ``Lambda = (gamma^2 I - Qm^* G Qm)^{-1} Qm^* (gamma^2 I - G)`` where G is
    the Gram matrix of the Hankel restriction.  Its spectral radius never
    exceeds 1; that bound is enforced here as a sanity check.

    Raises
    ------
    NumericalGuardError
        If the shifted defect ``gamma^2 I - Qm^* G Qm`` is singular, i.e. a
        maximizing vector of the restriction lies in the shifted subspace.
    """
    m = G_H.shape[0]
    eye = np.eye(m)
    D2 = gamma_k**2 * eye - G_H
    D02 = gamma_k**2 * eye - Qm.conj().T @ G_H @ Qm
    D02 = 0.5 * (D02 + D02.conj().T)
    lam = _guarded_solve(D02, Qm.conj().T @ D2, "shifted defect operator")
    radius = spectral_radius(lam)
    if radius > 1.0 + LAMBDA_RADIUS_SLACK:
        raise NumericalGuardError(
            f"contraction bound violated: spectral radius {radius:.12g} > 1"
        )
    return lam


def defect_range_projection(G_H: np.ndarray, Qm: np.ndarray, gamma_k: float) -> np.ndarray:
    """Orthogonal projection onto the range of (defect x shift compression).

    ``P_F = D Qm (D°^2)^{-1} Qm^* D`` with ``D`` the principal square root of
    ``gamma^2 I - G`` and ``D°^2 = gamma^2 I - Qm^* G Qm``; idempotent and
    self-adjoint whenever the shifted defect is invertible.
    """
    m = G_H.shape[0]
    eye = np.eye(m)
    D = _sqrt_psd(gamma_k**2 * eye - G_H, gamma_k**2)
    D02 = gamma_k**2 * eye - Qm.conj().T @ G_H @ Qm
    inner = _guarded_solve(0.5 * (D02 + D02.conj().T), Qm.conj().T @ D,
                           "shifted defect operator")
    return D @ Qm @ inner


def central_restricted(
    R: Realization,
    gp: GramianPair,
    lb: LadderBasis,
    Hmat: Optional[np.ndarray] = None,
) -> CentralSolution:
    """Central optimal solution of the problem restricted to a ladder member.

    The evaluator uses the Lambda resolvent strictly inside the disk and the
    boundary-safe N M^{-1} form otherwise.  For one input channel this is
    the unique optimal restricted solution.
    """
    if lb.k < 1:
        raise InputError("restricted solves need a ladder level k >= 1")
    if Hmat is None:
        Hmat = w_on_basis(R, lb)
    gamma_k, G_H = restricted_norm(Hmat, gp, lb)
    lam_m = lambda_matrix(G_H, lb.Qm, gamma_k)

    CH = R.C @ Hmat
    lam_E = lam_m @ lb.Emat
    eye_m = np.eye(lb.m)
    eye_p = np.eye(lb.p)
    Estar = lb.Emat.conj().T
    Sstar = lb.Sstar

    def phi(lam: complex) -> np.ndarray:
        lam = complex(lam)
        if abs(lam) < 1.0 - 1e-9:
            try:
                return CH @ _guarded_solve(eye_m - lam * lam_m, lam_E, "resolvent")
            except NumericalGuardError:
                pass
        y = _guarded_solve(eye_m - lam * Sstar, lam_E, "backward-shift resolvent")
        M = eye_p - lam * (Estar @ y)
        return _right_divide(CH @ y, M, "denominator M(lam)")

    Wprev = Hmat @ lb.Rm @ Hmat.conj().T
    state_data = {
        "delta": gamma_k**2 * np.eye(R.n) - R.A @ Wprev @ R.A.conj().T @ gp.Q,
        "xi": gamma_k**2 * np.eye(R.n) - Hmat @ Hmat.conj().T @ gp.Q,
        "zstar": np.linalg.solve(gp.Q, R.A.conj().T @ gp.Q) if R.n else gp.Q,
    }
    return CentralSolution(
        gamma=gamma_k,
        kind="restricted",
        k=lb.k,
        q_roots=lb.q_roots,
        lambda_m=lam_m,
        state_data=state_data,
        evaluator=phi,
    )


# --------------------------------------------------------------------------
# Route 2: finite N M^{-1} on the ladder member
# --------------------------------------------------------------------------

def central_restricted_nm(
    R: Realization,
    lb: LadderBasis,
    lambda_m: np.ndarray,
    Hmat: np.ndarray,
    lam: complex,
) -> np.ndarray:
    """Evaluate the restricted central solution as ``N(lam) M(lam)^{-1}``.

    Valid on the closed disk: the backward shift compressed to the ladder
    member has spectral radius below 1, and the denominator is invertible
    wherever the solution is defined.
    """
    lam = complex(lam)
    y = _guarded_solve(
        np.eye(lb.m) - lam * lb.Sstar, lambda_m @ lb.Emat, "backward-shift resolvent"
    )
    N = (R.C @ Hmat) @ y
    M = np.eye(lb.p) - lam * (lb.Emat.conj().T @ y)
    return _right_divide(N, M, "denominator M(lam)")


# --------------------------------------------------------------------------
# Route 3: state-space split with closed-form correction terms
# --------------------------------------------------------------------------

def corollary_state_matrices(
    R: Realization, gp: GramianPair, lb: LadderBasis, Hmat: np.ndarray, gamma_k: float
):
    """State matrices (Delta_k, Xi_k) of the restricted problem.

    ``Delta_k = gamma_k^2 I - A (Hmat Rm Hmat^*) A^* Q`` and
    ``Xi_k = gamma_k^2 I - (Hmat Hmat^*) Q`` represent the defect operators
    on the Hankel range in the Q-metric state coordinates.
    """
    eye = np.eye(R.n)
    Wprev = Hmat @ lb.Rm @ Hmat.conj().T
    delta = gamma_k**2 * eye - R.A @ Wprev @ R.A.conj().T @ gp.Q
    xi = gamma_k**2 * eye - Hmat @ Hmat.conj().T @ gp.Q
    return delta, xi


class CorollaryEvaluator:
    """State-space split of the restricted problem with the level data
    hoisted out of the per-point evaluation.

    ``terms(lam)`` returns ``(N_k(lam), M_k(lam))`` with ``N_k M_k^{-1}``
    the restricted central solution.  The leading terms are resolvents on
    the n-dimensional state space; the correction terms use two closed
    forms: reading coefficient 0 of a backward-shift resolvent is function
    evaluation, and pushing it through the Hankel map is
    ``C (A - lam I)^{-1} (A Wh - lam B h(lam))``.

    Raises
    ------
    NumericalGuardError
        If ``Delta_k`` is singular (possible for small k) or ``lam`` is too
        close to the spectrum of A (interior evaluation only).
    """

    def __init__(self, R: Realization, gp: GramianPair, lb: LadderBasis,
                 Hmat: np.ndarray, gamma_k: float):
        self._R, self._gp, self._lb = R, gp, lb
        A, B = R.A, R.B
        self._eye_n = np.eye(R.n)
        self._eye_p = np.eye(R.p)
        self._AH = A.conj().T
        self._BH = B.conj().T
        self._CP = R.C @ gp.P
        self.delta, self.xi = corollary_state_matrices(R, gp, lb, Hmat, gamma_k)
        dinv_B = _guarded_solve(self.delta, B, "Delta_k")
        self._AQDB = self._AH @ gp.Q @ dinv_B
        # correction data: h = (I - P_{k-1}) W^* v, one column per channel
        V = np.linalg.solve(gp.Q, self._AQDB)
        self._QV = gp.Q @ V
        self._coords = lb.Rm @ (Hmat.conj().T @ self._QV)
        self._Wh = gp.P @ self._QV - Hmat @ self._coords

    def terms(self, lam: complex):
        lam = complex(lam)
        R = self._R
        res = _guarded_solve(self._eye_n - lam * self._AH, self._AQDB,
                             "state resolvent")
        N1 = -self._CP @ res
        M1 = self._eye_p + lam * (self._BH @ res)

        hval = self._BH @ _guarded_solve(self._eye_n - lam * self._AH, self._QV,
                                         "state resolvent") \
            - self._lb.basis_values(lam) @ self._coords
        M2 = -lam * hval
        if lam == 0:
            U = self._Wh
        else:
            U = self._Wh + lam * _guarded_solve(
                R.A - lam * self._eye_n, self._Wh - R.B @ hval,
                "resolvent at lam in spec(A)",
            )
        N2 = R.C @ U
        return N1 + N2, M1 + M2


def corollary44_eval(
    R: Realization,
    gp: GramianPair,
    lb: LadderBasis,
    Hmat: np.ndarray,
    gamma_k: float,
    lam: complex,
):
    """One-shot evaluation of the state-space split; see
    :class:`CorollaryEvaluator` for grids."""
    return CorollaryEvaluator(R, gp, lb, Hmat, gamma_k).terms(lam)


# --------------------------------------------------------------------------
# Full problem
# --------------------------------------------------------------------------

def full_nm_terms(R: Realization, gp: GramianPair, gamma: float, lam: complex):
    """Numerator/denominator pair of the full problem at one point."""
    lam = complex(lam)
    eye_n = np.eye(R.n)
    delta = gamma**2 * eye_n - R.A @ gp.P @ R.A.conj().T @ gp.Q
    K = R.A.conj().T @ gp.Q @ _guarded_solve(delta, R.B, "Delta")
    y = _guarded_solve(eye_n - lam * R.A.conj().T, K, "state resolvent")
    N = -(R.C @ gp.P) @ y
    M = np.eye(R.p) + lam * (R.B.conj().T @ y)
    return N, M


def full_m_inverse(R: Realization, gp: GramianPair, gamma: float, lam: complex) -> np.ndarray:
    """Closed-form inverse denominator of the full problem.

    Valid on the closed disk because the state matrix
    ``Z^* Delta^{-1} Xi`` has spectral radius below 1.
    """
    lam = complex(lam)
    eye_n = np.eye(R.n)
    delta = gamma**2 * eye_n - R.A @ gp.P @ R.A.conj().T @ gp.Q
    zstar = np.linalg.solve(gp.Q, R.A.conj().T @ gp.Q)
    T = zstar @ _guarded_solve(delta, gamma**2 * eye_n - gp.P @ gp.Q, "Delta")
    ZDB = zstar @ _guarded_solve(delta, R.B, "Delta")
    y = _guarded_solve(eye_n - lam * T, ZDB, "inverse-denominator resolvent")
    return np.eye(R.p) - lam * (R.B.conj().T @ gp.Q @ y)


def _cascade(f1: AnalyticRealization, f2: AnalyticRealization) -> AnalyticRealization:
    """Series interconnection f1(lam) f2(lam) of two analytic realizations."""
    n1, n2 = f1.n, f2.n
    A = np.block([
        [f1.A, f1.B @ f2.C],
        [np.zeros((n2, n1), dtype=complex), f2.A],
    ])
    B = np.vstack([f1.B @ f2.D, f2.B])
    C = np.hstack([f1.C, f1.D @ f2.C])
    return AnalyticRealization(A, B, C, f1.D @ f2.D)


def _truncate_balanced(F: AnalyticRealization, tol: float = 1e-10) -> AnalyticRealization:
    """Drop state directions whose Hankel singular value is below tolerance."""
    if F.n == 0:
        return F
    Pc = solve_stein(F.A, F.B @ F.B.conj().T)
    Qo = solve_stein(F.A.conj().T, F.C.conj().T @ F.C)
    # factors X = Z Z^*
    def factor(X):
        w, V = np.linalg.eigh(0.5 * (X + X.conj().T))
        return V * np.sqrt(np.clip(w, 0.0, None))

    Zc, Zo = factor(Pc), factor(Qo)
    U, s, Vh = np.linalg.svd(Zo.conj().T @ Zc)
    keep = s > tol * max(1.0, s[0] if s.size else 0.0)
    r = int(np.count_nonzero(keep))
    if r == 0:
        empty = np.zeros((0, 0), dtype=complex)
        return AnalyticRealization(
            empty, np.zeros((0, F.B.shape[1]), dtype=complex),
            np.zeros((F.C.shape[0], 0), dtype=complex), F.D,
        )
    sr = np.sqrt(s[:r])
    W = Zo @ U[:, :r] / sr
    V = Zc @ Vh[:r].conj().T / sr
    return AnalyticRealization(
        W.conj().T @ F.A @ V, W.conj().T @ F.B, F.C @ V, F.D
    )


def solve_full_nehari(
    R: Realization,
    gp: GramianPair,
    report: HankelReport,
    build_realization: bool = True,
    truncate_tol: float = 1e-10,
) -> CentralSolution:
    """Unique optimal solution of the full problem in state-space form.

    Requires the maximizing-vector verdicts to hold (full multiplicity p and
    nonsingular values at the origin); under them the defect matrix
    ``Delta = gamma^2 I - A P A^* Q`` is invertible, the solution
    ``Phi_+ = N M^{-1}`` is analytic on the closed disk, and the error
    ``G_- + Phi_+`` has constant norm gamma on the circle.

    Raises
    ------
    ConditionError
        If the verdicts fail; the optimal solution may then be non-unique.
    NumericalGuardError
        If Delta is numerically singular (inconsistent with the verdicts) or
        the inverse-denominator state matrix is not a strict contraction.
    """
    if not report.c2_holds:
        raise ConditionError(
            "maximizing-vector conditions fail (multiplicity "
            f"{report.multiplicity} of {R.p} channels, values at 0 "
            f"{'independent' if report.d0_invertible else 'degenerate'}); "
            "the optimal solution may be non-unique"
        )
    gamma = report.gamma
    eye_n = np.eye(R.n)
    A, B, C, P, Q = R.A, R.B, R.C, gp.P, gp.Q
    delta = gamma**2 * eye_n - A @ P @ A.conj().T @ Q
    xi = gamma**2 * eye_n - P @ Q
    try:
        K = A.conj().T @ Q @ _guarded_solve(delta, B, "Delta")
    except NumericalGuardError as exc:
        raise NumericalGuardError(
            "Delta singular although the maximizing-vector conditions hold; "
            "inconsistent state"
        ) from exc
    CP = C @ P
    BH = B.conj().T
    AH = A.conj().T
    eye_p = np.eye(R.p)

    def phi(lam: complex) -> np.ndarray:
        lam = complex(lam)
        y = _guarded_solve(eye_n - lam * AH, K, "state resolvent")
        N = -CP @ y
        M = eye_p + lam * (BH @ y)
        return _right_divide(N, M, "denominator M(lam)")

    zstar = np.linalg.solve(Q, AH @ Q) if R.n else np.zeros((0, 0), dtype=complex)
    T = zstar @ _guarded_solve(delta, xi, "Delta")
    t_radius = spectral_radius(T)
    if t_radius >= 1.0:
        raise NumericalGuardError(
            f"inverse-denominator state matrix has spectral radius "
            f"{t_radius:.12g} >= 1; inconsistent state"
        )

    realization = None
    if build_realization:
        ZDB = zstar @ _guarded_solve(delta, B, "Delta")
        num = AnalyticRealization(AH, K, -CP @ AH, -CP @ K)
        den_inv = AnalyticRealization(T, ZDB, -BH @ Q, eye_p.astype(complex))
        realization = _truncate_balanced(_cascade(num, den_inv), truncate_tol)

    state_data = {
        "delta": delta,
        "xi": xi,
        "zstar": zstar,
        "cpq": C @ P @ Q,
        "bq": BH @ Q,
        "t_radius": t_radius,
    }
    return CentralSolution(
        gamma=gamma,
        kind="full",
        k=None,
        q_roots=None,
        lambda_m=None,
        state_data=state_data,
        evaluator=phi,
        realization=realization,
    )


# --------------------------------------------------------------------------
# Route 4: quotient of the Hankel image of a maximizing vector (p = 1)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HankelQuotient:
    """Optimal error function built from a maximizing vector (p = 1).

    ``phi(z) = (H psi)(z) / psi(z)`` on the unit circle; its analytic part
    ``phi(z) - G_-(z)`` equals the central solution.  Only diagnostic use is
    intended when the top singular value is not simple.
    """

    gamma: float
    psi: Callable[[complex], complex]
    hpsi: Callable[[complex], np.ndarray]
    simple: bool
    min_psi_modulus: float
    _symbol: Realization

    def phi(self, z: complex) -> np.ndarray:
        return self.hpsi(z) / self.psi(z)

    def phi_plus(self, z: complex) -> np.ndarray:
        """Analytic part, valid for z on the unit circle."""
        return self.phi(z) - eval_coanalytic(self._symbol, z)


def aak_quotient(
    R: Realization,
    gp: GramianPair,
    lb: Optional[LadderBasis] = None,
    Hmat: Optional[np.ndarray] = None,
    circle_samples: int = 4096,
) -> HankelQuotient:
    """Quotient route for a single input channel.

    Without a ladder member this solves the full problem from the top
    eigenvector of ``P Q``; with one it restricts to the member first.

    Raises
    ------
    InputError
        If the symbol has more than one input channel.
    NumericalGuardError
        If the maximizing vector (numerically) vanishes on the unit circle.
    """
    if R.p != 1:
        raise InputError("the quotient route requires a single input channel")
    if lb is None:
        M = gp.L @ gp.P @ gp.L.conj().T
        w, V = np.linalg.eigh(0.5 * (M + M.conj().T))
        gamma = float(np.sqrt(max(w[-1], 0.0)))
        simple = w.size < 2 or w[-2] < (1 - 1e-8) * w[-1]
        x = np.linalg.solve(gp.L, V[:, -1])
        Qx = gp.Q @ x
        state = gp.P @ Qx  # Hankel image of the maximizing vector

        def psi(z: complex) -> complex:
            y = np.linalg.solve(np.eye(R.n) - complex(z) * R.A.conj().T, Qx)
            return complex((R.B.conj().T @ y).item())

    else:
        if Hmat is None:
            Hmat = w_on_basis(R, lb)
        gamma, G_H = restricted_norm(Hmat, gp, lb)
        w, V = np.linalg.eigh(G_H)
        simple = w.size < 2 or w[-2] < (1 - 1e-8) * w[-1]
        c = V[:, -1]
        state = Hmat @ c

        def psi(z: complex) -> complex:
            return complex((lb.basis_values(z) @ c)[0])

    if not simple:
        warnings.warn(
            "top singular value is not simple; the quotient is built from "
            "one maximizing vector and is diagnostic only",
            NonUniqueMaximizerWarning,
            stacklevel=2,
        )

    col = state.reshape(-1, 1)

    def hpsi(z: complex) -> np.ndarray:
        z = complex(z)
        return R.C @ np.linalg.solve(z * np.eye(R.n) - R.A, col)

    grid = np.exp(2j * np.pi * np.arange(circle_samples) / circle_samples)
    psi_abs = np.array([abs(psi(z)) for z in grid])
    min_mod = float(psi_abs.min())
    if min_mod <= 1e-9 * max(float(psi_abs.max()), 1e-300):
        raise NumericalGuardError(
            "maximizing vector vanishes on the unit circle; quotient undefined"
        )
    return HankelQuotient(
        gamma=gamma, psi=psi, hpsi=hpsi, simple=simple,
        min_psi_modulus=min_mod, _symbol=R,
    )
