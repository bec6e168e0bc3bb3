"""Exact rational orthonormal bases for the ladder of test subspaces.

The ladder member at level k is ``M_k = H^2_p (-) z^k b H^2_p`` where ``b``
is the finite Blaschke product with the given roots; equivalently,
``M_k = Ker S^* (+) S M_{k-1}`` starting from the model space of ``b``.  Its
orthonormal basis is built from monomials ``z^j`` (j < k) together with the
shifted Takenaka-Malmquist functions of the roots, tensored over the input
channels.  Every basis element is stored as exact rational data (numerator,
shared denominator, monomial shift), so Taylor coefficients to any order
come from polynomial long division and all compression matrices are computed
from coefficient series with geometrically small truncation tails:

* ``Qm``   -- compression of the forward shift to M_k,
* ``Sstar``-- the backward shift restricted to M_k (equals ``Qm^*``),
* ``Rm``   -- orthogonal projection onto ``S^* M_k = M_{k-1}``
              (equals ``Qm^* Qm``),
* ``Emat`` -- embedding of the constant functions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalGuardError, ZeroRestrictionWarning
from .realization import GramianPair, Realization

#: Hard cap on the basis dimension m = p (k + deg q).
MAX_BASIS_DIM = 512

_GRAM_TOL = 1e-12


@dataclass(frozen=True)
class RationalFunction:
    """Scalar H^2 function ``z^shift * num(z) / den(z)``.

    Coefficients are ascending; ``den[0] == 1`` and all denominator roots lie
    strictly outside the closed unit disk, so the Taylor coefficients decay
    geometrically and are computable exactly to any order by long division.
    """

    shift: int
    num: np.ndarray
    den: np.ndarray

    def __post_init__(self):
        num = np.atleast_1d(np.asarray(self.num, dtype=complex))
        den = np.atleast_1d(np.asarray(self.den, dtype=complex))
        if self.shift < 0:
            raise InputError("shift must be nonnegative")
        if den[0] != 1.0:
            raise InputError("denominator must be normalized with den[0] = 1")
        if den.size > 1:
            roots = np.roots(den[::-1])
            if np.any(np.abs(roots) <= 1.0 + 1e-12):
                raise InputError("denominator root inside the closed unit disk")
        num.setflags(write=False)
        den.setflags(write=False)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def taylor(self, n: int) -> np.ndarray:
        """First ``n`` Taylor coefficients, exact up to rounding."""
        inv = np.zeros(n, dtype=complex)
        if n == 0:
            return inv
        inv[0] = 1.0
        for j in range(1, n):
            top = min(j, self.den.size - 1)
            inv[j] = -np.dot(self.den[1 : top + 1], inv[j - top : j][::-1])
        series = np.convolve(self.num, inv)[:n]
        out = np.zeros(n, dtype=complex)
        if self.shift < n:
            out[self.shift :] = series[: n - self.shift]
        return out

    def eval(self, lam):
        """Value at a point or an array of points."""
        if np.ndim(lam) == 0:
            z = complex(lam)
            num = 0j
            for c in self.num[::-1]:
                num = num * z + c
            den = 0j
            for c in self.den[::-1]:
                den = den * z + c
            return z**self.shift * num / den
        lam = np.asarray(lam, dtype=complex)
        return lam**self.shift * np.polyval(self.num[::-1], lam) \
            / np.polyval(self.den[::-1], lam)

    def eval_matrix(self, A: np.ndarray) -> np.ndarray:
        """The matrix function num(A) den(A)^{-1} A^shift."""
        n = A.shape[0]
        numA = _polyval_matrix(self.num, A)
        denA = _polyval_matrix(self.den, A)
        shifted = numA @ np.linalg.matrix_power(A, self.shift)
        return np.linalg.solve(denA, shifted) if n else shifted


def _polyval_matrix(coeffs: np.ndarray, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    out = coeffs[-1] * np.eye(n, dtype=complex)
    for c in coeffs[-2::-1]:
        out = out @ A + c * np.eye(n)
    return out


@dataclass(frozen=True)
class LadderBasis:
    """Orthonormal basis of a ladder member with its compression matrices.

    Basis element ``i * p + s`` is ``funcs[i] * e_s``; all block matrices are
    scalar compressions tensored with the p x p identity.
    """

    q_roots: tuple
    k: int
    p: int
    funcs: tuple
    Qm: np.ndarray
    Sstar: np.ndarray
    Emat: np.ndarray
    Rm: np.ndarray
    gram_residual: float

    @property
    def d(self) -> int:
        return len(self.q_roots)

    @property
    def m(self) -> int:
        return self.p * len(self.funcs)

    @property
    def basis(self) -> list:
        return [(f, s) for f in self.funcs for s in range(self.p)]

    def scalar_values(self, lam) -> np.ndarray:
        """Values of the scalar basis functions at a point (or point array)."""
        if np.ndim(lam) == 0:
            return np.array([f.eval(lam) for f in self.funcs])
        return np.stack([np.asarray(f.eval(lam)) for f in self.funcs], axis=-1)

    def basis_values(self, lam: complex) -> np.ndarray:
        """Values of all basis elements at ``lam`` as a p x m matrix."""
        vals = self.scalar_values(complex(lam))
        if self.p == 1:
            return vals[None, :]
        return np.kron(vals[None, :], np.eye(self.p))

    def coordinates_to_taylor(self, coords: np.ndarray, n: int) -> np.ndarray:
        """Taylor coefficients (n, p) of the function with given coordinates."""
        coords = np.asarray(coords, dtype=complex).reshape(len(self.funcs), self.p)
        T = np.stack([f.taylor(n) for f in self.funcs])
        return T.T @ coords


def _series_length(k: int, roots: tuple) -> int:
    if not roots:
        return k + 2
    rho = max(abs(a) for a in roots)
    d = len(roots)
    t = 64
    # per-coefficient tail target 1e-21; repeated roots add polynomial growth
    while (t + 1.0) ** d * rho**t > 1e-21:
        t *= 2
        if t > 400_000:
            raise NumericalGuardError(
                "cannot reach truncation accuracy: a root too close to the "
                f"unit circle (max |root| = {rho:.12g})"
            )
    return k + d + t + 2


def _takenaka_malmquist(roots: tuple, k: int) -> list:
    """TM functions of the roots, shifted by z^k, over a shared denominator."""
    den = np.array([1.0 + 0j])
    for a in roots:
        den = np.convolve(den, np.array([1.0, -np.conj(a)]))
    funcs = []
    for i, a in enumerate(roots):
        num = np.array([np.sqrt(1.0 - abs(a) ** 2) + 0j])
        for b in roots[:i]:
            num = np.convolve(num, np.array([-b, 1.0]))
        for b in roots[i + 1 :]:
            num = np.convolve(num, np.array([1.0, -np.conj(b)]))
        funcs.append(RationalFunction(shift=k, num=num, den=den))
    return funcs


def build_ladder(q_roots, k: int, p: int, max_dim: int = MAX_BASIS_DIM) -> LadderBasis:
    """Construct the level-k ladder basis and its compression matrices.

    Parameters
    ----------
    q_roots : sequence of complex
        Roots of the Blaschke product defining the initial model space;
        strictly inside the unit disk, repetitions allowed.  Empty means the
        initial space is trivial.
    k : int
        Ladder level (number of shift steps); ``k + len(q_roots) >= 1``.
    p : int
        Number of input channels.
    """
    roots = tuple(complex(a) for a in q_roots)
    for a in roots:
        if abs(a) >= 1.0 - 1e-12:
            raise InputError(f"root {a} lies on or outside the unit circle")
    if k < 0:
        raise InputError("ladder level k must be nonnegative")
    if p < 1:
        raise InputError("channel count p must be positive")
    d = len(roots)
    if k + d < 1:
        raise InputError("k + deg q must be at least 1")
    m = p * (k + d)
    if m > max_dim:
        raise InputError(
            f"basis dimension {m} exceeds the cap {max_dim}; reduce k"
        )

    funcs = [
        RationalFunction(shift=j, num=np.array([1.0 + 0j]), den=np.array([1.0 + 0j]))
        for j in range(k)
    ]
    funcs.extend(_takenaka_malmquist(roots, k))
    funcs = tuple(funcs)

    N = _series_length(k, roots)
    coeffs = np.stack([f.taylor(N) for f in funcs])

    gram = coeffs.conj() @ coeffs.T
    gram_residual = float(np.max(np.abs(gram - np.eye(len(funcs)))))
    if gram_residual > _GRAM_TOL:
        raise NumericalGuardError(
            f"basis Gram matrix deviates from identity by {gram_residual:.3e}; "
            "roots may be too close to the unit circle"
        )

    qm_s = coeffs[:, 1:].conj() @ coeffs[:, :-1].T
    emat_s = coeffs[:, 0].conj()

    eye_p = np.eye(p)
    Qm = np.kron(qm_s, eye_p)
    Sstar = Qm.conj().T
    Rm = Sstar @ Qm
    Rm = 0.5 * (Rm + Rm.conj().T)
    Emat = np.kron(emat_s[:, None], eye_p)

    if k >= 1 and float(np.max(np.abs(Sstar @ Emat))) > 1e-12:
        raise NumericalGuardError("backward shift does not kill constants")
    # constants sit inside S^* M_k only once k >= 2
    if k >= 2 and float(np.max(np.abs(Rm @ Emat - Emat))) > 1e-11:
        raise NumericalGuardError("constants not contained in S^* M_k")

    for arr in (Qm, Sstar, Rm, Emat):
        arr.setflags(write=False)
    return LadderBasis(
        q_roots=roots,
        k=k,
        p=p,
        funcs=funcs,
        Qm=Qm,
        Sstar=Sstar,
        Emat=Emat,
        Rm=Rm,
        gram_residual=gram_residual,
    )


def w_on_basis(R: Realization, lb: LadderBasis) -> np.ndarray:
    """State coordinates of the Hankel images of all basis elements.

    Column ``i p + s`` is the state vector of the Hankel image of
    ``funcs[i] e_s``, i.e. ``f_i(A) B e_s`` with ``f_i(A)`` evaluated as a
    rational matrix function.  The squared Hankel-image norm of coordinates
    ``c`` is ``c^* (Hmat^* Q Hmat) c``.
    """
    if lb.p != R.p:
        raise InputError(
            f"channel mismatch: ladder has p={lb.p}, realization has p={R.p}"
        )
    blocks = [f.eval_matrix(R.A) @ R.B for f in lb.funcs]
    return np.hstack(blocks) if blocks else np.zeros((R.n, 0), dtype=complex)


def restricted_norm(Hmat: np.ndarray, gp: GramianPair, lb: LadderBasis,
                    zero_tol: float = 1e-12):
    """Norm of the Hankel restriction to the ladder member.

    Returns ``(gamma_k, G_H)`` where ``G_H = Hmat^* Q Hmat`` is the Gram
    matrix of the restriction and ``gamma_k`` the square root of its top
    eigenvalue.
    """
    if Hmat.shape[1] != lb.m:
        raise InputError(
            f"Hmat has {Hmat.shape[1]} columns but the basis has dimension {lb.m}"
        )
    G = Hmat.conj().T @ gp.Q @ Hmat
    G = 0.5 * (G + G.conj().T)
    w = np.linalg.eigvalsh(G) if G.size else np.zeros(1)
    gamma_k = float(np.sqrt(max(w[-1], 0.0)))
    if gamma_k <= zero_tol:
        warnings.warn(
            "Hankel restriction to this subspace is numerically zero",
            ZeroRestrictionWarning,
            stacklevel=2,
        )
    return gamma_k, G
