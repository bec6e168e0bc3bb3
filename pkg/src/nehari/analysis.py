"""Circle-grid sup norms, optimality certificates and convergence sweeps.

The sweep solves the restricted problem on every ladder level up to k_max,
measures the sup-distance of each central solution to the full optimal one
on a uniform circle grid, and fits a geometric decay rate to compare with
the predicted spectral radius.  All shipped symbols are rational with poles
bounded away from the circle, so a uniform grid with a doubling adequacy
check suffices; there is no adaptive refinement.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import InputError, NehariError, NumericalGuardError, QuadratureWarning
from .hankel import check_conditions, rate_predictor
from .realization import GramianPair, Realization, eval_coanalytic, gramians
from .solver import CentralSolution, central_restricted, solve_full_nehari
from .subspace import LadderBasis, build_ladder

#: Sup-errors below this are treated as numerical noise and excluded from fits.
DEFAULT_FLOOR = 1e-11

#: Acceptable one-sided slack (log units) between fitted and predicted slope.
DEFAULT_MARGIN = 0.1

_MIN_FIT_POINTS = 4


def circle_points(n_grid: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n_grid) / n_grid)


def supnorm_on_circle(evaluator: Callable[[complex], np.ndarray], n_grid: int) -> float:
    """Largest top singular value of the evaluator over a uniform circle grid."""
    if n_grid < 1:
        raise InputError("grid size must be positive")
    best = 0.0
    for lam in circle_points(n_grid):
        try:
            val = np.atleast_2d(np.asarray(evaluator(lam)))
        except NehariError as exc:
            raise type(exc)(f"{exc} (at grid point lambda = {lam})") from exc
        except Exception as exc:  # noqa: BLE001 - annotate the offending point
            raise NumericalGuardError(
                f"evaluator failed at grid point lambda = {lam}: {exc}"
            ) from exc
        best = max(best, float(np.linalg.norm(val, 2)))
    return best


def error_evaluator(R: Realization, sol: CentralSolution) -> Callable[[complex], np.ndarray]:
    """Pointwise optimal error ``G_-(lam) + Phi_+(lam)`` on the circle."""

    def err(lam: complex) -> np.ndarray:
        return eval_coanalytic(R, lam) + sol.evaluator(lam)

    return err


def _restriction_gram_quadrature(
    phi_eval: Callable[[complex], np.ndarray], lb: LadderBasis, n_fft: int
) -> np.ndarray:
    grid = circle_points(n_fft)
    phi = np.stack([np.atleast_2d(np.asarray(phi_eval(lam))) for lam in grid])
    scal = lb.scalar_values(grid)  # (n_fft, n_funcs)
    # (phi b)(lam_j) for basis element (i, s):  phi[j, :, s] * scal[j, i]
    V = (phi[:, :, None, :] * scal[:, None, :, None]).reshape(n_fft, phi.shape[1], lb.m)
    gram = np.einsum("jqa,jqb->ab", V.conj(), V) / n_fft
    return 0.5 * (gram + gram.conj().T)


def optimality_certificate(
    phi_eval: Callable[[complex], np.ndarray],
    lb: LadderBasis,
    gamma_m: float,
    n_fft: int = 8192,
    doubling_tol: float = 1e-8,
    check_doubling: bool = True,
) -> float:
    """Residual of the attainment identity ``|Phi|_M = gamma_M``.

    Builds the Gram matrix of the error function applied to the basis of the
    test subspace by trapezoid quadrature on ``n_fft`` uniform circle points
    (exact for trigonometric polynomials of degree < n_fft, geometrically
    accurate for the rational functions at hand) and returns
    ``| sqrt(lambda_max(Gram)) - gamma_M |``.
    """
    if n_fft < 8 * lb.m:
        raise InputError(f"n_fft = {n_fft} too small; need at least {8 * lb.m}")
    gram = _restriction_gram_quadrature(phi_eval, lb, n_fft)
    norm = float(np.sqrt(max(np.linalg.eigvalsh(gram)[-1], 0.0)))
    residual = abs(norm - gamma_m)
    if check_doubling:
        gram2 = _restriction_gram_quadrature(phi_eval, lb, 2 * n_fft)
        norm2 = float(np.sqrt(max(np.linalg.eigvalsh(gram2)[-1], 0.0)))
        if abs(norm2 - norm) > doubling_tol:
            warnings.warn(
                f"quadrature under-resolved: doubling n_fft moved the norm by "
                f"{abs(norm2 - norm):.3e}",
                QuadratureWarning,
                stacklevel=2,
            )
    return residual


@dataclass(frozen=True)
class SweepRecord:
    k: int
    gamma_k: Optional[float]
    sup_err: Optional[float]
    delta_gap: Optional[float]
    skipped: Optional[str] = None


@dataclass(frozen=True)
class SweepReport:
    """Per-level convergence data with the fitted decay rate.

    ``fitted_slope`` is the least-squares slope of log(sup_err) against k
    over the usable levels (above the noise floor); ``predicted_log_rate``
    is the log of the spectral-radius prediction (None when the prediction
    is exactly zero, i.e. the restricted solutions are exact at every
    level).
    """

    q_roots: tuple
    k_max: int
    n_grid: int
    gamma: float
    z0_radius: float
    z_radius: float
    floor: float
    margin: float
    records: tuple = field(default_factory=tuple)
    fitted_slope: Optional[float] = None
    fitted_intercept: Optional[float] = None
    fit_residual_max: Optional[float] = None
    n_fit_points: int = 0
    fit_ok: bool = False
    slope_ok: Optional[bool] = None
    predicted_log_rate: Optional[float] = None
    all_below_floor: bool = False
    gamma_monotone: bool = True
    delta_ratios: tuple = ()

    def csv_rows(self):
        for rec in self.records:
            yield rec.k, rec.gamma_k, rec.sup_err, rec.delta_gap, rec.skipped or ""

    def to_json_dict(self) -> dict:
        return {
            "q_roots": [[r.real, r.imag] for r in self.q_roots],
            "k_max": self.k_max,
            "n_grid": self.n_grid,
            "gamma": self.gamma,
            "z0_radius": self.z0_radius,
            "z_radius": self.z_radius,
            "floor": self.floor,
            "margin": self.margin,
            "records": [
                {
                    "k": rec.k,
                    "gamma_k": rec.gamma_k,
                    "sup_err": rec.sup_err,
                    "delta_gap": rec.delta_gap,
                    "skipped": rec.skipped,
                }
                for rec in self.records
            ],
            "fitted_slope": self.fitted_slope,
            "fitted_intercept": self.fitted_intercept,
            "fit_residual_max": self.fit_residual_max,
            "n_fit_points": self.n_fit_points,
            "fit_ok": self.fit_ok,
            "slope_ok": self.slope_ok,
            "predicted_log_rate": self.predicted_log_rate,
            "all_below_floor": self.all_below_floor,
            "gamma_monotone": self.gamma_monotone,
            "delta_ratios": list(self.delta_ratios),
        }


def _conjugated_spectral_norm(L: np.ndarray, D: np.ndarray) -> float:
    """Spectral norm of L D L^{-1} (metric-consistent comparison)."""
    X = L @ D
    Y = np.linalg.solve(L.T, X.T).T
    return float(np.linalg.norm(Y, 2))


def convergence_sweep(
    R: Realization,
    q_roots,
    k_max: int,
    n_grid: int = 2048,
    floor: float = DEFAULT_FLOOR,
    margin: float = DEFAULT_MARGIN,
    gp: Optional[GramianPair] = None,
    full: Optional[CentralSolution] = None,
) -> SweepReport:
    """Solve the restricted problem on levels 1..k_max and fit the decay.

    Levels where a numerical guard trips (singular shifted defect, singular
    Delta_k, both possible for small k) are recorded as skipped.  The fit
    needs at least four usable levels, otherwise the report is marked
    inconclusive.
    """
    if k_max < 1:
        raise InputError("k_max must be at least 1")
    if gp is None:
        gp = gramians(R)
    if full is None:
        report = check_conditions(R, gp)
        full = solve_full_nehari(R, gp, report, build_realization=False)
    rp = rate_predictor(R, q_roots)

    grid = circle_points(n_grid)
    full_vals = np.stack([full.evaluator(lam) for lam in grid])
    delta_full = full.state_data["delta"]

    records = []
    gammas = []
    for k in range(1, k_max + 1):
        try:
            lb = build_ladder(q_roots, k=k, p=R.p)
            sol = central_restricted(R, gp, lb)
            vals = np.stack([sol.evaluator(lam) for lam in grid])
            sup_err = float(
                max(np.linalg.norm(vals[j] - full_vals[j], 2) for j in range(n_grid))
            )
            delta_gap = _conjugated_spectral_norm(
                gp.L, sol.state_data["delta"] - delta_full
            )
            records.append(SweepRecord(k, sol.gamma, sup_err, delta_gap))
            gammas.append(sol.gamma)
        except NumericalGuardError as exc:
            records.append(SweepRecord(k, None, None, None, skipped=str(exc)))

    usable = [(rec.k, rec.sup_err) for rec in records
              if rec.skipped is None and rec.sup_err > floor]
    all_below_floor = all(
        rec.sup_err <= floor for rec in records if rec.skipped is None
    ) and any(rec.skipped is None for rec in records)

    fitted_slope = fitted_intercept = fit_residual_max = None
    slope_ok = None
    fit_ok = len(usable) >= _MIN_FIT_POINTS
    if fit_ok:
        ks = np.array([k for k, _ in usable], dtype=float)
        logs = np.log(np.array([e for _, e in usable]))
        fitted_slope, fitted_intercept = (float(c) for c in np.polyfit(ks, logs, 1))
        fit_residual_max = float(
            np.max(np.abs(logs - (fitted_slope * ks + fitted_intercept)))
        )

    predicted_log_rate = float(np.log(rp.z0_radius)) if rp.z0_radius > 0 else None
    if fit_ok and predicted_log_rate is not None:
        slope_ok = bool(fitted_slope <= predicted_log_rate + margin)

    gamma_monotone = all(
        g2 >= g1 - 1e-10 for g1, g2 in zip(gammas, gammas[1:])
    ) and all(g <= full.gamma + 1e-10 for g in gammas)

    gaps = [rec.delta_gap for rec in records if rec.skipped is None]
    ratios = tuple(
        b / a for a, b in zip(gaps[:-1], gaps[1:])
        if a is not None and b is not None and a > 1e-12 and b > 1e-12
    )
    return SweepReport(
        q_roots=tuple(complex(r) for r in q_roots),
        k_max=k_max,
        n_grid=n_grid,
        gamma=full.gamma,
        z0_radius=rp.z0_radius,
        z_radius=rp.z_radius,
        floor=floor,
        margin=margin,
        records=tuple(records),
        fitted_slope=fitted_slope,
        fitted_intercept=fitted_intercept,
        fit_residual_max=fit_residual_max,
        n_fit_points=len(usable),
        fit_ok=fit_ok,
        slope_ok=slope_ok,
        predicted_log_rate=predicted_log_rate,
        all_below_floor=all_below_floor,
        gamma_monotone=gamma_monotone,
        delta_ratios=ratios[-5:],
    )
