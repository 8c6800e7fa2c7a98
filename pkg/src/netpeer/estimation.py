"""Fitting the peer-effects model to incomplete RNS data.

The observed-data regressor for the peer term averages covariates over
*sampled* neighbors only, which attenuates the peer-effect estimate
toward zero by roughly the degree ratio. Dividing the estimate (and the
confidence-interval limits) by the empirical scaling factor undoes the
attenuation.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import sampling as samplingmod
from .errors import AllIsolatedSampleError, RankDeficiencyError, ValidationError
from .sampling import RecruitmentSample

_COLUMNS = ("intercept", "own_x", "peer_mean")


@dataclass
class ObservedDesign:
    """Regression design built from a recruitment sample.

    Rows are (1, x_j, x*_j) where x*_j averages x over sampled
    neighbors; units isolated within the recruitment subgraph are
    dropped (x* undefined) and counted.
    """

    X: np.ndarray
    y: np.ndarray
    dropped_count: int
    retained_ids: np.ndarray  # local (within-sample) indices of retained units

    @property
    def n_used(self) -> int:
        return self.X.shape[0]

    @property
    def x_star(self) -> np.ndarray:
        return self.X[:, 2]


@dataclass
class FitResult:
    """MLE fit plus, after correction, the rescaled peer-effect estimate."""

    beta_hat: np.ndarray  # (beta0, beta1, beta2_naive)
    se: np.ndarray
    cov: np.ndarray
    sigma2_hat: float
    n_used: int
    dropped: int
    level: float
    crit: float  # CI critical value at `level`
    sxx_star: float  # sum of squared centered peer regressors
    ci_naive: tuple
    w_hat: float = None
    beta2_corrected: float = None
    ci_corrected: tuple = None
    ci_corrected_wald: tuple = None

    def to_dict(self) -> dict:
        return {
            "beta_hat": [float(b) for b in self.beta_hat],
            "se": [float(v) for v in self.se],
            "sigma2_hat": float(self.sigma2_hat),
            "w_hat": None if self.w_hat is None else float(self.w_hat),
            "beta2_corrected": (
                None if self.beta2_corrected is None else float(self.beta2_corrected)
            ),
            "ci_naive": [float(v) for v in self.ci_naive],
            "ci_corrected": (
                None if self.ci_corrected is None
                else [float(v) for v in self.ci_corrected]
            ),
            "ci_corrected_wald": (
                None if self.ci_corrected_wald is None
                else [float(v) for v in self.ci_corrected_wald]
            ),
            "n_used": self.n_used,
            "dropped": self.dropped,
        }

    def to_json(self) -> str:
        # float repr carries 17 significant digits
        return json.dumps(self.to_dict(), indent=2)


def build_observed_design(s: RecruitmentSample) -> ObservedDesign:
    """Assemble (1, x_j, x*_j) rows over sampled units with d^R_j > 0."""
    if s.x_obs is None or s.y_obs is None:
        raise ValidationError("sample carries no unit data to fit")
    retained = np.flatnonzero(s.observed_degrees > 0)
    dropped = s.n - retained.size
    if retained.size < 4:
        raise RankDeficiencyError(
            f"only {retained.size} retained rows (need at least 4)"
        )
    flat, offsets = s.g_r.flat()
    sums = np.zeros(s.n)
    # flat neighbor lists are grouped by vertex, so a segmented sum works
    nonzero = np.flatnonzero(np.diff(offsets) > 0)
    sums[nonzero] = np.add.reduceat(s.x_obs[flat], offsets[nonzero])
    x_star = sums[retained] / s.observed_degrees[retained]
    X = np.column_stack([np.ones(retained.size), s.x_obs[retained], x_star])
    return ObservedDesign(
        X=X, y=s.y_obs[retained], dropped_count=int(dropped), retained_ids=retained
    )


def _collinear_detail(X: np.ndarray) -> str:
    flat_cols = [name for name, col in zip(_COLUMNS, X.T) if np.ptp(col) == 0]
    if flat_cols:
        return "constant column(s): " + ", ".join(flat_cols)
    return "collinear columns among (" + ", ".join(_COLUMNS) + ")"


def fit_mle(d: ObservedDesign, level: float = 0.95, use_t: bool = False) -> FitResult:
    """Gaussian MLE of (beta0, beta1, beta2) on the observed design.

    Solved by least squares via an orthogonal decomposition; the
    residual variance uses the (n - 3) degrees-of-freedom divisor and
    the naive CI for beta2 uses the Gaussian (or, optionally, t)
    critical value.
    """
    if not 0.0 < level < 1.0:
        raise ValidationError("confidence level must be in (0, 1)")
    X, y = d.X, d.y
    n = d.n_used
    beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < 3:
        raise RankDeficiencyError(_collinear_detail(X))
    resid = y - X @ beta
    sigma2 = float(resid @ resid) / (n - 3)
    cov = sigma2 * np.linalg.inv(X.T @ X)
    se = np.sqrt(np.diag(cov))
    crit = (
        float(stats.t.ppf(0.5 + level / 2.0, df=n - 3))
        if use_t
        else float(stats.norm.ppf(0.5 + level / 2.0))
    )
    x_star = d.x_star
    sxx_star = float(np.sum((x_star - x_star.mean()) ** 2))
    ci = (beta[2] - crit * se[2], beta[2] + crit * se[2])
    return FitResult(
        beta_hat=beta,
        se=se,
        cov=cov,
        sigma2_hat=sigma2,
        n_used=n,
        dropped=d.dropped_count,
        level=level,
        crit=crit,
        sxx_star=sxx_star,
        ci_naive=ci,
    )


def apply_correction(fit: FitResult, w_hat: float) -> FitResult:
    """Rescale the peer-effect estimate and its CI limits by 1/w_hat.

    Also emits a Wald interval from the asymptotic variance of the
    corrected estimator, as an alternative to the rescaled-limits CI.
    """
    if not w_hat > 0:
        raise ValidationError("scaling factor must be positive")
    lo, hi = fit.ci_naive
    if fit.sxx_star > 0:
        half = fit.crit * math.sqrt(
            fit.sigma2_hat / (w_hat**2 * fit.sxx_star)
        )
        wald = (fit.beta_hat[2] / w_hat - half, fit.beta_hat[2] / w_hat + half)
    else:
        wald = None
    return dataclasses.replace(
        fit,
        w_hat=w_hat,
        beta2_corrected=fit.beta_hat[2] / w_hat,
        ci_corrected=(lo / w_hat, hi / w_hat),
        ci_corrected_wald=wald,
    )


def asymptotic_variance(d: ObservedDesign, sigma2: float, w_hat: float) -> float:
    """Sampling variance of the corrected estimator: sigma2 / (w^2 * sum (x*-mean)^2)."""
    x_star = d.x_star
    sxx = float(np.sum((x_star - x_star.mean()) ** 2))
    if sxx <= 0:
        raise RankDeficiencyError("zero variance in the peer regressor")
    return sigma2 / (w_hat**2 * sxx)


def diagnostics(d: ObservedDesign, s: RecruitmentSample) -> dict:
    """Empirical checks of the regularity conditions behind the correction.

    Reports the covariate variance statistic, the cross-product
    statistic, the observed/true degree-ratio summary with the scaling
    factor, the covariate-residual correlation from the fitted model,
    and the dropped-unit count.
    """
    x = np.asarray(s.x_obs, dtype=float)
    n = x.size
    centered = x - x.mean()
    var_stat = float(np.sum(centered**2)) / n
    cross_stat = float(np.sum(centered) ** 2 - np.sum(centered**2)) / n
    pos = s.reported_degrees > 0
    ratios = s.observed_degrees[pos] / s.reported_degrees[pos]
    try:
        w_hat = samplingmod.scaling_factor(s)
    except AllIsolatedSampleError:
        w_hat = None
    resid_corr = None
    try:
        fit = fit_mle(d)
        resid = d.y - d.X @ fit.beta_hat
        x_ret = d.X[:, 1]
        if np.ptp(x_ret) > 0 and np.ptp(resid) > 0:
            resid_corr = float(np.corrcoef(x_ret, resid)[0, 1])
    except RankDeficiencyError:
        pass
    return {
        "covariate_variance_stat": var_stat,
        "covariate_cross_stat": cross_stat,
        "degenerate_covariate": var_stat == 0.0,
        "degree_ratio_min": float(ratios.min()) if ratios.size else None,
        "degree_ratio_mean": float(ratios.mean()) if ratios.size else None,
        "degree_ratio_max": float(ratios.max()) if ratios.size else None,
        "w_hat": w_hat,
        "covariate_residual_corr": resid_corr,
        "dropped_count": d.dropped_count,
        "n_sampled": int(n),
    }
