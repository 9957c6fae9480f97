"""Daily GARCH(1,1), EGARCH and EGARCH-X models with day-of-week periodicity.

Returns are in percent. Periodic variants scale a single latent variance by a
weekday factor, ``log h_t = lambda_{d(t)} + log h*_t`` with the lambdas
summing to zero. They are estimated through unrestricted weekday levels
``kappa_d = lambda_d + omega / (1 - beta)`` from which ``omega`` and the
lambdas are recovered.

The optimiser contract is fixed so fits are reproducible: BFGS on the mean
log-likelihood in an unconstrained parameterisation from a default start
plus four jittered starts, ``gtol = 1e-6`` (max-norm), at most 500
iterations, followed by Newton polishing of the best candidate.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize

from . import _garch_kernels as K

__all__ = [
    "ModelSpec",
    "GarchParams",
    "GarchFit",
    "DailyReturns",
    "VarianceForecast",
    "DomainError",
    "NumericError",
    "ConvergenceError",
    "filter_variance",
    "log_likelihood",
    "fit",
    "recover_periodic_params",
    "robust_std_errors",
    "score_out_of_sample",
    "forecast_variance",
    "simulate_returns",
    "daily_returns_from_grid",
    "weekday_of",
    "load_daily_csv",
    "save_daily_csv",
]

logger = logging.getLogger(__name__)

FAMILIES = ("GARCH", "EGARCH", "EGARCHX")
N_STARTS = 5
GTOL = 1e-6
MAX_ITER = 500
JITTER = 0.2
FD_STEP = 1e-5
# |mu - r_t| below which mu is taken to sit on a kink, and the one-sided offset
KINK_TOL = 1e-6
KINK_EPS = 1e-9
# distance of the persistence from one that is reported as a boundary optimum
BOUNDARY_TOL = 1e-4
# objective value standing in for divergent or non-invertible filters
PENALTY = 1e6
# mean log-contraction above -margin is reported as an invertibility-boundary optimum
CONTRACTION_MARGIN = 1e-2
MAX_REDRAWS = 20
MIN_OBS = 300
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


class DomainError(ValueError):
    """Parameters violate the family's invariants."""


class NumericError(ArithmeticError):
    """The variance recursion produced a non-finite value."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConvergenceError(RuntimeError):
    """No start converged; ``best`` holds the best iterate found."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


def weekday_of(dates: np.ndarray) -> np.ndarray:
    """ISO weekday 1..7 (Monday = 1) of ``datetime64[D]`` dates."""
    days = np.asarray(dates, "datetime64[D]").astype(np.int64)
    return (days + 3) % 7 + 1


@dataclass(frozen=True)
class DailyReturns:
    """Daily percent returns with optional realized variance in percent squared."""

    dates: np.ndarray
    r: np.ndarray
    rv: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "dates", np.asarray(self.dates, "datetime64[D]"))
        object.__setattr__(self, "r", np.asarray(self.r, float))
        if self.rv is not None:
            object.__setattr__(self, "rv", np.asarray(self.rv, float))
            if len(self.rv) != len(self.r):
                raise ValueError("rv must align with r")
        if len(self.dates) != len(self.r):
            raise ValueError("dates must align with r")
        if not np.isfinite(self.r).all():
            raise ValueError("returns must be finite")

    def __len__(self):
        return len(self.r)

    @property
    def weekday(self) -> np.ndarray:
        return weekday_of(self.dates)

    def split_index(self, last_in_sample) -> int:
        """Number of observations dated on or before ``last_in_sample``."""
        return int(np.searchsorted(self.dates, np.datetime64(last_in_sample, "D"), side="right"))


@dataclass(frozen=True)
class ModelSpec:
    family: str = "GARCH"
    periodic: bool = False

    def __post_init__(self):
        family = self.family.upper().replace("-", "")
        if family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        object.__setattr__(self, "family", family)
        if self.periodic and family == "GARCH":
            raise ValueError("periodic variants are defined for EGARCH and EGARCHX only")

    @property
    def label(self) -> str:
        return ("p" if self.periodic else "") + {"GARCH": "GARCH", "EGARCH": "EGARCH", "EGARCHX": "EGARCH-X"}[self.family]

    @property
    def uses_rv(self) -> bool:
        return self.family == "EGARCHX"


@dataclass(frozen=True, eq=False)
class GarchParams:
    mu: float = 0.0
    omega: float = 0.1
    alpha: float = 0.1
    beta: float = 0.8
    tau: float = 0.0
    gamma: float = 0.0
    lambda_d: np.ndarray = field(default_factory=lambda: np.zeros(7))

    def __eq__(self, other):
        if not isinstance(other, GarchParams):
            return NotImplemented
        scalars = ("mu", "omega", "alpha", "beta", "tau", "gamma")
        return all(getattr(self, k) == getattr(other, k) for k in scalars) and np.array_equal(
            self.lambda_d, other.lambda_d
        )

    __hash__ = None

    def validate(self, spec: ModelSpec) -> None:
        if spec.family == "GARCH":
            if not (self.omega > 0 and self.alpha >= 0 and self.beta >= 0 and self.alpha + self.beta < 1):
                raise DomainError("GARCH needs omega > 0, alpha, beta >= 0 and alpha + beta < 1")
        elif not abs(self.beta) < 1:
            raise DomainError("EGARCH needs |beta| < 1")
        lam = np.asarray(self.lambda_d, float)
        if lam.shape != (7,):
            raise DomainError("lambda_d must have 7 entries")
        if not spec.periodic and np.any(lam != 0):
            raise DomainError("non-periodic models must have lambda_d = 0")
        if spec.periodic and abs(lam.sum()) > 1e-10:
            raise DomainError("periodic lambda_d must sum to zero")

    def as_dict(self, spec: ModelSpec) -> dict:
        out = {"mu": self.mu, "omega": self.omega, "alpha": self.alpha, "beta": self.beta}
        if spec.family != "GARCH":
            out["tau"] = self.tau
        if spec.uses_rv:
            out["gamma"] = self.gamma
        if spec.periodic:
            out["lambda"] = [float(v) for v in self.lambda_d]
        return out


def _theta(spec: ModelSpec, p: GarchParams) -> np.ndarray:
    if spec.family == "GARCH":
        return np.array([p.mu, p.omega, p.alpha, p.beta])
    return np.concatenate([[p.mu, p.omega, p.alpha, p.tau, p.beta, p.gamma], np.asarray(p.lambda_d, float)])


def _params_from_theta(spec: ModelSpec, theta: np.ndarray) -> GarchParams:
    if spec.family == "GARCH":
        return GarchParams(*map(float, theta[:4]))
    return GarchParams(
        mu=float(theta[0]),
        omega=float(theta[1]),
        alpha=float(theta[2]),
        tau=float(theta[3]),
        beta=float(theta[4]),
        gamma=float(theta[5]),
        lambda_d=np.array(theta[6:13], float),
    )


def _rv_arrays(spec: ModelSpec, data: DailyReturns):
    n = len(data)
    if spec.uses_rv:
        if data.rv is None:
            raise ValueError("EGARCH-X needs realized variance")
        ok = np.isfinite(data.rv) & (data.rv > 0)
        log_rv = np.where(ok, np.log(np.where(ok, data.rv, 1.0)), 0.0)
        return log_rv, ok
    return np.zeros(n), np.zeros(n, dtype=bool)


def _default_h1(data: DailyReturns, n_in: Optional[int] = None) -> float:
    r = data.r if n_in is None else data.r[:n_in]
    v = float(np.var(r))
    if not v > 0:
        raise ValueError("returns have zero variance")
    return v


def _raw(spec, theta, data, h1):
    if spec.family == "GARCH":
        return K.garch_filter(theta, data.r, h1)
    log_rv, ok = _rv_arrays(spec, data)
    log_h, ll, bad = K.egarch_filter(
        theta, data.r, log_rv, ok, data.weekday - 1, math.log(h1), spec.uses_rv
    )
    return log_h, ll, bad


def filter_variance(
    spec: ModelSpec, params: GarchParams, data: DailyReturns, h1: Optional[float] = None
) -> np.ndarray:
    """Conditional variances ``h_t``; the recursion starts from ``h1``.

    ``h1`` defaults to the sample variance of ``data.r``. In periodic models
    ``h1`` initialises the latent variance and ``h_1 = exp(lambda_{d(1)}) h1``.
    """
    params.validate(spec)
    h1 = _default_h1(data) if h1 is None else float(h1)
    out, _, bad = _raw(spec, _theta(spec, params), data, h1)
    if bad >= 0:
        raise NumericError(f"variance recursion diverged at index {bad}", bad)
    return out if spec.family == "GARCH" else np.exp(out)


def log_likelihood(
    spec: ModelSpec,
    params: GarchParams,
    data: DailyReturns,
    span: Optional[slice] = None,
    h1: Optional[float] = None,
) -> tuple[float, np.ndarray]:
    """Gaussian log-likelihood ``l_t = -(log h_t + z_t^2 + log 2 pi) / 2`` summed over ``span``.

    The filter always runs from the first observation, so scoring an
    out-of-sample span continues the in-sample recursion.
    """
    params.validate(spec)
    h1 = _default_h1(data) if h1 is None else float(h1)
    _, ll, bad = _raw(spec, _theta(spec, params), data, h1)
    if bad >= 0:
        raise NumericError(f"variance recursion diverged at index {bad}", bad)
    per_obs = ll[span if span is not None else slice(None)]
    return float(per_obs.sum()), per_obs


def recover_periodic_params(kappa, beta: float) -> tuple[float, np.ndarray]:
    """``omega`` and the zero-sum ``lambda_d`` from weekday levels ``kappa_d``."""
    kappa = np.asarray(kappa, float)
    if kappa.shape != (7,):
        raise ValueError("kappa must have 7 entries")
    if beta == 1:
        raise ZeroDivisionError("beta = 1 makes the weekday levels unidentified")
    if not abs(beta) < 1:
        raise ValueError("|beta| must be < 1")
    omega = (1.0 - beta) / 7.0 * kappa.sum()
    lam = kappa - omega / (1.0 - beta)
    return float(omega), lam


# --------------------------------------------------------------------------
# parameterisations
#
# "coef" space: the model's natural coefficients, where standard errors are
# computed. For periodic models it holds kappa instead of (omega, lambda).
# "free" space: unconstrained coordinates used by the optimiser.


class _Layout:
    def __init__(self, spec: ModelSpec):
        self.spec = spec
        if spec.family == "GARCH":
            self.coef_names = ["mu", "omega", "alpha", "beta"]
        else:
            names = ["mu"] + ([] if spec.periodic else ["omega"]) + ["alpha", "tau", "beta"]
            if spec.uses_rv:
                names.append("gamma")
            if spec.periodic:
                names += [f"kappa_{d}" for d in range(1, 8)]
            self.coef_names = names
        self.index = {n: i for i, n in enumerate(self.coef_names)}
        self.k = len(self.coef_names)

    # coef <-> theta -----------------------------------------------------
    def theta(self, coef: np.ndarray) -> np.ndarray:
        if self.spec.family == "GARCH":
            return np.asarray(coef, float).copy()
        ix = self.index
        th = np.zeros(K.N_EGARCH)
        th[0] = coef[ix["mu"]]
        th[2] = coef[ix["alpha"]]
        th[3] = coef[ix["tau"]]
        th[4] = beta = coef[ix["beta"]]
        if self.spec.uses_rv:
            th[5] = coef[ix["gamma"]]
        if self.spec.periodic:
            kappa = coef[ix["kappa_1"] : ix["kappa_1"] + 7]
            th[1] = (1.0 - beta) * kappa.mean()
            th[6:] = kappa - kappa.mean()
        else:
            th[1] = coef[ix["omega"]]
        return th

    def theta_jacobian(self, coef: np.ndarray) -> np.ndarray:
        """d theta / d coef."""
        if self.spec.family == "GARCH":
            return np.eye(4)
        ix = self.index
        J = np.zeros((K.N_EGARCH, self.k))
        J[0, ix["mu"]] = 1
        J[2, ix["alpha"]] = 1
        J[3, ix["tau"]] = 1
        J[4, ix["beta"]] = 1
        if self.spec.uses_rv:
            J[5, ix["gamma"]] = 1
        if self.spec.periodic:
            k0 = ix["kappa_1"]
            kappa = coef[k0 : k0 + 7]
            beta = coef[ix["beta"]]
            J[1, k0 : k0 + 7] = (1.0 - beta) / 7.0
            J[1, ix["beta"]] = -kappa.mean()
            J[6:, k0 : k0 + 7] = np.eye(7) - 1.0 / 7.0
        else:
            J[1, ix["omega"]] = 1
        return J

    def params(self, coef: np.ndarray) -> GarchParams:
        return _params_from_theta(self.spec, self.theta(coef))

    def coef_from_params(self, p: GarchParams) -> np.ndarray:
        if self.spec.family == "GARCH":
            return np.array([p.mu, p.omega, p.alpha, p.beta])
        vals = {"mu": p.mu, "omega": p.omega, "alpha": p.alpha, "tau": p.tau, "beta": p.beta, "gamma": p.gamma}
        out = np.zeros(self.k)
        for name, i in self.index.items():
            if name.startswith("kappa_"):
                d = int(name[-1]) - 1
                out[i] = p.lambda_d[d] + p.omega / (1.0 - p.beta)
            else:
                out[i] = vals[name]
        return out

    # free <-> coef ------------------------------------------------------
    def coef(self, free: np.ndarray) -> np.ndarray:
        c = np.asarray(free, float).copy()
        ix = self.index
        if self.spec.family == "GARCH":
            ea, eb = math.exp(free[2]), math.exp(free[3])
            den = 1.0 + ea + eb
            c[1] = math.exp(free[1])
            c[2] = ea / den
            c[3] = eb / den
        else:
            c[ix["beta"]] = math.tanh(free[ix["beta"]])
        return c

    def coef_jacobian(self, free: np.ndarray) -> np.ndarray:
        """d coef / d free."""
        J = np.eye(self.k)
        c = self.coef(free)
        if self.spec.family == "GARCH":
            a, b = c[2], c[3]
            J[1, 1] = c[1]
            J[2, 2] = a * (1 - a)
            J[2, 3] = -a * b
            J[3, 2] = -a * b
            J[3, 3] = b * (1 - b)
        else:
            i = self.index["beta"]
            J[i, i] = 1.0 - c[i] ** 2
        return J

    def free(self, coef: np.ndarray) -> np.ndarray:
        f = np.asarray(coef, float).copy()
        if self.spec.family == "GARCH":
            rest = 1.0 - coef[2] - coef[3]
            f[1] = math.log(coef[1])
            f[2] = math.log(coef[2] / rest)
            f[3] = math.log(coef[3] / rest)
        else:
            i = self.index["beta"]
            f[i] = math.atanh(coef[i])
        return f


class _Objective:
    """Log-likelihood over ``[lo, hi)`` as a function of theta."""

    def __init__(self, spec: ModelSpec, data: DailyReturns, h1: float, lo: int, hi: int):
        self.spec = spec
        self.r = np.ascontiguousarray(data.r)
        self.h1 = h1
        self.lo, self.hi = lo, hi
        if spec.family != "GARCH":
            self.log_rv, self.rv_ok = _rv_arrays(spec, data)
            self.wd = (data.weekday - 1).astype(np.int64)

    def __call__(self, theta: np.ndarray, scores: bool = False):
        if self.spec.family == "GARCH":
            return K.garch_grad(theta, self.r, self.h1, self.lo, self.hi, scores)
        return K.egarch_grad(
            theta, self.r, self.log_rv, self.rv_ok, self.wd, math.log(self.h1),
            self.spec.uses_rv, self.lo, self.hi, scores,
        )

    def log_contraction(self, layout: _Layout, coef: np.ndarray) -> float:
        """Sample mean log-contraction of the EGARCH filter (``-inf`` for GARCH)."""
        if self.spec.family == "GARCH":
            return -math.inf
        return K.egarch_log_contraction(
            layout.theta(coef), self.r, self.log_rv, self.rv_ok, self.wd, math.log(self.h1),
            self.spec.uses_rv, self.hi,
        )

    def coef_value_grad(self, layout: _Layout, coef: np.ndarray, scores: bool = False):
        total, g, s = self(layout.theta(coef), scores)
        J = layout.theta_jacobian(coef)
        return total, g @ J, (s @ J if scores else None)


def _default_coef(layout: _Layout, data: DailyReturns, h1: float, n_in: int) -> np.ndarray:
    spec = layout.spec
    mu = float(np.mean(data.r[:n_in]))
    if spec.family == "GARCH":
        alpha, beta = 0.05, 0.90
        return np.array([mu, h1 * (1 - alpha - beta), alpha, beta])
    alpha, beta = 0.1, 0.9
    omega = (1 - beta) * math.log(h1) - alpha * SQRT_2_OVER_PI
    p = GarchParams(mu=mu, omega=omega, alpha=alpha, beta=beta, tau=0.0, gamma=0.0)
    return layout.coef_from_params(p)


@dataclass(frozen=True)
class GarchFit:
    spec: ModelSpec
    params: GarchParams
    std_errors: dict
    h_path: np.ndarray
    loglik_in: float
    per_obs_ll: np.ndarray
    h1: float
    n_in: int
    coef: np.ndarray = field(repr=False, default=None)
    coef_cov: np.ndarray = field(repr=False, default=None)
    converged: bool = True
    grad_norm: float = 0.0
    loglik_default_start: float = float("nan")
    diagnostics: dict = field(default_factory=dict)

    def report(self, loglik_os: Optional[float] = None) -> dict:
        """Flat summary of the estimates with their robust standard errors."""
        return {
            "schema_version": 1,
            "model": self.spec.label,
            "family": self.spec.family,
            "periodic": self.spec.periodic,
            **self.params.as_dict(self.spec),
            "std_errors": self.std_errors,
            "std_error_type": "QMLE sandwich H^-1 S H^-1",
            "loglik_in": self.loglik_in,
            "loglik_os": loglik_os,
            "n_in": self.n_in,
            "converged": self.converged,
        }


def _span_bounds(data: DailyReturns, in_sample) -> int:
    if in_sample is None:
        return len(data)
    if isinstance(in_sample, slice):
        if in_sample.start not in (None, 0) or in_sample.step not in (None, 1):
            raise ValueError("the in-sample span must start at the first observation")
        return len(data) if in_sample.stop is None else int(in_sample.stop)
    if isinstance(in_sample, (int, np.integer)):
        return int(in_sample)
    return data.split_index(in_sample)


def _newton_polish(layout, objective, free, n, steps=8, start=0):
    """Newton steps on the mean log-likelihood using a differenced analytic Hessian.

    Coordinates before ``start`` are held fixed.
    """

    def grad_free(f):
        c = layout.coef(f)
        total, g, _ = objective.coef_value_grad(layout, c)
        return total / n, (g @ layout.coef_jacobian(f)) / n

    def sub_grad(x):
        f = free.copy()
        f[start:] = x
        return grad_free(f)[1][start:]

    value, g = grad_free(free)
    for _ in range(steps):
        if np.max(np.abs(g[start:])) < 1e-10:
            break
        H = _num_jacobian(sub_grad, free[start:])
        H = 0.5 * (H + H.T)
        try:
            step = np.zeros_like(free)
            step[start:] = np.linalg.solve(H, -g[start:])
        except np.linalg.LinAlgError:
            break
        accepted = False
        for shrink in (1.0, 0.5, 0.25, 0.125):
            trial = free + shrink * step
            try:
                v2, g2 = grad_free(trial)
            except (ValueError, OverflowError):
                continue
            if np.isfinite(v2) and v2 >= value - 1e-14 and objective.log_contraction(layout, layout.coef(trial)) < 0:
                free, value, g = trial, v2, g2
                accepted = True
                break
        if not accepted:
            break
    return free, value, g


def _kink_stationary(layout, objective, free, n, r_in):
    """Look for a maximum lying on a kink of ``|z_t|`` in ``mu``.

    EGARCH likelihoods are not differentiable at ``mu == r_t``, so the
    ``mu`` derivative can stay bounded away from zero at the optimum. When
    ``mu`` is next to an in-sample return it is moved onto it and the other
    coordinates, in which the likelihood is smooth for fixed ``mu``, are
    polished. The point is accepted when their gradient is below ``GTOL``
    and the one-sided ``mu`` derivatives bracket zero.

    Returns ``None`` or ``(free, value, g_rest_norm, (left, right))``.
    """
    if layout.spec.family == "GARCH":
        return None
    mu = free[0]
    k = int(np.argmin(np.abs(r_in - mu)))
    if abs(r_in[k] - mu) > KINK_TOL * max(1.0, abs(mu)):
        return None
    snapped = free.copy()
    snapped[0] = r_in[k]
    snapped, value, g = _newton_polish(layout, objective, snapped, n, start=1)
    rest = float(np.max(np.abs(g[1:])))
    eps = KINK_EPS * max(1.0, abs(r_in[k]))
    sides = []
    for shift in (-eps, eps):
        trial = snapped.copy()
        trial[0] = r_in[k] + shift
        _, gs, _ = objective.coef_value_grad(layout, layout.coef(trial))
        sides.append(float((gs @ layout.coef_jacobian(trial))[0] / n))
    left, right = sides
    if rest < GTOL and left > -GTOL and right < GTOL:
        return snapped, value, rest, (left, right)
    return None


def _num_jacobian(fun, x, rel_step=FD_STEP, steps=None):
    """Central-difference Jacobian of a vector function.

    ``steps`` overrides the relative step for coordinates where it is finite.
    """
    x = np.asarray(x, float)
    cols = []
    for i in range(len(x)):
        h = rel_step * max(abs(x[i]), 1.0)
        if steps is not None and np.isfinite(steps[i]):
            h = steps[i]
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        cols.append((np.asarray(fun(xp)) - np.asarray(fun(xm))) / (2 * h))
    return np.column_stack(cols)


def fit(
    spec: ModelSpec,
    data: DailyReturns,
    in_sample=None,
    seed: int = 0,
    n_starts: int = N_STARTS,
    compute_std_errors: bool = True,
) -> GarchFit:
    """Maximum likelihood fit over the in-sample span.

    Parameters
    ----------
    in_sample : None, int, slice or date-like
        Observations used for estimation: all (None), the first ``n`` (int
        or ``slice(None, n)``), or those dated on or before a date.
    seed : int
        Seeds the jitter of the extra starting points.
    """
    n_in = _span_bounds(data, in_sample)
    if n_in < MIN_OBS:
        raise ValueError(f"need at least {MIN_OBS} in-sample observations, got {n_in}")
    if spec.uses_rv and data.rv is None:
        raise ValueError("EGARCH-X needs realized variance")
    h1 = _default_h1(data, n_in)
    layout = _Layout(spec)
    objective = _Objective(spec, data, h1, 0, n_in)

    def negative(free):
        # non-invertible EGARCH filters have chaotic likelihoods; treat them as divergent
        try:
            c = layout.coef(free)
        except (OverflowError, ValueError):
            return PENALTY, np.zeros_like(free)
        if not objective.log_contraction(layout, c) < 0:
            return PENALTY, np.zeros_like(free)
        total, g, _ = objective.coef_value_grad(layout, c)
        if not np.isfinite(total) or not np.all(np.isfinite(g)):
            return PENALTY, np.zeros_like(free)
        return -total / n_in, -(g @ layout.coef_jacobian(free)) / n_in

    start = layout.free(_default_coef(layout, data, h1, n_in))
    default_value = -negative(start)[0] * n_in
    rng = np.random.default_rng(seed)
    starts = [start]
    while len(starts) < n_starts:
        # redraw jitters that land where the filter diverges or is not invertible
        for _ in range(MAX_REDRAWS):
            x0 = start + JITTER * rng.standard_normal(len(start))
            if negative(x0)[0] < PENALTY:
                break
        else:
            x0 = start
        starts.append(x0)

    candidates = []
    for x0 in starts:
        res = minimize(negative, x0, jac=True, method="BFGS", options={"gtol": GTOL, "maxiter": MAX_ITER})
        candidates.append((float(res.fun), res.x, res))
    candidates.sort(key=lambda c: c[0])
    best_value, best_x, best_res = candidates[0]
    free, value, g = _newton_polish(layout, objective, best_x, n_in)
    grad_norm = float(np.max(np.abs(g)))

    def recover(free):
        coef = layout.coef(free)
        params = layout.params(coef)
        if spec.periodic:
            # exact zero sum after the round-off in kappa - mean(kappa)
            params = replace(params, lambda_d=params.lambda_d - params.lambda_d.mean())
        return coef, params

    coef, params = recover(free)
    diagnostics = {
        "n_starts": n_starts,
        "start_logliks": [-c[0] * n_in for c in candidates],
        "bfgs_message": str(best_res.message),
        "n_rv_missing": int((~_rv_arrays(spec, data)[1][:n_in]).sum()) if spec.uses_rv else 0,
    }
    if not grad_norm < GTOL:
        kink = _kink_stationary(layout, objective, free, n_in, data.r[:n_in])
        if kink is not None:
            free, value, grad_norm, sides = kink
            diagnostics["mu_kink_derivatives"] = list(sides)
            coef, params = recover(free)
    if not grad_norm < GTOL:
        persistence = params.beta + (params.alpha if spec.family == "GARCH" else 0.0)
        hint = ""
        contraction = objective.log_contraction(layout, coef)
        if abs(persistence) > 1 - BOUNDARY_TOL:
            hint = f"; persistence {persistence:.8f} is at the unit-root boundary, the data show no identifiable mean reversion"
        elif contraction > -CONTRACTION_MARGIN:
            hint = f"; the optimum lies on the filter invertibility boundary (mean log-contraction {contraction:.2e})"
        raise ConvergenceError(
            f"{spec.label}: gradient max-norm {grad_norm:.2e} after {n_starts} starts{hint}", best=params
        )

    h_path = filter_variance(spec, params, data, h1)
    total, per_obs = log_likelihood(spec, params, data, slice(0, n_in), h1)
    result = GarchFit(
        spec, params, {}, h_path, total, per_obs, h1, n_in, coef, None, True, grad_norm,
        default_value, diagnostics,
    )
    if compute_std_errors:
        se, cov = _sandwich(result, data)
        result = replace(result, std_errors=se, coef_cov=cov)
    return result


def _reported_jacobian(layout: _Layout, coef: np.ndarray) -> tuple[list, np.ndarray]:
    """Names of the reported parameters and d reported / d coef."""
    spec = layout.spec
    names = ["mu", "omega", "alpha", "beta"]
    if spec.family != "GARCH":
        names.append("tau")
    if spec.uses_rv:
        names.append("gamma")
    if spec.family == "GARCH":
        return names, np.eye(4)
    Jt = layout.theta_jacobian(coef)
    rows = {"mu": 0, "omega": 1, "alpha": 2, "tau": 3, "beta": 4, "gamma": 5}
    J = [Jt[rows[n]] for n in names]
    if spec.periodic:
        for d in range(7):
            names.append(f"lambda_{d + 1}")
            J.append(Jt[6 + d])
    return names, np.vstack(J)


def _sandwich(fit_: GarchFit, data: DailyReturns) -> tuple[dict, np.ndarray]:
    layout = _Layout(fit_.spec)
    objective = _Objective(fit_.spec, data, fit_.h1, 0, fit_.n_in)
    coef = fit_.coef if fit_.coef is not None else layout.coef_from_params(fit_.params)
    _, _, scores = objective.coef_value_grad(layout, coef, scores=True)
    steps = None
    if fit_.spec.family != "GARCH":
        # the mu gradient jumps at every mu == r_t; difference over a span that
        # averages many kinks (the scale of mu's own standard error)
        steps = np.full(len(coef), np.nan)
        r_in = data.r[: fit_.n_in]
        steps[0] = np.std(r_in) / math.sqrt(fit_.n_in)
    H = _num_jacobian(lambda c: objective.coef_value_grad(layout, c)[1], coef, steps=steps)
    H = 0.5 * (H + H.T)
    eigval, eigvec = np.linalg.eigh(H)
    scale = np.max(np.abs(eigval))
    if np.min(np.abs(eigval)) <= 1e-10 * scale:
        direction = eigvec[:, np.argmin(np.abs(eigval))]
        top = dict(zip(layout.coef_names, np.round(direction, 3)))
        raise np.linalg.LinAlgError(f"singular Hessian; non-identified direction {top}")
    Hinv = np.linalg.inv(H)
    S = scores.T @ scores
    cov = Hinv @ S @ Hinv
    names, J = _reported_jacobian(layout, coef)
    rep_cov = J @ cov @ J.T
    se = {n: float(math.sqrt(max(v, 0.0))) for n, v in zip(names, np.diag(rep_cov))}
    return se, cov


def robust_std_errors(fit_: GarchFit, data: DailyReturns) -> dict:
    """Sandwich standard errors of the reported parameters.

    ``H`` is the Hessian of the in-sample log-likelihood, obtained by central
    differences (relative step 1e-5) of its analytic gradient, and ``S`` the
    outer product of per-observation scores. For EGARCH families the ``mu``
    column uses the step ``sd(r) / sqrt(n)`` because ``|z_t|`` has a kink at
    every ``mu == r_t``. Periodic lambdas and omega get delta-method errors from the weekday-level covariance.
    """
    return _sandwich(fit_, data)[0]


def score_out_of_sample(fit_: GarchFit, data: DailyReturns) -> float:
    """Log-likelihood of observations after the in-sample span at fixed estimates."""
    if fit_.n_in >= len(data):
        raise ValueError("no out-of-sample observations")
    total, _ = log_likelihood(fit_.spec, fit_.params, data, slice(fit_.n_in, None), fit_.h1)
    return total


@dataclass(frozen=True)
class VarianceForecast:
    dates: np.ndarray
    h: np.ndarray

    @property
    def annualized_vol(self) -> np.ndarray:
        """``sqrt(365 h)``, in percent since returns are in percent."""
        return np.sqrt(365.0 * self.h)


def forecast_variance(
    fit_: GarchFit, data: DailyReturns, start: Optional[int] = None, horizon: Optional[int] = None
) -> VarianceForecast:
    """One-step-ahead conditional variances with the fitted parameters held fixed.

    Defaults to the whole out-of-sample span (or the full sample when the
    fit used every observation).
    """
    h = filter_variance(fit_.spec, fit_.params, data, fit_.h1)
    if start is None:
        start = fit_.n_in if fit_.n_in < len(data) else 0
    stop = len(data) if horizon is None else start + horizon
    if not 0 <= start < stop <= len(data):
        raise ValueError("requested span is outside the data")
    return VarianceForecast(data.dates[start:stop], h[start:stop])


def simulate_returns(
    spec: ModelSpec,
    params: GarchParams,
    n: int,
    seed: int = 0,
    start_date: str = "2017-01-01",
    burn: int = 500,
    rv_weight: float = 0.7,
    rv_noise: float = 0.3,
) -> DailyReturns:
    """Simulate a model with Gaussian innovations.

    For EGARCH-X the realized variance is generated as
    ``RV_t = h_t (rv_weight z_t^2 + 1 - rv_weight) exp(rv_noise eta_t - rv_noise^2/2)``
    so that it is informative about the current shock.
    """
    params.validate(spec)
    rng = np.random.default_rng(seed)
    total = n + burn
    z = rng.standard_normal(total)
    eta = rng.standard_normal(total)
    dates = np.datetime64(start_date, "D") - burn + np.arange(total)
    wd = weekday_of(dates) - 1
    lam = np.asarray(params.lambda_d, float)
    r = np.empty(total)
    rv = np.full(total, np.nan)
    if spec.family == "GARCH":
        h = params.omega / (1 - params.alpha - params.beta)
        for t in range(total):
            e = math.sqrt(h) * z[t]
            r[t] = params.mu + e
            rv[t] = h
            h = params.omega + params.beta * h + params.alpha * e * e
    else:
        g = (params.omega + params.alpha * SQRT_2_OVER_PI) / (1 - params.beta)
        for t in range(total):
            lt = lam[wd[t]] + g
            ht = math.exp(lt)
            r[t] = params.mu + math.sqrt(ht) * z[t]
            ratio = (rv_weight * z[t] ** 2 + 1 - rv_weight) * math.exp(rv_noise * eta[t] - 0.5 * rv_noise**2)
            rv[t] = ht * ratio
            x = math.log(ratio) if spec.uses_rv else 0.0
            g = params.omega + params.beta * g + params.gamma * x + params.alpha * abs(z[t]) + params.tau * z[t]
    return DailyReturns(dates[burn:], r[burn:], rv[burn:])


def load_daily_csv(path) -> DailyReturns:
    """Read ``date, return_pct[, rv]`` rows; rv is in percent squared."""
    import pandas as pd

    from .ingest import DataError, IngestError

    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except pd.errors.EmptyDataError:
        raise IngestError(f"{path}: file is empty") from None
    for col in ("date", "return_pct"):
        if col not in frame.columns:
            raise IngestError(f"{path}: missing column {col!r}")
    dates = pd.to_datetime(frame["date"], errors="coerce", format="ISO8601")
    r = pd.to_numeric(frame["return_pct"], errors="coerce").to_numpy(float)
    bad = dates.isna().to_numpy() | ~np.isfinite(r)
    if bad.any():
        raise IngestError(f"{path}: line {int(np.flatnonzero(bad)[0]) + 2}: unparseable row")
    days = dates.to_numpy().astype("datetime64[D]")
    if np.any(np.diff(days.astype(np.int64)) <= 0):
        raise DataError(f"{path}: dates must be strictly increasing")
    rv = None
    if "rv" in frame.columns:
        rv = pd.to_numeric(frame["rv"], errors="coerce").to_numpy(float)
        if np.any(rv < 0):
            raise DataError(f"{path}: negative realized variance")
    return DailyReturns(days, r, rv)


def save_daily_csv(data: DailyReturns, path) -> None:
    import pandas as pd

    cols = {"date": data.dates.astype(str), "return_pct": data.r}
    if data.rv is not None:
        cols["rv"] = data.rv
    pd.DataFrame(cols).to_csv(path, index=False, float_format="%.17g")


def daily_returns_from_grid(grid) -> DailyReturns:
    """Close-to-close daily percent returns and percent-squared RV from a one-minute grid.

    Only days with 288 five-minute returns and a previous day's close are kept.
    """
    from .measures import realized_variance

    rv = realized_variance(grid)
    spec = grid.spec
    closes = {}
    for day in rv.day_index:
        end_slot = (day.astype("datetime64[s]").astype(np.int64) - spec.start) // 60 + 1439
        if 0 <= end_slot < len(grid):
            closes[day] = grid.log_price[end_slot]
    dates, r, rvs = [], [], []
    for i, day in enumerate(rv.day_index):
        prev = day - np.timedelta64(1, "D")
        if rv.complete[i] and day in closes and prev in closes:
            dates.append(day)
            r.append(100.0 * (closes[day] - closes[prev]))
            rvs.append(1e4 * rv.rv[i])
    return DailyReturns(np.array(dates, "datetime64[D]"), np.array(r), np.array(rvs))
