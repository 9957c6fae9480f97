"""Numba recursions for the GARCH and (periodic) EGARCH(-X) likelihoods.

Each kernel evaluates the Gaussian log-likelihood contributions and their
analytic derivatives with respect to the model's natural coefficients by
forward-mode differentiation of the variance recursion.

EGARCH coefficient layout (13 entries, unused ones are zero)::

    0 mu, 1 omega, 2 alpha, 3 tau, 4 beta, 5 gamma, 6..12 lambda_1..lambda_7

GARCH coefficient layout: ``mu, omega, alpha, beta``.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

N_EGARCH = 13
N_GARCH = 4
LOG_2PI = math.log(2.0 * math.pi)
# log-variance bound beyond which the recursion is declared divergent
LOG_H_MAX = 700.0


@njit(cache=True)
def egarch_filter(theta, r, log_rv, rv_ok, weekday, log_h1, use_x):
    """Return (log h_t, l_t, first failing index or -1)."""
    n = r.shape[0]
    mu, omega, alpha, tau, beta, gamma = theta[0], theta[1], theta[2], theta[3], theta[4], theta[5]
    log_h = np.empty(n)
    ll = np.empty(n)
    g = log_h1
    for t in range(n):
        lt = theta[6 + weekday[t]] + g
        if not (abs(lt) < LOG_H_MAX):
            return log_h, ll, t
        log_h[t] = lt
        z = (r[t] - mu) * math.exp(-0.5 * lt)
        ll[t] = -0.5 * (lt + z * z + LOG_2PI)
        x = 0.0
        if use_x and rv_ok[t]:
            x = log_rv[t] - lt
        g = omega + beta * g + gamma * x + alpha * abs(z) + tau * z
    return log_h, ll, -1


@njit(cache=True)
def egarch_grad(theta, r, log_rv, rv_ok, weekday, log_h1, use_x, lo, hi, want_scores):
    """Total log-likelihood over ``[lo, hi)`` with gradient, and optional per-t scores."""
    n = r.shape[0]
    k = N_EGARCH
    mu, omega, alpha, tau, beta, gamma = theta[0], theta[1], theta[2], theta[3], theta[4], theta[5]
    dg = np.zeros(k)
    dl = np.zeros(k)
    grad = np.zeros(k)
    scores = np.zeros((hi - lo if want_scores else 0, k))
    total = 0.0
    g = log_h1
    for t in range(hi):
        wd = weekday[t]
        lt = theta[6 + wd] + g
        if not (abs(lt) < LOG_H_MAX):
            return np.nan, grad, scores
        for j in range(k):
            dl[j] = dg[j]
        dl[6 + wd] += 1.0
        s = math.exp(-0.5 * lt)
        e = r[t] - mu
        z = e * s
        if t >= lo:
            total += -0.5 * (lt + z * z + LOG_2PI)
        x = 0.0
        x_on = use_x and rv_ok[t]
        if x_on:
            x = log_rv[t] - lt
        sgn = 1.0 if z > 0 else (-1.0 if z < 0 else 0.0)
        dz_coef = alpha * sgn + tau
        for j in range(k):
            # dz = -s dmu - z/2 dL
            dz = -0.5 * z * dl[j]
            if j == 0:
                dz -= s
            if t >= lo:
                dlt = -0.5 * dl[j] - z * dz
                grad[j] += dlt
                if want_scores:
                    scores[t - lo, j] = dlt
            dnext = beta * dg[j] + dz_coef * dz
            if x_on:
                dnext -= gamma * dl[j]
            dg[j] = dnext
        dg[1] += 1.0
        dg[2] += abs(z)
        dg[3] += z
        dg[4] += g
        dg[5] += x
        g = omega + beta * g + gamma * x + alpha * abs(z) + tau * z
    return total, grad, scores


@njit(cache=True)
def garch_filter(theta, r, h1):
    n = r.shape[0]
    mu, omega, alpha, beta = theta[0], theta[1], theta[2], theta[3]
    h_out = np.empty(n)
    ll = np.empty(n)
    h = h1
    for t in range(n):
        if not (h > 0.0 and h < 1e300):
            return h_out, ll, t
        h_out[t] = h
        e = r[t] - mu
        ll[t] = -0.5 * (math.log(h) + e * e / h + LOG_2PI)
        h = omega + beta * h + alpha * e * e
    return h_out, ll, -1


@njit(cache=True)
def garch_grad(theta, r, h1, lo, hi, want_scores):
    k = N_GARCH
    mu, omega, alpha, beta = theta[0], theta[1], theta[2], theta[3]
    dh = np.zeros(k)
    grad = np.zeros(k)
    scores = np.zeros((hi - lo if want_scores else 0, k))
    total = 0.0
    h = h1
    for t in range(hi):
        if not (h > 0.0 and h < 1e300):
            return np.nan, grad, scores
        e = r[t] - mu
        e2 = e * e
        inv = 1.0 / h
        if t >= lo:
            total += -0.5 * (math.log(h) + e2 * inv + LOG_2PI)
            for j in range(k):
                dlt = -0.5 * (dh[j] * inv - e2 * inv * inv * dh[j])
                if j == 0:
                    dlt += e * inv
                grad[j] += dlt
                if want_scores:
                    scores[t - lo, j] = dlt
        # h_{t+1} = omega + beta h + alpha e^2, de/dmu = -1
        for j in range(k):
            dh[j] = beta * dh[j]
        dh[0] += -2.0 * alpha * e
        dh[1] += 1.0
        dh[2] += e2
        dh[3] += h
        h = omega + beta * h + alpha * e2
    return total, grad, scores


@njit(cache=True)
def egarch_log_contraction(theta, r, log_rv, rv_ok, weekday, log_h1, use_x, hi):
    """Mean of ``log|d g_{t+1} / d g_t|`` over ``[0, hi)``; negative when the filter is invertible.

    Returns +inf if the recursion diverges.
    """
    mu, omega, alpha, tau, beta, gamma = theta[0], theta[1], theta[2], theta[3], theta[4], theta[5]
    g = log_h1
    acc = 0.0
    for t in range(hi):
        lt = theta[6 + weekday[t]] + g
        if not (abs(lt) < LOG_H_MAX):
            return np.inf
        z = (r[t] - mu) * math.exp(-0.5 * lt)
        x = 0.0
        m = beta - 0.5 * (alpha * abs(z) + tau * z)
        if use_x and rv_ok[t]:
            x = log_rv[t] - lt
            m -= gamma
        acc += math.log(abs(m) + 1e-300)
        g = omega + beta * g + gamma * x + alpha * abs(z) + tau * z
    return acc / hi
