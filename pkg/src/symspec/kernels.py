"""Optimal kernels of any order, their lag-windows, and flat-top windows.

The optimal kernel of order k is the truncated paraboloid
``alpha * (1 - beta * Q(w))^+`` with
``Q(w) = sum_i w_i^2 + sum_{i<j} w_i w_j``. Its normaliser alpha is exact:
substituting ``w = T u`` with ``T' M T = I`` turns the support into a ball,
and the radial integral of ``1 - |u|^2`` over the unit n-ball is
``V_n * 2 / (n + 2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ValidationError
from .representation import Domain
from .symmetrize import WindowFunction


def default_beta(k: int) -> float:
    """beta giving the Epanechnikov (k=2) and Gabr-Rao (k=3) kernels; 1 otherwise."""
    if k == 2:
        return 1.0 / 5.0
    if k == 3:
        return 1.0 / math.pi ** 2
    return 1.0


def form_matrix(n: int) -> np.ndarray:
    """Symmetric matrix of Q: ones on the diagonal, 1/2 elsewhere."""
    return 0.5 * (np.eye(n) + np.ones((n, n)))


def quadratic_form(omega) -> np.ndarray | float:
    """Q(w) for a vector, or row-wise for an array of shape (..., n)."""
    w = np.asarray(omega, dtype=float)
    if w.ndim == 0 or w.shape[-1] == 0:
        raise ValidationError("quadratic_form needs a nonempty vector")
    n = w.shape[-1]
    upper = np.triu(np.ones((n, n)), 1)
    q = np.einsum("...i,...i->...", w, w) + np.einsum("...i,ij,...j->...", w, upper, w)
    return float(q) if q.ndim == 0 else q


@dataclass(frozen=True)
class QuadFormDiag:
    """Coordinates w = T u in which Q(w) = |u|^2; ``jacobian`` is |det T|."""

    order: int
    transform: np.ndarray
    jacobian: float


def diagonalize_quadratic_form(k: int) -> QuadFormDiag:
    if k < 2:
        raise ValidationError("order must be >= 2")
    evals, evecs = np.linalg.eigh(form_matrix(k - 1))
    T = evecs / np.sqrt(evals)
    return QuadFormDiag(k, T, float(abs(np.linalg.det(T))))


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def optimal_alpha(k: int, beta: float) -> float:
    """Normaliser making alpha * (1 - beta Q)^+ integrate to one over R^(k-1).

    det M = k / 2^(k-1), so the Jacobian of the ball map is
    sqrt(2^(k-1) / k) * beta^(-(k-1)/2).
    """
    if k < 2:
        raise ValidationError("order must be >= 2")
    if not beta > 0:
        raise ValidationError(f"beta must be positive, got {beta}")
    n = k - 1
    jac = math.sqrt(2.0 ** n / k) * beta ** (-n / 2)
    return 1.0 / (unit_ball_volume(n) * 2.0 / (n + 2) * jac)


def optimal_kernel(k: int, beta: float | None = None) -> WindowFunction:
    """The generalised Gabr-Rao kernel alpha * (1 - beta Q(w))^+ (frequency domain)."""
    beta = default_beta(k) if beta is None else float(beta)
    alpha = optimal_alpha(k, beta)
    # largest |w_i| on the ellipsoid Q = 1/beta is sqrt((M^-1)_ii / beta)
    support = math.sqrt(2.0 * (k - 1) / k / beta)

    def fn(W):
        return np.maximum(alpha * (1.0 - beta * quadratic_form(W)), 0.0)
    return WindowFunction(k, Domain.FREQUENCY, fn, f"optimal(k={k},beta={beta:.6g})",
                          support, {"alpha": alpha, "beta": beta})


def bessel_j2(x, tol: float = 1e-16) -> np.ndarray | float:
    """J_2 from its power series sum_l (-1)^l x^(2l+2) / (2^(2l+2) l! (l+2)!).

    Summation stops once the next term is below ``tol * (1 + |partial sum|)``.
    Terms alternate and grow like exp(|x|) before decaying, so the sum is
    accumulated in extended precision (``np.longdouble``); on x86-64 that keeps
    the absolute error below 1e-12 for |x| <= 20 and near 1e-10 at |x| = 25;
    accuracy degrades quickly beyond that.
    """
    xa = np.asarray(x, dtype=np.longdouble)
    h2 = (xa / 2) ** 2
    term = h2 / 2
    total = term.copy()
    ell = 0
    while True:
        ell += 1
        term = -term * h2 / (ell * (ell + 2))
        total = total + term
        if np.all(np.abs(term) <= tol * (1 + np.abs(total))):
            break
    out = total.astype(float)
    return float(out) if out.ndim == 0 else out


def _j2_over_a2_series(a: np.ndarray) -> np.ndarray:
    """8 J_2(a) / a^2 near zero: 8 sum_l (-1)^l a^(2l) / (2^(2l+2) l! (l+2)!)."""
    out = np.zeros_like(a)
    for ell in range(4):
        out += 8.0 * (-1) ** ell * a ** (2 * ell) / (2 ** (2 * ell + 2) * math.factorial(ell) * math.factorial(ell + 2))
    return out


def _dual_radius(T: np.ndarray, beta: float) -> np.ndarray:
    """sqrt(t' M^-1 t / beta) row-wise."""
    n = T.shape[1]
    Minv = np.linalg.inv(form_matrix(n))
    return np.sqrt(np.maximum(np.einsum("pi,ij,pj->p", T, Minv, T), 0.0) / beta)


def optimal_lag_window_values(T: np.ndarray, k: int, beta: float) -> np.ndarray:
    """Inverse Fourier transform of the unit-mass optimal kernel at lags T.

    With a = sqrt(t' M^-1 t / beta) and n = k - 1 the transform is
    Gamma(n/2 + 2) 2^(n/2 + 1) J_{n/2+1}(a) / a^(n/2 + 1). For k = 2 this is
    the quadratic-spectral window and for k = 3 it is 8 J_2(a) / a^2.
    """
    a = _dual_radius(np.atleast_2d(T), beta)
    small = a < 1e-4
    safe = np.where(small, 1.0, a)
    if k == 2:
        big = 3.0 * (np.sin(safe) - safe * np.cos(safe)) / safe ** 3
        near = 1.0 - a ** 2 / 10.0 + a ** 4 / 280.0
    elif k == 3:
        big = 8.0 * bessel_j2(safe) / safe ** 2
        near = _j2_over_a2_series(a)
    else:
        nu = (k - 1) / 2 + 1
        c = math.gamma(nu + 1) * 2.0 ** nu
        big = c * special.jv(nu, safe) / safe ** nu
        near = 1.0 - a ** 2 / (4.0 * (nu + 1))
    return np.where(small, near, big)


def optimal_lag_window(k: int, beta: float | None = None) -> WindowFunction:
    """Lag-window paired with ``optimal_kernel(k, beta)`` by the Fourier transform."""
    beta = default_beta(k) if beta is None else float(beta)
    return WindowFunction(k, Domain.LAG, lambda T: optimal_lag_window_values(T, k, beta),
                          f"optimal-lag(k={k},beta={beta:.6g})", None, {"beta": beta})


def gabr_rao_lag_window(tau1, tau2, beta: float | None = None) -> np.ndarray | float:
    """8 J_2(a) / a^2 with a = (2 pi / sqrt 3) sqrt(t1^2 - t1 t2 + t2^2) at beta = 1/pi^2."""
    beta = default_beta(3) if beta is None else float(beta)
    t1, t2 = np.broadcast_arrays(np.asarray(tau1, float), np.asarray(tau2, float))
    out = optimal_lag_window_values(np.stack([t1.ravel(), t2.ravel()], axis=1), 3, beta)
    out = out.reshape(t1.shape)
    return float(out) if out.ndim == 0 else out


def _check_c(c: float) -> float:
    c = float(c)
    if not 0.0 < c < 1.0:
        raise ValidationError(f"flat-top parameter c must lie in (0, 1), got {c}")
    return c


def right_pyramid(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Right pyramid over the hexagon |x| + |y| + |x - y| = 2, piecewise by sign pattern."""
    same_sign = ((x >= -1) & (x <= 0) & (y >= -1) & (y <= 0)) | ((x >= 0) & (x <= 1) & (y >= 0) & (y <= 1))
    a = 1.0 - np.maximum(np.abs(x), np.abs(y))
    b = 1.0 - np.maximum(np.abs(x + y), np.abs(x - y))
    return np.maximum(np.where(same_sign, a, b), 0.0)


def right_cone(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Right cone over the ellipse x^2 - xy + y^2 = 1."""
    return np.maximum(1.0 - np.sqrt(np.maximum(x * x - x * y + y * y, 0.0)), 0.0)


def _frustum(base, c: float):
    def fn(T):
        x, y = T[:, 0], T[:, 1]
        return base(x, y) / (1.0 - c) - c / (1.0 - c) * base(x / c, y / c)
    return fn


def flat_top_pyramidal(c: float = 0.5) -> WindowFunction:
    """Pyramidal frustum: 1 where |x|+|y|+|x-y| <= 2c, 0 beyond 2, linear between."""
    c = _check_c(c)
    return WindowFunction(3, Domain.LAG, _frustum(right_pyramid, c), f"flat-pyramid(c={c:g})",
                          1.0, {"kind": "pyramidal", "c": c})


def flat_top_conical(c: float = 0.5) -> WindowFunction:
    """Conical frustum: 1 where x^2-xy+y^2 <= c^2, 0 beyond 1, linear in the radius."""
    c = _check_c(c)
    return WindowFunction(3, Domain.LAG, _frustum(right_cone, c), f"flat-cone(c={c:g})",
                          2.0 / math.sqrt(3.0), {"kind": "conical", "c": c})
