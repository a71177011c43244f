"""Pure numpy versions of the compiled kernels (same signatures)."""

from __future__ import annotations

import numpy as np


def _newton_ratio(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    inside = np.abs(z) <= 1.0
    out = np.empty_like(z)
    if inside.any():
        zi = z[inside]
        p = np.full_like(zi, c[n])
        dp = np.zeros_like(zi)
        for k in range(n - 1, -1, -1):
            dp = dp * zi + p
            p = p * zi + c[k]
        out[inside] = p / dp
    if (~inside).any():
        zo = z[~inside]
        y = 1.0 / zo
        p = np.full_like(zo, c[0])
        dp = np.zeros_like(zo)
        for k in range(1, n + 1):
            dp = dp * y + p
            p = p * y + c[k]
        out[~inside] = zo * p / (n * p - y * dp)
    return out


def _at_noise_level(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    inside = np.abs(z) <= 1.0
    x = np.where(inside, z, 1.0 / np.where(inside, 1.0, z))
    order = np.where(inside[:, None], c[None, :], c[None, ::-1])
    p = order[:, n].copy()
    a = np.abs(p)
    ax = np.abs(x)
    for k in range(n - 1, -1, -1):
        p = p * x + order[:, k]
        a = a * ax + np.abs(order[:, k])
    return np.abs(p) <= 4.0 * n * np.finfo(float).eps * a


def aberth(coeffs: np.ndarray, z0: np.ndarray, max_iter: int = 500, tol: float = 1e-14):
    """Jacobi-style Aberth-Ehrlich iteration; coeffs in ascending order.

    Roots freeze once their correction is below tol or their residual is at
    rounding level.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    z = np.array(z0, dtype=np.complex128)
    n = len(z)
    frozen = np.zeros(n, dtype=bool)
    done = False
    it = 0
    for it in range(max_iter):
        frozen |= _at_noise_level(c, z)
        if frozen.all():
            done = True
            break
        ratio = _newton_ratio(c, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        w = np.where(frozen, 0, ratio / (1.0 - ratio * s))
        z = z - w
        scale = np.abs(z.real) + np.abs(z.imag)
        scale[scale <= 1e-300] = 1.0
        frozen |= np.abs(w.real) + np.abs(w.imag) <= tol * scale
        if frozen.all():
            done = True
            break
    return z, it + 1, done


def winding_sum(coeffs: np.ndarray, radius: float, n_points: int):
    c = np.asarray(coeffs, dtype=np.complex128)
    theta = 2 * np.pi * np.arange(n_points + 1) / n_points
    z = radius * np.exp(1j * theta)
    p = np.polyval(c[::-1], z)
    steps = np.angle(p[1:] / p[:-1])
    return float(steps.sum()), float(np.abs(steps).max()), float(np.abs(p).min())
