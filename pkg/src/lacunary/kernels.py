"""Root finding and winding numbers.

The compiled extension is used when it imports; setting
LACUNARY_PURE_PYTHON=1 forces the numpy fallback.
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import _pykernels
from .errors import ConvergenceError, DomainError

try:
    if os.environ.get("LACUNARY_PURE_PYTHON") == "1":
        raise ImportError("pure Python requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"python": _pykernels}
if _compiled is not None:
    BACKENDS["cython"] = _compiled
BACKEND = "cython" if _compiled is not None else "python"


def get_backend(name: str | None = None):
    name = name or BACKEND
    if name not in BACKENDS:
        raise DomainError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    return BACKENDS[name]


def initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Starting points on circles read off the Newton polygon of log|c_k|."""
    c = np.asarray(coeffs, dtype=np.complex128)
    n = len(c) - 1
    mags = np.abs(c)
    with np.errstate(divide="ignore"):
        logs = np.where(mags > 0, np.log(mags), -np.inf)
    hull: list[int] = []
    for k in range(n + 1):
        if not np.isfinite(logs[k]):
            continue
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            # keep the upper hull: drop j if it lies on or below the chord i-k
            if (logs[j] - logs[i]) * (k - i) <= (logs[k] - logs[i]) * (j - i):
                hull.pop()
            else:
                break
        hull.append(k)
    out = []
    for i, j in zip(hull, hull[1:]):
        count = j - i
        radius = math.exp((logs[i] - logs[j]) / count)
        offset = 2 * math.pi * i / max(n, 1) + 0.4
        out.extend(radius * np.exp(1j * (2 * math.pi * np.arange(count) / count + offset)))
    return np.array(out, dtype=np.complex128)


def aberth_roots(coeffs, max_iter: int = 500, tol: float = 4e-15, backend: str | None = None) -> np.ndarray:
    """All roots of sum c_k z^k; requires c_0 and c_n nonzero."""
    c = np.asarray(coeffs, dtype=np.complex128)
    if len(c) < 2:
        return np.zeros(0, dtype=np.complex128)
    if c[0] == 0 or c[-1] == 0:
        raise DomainError("deflate leading and trailing zeros first")
    c = c / c[-1]
    if len(c) == 2:
        return np.array([-c[0]], dtype=np.complex128)
    roots, _, ok = get_backend(backend).aberth(c, initial_guesses(c), max_iter, tol)
    if not ok:
        raise ConvergenceError(f"Aberth iteration did not converge in {max_iter} steps")
    return roots


def winding_count(coeffs, radius: float, backend: str | None = None,
                  min_points: int = 64, max_points: int = 1 << 18) -> int:
    """Number of zeros in |z| < radius by the argument principle.

    The sampling is doubled until no step turns by more than pi/4.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    impl = get_backend(backend)
    n_points = max(min_points, 8 * (len(c) - 1))
    while n_points <= max_points:
        total, biggest, least = impl.winding_sum(c, float(radius), n_points)
        if least == 0:
            raise ConvergenceError("polynomial vanishes on the contour")
        if biggest < math.pi / 4:
            return int(round(total / (2 * math.pi)))
        n_points *= 2
    raise ConvergenceError("winding number did not stabilize")
