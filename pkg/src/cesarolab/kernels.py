"""Dirichlet and Fejer kernels in closed form, and the Fejer kernel bounds."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# below this |u| (and (n+1)|u| < 1e-3) the Fejer kernel switches to its series
SINGULAR_THRESHOLD = 1e-6


@dataclass(frozen=True)
class KernelSample:
    order: int
    point: float
    value: complex | float


def fejer_kernel(n: int, u):
    """``K_n(u) = (sin((n+1)u/2) / sin(u/2))**2 / (2(n+1))``; ``K_n(0) = (n+1)/2``."""
    if n < 0:
        raise ValueError("order must be >= 0")
    u = np.asarray(u, dtype=float)
    n1 = n + 1
    near = (np.abs(u) < SINGULAR_THRESHOLD) & (n1 * np.abs(u) < 1e-3)
    safe = np.where(near, 1.0, u)
    val = (np.sin(0.5 * n1 * safe) / np.sin(0.5 * safe)) ** 2 / (2 * n1)
    series = 0.5 * n1 * (1.0 - (n1 * n1 - 1) * u * u / 12.0)
    out = np.where(near, series, val)
    return float(out) if out.ndim == 0 else out


def dirichlet_kernel(l: int, z):
    """``D_l(z) = (1/2) sum_{|k|<=l} e^{ikz}`` via the cotangent closed form.

    ``(e^{i(l+1)z} - e^{-ilz}) (-1/4 - (i/4) cot(z/2))`` away from 0,
    ``l + 1/2`` at the removable singularity.
    """
    if l < 0:
        raise ValueError("order must be >= 0")
    z = np.asarray(z, dtype=float)
    near = np.abs(z) < SINGULAR_THRESHOLD
    safe = np.where(near, 1.0, z)
    closed = (np.exp(1j * (l + 1) * safe) - np.exp(-1j * l * safe)) * (
        -0.25 - 0.25j / np.tan(0.5 * safe)
    )
    # near 0: D_l(z) = 1/2 + sum cos(kz) ~ (l + 1/2) - l(l+1)(2l+1) z^2 / 12
    series = (l + 0.5) - l * (l + 1) * (2 * l + 1) * z * z / 12.0
    out = np.where(near, series + 0j, closed)
    return complex(out) if out.ndim == 0 else out


def dirichlet_sum(l: int, z):
    """Direct ``(1/2) sum_{|k|<=l} e^{ikz}``; the reference for the closed form."""
    z = np.asarray(z, dtype=float)
    k = np.arange(-l, l + 1)
    out = 0.5 * np.exp(1j * np.multiply.outer(z, k)).sum(axis=-1)
    return complex(out) if out.ndim == 0 else out


def cot_identity_defect(z) -> np.ndarray:
    """``|1/(e^{iz}-1) - (-1/2 - (i/2) cot(z/2))|``.

    ``e^{iz} - 1`` is formed as ``-2 sin^2(z/2) + i sin z`` to avoid cancellation.
    """
    z = np.asarray(z, dtype=float)
    em1 = -2.0 * np.sin(0.5 * z) ** 2 + 1j * np.sin(z)
    return np.abs(1.0 / em1 - (-0.5 - 0.5j / np.tan(0.5 * z)))


@dataclass(frozen=True)
class FejerBoundReport:
    n: int
    samples: int
    min_value: float
    max_ratio: float
    passed: bool


def check_fejer_bounds(n: int, samples: int) -> FejerBoundReport:
    """Nonnegativity and ``K_n(u) <= pi^2 / (2(n+1)u^2)`` on a midpoint grid.

    The ratio reported is ``K_n(u) * 2(n+1)u^2 / pi^2``; ``u = 0`` is skipped.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    u = -np.pi + 2 * np.pi * (np.arange(samples) + 0.5) / samples
    u = u[u != 0.0]
    k = fejer_kernel(n, u)
    ratio = k * 2 * (n + 1) * u * u / np.pi**2
    lo, hi = float(k.min()), float(ratio.max())
    return FejerBoundReport(n, samples, lo, hi, lo >= -1e-12 and hi <= 1 + 1e-9)
