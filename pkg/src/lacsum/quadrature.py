"""Composite Gauss-Legendre quadrature on [0,1] for trigonometric integrands.

The rule is 8-point Gauss-Legendre per panel, with the panel count scaled to
the highest harmonic present. For smooth trigonometric polynomials the
composite rule reaches machine precision well before the nominal exactness
degree. Integrands with kinks (|S| at zeros of S) go through the adaptive
variant, which bisects any panel that might contain a zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import FrequencyTooLarge

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_X01 = (_GL_X + 1.0) / 2.0  # nodes on [0,1]
_W01 = _GL_W / 2.0


@dataclass(frozen=True)
class QuadratureConfig:
    points_per_period: int = 32
    max_total_points: int = 1 << 26

    def __post_init__(self):
        if self.points_per_period < 8:
            raise ValueError("points_per_period must be >= 8")


def panel_count(max_harmonic: int, cfg: QuadratureConfig) -> int:
    """Number of panels for a given highest harmonic; raises when over budget."""
    npanels = max(math.ceil(cfg.points_per_period * max_harmonic / 8), 8)
    if 8 * npanels > cfg.max_total_points:
        raise FrequencyTooLarge(
            f"harmonic {max_harmonic} needs {8 * npanels} quadrature points "
            f"(budget {cfg.max_total_points}); use Monte Carlo instead"
        )
    return npanels


def integrate_periodic(
    fn: Callable[[np.ndarray], np.ndarray],
    max_harmonic: int,
    cfg: QuadratureConfig | None = None,
):
    """Integral of fn over [0,1]; fn must be vectorized, real or complex."""
    cfg = cfg or QuadratureConfig()
    npanels = panel_count(max_harmonic, cfg)
    h = 1.0 / npanels
    total = 0.0
    is_complex = False
    block = 1 << 17  # panels per evaluation block, to bound peak memory
    for start in range(0, npanels, block):
        lefts = np.arange(start, min(start + block, npanels), dtype=np.float64) * h
        nodes = (lefts[:, None] + h * _X01[None, :]).ravel()
        vals = np.asarray(fn(nodes)).reshape(-1, 8)
        is_complex = is_complex or np.iscomplexobj(vals)
        total = total + h * (vals @ _W01).sum()
    return complex(total) if is_complex else float(total)


def integrate_abs_adaptive(
    absfn: Callable[[np.ndarray], np.ndarray],
    lipschitz: float,
    max_harmonic: int,
    cfg: QuadratureConfig | None = None,
    min_width: float = 1e-13,
) -> float:
    """Integral of a nonnegative function with isolated kinks at its zeros.

    A panel is accepted once its node minimum exceeds lipschitz * width
    (so the panel cannot reach zero); otherwise it is bisected. Panels
    narrower than min_width are accepted outright; their residual error is
    O(lipschitz * min_width^2) each.
    """
    cfg = cfg or QuadratureConfig()
    npanels = panel_count(max_harmonic, cfg)
    lefts = np.arange(npanels, dtype=np.float64) / npanels
    widths = np.full(npanels, 1.0 / npanels)
    total = 0.0
    for _ in range(200):
        if lefts.size == 0:
            break
        nodes = (lefts[:, None] + widths[:, None] * _X01[None, :]).ravel()
        vals = absfn(nodes).reshape(-1, 8)
        integ = widths * (vals @ _W01)
        suspect = (vals.min(axis=1) < lipschitz * widths) & (widths > min_width)
        total += float(integ[~suspect].sum())
        lefts = np.repeat(lefts[suspect], 2)
        widths = np.repeat(widths[suspect] / 2.0, 2)
        lefts[1::2] += widths[1::2]
    else:  # pragma: no cover - split loop is geometric, 200 levels is unreachable
        total += float((widths * (absfn((lefts[:, None] + widths[:, None] * _X01[None, :]).ravel()).reshape(-1, 8) @ _W01)).sum())
    return total
