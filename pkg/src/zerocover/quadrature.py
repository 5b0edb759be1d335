"""Vectorized tensor-product quadrature over boxes.

Composite Gauss-Legendre panels with dyadic refinement until two successive
refinements agree to the requested relative tolerance. Integrands take an
(n, d) array of points and return (n,) values.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import QuadratureError
from .geometry import Box

_EVAL_CHUNK = 1 << 20


def gauss_legendre_panels(f, box: Box, panels: int, order: int = 12) -> float:
    """Composite Gauss-Legendre rule with `panels` panels per axis."""
    base_nodes, base_weights = leggauss(order)
    axes_nodes, axes_weights = [], []
    for lo, hi in zip(box.lower, box.upper):
        edges = np.linspace(lo, hi, panels + 1)
        half = np.diff(edges) / 2.0
        mid = (edges[:-1] + edges[1:]) / 2.0
        nodes = (mid[:, None] + half[:, None] * base_nodes).ravel()
        weights = (half[:, None] * base_weights).ravel()
        axes_nodes.append(nodes)
        axes_weights.append(weights)

    grids = np.meshgrid(*axes_nodes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    wgrids = np.meshgrid(*axes_weights, indexing="ij")
    w = wgrids[0].ravel().copy()
    for extra in wgrids[1:]:
        w *= extra.ravel()

    total = 0.0
    for i in range(0, len(pts), _EVAL_CHUNK):
        total += float(np.dot(w[i : i + _EVAL_CHUNK], f(pts[i : i + _EVAL_CHUNK])))
    return total


def integrate_box(
    f,
    box: Box,
    rel_tol: float = 1e-6,
    order: int = 12,
    start_panels: int = 4,
    max_panels: int = 256,
) -> tuple[float, float]:
    """Integrate f over the box, refining until relative convergence.

    Returns (value, error_estimate); raises QuadratureError when the panel
    budget runs out before the estimate stabilizes.
    """
    panels = start_panels
    prev = gauss_legendre_panels(f, box, panels, order)
    while panels <= max_panels:
        panels *= 2
        cur = gauss_legendre_panels(f, box, panels, order)
        err = abs(cur - prev)
        scale = max(abs(cur), 1e-300)
        if err <= rel_tol * scale:
            return cur, err
        prev = cur
    raise QuadratureError(
        f"quadrature did not converge to rel_tol={rel_tol} within {max_panels} panels per axis",
        value=prev,
        error_estimate=err,
    )


def integrate_regions(f, boxes, rel_tol: float = 1e-6, **kwargs) -> tuple[float, float]:
    """Sum of integrate_box over disjoint boxes covering the domain."""
    total, total_err = 0.0, 0.0
    for box in boxes:
        value, err = integrate_box(f, box, rel_tol=rel_tol, **kwargs)
        total += value
        total_err += err
    return total, total_err


def midpoint_box(f, box: Box, points_per_axis: int) -> float:
    """Plain midpoint rule; used as an independent cross-check."""
    axes = [
        lo + (np.arange(points_per_axis) + 0.5) * (hi - lo) / points_per_axis
        for lo, hi in zip(box.lower, box.upper)
    ]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    cell = box.volume / points_per_axis**box.dim
    total = 0.0
    for i in range(0, len(pts), _EVAL_CHUNK):
        total += float(np.sum(f(pts[i : i + _EVAL_CHUNK])))
    return total * cell
