"""Adaptive Gauss-Kronrod (7/15) quadrature for complex integrands in one and two dimensions.

Both routines accept a ``max_panel`` width so that oscillatory integrands can be
pre-split into panels no wider than a fixed fraction of their period before any
adaptive refinement starts.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence

# QUADPACK qk15 abscissae/weights on [-1, 1], positive half (last entry is the centre).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
# Gauss-Legendre 7-point nodes sit at the odd positions of the Kronrod set.
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]
GAUSS_WEIGHTS[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and refinement budget for the adaptive integrators."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 2048

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if int(self.max_subdivisions) < 1:
            raise ValueError("max_subdivisions must be >= 1")


def _initial_edges(a, b, max_panel):
    n = 1
    if max_panel is not None and max_panel > 0:
        n = max(1, math.ceil((b - a) / max_panel))
    return np.linspace(a, b, n + 1)


def _rule_1d(func, lo, hi):
    """Apply the 15-point rule to each panel [lo[k], hi[k]]; returns (kronrod, error)."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(func(x), dtype=complex)
    k = half * (fx @ KRONROD_WEIGHTS)
    g = half * (fx @ GAUSS_WEIGHTS)
    return k, np.abs(k - g)


def _complex_fsum(values):
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def gk15(func, a, b, cfg=None, max_panel=None):
    """Integrate a vectorized complex function over [a, b].

    Parameters
    ----------
    func : callable
        Maps an ndarray of abscissae to an ndarray of the same shape.
    a, b : float
        Finite limits, ``a <= b``.
    cfg : QuadratureConfig, optional
    max_panel : float, optional
        Upper bound on the width of the initial panels.

    Returns
    -------
    value : complex
    error : float
        Sum of the per-panel |Kronrod - Gauss| estimates.
    """
    cfg = cfg or QuadratureConfig()
    if b < a:
        raise ValueError("gk15 requires a <= b")
    if a == b:
        return 0j, 0.0
    edges = _initial_edges(a, b, max_panel)
    if len(edges) - 1 > cfg.max_subdivisions:
        raise NonConvergence(
            f"{len(edges) - 1} initial panels exceed the budget of {cfg.max_subdivisions}")
    vals, errs = _rule_1d(func, edges[:-1], edges[1:])
    heap = [(-e, lo, hi, v) for e, lo, hi, v in zip(errs, edges[:-1], edges[1:], vals)]
    heapq.heapify(heap)
    total = complex(vals.sum())
    err = float(errs.sum())
    used = len(edges) - 1
    while err > max(cfg.abs_tol, cfg.rel_tol * abs(total)):
        if used >= cfg.max_subdivisions:
            raise NonConvergence(
                f"gk15 on [{a}, {b}]: error {err:.3e} after {used} panels")
        neg_e, lo, hi, v = heapq.heappop(heap)
        c = 0.5 * (lo + hi)
        new_v, new_e = _rule_1d(func, np.array([lo, c]), np.array([c, hi]))
        total += new_v.sum() - v
        err += new_e.sum() + neg_e
        heapq.heappush(heap, (-new_e[0], lo, c, new_v[0]))
        heapq.heappush(heap, (-new_e[1], c, hi, new_v[1]))
        used += 1
    total = _complex_fsum([item[3] for item in heap])
    err = math.fsum(-item[0] for item in heap)
    return total, err


def _rule_2d(func, boxes):
    """boxes: (n, 4) array of (x0, x1, y0, y1). Returns kronrod (n, K) and error (n,)."""
    hx = 0.5 * (boxes[:, 1] - boxes[:, 0])
    hy = 0.5 * (boxes[:, 3] - boxes[:, 2])
    mx = 0.5 * (boxes[:, 1] + boxes[:, 0])
    my = 0.5 * (boxes[:, 3] + boxes[:, 2])
    xs = mx[:, None] + hx[:, None] * NODES[None, :]
    ys = my[:, None] + hy[:, None] * NODES[None, :]
    X = np.broadcast_to(xs[:, :, None], xs.shape + (15,))
    Y = np.broadcast_to(ys[:, None, :], ys.shape[:1] + (15, 15))
    F = np.asarray(func(X, Y), dtype=complex)  # (n, 15, 15, K)
    area = (hx * hy)[:, None]
    k = area * np.einsum("nijk,i,j->nk", F, KRONROD_WEIGHTS, KRONROD_WEIGHTS)
    g = area * np.einsum("nijk,i,j->nk", F, GAUSS_WEIGHTS, GAUSS_WEIGHTS)
    return k, np.abs(k - g).max(axis=1)


def gk15_2d(func, xlim, ylim, cfg=None, max_panel=None):
    """Integrate a vector-valued complex function over a rectangle.

    ``func(X, Y)`` receives broadcast node arrays of shape (n, 15, 15) and must
    return shape (n, 15, 15, K).  Tolerance is applied to the largest component.
    Returns ``(values, error)`` with ``values`` of shape (K,).
    """
    cfg = cfg or QuadratureConfig()
    xe = _initial_edges(*xlim, max_panel)
    ye = _initial_edges(*ylim, max_panel)
    boxes = np.array([(x0, x1, y0, y1)
                      for x0, x1 in zip(xe[:-1], xe[1:])
                      for y0, y1 in zip(ye[:-1], ye[1:])])
    if len(boxes) > cfg.max_subdivisions:
        raise NonConvergence(
            f"{len(boxes)} initial boxes exceed the budget of {cfg.max_subdivisions}")
    vals, errs = _rule_2d(func, boxes)
    heap = [(-e, i, tuple(bx)) for i, (e, bx) in enumerate(zip(errs, boxes))]
    store = {i: v for i, v in enumerate(vals)}
    heapq.heapify(heap)
    total = vals.sum(axis=0)
    err = float(errs.sum())
    used = len(boxes)
    counter = len(boxes)
    while err > max(cfg.abs_tol, cfg.rel_tol * np.abs(total).max()):
        if used >= cfg.max_subdivisions:
            raise NonConvergence(f"gk15_2d: error {err:.3e} after {used} boxes")
        neg_e, key, (x0, x1, y0, y1) = heapq.heappop(heap)
        if (x1 - x0) >= (y1 - y0):
            c = 0.5 * (x0 + x1)
            halves = np.array([(x0, c, y0, y1), (c, x1, y0, y1)])
        else:
            c = 0.5 * (y0 + y1)
            halves = np.array([(x0, x1, y0, c), (x0, x1, c, y1)])
        new_v, new_e = _rule_2d(func, halves)
        total = total + new_v.sum(axis=0) - store.pop(key)
        err += float(new_e.sum()) + neg_e
        for v, e, bx in zip(new_v, new_e, halves):
            store[counter] = v
            heapq.heappush(heap, (-e, counter, tuple(bx)))
            counter += 1
        used += 1
    total = np.sum(np.array([store[k] for k in sorted(store)]), axis=0)
    return total, float(sum(-item[0] for item in heap))
