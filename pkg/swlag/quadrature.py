"""Quadrature rules: Gauss-Legendre, an adaptive quadtree and a smooth cutoff."""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Callable, NamedTuple, Tuple

import numpy as np
from scipy.special import roots_legendre

_LOGGER = logging.getLogger(__name__)

QUADTREE_CHUNK = 4096


@lru_cache(maxsize=64)
def _legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """Return n-point Gauss-Legendre nodes and weights on [a, b]."""
    x, w = _legendre(n)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


def composite_gauss(breaks, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes on each panel [breaks[i], breaks[i+1]]."""
    nodes, weights = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        x, w = gauss_legendre(n, a, b)
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def periodic_nodes(n: int, offset: float = 0.0) -> np.ndarray:
    """Uniform angles 2 pi (m + offset)/n, m = 0..n-1."""
    return 2.0 * np.pi * (np.arange(n) + offset) / n


def _bump_exp(y: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(y > 0, np.exp(-1.0 / np.where(y > 0, y, 1.0)), 0.0)


def smooth_cutoff(rho, radius: float) -> np.ndarray:
    """C-infinity cutoff equal to 1 for rho <= radius/2 and 0 for rho >= radius."""
    x = (np.asarray(rho, dtype=float) - 0.5 * radius) / (0.5 * radius)
    a = _bump_exp(1.0 - x)
    b = _bump_exp(x)
    return a / (a + b)


class QuadResult(NamedTuple):
    """Result of an adaptive integration."""

    value: float
    evaluations: int
    converged: bool


def _split(boxes: np.ndarray) -> np.ndarray:
    a, b, c, d = boxes.T
    mx, my = 0.5 * (a + b), 0.5 * (c + d)
    children = np.stack(
        [
            np.stack([a, mx, c, my], axis=1),
            np.stack([mx, b, c, my], axis=1),
            np.stack([a, mx, my, d], axis=1),
            np.stack([mx, b, my, d], axis=1),
        ],
        axis=1,
    )
    return children.reshape(-1, 4)


def _tensor_estimates(f: Callable, boxes: np.ndarray, order: int, chunk: int = QUADTREE_CHUNK) -> np.ndarray:
    x, w = _legendre(order)
    weights = np.outer(w, w)
    estimates = np.empty(boxes.shape[0])
    for start in range(0, boxes.shape[0], chunk):
        a, b, c, d = boxes[start : start + chunk].T
        hx, hy = 0.5 * (b - a), 0.5 * (d - c)
        X = (0.5 * (a + b))[:, None, None] + hx[:, None, None] * x[None, :, None]
        Y = (0.5 * (c + d))[:, None, None] + hy[:, None, None] * x[None, None, :]
        values = np.broadcast_to(f(X, Y), np.broadcast(X, Y).shape)
        estimates[start : start + chunk] = hx * hy * np.einsum("ij,nij->n", weights, values)
    return estimates


def adaptive_quadtree(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    bounds: Tuple[float, float, float, float],
    rtol: float = 1e-8,
    order: int = 6,
    initial: int = 4,
    max_level: int = 16,
    chunk: int = QUADTREE_CHUNK,
) -> QuadResult:
    """Integrate f(x, y) over the rectangle bounds = (a, b, c, d).

    Boxes are refined level by level; a box is accepted once its tensor
    Gauss estimate agrees with the sum over its four children within its
    area share of rtol times the coarse integral of |f|. At most chunk boxes
    are passed to f per call.
    """
    a, b, c, d = bounds
    xs = np.linspace(a, b, initial + 1)
    ys = np.linspace(c, d, initial + 1)
    boxes = np.array(
        [[xs[i], xs[i + 1], ys[k], ys[k + 1]] for i in range(initial) for k in range(initial)]
    )
    total_area = (b - a) * (d - c)
    estimates = _tensor_estimates(f, boxes, order, chunk)
    scale = math.fsum(np.abs(estimates)) or 1.0
    evaluations = boxes.shape[0] * order * order
    accepted = []
    for level in range(max_level):
        children = _split(boxes)
        child_estimates = _tensor_estimates(f, children, order, chunk)
        evaluations += children.shape[0] * order * order
        summed = child_estimates.reshape(-1, 4).sum(axis=1)
        area = (boxes[:, 1] - boxes[:, 0]) * (boxes[:, 3] - boxes[:, 2])
        done = np.abs(summed - estimates) <= rtol * scale * area / total_area
        accepted.append(summed[done])
        _LOGGER.debug(
            "Quadtree level %d: %d boxes, %d accepted", level, boxes.shape[0], int(done.sum())
        )
        keep = np.repeat(~done, 4)
        boxes = children[keep]
        estimates = child_estimates[keep]
        if boxes.shape[0] == 0:
            return QuadResult(math.fsum(np.concatenate(accepted)), evaluations, True)
    _LOGGER.warning("Quadtree stopped at level %d with %d open boxes", max_level, boxes.shape[0])
    accepted.append(estimates)
    return QuadResult(math.fsum(np.concatenate(accepted)), evaluations, False)
