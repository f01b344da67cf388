"""Brute-force oracles, kept independent of the closed-form bound formulas."""

import numpy as np
from scipy.special import entr

from ..bell import SETTINGS, LhvModel, box_tables, model_analysis
from ..errors import DomainError
from ..prob_core import BinaryParams, binary_table, classical_mutual_information
from ..units import BITS, from_nats

_ROW_CHUNK = 128


def _x_interval(y, r):
    """Range of x keeping all four table entries non-negative, for fixed y and r."""
    lo = np.full_like(y, -1.0)
    hi = np.full_like(y, 1.0)
    for a in (1.0, -1.0):
        for b in (1.0, -1.0):
            slope = a * (1.0 + b * y)
            const = (1.0 + b * y) + a * b * r
            with np.errstate(divide="ignore", invalid="ignore"):
                root = -const / slope
            lo = np.where(slope > 0.0, np.maximum(lo, root), lo)
            hi = np.where(slope < 0.0, np.minimum(hi, root), hi)
            dead = (slope == 0.0) & (const < 0.0)
            lo = np.where(dead, np.inf, lo)
    return lo, hi


def _classical_candidates(c, resolution):
    grid = np.linspace(-1.0, 1.0, resolution + 1)
    signs = (c, -c) if c > 0.0 else (0.0,)
    for r in signs:
        for start in range(0, grid.size, _ROW_CHUNK):
            ys = grid[start : start + _ROW_CHUNK]
            x, y = np.meshgrid(grid, ys)
            yield x.ravel(), y.ravel(), r
        # boundary of the positivity region, row by row and column by column
        lo, hi = _x_interval(grid, r)
        ok = lo <= hi
        bx = np.concatenate([lo[ok], hi[ok]])
        by = np.concatenate([grid[ok], grid[ok]])
        yield bx, by, r
        yield by, bx, r


def _classical_min(c, resolution):
    best = np.inf
    for x, y, r in _classical_candidates(c, resolution):
        keep = BinaryParams(x, y, r).is_physical(tol=1e-12)
        if not np.any(keep):
            continue
        x, y = np.clip(x[keep], -1.0, 1.0), np.clip(y[keep], -1.0, 1.0)
        tables = np.clip(binary_table(x, y, r), 0.0, None)
        tables /= tables.sum(axis=(-2, -1), keepdims=True)
        info = classical_mutual_information(tables, unit="nats")
        best = min(best, float(np.min(info)))
    return best


def _bell_diagonal_candidates(c, resolution):
    """Sorted singular values (t1 >= t2 >= t3 >= 0) with max(t1+t2+t3, 2 t1) = 2c.

    The level set is made of two planar pieces, each a graph over (t2, t3):
    ``t1 = c`` where ``t2 + t3 <= c`` and ``t1 = 2c - t2 - t3`` where
    ``t2 + t3 >= c``. Piece edges are enumerated separately at the same
    resolution.
    """
    grid = np.linspace(0.0, 1.0, resolution + 1)
    t2, t3 = np.meshgrid(grid, grid, indexing="ij")
    t2, t3 = t2.ravel(), t3.ravel()
    keep = t3 <= t2
    t2, t3 = t2[keep], t3[keep]
    pieces = [
        (np.full_like(t2, c), t2, t3),
        (2.0 * c - t2 - t3, t2, t3),
    ]
    s = grid
    # t2 + t3 = c (both pieces meet), t1 = t2 on the sloped piece
    pieces.append((np.full_like(s, c), s, c - s))
    pieces.append((s, s, 2.0 * c - 2.0 * s))
    for t1, t2, t3 in pieces:
        ok = (t1 + 1e-12 >= t2) & (t2 + 1e-12 >= t3) & (t3 >= -1e-12) & (t1 <= 1.0 + 1e-12)
        t = np.stack([t1[ok], t2[ok], t3[ok]], axis=-1)
        cdist = 0.5 * np.maximum(t.sum(axis=-1), 2.0 * t[:, 0])
        t = t[np.abs(cdist - c) <= 1e-9]
        yield t


def _bell_weights(r):
    r1, r2, r3 = r[..., 0], r[..., 1], r[..., 2]
    return np.stack(
        [
            1.0 - r1 - r2 - r3,
            1.0 - r1 + r2 + r3,
            1.0 + r1 - r2 + r3,
            1.0 + r1 + r2 - r3,
        ],
        axis=-1,
    ) / 4.0


def _bell_diagonal_min(c, resolution):
    best = np.inf
    for t in _bell_diagonal_candidates(c, resolution):
        for alpha in (1.0, -1.0):
            p = _bell_weights(alpha * t)
            p = p[np.all(p >= -1e-12, axis=-1)]
            if p.size == 0:
                continue
            p = np.clip(p, 0.0, None)
            info = np.log(4.0) - entr(p).sum(axis=-1)
            best = min(best, float(info.min()))
    return best


def brute_force_min_mi(kind, c, resolution, unit=BITS):
    """Smallest mutual information found on a grid at correlation distance ``c``.

    ``kind="classical"`` searches 2x2 tables over the (x, y) square with
    ``r = +-c``; ``kind="bell_diagonal"`` searches Bell-diagonal spectra.
    """
    if resolution < 100:
        raise DomainError("resolution must be at least 100")
    if kind == "classical":
        if not 0.0 <= c <= 1.0:
            raise DomainError("classical correlation distance lies in [0, 1]")
        value = _classical_min(c, resolution)
    elif kind == "bell_diagonal":
        if not 0.0 <= c <= 1.5:
            raise DomainError("qubit correlation distance lies in [0, 3/2]")
        value = _bell_diagonal_min(c, resolution)
    else:
        raise ValueError(f"kind must be 'classical' or 'bell_diagonal', got {kind!r}")
    return float(from_nats(value, unit))


def _best_box(marginals, c):
    """Largest CHSH of a single box with given biases and |r| <= c, or -inf."""
    x, xp, y, yp = (marginals[..., i] for i in range(4))
    pairs = [(x, y, 1.0), (x, yp, 1.0), (xp, y, 1.0), (xp, yp, -1.0)]
    total = x * y + x * yp + xp * y - xp * yp
    feasible = np.ones_like(total, dtype=bool)
    rs = []
    for a, b, sign in pairs:
        lo = np.maximum(np.abs(a + b) - 1.0 - a * b, -c)
        hi = np.minimum(1.0 - np.abs(a - b) - a * b, c)
        r = hi if sign > 0 else lo
        feasible &= lo <= hi + 1e-15
        total = total + sign * r
        rs.append(r)
    return np.where(feasible, total, -np.inf), np.stack(rs, axis=-1)


def search_saturating_model(c_max, points=9, rounds=60):
    """Grid-refinement search for a model with the largest CHSH at ``c_max``.

    Each round evaluates a ``points**4`` grid of bias vectors around the
    incumbent (correlations set to their best feasible values), then shrinks
    the box by 0.7. The optimum sits on a ridge of the piecewise objective,
    so this returns the best model found, not a certified maximum. The best
    box and its outcome-flipped twin form the model. Returns
    ``(model, chsh)``.
    """
    if not 0.0 <= c_max <= 1.0:
        raise DomainError("c_max must lie in [0, 1]")
    center = np.zeros(4)
    half = 1.0
    best_val, best_m = -np.inf, center
    offsets = np.linspace(-1.0, 1.0, points)
    mesh = np.stack(np.meshgrid(*(offsets,) * 4, indexing="ij"), axis=-1).reshape(-1, 4)
    for _ in range(rounds):
        cand = np.clip(center + half * mesh, -1.0, 1.0)
        vals, _ = _best_box(cand, c_max)
        i = int(np.argmax(vals))
        if vals[i] >= best_val:
            best_val, best_m = float(vals[i]), cand[i]
        center = best_m
        half *= 0.7
    _, rs = _best_box(best_m[None, :], c_max)
    r = rs[0]
    x, xp, y, yp = best_m
    first = box_tables(x, xp, y, yp, r)
    second = box_tables(-x, -xp, -y, -yp, r)
    model = LhvModel(
        np.array([0.5, 0.5]), {k: np.stack([first[k], second[k]]) for k in SETTINGS}
    )
    return model, model_analysis(model).chsh

