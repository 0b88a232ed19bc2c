"""Coupled non-negative matrix tri-factorisation.

Each view X_v is approximated as R_v M_v C_v^T with all three factors
non-negative and the columns of R_v and C_v summing to one. Views are tied
together by quadratic coupling penalties on matching factors. Fitting uses
multiplicative updates, which preserve non-negativity and never increase the
objective; the normalisation constraint is enforced exactly after each factor
update by rescaling columns and absorbing the scales into the mixing matrix,
which leaves the reconstruction unchanged.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import NonFiniteError, RankDeficientError, ZeroNormViewError
from .seeds import rng_for
from .types import RestrictionWeights, TriFactors, as_views, check_coupling_shapes

EPS = 1e-10
RANK_CUTOFF = 1e-10


def _normalise_columns(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale each column to unit sum; returns (scaled, scales used).

    Columns with sum <= EPS are left alone (scale 1) to avoid dividing by
    nothing; everything downstream treats such columns as dead.
    """
    s = a.sum(axis=0)
    d = np.where(s > EPS, s, 1.0)
    return a / d, d


def initialise(
    views: Sequence[np.ndarray],
    k: int,
    *,
    seed=0,
    init_noise: float = 0.05,
) -> TriFactors:
    """SVD-based starting point.

    For each view the leading k left/right singular vectors give the row and
    column factors (absolute values, columns rescaled to unit sum), and the
    mixing matrix absorbs both rescalings around the singular values plus a
    small absolute Gaussian perturbation so equal candidates do not start
    identical. Raises RankDeficientError when a view has fewer than k
    numerically non-zero singular values.
    """
    views = as_views(views)
    if k < 1:
        raise RankDeficientError(f"rank must be at least 1, got {k}")
    row_factors, mixing, col_factors, row_duals, col_duals = [], [], [], [], []
    for v, x in enumerate(views):
        rng = rng_for(seed, k, v)
        u, sig, vt = np.linalg.svd(x, full_matrices=False)
        usable = int(np.sum(sig > RANK_CUTOFF * sig[0])) if sig.size else 0
        if usable < k:
            raise RankDeficientError(
                f"view {v} has {usable} numerically non-zero singular values, "
                f"need {k}"
            )
        r = np.abs(u[:, :k])
        r_scale = r.sum(axis=0)
        r /= r_scale
        c = np.abs(vt[:k].T)
        c_scale = c.sum(axis=0)
        c /= c_scale
        noise = np.abs(rng.normal(0.0, init_noise, size=(k, k)))
        m = np.diag(r_scale) @ (np.diag(sig[:k]) + noise) @ np.diag(c_scale)
        row_factors.append(r)
        mixing.append(m)
        col_factors.append(c)
        row_duals.append(np.ones(k))
        col_duals.append(np.ones(k))
    return TriFactors(row_factors, mixing, col_factors, row_duals, col_duals)


def relative_error(views: Sequence[np.ndarray], fac: TriFactors) -> float:
    """Mean over views of squared reconstruction error relative to ||X||^2."""
    total = 0.0
    for v, x in enumerate(views):
        denom = float(np.linalg.norm(x)) ** 2
        if denom <= 0.0:
            raise ZeroNormViewError(f"view {v} has zero norm")
        total += float(np.linalg.norm(x - fac.reconstruction(v))) ** 2 / denom
    return total / len(views)


def objective_value(
    views: Sequence[np.ndarray],
    fac: TriFactors,
    weights: RestrictionWeights,
) -> float:
    """Reconstruction error plus coupling penalties (the quantity the updates
    monotonically decrease)."""
    total = 0.0
    for v, x in enumerate(views):
        total += float(np.linalg.norm(x - fac.reconstruction(v))) ** 2
    n = len(views)
    for u in range(n):
        for v in range(u + 1, n):
            phi, xi, psi = weights.pair(u, v)
            if phi > 0:
                total += phi * float(np.linalg.norm(fac.row_factors[u] - fac.row_factors[v])) ** 2
            if xi > 0:
                total += xi * float(np.linalg.norm(fac.mixing[u] - fac.mixing[v])) ** 2
            if psi > 0:
                total += psi * float(np.linalg.norm(fac.col_factors[u] - fac.col_factors[v])) ** 2
    return total


def update_sweep(
    views: Sequence[np.ndarray],
    fac: TriFactors,
    weights: RestrictionWeights,
) -> None:
    """One full multiplicative update pass, in place.

    Views are visited in ascending order and coupling terms always read the
    freshest factor values. Within a view the order is: row factors, mixing,
    column factors, then the normalisation multipliers. After the row-factor
    and column-factor updates the columns are rescaled to unit sum with the
    scale absorbed into the mixing matrix, so the reconstruction is untouched
    and the multipliers stay at their fixed point.
    """
    phi_s, xi_s, psi_s = weights.symmetric()
    rf, mx, cf = fac.row_factors, fac.mixing, fac.col_factors
    n = len(views)
    for v in range(n):
        x = views[v]
        r, m, c = rf[v], mx[v], cf[v]
        ctc = c.T @ c

        num = x @ c @ m.T
        den = r @ (m @ ctc @ m.T)
        wsum = 0.0
        for u in range(n):
            w = phi_s[u, v]
            if u != v and w > 0:
                num = num + w * rf[u]
                wsum += w
        if wsum > 0:
            den = den + wsum * r
        den = den + 0.5 * fac.row_duals[v][None, :] + EPS
        r = r * (num / den)
        r, scale = _normalise_columns(r)
        m = scale[:, None] * m
        rf[v] = r

        rtr = r.T @ r
        num = r.T @ x @ c
        den = rtr @ m @ ctc
        wsum = 0.0
        for u in range(n):
            w = xi_s[u, v]
            if u != v and w > 0:
                num = num + w * mx[u]
                wsum += w
        if wsum > 0:
            den = den + wsum * m
        den = den + EPS
        m = m * (num / den)
        mx[v] = m

        num = x.T @ (r @ m)
        den = c @ (m.T @ rtr @ m)
        wsum = 0.0
        for u in range(n):
            w = psi_s[u, v]
            if u != v and w > 0:
                num = num + w * cf[u]
                wsum += w
        if wsum > 0:
            den = den + wsum * c
        den = den + 0.5 * fac.col_duals[v][None, :] + EPS
        c = c * (num / den)
        c, scale = _normalise_columns(c)
        mx[v] = m * scale[None, :]
        cf[v] = c

        fac.row_duals[v] = fac.row_duals[v] * rf[v].sum(axis=0)
        fac.col_duals[v] = fac.col_duals[v] * cf[v].sum(axis=0)


def solve(
    views: Sequence[np.ndarray],
    k: int,
    weights: RestrictionWeights | None = None,
    *,
    seed=0,
    init_noise: float = 0.05,
    tol: float = 1e-6,
    max_iters: int = 1000,
) -> TriFactors:
    """Fit the coupled tri-factorisation at a fixed number of biclusters.

    Runs update sweeps from the SVD start until the mean relative error moves
    by less than tol between sweeps, or max_iters sweeps have run. The error
    after each sweep is recorded in the result's error_trace (empty when
    max_iters is 0).
    """
    views = as_views(views)
    if weights is None:
        weights = RestrictionWeights.zeros(len(views))
    check_coupling_shapes(views, weights)
    fac = initialise(views, k, seed=seed, init_noise=init_noise)
    err_prev = relative_error(views, fac)
    for _ in range(max_iters):
        update_sweep(views, fac, weights)
        err = relative_error(views, fac)
        if not np.isfinite(err):
            raise NonFiniteError("reconstruction error became non-finite")
        fac.error_trace.append(err)
        if abs(err - err_prev) < tol:
            break
        err_prev = err
    return fac
