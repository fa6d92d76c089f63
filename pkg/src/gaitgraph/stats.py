"""Shared Gaussian utilities."""

from __future__ import annotations

import numpy as np

from gaitgraph.errors import CovarianceModelError

EIG_CLIP = 1e-9


def psd_factor(sigma: np.ndarray, what: str = "covariance") -> np.ndarray:
    """Symmetric factor L with L L^T = sigma, clipping tiny negative modes.

    Sample covariances from a handful of trials are routinely singular;
    eigenvalues in [-1e-9, 0) are clipped to zero, anything lower is a
    modeling error.
    """
    sigma = 0.5 * (sigma + sigma.T)
    vals, vecs = np.linalg.eigh(sigma)
    if vals.min() < -EIG_CLIP:
        raise CovarianceModelError(
            f"{what} has negative eigenvalue {vals.min():.3e}"
        )
    vals = np.clip(vals, 0.0, None)
    return vecs * np.sqrt(vals)


def sample_gaussian(
    mu: np.ndarray, factor: np.ndarray, rng: np.random.Generator, size: int | None = None
) -> np.ndarray:
    """Draw from N(mu, factor factor^T)."""
    d = mu.shape[0]
    if size is None:
        return mu + factor @ rng.standard_normal(d)
    return mu + rng.standard_normal((size, d)) @ factor.T
