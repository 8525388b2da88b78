"""Uncentered randomized truncated SVD on CSR matrices.

The data matrix is never centered: centering destroys sparsity, and the
scores are meant to be the plain projections ``X @ V``.
"""

import json
from dataclasses import dataclass

import numpy as np

from ..errors import DataError, DimensionError, ZeroMatrix
from .csr import CsrMatrix
from .scaling import FeatureBlock


@dataclass(frozen=True)
class SvdFactors:
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    @property
    def q(self):
        return self.sigma.shape[0]

    def to_json(self):
        return json.dumps({
            "kind": "svd",
            "shape": [int(self.u.shape[0]), int(self.v.shape[0])],
            "q": self.q,
            "sigma": self.sigma.tolist(),
            "u": self.u.ravel().tolist(),
            "v": self.v.ravel().tolist(),
        })

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        if d.get("kind") != "svd":
            raise DataError("not an SVD factor file")
        n, p = d["shape"]
        q = d["q"]
        return cls(
            u=np.asarray(d["u"], dtype=np.float64).reshape(n, q),
            sigma=np.asarray(d["sigma"], dtype=np.float64),
            v=np.asarray(d["v"], dtype=np.float64).reshape(p, q),
        )


def _orth(a):
    q, _ = np.linalg.qr(a)
    return q


def truncated_svd(x, q, n_power_iters=4, oversample=10, seed=0):
    """Top-``q`` singular triplets of ``x`` by a randomized range finder.

    A Gaussian test matrix of width ``q + oversample`` (capped at the smaller
    dimension) is pushed through ``n_power_iters`` rounds of subspace
    iteration, re-orthonormalized between every multiplication.
    """
    if not isinstance(x, CsrMatrix):
        x = CsrMatrix.from_dense(x)
    n, p = x.shape
    if not 1 <= q <= min(n, p):
        raise DimensionError(f"q={q} outside [1, {min(n, p)}] for shape {x.shape}")
    width = min(q + oversample, min(n, p))
    rng = np.random.default_rng(seed)
    omega = rng.standard_normal((p, width))
    basis = _orth(x.dot(omega))
    for _ in range(n_power_iters):
        basis = _orth(x.tdot(basis))
        basis = _orth(x.dot(basis))
    small = x.tdot(basis).T  # basis.T @ x, width x p
    ub, s, vt = np.linalg.svd(small, full_matrices=False)
    u = basis @ ub[:, :q]
    sigma = s[:q].copy()
    v = vt[:q].T.copy()
    # sign convention: largest-magnitude entry of each right vector positive
    pivot = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[pivot, np.arange(q)])
    signs[signs == 0] = 1.0
    return SvdFactors(u=u * signs, sigma=sigma, v=v * signs)


def project(x_new, factors):
    """Scores ``x_new @ V`` for rows outside (or inside) the fitted matrix."""
    if not isinstance(x_new, CsrMatrix):
        x_new = CsrMatrix.from_dense(x_new)
    if x_new.shape[1] != factors.v.shape[0]:
        raise DimensionError(
            f"matrix has {x_new.shape[1]} columns, factors expect {factors.v.shape[0]}")
    names = [f"svd{k + 1}" for k in range(factors.q)]
    return FeatureBlock(x_new.dot(factors.v), names, "svd")


def variance_explained(factors, x):
    if not isinstance(x, CsrMatrix):
        x = CsrMatrix.from_dense(x)
    total = x.frobenius_sq()
    if total == 0:
        raise ZeroMatrix("matrix has zero Frobenius norm")
    return float(np.dot(factors.sigma, factors.sigma) / total)
