"""Dense Hermitian linear algebra: eigensystems, operator norms, inverse square
roots on the support, and Gram-matrix embeddings.

Everything here is desk scale (dimension <= 64 in practice) and delegates the
eigenvalue work to LAPACK via ``numpy.linalg``; the contracts are about
validation and tolerances, not about the factorization algorithm.  Matrices
are plain ``numpy.ndarray``; ``hermitian`` is the checked constructor that
symmetrizes its input and is used wherever an operator enters the public API.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "hermitian",
    "eigensystem",
    "spectral_norm",
    "pinv_sqrt",
    "gram_embed",
]

# Inputs farther from conjugate symmetry than this (relative to scale) are
# rejected instead of silently averaged.
_ASYMMETRY_REJECT = 1e-8


def hermitian(entries: np.ndarray) -> np.ndarray:
    """Validated Hermitian matrix: symmetrized copy of ``entries``.

    Accepts square real or complex arrays whose asymmetry is numerical noise
    and returns (H + H*) / 2, which is conjugate-symmetric to working
    precision.  Non-square, non-finite, or materially asymmetric input raises.
    """
    h = np.asarray(entries)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h.view(float) if np.iscomplexobj(h) else h)):
        raise ValueError("matrix contains non-finite entries")
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    asym = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
    if asym > _ASYMMETRY_REJECT * scale:
        raise ValueError(
            f"matrix is not Hermitian: asymmetry {asym:.3e} at scale {scale:.3e}"
        )
    out = (h + h.conj().T) / 2.0
    if not np.iscomplexobj(out):
        out = out.astype(float)
    return out


def eigensystem(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending, real) and matching orthonormal eigenvector columns."""
    h = hermitian(h)
    vals, vecs = np.linalg.eigh(h)
    return vals, vecs


def spectral_norm(h: np.ndarray) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix."""
    h = hermitian(h)
    if h.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh(h))))


def pinv_sqrt(h: np.ndarray, support_tol: float = 1e-9) -> np.ndarray:
    """Inverse square root of a PSD matrix on its support.

    Eigenvalues above ``support_tol`` times the largest eigenvalue map to
    lambda**-0.5, the rest to 0, so the result satisfies
    ``W @ h @ W ~= P_support``.  A materially negative eigenvalue (below
    -support_tol times the spectral norm) raises instead of being clipped.
    """
    vals, vecs = eigensystem(h)
    top = float(vals[-1]) if vals.size else 0.0
    norm = float(np.max(np.abs(vals))) if vals.size else 0.0
    if vals.size and vals[0] < -support_tol * norm:
        raise ValueError(
            f"matrix has a materially negative eigenvalue {vals[0]:.3e} "
            f"(norm {norm:.3e})"
        )
    if top <= 0.0:
        return np.zeros_like(vecs @ vecs.conj().T)
    keep = vals > support_tol * top
    inv = np.zeros_like(vals)
    inv[keep] = 1.0 / np.sqrt(vals[keep])
    w = (vecs * inv) @ vecs.conj().T
    return (w + w.conj().T) / 2.0


def gram_embed(gram: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Vectors realizing a PSD Gram matrix, one per row.

    Returns an (N, r) array ``V`` with r the numerical rank of ``gram``
    (eigenvalues above ``tol`` times the largest); row x is the embedded
    vector of item x under the physics convention
    <v_x, v_y> = sum(conj(v_x) * v_y) = G[x, y], so the reconstruction
    identity is ``V.conj() @ V.T == G``.  Raises on materially non-PSD input.
    """
    vals, vecs = eigensystem(gram)
    norm = float(np.max(np.abs(vals))) if vals.size else 0.0
    if vals.size and vals[0] < -tol * max(norm, 1.0):
        raise ValueError(
            f"Gram matrix is not PSD: smallest eigenvalue {vals[0]:.3e}"
        )
    top = float(vals[-1]) if vals.size else 0.0
    if top <= 0.0:
        return np.zeros((gram.shape[0], 0))
    keep = vals > tol * top
    # <v_x, v_y> = G[x,y] needs v_x[m] = sqrt(l_m) * conj(vecs[x, m])
    v = np.sqrt(vals[keep]) * vecs[:, keep].conj()
    if not np.iscomplexobj(v):
        v = v.astype(float)
    return v
