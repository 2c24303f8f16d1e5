"""Dense complex-matrix primitives and subspace computations.

All rank decisions route through a single relative cutoff
``rank_tol * sigma_max * max(rows, cols)`` so that subspace dimensions,
pseudo-inverses and kernels stay mutually consistent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NegativeEigenvalue,
    NotHermitian,
    NotPSD,
)


@dataclass(frozen=True)
class Tolerance:
    """Relative thresholds: ``rank_tol`` for rank/kernel decisions,
    ``residual_tol`` for identity checks."""

    rank_tol: float = 1e-10
    residual_tol: float = 1e-9

    def __post_init__(self):
        if not (self.rank_tol > 0 and self.residual_tol > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_TOL = Tolerance()


def as_cmatrix(data) -> np.ndarray:
    """Coerce to a 2-d complex128 array and reject non-finite entries."""
    a = np.asarray(data, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={a.ndim}")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def as_cvector(data, dim: int | None = None) -> np.ndarray:
    v = np.asarray(data, dtype=np.complex128).reshape(-1)
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"expected vector of length {dim}, got {v.shape[0]}")
    return v


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^n, stored as an orthonormal column basis (n x k).

    A zero-dimensional subspace has a (n, 0) basis.
    """

    basis: np.ndarray

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def check(self, tol: Tolerance = DEFAULT_TOL) -> float:
        """Orthonormality residual ||basis^H basis - I||."""
        g = self.basis.conj().T @ self.basis
        return float(np.linalg.norm(g - np.eye(self.dim)))

    @staticmethod
    def full(n: int) -> "Subspace":
        return Subspace(np.eye(n, dtype=np.complex128))

    @staticmethod
    def zero(n: int) -> "Subspace":
        return Subspace(np.zeros((n, 0), dtype=np.complex128))

    @staticmethod
    def from_columns(cols, tol: Tolerance = DEFAULT_TOL) -> "Subspace":
        """Orthonormalize arbitrary spanning columns into a subspace."""
        return range_basis(as_cmatrix(cols), tol)


def _svd_cutoff(s: np.ndarray, shape, rank_tol: float,
                scale: float | None = None) -> float:
    if s.size == 0:
        return 0.0
    anchor = float(s[0]) if scale is None else float(scale)
    return rank_tol * anchor * max(shape)


def operator_norm(a) -> float:
    """Largest singular value; 0 for empty matrices."""
    a = as_cmatrix(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def projector(u: Subspace) -> np.ndarray:
    return u.projector()


def psd_sqrt(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Unique PSD square root of a PSD matrix.

    The input is Hermitian-symmetrized first (guards against rounding);
    eigenvalues slightly below zero are clamped, genuinely negative ones
    raise ``NegativeEigenvalue``.
    """
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch("psd_sqrt needs a square matrix")
    scale = operator_norm(a)
    herm_res = operator_norm(a - a.conj().T)
    if herm_res > tol.residual_tol * max(scale, 1.0):
        raise NotHermitian("matrix is not Hermitian", residual=herm_res)
    h = (a + a.conj().T) / 2.0
    w, v = np.linalg.eigh(h)
    floor = tol.rank_tol * max(scale, 1.0)
    if w.size and w[0] < -floor:
        raise NegativeEigenvalue(
            f"eigenvalue {w[0]:.3e} below -{floor:.3e}", residual=float(-w[0])
        )
    # eigenvalues inside the rank floor are numerical zeros; zeroing them
    # (not just the negatives) keeps the sqrt's numerical rank equal to the
    # input's, otherwise noise of order eps resurfaces as sqrt(eps)
    w = np.where(w <= floor, 0.0, w)
    return (v * np.sqrt(w)) @ v.conj().T


def pinv(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse with the shared rank cutoff."""
    a = as_cmatrix(a)
    if a.size == 0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=np.complex128)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    cut = _svd_cutoff(s, a.shape, tol.rank_tol)
    inv = np.where(s > cut, 1.0 / np.where(s > cut, s, 1.0), 0.0)
    return (vh.conj().T * inv) @ u.conj().T


def range_basis(a, tol: Tolerance = DEFAULT_TOL,
                scale: float | None = None) -> Subspace:
    """Orthonormal basis of the numerical column space.

    ``scale`` anchors the rank cutoff; without it the cutoff is relative
    to the largest singular value, which over-counts rank when the input
    is entirely rounding noise (e.g. residues of projections).
    """
    a = as_cmatrix(a)
    if a.size == 0:
        return Subspace.zero(a.shape[0])
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    cut = _svd_cutoff(s, a.shape, tol.rank_tol, scale)
    rank = int(np.sum(s > cut))
    return Subspace(u[:, :rank])


def kernel_basis(a, tol: Tolerance = DEFAULT_TOL,
                 scale: float | None = None) -> Subspace:
    """Orthonormal basis of the numerical null space."""
    a = as_cmatrix(a)
    n = a.shape[1]
    if a.size == 0:
        return Subspace.full(n) if n else Subspace.zero(0)
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    cut = _svd_cutoff(s, a.shape, tol.rank_tol, scale)
    rank = int(np.sum(s > cut))
    return Subspace(vh[rank:].conj().T)


def complement(u: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the orthogonal complement."""
    if u.dim == 0:
        return Subspace.full(u.ambient_dim)
    return kernel_basis(u.basis.conj().T, tol, scale=1.0)


def complement_within(ambient: Subspace, part: Subspace,
                      tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Orthogonal complement of ``part`` inside ``ambient`` (part must be
    contained in ambient for the result to be meaningful)."""
    if ambient.ambient_dim != part.ambient_dim:
        raise DimensionMismatch("ambient dimensions differ")
    residue = ambient.basis - part.projector() @ ambient.basis
    return range_basis(residue, tol, scale=1.0)


def intersect(u: Subspace, w: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Intersection via principal angles: SVD of U^H W, keeping directions
    whose cosine is within rank_tol of 1."""
    if u.ambient_dim != w.ambient_dim:
        raise DimensionMismatch("subspaces live in different ambient spaces")
    if u.dim == 0 or w.dim == 0:
        return Subspace.zero(u.ambient_dim)
    g = u.basis.conj().T @ w.basis
    lu, s, _ = np.linalg.svd(g)
    keep = int(np.sum(s >= 1.0 - tol.rank_tol))
    return Subspace(u.basis @ lu[:, :keep])


def shorted_operator(b, n: Subspace, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Krein shorted operator of a PSD matrix to the subspace ``n``:
    the largest PSD operator below ``b`` whose range lies in ``n``.

    Computed as B^(1/2) P_Omega B^(1/2) with
    Omega = { h : B^(1/2) h in n } = ker(P_{n-perp} B^(1/2)).
    """
    b = as_cmatrix(b)
    if b.shape[0] != n.ambient_dim:
        raise DimensionMismatch("operator and subspace dimensions differ")
    scale = operator_norm(b)
    herm_res = operator_norm(b - b.conj().T)
    if herm_res > tol.residual_tol * max(scale, 1.0):
        raise NotPSD("matrix is not Hermitian", residual=herm_res)
    try:
        root = psd_sqrt(b, tol)
    except NegativeEigenvalue as exc:
        raise NotPSD("matrix has a negative eigenvalue", residual=exc.residual)
    p_perp = np.eye(b.shape[0]) - n.projector()
    omega = kernel_basis(p_perp @ root, tol, scale=operator_norm(root))
    return root @ omega.projector() @ root
