"""Antilinear conjugations and C-twisted adjoint operations.

A conjugation C is an antilinear involutive isometry. It is stored through
its coefficient matrix S via the convention ``C x = S conj(x)``; C being an
involutive isometry is equivalent to S being symmetric and unitary. With
that convention every derived object stays an honest linear matrix:

    C A* C        has matrix  S A^T conj(S)      (the C-adjoint)
    C G C         has matrix  S conj(G) conj(S)  (for linear G)
    basis of C*U  is          S conj(basis of U)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Certificate, DimensionMismatch
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    as_cmatrix,
    as_cvector,
    operator_norm,
)


@dataclass(frozen=True, eq=False)
class Conjugation:
    """Antilinear involutive isometry ``x -> S conj(x)`` with S symmetric
    unitary."""

    coeff: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeff", as_cmatrix(self.coeff))
        s = self.coeff
        if s.shape[0] != s.shape[1]:
            raise DimensionMismatch("conjugation coefficient matrix must be square")

    @property
    def dim(self) -> int:
        return self.coeff.shape[0]

    def check(self, tol: Tolerance = DEFAULT_TOL) -> Certificate:
        s = self.coeff
        unit = operator_norm(s @ s.conj().T - np.eye(self.dim))
        symm = operator_norm(s - s.T)
        res = max(unit, symm)
        return Certificate(res <= tol.residual_tol, res,
                           {"unitarity": unit, "symmetry": symm})

    def apply(self, x) -> np.ndarray:
        """C x = S conj(x)."""
        v = as_cvector(x, self.dim)
        return self.coeff @ np.conj(v)

    def apply_cols(self, a) -> np.ndarray:
        """Apply C to each column of a matrix."""
        a = as_cmatrix(a)
        if a.shape[0] != self.dim:
            raise DimensionMismatch("column length does not match conjugation")
        return self.coeff @ np.conj(a)

    def c_adjoint(self, a) -> np.ndarray:
        """Matrix of C A* C, the C-twisted adjoint. A is C-self-adjoint
        exactly when it equals its own C-adjoint."""
        a = as_cmatrix(a)
        if a.shape != (self.dim, self.dim):
            raise DimensionMismatch("operator dimension does not match conjugation")
        return self.coeff @ a.T @ np.conj(self.coeff)

    def sandwich(self, g) -> np.ndarray:
        """Matrix of the linear map C G C for linear G."""
        g = as_cmatrix(g)
        if g.shape != (self.dim, self.dim):
            raise DimensionMismatch("operator dimension does not match conjugation")
        return self.coeff @ np.conj(g) @ np.conj(self.coeff)

    def symmetrize(self, a) -> np.ndarray:
        """(A + C A* C) / 2: C-self-adjoint, with norm at most ||A||."""
        a = as_cmatrix(a)
        return (a + self.c_adjoint(a)) / 2.0

    def self_adjoint_residual(self, a) -> float:
        a = as_cmatrix(a)
        return operator_norm(a - self.c_adjoint(a))

    def image(self, u: Subspace) -> Subspace:
        """The subspace C*U; its projector equals C P_U C."""
        if u.ambient_dim != self.dim:
            raise DimensionMismatch("subspace dimension does not match conjugation")
        return Subspace(self.apply_cols(u.basis))

    @staticmethod
    def identity(n: int) -> "Conjugation":
        """Entrywise conjugation."""
        return Conjugation(np.eye(n, dtype=np.complex128))


def compose_conjugations(c: Conjugation, j: Conjugation,
                         tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, Certificate]:
    """The linear unitary U = C J, with residuals certifying that U is
    unitary and C-self-adjoint. The map J -> C J is a bijection from
    conjugations onto C-self-adjoint unitaries."""
    if c.dim != j.dim:
        raise DimensionMismatch("conjugations act on different spaces")
    u = c.coeff @ np.conj(j.coeff)
    unit = operator_norm(u @ u.conj().T - np.eye(c.dim))
    csa = c.self_adjoint_residual(u)
    res = max(unit, csa)
    return u, Certificate(res <= tol.residual_tol, res,
                          {"unitarity": unit, "c_self_adjoint": csa})


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_conjugation(n: int, rng: np.random.Generator) -> Conjugation:
    """S = U U^T for Haar-like U is automatically symmetric unitary."""
    u = haar_unitary(n, rng)
    return Conjugation(u @ u.T)
