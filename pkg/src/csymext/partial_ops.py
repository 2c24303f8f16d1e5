"""Partially defined operators and the extension machinery built on them.

A partial operator V lives on a subspace of C^n (the domain, with
orthonormal basis Q) and is stored through its action matrix A whose j-th
column is V applied to the j-th basis vector. The ambient matrix of
V P_domain is then ``A Q^H``.

``build_kit`` precomputes everything the extension parameterizations in
:mod:`csymext.extensions` need:

* the adjoint defect ``(I - V V*)^(1/2)`` and its range, the defect space;
* the cross map sending C h to the off-domain component of C V h;
* the defect lift, the contraction pinned on defect * (C domain) that
  every admissible Crandall parameter must extend;
* the core (pinned) and free subspaces of the defect space;
* the codefect of the lift, whose range receives the free parameter;
* the carrier subspaces of the Krein shorted operator giving the radii
  of the solution ball.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conjugation import Conjugation
from .errors import (
    Certificate,
    DimensionMismatch,
    InconsistentGenerators,
    NotContraction,
    NotCSymmetric,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    as_cmatrix,
    complement,
    complement_within,
    kernel_basis,
    operator_norm,
    pinv,
    psd_sqrt,
    range_basis,
)


@dataclass(frozen=True, eq=False)
class PartialOperator:
    """Operator defined on a subspace, as (domain basis Q, action A)."""

    domain: Subspace
    action: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "action", as_cmatrix(self.action))
        if self.action.shape != (self.domain.ambient_dim, self.domain.dim):
            raise DimensionMismatch(
                f"action shape {self.action.shape} does not match domain "
                f"({self.domain.ambient_dim} x {self.domain.dim})"
            )

    @property
    def ambient_dim(self) -> int:
        return self.domain.ambient_dim

    @property
    def domain_dim(self) -> int:
        return self.domain.dim

    def op_matrix(self) -> np.ndarray:
        """Ambient matrix of V P_domain (the extension of V by zero)."""
        return self.action @ self.domain.basis.conj().T

    def adjoint_coords(self) -> np.ndarray:
        """Matrix of V*: H -> domain in domain coordinates; equals A^H."""
        return self.action.conj().T

    def adjoint_matrix(self) -> np.ndarray:
        """Ambient matrix of V*: H -> domain (domain embedded in H)."""
        return self.domain.basis @ self.action.conj().T

    def norm(self) -> float:
        return operator_norm(self.action)

    def is_contraction(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.norm() <= 1.0 + tol.residual_tol

    def extension_residual(self, w) -> float:
        """How far the full matrix ``w`` is from extending this operator."""
        w = as_cmatrix(w)
        if w.shape != (self.ambient_dim, self.ambient_dim):
            raise DimensionMismatch("extension candidate has wrong shape")
        if self.domain_dim == 0:
            return 0.0
        return operator_norm(w @ self.domain.basis - self.action)

    @staticmethod
    def full(matrix) -> "PartialOperator":
        m = as_cmatrix(matrix)
        return PartialOperator(Subspace.full(m.shape[0]), m)

    @staticmethod
    def zero_on(domain: Subspace) -> "PartialOperator":
        return PartialOperator(
            domain,
            np.zeros((domain.ambient_dim, domain.dim), dtype=np.complex128),
        )


def check_c_symmetric(v: PartialOperator, c: Conjugation,
                      tol: Tolerance = DEFAULT_TOL) -> Certificate:
    """C-symmetry of V: P_domain C V h = V* C h on the domain basis."""
    if v.ambient_dim != c.dim:
        raise DimensionMismatch("operator and conjugation dimensions differ")
    q = v.domain.basis
    if v.domain_dim == 0:
        return Certificate(True, 0.0, {"c_symmetry": 0.0})
    lhs = q.conj().T @ c.apply_cols(v.action)          # coords of P C V q_j
    rhs = v.adjoint_coords() @ c.apply_cols(q)         # coords of V* C q_j
    res = float(np.max(np.linalg.norm(lhs - rhs, axis=0)))
    return Certificate(res <= tol.residual_tol, res, {"c_symmetry": res})


def adjoint_on_domain(v: PartialOperator) -> np.ndarray:
    """Matrix of the adjoint V*: H -> domain in domain coordinates."""
    return v.adjoint_coords()


@dataclass(frozen=True, eq=False)
class ExtensionKit:
    """Precomputed extension machinery for one (V, C) instance.

    All operators between subspaces are materialized ambient-sized with
    support and range inside the declared subspaces.
    """

    partial: PartialOperator
    conj: Conjugation
    tol: Tolerance

    complement: Subspace          # orthocomplement of the domain
    conj_domain: Subspace         # C * domain
    conj_complement: Subspace     # C * complement

    defect: np.ndarray            # (I - V V*)^(1/2), ambient
    defect_space: Subspace        # closure of its range
    domain_defect: np.ndarray     # (I - V* V)^(1/2) on the domain, ambient

    cross_op: np.ndarray          # C h -> off-domain part of C V h
    defect_lift: np.ndarray       # defect * C h -> off-domain part of C V h
    core_space: Subspace          # closure of defect * (C domain)
    free_space: Subspace          # defect_space minus core_space
    lift_codefect: np.ndarray     # (I - lift lift*)^(1/2) on the complement
    lift_codefect_space: Subspace

    left_carrier: Subspace        # {h : defect h in conj_complement}
    right_carrier: Subspace       # its conjugate image

    @property
    def dim(self) -> int:
        return self.partial.ambient_dim

    def p_domain(self) -> np.ndarray:
        return self.partial.domain.projector()

    def p_complement(self) -> np.ndarray:
        return self.complement.projector()


def build_kit(v: PartialOperator, c: Conjugation,
              tol: Tolerance = DEFAULT_TOL) -> ExtensionKit:
    """Assemble the extension kit for a C-symmetric contraction.

    The defect lift is recovered from its generator equations
    ``lift(defect C q_j) = P_complement C V q_j`` by least squares over the
    generator set, which is the finite-dimensional realization of
    "extend by continuity"; an out-of-tolerance least-squares residual
    signals tolerance misconfiguration, not a legal input.
    """
    if v.ambient_dim != c.dim:
        raise DimensionMismatch("operator and conjugation dimensions differ")
    if not v.is_contraction(tol):
        raise NotContraction("partial operator exceeds norm 1",
                             residual=v.norm() - 1.0)
    sym = check_c_symmetric(v, c, tol)
    if not sym.ok:
        raise NotCSymmetric("partial operator is not C-symmetric",
                            residual=sym.residual)

    n = v.ambient_dim
    q = v.domain.basis
    a = v.action
    eye = np.eye(n, dtype=np.complex128)

    compl = complement(v.domain, tol)
    conj_dom = c.image(v.domain)
    conj_compl = c.image(compl)
    p_perp = compl.projector()

    defect = psd_sqrt(eye - a @ a.conj().T, tol)
    defect_space = range_basis(defect, tol)
    dom_defect_coords = psd_sqrt(np.eye(v.domain_dim) - a.conj().T @ a, tol)
    domain_defect = q @ dom_defect_coords @ q.conj().T

    conj_q = c.apply_cols(q)              # orthonormal basis of C*domain
    conj_a = c.apply_cols(a)              # C V q_j
    cross_op = (p_perp @ conj_a) @ conj_q.conj().T

    defect_norm = operator_norm(defect)
    generators = defect @ conj_q          # defect * C q_j
    targets = p_perp @ conj_a
    core_space = range_basis(generators, tol, scale=defect_norm)
    defect_lift = targets @ pinv(generators, tol)
    if v.domain_dim:
        gen_res = operator_norm(defect_lift @ generators - targets)
        if gen_res > max(tol.residual_tol, 1e3 * tol.rank_tol):
            raise InconsistentGenerators(
                "defect lift generator equations are inconsistent; "
                "rank tolerance is likely misconfigured",
                residual=gen_res,
            )
    lift_norm = operator_norm(defect_lift)
    if lift_norm > 1.0 + tol.residual_tol:
        raise InconsistentGenerators(
            "defect lift is not a contraction", residual=lift_norm - 1.0
        )

    free_space = complement_within(defect_space, core_space, tol)
    # sqrt in complement-block coordinates: an ambient sqrt would mix the
    # domain zero-block with near-zero codefect directions (sqrt turns
    # eigenvector mixing of order eps into order sqrt(eps))
    bp = compl.basis
    lift_block = bp.conj().T @ defect_lift
    codefect_block = psd_sqrt(
        np.eye(compl.dim) - lift_block @ lift_block.conj().T, tol
    )
    lift_codefect = bp @ codefect_block @ bp.conj().T
    lift_codefect_space = range_basis(lift_codefect, tol)

    left_carrier = kernel_basis(conj_dom.projector() @ defect, tol,
                                scale=defect_norm)
    right_carrier = c.image(left_carrier)

    kit = ExtensionKit(
        partial=v,
        conj=c,
        tol=tol,
        complement=compl,
        conj_domain=conj_dom,
        conj_complement=conj_compl,
        defect=defect,
        defect_space=defect_space,
        domain_defect=domain_defect,
        cross_op=cross_op,
        defect_lift=defect_lift,
        core_space=core_space,
        free_space=free_space,
        lift_codefect=lift_codefect,
        lift_codefect_space=lift_codefect_space,
        left_carrier=left_carrier,
        right_carrier=right_carrier,
    )
    _verify_kit(kit)
    return kit


def _verify_kit(kit: ExtensionKit) -> None:
    tol = kit.tol
    checks: dict[str, float] = {}

    checks["cross_norm"] = operator_norm(kit.cross_op) - kit.partial.norm()
    checks["lift_norm"] = operator_norm(kit.defect_lift) - 1.0
    # core_space sits inside the defect space
    checks["core_in_defect"] = operator_norm(
        kit.core_space.basis - kit.defect_space.projector() @ kit.core_space.basis
    )
    checks["right_carrier"] = operator_norm(
        kit.right_carrier.projector()
        - kit.conj.image(kit.left_carrier).projector()
    )
    dims_ok = kit.core_space.dim + kit.free_space.dim == kit.defect_space.dim
    bad = {k: r for k, r in checks.items() if r > tol.residual_tol}
    if bad or not dims_ok:
        raise InconsistentGenerators(
            f"extension kit failed self-checks: {bad if bad else 'dimension count'}",
            residual=max(bad.values()) if bad else 1.0,
        )


def check_lift_identity(kit: ExtensionKit, samples: int = 8,
                        seed: int = 0) -> Certificate:
    """Norm identity behind the contractivity of the defect lift:

        ||defect C h||^2 - ||P_complement C V h||^2 = ||h||^2 - ||V h||^2

    checked on the domain basis and on random domain vectors.
    """
    v, c = kit.partial, kit.conj
    if v.domain_dim == 0:
        return Certificate(True, 0.0, {"lift_identity": 0.0})
    rng = np.random.default_rng(seed)
    coeffs = [np.eye(v.domain_dim, dtype=np.complex128)[:, j]
              for j in range(v.domain_dim)]
    for _ in range(samples):
        g = rng.standard_normal(v.domain_dim) + 1j * rng.standard_normal(v.domain_dim)
        coeffs.append(g / np.linalg.norm(g))
    p_perp = kit.p_complement()
    worst = 0.0
    for x in coeffs:
        h = v.domain.basis @ x
        vh = v.action @ x
        lhs = np.linalg.norm(kit.defect @ c.apply(h)) ** 2 \
            - np.linalg.norm(p_perp @ c.apply(vh)) ** 2
        rhs = np.linalg.norm(h) ** 2 - np.linalg.norm(vh) ** 2
        worst = max(worst, abs(lhs - rhs))
    return Certificate(worst <= kit.tol.residual_tol, float(worst),
                       {"lift_identity": float(worst)})
