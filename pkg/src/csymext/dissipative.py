"""Dissipative partial operators, Cayley transforms, and C-self-adjoint
maximal dissipative extensions.

In finite dimension a densely defined operator is total and a total
dissipative operator is already maximal, so the extension problem lives
entirely on the Cayley side: the transform at any upper-half-plane point
carries a dissipative operator on a subspace to a contraction on a
subspace, C-symmetry travels along, and the contractive extension
machinery of :mod:`csymext.extensions` applies verbatim. The inverse
transform then returns a maximal dissipative extension, unless the chosen
parameter puts 1 into the spectrum of the extended contraction, which is
reported instead of silently producing a relation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conjugation import Conjugation
from .errors import (
    Certificate,
    ConsistencyError,
    LambdaNotUpperHalfPlane,
    NotCSymmetric,
    NotDissipative,
    NotMaximal,
    OneInSpectrum,
)
from .extensions import (
    ContractiveParam,
    UniquenessReport,
    _blowup_probe,
    cself_contractive_extend,
    uniqueness_report,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    as_cmatrix,
    complement,
    intersect,
    operator_norm,
    pinv,
    psd_sqrt,
    range_basis,
)
from .partial_ops import ExtensionKit, PartialOperator, build_kit, check_c_symmetric


def dissipation_margin(op: PartialOperator) -> float:
    """Smallest value of Im(T f, f) over unit vectors f in the domain."""
    if op.domain_dim == 0:
        return 0.0
    g = op.domain.basis.conj().T @ op.action
    form = (g - g.conj().T) / 2j
    return float(np.min(np.linalg.eigvalsh(form)))


@dataclass(frozen=True, eq=False)
class DissipativeOperator:
    """Operator with nonnegative imaginary quadratic form on its domain."""

    op: PartialOperator
    margin: float

    @property
    def ambient_dim(self) -> int:
        return self.op.ambient_dim

    @property
    def is_full_domain(self) -> bool:
        return self.op.domain_dim == self.op.ambient_dim

    def matrix(self) -> np.ndarray:
        """Ambient matrix of T P_domain."""
        return self.op.op_matrix()


def make_dissipative(op: PartialOperator,
                     tol: Tolerance = DEFAULT_TOL) -> DissipativeOperator:
    margin = dissipation_margin(op)
    scale = max(1.0, op.norm())
    if margin < -tol.residual_tol * scale:
        raise NotDissipative("imaginary part of the form is negative",
                             residual=-margin)
    return DissipativeOperator(op, margin)


@dataclass(frozen=True, eq=False)
class CayleyData:
    """Cayley transform of a dissipative operator at an upper-half-plane
    point: the contraction itself, the deficiency subspace (complement of
    its domain), and, when a conjugation is supplied, the resolvent image
    subspace entering the uniqueness criteria."""

    lam: complex
    transform: PartialOperator
    deficiency: Subspace
    resolvent_image: Subspace | None = None


def _require_upper(lam: complex) -> complex:
    lam = complex(lam)
    if not lam.imag > 0:
        raise LambdaNotUpperHalfPlane(f"lambda = {lam} has Im <= 0")
    return lam


def _cayley_core(t: DissipativeOperator, lam: complex,
                 tol: Tolerance) -> tuple[Subspace, np.ndarray]:
    """Domain basis and action of the transform (T - lam)(T - conj(lam))^-1
    read off the generators psi_j = (T - conj(lam)) q_j."""
    q = t.op.domain.basis
    a = t.op.action
    gen_psi = a - np.conj(lam) * q
    gen_img = a - lam * q
    dom = range_basis(gen_psi, tol)
    if dom.dim != t.op.domain_dim:
        raise ConsistencyError(
            "Cayley generators are rank-deficient; the operator is not "
            "dissipative at the configured tolerance"
        )
    coeff = pinv(gen_psi, tol) @ dom.basis
    return dom, gen_img @ coeff


def cayley_forward(t: DissipativeOperator, lam: complex,
                   conj: Conjugation | None = None,
                   tol: Tolerance = DEFAULT_TOL) -> CayleyData:
    """Cayley transform of a dissipative operator.

    The result is a contraction defined on the range of T - conj(lam) with
    no fixed points; both facts are certified.
    """
    lam = _require_upper(lam)
    if t.margin < -tol.residual_tol * max(1.0, t.op.norm()):
        raise NotDissipative("operator is not dissipative", residual=-t.margin)
    dom, action = _cayley_core(t, lam, tol)
    transform = PartialOperator(dom, action)
    norm = transform.norm()
    if norm > 1.0 + tol.residual_tol * max(1.0, t.op.norm()):
        raise NotDissipative(
            "Cayley transform exceeds norm 1; the operator is not "
            "dissipative at the configured tolerance",
            residual=norm - 1.0,
        )
    fixed = dom.basis - action
    if dom.dim and range_basis(fixed, tol, scale=1.0).dim != dom.dim:
        raise ConsistencyError("Cayley transform has a fixed vector")

    deficiency = complement(dom, tol)
    resolvent_image = None
    if conj is not None and t.op.domain_dim:
        tilde = extend_by_deficiency(t, lam, tol)
        m_full = tilde.matrix()
        n = t.ambient_dim
        inv = np.linalg.inv(m_full.conj().T - lam * np.eye(n))
        resolvent_image = range_basis(inv @ conj.apply_cols(dom.basis), tol)
    return CayleyData(lam, transform, deficiency, resolvent_image)


def cayley_inverse(w, lam: complex,
                   tol: Tolerance = DEFAULT_TOL) -> DissipativeOperator:
    """Inverse Cayley transform of a contraction (full matrix or partial
    operator): T (1 - W) h = (lam - conj(lam) W) h on ran(1 - W).

    Raises ``OneInSpectrum`` when 1 is a numerical eigenvalue of W, in
    which case the inverse transform is a relation, not an operator.
    """
    lam = _require_upper(lam)
    if isinstance(w, PartialOperator):
        partial = w
    else:
        partial = PartialOperator.full(as_cmatrix(w))
    basis = partial.domain.basis
    act = partial.action
    gen_f = basis - act
    gen_img = lam * basis - np.conj(lam) * act

    dom = range_basis(gen_f, tol, scale=1.0)
    if dom.dim < partial.domain_dim:
        if partial.domain_dim == partial.ambient_dim:
            eigs = np.linalg.eigvals(partial.op_matrix())
            dist = float(np.min(np.abs(eigs - 1.0)))
        else:
            s = np.linalg.svd(gen_f, compute_uv=False)
            dist = float(s[-1]) if s.size else 0.0
        raise OneInSpectrum(
            f"1 is a numerical eigenvalue of the contraction "
            f"(distance {dist:.3e})",
            residual=dist,
        )
    coeff = pinv(gen_f, tol) @ dom.basis
    result = PartialOperator(dom, gen_img @ coeff)
    margin = dissipation_margin(result)
    scale = max(1.0, result.norm())
    if margin < -tol.residual_tol * scale:
        raise NotDissipative(
            "inverse transform is not dissipative; the input was not a "
            "contraction",
            residual=-margin,
        )
    return DissipativeOperator(result, margin)


def extend_by_deficiency(t: DissipativeOperator, lam: complex,
                         tol: Tolerance = DEFAULT_TOL) -> DissipativeOperator:
    """Maximal dissipative extension acting as T on its domain and as
    multiplication by lam on the deficiency subspace.

    Certifies the direct-sum decomposition, dissipativity, and that the
    extension's Cayley transform is the zero-padded transform of T.
    """
    lam = _require_upper(lam)
    n = t.ambient_dim
    dom, action = _cayley_core(t, lam, tol)
    deficiency = complement(dom, tol)
    if intersect(t.op.domain, deficiency, tol).dim:
        raise ConsistencyError(
            "domain meets the deficiency subspace; the operator is not "
            "dissipative at the configured tolerance"
        )
    combined = np.concatenate([t.op.domain.basis, deficiency.basis], axis=1)
    images = np.concatenate([t.op.action, lam * deficiency.basis], axis=1)
    if combined.shape[1] != n:
        raise ConsistencyError("domain and deficiency do not span the space")
    full_matrix = images @ np.linalg.inv(combined)
    full = PartialOperator.full(full_matrix)
    extended = make_dissipative(full, tol)

    lhs = (full_matrix - lam * np.eye(n)) @ np.linalg.inv(
        full_matrix - np.conj(lam) * np.eye(n)
    )
    rhs = action @ dom.basis.conj().T
    res = operator_norm(lhs - rhs)
    if res > tol.residual_tol * max(1.0, operator_norm(lhs)):
        raise ConsistencyError(
            "extension violates the Cayley identity", residual=res
        )
    return extended


def check_defect_identities(t: DissipativeOperator, lam: complex,
                            samples: int = 100, seed: int = 0,
                            tol: Tolerance = DEFAULT_TOL) -> Certificate:
    """Defect norms of the Cayley transform of a maximal dissipative
    operator against the resolvent form of the operator itself:

        ||D_V psi||^2  =  4 Im(lam) Im(T u, u),   u = (T - conj(lam))^-1 psi
        ||D_V* phi||^2 = -4 Im(lam) Im(T* w, w),  w = (T* - lam)^-1 phi
    """
    lam = _require_upper(lam)
    if not t.is_full_domain:
        raise NotMaximal("defect identities need a full-domain operator")
    n = t.ambient_dim
    m = t.matrix()
    eye = np.eye(n)
    res_lower = np.linalg.inv(m - np.conj(lam) * eye)
    v = (m - lam * eye) @ res_lower
    defect_sq = eye - v.conj().T @ v
    codefect_sq = eye - v @ v.conj().T
    res_upper = np.linalg.inv(m.conj().T - lam * eye)

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        psi /= np.linalg.norm(psi)
        lhs = float(np.real(psi.conj() @ defect_sq @ psi))
        u = res_lower @ psi
        rhs = 4.0 * lam.imag * float(np.imag(u.conj() @ m @ u))
        worst = max(worst, abs(lhs - rhs))

        phi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        phi /= np.linalg.norm(phi)
        lhs = float(np.real(phi.conj() @ codefect_sq @ phi))
        w = res_upper @ phi
        rhs = -4.0 * lam.imag * float(np.imag(w.conj() @ m.conj().T @ w))
        worst = max(worst, abs(lhs - rhs))
    return Certificate(worst <= tol.residual_tol, float(worst),
                       {"defect_identities": float(worst)})


def _require_c_symmetric(t: DissipativeOperator, conj: Conjugation,
                         tol: Tolerance) -> None:
    cert = check_c_symmetric(t.op, conj, tol)
    if not cert.ok:
        raise NotCSymmetric("operator is not C-symmetric",
                            residual=cert.residual)


def cayley_kit(t: DissipativeOperator, conj: Conjugation, lam: complex,
               tol: Tolerance = DEFAULT_TOL) -> tuple[CayleyData, ExtensionKit]:
    """Cayley transform plus the extension kit of the transform."""
    cd = cayley_forward(t, lam, conj, tol)
    kit = build_kit(cd.transform, conj, tol)
    return cd, kit


def glazman_extend(t: DissipativeOperator, conj: Conjugation, lam: complex,
                   p: ContractiveParam,
                   tol: Tolerance = DEFAULT_TOL
                   ) -> tuple[DissipativeOperator, Certificate]:
    """C-self-adjoint maximal dissipative extension of a C-symmetric
    dissipative operator, through the Cayley transform.

    Pipeline: transform at lam, extend the transform to a C-self-adjoint
    contraction with the given parameter, transform back. The certificate
    carries the extension, dissipativity and C-self-adjointness residuals.
    ``OneInSpectrum`` means this particular parameter yields a relation;
    the caller may retry with another one.
    """
    lam = _require_upper(lam)
    _require_c_symmetric(t, conj, tol)
    if t.margin < -tol.residual_tol * max(1.0, t.op.norm()):
        raise NotDissipative("operator is not dissipative", residual=-t.margin)

    cd = cayley_forward(t, lam, None, tol)
    kit = build_kit(cd.transform, conj, tol)
    w = cself_contractive_extend(kit, p)
    extended = cayley_inverse(w, lam, tol)
    if not extended.is_full_domain:
        raise OneInSpectrum(
            "extension domain is not the whole space; the parameter puts 1 "
            "into the spectrum"
        )
    m_ext = extended.matrix()
    scale = max(1.0, operator_norm(m_ext))
    ext_res = t.op.extension_residual(m_ext)
    csa_res = conj.self_adjoint_residual(m_ext)
    ok = (
        ext_res <= tol.residual_tol * scale
        and csa_res <= tol.residual_tol * scale
        and extended.margin >= -tol.residual_tol * scale
    )
    cert = Certificate(ok, max(ext_res, csa_res), {
        "extension": ext_res,
        "c_self_adjoint": csa_res,
        "margin": extended.margin,
    })
    return extended, cert


def dissipative_uniqueness(t: DissipativeOperator, conj: Conjugation,
                           lam: complex, probes: int = 16, seed: int = 0,
                           tol: Tolerance = DEFAULT_TOL) -> UniquenessReport:
    """Uniqueness of the C-self-adjoint maximal dissipative extension.

    The verdict is evaluated at the given lam but is lam-independent for
    genuine instances; calling at two different points and comparing is
    the intended cross-check. Exact criteria come from the transform's
    kit, supplemented by the form-minimization criterion over the
    resolvent image subspace and by resolvent-blowup probes; the two
    exact routes must agree.
    """
    lam = _require_upper(lam)
    _require_c_symmetric(t, conj, tol)
    if t.margin < -tol.residual_tol * max(1.0, t.op.norm()):
        raise NotDissipative("operator is not dissipative", residual=-t.margin)

    cd, kit = cayley_kit(t, conj, lam, tol)
    base = uniqueness_report(kit, probes, seed)
    probes_out = list(base.probes)

    n = t.ambient_dim
    eye = np.eye(n)
    conj_deficiency = conj.image(cd.deficiency)

    # distance from the conjugated deficiency, pushed through the defect,
    # to the pinned core subspace
    if cd.deficiency.dim:
        value_iv = operator_norm(
            (eye - kit.core_space.projector()) @ kit.defect
            @ conj_deficiency.basis
        )
    else:
        value_iv = 0.0
    probes_out.append(("core_distance", value_iv,
                       value_iv <= tol.residual_tol))

    if t.op.domain_dim:
        tilde = extend_by_deficiency(t, lam, tol)
        m_full = tilde.matrix()
        form = (m_full - m_full.conj().T) / 2j
        form_root = psd_sqrt(form, tol)
        inv_adj = np.linalg.inv(m_full.conj().T - lam * eye)
        resolvent_image = range_basis(inv_adj @ conj.apply_cols(
            cd.transform.domain.basis), tol)
        span = form_root @ resolvent_image.basis
        proj = range_basis(span, tol,
                           scale=operator_norm(form_root)).projector()
        value_vi = operator_norm((eye - proj) @ form_root)
        scale_vi = max(1.0, operator_norm(form_root))
        verdict_vi = value_vi <= tol.residual_tol * scale_vi
        probes_out.append(("form_min_over_resolvent_image", value_vi,
                           verdict_vi))
        if verdict_vi != base.unique:
            raise ConsistencyError(
                "form-minimization criterion disagrees with the transform-"
                "side criteria", residual=value_vi
            )

        quad = inv_adj.conj().T @ form @ inv_adj
        value_vii, verdict_vii = _blowup_probe(
            quad, conj_deficiency, kit, probes,
            np.random.default_rng(seed + 1),
        )
        probes_out.append(("form_resolvent_blowup", value_vii, verdict_vii))

    return UniquenessReport(
        intersection_dim=base.intersection_dim,
        coisometry_residual=base.coisometry_residual,
        core_is_full=base.core_is_full,
        radius_norm=base.radius_norm,
        radius_zero=base.radius_zero,
        unique=base.unique,
        probes=probes_out,
    )
