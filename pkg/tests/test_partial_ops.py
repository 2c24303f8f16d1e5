import numpy as np
import pytest

from csymext import (
    Conjugation,
    PartialOperator,
    Subspace,
    adjoint_on_domain,
    build_kit,
    check_c_symmetric,
    check_lift_identity,
    compose_conjugations,
    operator_norm,
    random_conjugation,
    random_instance,
    range_basis,
)
from csymext.errors import NotContraction, NotCSymmetric

from .helpers import cgauss

ATOL = 1e-12


def test_zero_operator_is_c_symmetric(conj2):
    v = PartialOperator.zero_on(Subspace(np.array([[1.0], [0.0]], dtype=complex)))
    cert = check_c_symmetric(v, conj2)
    assert cert.ok and cert.residual == 0.0


def test_shift_instance_is_c_symmetric(inst_shift):
    cert = check_c_symmetric(inst_shift.partial, inst_shift.conj)
    assert cert.ok
    assert cert.residual <= ATOL


def test_full_domain_non_symmetric_residual_one(conj2):
    v = PartialOperator.full(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    cert = check_c_symmetric(v, conj2)
    assert not cert.ok
    assert cert.residual == pytest.approx(1.0)


def test_adjoint_shift(inst_shift):
    # V e1 = e2, so V* y = y_2 e1: coordinate matrix [0 1]
    got = adjoint_on_domain(inst_shift.partial)
    np.testing.assert_allclose(got, [[0.0, 1.0]], atol=ATOL)


def test_adjoint_inner_product_oracle():
    rng = np.random.default_rng(0)
    for _ in range(10):
        n, m = 5, 3
        domain = range_basis(cgauss(rng, n, m))
        v = PartialOperator(domain, cgauss(rng, n, m))
        y = cgauss(rng, n)
        x = cgauss(rng, m)
        h = domain.basis @ x
        vh = v.action @ x
        vstar_y = domain.basis @ (adjoint_on_domain(v) @ y)
        assert y.conj() @ vh == pytest.approx(vstar_y.conj() @ h)


def test_adjoint_trivial_cases(conj2):
    z = PartialOperator.zero_on(Subspace(np.array([[1.0], [0.0]], dtype=complex)))
    np.testing.assert_allclose(adjoint_on_domain(z), [[0.0, 0.0]], atol=0)
    embed = PartialOperator(Subspace(np.array([[1.0], [0.0]], dtype=complex)),
                            np.array([[1.0], [0.0]], dtype=complex))
    np.testing.assert_allclose(adjoint_on_domain(embed), [[1.0, 0.0]], atol=ATOL)


def test_kit_zero_instance(inst_zero):
    kit = inst_zero.kit()
    np.testing.assert_allclose(kit.defect, np.eye(2), atol=ATOL)
    assert kit.core_space.dim == 1
    np.testing.assert_allclose(kit.core_space.projector(), np.diag([1.0, 0.0]),
                               atol=ATOL)
    np.testing.assert_allclose(kit.defect_lift, np.zeros((2, 2)), atol=ATOL)
    assert kit.free_space.dim == 1
    np.testing.assert_allclose(kit.left_carrier.projector(),
                               np.diag([0.0, 1.0]), atol=ATOL)


def test_kit_shift_instance(inst_shift):
    kit = inst_shift.kit()
    np.testing.assert_allclose(kit.defect, np.diag([1.0, 0.0]), atol=ATOL)
    assert kit.defect_space.dim == 1
    assert kit.core_space.dim == 1
    np.testing.assert_allclose(kit.core_space.projector(),
                               np.diag([1.0, 0.0]), atol=ATOL)
    # lift maps e1 to e2 isometrically
    np.testing.assert_allclose(kit.defect_lift,
                               [[0.0, 0.0], [1.0, 0.0]], atol=ATOL)
    assert kit.free_space.dim == 0
    np.testing.assert_allclose(kit.lift_codefect, np.zeros((2, 2)), atol=ATOL)
    # carrier is the kernel of P_{C domain} defect, here span{e2}
    np.testing.assert_allclose(kit.left_carrier.projector(),
                               np.diag([0.0, 1.0]), atol=ATOL)


def test_kit_full_domain_unitary():
    rng = np.random.default_rng(1)
    c = random_conjugation(3, rng)
    u, _ = compose_conjugations(c, random_conjugation(3, rng))
    v = PartialOperator.full(u)
    kit = build_kit(v, c)
    np.testing.assert_allclose(kit.defect, np.zeros((3, 3)), atol=1e-9)
    assert kit.core_space.dim == 0
    assert kit.defect_space.dim == 0


def test_kit_empty_domain():
    rng = np.random.default_rng(2)
    c = random_conjugation(3, rng)
    v = PartialOperator.zero_on(Subspace.zero(3))
    kit = build_kit(v, c)
    assert kit.defect_space.dim == 3
    assert kit.core_space.dim == 0
    assert kit.free_space.dim == 3
    assert kit.complement.dim == 3


def test_build_kit_rejects_expansion(conj2):
    v = PartialOperator(Subspace(np.array([[1.0], [0.0]], dtype=complex)),
                        np.array([[2.0], [0.0]], dtype=complex))
    with pytest.raises(NotContraction):
        build_kit(v, conj2)


def test_build_kit_rejects_non_symmetric(conj2):
    v = PartialOperator.full(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    with pytest.raises(NotCSymmetric):
        build_kit(v, conj2)


def test_lift_identity_hand_instances(inst_shift, inst_zero):
    for inst in (inst_shift, inst_zero):
        cert = check_lift_identity(inst.kit())
        assert cert.ok
        assert cert.residual <= 1e-12


def test_lift_identity_unitary_trivial():
    rng = np.random.default_rng(3)
    c = random_conjugation(4, rng)
    u, _ = compose_conjugations(c, random_conjugation(4, rng))
    cert = check_lift_identity(build_kit(PartialOperator.full(u), c))
    assert cert.ok


def test_kit_invariants_random_instances():
    rng = np.random.default_rng(4)
    for trial in range(25):
        n = int(rng.integers(2, 7))
        m = int(rng.integers(0, n + 1))
        inst = random_instance(int(rng.integers(1_000_000)), n, m)
        kit = inst.kit()
        assert operator_norm(kit.defect_lift) <= 1.0 + 1e-9
        assert operator_norm(kit.cross_op) <= inst.partial.norm() + 1e-9
        assert kit.core_space.dim + kit.free_space.dim == kit.defect_space.dim
        # conjugated adjoint equals the cross map adjoint on the complement
        if kit.complement.dim:
            f = kit.complement.basis
            lhs = inst.conj.c_adjoint(inst.partial.op_matrix()) @ f
            rhs = kit.cross_op.conj().T @ f
            np.testing.assert_allclose(lhs, rhs, atol=1e-10)
            # pinning identity for the lift adjoint on the complement:
            # defect lift* f  =  (C V* C) f + P_{conj complement} defect lift* f
            lift_adj = kit.defect @ kit.defect_lift.conj().T @ f
            rhs2 = inst.conj.c_adjoint(inst.partial.op_matrix()) @ f \
                + kit.conj_complement.projector() @ lift_adj
            np.testing.assert_allclose(lift_adj, rhs2, atol=1e-10)
        # carrier subspaces exchange under the conjugation
        np.testing.assert_allclose(
            kit.right_carrier.projector(),
            inst.conj.image(kit.left_carrier).projector(),
            atol=1e-10,
        )
        assert check_lift_identity(kit, samples=4, seed=trial).ok
