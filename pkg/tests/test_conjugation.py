import numpy as np
import pytest

from csymext import (
    Conjugation,
    Subspace,
    compose_conjugations,
    operator_norm,
    random_conjugation,
    range_basis,
)
from csymext.errors import DimensionMismatch

from .helpers import cgauss

ATOL = 1e-12
SWAP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def test_apply_entrywise():
    c = Conjugation.identity(2)
    np.testing.assert_allclose(c.apply([1j, 1.0]), [-1j, 1.0], atol=ATOL)


def test_apply_is_involution():
    rng = np.random.default_rng(1)
    for n in (2, 3, 5):
        c = random_conjugation(n, rng)
        x = cgauss(rng, n)
        np.testing.assert_allclose(c.apply(c.apply(x)), x, atol=1e-12)


def test_apply_swap_coefficient():
    c = Conjugation(SWAP)
    np.testing.assert_allclose(c.apply([1.0, 1j]), [-1j, 1.0], atol=ATOL)


def test_apply_isometry():
    rng = np.random.default_rng(2)
    c = random_conjugation(4, rng)
    for _ in range(10):
        x = cgauss(rng, 4)
        assert np.linalg.norm(c.apply(x)) == pytest.approx(np.linalg.norm(x))


def test_pairing_symmetry():
    # (C f, g) = (C g, f)
    rng = np.random.default_rng(3)
    c = random_conjugation(5, rng)
    for _ in range(10):
        f, g = cgauss(rng, 5), cgauss(rng, 5)
        lhs = g.conj() @ c.apply(f)
        rhs = f.conj() @ c.apply(g)
        assert lhs == pytest.approx(rhs)


def test_c_adjoint_is_transpose_for_identity():
    c = Conjugation.identity(2)
    a = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    np.testing.assert_allclose(c.c_adjoint(a), a.T, atol=ATOL)


def test_c_adjoint_involution():
    rng = np.random.default_rng(4)
    c = random_conjugation(3, rng)
    a = cgauss(rng, 3, 3)
    np.testing.assert_allclose(c.c_adjoint(c.c_adjoint(a)), a, atol=1e-12)


def test_c_adjoint_swap_diagonal():
    c = Conjugation(SWAP)
    got = c.c_adjoint(np.diag([2.0 + 1j, 3.0]))
    np.testing.assert_allclose(got, np.diag([3.0, 2.0 + 1j]), atol=ATOL)


def test_c_adjoint_antimultiplicative():
    rng = np.random.default_rng(5)
    c = random_conjugation(4, rng)
    a, b = cgauss(rng, 4, 4), cgauss(rng, 4, 4)
    np.testing.assert_allclose(c.c_adjoint(a @ b),
                               c.c_adjoint(b) @ c.c_adjoint(a), atol=1e-10)


def test_symmetrize_hand_value():
    c = Conjugation.identity(2)
    got = c.symmetrize(np.array([[0.0, 1.0], [0.0, 0.0]]))
    np.testing.assert_allclose(got, [[0.0, 0.5], [0.5, 0.0]], atol=ATOL)
    assert operator_norm(got) == pytest.approx(0.5)


def test_symmetrize_fixes_self_adjoint():
    rng = np.random.default_rng(6)
    c = random_conjugation(4, rng)
    a = c.symmetrize(cgauss(rng, 4, 4))
    np.testing.assert_allclose(c.symmetrize(a), a, atol=1e-12)
    assert c.self_adjoint_residual(a) <= 1e-12


def test_symmetrize_zero():
    c = Conjugation.identity(3)
    np.testing.assert_allclose(c.symmetrize(np.zeros((3, 3))),
                               np.zeros((3, 3)), atol=0)


def test_symmetrize_norm_bound():
    rng = np.random.default_rng(7)
    for _ in range(15):
        n = int(rng.integers(2, 6))
        c = random_conjugation(n, rng)
        a = cgauss(rng, n, n)
        assert operator_norm(c.symmetrize(a)) <= operator_norm(a) + 1e-12


def test_compose_with_itself_is_identity():
    rng = np.random.default_rng(8)
    c = random_conjugation(3, rng)
    u, cert = compose_conjugations(c, c)
    np.testing.assert_allclose(u, np.eye(3), atol=1e-12)
    assert cert.ok


def test_compose_identity_with_swap():
    u, cert = compose_conjugations(Conjugation.identity(2), Conjugation(SWAP))
    np.testing.assert_allclose(u, SWAP, atol=ATOL)
    assert cert.ok


def test_compose_random_pair_is_cself_adjoint_unitary():
    rng = np.random.default_rng(9)
    c = random_conjugation(5, rng)
    j = random_conjugation(5, rng)
    u, cert = compose_conjugations(c, j)
    assert cert.ok
    assert cert.checks["unitarity"] <= 1e-10
    # C U C = U* directly
    np.testing.assert_allclose(c.sandwich(u), u.conj().T, atol=1e-10)


def test_image_real_axis_fixed():
    c = Conjugation.identity(2)
    u = Subspace(np.array([[1.0], [0.0]], dtype=complex))
    np.testing.assert_allclose(c.image(u).projector(), u.projector(), atol=ATOL)


def test_image_conjugates_complex_direction():
    c = Conjugation.identity(2)
    v = np.array([1.0, 1j]) / np.sqrt(2)
    got = c.image(Subspace(v.reshape(-1, 1)))
    want = np.array([1.0, -1j]) / np.sqrt(2)
    np.testing.assert_allclose(got.projector(), np.outer(want, want.conj()),
                               atol=ATOL)


def test_image_involution_and_projector_identity():
    rng = np.random.default_rng(10)
    c = random_conjugation(4, rng)
    u = range_basis(cgauss(rng, 4, 2))
    im = c.image(u)
    np.testing.assert_allclose(c.image(im).projector(), u.projector(),
                               atol=1e-12)
    # P_{C M} = C P_M C realized through the coefficient matrix
    want = c.coeff @ np.conj(u.projector()) @ np.conj(c.coeff)
    np.testing.assert_allclose(im.projector(), want, atol=1e-12)


def test_conjugation_validation():
    bad = Conjugation(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert not bad.check().ok
    with pytest.raises(DimensionMismatch):
        Conjugation.identity(2).apply([1.0, 2.0, 3.0])
