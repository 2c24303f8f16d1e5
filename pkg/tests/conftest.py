import numpy as np
import pytest

from csymext import Conjugation, PartialOperator, ProblemInstance, Subspace


def span_e1() -> Subspace:
    return Subspace(np.array([[1.0], [0.0]], dtype=complex))


@pytest.fixture
def conj2() -> Conjugation:
    """Entrywise conjugation on C^2."""
    return Conjugation.identity(2)


@pytest.fixture
def inst_shift(conj2) -> ProblemInstance:
    """V e1 = e2 on span{e1}: the isometric hand instance with a unique
    C-self-adjoint contractive extension [[0,1],[1,0]]."""
    partial = PartialOperator(span_e1(), np.array([[0.0], [1.0]], dtype=complex))
    return ProblemInstance(2, conj2, partial, seed=1)


@pytest.fixture
def inst_zero(conj2) -> ProblemInstance:
    """V = 0 on span{e1}: extensions are exactly {diag(0, b) : |b| <= 1}."""
    return ProblemInstance(2, conj2, PartialOperator.zero_on(span_e1()), seed=2)
