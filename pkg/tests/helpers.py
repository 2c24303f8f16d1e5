"""Random generators used across the test modules."""

import numpy as np

from csymext import ContractiveParam, BoundedParam, operator_norm


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_contractive_param(kit, rng) -> ContractiveParam:
    n = kit.dim
    y = kit.lift_codefect_space.projector() @ cgauss(rng, n, n) \
        @ kit.free_space.projector()
    y /= max(1.0, operator_norm(y) / rng.uniform(0.1, 1.0))
    return ContractiveParam(y)


def random_crandall_param(kit, rng) -> np.ndarray:
    n = kit.dim
    k = kit.defect_space.projector() @ cgauss(rng, n, n) @ kit.p_complement()
    return k / max(1.0, operator_norm(k))


def random_tz_param(kit, rng) -> BoundedParam:
    n = kit.dim
    y = kit.p_complement() @ cgauss(rng, n, n) \
        @ kit.conj_complement.projector()
    return BoundedParam("tz", y)


def random_raikh_param(kit, rng) -> BoundedParam:
    n = kit.dim
    r = kit.conj_complement.projector() @ cgauss(rng, n, n) \
        @ kit.p_complement()
    r = (r + kit.conj.c_adjoint(r)) / 2.0
    return BoundedParam("raikh", r)
