import cmath
import math

import numpy as np
import pytest

from disk_semiflow.errors import DomainError, MisuseError
from disk_semiflow.generator import BerksonPortaData, builtin_p, const_p
from disk_semiflow.lifting import (
    LiftedModel,
    conjugation_residual,
    lift_flow,
    lift_flow_by_projection,
    lifted_abel_residual,
    lifted_generator,
    lifted_koenigs,
)

DECAY = BerksonPortaData(tau=0.0j, p=const_p(1.0))
MOBIUS = BerksonPortaData(tau=0.0j, p=builtin_p("one-minus-z"))
SPIRAL = BerksonPortaData(tau=0.0j, p=const_p(1.0 - 1.0j))


def test_lifted_generator_decay_is_exactly_one():
    for k in range(20):
        z = 0.2 + 0.15 * k + 0.3j * (k % 5)
        assert lifted_generator(DECAY, z) == 1.0 + 0.0j


def test_lifted_generator_mobius():
    got = lifted_generator(MOBIUS, math.log(2.0))
    assert got == pytest.approx(0.5)


def test_lifted_generator_spiral():
    got = lifted_generator(SPIRAL, 1.0 + 0.3j)
    assert got == 1.0 - 1.0j
    assert got.real >= 0.0


def test_lifted_generator_domain():
    with pytest.raises(DomainError):
        lifted_generator(DECAY, -0.1 + 1.0j)
    with pytest.raises(MisuseError):
        lifted_generator(BerksonPortaData(tau=0.5 + 0.0j, p=const_p(1.0)), 1.0)


def test_lift_flow_decay_is_translation():
    lm = LiftedModel(base_bp=DECAY)
    assert lift_flow(lm, 1.0 + 0.0j, 2.0) == pytest.approx(3.0, abs=1e-10)
    assert lift_flow(lm, 1.0 + 0.5j, 0.0) == 1.0 + 0.5j


def test_conjugation_residual_mobius():
    lm = LiftedModel(base_bp=MOBIUS)
    assert conjugation_residual(lm, 1.0 + 1.0j, 1.5) <= 1e-8


def test_lifted_koenigs_decay_is_identity():
    lm = LiftedModel(base_bp=DECAY)
    got = lifted_koenigs(lm, 2.0 + 1.0j)
    assert got == pytest.approx(2.0 + 1.0j, abs=1e-9)


def test_lifted_abel_residual_mobius():
    lm = LiftedModel(base_bp=MOBIUS)
    assert lifted_abel_residual(lm, 1.2 + 0.4j, 0.8) <= 1e-7


def test_lifted_koenigs_derivative_inverts_lifted_generator():
    lm = LiftedModel(base_bp=MOBIUS)
    z = 1.1 + 0.35j
    s = 1e-3
    d = (
        -lifted_koenigs(lm, z + 2 * s)
        + 8.0 * lifted_koenigs(lm, z + s)
        - 8.0 * lifted_koenigs(lm, z - s)
        + lifted_koenigs(lm, z - 2 * s)
    ) / (12.0 * s)
    assert abs(d * lifted_generator(MOBIUS, z) - 1.0) <= 1e-8


def test_lifted_field_positivity_randomized():
    rng = np.random.default_rng(12)
    for bp in (DECAY, MOBIUS, SPIRAL):
        for _ in range(40):
            z = complex(0.05 + 3.0 * rng.random(), 4.0 * rng.random() - 2.0)
            assert lifted_generator(bp, z).real >= -1e-12


def test_uniqueness_two_routes_agree():
    lm = LiftedModel(base_bp=MOBIUS)
    rng = np.random.default_rng(13)
    for _ in range(5):
        z = complex(0.3 + 1.5 * rng.random(), 1.5 * rng.random() - 0.75)
        t = float(1.5 * rng.random())
        a = lift_flow(lm, z, t)
        b = lift_flow_by_projection(lm, z, t, steps=200)
        assert abs(a - b) <= 1e-8


def test_lifted_koenigs_injectivity_spot_check():
    lm = LiftedModel(base_bp=MOBIUS)
    rng = np.random.default_rng(14)
    pts = [complex(0.3 + 2.0 * rng.random(), 2.0 * rng.random() - 1.0) for _ in range(12)]
    vals = [lifted_koenigs(lm, z) for z in pts]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) > 1e-3:
                assert abs(vals[i] - vals[j]) > 1e-9


def test_half_plane_guard():
    lm = LiftedModel(base_bp=MOBIUS)
    with pytest.raises(DomainError):
        lift_flow(lm, -1.0 + 0.0j, 1.0)
    with pytest.raises(DomainError):
        lifted_koenigs(lm, -0.5 + 1.0j)


def test_lifting_requires_origin_base():
    with pytest.raises(MisuseError):
        LiftedModel(base_bp=BerksonPortaData(tau=1.0 + 0.0j, p=builtin_p("cayley-strip")))
