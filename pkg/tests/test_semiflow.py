import cmath
import math

import numpy as np
import pytest

from disk_semiflow.errors import DomainError, InconsistencyError, IntegrationError
from disk_semiflow.generator import BerksonPortaData, GeneratorFn, builtin_p, const_p
from disk_semiflow.semiflow import (
    FlowConfig,
    SemigroupModel,
    dw_point,
    flow,
    generator_residual,
    model_from_generator,
    semigroup_residual,
    trajectory,
)
from conftest import rand_disk


def _decay_model():
    return model_from_generator(BerksonPortaData(tau=0.0j, p=const_p(1.0)))


def _mobius_model():
    return model_from_generator(BerksonPortaData(tau=0.0j, p=builtin_p("one-minus-z")))


def _mobius_oracle(z, t):
    a = math.exp(-t)
    return a * z / (1.0 - z + a * z)


def test_flow_decay():
    m = _decay_model()
    assert flow(m, 0.5, math.log(2.0)) == pytest.approx(0.25, abs=1e-11)


def test_flow_mobius_against_closed_form():
    m = _mobius_model()
    got = flow(m, 0.5, math.log(2.0))
    assert got == pytest.approx(1.0 / 3.0, abs=1e-10)


def test_flow_strip_example(entries):
    m = entries["strip"].generator_model()
    got = flow(m, 0.0j, math.log(3.0) / math.pi)
    assert got == pytest.approx(0.5, abs=1e-10)


def test_flow_domain_checks():
    m = _decay_model()
    with pytest.raises(DomainError):
        flow(m, 1.0 + 0.0j, 1.0)
    with pytest.raises(DomainError):
        flow(m, 0.5, -1.0)
    with pytest.raises(DomainError):
        flow(m, 0.5, 2e3)


def test_trajectory_decay():
    m = _decay_model()
    vals = trajectory(m, 0.5, [0.0, 1.0, 2.0])
    want = [0.5, 0.5 * math.exp(-1.0), 0.5 * math.exp(-2.0)]
    for got, expect in zip(vals, want):
        assert got == pytest.approx(expect, abs=1e-11)


def test_trajectory_requires_sorted_grid():
    with pytest.raises(DomainError):
        trajectory(_decay_model(), 0.5, [1.0, 0.5])


def test_trajectory_strip_long_time(models):
    val = trajectory(models["strip"], 0.0j, [40.0])[-1]
    assert abs(val - 1.0) < 1e-10


def test_trajectory_parabolic_slow(models):
    val = trajectory(models["parabolic"], 0.0j, [1e3])[-1]
    # 1/t-type approach: |phi_t(0) - 1| = 2/|t + 2i|
    assert abs(val - 1.0) < 0.05
    assert abs(val - 1.0) == pytest.approx(2.0 / abs(1e3 + 2j), rel=1e-6)


def test_semigroup_residual_zero_time(models):
    for m in models.values():
        assert semigroup_residual(m, 0.3 + 0.2j, 0.0, 1.0) < 1e-9


def test_semigroup_residual_ode():
    m = _mobius_model()
    assert semigroup_residual(m, 0.3 + 0.2j, 0.7, 1.3) <= 1e-8


def test_semigroup_residual_strip(models):
    assert semigroup_residual(models["strip"], 0.9j, 2.0, 2.0) <= 1e-8


def test_generator_residual_decay():
    m = _decay_model()
    assert generator_residual(m, 0.5, 1e-4) <= 5e-5


def test_generator_residual_first_order():
    m = _mobius_model()
    r1 = generator_residual(m, 0.5 + 0.2j, 2e-3)
    r2 = generator_residual(m, 0.5 + 0.2j, 1e-3)
    assert r1 / r2 == pytest.approx(2.0, rel=0.25)


def test_generator_residual_monotone(models):
    for mid in ("strip", "mobius-schroeder", "spiral"):
        res = [generator_residual(models[mid], 0.4 - 0.1j, d) for d in (1e-2, 1e-3, 1e-4)]
        assert res[0] > res[1] > res[2]


def test_dw_point_values(models):
    assert dw_point(models["dilation"]) == 0.0
    assert dw_point(models["strip"]) == 1.0
    assert dw_point(models["slit-channel"]) == 1.0


def test_dw_point_inconsistency_detected(entries):
    entry = entries["strip"]
    bad = SemigroupModel(
        dw=-1.0 + 0.0j,  # wrong attracting point on purpose
        closed_flow=entry.flow,
        gallery_id="strip-bad",
    )
    with pytest.raises(InconsistencyError):
        dw_point(bad)


def test_disk_invariance_randomized(ode_models):
    rng = np.random.default_rng(5)
    for m in ode_models.values():
        for z in rand_disk(rng, 10, rmax=0.95):
            for t in (0.2, 1.0, 3.0):
                assert abs(flow(m, complex(z), t)) < 1.0


def test_commutativity(ode_models):
    rng = np.random.default_rng(6)
    for m in ode_models.values():
        for z in rand_disk(rng, 5):
            s, t = 0.6, 1.1
            a = flow(m, flow(m, complex(z), s), t)
            b = flow(m, flow(m, complex(z), t), s)
            assert abs(a - b) <= 1e-8


def test_continuity_at_zero(models):
    grid = [0.0j, 0.5, -0.5j, 0.4 + 0.4j, -0.7]
    sups = []
    for delta in (1e-2, 1e-3, 1e-4):
        sups.append(
            max(abs(flow(m, z, delta) - z) for m in models.values() for z in grid)
        )
    assert sups[0] > sups[1] > sups[2]
    assert sups[2] < 1e-3


def test_schwarz_pick_bound(models):
    rng = np.random.default_rng(7)
    for m in models.values():
        for z in rand_disk(rng, 5, rmax=0.9):
            for t in (0.5, 1.5):
                mval = abs(flow(m, 0.0j, t))
                bound = (abs(z) + mval) / (1.0 + mval * abs(z))
                assert abs(flow(m, complex(z), t)) <= bound + 1e-12


def test_outward_field_fails_loudly():
    # +z points outward; the exact flow exits the disk, so the boundary guard
    # must halve itself to death and raise
    rogue = SemigroupModel(
        dw=0.0j,
        generator=GeneratorFn(fn=lambda z: +z, origin_derivative=1.0, tau=0.0j),
    )
    with pytest.raises(IntegrationError):
        flow(rogue, 0.5, 5.0)


def test_flow_config_validation():
    with pytest.raises(ValueError):
        FlowConfig(rel_tol=-1.0)
    with pytest.raises(ValueError):
        FlowConfig(boundary_margin=1e-3)


def test_ode_matches_closed_form_at_spec_tolerance(entries):
    rng = np.random.default_rng(8)
    for mid in ("dilation", "mobius-schroeder", "strip"):
        entry = entries[mid]
        m = entry.model()
        for z in rand_disk(rng, 5):
            t = float(2.0 * rng.random())
            assert abs(flow(m, complex(z), t, force_ode=True) - entry.flow(complex(z), t)) <= 1e-8
