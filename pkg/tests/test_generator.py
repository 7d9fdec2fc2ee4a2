import cmath
import math

import numpy as np
import pytest

from disk_semiflow.errors import DomainError, MisuseError, SingularPointError
from disk_semiflow.generator import (
    BerksonPortaData,
    berkson_porta_from_json,
    berkson_porta_to_json,
    builtin_p,
    conjugated_to_origin,
    const_p,
    decompose,
    default_validation_grid,
    eval_G,
    generator_fn,
    lambda_at_origin,
    validate_positivity,
)
from disk_semiflow.herglotz import RieszHerglotzData


def test_eval_G_values():
    bp = BerksonPortaData(tau=0.0j, p=const_p(1.0))
    assert eval_G(bp, 0.5) == pytest.approx(-0.5)
    bp = BerksonPortaData(tau=0.0j, p=builtin_p("one-minus-z"))
    assert eval_G(bp, 0.5) == pytest.approx(-0.25)
    bp = BerksonPortaData(tau=1.0 + 0.0j, p=builtin_p("cayley-strip"))
    assert eval_G(bp, 0.0) == pytest.approx(math.pi / 2)


def test_eval_G_domain():
    bp = BerksonPortaData(tau=0.0j, p=const_p(1.0))
    with pytest.raises(DomainError):
        eval_G(bp, 1.0 + 0.0j)


def test_tau_bound():
    with pytest.raises(ValueError):
        BerksonPortaData(tau=1.5 + 0.0j, p=const_p(1.0))


def test_generator_vanishes_at_interior_tau():
    tau = 0.3 + 0.2j
    bp = BerksonPortaData(tau=tau, p=const_p(1.0 + 0.5j))
    assert abs(eval_G(bp, tau)) == 0.0


def test_decompose_plain_decay():
    grid = default_validation_grid(50)
    res = decompose(lambda z: -z, 0.0j, grid)
    assert res.valid
    assert res.min_real == pytest.approx(1.0)
    assert all(abs(p - 1.0) < 1e-12 for p in res.p_samples)


def test_decompose_strip():
    grid = [0.0j, 0.3 + 0.1j, -0.5j]
    res = decompose(lambda z: math.pi * (1 - z * z) / 2, 1.0 + 0.0j, grid)
    assert res.valid
    assert res.p_samples[0] == pytest.approx(math.pi / 2)


def test_decompose_sign_flip_is_rejected():
    grid = default_validation_grid(50)
    res = decompose(lambda z: +z, 0.0j, grid)
    assert not res.valid
    assert res.min_real == pytest.approx(-1.0)


def test_decompose_singular_grid_point():
    with pytest.raises(SingularPointError):
        decompose(lambda z: -z, 0.2 + 0.0j, [0.2 + 0.0j])


def test_decompose_reproduces_p(entries):
    # uniqueness: dividing the assembled G by its DW factor recovers p
    grid = [0.1 + 0.2j, -0.4j, 0.55, -0.3 - 0.3j]
    for entry in entries.values():
        res = decompose(entry.generator, entry.bp.tau, grid)
        assert res.valid
        for z, p_val in zip(grid, res.p_samples):
            want = entry.bp.p_value(z)
            assert abs(p_val - want) <= 1e-10 * max(1.0, abs(want))


def test_decompose_automorphism_type_is_valid():
    # purely imaginary p generates a rotation group; equality Re p = 0 passes
    grid = default_validation_grid(50)
    res = decompose(lambda z: -1j * z, 0.0j, grid)
    assert res.valid
    assert abs(res.min_real) < 1e-12


def test_lambda_at_origin():
    assert lambda_at_origin(BerksonPortaData(tau=0.0j, p=const_p(1.0))) == -1.0
    assert lambda_at_origin(
        BerksonPortaData(tau=0.0j, p=builtin_p("one-minus-z"))
    ) == -1.0
    lam = lambda_at_origin(BerksonPortaData(tau=0.0j, p=const_p(1.0 - 1.0j)))
    assert lam == pytest.approx(-1.0 + 1.0j)
    assert lam.real < 0
    with pytest.raises(MisuseError):
        lambda_at_origin(BerksonPortaData(tau=0.5 + 0.0j, p=const_p(1.0)))


def test_trivial_generator_rejected():
    with pytest.raises(ValueError):
        generator_fn(BerksonPortaData(tau=0.0j, p=const_p(0.0)))
    with pytest.raises(ValueError):
        generator_fn(BerksonPortaData(tau=0.0j, p=RieszHerglotzData()))


def test_origin_derivative():
    gen = generator_fn(BerksonPortaData(tau=0.0j, p=builtin_p("one-minus-z")))
    # G = -z(1-z): G'(0) = -1
    assert gen.origin_derivative == pytest.approx(-1.0)
    step = 1e-6
    fd = (gen(step) - gen(-step)) / (2 * step)
    assert abs(fd - gen.origin_derivative) < 1e-9


def test_positivity_validation_grid_size():
    assert default_validation_grid().size == 10_000


def test_validate_positivity_accepts_and_rejects():
    good = BerksonPortaData(
        tau=0.0j, p=RieszHerglotzData(c=0.5, atoms=((cmath.exp(0.4j), 2.0),))
    )
    assert validate_positivity(good).valid
    bad = BerksonPortaData(tau=0.0j, p=const_p(-1.0))
    rep = validate_positivity(bad)
    assert not rep.valid
    assert rep.min_real == pytest.approx(-1.0)


def test_conjugated_to_origin_matches_conjugated_flow():
    # the moved generator must equal M'(M(.)) G(M(.)) for M the involution
    tau = 0.4 - 0.25j
    bp = BerksonPortaData(tau=tau, p=builtin_p("one-minus-z"))
    bp0 = conjugated_to_origin(bp)
    assert bp0.tau == 0

    def mob(w):
        return (tau - w) / (1.0 - tau.conjugate() * w)

    def mob_d(w):
        return (abs(tau) ** 2 - 1.0) / (1.0 - tau.conjugate() * w) ** 2

    for w in (0.1 + 0.1j, -0.3j, 0.5):
        want = mob_d(mob(w)) * eval_G(bp, mob(w))
        got = eval_G(bp0, w)
        assert abs(got - want) < 1e-13
    rep = validate_positivity(bp0, default_validation_grid(100))
    assert rep.valid

    # flow-level check: integrating the moved field reproduces M o phi_t o M
    from disk_semiflow.semiflow import flow, model_from_generator

    m_orig = model_from_generator(bp)
    m_moved = model_from_generator(bp0)
    w, t = 0.22 - 0.31j, 0.9
    assert abs(flow(m_moved, w, t) - mob(flow(m_orig, mob(w), t))) < 1e-9


def test_json_roundtrip():
    bp = BerksonPortaData(tau=0.0j, p=builtin_p("one-minus-z"))
    back = berkson_porta_from_json(berkson_porta_to_json(bp))
    assert back.tau == bp.tau
    assert back.p_value(0.3 + 0.1j) == bp.p_value(0.3 + 0.1j)

    bp = BerksonPortaData(tau=0.0j, p=const_p(1.0 - 1.0j))
    back = berkson_porta_from_json(berkson_porta_to_json(bp))
    assert back.p_value(0.2) == pytest.approx(1.0 - 1.0j)

    doc = {"tau": [0.0, 0.0], "p": {"c": 0.25, "atoms": [{"u_angle": 0.0, "mass": 1.0}]}}
    bp = berkson_porta_from_json(doc)
    assert isinstance(bp.p, RieszHerglotzData)
    assert bp.p_value(0.0) == pytest.approx(1.0 + 0.25j)
