import cmath
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from disk_semiflow.errors import DomainError, SlitAmbiguityError
from disk_semiflow.gallery import (
    CHANNEL_SCALE,
    channel_boundary_flow,
    channel_from_domain,
    channel_semigroup,
    channel_to_domain,
    gallery_ids,
    gallery_model,
    slit_map_forward,
    slit_map_inverse,
)
from disk_semiflow.koenigs import KoenigsFunction, abel_residual, schroeder_residual
from disk_semiflow.semiflow import flow, generator_residual
from conftest import rand_disk

PI = math.pi


def test_ids_and_lookup():
    assert set(gallery_ids()) == {
        "dilation",
        "spiral",
        "mobius-schroeder",
        "strip",
        "parabolic",
        "slit-channel",
    }
    with pytest.raises(KeyError):
        gallery_model("nope")


def test_strip_metadata(entries):
    e = entries["strip"]
    assert e.dw == 1.0
    assert e.kind == "hyperbolic"
    kinds = {fp.sigma: fp for fp in e.fixed_points}
    assert kinds[1.0 + 0.0j].kind == "denjoy-wolff"
    assert kinds[1.0 + 0.0j].dilation(1.0) == pytest.approx(math.exp(-PI))
    assert kinds[-1.0 + 0.0j].kind == "repelling"
    assert kinds[-1.0 + 0.0j].dilation(1.0) == pytest.approx(math.exp(PI))


def test_mobius_metadata(entries):
    e = entries["mobius-schroeder"]
    assert e.dw == 0.0
    reps = [fp for fp in e.fixed_points if fp.kind == "repelling"]
    assert len(reps) == 1 and reps[0].sigma == 1.0
    assert reps[0].dilation(1.0) == pytest.approx(math.e)


def test_parabolic_metadata(entries):
    e = entries["parabolic"]
    assert e.dw == 1.0
    assert e.kind == "parabolic"
    dw_fp = [fp for fp in e.fixed_points if fp.kind == "denjoy-wolff"][0]
    assert dw_fp.dilation(1.0) == 1.0


def test_strip_is_the_unique_hyperbolic_entry(entries):
    hyper = [mid for mid, e in entries.items() if e.kind == "hyperbolic"]
    assert hyper == ["strip"]


def test_slit_map_forward_values():
    assert slit_map_forward(1j) == pytest.approx(1j + 1j * PI / 2)
    assert slit_map_forward(1.0 + 1e-9j) == pytest.approx(1.0, abs=1e-8)
    assert slit_map_forward(math.e * 1j) == pytest.approx(math.e * 1j + 1.0 + 1j * PI / 2)
    with pytest.raises(DomainError):
        slit_map_forward(1.0 - 0.5j)


def test_slit_map_image_stays_upper():
    rng = np.random.default_rng(20)
    for _ in range(200):
        zeta = complex(6.0 * rng.random() - 3.0, 3.0 * rng.random() + 1e-6)
        assert slit_map_forward(zeta).imag > 0.0


def test_slit_roundtrip_simple():
    assert slit_map_inverse(1j + 1j * PI / 2) == pytest.approx(1j, abs=1e-12)


def test_slit_roundtrip_randomized():
    rng = np.random.default_rng(21)
    worst = 0.0
    for _ in range(300):
        w = complex(-25.0 + 50.0 * rng.random(), 1e-3 + 25.0 * rng.random())
        if abs(w.imag - PI) < 1e-12 and w.real <= -1.0:
            continue
        worst = max(worst, abs(slit_map_forward(slit_map_inverse(w)) - w))
    assert worst <= 1e-12


def test_slit_side_flagged_inversion():
    # oracle: -r + log r = -3 on each side of the slit
    r_low = brentq(lambda r: -r + math.log(r) + 3.0, 1e-12, 1.0)
    r_up = brentq(lambda r: -r + math.log(r) + 3.0, 1.0, 20.0)
    w = complex(-3.0, PI)
    z_low = slit_map_inverse(w, side="lower")
    z_up = slit_map_inverse(w, side="upper")
    assert abs(z_low - complex(-r_low, 0.0)) < 1e-12
    assert abs(z_up - complex(-r_up, 0.0)) < 1e-12
    assert abs(z_low) < 1.0 < abs(z_up)
    with pytest.raises(SlitAmbiguityError):
        slit_map_inverse(w)


def test_channel_time_zero_is_identity():
    assert channel_semigroup(0.3 - 0.4j, 0.0) == 0.3 - 0.4j


def test_channel_abel_residual_randomized(models, entries):
    h = KoenigsFunction(case="boundary", evaluate=entries["slit-channel"].koenigs)
    rng = np.random.default_rng(22)
    for z in rand_disk(rng, 20, rmax=0.85):
        t = float(2.5 * rng.random())
        assert abel_residual(h, models["slit-channel"], complex(z), t) <= 1e-10


def test_channel_trajectory_drifts_to_one():
    # closed-form oracle: |phi_50(0) - 1| = 2s/|zeta(50) + i s|
    val = channel_semigroup(0.0j, 50.0)
    dist = abs(val - 1.0)
    assert dist < 1e-2
    assert dist == pytest.approx(0.008961761856, abs=1e-9)


def test_channel_boundary_flow_slit_edges():
    # released lower-edge point matches the interior continuation
    sigma = channel_from_domain(complex(-3.0, PI), side="lower")
    assert abs(abs(sigma) - 1.0) < 1e-12
    t = 3.0
    want = channel_from_domain(complex(-3.0 + t, PI))
    got = channel_boundary_flow(sigma, t)
    assert abs(got - want) < 1e-10
    # before release the point slides along the slit
    early = channel_boundary_flow(sigma, 1.0)
    assert abs(abs(early) - 1.0) < 1e-12


def test_channel_boundary_flow_bottom_arc():
    sigma = cmath.exp(-1.2j)
    for t in (0.5, 2.0):
        val = channel_boundary_flow(sigma, t)
        assert abs(abs(val) - 1.0) < 1e-12


def test_channel_fixed_points():
    assert channel_boundary_flow(1.0 + 0.0j, 1.7) == 1.0
    assert channel_boundary_flow(-1.0 + 0.0j, 1.7) == -1.0


def test_channel_omega_contains_upper_halfplane():
    # points above the slit height are in the image; their preimages are
    # honest upper-half-plane points
    rng = np.random.default_rng(23)
    for _ in range(50):
        w = complex(20.0 * rng.random() - 10.0, PI + 0.1 + 5.0 * rng.random())
        zeta = slit_map_inverse(w)
        assert zeta.imag > 0.0
        assert abs(slit_map_forward(zeta) - w) < 1e-12


def test_channel_not_equicontinuous_without_horizon():
    # witnesses along a line inside the half-plane above the slit: z_n -> 1
    # while phi_{t_n}(z_n) stays at a fixed interior point
    height = PI + 1.0
    anchor = channel_from_domain(complex(0.0, height))
    dists = []
    for n in (5.0, 10.0, 20.0):
        z_n = channel_from_domain(complex(-n, height))
        dists.append(abs(z_n - 1.0))
        assert abs(channel_semigroup(z_n, n) - anchor) < 1e-10
    assert dists[0] > dists[1] > dists[2]
    z_far = channel_from_domain(complex(-40.0, height))
    assert abs(z_far - 1.0) < 0.05
    assert abs(channel_semigroup(z_far, 40.0) - anchor) < 1e-9
    assert abs(anchor - 1.0) > 0.1


def test_entry_internal_consistency(entries, models):
    rng = np.random.default_rng(24)
    for mid, e in entries.items():
        model = models[mid]
        h = KoenigsFunction(case=e.koenigs_case, evaluate=e.koenigs, lam=e.lam)
        for z in rand_disk(rng, 5, rmax=0.8):
            t = float(1.5 * rng.random())
            if e.koenigs_case == "boundary":
                assert abel_residual(h, model, complex(z), t) <= 1e-10
            else:
                assert schroeder_residual(h, model, complex(z), t) <= 1e-10
            assert generator_residual(model, complex(z), 1e-5) <= 1e-4


def test_ode_cross_validation(entries):
    rng = np.random.default_rng(25)
    for mid, e in entries.items():
        m = e.model()
        for z in rand_disk(rng, 4, rmax=0.8):
            t = float(2.0 * rng.random())
            assert abs(flow(m, complex(z), t, force_ode=True) - e.flow(complex(z), t)) <= 1e-8


def test_describe_shapes(entries):
    doc = entries["slit-channel"].describe()
    assert doc["id"] == "slit-channel"
    assert doc["type"] == "parabolic"
    assert "half-plane Im w > pi" in doc["omega"]
    assert str(CHANNEL_SCALE) in doc["omega"]
