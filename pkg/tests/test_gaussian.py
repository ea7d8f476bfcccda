import math

import numpy as np
import pytest

from tomokit import (
    DomainError,
    GaussianState,
    coherent_state,
    moments,
    quadratures,
    thermal_state,
    to_fock,
    wigner_eval,
    wigner_from_fock,
)


def test_wigner_eval_vacuum():
    g = GaussianState.vacuum()
    assert wigner_eval(g, 0.0, 0.0) == pytest.approx(2.0)
    assert wigner_eval(g, 1.0, 1.0) == pytest.approx(2.0 * math.exp(-2.0))


def test_wigner_eval_thermal_peak():
    for nbar in (0.2, 0.5, 1.5):
        g = GaussianState.thermal(nbar)
        assert wigner_eval(g, 0.0, 0.0) == pytest.approx(1.0 / (nbar + 0.5))


def test_wigner_eval_normalization():
    g = GaussianState(mean_q=0.3, mean_p=-0.7, sigma_qq=0.8, sigma_pp=0.9, sigma_pq=0.25)
    qs = np.linspace(-9, 9, 301)
    W = wigner_eval(g, qs[:, None], qs[None, :])
    total = np.trapezoid(np.trapezoid(W, qs, axis=1), qs) / (2 * math.pi)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_moments_examples():
    m = moments(GaussianState.vacuum())
    assert (m.d, m.T, m.L) == (0.25, 1.0, 4.0)
    m = moments(GaussianState.thermal(0.5))
    assert (m.d, m.T, m.L) == (1.0, 2.0, 9.0)
    r = 0.3
    m = moments(GaussianState.squeezed_vacuum(r))
    assert m.d == pytest.approx(0.25)
    assert m.T == pytest.approx(math.cosh(2 * r))
    assert m.L == pytest.approx(2 + 2 * math.cosh(2 * r))


def test_unphysical_covariance_rejected():
    with pytest.raises(DomainError):
        GaussianState(sigma_qq=0.3, sigma_pp=0.3)  # det < 1/4
    with pytest.raises(DomainError):
        GaussianState(sigma_qq=-1.0, sigma_pp=1.0)


def test_to_fock_vacuum_and_thermal():
    vac = to_fock(GaussianState.vacuum(), 16)
    assert vac.mat[0, 0].real == pytest.approx(1.0, abs=1e-12)
    th = to_fock(GaussianState.thermal(0.5), 48)
    oracle = thermal_state(0.5, 48)
    assert np.abs(th.mat - oracle.mat).max() < 1e-10


def test_to_fock_coherent_convention():
    # means (sqrt2, 0) correspond to alpha = 1 under beta = (q + ip)/sqrt2
    g = GaussianState.coherent(1.0)
    assert g.mean_q == pytest.approx(math.sqrt(2))
    rho = to_fock(g, 48)
    oracle = coherent_state(1.0, 48)
    assert np.abs(rho.mat - oracle.mat).max() < 1e-9


def test_to_fock_rejects_rotated_covariance():
    with pytest.raises(DomainError):
        to_fock(GaussianState(sigma_qq=0.6, sigma_pp=0.6, sigma_pq=0.2), 32)


@pytest.mark.parametrize(
    "g",
    [
        GaussianState.thermal(0.5),
        GaussianState.squeezed_vacuum(0.3),
        GaussianState.displaced_squeezed_thermal(0.5 - 0.3j, 0.2, 0.4),
    ],
)
def test_moment_closure(g):
    # first and second moments computed from the embedded matrix match g
    dim = 64
    rho = to_fock(g, dim)
    q, p = quadratures(dim)
    mq = rho.expect(q).real
    mp = rho.expect(p).real
    sqq = rho.expect(q @ q).real - mq ** 2
    spp = rho.expect(p @ p).real - mp ** 2
    spq = rho.expect((q @ p + p @ q) / 2).real - mq * mp
    assert mq == pytest.approx(g.mean_q, abs=1e-8)
    assert mp == pytest.approx(g.mean_p, abs=1e-8)
    assert sqq == pytest.approx(g.sigma_qq, abs=1e-8)
    assert spp == pytest.approx(g.sigma_pp, abs=1e-8)
    assert spq == pytest.approx(g.sigma_pq, abs=1e-8)


def test_wigner_routes_agree_on_lattice():
    # analytic Gaussian Wigner vs displaced-parity matrix route
    dim = 64
    pts = np.linspace(-3, 3, 21)
    for g in (GaussianState.thermal(0.5), GaussianState.coherent(0.6 + 0.4j)):
        rho = to_fock(g, dim)
        worst = 0.0
        for q in pts[::4]:
            for p in pts[::4]:
                worst = max(worst, abs(wigner_eval(g, q, p) - wigner_from_fock(rho, q, p)))
        assert worst <= 1e-6


def test_json_round_trip():
    g = GaussianState(mean_q=0.1, mean_p=-0.2, sigma_qq=0.7, sigma_pp=0.6, sigma_pq=0.1)
    assert GaussianState.from_json_dict(g.to_json_dict()) == g
