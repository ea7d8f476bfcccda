import math

import numpy as np
import pytest
from scipy.special import eval_laguerre

from tomokit import (
    DiscrepancyWarning,
    DivergenceError,
    GaussianState,
    HermiteContext,
    InputError,
    PhotonTomogram,
    ReconstructionConfig,
    coherent_state,
    displacement,
    fidelity,
    fock_state,
    ladder,
    p0,
    pn_quantizer,
    pn_reconstruct,
    pn_tomogram,
    pn_tomogram_gaussian,
    pn_tomogram_grid,
    r_matrix,
    thermal_state,
    to_fock,
    y_args,
)


def poisson(n, x):
    return math.exp(-x) * x ** n / math.factorial(n)


def displaced_thermal_pn(n, nbar, delta):
    """Laguerre closed form for photon statistics of a displaced thermal state."""
    x = abs(delta) ** 2
    return (
        nbar ** n / (nbar + 1) ** (n + 1)
        * math.exp(-x / (nbar + 1))
        * eval_laguerre(n, -x / (nbar * (nbar + 1)))
    )


# ---------------------------------------------------------------------------
# tomogram, matrix route
# ---------------------------------------------------------------------------

def test_pn_tomogram_vacuum_poisson():
    rho = fock_state(0, 64)
    for alpha in (0.5, 1.0 + 0.5j, -1.5j):
        for n in (0, 1, 3, 7):
            assert pn_tomogram(rho, n, alpha) == pytest.approx(
                poisson(n, abs(alpha) ** 2), abs=1e-12
            )


def test_pn_tomogram_thermal_diagonal():
    rho = thermal_state(0.5, 48)
    for n in range(6):
        assert pn_tomogram(rho, n, 0.0) == pytest.approx(
            0.5 ** n / 1.5 ** (n + 1), abs=1e-10
        )


def test_pn_tomogram_fock_delta():
    rho = fock_state(1, 32)
    assert pn_tomogram(rho, 1, 0.0) == pytest.approx(1.0, abs=1e-14)
    assert pn_tomogram(rho, 0, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert pn_tomogram(rho, 5, 0.0) == pytest.approx(0.0, abs=1e-14)


def test_pn_tomogram_displaced_thermal_oracle():
    nbar, beta0 = 0.5, 0.4 - 0.2j
    rho = to_fock(GaussianState.displaced_squeezed_thermal(beta0, 0.0, nbar), 64)
    for alpha in (0.0, 1.0, -0.3 + 0.8j):
        delta = beta0 + alpha
        for n in range(10):
            assert pn_tomogram(rho, n, alpha) == pytest.approx(
                displaced_thermal_pn(n, nbar, delta), abs=1e-10
            )


def test_pn_tomogram_grid_normalization():
    cfg = ReconstructionConfig(dim=24, n_max=23, s=0.5, alpha_radius=2.0, n_alpha=11)
    omega = pn_tomogram_grid(fock_state(0, 24), cfg)
    assert omega.negativity() <= 1e-12
    assert omega.normalization_defect() <= 1e-10


# ---------------------------------------------------------------------------
# quantizer
# ---------------------------------------------------------------------------

def test_pn_quantizer_diagonal_at_origin():
    cfg = ReconstructionConfig(dim=16, n_max=8, s=0.5)
    t = (0.5 - 1) / (0.5 + 1)
    assert t == pytest.approx(-1 / 3)
    Q0 = pn_quantizer(0, 0.0, cfg)
    expected = 4 / (math.pi * 0.75) * np.diag(t ** np.arange(16))
    assert np.abs(Q0 - expected).max() < 1e-12
    Q1 = pn_quantizer(1, 0.0, cfg)
    assert np.abs(Q1 - expected / t).max() < 1e-12


def test_pn_quantizer_hermitian():
    cfg = ReconstructionConfig(dim=48, n_max=20, s=0.5)
    Q = pn_quantizer(3, 1.0 + 1.0j, cfg)
    assert np.abs(Q - Q.conj().T).max() <= 1e-12


def test_displaced_number_operator_identity():
    # (a^dag + a*)(a + a) identity against the conjugated number operator
    dim = 48
    a, ad = ladder(dim)
    alpha = 0.7 - 0.4j
    lhs = (ad + np.conj(alpha) * np.eye(dim)) @ (a + alpha * np.eye(dim))
    D = displacement(alpha, dim)
    rhs = D.conj().T @ np.diag(np.arange(dim, dtype=complex)) @ D
    half = dim // 2
    assert np.abs((lhs - rhs)[:half, :half]).max() <= 1e-8


# ---------------------------------------------------------------------------
# reconstruction
# ---------------------------------------------------------------------------

def small_cfg():
    # inside the convergence region: term peak |alpha|^2/|t| ~ 7.6 < n_max
    return ReconstructionConfig(dim=20, n_max=19, s=0.1, alpha_radius=2.5, n_alpha=31)


def test_reconstruction_round_trip_vacuum():
    cfg = small_cfg()
    rho = fock_state(0, cfg.dim)
    rec = pn_reconstruct(pn_tomogram_grid(rho, cfg), cfg)
    assert fidelity(rho, rec) >= 0.995
    # trace carries the (1 - t^dim) deficit of the truncated quantizer trace
    assert np.trace(rec).real == pytest.approx(1.0, abs=0.03)


def test_reconstruction_round_trip_thermal():
    # thermal states spread omega over a wider alpha disk: use the full grid
    cfg = ReconstructionConfig(dim=24, n_max=23, s=0.1, alpha_radius=3.0, n_alpha=41)
    rho = thermal_state(0.3, cfg.dim)
    rec = pn_reconstruct(pn_tomogram_grid(rho, cfg), cfg)
    assert fidelity(rho, rec) >= 0.99


def test_reconstruction_zero_tomogram():
    cfg = small_cfg()
    ax = cfg.alpha_axis()
    omega = PhotonTomogram(
        values=np.zeros((cfg.n_max + 1, ax.size, ax.size)), re_alphas=ax, im_alphas=ax
    )
    rec = pn_reconstruct(omega, cfg)
    assert np.abs(rec).max() == 0.0


def test_reconstruction_linearity():
    cfg = small_cfg()
    o1 = pn_tomogram_grid(fock_state(0, cfg.dim), cfg)
    o2 = pn_tomogram_grid(thermal_state(0.3, cfg.dim), cfg)
    mix = PhotonTomogram(
        values=0.5 * (o1.values + o2.values), re_alphas=o1.re_alphas, im_alphas=o1.im_alphas
    )
    rec_mix = pn_reconstruct(mix, cfg)
    rec_avg = 0.5 * (pn_reconstruct(o1, cfg) + pn_reconstruct(o2, cfg))
    assert np.abs(rec_mix - rec_avg).max() <= 1e-12


def test_divergence_guard_fires_outside_convergence_region():
    # disk radius 3 at s = 0.5 peaks near n = 27 > n_max = 23: not converged
    cfg = ReconstructionConfig(dim=24, n_max=23, s=0.5, alpha_radius=3.0, n_alpha=41)
    omega = pn_tomogram_grid(fock_state(0, 24), cfg)
    with pytest.raises(DivergenceError):
        pn_reconstruct(omega, cfg)


def test_config_validation():
    with pytest.raises(InputError):
        ReconstructionConfig(dim=16, n_max=16, s=0.5)
    with pytest.raises(InputError):
        ReconstructionConfig(dim=16, n_max=8, s=1.2)
    with pytest.raises(InputError):
        ReconstructionConfig(dim=16, n_max=8, s=0.0)


# ---------------------------------------------------------------------------
# Gaussian analytic branch
# ---------------------------------------------------------------------------

def test_r_matrix_thermal():
    R = r_matrix(GaussianState.thermal(0.5))
    expected = np.array([[0.0, -3.0], [-3.0, 0.0]]) / 9.0
    assert np.abs(R - expected).max() < 1e-14


def test_r_matrix_structure():
    g = GaussianState(sigma_qq=0.7, sigma_pp=0.7, sigma_pq=0.0)
    R = r_matrix(g)
    assert R[0, 0] == 0.0 and R[1, 1] == 0.0
    assert R[0, 1] == R[1, 0]


def test_y_args_thermal_zero():
    y1, y2 = y_args(GaussianState.thermal(0.5), 0.0)
    assert y1 == 0.0 and y2 == 0.0


def test_y_args_conjugate_pair(rng):
    for _ in range(50):
        g = GaussianState(
            mean_q=rng.uniform(-1, 1),
            mean_p=rng.uniform(-1, 1),
            sigma_qq=rng.uniform(0.6, 1.5),
            sigma_pp=rng.uniform(0.6, 1.5),
            sigma_pq=rng.uniform(-0.2, 0.2),
        )
        alpha = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        y1, y2 = y_args(g, alpha)
        assert y2 == np.conj(y1)


def test_y_args_thermal_alpha_one():
    # displaced-thermal oracle pins |y1|: p1/p0 = R12^2 y1 y2 - R12 must match
    # the Laguerre closed form, giving y1 y2 = 4 -> y1 = -2 by the formula
    y1, _ = y_args(GaussianState.thermal(0.5), 1.0)
    assert y1 == pytest.approx(-2.0, abs=1e-12)
    ratio = displaced_thermal_pn(1, 0.5, 1.0) / displaced_thermal_pn(0, 0.5, 1.0)
    R = r_matrix(GaussianState.thermal(0.5))
    assert ratio == pytest.approx((R[0, 1] ** 2 * abs(y1) ** 2 - R[0, 1]).real, abs=1e-12)


def test_p0_examples():
    for alpha in (0.0, 0.7, 1.0 - 0.5j):
        assert p0(GaussianState.vacuum(), alpha) == pytest.approx(
            math.exp(-abs(alpha) ** 2), abs=1e-12
        )
    assert p0(GaussianState.thermal(0.5), 0.0) == pytest.approx(2.0 / 3.0, abs=1e-14)


def test_p0_mean_shift_equivalence():
    g = GaussianState(mean_q=math.sqrt(2), mean_p=0.0, sigma_qq=0.8, sigma_pp=0.9)
    g0 = GaussianState(sigma_qq=0.8, sigma_pp=0.9)
    for alpha in (0.0, 0.3 + 0.1j):
        assert p0(g, alpha) == pytest.approx(p0(g0, alpha + 1.0), abs=1e-14)


def test_gaussian_branch_thermal_values():
    g = GaussianState.thermal(0.5)
    assert pn_tomogram_gaussian(g, 0, 0.0) == pytest.approx(2.0 / 3.0, abs=1e-12)
    rho = to_fock(g, 64)
    for n in range(12):
        for alpha in (0.0, 0.8, -0.2 + 0.6j):
            assert pn_tomogram_gaussian(g, n, alpha) == pytest.approx(
                pn_tomogram(rho, n, alpha), abs=1e-10
            )


def test_gaussian_branch_squeezed_normalization():
    g = GaussianState.squeezed_vacuum(0.4)
    total = sum(pn_tomogram_gaussian(g, n, 0.3) for n in range(41))
    assert total == pytest.approx(1.0, abs=1e-6)


def test_gaussian_branch_squeezed_parity():
    # squeezed vacuum at alpha = 0 populates even levels only
    g = GaussianState.squeezed_vacuum(0.3)
    for n in (1, 3, 5):
        assert abs(pn_tomogram_gaussian(g, n, 0.0)) < 1e-12
    ch = math.cosh(0.3)
    assert pn_tomogram_gaussian(g, 0, 0.0) == pytest.approx(1 / ch, abs=1e-12)
    assert pn_tomogram_gaussian(g, 2, 0.0) == pytest.approx(
        math.tanh(0.3) ** 2 / (2 * ch), abs=1e-12
    )


def test_gaussian_branch_vacuum_routes_to_matrix():
    g = GaussianState.vacuum()
    with pytest.warns(DiscrepancyWarning):
        val = pn_tomogram_gaussian(g, 2, 0.9)
    assert val == pytest.approx(poisson(2, 0.81), abs=1e-10)


def test_gaussian_branch_perturbed_thermal_limit():
    # the epsilon-perturbed analytic limit approaches the Poisson law
    g = GaussianState.thermal(1e-6)
    for n in (0, 1, 4):
        assert pn_tomogram_gaussian(g, n, 0.7) == pytest.approx(
            poisson(n, 0.49), abs=1e-5
        )


def test_gaussian_branch_shared_context():
    g = GaussianState.thermal(0.8)
    ctx = HermiteContext(r_matrix(g))
    vals = [pn_tomogram_gaussian(g, n, 0.5 + 0.5j, ctx=ctx) for n in range(8)]
    fresh = [pn_tomogram_gaussian(g, n, 0.5 + 0.5j) for n in range(8)]
    assert vals == fresh
