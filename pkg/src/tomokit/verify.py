"""Cross-module invariant suites behind ``tomokit verify``.

Each suite returns a JSON-serializable report with a boolean ``passed``.
Thresholds are the module contracts; a correct build passes every suite.
The Gaussian-branch suite never patches a formula silently: if the analytic
and matrix routes disagree beyond tolerance it still completes and attaches a
``discrepancy`` section with the measured deviation.
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import fock_core, gaussian, photon_number, star_product, symplectic
from .fock_core import DensityMatrix
from .gaussian import GaussianState

__all__ = ["SUITES", "verify_kernels", "verify_homogeneity", "verify_gaussian_branch",
           "verify_roundtrips", "run_suites"]


def _fixture_states(dim: int) -> dict[str, DensityMatrix]:
    return {
        "vacuum": fock_core.fock_state(0, dim),
        "fock1": fock_core.fock_state(1, dim),
        "coherent(1)": fock_core.coherent_state(1.0, dim),
        "thermal(0.5)": fock_core.thermal_state(0.5, dim),
        "squeezed(0.3)": fock_core.squeezed_vacuum_state(0.3, dim),
    }


def verify_kernels(seed: int = 0, n_points: int = 1000) -> dict:
    """Quantum/classical kernel relation on random label points, |nu| >= 0.1."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        pts = rng.uniform(-3.0, 3.0, size=9)
        while abs(pts[8]) < 0.1:
            pts[8] = rng.uniform(-3.0, 3.0)
        x1, x2, x = tuple(pts[0:3]), tuple(pts[3:6]), tuple(pts[6:9])
        ratio = star_product.kernel_relation_check(x1, x2, x)
        predicted = np.exp(1j * (x2[1] * x1[2] - x1[1] * x2[2]) / 2)
        worst = max(worst, abs(ratio - predicted))
        kq = star_product.kernel_symplectic_quantum(x1, x2, x)
        kc = star_product.kernel_symplectic_classical(x1, x2, x)
        worst_delta = abs(kq.delta_argument + kc.delta_argument)
        worst = max(worst, worst_delta)
    return {
        "suite": "kernels",
        "points": n_points,
        "seed": seed,
        "max_deviation": worst,
        "tolerance": 1e-12,
        "passed": bool(worst <= 1e-12),
    }


def verify_homogeneity(dim: int = 64) -> dict:
    """Tomogram axioms (nonnegativity, X-normalization, homogeneity) per fixture state."""
    xs = np.linspace(-7.5, 7.5, 301)
    phis = np.linspace(0.0, math.pi, 12, endpoint=False)
    lambdas = (-2.0, 0.5, 3.0)
    rows = {}
    ok = True
    for name, rho in _fixture_states(dim).items():
        tomo = symplectic.tomogram_slices(rho, xs, phis)
        report = symplectic.validate_tomogram(tomo, lambdas=lambdas)
        entry = {
            "max_negativity": report.max_negativity,
            "max_normalization_error": float(report.normalization_errors.max()),
            "homogeneity_residual": report.homogeneity_residual,
        }
        entry["passed"] = bool(report.ok(neg_tol=1e-12, norm_tol=1e-6, hom_tol=1e-8))
        ok = ok and entry["passed"]
        rows[name] = entry
    return {
        "suite": "homogeneity",
        "dim": dim,
        "lambdas": list(lambdas),
        "states": rows,
        "tolerances": {"negativity": 1e-12, "normalization": 1e-6, "homogeneity": 1e-8},
        "passed": ok,
    }


_BRANCH_LATTICE = (
    ("thermal(0.3)", GaussianState.thermal(0.3)),
    ("thermal(0.5)", GaussianState.thermal(0.5)),
    ("thermal(1.0)", GaussianState.thermal(1.0)),
    ("squeezed(0.2)", GaussianState.squeezed_vacuum(0.2)),
    ("squeezed(0.4)", GaussianState.squeezed_vacuum(0.4)),
    ("displaced-thermal", GaussianState.displaced_squeezed_thermal(0.4 - 0.2j, 0.0, 0.5)),
)


def verify_gaussian_branch(dim: int = 96, n_top: int = 25, seed: int = 0) -> dict:
    """Analytic photon statistics vs the Fock matrix route over the state lattice.

    Disagreement beyond tolerance does not abort: it is recorded in a
    ``discrepancy`` section with the worst case, as a candidate formula typo.
    """
    rng = np.random.default_rng(seed)
    alphas = np.concatenate(
        [
            np.array([0.0 + 0.0j, 0.5, -0.7j, 1.0 + 1.0j, -1.05 - 0.9j]),
            (rng.uniform(-1, 1, 7) + 1j * rng.uniform(-1, 1, 7)) * 1.06,
        ]
    )
    ns = np.arange(n_top + 1)
    worst = 0.0
    worst_case = None
    rows = {}
    for name, g in _BRANCH_LATTICE:
        rho = gaussian.to_fock(g, dim)
        dev = 0.0
        for alpha in alphas:
            D = fock_core.displacement(alpha, dim)
            matrix_probs = np.real(np.einsum("na,ab,nb->n", D, rho.mat, D.conj()))[: n_top + 1]
            analytic = np.array(
                [photon_number.pn_tomogram_gaussian(g, int(n), alpha) for n in ns]
            )
            local = float(np.abs(analytic - matrix_probs).max())
            if local > dev:
                dev = local
            if local > worst:
                worst = local
                worst_case = {"state": name, "alpha": [alpha.real, alpha.imag], "max_dev": local}
        rows[name] = dev
    report = {
        "suite": "gaussian-branch",
        "dim": dim,
        "n_top": n_top,
        "alphas": len(alphas),
        "max_deviation": worst,
        "per_state": rows,
        "tolerance": 1e-6,
        "passed": bool(worst <= 1e-6),
    }
    if worst > 1e-6:
        report["discrepancy"] = {
            "message": "analytic photon-statistics branch deviates from the matrix route",
            "worst_case": worst_case,
            "suggested_action": "inspect R-matrix / y-argument signs against the matrix oracle",
        }
    return report


def verify_roundtrips(seed: int = 0) -> dict:
    """Reconstruction round trips: photon-number scheme and the Radon pair.

    The photon-number round trip runs at a configuration inside the
    convergence region of the alternating reconstruction series (s = 0.1;
    see the divergence-guard notes in :mod:`tomokit.photon_number`).
    """
    del seed  # deterministic suite; signature kept uniform
    dim = 24
    cfg = photon_number.ReconstructionConfig(dim=dim, n_max=23, s=0.1, alpha_radius=3.0, n_alpha=41)
    states = {
        "vacuum": fock_core.fock_state(0, dim),
        "thermal(0.3)": fock_core.thermal_state(0.3, dim),
        "coherent(0.8)": fock_core.coherent_state(0.8, dim),
    }
    photon_rows = {}
    ok = True
    for name, rho in states.items():
        omega = photon_number.pn_tomogram_grid(rho, cfg)
        rec = photon_number.pn_reconstruct(omega, cfg)
        fid = fock_core.fidelity(rho, rec)
        photon_rows[name] = fid
        ok = ok and fid >= 0.99

    qs = np.linspace(-8.0, 8.0, 256)
    xs = np.linspace(-8.0, 8.0, 256)
    phis = np.arange(180) * math.pi / 180.0
    radon_rows = {}
    for name, g in (("vacuum", GaussianState.vacuum()),
                    ("coherent(1+0.5j)", GaussianState.coherent(1 + 0.5j))):
        W = symplectic.WignerGrid(qs, qs, gaussian.wigner_eval(g, qs[:, None], qs[None, :]))
        sino = symplectic.radon_sinogram(W, xs, phis)
        Wrec = symplectic.inverse_radon(sino, qs, qs, convention="two-pi")
        err = float(np.abs(Wrec.values - W.values).max())
        radon_rows[name] = err
        ok = ok and err <= 1e-3
    return {
        "suite": "roundtrips",
        "photon_fidelities": photon_rows,
        "photon_config": {"dim": dim, "n_max": 23, "s": 0.1, "alpha_radius": 3.0, "n_alpha": 41},
        "radon_max_abs_errors": radon_rows,
        "tolerances": {"fidelity": 0.99, "radon": 1e-3},
        "passed": ok,
    }


SUITES = {
    "kernels": verify_kernels,
    "homogeneity": verify_homogeneity,
    "gaussian-branch": verify_gaussian_branch,
    "roundtrips": verify_roundtrips,
}


def run_suites(names, seed: int = 0) -> dict:
    if "all" in names:
        names = list(SUITES)
    reports = {}
    for name in names:
        if name not in SUITES:
            raise KeyError(name)
        fn = SUITES[name]
        start = time.perf_counter()
        rep = fn(seed=seed) if "seed" in fn.__code__.co_varnames else fn()
        rep["runtime_s"] = round(time.perf_counter() - start, 3)
        reports[name] = rep
    return {"suites": reports, "passed": bool(all(r["passed"] for r in reports.values()))}
