import math

import numpy as np
import pytest

from tomokit import (
    FileFormatError,
    PhaseSpaceDensity,
    PhotonTomogram,
    ReconstructionConfig,
    SymplecticTomogram,
    WignerGrid,
    coherent_state,
    fock_state,
    pn_tomogram_grid,
    tomogram_slices,
)
from tomokit.fileio import (
    load_density,
    load_grid,
    load_photon_csv,
    load_symbols_csv,
    load_tomogram_csv,
    save_density,
    save_grid,
    save_photon_csv,
    save_symbols_csv,
    save_tomogram_csv,
)


def test_density_round_trip(tmp_path):
    rho = coherent_state(0.7 - 0.3j, 12)
    path = tmp_path / "rho.json"
    save_density(rho, path)
    back = load_density(path)
    assert np.array_equal(back.mat, rho.mat)


def test_density_bad_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(FileFormatError):
        load_density(path)


def test_tomogram_csv_round_trip(tmp_path):
    rho = fock_state(0, 16)
    xs = np.linspace(-4, 4, 17)
    tomo = tomogram_slices(rho, xs, np.array([0.0, 0.7, 2.1]))
    path = tmp_path / "w.csv"
    save_tomogram_csv(tomo, path)
    back = load_tomogram_csv(path)
    assert np.array_equal(back.xs, tomo.xs)
    # slice order may differ; compare as sets of rows
    got = {(m, n): tuple(v) for m, n, v in zip(back.mus, back.nus, back.values)}
    want = {(m, n): tuple(v) for m, n, v in zip(tomo.mus, tomo.nus, tomo.values)}
    assert got == want


def test_tomogram_csv_missing_column(tmp_path):
    path = tmp_path / "w.csv"
    path.write_text("X,mu,w\n0.0,1.0,0.5\n")
    with pytest.raises(FileFormatError, match="nu"):
        load_tomogram_csv(path)


def test_photon_csv_round_trip(tmp_path):
    cfg = ReconstructionConfig(dim=12, n_max=5, s=0.5, alpha_radius=1.5, n_alpha=5)
    omega = pn_tomogram_grid(fock_state(0, 12), cfg)
    path = tmp_path / "omega.csv"
    save_photon_csv(omega, path)
    back = load_photon_csv(path)
    assert np.array_equal(back.values, omega.values)
    assert np.array_equal(back.re_alphas, omega.re_alphas)


def test_photon_csv_missing_column(tmp_path):
    path = tmp_path / "omega.csv"
    path.write_text("n,re_alpha,omega\n0,0.0,1.0\n")
    with pytest.raises(FileFormatError, match="im_alpha"):
        load_photon_csv(path)


def test_photon_csv_ragged_grid(tmp_path):
    path = tmp_path / "omega.csv"
    path.write_text(
        "n,re_alpha,im_alpha,omega\n0,0.0,0.0,1.0\n0,1.0,1.0,0.5\n"
    )
    with pytest.raises(FileFormatError):
        load_photon_csv(path)


def test_symbols_csv_round_trip(tmp_path):
    points = [(0.0, 1.0, 0.0), (0.5, 0.7, -0.7)]
    samples = np.array([0.56, 0.41])
    path = tmp_path / "symbols.csv"
    save_symbols_csv(points, samples, ("X", "mu", "nu"), path)
    header, table = load_symbols_csv(path)
    assert header == ["X", "mu", "nu", "value"]
    assert np.array_equal(table[:, 3], samples)
    # complex samples gain re/im columns
    save_symbols_csv(points, samples * (1 + 1j), ("X", "mu", "nu"), path)
    header, table = load_symbols_csv(path)
    assert header[-2:] == ["re", "im"]
    assert np.array_equal(table[:, 3] + 1j * table[:, 4], samples * (1 + 1j))


def test_wigner_grid_round_trip(tmp_path):
    qs = np.linspace(-5, 5, 33)
    W = WignerGrid(qs, qs, 2 * np.exp(-(qs[:, None] ** 2 + qs[None, :] ** 2)))
    path = tmp_path / "w.grid"
    save_grid(W, path)
    back = load_grid(path)
    assert isinstance(back, WignerGrid)
    assert np.array_equal(back.values, W.values)
    assert np.array_equal(back.qs, W.qs)


def test_density_grid_round_trip(tmp_path):
    qs = np.linspace(-5, 5, 21)
    f = PhaseSpaceDensity(
        qs, qs, np.exp(-(qs[:, None] ** 2 + qs[None, :] ** 2)) / math.pi, "unit-integral"
    )
    path = tmp_path / "f.grid"
    save_grid(f, path)
    back = load_grid(path)
    assert isinstance(back, PhaseSpaceDensity)
    assert back.convention == "unit-integral"
    assert np.array_equal(back.values, f.values)


def test_grid_shape_mismatch(tmp_path):
    path = tmp_path / "broken.grid"
    header = ('{"convention": "two-pi", "kind": "wigner", "nq": 3, "np": 3, '
              '"q0": -1.0, "q1": 1.0, "p0": -1.0, "p1": 1.0}')
    path.write_text(header + "\n0.0,0.0,0.0\n0.0,0.0,0.0\n")
    with pytest.raises(FileFormatError):
        load_grid(path)
