"""Serialization of toolkit objects.

Formats (all plain text, deterministic, exact float round-trip via repr):

* density matrix  -- JSON object {"dim": N, "re": [[...]], "im": [[...]]}
* symplectic tomogram -- CSV with header ``X,mu,nu,w``
* photon tomogram -- CSV with header ``n,re_alpha,im_alpha,omega``
* sampled symbols -- CSV, label-coordinate columns then ``value`` (or
  ``re,im`` for complex symbols)
* phase-space grid -- one JSON header line (axes, convention, kind) followed
  by CSV rows of doubles, row-major in q then p

Every writer's output parses back through the matching reader bit-for-bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import FileFormatError
from .fock_core import DensityMatrix
from .photon_number import PhotonTomogram
from .symplectic import PhaseSpaceDensity, SymplecticTomogram, WignerGrid

__all__ = [
    "save_density",
    "load_density",
    "save_tomogram_csv",
    "load_tomogram_csv",
    "save_photon_csv",
    "load_photon_csv",
    "save_symbols_csv",
    "load_symbols_csv",
    "save_grid",
    "load_grid",
]


def _fmt(x: float) -> str:
    return repr(float(x))


def _require_columns(header: list[str], required: tuple, where: str) -> None:
    for col in required:
        if col not in header:
            raise FileFormatError(f"{where}: missing column {col!r} (header: {header})")


# -- density matrix ---------------------------------------------------------

def save_density(rho: DensityMatrix, path: str | Path) -> None:
    Path(path).write_text(json.dumps(rho.to_json_dict(), sort_keys=True), encoding="utf-8")


def load_density(path: str | Path, validate: bool = True) -> DensityMatrix:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return DensityMatrix.from_json_dict(payload, validate=validate)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise FileFormatError(f"not a density-matrix JSON file: {path} ({exc})") from exc


# -- symplectic tomogram ----------------------------------------------------

def save_tomogram_csv(tomo: SymplecticTomogram, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["X", "mu", "nu", "w"])
        for s in range(tomo.mus.size):
            mu, nu = tomo.mus[s], tomo.nus[s]
            for j, x in enumerate(tomo.xs):
                writer.writerow([_fmt(x), _fmt(mu), _fmt(nu), _fmt(tomo.values[s, j])])


def load_tomogram_csv(path: str | Path) -> SymplecticTomogram:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise FileFormatError(f"empty tomogram file: {path}")
        _require_columns(header, ("X", "mu", "nu", "w"), str(path))
        ix, imu, inu, iw = (header.index(c) for c in ("X", "mu", "nu", "w"))
        slices: dict[tuple, dict] = {}
        for row in reader:
            if not row:
                continue
            try:
                key = (float(row[imu]), float(row[inu]))
                slices.setdefault(key, {})[float(row[ix])] = float(row[iw])
            except (ValueError, IndexError) as exc:
                raise FileFormatError(f"{path}: bad row {row!r}") from exc
    if not slices:
        raise FileFormatError(f"{path}: no data rows")
    keys = list(slices)
    xs = np.array(sorted(slices[keys[0]]))
    values = np.empty((len(keys), xs.size))
    for s, key in enumerate(keys):
        if sorted(slices[key]) != xs.tolist():
            raise FileFormatError(f"{path}: inconsistent X grids across (mu, nu) slices")
        values[s] = [slices[key][x] for x in xs]
    mus = np.array([k[0] for k in keys])
    nus = np.array([k[1] for k in keys])
    return SymplecticTomogram(xs=xs, mus=mus, nus=nus, values=values)


# -- photon tomogram --------------------------------------------------------

def save_photon_csv(omega: PhotonTomogram, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "re_alpha", "im_alpha", "omega"])
        for n in range(omega.n_max + 1):
            for i, re in enumerate(omega.re_alphas):
                for j, im in enumerate(omega.im_alphas):
                    writer.writerow([n, _fmt(re), _fmt(im), _fmt(omega.values[n, i, j])])


def load_photon_csv(path: str | Path) -> PhotonTomogram:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise FileFormatError(f"empty photon tomogram file: {path}")
        _require_columns(header, ("n", "re_alpha", "im_alpha", "omega"), str(path))
        idx = [header.index(c) for c in ("n", "re_alpha", "im_alpha", "omega")]
        entries: dict[tuple, float] = {}
        for row in reader:
            if not row:
                continue
            try:
                n = int(row[idx[0]])
                entries[(n, float(row[idx[1]]), float(row[idx[2]]))] = float(row[idx[3]])
            except (ValueError, IndexError) as exc:
                raise FileFormatError(f"{path}: bad row {row!r}") from exc
    if not entries:
        raise FileFormatError(f"{path}: no data rows")
    ns = sorted({k[0] for k in entries})
    res = np.array(sorted({k[1] for k in entries}))
    ims = np.array(sorted({k[2] for k in entries}))
    if ns != list(range(len(ns))):
        raise FileFormatError(f"{path}: photon numbers must cover 0..n_max, got {ns}")
    values = np.empty((len(ns), res.size, ims.size))
    try:
        for n in ns:
            for i, re in enumerate(res):
                for j, im in enumerate(ims):
                    values[n, i, j] = entries[(n, re, im)]
    except KeyError as exc:
        raise FileFormatError(f"{path}: alpha grid is not a complete rectangle") from exc
    return PhotonTomogram(values=values, re_alphas=res, im_alphas=ims)


# -- sampled symbols --------------------------------------------------------

def save_symbols_csv(points, samples, coord_names: tuple, path: str | Path) -> None:
    """Symbol samples over labeled grid points; complex samples get re/im columns."""
    samples = np.asarray(samples)
    is_complex = np.iscomplexobj(samples)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(coord_names) + (["re", "im"] if is_complex else ["value"]))
        for pt, val in zip(points, samples):
            coords = []
            for c in pt:
                if isinstance(c, complex):
                    coords += [_fmt(c.real), _fmt(c.imag)]
                else:
                    coords.append(_fmt(c) if isinstance(c, float) else str(c))
            if is_complex:
                coords += [_fmt(val.real), _fmt(val.imag)]
            else:
                coords.append(_fmt(val))
            writer.writerow(coords)


def load_symbols_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise FileFormatError(f"empty symbols file: {path}")
        rows = [[float(c) for c in row] for row in reader if row]
    if not rows:
        raise FileFormatError(f"{path}: no data rows")
    table = np.asarray(rows)
    if table.shape[1] != len(header):
        raise FileFormatError(f"{path}: row width does not match header {header}")
    return header, table


# -- phase-space grids ------------------------------------------------------

def save_grid(grid: PhaseSpaceDensity | WignerGrid, path: str | Path) -> None:
    kind = "wigner" if isinstance(grid, WignerGrid) else "density"
    header = {
        "kind": kind,
        "convention": grid.convention,
        "q0": float(grid.qs[0]),
        "q1": float(grid.qs[-1]),
        "nq": int(grid.qs.size),
        "p0": float(grid.ps[0]),
        "p1": float(grid.ps[-1]),
        "np": int(grid.ps.size),
    }
    buf = io.StringIO()
    writer = csv.writer(buf)
    for row in grid.values:
        writer.writerow([_fmt(v) for v in row])
    Path(path).write_text(
        json.dumps(header, sort_keys=True) + "\n" + buf.getvalue(), encoding="utf-8"
    )


def load_grid(path: str | Path) -> PhaseSpaceDensity | WignerGrid:
    text = Path(path).read_text(encoding="utf-8")
    newline = text.find("\n")
    if newline < 0:
        raise FileFormatError(f"{path}: missing grid payload")
    try:
        header = json.loads(text[:newline])
        qs = np.linspace(header["q0"], header["q1"], header["nq"])
        ps = np.linspace(header["p0"], header["p1"], header["np"])
        kind = header["kind"]
        convention = header["convention"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise FileFormatError(f"{path}: bad grid header ({exc})") from exc
    try:
        values = np.array(
            [[float(c) for c in row] for row in csv.reader(io.StringIO(text[newline + 1:])) if row]
        )
    except ValueError as exc:
        raise FileFormatError(f"{path}: bad grid payload ({exc})") from exc
    if values.shape != (qs.size, ps.size):
        raise FileFormatError(
            f"{path}: payload shape {values.shape} does not match header ({qs.size}, {ps.size})"
        )
    if kind == "wigner":
        if convention != "two-pi":
            raise FileFormatError(f"{path}: wigner grids use the two-pi convention")
        return WignerGrid(qs, ps, values)
    if kind == "density":
        return PhaseSpaceDensity(qs, ps, values, convention)
    raise FileFormatError(f"{path}: unknown grid kind {kind!r}")
