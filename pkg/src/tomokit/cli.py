"""Command-line front end.

Subcommands:

* ``tomogram``     -- sample a tomogram of a built-in state and write CSV
* ``reconstruct``  -- invert a tomogram file back to a density matrix / grid
* ``verify``       -- run the cross-module invariant suites

Exit codes: 0 ok, 1 invariant failure, 2 config/input error, 3 numerical
contract violation.  Flags may also be supplied via ``--config file.json``
(flag names as keys, dashes as underscores); explicit flags win.  All
randomness sits behind ``--seed`` (default 0); identical configuration and
seed produce byte-identical outputs.  ``TOMOKIT_THREADS`` caps parallelism.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import fileio, fock_core, gaussian, photon_number, symplectic, verify
from ._kernels import BACKEND
from .errors import ContractError, InputError
from .fock_core import DensityMatrix
from .gaussian import GaussianState

_EXIT_OK = 0
_EXIT_INVARIANT = 1
_EXIT_CONFIG = 2
_EXIT_CONTRACT = 3


def _parse_state(spec: str):
    """State spec: vacuum | fock:N | coherent:Z | thermal:NBAR | squeezed:R."""
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "vacuum":
            return ("vacuum", None)
        if kind == "fock":
            return ("fock", int(arg))
        if kind == "coherent":
            return ("coherent", complex(arg.replace(" ", "")))
        if kind == "thermal":
            return ("thermal", float(arg))
        if kind in ("squeezed", "squeezed_vacuum"):
            return ("squeezed_vacuum", float(arg))
    except ValueError as exc:
        raise InputError(f"bad state parameter in {spec!r}: {exc}") from exc
    raise InputError(f"unknown state {spec!r}; expected vacuum|fock:N|coherent:Z|thermal:NBAR|squeezed:R")


def _build_state(spec: str, dim: int) -> DensityMatrix:
    kind, param = _parse_state(spec)
    return fock_core.make_state(kind, param, dim=dim)


def _gaussian_reference(spec: str) -> GaussianState | None:
    kind, param = _parse_state(spec)
    if kind == "vacuum":
        return GaussianState.vacuum()
    if kind == "coherent":
        return GaussianState.coherent(param)
    if kind == "thermal":
        return GaussianState.thermal(param)
    if kind == "squeezed_vacuum":
        return GaussianState.squeezed_vacuum(param)
    return None


def _parse_range(spec: str) -> np.ndarray:
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise InputError(f"range must be lo:hi:count, got {spec!r}") from exc
    if n < 2 or hi <= lo:
        raise InputError(f"range {spec!r} must have hi > lo and count >= 2")
    return np.linspace(lo, hi, n)


def _write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def _meta_sidecar(out: str, command: str, parameters: dict, extra: dict) -> None:
    meta = {"command": command, "backend": BACKEND, "parameters": parameters}
    meta.update(extra)
    _write_json(str(out) + ".meta.json", meta)


# ---------------------------------------------------------------------------
# tomogram
# ---------------------------------------------------------------------------

def _cmd_tomogram(args) -> int:
    rho = _build_state(args.state, args.truncation)
    params = {
        "scheme": args.scheme,
        "state": args.state,
        "truncation": args.truncation,
        "seed": args.seed,
    }
    if args.scheme == "symplectic":
        xs = _parse_range(args.xrange)
        phis = np.arange(args.angles) * math.pi / args.angles
        tomo = symplectic.tomogram_slices(rho, xs, phis)
        report = symplectic.validate_tomogram(tomo)
        if report.max_negativity > 1e-12:
            raise ContractError(f"tomogram negativity {report.max_negativity:.3e} beyond 1e-12")
        if rho.leakage < 1e-8 and report.normalization_errors.max() > 1e-6:
            raise ContractError(
                f"slice normalization off by {report.normalization_errors.max():.3e}"
            )
        fileio.save_tomogram_csv(tomo, args.out)
        params.update({"angles": args.angles, "xrange": args.xrange})
        _meta_sidecar(
            args.out,
            "tomogram",
            params,
            {
                "leakage": rho.leakage,
                "tolerances": {"negativity": 1e-12, "normalization": 1e-6},
                "max_negativity": report.max_negativity,
                "max_normalization_error": float(report.normalization_errors.max()),
                "homogeneity_residual": report.homogeneity_residual,
            },
        )
    else:
        # s does not enter the tomogram itself, only the reconstruction
        cfg = photon_number.ReconstructionConfig(
            dim=args.truncation,
            n_max=args.nmax,
            s=0.5,
            alpha_radius=args.alpha_radius,
            n_alpha=args.alpha_grid,
        )
        omega = photon_number.pn_tomogram_grid(rho, cfg)
        defect = omega.normalization_defect()
        tail_allow = max(1e-6, 10.0 * rho.leakage, 3.0 * _tail_estimate(cfg, rho))
        if omega.negativity() > 1e-12:
            raise ContractError(f"photon tomogram negativity {omega.negativity():.3e}")
        if defect > tail_allow:
            raise ContractError(
                f"sum_n omega(n, alpha) off by {defect:.3e} (allowed {tail_allow:.3e})"
            )
        fileio.save_photon_csv(omega, args.out)
        params.update(
            {"nmax": args.nmax, "alpha_grid": args.alpha_grid, "alpha_radius": args.alpha_radius}
        )
        _meta_sidecar(
            args.out,
            "tomogram",
            params,
            {
                "leakage": rho.leakage,
                "tolerances": {"negativity": 1e-12, "normalization": tail_allow},
                "normalization_defect": defect,
            },
        )
    print(f"wrote {args.out}")
    return _EXIT_OK


def _tail_estimate(cfg: photon_number.ReconstructionConfig, rho: DensityMatrix) -> float:
    """Photon weight expected above n_max at the sampled grid corner.

    Models the displaced state by a displaced thermal state with the same mean
    photon number (heavier-tailed than the displaced Fock/squeezed cases with
    comparable energy) evaluated at the square-grid corner |alpha| =
    sqrt(2) * alpha_radius, via the Laguerre closed form.
    """
    from scipy.special import eval_laguerre, gammaln

    nbar = max(float(np.real(np.diagonal(rho.mat)) @ np.arange(rho.dim)), 0.0)
    x = 2.0 * cfg.alpha_radius ** 2
    ks = np.arange(cfg.n_max + 1, cfg.n_max + 400, dtype=float)
    if nbar < 1e-9:
        tail = np.exp(ks * math.log(x) - x - gammaln(ks + 1)).sum()
    else:
        logp = ks * (math.log(nbar) - math.log1p(nbar)) - math.log1p(nbar) - x / (nbar + 1)
        tail = float(np.sum(np.exp(logp) * eval_laguerre(ks, -x / (nbar * (nbar + 1)))))
    return float(max(tail, 1e-7))


# ---------------------------------------------------------------------------
# reconstruct
# ---------------------------------------------------------------------------

def _cmd_reconstruct(args) -> int:
    report: dict = {"scheme": args.scheme, "input": args.input, "backend": BACKEND}
    if args.scheme == "photon":
        omega = fileio.load_photon_csv(args.input)
        ax = omega.re_alphas
        if not np.allclose(ax, omega.im_alphas, atol=1e-12):
            raise InputError("photon tomogram alpha grid must be square")
        cfg = photon_number.ReconstructionConfig(
            dim=args.truncation,
            n_max=omega.n_max,
            s=args.s,
            alpha_radius=float(ax[-1]),
            n_alpha=ax.size,
        )
        mat = photon_number.pn_reconstruct(omega, cfg)
        tr = float(np.trace(mat).real)
        report.update({"trace": tr, "n_max": omega.n_max, "s": args.s})
        rho_rec = DensityMatrix(mat / tr if abs(tr) > 1e-12 else mat, _validate=False)
        fileio.save_density(rho_rec, args.out)
        if args.reference:
            ref = _build_state(args.reference, args.truncation)
            report["fidelity"] = fock_core.fidelity(ref, mat)
    else:
        tomo = fileio.load_tomogram_csv(args.input)
        qs = _parse_range(args.qrange)
        ps = _parse_range(args.prange)
        grid = symplectic.inverse_radon(tomo, qs, ps, convention="two-pi")
        fileio.save_grid(grid, args.out)
        report["normalization_defect"] = grid.normalization_defect()
        if args.reference:
            g = _gaussian_reference(args.reference)
            if g is not None:
                ref_vals = gaussian.wigner_eval(g, qs[:, None], ps[None, :])
            else:
                ref_rho = _build_state(args.reference, args.truncation)
                ref_vals = symplectic.wigner_grid_from_fock(ref_rho, qs, ps).values
            report["max_abs_error"] = float(np.abs(ref_vals - grid.values).max())
    _write_json(args.report, report) if args.report else print(json.dumps(report, sort_keys=True))
    print(f"wrote {args.out}")
    if args.min_fidelity is not None and report.get("fidelity", 1.0) < args.min_fidelity:
        raise ContractError(
            f"fidelity {report['fidelity']:.4f} below required {args.min_fidelity}"
        )
    return _EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _cmd_verify(args) -> int:
    try:
        report = verify.run_suites([args.suite], seed=args.seed)
    except KeyError as exc:
        raise InputError(f"unknown suite {exc.args[0]!r}; choose from "
                         f"{sorted(verify.SUITES)} or 'all'") from exc
    for name, rep in report["suites"].items():
        status = "pass" if rep["passed"] else "FAIL"
        print(f"[{status}] {name} ({rep['runtime_s']} s)")
    if args.out:
        _write_json(args.out, report)
    return _EXIT_OK if report["passed"] else _EXIT_INVARIANT


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tomokit",
        description="Symplectic and photon-number tomography of quantum states.",
    )
    parser.add_argument("--config", help="JSON file with default flag values (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tomogram", help="sample a tomogram of a built-in state")
    t.add_argument("--scheme", choices=("symplectic", "photon"), required=True)
    t.add_argument("--state", required=True, help="vacuum|fock:N|coherent:Z|thermal:NBAR|squeezed:R")
    t.add_argument("--truncation", type=int, default=64, help="Fock-space dimension")
    t.add_argument("--angles", type=int, default=64, help="slices over [0, pi) (symplectic)")
    t.add_argument("--xrange", default="-7:7:241",
                   help="X grid lo:hi:count; write --xrange=-7:7:241 (leading dash)")
    t.add_argument("--nmax", type=int, default=20, help="max photon number (photon)")
    t.add_argument("--alpha-grid", type=int, default=21, help="alpha grid points per axis (photon)")
    t.add_argument("--alpha-radius", type=float, default=3.0, help="alpha disk radius (photon)")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", required=True, help="output CSV path")
    t.set_defaults(fn=_cmd_tomogram)

    r = sub.add_parser("reconstruct", help="invert a tomogram file")
    r.add_argument("--scheme", choices=("symplectic", "photon"), required=True)
    r.add_argument("--input", required=True, help="tomogram CSV")
    r.add_argument("--truncation", type=int, default=24)
    r.add_argument("--s", type=float, default=0.5, help="ordering parameter in (0,1) (photon)")
    r.add_argument("--qrange", default="-8:8:256",
                   help="output q grid; write --qrange=-8:8:256 (leading dash)")
    r.add_argument("--prange", default="-8:8:256",
                   help="output p grid; write --prange=-8:8:256 (leading dash)")
    r.add_argument("--reference", help="state spec to compare against")
    r.add_argument("--min-fidelity", type=float, default=None,
                   help="exit 3 when the reference fidelity falls below this")
    r.add_argument("--report", help="write the JSON report here instead of stdout")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", required=True, help="output file (density JSON or grid)")
    r.set_defaults(fn=_cmd_reconstruct)

    v = sub.add_parser("verify", help="run invariant suites")
    v.add_argument("suite", choices=tuple(verify.SUITES) + ("all",))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", help="write the JSON report here")
    v.set_defaults(fn=_cmd_verify)
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Install config-file values as parser defaults so explicit flags win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    try:
        path = argv[i + 1]
    except IndexError as exc:
        raise InputError("--config needs a file path") from exc
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise InputError(f"config file {path} must hold a JSON object")
    defaults = {k.replace("-", "_"): v for k, v in payload.items()}
    for action in parser._subparsers._group_actions:  # noqa: SLF001 - argparse has no public hook
        for sp in action.choices.values():
            sp.set_defaults(**{k: v for k, v in defaults.items()
                               if any(k == a.dest for a in sp._actions)})
    return argv


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _apply_config_file(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # argparse exits 2 on usage errors
            return int(exc.code or 0)
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except ContractError as exc:
        print(f"numerical contract violated: {exc}", file=sys.stderr)
        return _EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
