"""Command-line front end: parse a config, dispatch one computation, emit a
CSV or JSON table.

Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 one or more
verification checks failed. Randomized commands require an explicit --seed;
identical config and seed produce byte-identical output files. Heavy imports
happen inside main() so that --threads (or CIRCULANT_DPP_THREADS) can cap the
BLAS/OpenMP pools before the numerical stack loads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY = 3

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


class UsageError(ValueError):
    pass


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _emit(cfg, header, rows):
    if cfg["format"] == "json":
        _write_json(cfg["output"], [dict(zip(header, row)) for row in rows])
    else:
        _write_csv(cfg["output"], header, rows)


COMMON_DEFAULTS = {
    "family": "gaussian", "c": 1.0, "eps": 1.0, "z": None, "beta": None,
    "mu": None, "output": "-", "format": "csv", "config": None, "threads": None,
}


def _merge_config(args: argparse.Namespace, defaults: dict) -> dict:
    """Precedence: explicit flags > config file > defaults."""
    merged = dict(defaults)
    file_cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        if not isinstance(file_cfg, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(file_cfg) - set(defaults)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_cfg)
    for key in defaults:
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            merged[key] = val
    return merged


def _resolve_fugacity(cfg) -> tuple:
    """Enforce z xor (beta, mu); return (c, z) with the fermion map applied."""
    from .models import FermionParams

    has_z = cfg.get("z") is not None
    has_bm = cfg.get("beta") is not None or cfg.get("mu") is not None
    if has_z and has_bm:
        raise UsageError("give either --z or the pair --beta/--mu, not both")
    if has_bm:
        if cfg.get("beta") is None or cfg.get("mu") is None:
            raise UsageError("--beta and --mu must be given together")
        return FermionParams(cfg["beta"], cfg["mu"]).to_gas()
    if not has_z:
        raise UsageError("a fugacity is required: --z or --beta/--mu")
    c = cfg.get("c", 1.0)
    return c, cfg["z"]


def _family(cfg):
    from .models import gaussian_family, inverse_argument_family

    if cfg["family"] == "gaussian":
        return gaussian_family(cfg["c"])
    if cfg["family"] == "inverse-argument":
        return inverse_argument_family(cfg["eps"])
    raise UsageError(f"unknown family {cfg['family']!r}")


def _cmd_spectrum(cfg):
    from .finite import circulant_eigenvalues
    from .limits import finite_L_eigenvalue, spectral_density_values
    from .models import CirculantEnsemble, momentum_indices

    fam = _family(cfg)
    if cfg["regime"] == "finite":
        if cfg["M"] is None or cfg["L"] is None:
            raise UsageError("finite spectrum needs --M and --L")
        ens = CirculantEnsemble(M=cfg["M"], L=cfg["L"], z=1.0, family=fam)
        lam = circulant_eigenvalues(ens)
        rows = [(int(p), float(v)) for p, v in zip(momentum_indices(cfg["M"]), lam)]
        _emit(cfg, ("p", "lambda"), rows)
    elif cfg["regime"] == "finite_L":
        if cfg["L"] is None:
            raise UsageError("finite_L spectrum needs --L")
        ps = range(0, cfg["pmax"] + 1)
        rows = [(p, finite_L_eigenvalue(fam, cfg["L"], p)) for p in ps]
        _emit(cfg, ("p", "lambda"), rows)
    elif cfg["regime"] == "thermo":
        import numpy as np
        s = np.linspace(0.0, cfg["smax"], cfg["steps"])
        vals = spectral_density_values(fam, s)
        _emit(cfg, ("s", "lambda"), list(zip(map(float, s), map(float, vals))))
    else:
        raise UsageError(f"unknown regime {cfg['regime']!r}")
    return EXIT_OK


def _cmd_pressure(cfg):
    from .limits import (ddim_pressure_radial, finite_L_log_partition,
                         gaudin_pressure, lattice_pressure, thermo_pressure)

    c, z = _resolve_fugacity(cfg)
    cfg = dict(cfg, c=c)
    if cfg["family"] == "inverse-argument":
        if cfg["regime"] != "thermo":
            raise UsageError("the inverse-argument family is thermodynamic-only")
        _emit(cfg, ("eps", "z", "betaP"), [(cfg["eps"], z, gaudin_pressure(cfg["eps"], z))])
        return EXIT_OK
    fam = _family(cfg)
    if cfg["regime"] == "thermo":
        _emit(cfg, ("z", "betaP"), [(z, thermo_pressure(fam, z))])
    elif cfg["regime"] == "lattice":
        if cfg["tau"] is None:
            raise UsageError("lattice pressure needs --tau")
        _emit(cfg, ("tau", "z", "tau_betaP"),
              [(cfg["tau"], z, lattice_pressure(fam, cfg["tau"], z))])
    elif cfg["regime"] == "finite_L":
        if cfg["L"] is None:
            raise UsageError("finite_L pressure needs --L")
        val = finite_L_log_partition(fam, cfg["L"], z) / cfg["L"]
        _emit(cfg, ("L", "z", "log_norm_over_L"), [(cfg["L"], z, val)])
    elif cfg["regime"] == "ddim":
        _emit(cfg, ("d", "z", "betaP"),
              [(cfg["d"], z, ddim_pressure_radial(cfg["c"], cfg["d"], z))])
    else:
        raise UsageError(f"unknown regime {cfg['regime']!r}")
    return EXIT_OK


def _cmd_density(cfg):
    from .limits import gaudin_density, lattice_density, thermo_density

    c, z = _resolve_fugacity(cfg)
    cfg = dict(cfg, c=c)
    if cfg["family"] == "inverse-argument":
        _emit(cfg, ("eps", "z", "density"), [(cfg["eps"], z, gaudin_density(cfg["eps"], z))])
        return EXIT_OK
    fam = _family(cfg)
    if cfg["regime"] == "thermo":
        _emit(cfg, ("z", "density"), [(z, thermo_density(fam, z))])
    elif cfg["regime"] == "lattice":
        if cfg["tau"] is None:
            raise UsageError("lattice density needs --tau")
        _emit(cfg, ("tau", "z", "density"),
              [(cfg["tau"], z, lattice_density(fam, cfg["tau"], z))])
    else:
        raise UsageError(f"unknown regime {cfg['regime']!r}")
    return EXIT_OK


def _cmd_kernel(cfg):
    import numpy as np

    from .limits import gaudin_kernel, sine_kernel, thermo_kernel

    r = np.linspace(0.0, cfg["rmax"], cfg["steps"])
    if cfg["family"] == "inverse-argument":
        _, z = _resolve_fugacity(dict(cfg, c=1.0))
        vals = [gaudin_kernel(cfg["eps"], z, float(x)) for x in r]
        rows = [(float(x), float(v.real), float(v.imag)) for x, v in zip(r, vals)]
        _emit(cfg, ("r", "K_real", "K_imag"), rows)
        return EXIT_OK
    if cfg["family"] == "sine":
        vals = sine_kernel(cfg["kf"], r)
        _emit(cfg, ("r", "K"), list(zip(map(float, r), map(float, vals))))
        return EXIT_OK
    c, z = _resolve_fugacity(cfg)
    from .models import gaussian_family
    vals = thermo_kernel(gaussian_family(c), z, r)
    _emit(cfg, ("r", "K"), list(zip(map(float, r), map(float, vals))))
    return EXIT_OK


def _kernel_for_gap(cfg):
    from .limits import (fermion_correlation_kernel, gaudin_correlation_kernel,
                         sine_correlation_kernel, thermo_correlation_kernel)
    from .models import gaussian_family

    if cfg["family"] == "sine":
        return sine_correlation_kernel(cfg["kf"])
    if cfg["family"] == "inverse-argument":
        _, z = _resolve_fugacity(dict(cfg, c=1.0))
        return gaudin_correlation_kernel(cfg["eps"], z)
    if cfg.get("beta") is not None:
        return fermion_correlation_kernel(cfg["beta"], cfg["mu"])
    c, z = _resolve_fugacity(cfg)
    return thermo_correlation_kernel(gaussian_family(c), z)


def _cmd_gap(cfg):
    from .fredholm import FredholmProblem, fredholm_det

    kern = _kernel_for_gap(cfg)
    problem = FredholmProblem(kernel=kern, interval=(cfg["a"], cfg["b"]),
                              xi=cfg["xi"], order=cfg["order"])
    det = fredholm_det(problem)
    _emit(cfg, ("a", "b", "xi", "det"), [(cfg["a"], cfg["b"], cfg["xi"], det)])
    return EXIT_OK


def _cmd_counting(cfg):
    from .fredholm import FredholmProblem, counting_distribution

    kern = _kernel_for_gap(cfg)
    problem = FredholmProblem(kernel=kern, interval=(cfg["a"], cfg["b"]),
                              xi=1.0, order=cfg["order"])
    dist = counting_distribution(problem, cfg["nmax"])
    rows = [(n, float(p)) for n, p in enumerate(dist.probabilities)]
    _emit(cfg, ("n", "probability"), rows)
    return EXIT_OK


def _lattice(cfg):
    from .models import gaussian_family, gaussian_family_d
    from .sampling import TensorLattice

    d = cfg["d"]
    fam = gaussian_family(cfg["c"]) if d == 1 else gaussian_family_d(cfg["c"], d)
    if cfg["z"] is None:
        raise UsageError("lattice commands need an explicit --z (lattice fugacity)")
    return TensorLattice(shape=(cfg["M"],) * d, lengths=(cfg["M"] * cfg["tau"],) * d,
                         z=cfg["z"], family=fam)


def _cmd_sample(cfg):
    from .sampling import sample

    if cfg["seed"] is None:
        raise UsageError("sample requires an explicit --seed")
    lat = _lattice(cfg)
    rows = []
    for rep in range(cfg["reps"]):
        s = sample(lat, cfg["seed"], replicate=rep)
        for pt in s.points:
            idx = (pt,) if lat.dim == 1 else pt
            rows.append((rep,) + tuple(int(v) for v in (idx if isinstance(idx, tuple) else (idx,))))
    header = ("replicate",) + tuple(f"site_{a}" for a in range(lat.dim))
    _emit(cfg, header, rows)
    return EXIT_OK


def _cmd_hole(cfg):
    from .sampling import hole_probability_check

    if cfg["seed"] is None:
        raise UsageError("hole requires an explicit --seed")
    cfg = dict(cfg, d=2)
    lat = _lattice(cfg)
    sides = [int(s) for s in str(cfg["blocks"]).split(",") if s]
    rows = hole_probability_check(lat, sides, reps=cfg["reps"], seed=cfg["seed"])
    table = [(r.block_side, r.area, r.gap_estimate, r.gap_stderr, r.gap_exact,
              r.rate, r.pressure, r.ratio, r.flag) for r in rows]
    _emit(cfg, ("block_side", "area", "gap_mc", "gap_stderr", "gap_exact",
                "rate", "pressure", "ratio", "flag"), table)
    return EXIT_OK


def _cmd_verify(cfg):
    from .verify import run_suite

    if cfg["seed"] is None:
        raise UsageError("verify requires an explicit --seed")
    names = "all" if cfg["suite"] == "all" else [s for s in cfg["suite"].split(",") if s]
    report = run_suite(names, seed=cfg["seed"], strict=cfg["strict"])
    if cfg["format"] == "json":
        _write_json(cfg["output"], report.to_dict())
    else:
        rows = [(e.check_id, "" if e.error is None else e.error,
                 "" if e.tolerance is None else e.tolerance,
                 int(e.passed), e.seconds, e.note) for e in report.entries]
        _write_csv(cfg["output"], ("id", "error", "tol", "pass", "seconds", "note"), rows)
    return EXIT_OK if report.passed else EXIT_VERIFY


def _add_common(p, *, seeded=False):
    p.add_argument("--family", choices=["gaussian", "inverse-argument", "sine"])
    p.add_argument("--c", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--z", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--config")
    p.add_argument("--threads", type=int)
    if seeded:
        p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circulant-dpp",
        description="Translation-invariant L-ensembles on periodic lattices: "
                    "spectra, pressures, kernels, gap probabilities, exact "
                    "sampling, and the verification suite.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="circulant or limiting spectra")
    p.add_argument("--regime", choices=["finite", "finite_L", "thermo"])
    p.add_argument("--M", type=int)
    p.add_argument("--L", type=float)
    p.add_argument("--pmax", type=int)
    p.add_argument("--smax", type=float)
    p.add_argument("--steps", type=int)
    _add_common(p)

    p = sub.add_parser("pressure", help="pressure in a chosen regime")
    p.add_argument("--regime", choices=["thermo", "lattice", "finite_L", "ddim"])
    p.add_argument("--tau", type=float)
    p.add_argument("--L", type=float)
    p.add_argument("--d", type=int)
    _add_common(p)

    p = sub.add_parser("density", help="mean density in a chosen regime")
    p.add_argument("--regime", choices=["thermo", "lattice"])
    p.add_argument("--tau", type=float)
    _add_common(p)

    p = sub.add_parser("kernel", help="correlation kernel on a separation grid")
    p.add_argument("--rmax", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--kf", type=float)
    _add_common(p)

    p = sub.add_parser("gap", help="Fredholm determinant on an interval")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--xi", type=float)
    p.add_argument("--order", type=int)
    p.add_argument("--kf", type=float)
    _add_common(p)

    p = sub.add_parser("counting", help="counting distribution on an interval")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--nmax", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--kf", type=float)
    _add_common(p)

    p = sub.add_parser("sample", help="exact determinantal samples on a lattice")
    p.add_argument("--d", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--tau", type=float)
    p.add_argument("--reps", type=int)
    _add_common(p, seeded=True)

    p = sub.add_parser("hole", help="d=2 hole-probability table")
    p.add_argument("--M", type=int)
    p.add_argument("--tau", type=float)
    p.add_argument("--blocks")
    p.add_argument("--reps", type=int)
    _add_common(p, seeded=True)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("--suite")
    p.add_argument("--strict", action="store_true", default=None)
    _add_common(p, seeded=True)
    return parser


_DEFAULTS = {
    "spectrum": dict(COMMON_DEFAULTS, regime="finite", M=None, L=None, pmax=16,
                     smax=3.0, steps=101),
    "pressure": dict(COMMON_DEFAULTS, regime="thermo", tau=None, L=None, d=2),
    "density": dict(COMMON_DEFAULTS, regime="thermo", tau=None),
    "kernel": dict(COMMON_DEFAULTS, rmax=5.0, steps=200, kf=1.0),
    "gap": dict(COMMON_DEFAULTS, a=-1.0, b=1.0, xi=1.0, order=48, kf=1.0),
    "counting": dict(COMMON_DEFAULTS, a=-1.0, b=1.0, nmax=8, order=48, kf=1.0),
    "sample": dict(COMMON_DEFAULTS, d=1, M=32, tau=1.0, reps=1, seed=None),
    "hole": dict(COMMON_DEFAULTS, M=48, tau=0.125, blocks="6,10,14,20",
                 reps=20000, seed=None, d=2),
    "verify": dict(COMMON_DEFAULTS, suite="all", strict=False, seed=None),
}

_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "pressure": _cmd_pressure,
    "density": _cmd_density,
    "kernel": _cmd_kernel,
    "gap": _cmd_gap,
    "counting": _cmd_counting,
    "sample": _cmd_sample,
    "hole": _cmd_hole,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge_config(args, _DEFAULTS[args.command])
        threads = cfg.get("threads") or os.environ.get("CIRCULANT_DPP_THREADS")
        if threads:
            for var in _THREAD_VARS:
                os.environ[var] = str(int(threads))
        return _HANDLERS[args.command](cfg)
    except (UsageError, ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except Exception as exc:  # quadrature/convergence failures
        from .quadrature import QuadratureError
        if isinstance(exc, (QuadratureError, RuntimeError)):
            print(f"numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
        raise


if __name__ == "__main__":
    sys.exit(main())
