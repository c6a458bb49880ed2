"""Command-line front end: solves, sweeps, functionals, optimization.

Commands emit machine-readable JSON/CSV with an embedded (JSON) or sidecar
(CSV) run manifest recording the command, full parameter set, library
version, wall time, and solver metadata. Exit codes: 0 success, 2 bad
usage or configuration, 3 numerical failure.

numpy is imported lazily so the thread count can be pinned (--threads or
STEKLOV_THREADS) before the BLAS runtime starts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
               "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS")

SHAPE_NAMES = ("disk", "ellipse", "kite", "omega_A", "omega_B", "square",
               "L_shape", "isoceles_triangle", "semicircle_mixed", "annulus")


def _configure_threads(argv) -> None:
    """Pin BLAS threads before numpy loads; flag beats environment."""
    n = os.environ.get("STEKLOV_THREADS")
    for i, tok in enumerate(argv):
        if tok == "--threads" and i + 1 < len(argv):
            n = argv[i + 1]
        elif tok.startswith("--threads="):
            n = tok.split("=", 1)[1]
    if n is not None:
        for var in THREAD_VARS:
            os.environ[var] = str(n)


def _add_shape_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("shape")
    g.add_argument("--shape", choices=SHAPE_NAMES)
    g.add_argument("--shape-config", help="JSON file: named/fourier/polygon shape")
    g.add_argument("--R", type=float, help="disk/semicircle radius")
    g.add_argument("--a", type=float, help="ellipse semi-axis")
    g.add_argument("--b", type=float, help="ellipse semi-axis")
    g.add_argument("--kappa", type=float, help="kite parameter")
    g.add_argument("--side", type=float, help="square side length")
    g.add_argument("--Rout", type=float, help="annulus outer radius")
    g.add_argument("--eps", type=float, help="annulus inner radius")


def _resolve_shape(args):
    from .geometry import GeometryError, load_shape, make_named_shape

    if args.shape_config:
        return load_shape(args.shape_config)
    if not args.shape:
        raise GeometryError("provide --shape or --shape-config")
    params = {}
    for flag, key in (("R", "R"), ("a", "a"), ("b", "b"), ("kappa", "kappa"),
                      ("side", "side"), ("Rout", "R_out"), ("eps", "eps")):
        val = getattr(args, flag, None)
        if val is not None:
            params[key] = val
    return make_named_shape(args.shape, params)


def _manifest(args, wall: float, solver_meta: dict) -> dict:
    from . import __version__

    params = {k: v for k, v in vars(args).items() if k != "func"}
    return {"command": args.command, "parameters": params,
            "version": __version__, "wall_time_s": wall,
            "solver": solver_meta}


def _emit_json(payload: dict, out) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def _write_csv_with_manifest(path, header, rows, manifest) -> None:
    import csv

    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)
    with open(str(path) + ".manifest.json", "w") as f:
        json.dump(manifest, f, indent=2)


def _fmt(v) -> str:
    import numpy as np

    return "-inf" if v == -np.inf else repr(float(v))


def _solve_args(curve, args):
    from .mesh import make_discretization
    from .operators import assemble
    from .solver import solve_bio, solve_biomod

    disc_params = {"N": args.N, "p": args.p}
    if args.method == "bio":
        disc = make_discretization(curve, disc_params)
        return solve_bio(assemble(curve, disc, args.mu))
    return solve_biomod(curve, disc_params, args.mu, tol=args.tol,
                        full_probe=args.full_probe)


# ---------------------------------------------------------------------------
# commands

def cmd_spectrum(args) -> int:
    curve = _resolve_shape(args)
    t0 = time.perf_counter()
    spec = _solve_args(curve, args)
    wall = time.perf_counter() - t0
    meta = {"N": spec.metadata.get("N"), "p": spec.metadata.get("p"),
            "tol": spec.tol, "ell": spec.rank_deficiency}
    payload = {"manifest": _manifest(args, wall, meta),
               "spectrum": json.loads(spec.to_json())}
    _emit_json(payload, args.out)
    return 0


def cmd_convergence(args) -> int:
    import numpy as np

    from .reference import DiskSpectrumQuery, disk_spectrum, square_spectrum
    from .solver import mre, solve_biomod

    curve = _resolve_shape(args)
    n_list = [int(s) for s in args.N_list.split(",")]
    t0 = time.perf_counter()

    if args.reference == "oracle":
        if curve.name == "disk":
            ref = disk_spectrum(DiskSpectrumQuery(
                mu=args.mu, count=args.Q, radius=args.R or 1.0))
        elif curve.name == "square":
            ref = square_spectrum(args.side or np.pi, args.mu, args.Q)
        else:
            print(f"no oracle for shape {curve.name!r}; use --reference finegrid",
                  file=sys.stderr)
            return 2
    else:
        fine = solve_biomod(curve, {"N": args.finegrid_N, "p": args.p},
                            args.mu, tol=args.tol)
        ref = fine.eigenvalues[:args.Q]
    if len(ref) < args.Q:
        print("Q exceeds available reference eigenvalues", file=sys.stderr)
        return 2

    rows = []
    for n in n_list:
        spec = solve_biomod(curve, {"N": n, "p": args.p}, args.mu, tol=args.tol)
        if len(spec.eigenvalues) < args.Q:
            print(f"Q={args.Q} exceeds the {len(spec.eigenvalues)} eigenvalues "
                  f"computed at N={n}", file=sys.stderr)
            return 2
        rows.append([n, repr(mre(spec.eigenvalues, ref, args.Q))])
    wall = time.perf_counter() - t0
    meta = {"N": n_list, "p": args.p, "tol": args.tol, "ell": None}
    _write_csv_with_manifest(args.out, ["N", f"mre_{args.Q}"], rows,
                             _manifest(args, wall, meta))
    return 0


def cmd_sweep(args) -> int:
    import numpy as np

    from .solver import solve_biomod

    curve = _resolve_shape(args)
    if args.mu_list:
        mus = [float(s) for s in args.mu_list.split(",")]
    else:
        mus = [float(v) for v in
               np.linspace(args.mu_start, args.mu_stop, args.mu_count)]
    t0 = time.perf_counter()
    rows = []
    for m in mus:
        spec = solve_biomod(curve, {"N": args.N, "p": args.p}, m, tol=args.tol)
        rows.append([repr(m)] + [_fmt(v) for v in spec.eigenvalues[:args.count]])
    wall = time.perf_counter() - t0
    header = ["mu"] + [f"sigma_{k}" for k in range(1, args.count + 1)]
    meta = {"N": args.N, "p": args.p, "tol": args.tol, "ell": None}
    _write_csv_with_manifest(args.out, header, rows, _manifest(args, wall, meta))
    return 0


def cmd_functional(args) -> int:
    from .functionals import F, G, evaluate_functional

    spec = F(args.k) if args.F else G(args.k)
    curve = _resolve_shape(args)
    t0 = time.perf_counter()
    val = evaluate_functional(spec, curve, args.mu,
                              {"N": args.N, "p": args.p, "tol": args.tol})
    wall = time.perf_counter() - t0
    print(repr(val))
    if args.out:
        meta = {"N": args.N, "p": args.p, "tol": args.tol, "ell": 0}
        payload = {"manifest": _manifest(args, wall, meta),
                   "functional": spec.name, "value": repr(val)}
        _emit_json(payload, args.out)
    return 0


def _parse_grid(text: str):
    import numpy as np

    if ":" in text:
        start, stop, count = text.split(":")
        return np.linspace(float(start), float(stop), int(count))
    return np.array([float(s) for s in text.split(",")])


def cmd_annulus(args) -> int:
    from .functionals import annulus_sweep

    eps = _parse_grid(args.eps_grid)
    mus = _parse_grid(args.mu_grid)
    t0 = time.perf_counter()
    table = annulus_sweep(eps, mus, k=args.k,
                          solver_params={"N": args.N, "tol": args.tol})
    wall = time.perf_counter() - t0
    sign_path = args.sign_out or str(args.out) + ".signs.csv"
    table.write_csv(args.out, sign_path)
    meta = {"N": args.N, "p": None, "tol": args.tol, "ell": None}
    with open(str(args.out) + ".manifest.json", "w") as f:
        json.dump(_manifest(args, wall, meta), f, indent=2)
    return 0


def cmd_optimize(args) -> int:
    from .functionals import F, G
    from .swarm import SwarmConfig, optimize_shape, write_artifacts

    fam, k = args.objective[0], int(args.objective[1:])
    spec = F(k) if fam == "F" else G(k)
    config = SwarmConfig(objective=spec, mu=args.mu, n_modes=args.n_modes,
                         particles=args.particles, iterations=args.iterations,
                         direction=args.direction, seed=args.seed,
                         search_n=args.search_N, final_n=args.final_N)
    t0 = time.perf_counter()
    result = optimize_shape(config)
    wall = time.perf_counter() - t0
    meta = {"N": args.search_N, "p": None, "tol": None, "ell": None}
    payload = {
        "manifest": _manifest(args, wall, meta),
        "config": payload_config(config),
        "history": [repr(float(h)) for h in result.history],
        "best_shape": result.best_shape.to_dict(),
        "best_value": repr(float(result.best_value)),
        "refined_value": repr(float(result.refined_value)),
    }
    _emit_json(payload, args.out)
    if args.csv_out:
        import csv

        with open(args.csv_out, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["iteration", "best_value"])
            for i, h in enumerate(result.history):
                w.writerow([i, repr(float(h))])
    return 0


def payload_config(config) -> dict:
    from dataclasses import asdict

    return asdict(config)


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="steklov",
        description="Boundary-integral Steklov-Helmholtz eigenvalue tools")
    ap.add_argument("--threads", type=int, help="BLAS/OpenMP thread count")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="solve one eigenvalue problem")
    _add_shape_args(p)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--N", type=int, default=256)
    p.add_argument("--p", type=float, default=6.0)
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--method", choices=("bio", "biomod"), default="biomod")
    p.add_argument("--full-probe", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("convergence", help="MRE_Q versus N")
    _add_shape_args(p)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--N-list", required=True, help="comma-separated N values")
    p.add_argument("--Q", type=int, default=16)
    p.add_argument("--reference", choices=("oracle", "finegrid"),
                   default="oracle")
    p.add_argument("--finegrid-N", type=int, default=2048)
    p.add_argument("--p", type=float, default=6.0)
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("sweep", help="eigenvalues over a wavenumber grid")
    _add_shape_args(p)
    p.add_argument("--mu-list", help="comma-separated wavenumbers")
    p.add_argument("--mu-start", type=float)
    p.add_argument("--mu-stop", type=float)
    p.add_argument("--mu-count", type=int)
    p.add_argument("--count", type=int, default=10, help="eigenvalues per row")
    p.add_argument("--N", type=int, default=256)
    p.add_argument("--p", type=float, default=6.0)
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("functional", help="scale-invariant functional value")
    _add_shape_args(p)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--F", action="store_true", help="area-scaled family")
    grp.add_argument("--G", action="store_true", help="perimeter-scaled family")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--N", type=int, default=480)
    p.add_argument("--p", type=float, default=6.0)
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--out")
    p.set_defaults(func=cmd_functional)

    p = sub.add_parser("annulus", help="F_k sweep over inner radius and mu")
    p.add_argument("--k", type=int, choices=(1, 2), default=1)
    p.add_argument("--mu", dest="mu_grid", required=True,
                   help="grid: start:stop:count or comma list")
    p.add_argument("--eps", dest="eps_grid", required=True,
                   help="grid: start:stop:count or comma list")
    p.add_argument("--N", type=int, default=256)
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--out", required=True)
    p.add_argument("--sign-out")
    p.set_defaults(func=cmd_annulus)

    p = sub.add_parser("optimize", help="particle-swarm shape search")
    p.add_argument("--objective", required=True,
                   help="functional id, e.g. F2 or G1")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--particles", type=int, default=40)
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--n-modes", type=int, default=4)
    p.add_argument("--direction", choices=("max", "min"), default="max")
    p.add_argument("--search-N", type=int, default=256)
    p.add_argument("--final-N", type=int, default=1024)
    p.add_argument("--out")
    p.add_argument("--csv-out")
    p.set_defaults(func=cmd_optimize)

    return ap


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    _configure_threads(argv)
    parser = _build_parser()
    args = parser.parse_args(argv)

    from .functionals import FunctionalError
    from .geometry import GeometryError
    from .mesh import MeshError
    from .operators import AssemblyError
    from .reference import OracleError
    from .solver import SolverError
    from .swarm import SwarmError

    try:
        return args.func(args)
    except (GeometryError, MeshError, SwarmError, ValueError, KeyError,
            FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, AssemblyError, OracleError, FunctionalError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
