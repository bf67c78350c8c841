"""Batch CLI for symbol analysis, kernel construction, propagation and
wavefront verification.

Usage:
    quadprop analyze --example heat
    quadprop flow --example harmonic_oscillator --t-list 0.1,0.7
    quadprop weights --example heat --t-list 0.5,1
    quadprop kernel --example heat --t 1
    quadprop propagate --example heat --data delta --t 0.5
    quadprop wavefront --example heat --data constant --t 1 --out wf.csv
    quadprop verify --example free_schrodinger --data delta --t 0.5

Exit codes: 0 success (verify: theorem holds), 1 verify failure,
2 invalid input, 3 cross-check failure, 4 kernel diagnostic failure.
"""

import argparse
import json
import sys

import numpy as np

from . import report
from .catalog import CATALOG_NAMES, catalog_symbol
from .fbi import egorov_symbol, fbi_transform_gaussian, standard_phase, weight_of_phase
from .gaussians import GaussianData
from .propagator import apply_kernel, bergman_kernel, compose_kernels, evolve_weight
from .symplectic import (CrossCheckError, hamilton_flow, hamilton_matrix,
                         singular_space, symplectic_unit)
from .wavefront import radical, verify_theorem, wavefront_report

EXIT_INVALID = 2
EXIT_CROSSCHECK = 3
EXIT_DIAGNOSTIC = 4


class InputError(ValueError):
    """Invalid user input (exit code 2)."""


def _load_symbol(args):
    try:
        if args.example:
            return catalog_symbol(args.example, kfp_a=args.kfp_a)
        if args.symbol:
            with open(args.symbol) as fh:
                doc = json.load(fh)
            from .symplectic import build_symbol
            return build_symbol(int(doc["n"]), doc["Q_re"], doc["Q_im"])
    except (KeyError, OSError, ValueError, TypeError, json.JSONDecodeError) as e:
        raise InputError(str(e))
    raise InputError("one of --example or --symbol is required")


def _load_data(args, n):
    try:
        if args.data in ("delta", "constant"):
            return GaussianData(args.data, n)
        if args.data_json:
            with open(args.data_json) as fh:
                return GaussianData.from_dict(json.load(fh), n)
        return GaussianData("gaussian", n, G=np.eye(n))
    except (KeyError, OSError, ValueError, TypeError, json.JSONDecodeError) as e:
        raise InputError(str(e))


def _parse_t_list(s):
    try:
        ts = [float(x) for x in s.split(",") if x != ""]
    except ValueError:
        raise InputError("bad --t-list %r" % (s,))
    if not ts or any(t < 0 for t in ts):
        raise InputError("t values must be nonnegative")
    return ts


def _emit(args, text):
    if args.out and not args.out.endswith(".csv"):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_analyze(args):
    q = _load_symbol(args)
    F = hamilton_matrix(q)
    S = singular_space(q)
    doc = {
        "n": q.n,
        "Q": report.matrix_entry(q.Q),
        "F": report.matrix_entry(F.F),
        "re_nonneg": q.re_nonneg,
        "singular_space_dim": S.dim,
        "singular_space_basis": S.basis.tolist(),
        "cross_check": "ok",
    }
    _emit(args, report.dumps(doc))
    return 0


def cmd_flow(args):
    q = _load_symbol(args)
    J = symplectic_unit(q.n)
    flows = []
    for t in _parse_t_list(args.t_list or str(args.t)):
        K = hamilton_flow(q, t)
        res = float(np.linalg.norm(K.K.T @ J @ K.K - J))
        flows.append({"t": t, "K": report.matrix_entry(K.K),
                      "symplectic_residual": res})
    _emit(args, report.dumps({"flows": flows, "n": q.n}))
    return 0


def cmd_weights(args):
    q = _load_symbol(args)
    phi = standard_phase(q.n)
    w0 = weight_of_phase(phi)
    qt = egorov_symbol(q, phi)
    entries = []
    for t in _parse_t_list(args.t_list or str(args.t)):
        wt = evolve_weight(w0, qt, t)
        diff = w0.real_form() - wt.real_form()
        entries.append({
            "t": t,
            "P": report.matrix_entry(wt.P),
            "H": report.matrix_entry(wt.H),
            "monotonicity_min_eig": float(np.linalg.eigvalsh((diff + diff.T) / 2).min()),
            "radical_dim": radical(w0, wt).dim,
        })
    _emit(args, report.dumps({"weights": entries, "n": q.n}))
    return 0


def cmd_kernel(args):
    q = _load_symbol(args)
    phi = standard_phase(q.n)
    w0 = weight_of_phase(phi)
    qt = egorov_symbol(q, phi)
    t = args.t
    kernel = bergman_kernel(w0, qt, t)
    half = bergman_kernel(w0, qt, t / 2)
    comp = compose_kernels(half, half)
    semi = max(comp.phase.block_distance(kernel.phase), abs(comp.amp - kernel.amp))
    doc = {
        "t": t,
        "amp_re": kernel.amp.real,
        "amp_im": kernel.amp.imag,
        "P": report.matrix_entry(kernel.phase.Pt),
        "Q": report.matrix_entry(kernel.phase.Qt),
        "R": report.matrix_entry(kernel.phase.Rt),
        "diagnostics": {
            "psd_min": kernel.diagnostics["psd_min"],
            "t0_residual": kernel.diagnostics["t0_residual"],
            "semigroup_residual": float(semi),
        },
    }
    if semi > 1e-8:
        raise CrossCheckError("kernel semigroup residual %.3e" % semi)
    _emit(args, report.dumps(doc))
    return 0


def cmd_propagate(args):
    q = _load_symbol(args)
    phi = standard_phase(q.n)
    w0 = weight_of_phase(phi)
    qt = egorov_symbol(q, phi)
    data = _load_data(args, q.n)
    u = fbi_transform_gaussian(phi, data)
    kernel = bergman_kernel(w0, qt, args.t)
    gu = apply_kernel(kernel, u)
    doc = {
        "t": args.t,
        "input": {"alpha": complex(u.alpha), "g": report.matrix_entry(u.g),
                  "l": report.matrix_entry(u.l.reshape(1, -1))},
        "output": {"alpha": complex(gu.alpha), "g": report.matrix_entry(gu.g),
                   "l": report.matrix_entry(gu.l.reshape(1, -1))},
    }
    _emit(args, report.dumps(doc))
    return 0


def cmd_wavefront(args):
    q = _load_symbol(args)
    phi = standard_phase(q.n)
    w0 = weight_of_phase(phi)
    qt = egorov_symbol(q, phi)
    data = _load_data(args, q.n)
    u = fbi_transform_gaussian(phi, data)
    if args.t > 0:
        u = apply_kernel(bergman_kernel(w0, qt, args.t), u)
    rep = wavefront_report(u, w0, grid_density=args.grid)
    rows = report.direction_rows(rep.directions, rep.exponents, rep.flags)
    if args.out:
        header = []
        for k in range(q.n):
            header.extend(["omega%d_re" % k, "omega%d_im" % k])
        header.extend(["exponent", "flag"])
        report.write_csv(args.out, header, rows)
    doc = {
        "t": args.t,
        "threshold": rep.threshold,
        "directions": [report.matrix_entry(np.asarray(d).reshape(1, -1))
                       for d in rep.directions],
        "exponents": rep.exponents,
        "flags": rep.flags,
    }
    sys.stdout.write(report.dumps(doc) + "\n")
    return 0


def cmd_verify(args):
    q = _load_symbol(args)
    phi = standard_phase(q.n)
    data = _load_data(args, q.n)
    passed, rep = verify_theorem(q, phi, data, args.t, grid_density=args.grid,
                                 angular_tol=args.tol)
    if args.out:
        header = []
        for k in range(q.n):
            header.extend(["omega%d_re" % k, "omega%d_im" % k])
        header.extend(["exponent", "flag"])
        rows = report.direction_rows(
            rep["measured"] + rep["predicted"],
            [0.0] * (len(rep["measured"]) + len(rep["predicted"])),
            [True] * (len(rep["measured"]) + len(rep["predicted"])))
        report.write_csv(args.out, header, rows)
    doc = {
        "passed": passed,
        "t": args.t,
        "measured": [report.matrix_entry(np.asarray(d).reshape(1, -1))
                     for d in rep["measured"]],
        "predicted": [report.matrix_entry(np.asarray(d).reshape(1, -1))
                      for d in rep["predicted"]],
    }
    sys.stdout.write(report.dumps(doc) + "\n")
    return 0 if passed else 1


COMMANDS = {
    "analyze": cmd_analyze,
    "flow": cmd_flow,
    "weights": cmd_weights,
    "kernel": cmd_kernel,
    "propagate": cmd_propagate,
    "wavefront": cmd_wavefront,
    "verify": cmd_verify,
}


def build_parser():
    p = argparse.ArgumentParser(prog="quadprop",
                                description="Quadratic semigroups in Bergman form")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--example", choices=CATALOG_NAMES)
        sp.add_argument("--symbol", help="path to a symbol JSON file")
        sp.add_argument("--t", type=float, default=0.0)
        sp.add_argument("--t-list", dest="t_list")
        sp.add_argument("--grid", type=int, default=64)
        sp.add_argument("--tol", type=float, default=1e-3)
        sp.add_argument("--out")
        sp.add_argument("--kfp-a", dest="kfp_a", type=float, default=1.0)
        sp.add_argument("--data", default="delta",
                        choices=("delta", "constant", "gaussian"))
        sp.add_argument("--data-json", dest="data_json")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InputError as e:
        sys.stderr.write("invalid input: %s\n" % e)
        return EXIT_INVALID
    except CrossCheckError as e:
        sys.stderr.write("cross-check failure: %s\n" % e)
        return EXIT_CROSSCHECK if args.command == "analyze" else EXIT_DIAGNOSTIC
    except (ValueError, RuntimeError) as e:
        sys.stderr.write("diagnostic failure: %s\n" % e)
        return EXIT_DIAGNOSTIC


if __name__ == "__main__":
    sys.exit(main())
