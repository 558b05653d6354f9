"""Command-line entry point: ``ergodic-epr <subcommand> [options]``.

Artifacts go to ``--output`` (``-`` for stdout), or to
``$ERGODIC_EPR_OUTPUT_DIR/<subcommand>.<format>`` when that variable is
set. A one-line summary is printed to stdout (stderr when the artifact
itself goes to stdout). Failures print a JSON error object to stderr and
exit with 2 (bad input), 3 (resource cap) or 4 (numerical invariant
violated).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .dynamics import default_t0, krylov_gram, return_probability
from .entanglement import MAX_DIRECT_ENTRIES, ProtocolConfig, purity_report
from .errors import ErgodicEPRError, InvariantViolationError, ResourceLimitError
from .experiments import capacity_comparison, ramp_scan, run_purity_sweep
from .multicharge import multicharge_gram
from .entanglement import eta2, purity_from_gram
from .spectra import (
    diagonalize_hermitian,
    heisenberg_time,
    picket_fence_spectrum,
    sample_spectrum,
    spacing_ratio_statistic,
    unfold,
)
from .states import (
    coherent_gibbs_state,
    flat_state,
    gaussian_wavepacket,
    haar_random_state,
    profile_in_eigenbasis,
)
from .svg import emit_svg
from .transfer import bhatia_davis_check, gaussian_tail_ratio, transfer_diagnostics

OUTPUT_DIR_ENV = "ERGODIC_EPR_OUTPUT_DIR"
ROUTE_TOL = 1e-8
SUBCOMMANDS = ("spectrum", "purity", "sweep", "transfer", "ramp", "capacity", "multicharge")


class CLIError(Exception):
    def __init__(self, message, exit_code=2, kind="UsageError"):
        super().__init__(message)
        self.exit_code = exit_code
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError(message, 2, "UsageError")


def _read_text(path):
    return Path(path).read_text()


# shared option groups

def _add_output(p, formats, default):
    p.add_argument("-o", "--output", help="output path, '-' for stdout")
    p.add_argument("--format", choices=formats, default=default)


def _add_state_options(p):
    p.add_argument("--ensemble", default="gue",
                   choices=["gue", "poisson", "picket_fence", "custom"])
    p.add_argument("--d-b", type=int, default=64, dest="d_B")
    p.add_argument("--spacing", type=float, default=1.0, help="picket-fence spacing")
    p.add_argument("--spectrum-file", help="custom spectrum (.csv or .json)")
    p.add_argument("--hamiltonian-file", help="custom Hamiltonian matrix (.npy)")
    p.add_argument("--state-file", help="computational-basis state for --hamiltonian-file (.npy)")
    p.add_argument("--profile", default="flat",
                   choices=["flat", "gaussian", "gibbs", "haar_random", "custom"])
    p.add_argument("--profile-file", help="custom profile (.csv or .json)")
    p.add_argument("--E0", type=float, help="gaussian centre (default: mid-spectrum)")
    p.add_argument("--sigma", type=float, help="gaussian width (default: width / 8)")
    p.add_argument("--beta", type=float, help="gibbs inverse temperature (default: 2 / width)")
    p.add_argument("--seed", type=int, default=0)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--unfold", dest="unfold", action="store_true", default=None)
    g.add_argument("--no-unfold", dest="unfold", action="store_false")
    p.add_argument("--d-a", type=int, default=4, dest="d_A")
    p.add_argument("--t0", default="auto",
                   help="evolution step: a number, 'auto' or 'auto-exact'")


def build_parser():
    parser = _Parser(prog="ergodic-epr", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=1, help="worker cap for sweeps")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="sample and characterize a spectrum")
    p.add_argument("--ensemble", default="gue", choices=["gue", "poisson", "picket_fence"])
    p.add_argument("--d-b", type=int, default=256, dest="d_B")
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unfold", action="store_true")
    _add_output(p, ["csv", "json", "svg"], "json")

    p = sub.add_parser("purity", help="purity of the protocol state by all routes")
    _add_state_options(p)
    p.add_argument("--alphas", type=int, nargs="*", default=[3, 4])
    p.add_argument("--direct", choices=["auto", "always", "never"], default="auto")
    p.add_argument("--max-entries", type=int, default=MAX_DIRECT_ENTRIES)
    _add_output(p, ["csv", "json", "svg"], "json")

    p = sub.add_parser("sweep", help="ensemble-averaged purity sweep from a JSON config")
    p.add_argument("--config", required=True)
    _add_output(p, ["csv", "json", "svg"], "csv")

    p = sub.add_parser("transfer", help="operator-transfer diagnostics of the Gram matrix")
    _add_state_options(p)
    p.add_argument("--gram-file", help="read the Gram matrix from JSON instead")
    _add_output(p, ["csv", "json", "svg"], "json")

    p = sub.add_parser("ramp", help="ensemble-averaged spectral form factor")
    p.add_argument("--ensemble", default="gue", choices=["gue", "poisson", "picket_fence"])
    p.add_argument("--d-b", type=int, default=256, dest="d_B")
    p.add_argument("--n-real", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-max", type=float, default=5.0, help="in units of t_H")
    p.add_argument("--n-t", type=int, default=200)
    p.add_argument("--fit-lo", type=float, default=0.1, help="in units of t_H")
    p.add_argument("--fit-hi", type=float, default=0.5, help="in units of t_H")
    p.add_argument("--logx", action="store_true")
    p.add_argument("--logy", action="store_true")
    _add_output(p, ["csv", "json", "svg"], "csv")

    p = sub.add_parser("capacity", help="minimal d_B for faithful operator transfer")
    p.add_argument("--d-a", type=int, nargs="+", required=True, dest="d_A")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=0.0)
    _add_output(p, ["csv", "json", "svg"], "csv")

    p = sub.add_parser("multicharge", help="purity for several commuting charges")
    p.add_argument("--charges", required=True, help="ChargeSet JSON {qA, QB}")
    p.add_argument("--profile", default="flat", choices=["flat", "haar_random", "custom"])
    p.add_argument("--profile-file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t0", type=float, required=True)
    _add_output(p, ["json"], "json")
    return parser


# state construction

def _load_spectrum_file(path):
    text = _read_text(path)
    if str(path).endswith(".json"):
        return io.spectrum_from_json(json.loads(text))
    return io.spectrum_from_csv(text)


def _load_profile_file(path):
    text = _read_text(path)
    if str(path).endswith(".json"):
        return io.profile_from_json(json.loads(text))
    return io.profile_from_csv(text)


def _build_state(args):
    """Return (spectrum, profile) after optional unfolding."""
    profile = None
    if args.hamiltonian_file:
        s, basis = diagonalize_hermitian(np.load(args.hamiltonian_file))
        if args.state_file:
            profile = profile_in_eigenbasis(np.load(args.state_file), basis)
    elif args.spectrum_file or args.ensemble == "custom":
        if not args.spectrum_file:
            raise CLIError("--ensemble custom needs --spectrum-file or --hamiltonian-file")
        s = _load_spectrum_file(args.spectrum_file)
    elif args.ensemble == "picket_fence":
        s = picket_fence_spectrum(args.d_B, args.spacing)
    else:
        s = sample_spectrum(args.ensemble, args.d_B, args.seed)
    do_unfold = args.unfold if args.unfold is not None else s.ensemble != "custom"
    if do_unfold and s.d_B >= 2:
        s = unfold(s)
    if profile is None:
        profile = _make_profile(args, s)
    return s, profile


def _make_profile(args, s):
    width = s.width if s.width > 0 else 1.0
    if args.profile == "flat":
        return flat_state(s.d_B)
    if args.profile == "haar_random":
        return haar_random_state(s.d_B, args.seed + 1)
    if args.profile == "gaussian":
        E0 = args.E0 if args.E0 is not None else 0.5 * (s.energies[0] + s.energies[-1])
        sigma = args.sigma if args.sigma is not None else width / 8
        return gaussian_wavepacket(s, E0, sigma)
    if args.profile == "gibbs":
        beta = args.beta if args.beta is not None else 2.0 / width
        return coherent_gibbs_state(s, beta)
    if not args.profile_file:
        raise CLIError("--profile custom needs --profile-file")
    return _load_profile_file(args.profile_file)


def _resolve_t0(args, s):
    if args.t0 == "auto-exact" and s.ensemble == "picket_fence":
        return 2 * math.pi / (s.d_B * s.mean_spacing) if s.d_B > 1 else 2 * math.pi
    if args.t0 in ("auto", "auto-exact"):
        return default_t0(s, args.d_A)
    try:
        t0 = float(args.t0)
    except ValueError:
        raise CLIError(f"--t0 must be a number, 'auto' or 'auto-exact', got {args.t0!r}")
    if not t0 > 0:
        raise CLIError("--t0 must be positive")
    return t0


def _config_dict(args, s, t0):
    return {"ensemble": s.ensemble, "profile": args.profile, "d_A": args.d_A,
            "d_B": s.d_B, "t0": t0, "seed": args.seed, "unfolded": s.unfolded}


# subcommands; each returns (artifact text, summary line, exit code)

def cmd_spectrum(args):
    if args.ensemble == "picket_fence":
        s = picket_fence_spectrum(args.d_B, args.spacing)
    elif args.ensemble == "poisson":
        from .spectra import sample_poisson_spectrum
        s = sample_poisson_spectrum(args.d_B, args.spacing, args.seed)
    else:
        s = sample_spectrum(args.ensemble, args.d_B, args.seed)
    if args.unfold:
        s = unfold(s)
    tH = heisenberg_time(s) if s.d_B >= 2 else float("nan")
    r = spacing_ratio_statistic(s) if s.d_B >= 3 else float("nan")
    if args.format == "csv":
        text = io.spectrum_to_csv(s)
    elif args.format == "json":
        text = io.dumps(io.spectrum_to_json(s))
    else:
        text = emit_svg([list(enumerate(s.energies.tolist()))], [s.ensemble],
                        xlabel="level index", ylabel="energy")
    return text, f"spectrum ensemble={s.ensemble} d_B={s.d_B} t_H={tH:.12g} r={r:.6f}", 0


def cmd_purity(args):
    s, phi = _build_state(args)
    t0 = _resolve_t0(args, s)
    cfg = ProtocolConfig(args.d_A, t0, s, phi)
    if args.direct == "always" and args.d_A * s.d_B > args.max_entries:
        raise ResourceLimitError(
            f"direct route needs {args.d_A * s.d_B} amplitudes, cap is {args.max_entries}")
    rep = purity_report(cfg, alphas=args.alphas, direct=args.direct != "never",
                        max_entries=args.max_entries)
    if rep.max_discrepancy > ROUTE_TOL:
        raise InvariantViolationError(
            f"purity routes disagree by {rep.max_discrepancy:.3g}")
    d = rep.as_dict()
    if args.format == "json":
        d["config"] = _config_dict(args, s, t0)
        text = io.dumps(d)
    elif args.format == "csv":
        text = io._csv_text(
            ("ensemble", "profile", "d_A", "d_B", "t0", "purity_formula", "purity_direct",
             "purity_gram", "eta2", "max_discrepancy"),
            [(s.ensemble, args.profile, args.d_A, s.d_B, io._f(t0), io._f(rep.purity_formula),
              io._f(rep.purity_direct), io._f(rep.purity_gram), io._f(rep.eta2),
              io._f(rep.max_discrepancy))])
    else:
        taus = np.arange(1, max(args.d_A, 2))
        p = return_probability(s, phi, taus * t0)
        text = emit_svg([list(zip(taus.tolist(), np.atleast_1d(p).tolist()))], ["p(tau t0)"],
                        logy=True, xlabel="tau", ylabel="return probability")
    summary = (f"purity={rep.purity_formula:.12f} eta2={rep.eta2:.6g} "
               f"1/d_A={1 / args.d_A:.12f} discrepancy={rep.max_discrepancy:.3g}")
    return text, summary, 0


def cmd_sweep(args):
    try:
        config = json.loads(_read_text(args.config))
    except json.JSONDecodeError as exc:
        raise CLIError(f"config is not valid JSON: {exc}")
    spec = io.sweep_spec_from_json(config)
    result = run_purity_sweep(spec, max_workers=max(1, args.threads))
    if args.format == "csv":
        text = io.sweep_to_csv(result)
    elif args.format == "json":
        text = io.dumps({"rows": [dict(zip(r.__dataclass_fields__, _row_values(r)))
                                  for r in result.rows]})
    else:
        series, labels = [], []
        for e in spec.ensembles:
            for pr in spec.profiles:
                for d_A in spec.d_A_list:
                    pts = [(r.d_B, r.excess_times_dB) for r in result.rows
                           if (r.ensemble, r.profile, r.d_A) == (e, pr, d_A) and r.error is None]
                    if pts:
                        series.append(pts)
                        labels.append(f"{e}/{pr}/d_A={d_A}")
        text = emit_svg(series, labels, logx=True, xlabel="d_B",
                        ylabel="(purity - 1/d_A) d_B")
    errors = [r for r in result.rows if r.error]
    code = 4 if any(r.error.startswith("InvariantViolationError") for r in errors) else 0
    summary = f"sweep rows={len(result.rows)} errors={len(errors)}"
    return text, summary, code


def _row_values(r):
    return [getattr(r, f) for f in r.__dataclass_fields__]


def cmd_transfer(args):
    if args.gram_file:
        G = io.gram_from_json(json.loads(_read_text(args.gram_file)))
        config = {"gram_file": str(args.gram_file)}
    else:
        s, phi = _build_state(args)
        t0 = _resolve_t0(args, s)
        G = krylov_gram(s, phi, t0, args.d_A)
        config = _config_dict(args, s, t0)
    diag = transfer_diagnostics(G)
    holds, slack = bhatia_davis_check(diag)
    if not holds:
        raise InvariantViolationError(f"Bhatia-Davis bound violated by {-slack:.3g}")
    if args.format == "json":
        d = diag.as_dict()
        d.update(bhatia_davis_holds=holds, bhatia_davis_slack=slack,
                 gaussian_tail_ratio=list(gaussian_tail_ratio(diag)), config=config)
        text = io.dumps(d)
    elif args.format == "csv":
        text = io._csv_text(("k", "r_k"), ((k, io._f(r)) for k, r in enumerate(diag.gram_eigenvalues)))
    else:
        text = emit_svg([list(enumerate(diag.gram_eigenvalues.tolist()))], ["r_k"],
                        xlabel="k", ylabel="Gram eigenvalue")
    summary = (f"worst_case_error={diag.worst_case_error:.6g} eta2={diag.eta2:.6g} "
               f"bhatia_davis={'ok' if holds else 'violated'}")
    return text, summary, 0


def cmd_ramp(args):
    # grid in units of t_H of the unfolded spectrum (t_H = 2 pi)
    tH_unf = 2 * math.pi
    t = np.linspace(0.0, args.t_max * tH_unf, args.n_t)
    scan = ramp_scan(args.ensemble, args.d_B, t, args.n_real, args.seed)
    fit = None
    try:
        f = scan.fit(args.fit_lo * scan.heisenberg_time, args.fit_hi * scan.heisenberg_time)
        fit = {"slope": f.slope, "intercept": f.intercept, "scaled_slope": f.scaled_slope,
               "n_points": f.n_points, "t_lo": args.fit_lo * scan.heisenberg_time,
               "t_hi": args.fit_hi * scan.heisenberg_time}
    except ErgodicEPRError:
        pass
    if args.format == "csv":
        text = io._csv_text(("t", "mean_sff", "sem_sff"),
                            ((io._f(a), io._f(b), io._f(c))
                             for a, b, c in zip(scan.times, scan.mean_sff, scan.sem_sff)))
    elif args.format == "json":
        text = io.dumps({"ensemble": args.ensemble, "d_B": args.d_B, "n_real": args.n_real,
                         "heisenberg_time": scan.heisenberg_time, "times": scan.times.tolist(),
                         "mean_sff": scan.mean_sff.tolist(), "sem_sff": scan.sem_sff.tolist(),
                         "fit": fit})
    else:
        text = emit_svg([scan.rows()], [f"{args.ensemble} d_B={args.d_B}"],
                        logx=args.logx, logy=args.logy, xlabel="t", ylabel="K(t)",
                        vlines=[(scan.heisenberg_time, "t_H")])
    slope = "nan" if fit is None else f"{fit['scaled_slope']:.6g}"
    return text, f"ramp t_H={scan.heisenberg_time:.12g} scaled_slope={slope}", 0


def cmd_capacity(args):
    rows = capacity_comparison(args.d_A, args.epsilon, args.gamma, args.kappa)
    if args.format == "csv":
        text = io.capacity_to_csv(rows)
    elif args.format == "json":
        text = io.dumps({"rows": [r.__dict__ for r in rows]})
    else:
        series, labels = [], []
        for case in dict.fromkeys(r.case for r in rows):
            series.append([(r.d_A, r.min_dB) for r in rows if r.case == case])
            labels.append(case)
        text = emit_svg(series, labels, logx=True, logy=True, xlabel="d_A", ylabel="min d_B")
    summary = " ".join(f"{r.case}[{r.d_A}]={r.min_dB:.6g}" for r in rows)
    return text, summary, 0


def cmd_multicharge(args):
    from .states import custom_state

    charges = io.chargeset_from_json(json.loads(_read_text(args.charges)))
    if args.profile == "flat":
        phi = flat_state(charges.d_B)
    elif args.profile == "haar_random":
        phi = haar_random_state(charges.d_B, args.seed)
    else:
        if not args.profile_file:
            raise CLIError("--profile custom needs --profile-file")
        phi = custom_state(_load_profile_file(args.profile_file).amplitudes)
    G = multicharge_gram(charges, phi, args.t0)
    p, e = purity_from_gram(G), eta2(G)
    text = io.dumps({"d_A": charges.d_A, "d_B": charges.d_B, "num_charges": charges.num_charges,
                     "t0": args.t0, "purity": p, "eta2": e, "gram": io.gram_to_json(G)})
    return text, f"multicharge purity={p:.12f} eta2={e:.6g}", 0


COMMANDS = {
    "spectrum": cmd_spectrum, "purity": cmd_purity, "sweep": cmd_sweep,
    "transfer": cmd_transfer, "ramp": cmd_ramp, "capacity": cmd_capacity,
    "multicharge": cmd_multicharge,
}


def _output_path(args):
    if args.output:
        return args.output
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir:
        return str(Path(out_dir) / f"{args.subcommand}.{args.format}")
    return None


def _fail(kind, message, code):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code},
                                sort_keys=True) + "\n")
    return code


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text, summary, code = COMMANDS[args.subcommand](args)
        path = _output_path(args)
        if path == "-":
            sys.stdout.write(text)
            sys.stderr.write(summary + "\n")
        else:
            if path is not None:
                Path(path).parent.mkdir(parents=True, exist_ok=True)
                Path(path).write_text(text)
            print(summary)
        if code == 4:
            return _fail("InvariantViolationError", "a sweep row failed a route check", 4)
        return code
    except CLIError as exc:
        return _fail(exc.kind, str(exc), exc.exit_code)
    except ResourceLimitError as exc:
        return _fail(type(exc).__name__, str(exc), 3)
    except InvariantViolationError as exc:
        return _fail(type(exc).__name__, str(exc), 4)
    except (ErgodicEPRError, ValueError) as exc:
        return _fail(type(exc).__name__, str(exc), 2)
    except OSError as exc:
        return _fail(type(exc).__name__, str(exc), 2)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
