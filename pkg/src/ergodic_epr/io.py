"""CSV and JSON serialization for spectra, profiles, Gram matrices and results.

Floats are written with ``repr`` so files round-trip exactly and identical
inputs give identical bytes.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
from importlib import resources

import numpy as np

from .dynamics import GramMatrix, ReturnSeries, toeplitz_hermitian
from .errors import ConfigurationError, MalformedInputError
from .multicharge import ChargeSet
from .spectra import Spectrum
from .states import StateProfile, custom_state


def _f(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def _jsonable(x):
    """Replace NaN/inf with None so the output is strict JSON."""
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.floating):
        return _jsonable(float(x))
    if isinstance(x, np.integer):
        return int(x)
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def load_schema(name: str) -> dict:
    """Bundled JSON schema, e.g. ``load_schema("sweep_config")``."""
    text = resources.files("ergodic_epr").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(obj, schema_name: str):
    import jsonschema

    try:
        jsonschema.validate(obj, load_schema(schema_name))
    except jsonschema.ValidationError as exc:
        raise ConfigurationError(f"{schema_name}: {exc.message}") from exc


def _csv_text(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _read_csv(text):
    rows = list(csv.reader(_io.StringIO(text)))
    if not rows:
        raise MalformedInputError("empty CSV")
    return rows[0], rows[1:]


# spectra

def spectrum_to_json(s: Spectrum) -> dict:
    return {"d_B": s.d_B, "ensemble": s.ensemble, "unfolded": s.unfolded,
            "energies": [float(e) for e in s.energies]}


def spectrum_from_json(d: dict) -> Spectrum:
    validate(d, "spectrum")
    s = Spectrum(np.asarray(d["energies"], float), d.get("ensemble", "custom"),
                 bool(d.get("unfolded", False)))
    if s.d_B != d["d_B"]:
        raise MalformedInputError("d_B does not match the number of energies")
    return s


def spectrum_to_csv(s: Spectrum) -> str:
    return _csv_text(("index", "energy"), ((i, _f(e)) for i, e in enumerate(s.energies)))


def spectrum_from_csv(text: str, ensemble="custom") -> Spectrum:
    header, rows = _read_csv(text)
    if header != ["index", "energy"]:
        raise MalformedInputError("spectrum CSV header must be index,energy")
    return Spectrum(np.array([float(r[1]) for r in rows]), ensemble)


# profiles

def profile_to_json(phi: StateProfile) -> dict:
    a = phi.amplitudes
    return {"d_B": phi.d_B, "profile": phi.tag,
            "re": [float(x) for x in a.real], "im": [float(x) for x in a.imag]}


def profile_from_json(d: dict) -> StateProfile:
    validate(d, "profile")
    if len(d["re"]) != len(d["im"]):
        raise MalformedInputError("re and im lengths differ")
    return custom_state(np.asarray(d["re"], float) + 1j * np.asarray(d["im"], float))


def profile_to_csv(phi: StateProfile) -> str:
    a = phi.amplitudes
    return _csv_text(("index", "re", "im"),
                     ((i, _f(x.real), _f(x.imag)) for i, x in enumerate(a)))


def profile_from_csv(text: str) -> StateProfile:
    """Load a custom profile; renormalizes, warning on a visible norm defect."""
    header, rows = _read_csv(text)
    if header != ["index", "re", "im"]:
        raise MalformedInputError("profile CSV header must be index,re,im")
    return custom_state(np.array([float(r[1]) + 1j * float(r[2]) for r in rows]))


# return series and Gram matrices

def return_series_to_csv(r: ReturnSeries) -> str:
    return _csv_text(
        ("t", "re_amplitude", "im_amplitude", "probability"),
        ((_f(t), _f(a.real), _f(a.imag), _f(p))
         for t, a, p in zip(r.times, r.amplitudes, r.probabilities)),
    )


def return_series_to_json(r: ReturnSeries) -> dict:
    return {"times": [float(t) for t in r.times],
            "re_amplitude": [float(a.real) for a in r.amplitudes],
            "im_amplitude": [float(a.imag) for a in r.amplitudes],
            "probability": [float(p) for p in r.probabilities]}


def _pairs(v):
    return [[float(z.real), float(z.imag)] for z in v]


def gram_to_json(G: GramMatrix, expand: bool = False) -> dict:
    """Toeplitz Grams are stored as first row and column; others in full.

    ``expand=True`` also writes the full matrix for Toeplitz Grams.
    """
    d = {"d_A": G.d_A, "t0": None if math.isnan(G.t0) else G.t0, "toeplitz": G.toeplitz}
    if G.toeplitz:
        d["first_row"] = _pairs(G.entries[0])
        d["first_column"] = _pairs(G.entries[:, 0])
    if expand or not G.toeplitz:
        d["full"] = [_pairs(row) for row in G.entries]
    return d


def gram_from_json(d: dict) -> GramMatrix:
    validate(d, "gram")
    t0 = float("nan") if d.get("t0") is None else float(d["t0"])
    if "full" in d:
        M = np.array([[complex(*z) for z in row] for row in d["full"]])
    elif d["toeplitz"] and "first_row" in d:
        M = toeplitz_hermitian([complex(*z) for z in d["first_row"]])
    else:
        raise MalformedInputError("Gram JSON needs 'full' or a Toeplitz first_row")
    if M.shape != (d["d_A"], d["d_A"]):
        raise MalformedInputError("Gram size does not match d_A")
    return GramMatrix(M, t0=t0, toeplitz=bool(d["toeplitz"]))


def gram_to_csv(G: GramMatrix, expand: bool = False) -> str:
    """Toeplitz Grams as a lag table (first row and column); the full
    matrix as ``j,k,re,im`` rows otherwise or with ``expand``."""
    if G.toeplitz and not expand:
        r, c = G.entries[0], G.entries[:, 0]
        return _csv_text(("lag", "re_row", "im_row", "re_col", "im_col"),
                         ((k, _f(r[k].real), _f(r[k].imag), _f(c[k].real), _f(c[k].imag))
                          for k in range(G.d_A)))
    return _csv_text(("j", "k", "re", "im"),
                     ((j, k, _f(G.entries[j, k].real), _f(G.entries[j, k].imag))
                      for j in range(G.d_A) for k in range(G.d_A)))


# charges

def chargeset_from_json(d: dict) -> ChargeSet:
    validate(d, "chargeset")
    return ChargeSet(np.asarray(d["qA"], float), np.asarray(d["QB"], float))


def chargeset_to_json(c: ChargeSet) -> dict:
    return {"qA": c.qA.tolist(), "QB": c.QB.tolist()}


# results

def sweep_to_csv(result) -> str:
    from .experiments import SWEEP_COLUMNS

    def fmt(v):
        return _f(v) if isinstance(v, float) else v

    return _csv_text(SWEEP_COLUMNS, (tuple(fmt(v) for v in r.values()) for r in result.rows))


def sweep_spec_from_json(d: dict):
    """Strict loader: unknown keys are rejected by the schema."""
    from .experiments import SweepSpec

    validate(d, "sweep_config")
    return SweepSpec(**d)


def capacity_to_csv(rows) -> str:
    return _csv_text(("case", "d_A", "epsilon", "gamma", "kappa", "min_dB"),
                     ((r.case, r.d_A, _f(r.epsilon), _f(r.gamma), _f(r.kappa), _f(r.min_dB))
                      for r in rows))


MC_COLUMNS = ("ensemble", "profile", "d_A", "d_B", "t0", "n_real", "mean", "sem")


def monte_carlo_to_csv(result) -> str:
    """Compact per-grid-point purity estimates of a sweep."""
    return _csv_text(MC_COLUMNS, ((r.ensemble, r.profile, r.d_A, r.d_B, _f(r.t0), r.n_real,
                                   _f(r.mean_purity), _f(r.sem_purity)) for r in result.rows))
