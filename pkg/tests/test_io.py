import json

import numpy as np
import pytest

from ergodic_epr import (
    ChargeSet,
    SweepSpec,
    capacity_comparison,
    haar_random_state,
    krylov_gram,
    return_series,
    run_purity_sweep,
    sample_spectrum,
)
from ergodic_epr import io
from ergodic_epr.errors import ConfigurationError, MalformedInputError
from ergodic_epr.experiments import SWEEP_COLUMNS

from conftest import random_gram


def test_spectrum_round_trip():
    s = sample_spectrum("gue", 20, 3)
    assert io.spectrum_from_json(json.loads(io.dumps(io.spectrum_to_json(s)))) == s
    back = io.spectrum_from_csv(io.spectrum_to_csv(s))
    assert np.array_equal(back.energies, s.energies)


def test_spectrum_json_errors():
    d = io.spectrum_to_json(sample_spectrum("poisson", 5, 1))
    with pytest.raises(MalformedInputError):
        io.spectrum_from_json({**d, "d_B": 6})
    with pytest.raises(ConfigurationError):
        io.spectrum_from_json({**d, "extra": 1})
    with pytest.raises(MalformedInputError):
        io.spectrum_from_csv("i,e\n0,1.0\n")


def test_profile_round_trip():
    phi = haar_random_state(10, 2)
    a = io.profile_from_json(io.profile_to_json(phi))
    b = io.profile_from_csv(io.profile_to_csv(phi))
    assert np.allclose(a.amplitudes, phi.amplitudes, atol=1e-15)
    assert np.allclose(b.amplitudes, phi.amplitudes, atol=1e-15)
    with pytest.raises(MalformedInputError):
        io.profile_from_json({**io.profile_to_json(phi), "im": [0.0]})


def test_gram_round_trip():
    s = sample_spectrum("gue", 16, 2)
    G = krylov_gram(s, haar_random_state(16, 3), 0.4, 5)
    d = io.gram_to_json(G)
    assert "full" not in d
    back = io.gram_from_json(json.loads(io.dumps(d)))
    assert np.array_equal(back.entries, G.entries) and back.toeplitz
    H = random_gram(4, 7, 1)
    assert np.array_equal(io.gram_from_json(io.gram_to_json(H)).entries, H.entries)
    assert io.gram_to_csv(G).splitlines()[0] == "lag,re_row,im_row,re_col,im_col"
    assert io.gram_to_csv(H).splitlines()[0] == "j,k,re,im"
    assert len(io.gram_to_csv(G, expand=True).splitlines()) == 26


def test_chargeset_round_trip():
    c = ChargeSet(np.arange(6.0).reshape(3, 2), np.ones((4, 2)))
    back = io.chargeset_from_json(io.chargeset_to_json(c))
    assert np.array_equal(back.qA, c.qA) and np.array_equal(back.QB, c.QB)


def test_return_series_outputs():
    s = sample_spectrum("picket_fence", 8)
    r = return_series(s, haar_random_state(8, 1), [0.0, 0.5, 1.0])
    assert io.return_series_to_csv(r).startswith("t,re_amplitude,im_amplitude,probability\n")
    assert io.return_series_to_json(r)["probability"][0] == 1.0


def test_sweep_csv_header_and_determinism():
    spec = SweepSpec(["poisson"], ["flat", "gibbs"], [2, 3], [8], n_realizations=4)
    a = io.sweep_to_csv(run_purity_sweep(spec))
    b = io.sweep_to_csv(run_purity_sweep(spec))
    assert a == b
    lines = a.splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert lines[0] == "ensemble,profile,d_A,d_B,t0,n_real,mean_purity,sem_purity,mean_eta2,excess_times_dB"
    assert len(lines) == 5
    assert io.monte_carlo_to_csv(run_purity_sweep(spec)).splitlines()[0] == ",".join(io.MC_COLUMNS)


def test_sweep_spec_strict():
    cfg = {"ensembles": ["gue"], "profiles": ["flat"], "d_A_list": [2], "d_B_list": [8],
           "n_realizations": 5, "base_seed": 1}
    assert io.sweep_spec_from_json(cfg).t0_policy == "ramp_window"
    with pytest.raises(ConfigurationError):
        io.sweep_spec_from_json({k: v for k, v in cfg.items() if k != "n_realizations"})
    with pytest.raises(ConfigurationError):
        io.sweep_spec_from_json({**cfg, "n_realisations": 5})
    with pytest.raises(ConfigurationError):
        io.sweep_spec_from_json({**cfg, "t0_policy": "auto"})


def test_capacity_csv():
    text = io.capacity_to_csv(capacity_comparison([16], 0.1))
    lines = text.splitlines()
    assert lines[0] == "case,d_A,epsilon,gamma,kappa,min_dB"
    assert "ergodic_smooth,16,0.1,1.0,0.0,160.0" in lines
    assert "generic_or_infiniteT,16,0.1,1.0,0.0,1600.0" in lines


def test_dumps_strict_json():
    text = io.dumps({"a": float("nan"), "b": [1.0, float("inf")], "c": np.float64(2.5)})
    assert json.loads(text) == {"a": None, "b": [1.0, None], "c": 2.5}


@pytest.mark.parametrize("name", ["spectrum", "profile", "gram", "chargeset", "sweep_config",
                                  "purity_report", "transfer_diagnostics", "error", "ramp",
                                  "capacity", "multicharge_result", "sweep_result"])
def test_schemas_are_strict(name):
    schema = io.load_schema(name)
    assert schema["additionalProperties"] is False
