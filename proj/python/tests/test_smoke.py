import json
import math

import numpy as np
import pytest

import pssmp


def test_version():
    assert pssmp.__version__ == "0.1.0"


def test_roundtrip_is_exact():
    model = pssmp.LevyModel.brownian_drift(0.5)
    assert pssmp.lamperti_roundtrip_error(model, 1.0, 5.0, 1e-3, 7) <= 1e-2


def test_simulate_starts_at_x():
    t, v = pssmp.simulate(pssmp.LevyModel.brownian_drift(0.5), 2.0, 1.0, 1e-2, 3)
    assert t[0] == 0.0 and v[0] == 2.0
    assert t[-1] >= 1.0
    assert np.all(np.diff(t) >= 0)


def test_special_functions_half_order():
    assert pssmp.bessel_I(0.5, 1.0) == pytest.approx(math.sqrt(2 / math.pi) * math.sinh(1.0), rel=1e-12)
    assert pssmp.bessel_K(0.5, 2.0) == pytest.approx(math.sqrt(math.pi / 4) * math.exp(-2.0), rel=1e-12)


def test_laplace_transforms_delta3():
    z = math.sqrt(2.0)
    assert pssmp.laplace_S1(3.0, 1.0) == pytest.approx(z / math.sinh(z), rel=1e-12)
    assert pssmp.laplace_U1(3.0, 1.0) == pytest.approx(math.exp(-z), rel=1e-12)


def test_besq_transition_mean():
    x = pssmp.besq_transition(3.0, 1.0, 0.5, 20000, 11)
    assert abs(x.mean() - 2.5) < 4 * x.std() / math.sqrt(x.size)


def test_direct_and_dual_S1_agree():
    model = pssmp.LevyModel.brownian_drift(0.5)
    a = pssmp.sample_S_direct(model, 1.0, 800, 5)
    b = pssmp.sample_S1_duality(model, 800, 6, x0=1e-2)
    _, p = pssmp.ks_two_sample(a, b)
    assert p > 1e-3


def test_kde_integral_test_threshold():
    assert pssmp.kde_integral_test(3.0, 1.5)["outcome"] == "converges"
    assert pssmp.kde_integral_test(3.0, 0.75, end="infinity")["outcome"] == "diverges"


def test_python_tail_callable():
    v = pssmp.classify_integral(lambda u: 0.5, "linear", 1.0)
    assert v["outcome"] == "diverges"


def test_lil_constants():
    assert pssmp.lil_constant("stable_csp_process", 2.0) == pytest.approx(2.0, rel=1e-14)
    assert pssmp.lil_constant("bessel_passage") == pytest.approx(0.25, rel=1e-14)
    with pytest.raises(ValueError):
        pssmp.lil_constant("regvar_passage", 1.0)


def test_run_config_errors(tmp_path):
    code, payload = pssmp.run_config("[experiment]\nop = nope\n", str(tmp_path))
    assert code == 2 and json.loads(payload)["code"] == "unknown_op"
    code, payload = pssmp.run_config("[experiment]\nop = bessel\nreplicas = 0\n", str(tmp_path))
    assert code == 2 and json.loads(payload)["code"] == "bad_params"


def test_run_config_bessel(tmp_path):
    code, payload = pssmp.run_config("[experiment]\nop = bessel\nreplicas = 1\n", str(tmp_path))
    assert code == 0
    assert json.loads(payload)["laplace_S1"][0] == pytest.approx(pssmp.laplace_S1(3.0, 0.5))
