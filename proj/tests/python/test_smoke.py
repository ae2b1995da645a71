import json
import math

import pytest

import latticekit as lk


def test_modulus_and_sup():
    assert lk.modulus([3.0, -4.0]) == [3.0, 4.0]
    assert lk.sup([1.0, -2.0], [0.0, 3.0]) == [1.0, 3.0]


def test_sigma_example():
    cert = lk.sigma_m([([1.0], ["cos"]), ([2.0], ["sin"])], 2)
    approx, bound = cert["approx"], cert["bound"]
    assert approx[0] == pytest.approx(2.2304424973876635, abs=1e-15)
    assert math.sqrt(5) - approx[0] <= bound[0]


def test_variation_and_factorization_error():
    t = lk.MultilinearMap([2], 2, [1, -2, -3, 4])
    assert lk.variation_modulus(t, [[1.0, 1.0]]) == [3.0, 7.0]
    cross = lk.MultilinearMap([2, 2], 1, [0, 1, 0, 0])
    with pytest.raises(lk.FactorizationError) as info:
        lk.factor_through_power(cross)
    assert info.value.args[1] == [[1.0, 0.0], [0.0, 1.0]]


def test_validation_error_is_value_error():
    with pytest.raises(ValueError):
        lk.sup([1.0], [1.0, 2.0])


def test_run_experiment_exit_codes():
    code, out, _ = lk.run_experiment(json.dumps({"experiment": "sigma-convergence"}))
    assert code == 0
    assert out.splitlines()[1] == "m,approx,exact,error,bound"
    code, _, err = lk.run_experiment(json.dumps({"experiment": "nope"}))
    assert code == 2
    assert err
