import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tpic import io
from tpic.constructions import minimal_d4_observable, n_prime_subspace
from tpic.exceptions import FormatError
from tpic.linalg import random_hermitian
from tpic.weyl import NoiseMeasure, ZeroSet


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_matrix_round_trip(d, seed):
    m = random_hermitian(d, np.random.default_rng(seed))
    back = io.matrix_from_json(json.loads(io.dumps(io.matrix_to_json(m))))
    assert np.array_equal(back, m)


def test_observable_round_trip():
    obs = minimal_d4_observable("pure-vs-all")
    back = io.observable_from_json(json.loads(io.dumps(io.observable_to_json(obs))))
    assert back.labels == obs.labels
    assert np.array_equal(back.effects, obs.effects)


def test_subspace_round_trip_drops_provenance():
    x = n_prime_subspace()
    doc = io.subspace_to_json(x)
    assert doc["provenance"] == "N_PRIME"
    back = io.subspace_from_json(json.loads(io.dumps(doc)))
    assert back.provenance == "GENERIC"
    assert back.same_as(x)


def test_zero_set_and_noise_round_trip():
    z = ZeroSet(5, [(1, 2), (4, 3)])
    assert io.zero_set_from_json(io.zero_set_to_json(z)).sorted() == z.sorted()
    mu = NoiseMeasure.uniform(4)
    assert np.array_equal(io.noise_from_json(io.noise_to_json(mu)).weights, mu.weights)


def test_dumps_is_stable_and_has_no_negative_zero():
    m = np.array([[-0.0, 1j], [-1j, 0.0]])
    s = io.dumps(io.matrix_to_json(m))
    assert "-0.0" not in s
    assert s == io.dumps(io.matrix_to_json(m.copy()))
    assert s.endswith("\n")


@pytest.mark.parametrize("doc", [
    {"re": [[1]], "im": [[0]]},
    {"dim": 0, "re": [], "im": []},
    {"dim": True, "re": [[1]], "im": [[0]]},
    {"dim": 2, "re": [[1, 0]], "im": [[0, 0]]},
    {"dim": 1, "re": [["a"]], "im": [[0]]},
    {"dim": 1, "re": [[float("nan")]], "im": [[0]]},
])
def test_matrix_format_errors(doc):
    with pytest.raises(FormatError):
        io.matrix_from_json(doc)


def test_other_format_errors():
    with pytest.raises(FormatError):
        io.observable_from_json({"dim": 2, "effects": []})
    with pytest.raises(FormatError):
        io.observable_from_json({"dim": 2, "effects": [1]})
    with pytest.raises(FormatError):
        io.subspace_from_json({"dim": 2, "basis": {}})
    with pytest.raises(FormatError):
        io.zero_set_from_json({"dim": 3, "points": [[1, 2, 3]]})
    with pytest.raises(FormatError):
        io.zero_set_from_json({"dim": 3, "points": [[1.5, 2]]})
    with pytest.raises(FormatError):
        io.noise_from_json({"dim": 2, "weights": [[1]]})
    with pytest.raises(FormatError):
        io.detect_kind([1, 2])


def test_file_errors(tmp_path):
    with pytest.raises(FormatError):
        io.load_file(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2, "re"')
    with pytest.raises(FormatError):
        io.load_file(bad)
    with pytest.raises(FormatError):
        io.save_file(tmp_path / "no" / "such" / "dir.json", {})


def test_detect_kind():
    assert io.detect_kind(io.matrix_to_json(np.eye(2))) == "matrix"
    assert io.detect_kind(io.subspace_to_json(n_prime_subspace())) == "subspace"
    assert io.detect_kind(io.zero_set_to_json(ZeroSet(3, []))) == "zero_set"
    assert io.detect_kind(io.noise_to_json(NoiseMeasure.uniform(3))) == "noise"
