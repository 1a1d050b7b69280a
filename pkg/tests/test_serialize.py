"""Round trips and canonical bytes for the file formats."""

import json
import math

import numpy as np
import pytest

from specflowlab import (
    DiagonalModel,
    GradedOperator,
    InputError,
    MetricReport,
    SfOptions,
    sf_phillips,
    trig_path,
)
from specflowlab.serialize import (
    CSV_COLUMNS,
    block_from_obj,
    block_to_obj,
    certificate_to_obj,
    dumps_json,
    graded_from_obj,
    graded_to_obj,
    matrix_from_obj,
    matrix_to_obj,
    metrics_csv,
    model_from_obj,
    path_from_obj,
    path_to_obj,
    read_json,
    write_text,
)


def test_matrix_literal_round_trip():
    rng = np.random.default_rng(0)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = (g + g.conj().T) / 2
    obj = matrix_to_obj(h)
    assert obj["dim"] == 4
    back = matrix_from_obj(obj)
    np.testing.assert_array_equal(back.mat, h)


def test_matrix_literal_rejects_bad_shapes():
    with pytest.raises(InputError):
        matrix_to_obj(np.zeros((2, 3)))
    with pytest.raises(InputError):
        matrix_from_obj({"dim": 2, "re": [[0.0]], "im": [[0.0]]})
    with pytest.raises(InputError):
        matrix_from_obj({"re": [[0.0]], "im": [[0.0]]})
    with pytest.raises(InputError):
        matrix_from_obj({"dim": 1, "re": [["a"]], "im": [[0.0]]})


def test_block_literal_rectangular_round_trip():
    a = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]) + 1j
    obj = block_to_obj(a)
    assert (obj["rows"], obj["cols"]) == (2, 3)
    np.testing.assert_array_equal(block_from_obj(obj), a)
    with pytest.raises(InputError):
        block_from_obj({"rows": 2, "re": [[0.0]], "im": [[0.0]]})


def test_sampled_path_round_trip():
    path = trig_path(5, 3)
    obj = path_to_obj(path, samples=9)
    assert obj["kind"] == "sampled" and len(obj["samples"]) == 9
    back = path_from_obj(obj)
    assert back.dim == 3
    # the snapshot agrees exactly at its own sample points
    np.testing.assert_array_equal(back.matrix(0.0).mat, path.matrix(0.0).mat)
    np.testing.assert_array_equal(back.matrix(1.0).mat, path.matrix(1.0).mat)
    np.testing.assert_array_equal(back.matrix(0.5).mat, path.matrix(0.5).mat)


def test_family_path_from_obj_with_matrix_params():
    a = np.diag([1.0, -2.0])
    b = np.diag([3.0, 4.0])
    obj = {
        "kind": "family",
        "dim": 2,
        "family": {
            "name": "linear_interp",
            "params": {"a": matrix_to_obj(a), "b": matrix_to_obj(b)},
        },
    }
    path = path_from_obj(obj)
    np.testing.assert_array_equal(path.matrix(0.0).mat, a.astype(complex))
    np.testing.assert_array_equal(path.matrix(1.0).mat, b.astype(complex))


def test_path_from_obj_errors():
    with pytest.raises(InputError):
        path_from_obj({"kind": "nope"})
    with pytest.raises(InputError):
        path_from_obj({"kind": "sampled", "samples": [matrix_to_obj(np.eye(2))]})
    with pytest.raises(InputError):
        path_from_obj({"kind": "family", "family": {"params": {}}})
    with pytest.raises(InputError):
        path_from_obj(
            {
                "kind": "family",
                "dim": 5,  # declared dim contradicts the family
                "family": {"name": "toeplitz_line", "params": {"m": 1}},
            }
        )


def test_graded_round_trip():
    g = GradedOperator(3, 2, np.arange(6.0).reshape(2, 3) + 2j)
    back = graded_from_obj(graded_to_obj(g))
    assert (back.p, back.q) == (3, 2)
    np.testing.assert_array_equal(back.block, g.block)
    with pytest.raises(InputError):
        graded_from_obj({"p": 1, "q": 1})


def test_model_from_obj_defaults_and_lists():
    model, families, ns = model_from_obj({"N": 16, "law": "linear"})
    assert isinstance(model, DiagonalModel)
    assert model.trunc_dim == 16 and ns is None
    assert families == ["rank_one", "lambda", "fuglede", "swap"]
    _, fams, ns2 = model_from_obj(
        {"N": 8, "law": "signed", "family": "swap", "n": [2, 3]}
    )
    assert fams == ["swap"] and ns2 == [2, 3]
    with pytest.raises(InputError):
        model_from_obj([1, 2])


def test_certificate_obj_shape():
    cert = sf_phillips(trig_path(1, 4), SfOptions())
    obj = certificate_to_obj(cert)
    assert obj["method"] == "phillips"
    assert obj["total"] == cert.total
    assert len(obj["segments"]) == len(cert.segments)
    seg = obj["segments"][0]
    assert set(seg) == {
        "t_left", "t_right", "eps", "rank_left", "rank_right", "weyl_margin",
    }
    # canonical JSON round-trips through the stdlib parser unchanged
    text = dumps_json(obj)
    assert text.endswith("\n")
    assert json.loads(text) == obj
    assert dumps_json(json.loads(text)) == text


def test_dumps_json_canonical_bytes():
    assert dumps_json({"b": 1, "a": [1.5, 2]}) == (
        '{\n  "a": [\n    1.5,\n    2\n  ],\n  "b": 1\n}\n'
    )
    # numpy scalars and arrays coerce; other objects are refused
    out = json.loads(dumps_json({"x": np.float64(0.5), "n": np.int64(3),
                                 "f": np.bool_(True), "v": np.arange(2)}))
    assert out == {"x": 0.5, "n": 3, "f": True, "v": [0, 1]}
    with pytest.raises(TypeError):
        dumps_json({"bad": object()})


def test_read_write_round_trip(tmp_path):
    target = tmp_path / "out.json"
    write_text(str(target), dumps_json({"k": [1, 2.25]}))
    assert read_json(str(target)) == {"k": [1, 2.25]}


def test_metrics_csv_golden_cells():
    # row built from the closed forms for the linear law at n = 3:
    # d_N = 1, d_W = 1/sqrt(10), both with zero residual
    d_w = 1.0 / math.sqrt(10.0)
    row = MetricReport(
        family="rank_one", n=3, d_N=1.0, d_W=d_w, d_R=0.25, d_G=0.5,
        res_N=0.0, res_W=abs(d_w - 0.31622776601683794), res_R=None, res_G=None,
    )
    text = metrics_csv([row])
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    cells = lines[1].split(",")
    assert cells[0] == "rank_one" and cells[1] == "3"
    assert cells[2] == "1"
    assert cells[3] == "%.17g" % d_w == "0.31622776601683794"
    assert cells[8] == "" and cells[9] == ""  # no closed form -> empty cell
    assert float(cells[3]) == d_w  # %.17g loses nothing
