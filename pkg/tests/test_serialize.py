import json

import numpy as np
import pytest

from sixterm import quadruples as qd, serialize as se


@pytest.mark.parametrize("name", sorted(qd.CATALOG))
def test_round_trip(name):
    Q = qd.catalog_build(name)
    doc = se.quadruple_to_doc(Q)
    R = se.quadruple_from_doc(json.loads(se.dumps(doc)))
    for a, b in zip(Q.maps, R.maps):
        assert np.array_equal(a.matrix, b.matrix)
    assert se.dumps(se.quadruple_to_doc(R)) == se.dumps(doc)


def test_sign_flip_is_corrupt():
    doc = se.quadruple_to_doc(qd.build_cyclic(3))
    doc["maps"][1]["matrix"][0][0] *= -1
    with pytest.raises(se.CorruptInput):
        se.quadruple_from_doc(doc)


def test_broken_complex_is_corrupt():
    # d_CD . d_BC != 0 after changing one entry of d_CD
    doc = se.quadruple_to_doc(qd.build_cyclic(2))
    doc["maps"][2]["matrix"][0] = [2, 1]
    with pytest.raises(se.CorruptInput):
        se.quadruple_from_doc(doc)


def test_missing_field_is_a_schema_violation():
    doc = se.quadruple_to_doc(qd.build_cyclic(2))
    del doc["maps"]
    with pytest.raises(se.SchemaViolation):
        se.quadruple_from_doc(doc)


def test_bad_group_table_is_corrupt():
    doc = se.quadruple_to_doc(qd.build_cyclic(2))
    doc["group"]["table"] = [[0, 1], [1, 1]]
    with pytest.raises(se.CorruptInput):
        se.quadruple_from_doc(doc)


def test_dumps_is_canonical():
    assert se.dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_plain_converts_numpy():
    out = se.plain({"x": np.int64(3), "y": np.array([[1, 2]]), "z": np.bool_(True)})
    assert out == {"x": 3, "y": [[1, 2]], "z": True}
    assert type(out["x"]) is int


def test_report_schema():
    se.validate_report({"command": "x", "inputs": {}, "result": None, "exit_code": 0})
    with pytest.raises(se.SchemaViolation):
        se.validate_report({"command": "x", "inputs": {}, "result": None, "exit_code": 9})
