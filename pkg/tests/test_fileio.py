import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from naimark.errors import FormatError
from naimark.fileio import (
    counts_doc, dumps, operator_file_from_doc, parse_operator_file, read_counts_file,
    read_operator_file, read_state_file, write_operator_file,
)
from naimark.povms import tetrahedral_povm

OPERATOR_FILES = ["tetrahedral.op", "z_basis.op", "x_basis.op", "diag.op", "nonpsd.op", "observables.op"]
STATE_FILES = ["state_zero.op", "state_mixed.op"]


@pytest.mark.parametrize("name", OPERATOR_FILES + STATE_FILES)
def test_golden_round_trip(golden, name):
    text = (golden / name).read_text(encoding="utf-8")
    kind = "state" if name in STATE_FILES else "operators"
    f = read_operator_file(golden / name, kind)
    assert f.dumps() == text


def test_golden_counts_round_trip(golden):
    text = (golden / "counts.json").read_text(encoding="utf-8")
    counts, doc = read_counts_file(golden / "counts.json")
    again = dumps(counts_doc(counts, doc["n"], doc["seed"], doc.get("metadata")))
    assert again == text


def test_golden_contents(golden):
    ops = parse_operator_file(golden / "diag.op")
    assert len(ops) == 2 and ops[0].shape == (2, 2)
    np.testing.assert_array_equal(ops[0], np.diag([1, 0]))
    tetra = parse_operator_file(golden / "tetrahedral.op")
    for a, b in zip(tetra, tetrahedral_povm()):
        assert np.array_equal(a, b)
    rho = read_state_file(golden / "state_mixed.op")
    np.testing.assert_array_equal(rho, [[0.7, 0.1 - 0.2j], [0.1 + 0.2j, 0.3]])


def _doc(matrix, dim=2):
    return {"kind": "operators", "version": 1, "dim": dim, "operators": [{"name": "A", "matrix": matrix}]}


def test_schema_error_names_path():
    bad = _doc([[[1, 0], [0, "x"]], [[0, 0], [1, 0]]])
    with pytest.raises(FormatError) as info:
        operator_file_from_doc(bad)
    assert "$.operators[0].matrix[0][1].im" in str(info.value)
    with pytest.raises(FormatError, match=r"matrix\[1\]"):
        operator_file_from_doc(_doc([[[1, 0], [0, 0]], [[0, 0]]]))
    with pytest.raises(FormatError, match=r"\$\.kind"):
        operator_file_from_doc({"kind": "state", "version": 1})
    with pytest.raises(FormatError, match=r"\$\.version"):
        operator_file_from_doc({"kind": "operators", "version": 7})


def test_non_hermitian_named():
    doc = _doc([[[0, 0], [0, 1]], [[0, 1], [0, 0]]])
    with pytest.raises(FormatError, match="'A' is not Hermitian"):
        operator_file_from_doc(doc)


def test_missing_and_malformed(tmp_path):
    with pytest.raises(FormatError, match="no such file"):
        parse_operator_file(tmp_path / "nope.op")
    (tmp_path / "bad.op").write_text("{not json", encoding="utf-8")
    with pytest.raises(FormatError, match="malformed"):
        parse_operator_file(tmp_path / "bad.op")
    (tmp_path / "bin.op").write_bytes(b"\xff\xfe\x00")
    with pytest.raises(FormatError, match="UTF-8"):
        parse_operator_file(tmp_path / "bin.op")


def test_counts_validation(tmp_path):
    doc = counts_doc([1, 2], 3, 5)
    doc["n"] = 4
    (tmp_path / "c.json").write_text(json.dumps(doc))
    with pytest.raises(FormatError, match=r"\.n"):
        read_counts_file(tmp_path / "c.json")
    doc = counts_doc([1, 2], 3, 5)
    doc["counts"][1] = -2
    (tmp_path / "c.json").write_text(json.dumps(doc))
    with pytest.raises(FormatError, match=r"counts\[1\]"):
        read_counts_file(tmp_path / "c.json")


finite = st.floats(-1e300, 1e300, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (2, 3, 3), elements=finite))
def test_round_trip_bit_exact(tmp_path_factory, parts):
    X = parts[0] + 1j * parts[1]
    H = np.triu(X) + np.triu(X, 1).conj().T
    H[np.diag_indices(3)] = H.diagonal().real
    path = tmp_path_factory.mktemp("rt") / "h.op"
    f = write_operator_file(path, [H], ["H"])
    back = parse_operator_file(path)[0]
    assert back.tobytes() == H.tobytes()
    assert path.read_text(encoding="utf-8") == f.dumps()


def test_negative_zero_survives(tmp_path):
    H = np.array([[-0.0, 0.0], [0.0, 1.0]], dtype=complex)
    write_operator_file(tmp_path / "z.op", [H])
    back = parse_operator_file(tmp_path / "z.op")[0]
    assert np.signbit(back[0, 0].real)
