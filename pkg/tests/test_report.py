import json

import numpy as np
import pytest

from modspec.generators import standard
from modspec.report import SCHEMA_VERSION, analysis_report, dumps, jsonable


def test_jsonable_converts_numpy():
    doc = jsonable({"a": np.float64(0.5), "b": np.arange(3), "c": (np.bool_(True), None)})
    assert doc == {"a": 0.5, "b": [0, 1, 2], "c": [True, None]}


def test_negative_zero_folds():
    assert str(jsonable(-0.0)) == "0.0"


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_non_finite_rejected(bad):
    with pytest.raises(ValueError, match="non-finite"):
        jsonable({"x": bad})


def test_unknown_type_rejected():
    with pytest.raises(TypeError):
        jsonable(object())


def test_dumps_sorted_with_trailing_newline():
    out = dumps({"b": 1, "a": 0.1})
    assert out.endswith("}\n") and out.index('"a"') < out.index('"b"')
    assert json.loads(out)["a"] == 0.1


def test_floats_round_trip_exactly():
    doc = json.loads(dumps(analysis_report(standard("petersen"))))
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["spectral"]["a"] == pytest.approx(2)
    assert "timing" not in json.dumps(doc)
