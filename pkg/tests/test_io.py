import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modham import field as fld
from modham import io
from modham.config import DEFAULT_TOLERANCES, Tolerances
from modham.errors import ConfigError


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_floats_round_trip_exactly(x):
    assert json.loads(io.dumps({"x": x}))["x"] == x


def test_float_text_always_looks_like_a_float():
    assert io.dumps([12.0, 1e20, -0.0, 5]).strip() == "[12.0, 1e+20, -0.0, 5]"


def test_non_finite_floats_become_null():
    assert json.loads(io.dumps({"a": math.nan, "b": math.inf})) == {"a": None, "b": None}


def test_key_order_and_nesting_are_preserved():
    doc = {"z": 1, "a": [1.5, {"k": True}], "m": np.array([1.0, 2.0]), "e": {}, "l": []}
    text = io.dumps(doc)
    assert list(json.loads(text)) == ["z", "a", "m", "e", "l"]
    assert json.loads(text)["m"] == [1.0, 2.0]
    assert io.dumps(doc) == text


def test_objects_with_to_dict_are_serialised():
    class Thing:
        def to_dict(self):
            return {"v": np.float64(0.1)}

    assert json.loads(io.dumps({"t": Thing()})) == {"t": {"v": 0.1}}
    with pytest.raises(TypeError):
        io.dumps({"bad": object()})


def test_schema_version_leads():
    assert list(io.with_schema({"a": 1})) == ["schemaVersion", "a"]


def test_csv_cells():
    text = io.csv_text(["a", "b", "c"], [[1.0, True, "x"], [np.float64(0.1), False, 3]])
    assert text == "a,b,c\n1.0,true,x\n0.10000000000000001,false,3\n"


def test_atomic_write_replaces_and_leaves_no_temporaries(tmp_path):
    target = tmp_path / "deep" / "out.txt"
    io.atomic_write(target, "one")
    io.atomic_write(target, "two")
    assert target.read_text() == "two"
    io.atomic_write(target, b"\x00\x01")
    assert target.read_bytes() == b"\x00\x01"
    assert [p.name for p in target.parent.iterdir()] == ["out.txt"]


def test_field_dump_round_trip(tmp_path):
    grid = fld.GridSpec.cartesian(2, 4.0, 16)
    phi = fld.wave_from_spec({"mode": "cartesian", "d": 2, "L": 4.0, "N": 16, "m": 0.5,
                              "components": [{"kind": "bump", "radius": 1.0, "center": [0.5, 0.0]}]})
    io.write_field_dump(tmp_path / "phi", phi)
    back = io.read_field_dump(tmp_path / "phi")
    assert back.grid == grid and back.m == 0.5
    assert np.array_equal(back.f, phi.f) and np.array_equal(back.g, phi.g)
    header = json.loads((tmp_path / "phi.json").read_text())
    assert header["dtype"] == "<f8" and header["blocks"] == ["f", "g"]


def test_field_csv_columns():
    phi = fld.radial_bump(fld.GridSpec.radial(4.0, 32), 1.0)
    lines = io.field_csv(phi).splitlines()
    assert lines[0] == "r,f,g" and len(lines) == 33


def test_tolerance_overrides():
    t = DEFAULT_TOLERANCES.override(leakage=1e-3)
    assert t.leakage == 1e-3 and t.support == DEFAULT_TOLERANCES.support
    assert DEFAULT_TOLERANCES == Tolerances()
    with pytest.raises(ConfigError):
        DEFAULT_TOLERANCES.override(bogus=1.0)
    with pytest.raises(ConfigError):
        DEFAULT_TOLERANCES.override(leakage=-1.0)
