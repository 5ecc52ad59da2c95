import json
import math
from fractions import Fraction as F

import pytest

from compdyn.dynamics import EXIT, AtomMap
from compdyn.io import (
    dumps,
    encode_number,
    fingerprint,
    map_from_json,
    space_from_json,
    system_from_json,
    system_to_json,
    to_jsonable,
)
from compdyn.measure import AtomicSpace, MeasurableSet
from compdyn.models import parse_model


def test_number_encoding():
    assert encode_number(F(3, 4)) == "3/4"
    assert encode_number(F(5)) == "5"
    assert encode_number(0.1) == 0.1
    assert encode_number(math.inf) == "inf"
    assert encode_number(7) == 7


@pytest.mark.parametrize(
    "name", ["odometer:3", "shift:unilateral", "shift:bilateral:constant", "partition-z:8", "interval:log1p"]
)
def test_roundtrip(name):
    m = parse_model(name, 12 if name.startswith("shift") else None)
    doc = json.loads(dumps(system_to_json(m.space, m.f, m.default_A)))
    space, f, A = system_from_json(doc)
    assert space == m.space and f == m.f and f.open_atoms == m.f.open_atoms
    assert A == m.default_A
    assert fingerprint(space, f) == fingerprint(m.space, m.f)


def test_exit_is_a_string():
    doc = system_to_json(AtomicSpace.from_weights([1, 1]), AtomMap((1, EXIT)))
    assert doc["map"]["forward"] == [1, "EXIT"]


def test_fingerprint_sensitive_to_weights():
    f = AtomMap((1, 0))
    a = fingerprint(AtomicSpace.from_weights([1, 1]), f)
    b = fingerprint(AtomicSpace.from_weights([1, F(1, 2)]), f)
    assert a != b


def test_errors_name_the_field():
    with pytest.raises(ValueError, match="weights"):
        space_from_json({"blocks": [[0]]})
    with pytest.raises(ValueError, match="forward"):
        map_from_json({"forward": [0, "nowhere"]})
    with pytest.raises(ValueError, match="'A'"):
        system_from_json({"space": {"weights": [1]}, "map": {"forward": [0]}, "A": [3]})
    with pytest.raises(ValueError, match="forward"):
        system_from_json({"space": {"weights": [1, 1]}, "map": {"forward": [0]}})


def test_to_jsonable_handles_sets_and_complex():
    assert to_jsonable(MeasurableSet.of(3, 1)) == [1, 3]
    assert to_jsonable(1 + 2j) == {"re": 1.0, "im": 2.0}
    assert to_jsonable({"x": (F(1, 2), None)}) == {"x": ["1/2", None]}
