import math

import pytest
from hypothesis import given, strategies as st

from morcamp.core import InvalidInput
from morcamp.specs import SpecError, parse_space, parse_weight


@pytest.mark.parametrize("text, family, p", [
    ("L:2", "lebesgue", 2.0),
    ("  L:1.5 ", "lebesgue", 1.5),
    ("Linf", "lebesgue", math.inf),
    ("Lw:3", "weak", 3.0),
    ("Lor:2:1", "lorentz", 2.0),
    ("Zyg:2:1", "zygmund", 2.0),
])
def test_parse_space(text, family, p):
    X = parse_space(text)
    assert X.family == family
    assert X.p == p


@pytest.mark.parametrize("text", ["L:2", "Lw:3", "Lor:2:1", "Zyg:2:1.5",
                                  "Orl:pow:3", "Orl*:powlog:2:1"])
def test_space_roundtrip(text):
    X = parse_space(text)
    assert parse_space(X.spec).spec == X.spec


def test_orlicz_forms():
    assert parse_space("Orl:pow:3").is_orlicz
    a = parse_space("Orl:pow:3")
    b = parse_space("Orl*:pow:3")
    assert a.spec != b.spec


@pytest.mark.parametrize("text, pos, fragment", [
    ("L:x", 2, "number"),
    ("Q:2", 0, "unknown space"),
    ("L:2:3", 4, "extra"),
    ("Lor:2", 5, "parameter"),
    ("Zyg:2:zz", 6, "alpha"),
    ("Orl", 3, "Young"),
    ("L:nan", 2, "NaN"),
])
def test_space_errors_have_positions(text, pos, fragment):
    with pytest.raises(SpecError) as exc:
        parse_space(text)
    assert exc.value.pos == pos
    assert fragment in exc.value.reason
    lines = str(exc.value).splitlines()
    assert lines[-1].index("^") - lines[-2].index(text[0]) == pos


@pytest.mark.parametrize("text", ["L:0.5", "Lw:1", "Lor:0.5:1", "Zyg:0.5:1"])
def test_space_domain_errors(text):
    with pytest.raises(InvalidInput):
        parse_space(text)


def test_orlicz_inner_position():
    with pytest.raises(SpecError) as exc:
        parse_space("Orl:pow:q")
    assert exc.value.pos >= 4


@pytest.mark.parametrize("text, vals", [
    ("one", (0.0, 0.0, 0.0)),
    ("pow:-0.5", (-0.5, 0.0, 0.0)),
    ("powlog:0:2", (0.0, 2.0, 0.0)),
    ("powloglog:1:0:-1", (1.0, 0.0, -1.0)),
])
def test_parse_weight(text, vals):
    w = parse_weight(text)
    r = 1e-6
    L = 1 + math.log(1 / r)
    want = r ** vals[0] * L ** vals[1] * (1 + math.log(L)) ** vals[2]
    assert w(r) == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("text, pos", [
    ("pw:1", 0), ("pow", 3), ("pow:1:2", 6), ("powlog:1:y", 9),
])
def test_weight_errors(text, pos):
    with pytest.raises(SpecError) as exc:
        parse_weight(text)
    assert exc.value.pos == pos


@given(st.text(alphabet="LworZygOrl*:0123456789.-e", max_size=14))
def test_parse_space_never_crashes(text):
    try:
        parse_space(text)
    except InvalidInput:
        pass
