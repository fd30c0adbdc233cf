import random

import pytest
from hypothesis import given, strategies as st

from solace import pi, solos
from solace.random_terms import random_pi, random_solos, random_typed_solos
from solace.syntax import ParseError, format_pi, format_solos, parse_pi, parse_solos


def test_pi_grammar():
    t = parse_pi("new x y. (u!x.0 | u?z.z!y)")
    assert isinstance(t, pi.Nu)
    assert pi.free_names(t) == {"u"}


def test_solos_grammar_labels_and_types():
    t = parse_solos("new x:W v:V. (v?<x x v>@l | Cat v)")
    c = solos.canonical_form(t)
    assert dict(c.binders)["x"] is solos.SoloType.W
    assert {s.label for s in c.solos} == {"l", None}
    assert len(c.solos) == 2


def test_cat_sugar():
    assert solos.congruent(parse_solos("Cat v"), parse_solos("new z. v?<z z v>"))


@pytest.mark.parametrize("text", ["u!", "u!<a b>", "(u!<a b c>", "new . 0", "u?x.", "u!<a b c> |", "u#<a b c>"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_solos(text)


@pytest.mark.parametrize("text", ["u!", "u?x.(", "new x", "u!x.0 | | 0"])
def test_pi_parse_errors(text):
    with pytest.raises(ParseError):
        parse_pi(text)


def test_fresh_names_round_trip():
    t = parse_solos("new z#3. v?<z#3 z#3 v>")
    assert format_solos(t) == "new z#3. v?<z#3 z#3 v>"


seeds = st.integers(0, 10**6)


@given(seeds)
def test_pi_round_trip(s):
    t = random_pi(random.Random(s))
    back = parse_pi(format_pi(t))
    assert pi.congruent(back, t)
    assert format_pi(back) == format_pi(t)


@given(seeds)
def test_solos_round_trip(s):
    rng = random.Random(s)
    for t in (random_solos(rng), random_typed_solos(rng)[0]):
        back = parse_solos(format_solos(t))
        assert solos.congruent(back, t, strict=True)
        assert format_solos(back) == format_solos(t)
