import itertools
import random

import pytest
from hypothesis import given, strategies as st

from solace import solos
from solace.random_terms import random_solos
from solace.solos import FreenessError, Polarity, Solo, unify
from solace.syntax import parse_solos

S = parse_solos
GOLDEN = "new x y z w.(u!<u x y> | u?<z w w> | v!<z u y>)"


def out(u, *xs):
    return Solo(Polarity.OUT, u, tuple(xs))


def inp(u, *xs):
    return Solo(Polarity.IN, u, tuple(xs))


def test_canonicalize_drops_empty_scope():
    assert solos.canonicalize(S("new x. 0")) == solos.Nil()
    assert solos.congruent(S("0 | u!<a b c>"), S("u!<a b c>"))


def test_scope_extrusion():
    assert solos.congruent(S("(new x. u?<x x x>) | v!<a b c>"), S("new x.(u?<x x x> | v!<a b c>)"))
    # Extrusion must not capture a free occurrence.
    assert not solos.congruent(S("(new x. u?<x x x>) | v!<x b c>"), S("new x.(u?<x x x> | v!<x b c>)"))


def test_canonical_form_shape():
    c = solos.canonical_form(S("(new x. u?<x x x>) | (new y. new q. v!<y y y>)"))
    assert [x for x, _ in c.binders] == ["x", "y"]
    assert len(c.solos) == 2


def test_unify_golden_classes():
    u = unify(out("u", "u", "x", "y"), inp("u", "z", "w", "w"), ["x", "y", "z", "w"])
    assert set(u.classes) == {frozenset({"u", "z"}), frozenset({"x", "y", "w"})}
    assert u.substitution["z"] == "u"
    # Bound-only class: some member stands for all (the choice is a convention).
    rep = u.representative[frozenset({"x", "y", "w"})]
    assert {u.substitution.get(x, x) for x in "xyw"} == {rep}


def test_unify_identity_and_failure():
    assert unify(out("u", "a", "b", "c"), inp("u", "a", "b", "c"), []).substitution == {}
    with pytest.raises(FreenessError):
        unify(out("u", "x", "y", "z"), inp("u", "x'", "y'", "z'"), [])


def test_unify_rejects_mismatched_solos():
    with pytest.raises(ValueError):
        unify(out("u", "a", "b", "c"), inp("v", "a", "b", "c"), [])
    with pytest.raises(ValueError):
        unify(inp("u", "a", "b", "c"), inp("u", "a", "b", "c"), [])


def test_reduce_golden():
    (r,) = solos.reduce_steps(S(GOLDEN))
    assert solos.congruent(r, S("new y. v!<u u y>"))
    assert solos.reduce_steps(S("0")) == []
    assert solos.reduce_steps(S("u!<x y z> | u?<x' y' z'>")) == []


def test_congruence_examples():
    p, q = "u!<a b c>", "v?<a a a>"
    assert solos.congruent(S(f"{p} | {q}"), S(f"{q} | {p}"))
    assert not solos.congruent(S("u!<x y z>"), S("u?<x y z>"))
    assert solos.congruent(S("new a. u!<a a b>"), S("new c. u!<c c b>"))
    assert not solos.congruent(S("new a. u!<a a b>"), S("new c. u!<c b b>"))


def _apply(sub, xs):
    return tuple(sub.get(x, x) for x in xs)


def test_unifier_is_most_general_by_brute_force():
    """Every equalising substitution moving only bound names factors through sigma."""
    rng = random.Random(5)
    names = ["a", "b", "c", "d"]
    for _ in range(40):
        o = out("u", *(rng.choice(names) for _ in range(3)))
        i = inp("u", *(rng.choice(names) for _ in range(3)))
        bound = [x for x in names if rng.random() < 0.7]
        try:
            sigma = unify(o, i, bound).substitution
        except FreenessError:
            sigma = None
        equalisers = []
        for image in itertools.product(names, repeat=len(bound)):
            th = dict(zip(bound, image))
            if _apply(th, o.objects) == _apply(th, i.objects):
                equalisers.append(th)
        if sigma is None:
            assert not equalisers
            continue
        assert _apply(sigma, o.objects) == _apply(sigma, i.objects)
        assert all(v in names for v in sigma.values())
        assert set(sigma) <= set(bound)
        for th in equalisers:
            # theta = rho . sigma for rho := theta restricted to representatives.
            assert all(th.get(x, x) == th.get(sigma.get(x, x), sigma.get(x, x)) for x in names)


@st.composite
def solos_terms(draw):
    return random_solos(random.Random(draw(st.integers(0, 10**6))), n_solos=draw(st.integers(0, 5)))


@given(solos_terms())
def test_each_step_removes_two_solos(t):
    n = len(solos.canonical_form(t).solos)
    for r in solos.reduce_steps(t):
        assert len(solos.canonical_form(r).solos) == n - 2


@given(solos_terms())
def test_reducts_of_congruent_terms_match(t):
    c = solos.canonical_form(t)
    shuffled = solos.Canonical(tuple(reversed(c.binders)), tuple(reversed(c.solos))).to_term()
    assert solos.congruent(t, shuffled)
    ra, rb = solos.reduce_steps(t), solos.reduce_steps(shuffled)
    assert len(ra) == len(rb)
    for x in ra:
        assert any(solos.congruent(x, y) for y in rb)


@given(solos_terms())
def test_free_names_never_grow(t):
    for r in solos.reduce_steps(t):
        assert solos.free_names(r) <= solos.free_names(t)
