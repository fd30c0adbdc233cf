import random

import pytest
from hypothesis import given, strategies as st

from solace import solos
from solace.random_terms import random_pi, random_typed_solos
from solace.solos import SoloType
from solace.syntax import parse_pi, parse_solos
from solace.translate import cat, pi_context, translate_pi, translate_under
from solace.names import NameSupply
from solace.typecheck import (
    Protocol,
    TypingError,
    all_typings,
    check_acyclic,
    check_typed,
    guard_relation,
    infer_types,
)

V, W = SoloType.V, SoloType.W
Rp, Sp = Protocol.R, Protocol.S


def test_cat_decoration():
    d = check_typed({"v": V}, cat("v"))
    assert [d.protocol(0, k) for k in (1, 2, 3)] == [Rp, Sp, Sp]


def test_wrong_object_type_is_pinpointed():
    with pytest.raises(TypingError) as exc:
        check_typed({"x": V}, parse_solos("x?<x x x>"))
    assert exc.value.position == 1


def test_missing_annotation_rejected():
    with pytest.raises(TypingError):
        check_typed({}, parse_solos("new z. v?<z z v>"))


@pytest.mark.parametrize(
    "subject,polarity,expected",
    [(V, "?", (Rp, Sp, Sp)), (V, "!", (Sp, Rp, Rp)), (W, "?", (Rp, Sp, Rp)), (W, "!", (Sp, Rp, Sp))],
)
def test_decoration_table(subject, polarity, expected):
    objs = {V: ("a", "b", "c"), W: ("a", "c", "d")}[subject]
    gamma = {"u": subject, "a": W, "b": W, "c": V, "d": V}
    d = check_typed(gamma, parse_solos(f"u{polarity}<{' '.join(objs)}>"))
    assert tuple(d.protocol(0, k) for k in (1, 2, 3)) == expected


def test_inference():
    inf = infer_types(parse_solos("new x.(u!<x y z>)"))
    check_typed(inf.context, inf.term)
    assert infer_types(parse_solos("0")).context == {}
    with pytest.raises(TypingError):
        infer_types(parse_solos("u?<u u u>"))


def test_inference_agrees_with_exhaustive_search():
    rng = random.Random(11)
    for _ in range(60):
        t, _ = random_typed_solos(rng, n_solos=3, n_names=4)
        bare = solos.canonical_form(t)
        bare = solos.Canonical(tuple((x, None) for x, _ in bare.binders), bare.solos).to_term()
        assert all_typings(bare)
        inf = infer_types(bare)
        check_typed(inf.context, inf.term)


def test_inference_failure_matches_exhaustive_search():
    rng = random.Random(12)
    names = ["a", "b", "c"]
    for _ in range(80):
        parts = [f"{rng.choice(names)}{rng.choice('!?')}<{' '.join(rng.choice(names) for _ in range(3))}>"
                 for _ in range(2)]
        t = parse_solos(" | ".join(parts))
        typable = bool(all_typings(t))
        try:
            infer_types(t)
            assert typable
        except TypingError as exc:
            assert not typable
            assert exc.conflict


def test_guard_relation_of_input_clause():
    t = translate_under(parse_pi("u?x.0"), "v", NameSupply({"u", "x", "v"}))
    inf = infer_types(t)
    d = check_typed({"u": W, "v": V}, inf.term)
    g = guard_relation(d)
    sol = d.solos
    outer = next(i for i, s in enumerate(sol) if s.subject == "v")
    cat_y = next(i for i, s in enumerate(sol) if s.polarity.value == "?" and s.objects[0] == s.objects[1])
    inner = next(i for i in range(len(sol)) if i not in (outer, cat_y))
    assert g.below(outer, cat_y) and g.below(outer, inner)
    assert g.roots == {outer}


def test_single_solo_is_root():
    d = check_typed({"v": V}, cat("v"))
    g = guard_relation(d)
    assert g.roots == {0} and g.triangle == set()


@given(st.integers(0, 10**6))
def test_guard_relation_is_a_forest_on_translations(s):
    p = random_pi(random.Random(s))
    d = check_typed(pi_context(p), translate_pi(p))
    g = guard_relation(d)
    parents = {}
    for a, b in g.triangle:
        assert b not in parents, "two parents"
        parents[b] = a
    assert not any((x, x) in g.plus for x in range(len(d.solos)))


def test_ac4_violation():
    # A V-subject output sends position 1 and receives position 2: y is both.
    t = parse_solos("new y:W v:V. x!<y y v>")
    rep = check_acyclic(check_typed({"x": V}, t))
    assert not rep and rep.condition == "AC4"
    t = parse_solos("new y:W v:V. (x?<y y v> | x!<z z v>)")
    rep = check_acyclic(check_typed({"x": V, "z": W}, t))
    assert not rep


def test_ac5_free_receiver():
    rep = check_acyclic(check_typed({"u": V, "x": W, "y": W, "z": V}, parse_solos("u?<x y z>")))
    assert not rep and rep.condition == "AC5"


def test_ac1_double_receive():
    t = parse_solos("new x:W. (u?<x a b> | w?<x c d>)")
    rep = check_acyclic(check_typed({"u": V, "w": V, "a": W, "b": V, "c": W, "d": V}, t))
    assert not rep and rep.condition == "AC1"


def test_pi_translation_passes_all_conditions():
    p = parse_pi("(new x.(u!x.0 | x?y.0)) | u?z.(z!t.0)")
    assert check_acyclic(check_typed(pi_context(p), translate_pi(p)))


@given(st.integers(0, 10**6))
def test_weakening(s):
    t, gamma = random_typed_solos(random.Random(s))
    check_typed(gamma, t)
    for ty in (V, W):
        check_typed({**gamma, "fresh_name": ty}, t)


@given(st.integers(0, 10**6))
def test_typing_survives_name_substitution(s):
    rng = random.Random(s)
    t, gamma = random_typed_solos(rng, p_bound=0.0)
    pairs = [(x, y) for x in gamma for y in gamma if x != y and gamma[x] is gamma[y]]
    if not pairs:
        return
    x, y = rng.choice(pairs)
    rest = {k: v for k, v in gamma.items() if k != y}
    check_typed(rest, solos.substitute(t, y, x))


@given(st.integers(0, 10**6))
def test_subject_reduction(s):
    t, gamma = random_typed_solos(random.Random(s))
    for r in solos.reduce_steps(t):
        check_typed(gamma, r)
