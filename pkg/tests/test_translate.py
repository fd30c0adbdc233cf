import random

from hypothesis import given, strategies as st

from solace import pi, solos
from solace.random_terms import random_pi
from solace.syntax import parse_pi, parse_solos
from solace.translate import cat, pi_context, translate_pi, translate_under
from solace.names import NameSupply
from solace.typecheck import check_acyclic, check_typed

EXAMPLE = "(new x.(u!x.0 | x?y.0)) | u?z.(z!t.0)"
P = "new w y.(v!<u w y> | Cat y | new v'. w!<x v' v>)"
Q = "new w y'.(v!<x w y'> | Cat y' | new y v'. w?<y v v'>)"
R = ("new w y.(v!<u w y> | Cat y | new z v'.(w?<z v v'> | "
     "new w y.(v'!<z w y> | Cat y | new v''. w!<t v'' v'>)))")
DISPLAYED = f"new v.((new x.({P} | {Q})) | {R} | Cat v)"


def test_cat():
    t = cat("v")
    assert solos.congruent(t, parse_solos("new z. v?<z z v>"))
    assert solos.free_names(t) == {"v"}
    assert len(solos.canonical_form(t).solos) == 1


def test_translate_nil():
    assert solos.congruent(translate_pi(pi.Nil()), parse_solos("new v. Cat v"))


def test_translate_clauses():
    s = NameSupply({"u", "x", "v"})
    t = translate_under(parse_pi("u!x.0"), "v", s)
    assert solos.congruent(t, parse_solos("new w y.(v!<u w y> | Cat y | new v'. w!<x v' v>)"))
    t = translate_under(parse_pi("u?x.0"), "v", NameSupply({"u", "x", "v"}))
    assert solos.congruent(t, parse_solos("new w y.(v!<u w y> | Cat y | new x v'. w?<x v v'>)"))
    t = translate_under(parse_pi("new q. 0 | 0"), "v", NameSupply({"v"}))
    assert solos.congruent(t, parse_solos("0"))


def test_example_matches_displayed_decomposition():
    assert solos.congruent(translate_pi(parse_pi(EXAMPLE)), parse_solos(DISPLAYED))


def _reachable(t, limit=500):
    seen, frontier = [t], [t]
    while frontier and len(seen) < limit:
        nxt = []
        for u in frontier:
            for r in solos.reduce_steps(u):
                if not any(solos.congruent(r, o) for o in seen):
                    seen.append(r)
                    nxt.append(r)
        frontier = nxt
    return seen


def test_example_reaches_final_cat():
    states = _reachable(translate_pi(parse_pi(EXAMPLE)))
    final = parse_solos("new v. Cat v")
    assert any(solos.congruent(s, final) for s in states)
    # The intermediate reduct with the outer communication fired.
    mid = parse_solos(f"new v. ((new x. ((Cat v | new v'. u!<x v' v>) | {Q})) | {R})")
    assert any(solos.congruent(s, mid) for s in states)


def test_simulates_the_pi_step():
    """One pi step is matched by solos steps reaching the translated reduct plus Cat garbage."""
    src = parse_pi("u!x.0 | u?y.y!a.0")
    (dst,) = pi.reduce_steps(src)
    states = _reachable(translate_pi(src))
    goal = translate_pi(dst)
    # The translated reduct, in parallel with leftover Cat agents on private names.
    assert any(
        solos.congruent(s, goal)
        or solos.congruent(s, solos.Par(goal, parse_solos("new q. Cat q")))
        or solos.congruent(s, solos.Par(goal, parse_solos("new q. Cat q | new r. Cat r")))
        for s in states
    )


@given(st.integers(0, 10**6))
def test_free_names_preserved(s):
    p = random_pi(random.Random(s))
    assert solos.free_names(translate_pi(p)) == pi.free_names(p)


@given(st.integers(0, 10**6))
def test_translation_is_typed_and_acyclic(s):
    p = random_pi(random.Random(s))
    assert check_acyclic(check_typed(pi_context(p), translate_pi(p)))


def test_fresh_names_avoid_user_names():
    p = parse_pi("v!w.0 | y?z.0")
    t = translate_pi(p)
    assert solos.free_names(t) == {"v", "w", "y"}
