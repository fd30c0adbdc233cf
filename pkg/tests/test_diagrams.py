import random

import pytest
from hypothesis import given, strategies as st

from solace import diagrams as D
from solace import solos
from solace.random_terms import random_pi, random_solos
from solace.syntax import parse_pi, parse_solos
from solace.translate import pi_context, translate_pi
from solace.typecheck import Protocol, check_typed

GOLDEN = "new x y z w.(u!<u x y> | u?<z w w> | v!<z u y>)"
CYCLIC = "new u x y z y' z' a b c a' b' c'.(u!<x y z> | u?<x y' z'> | x!<a b c> | x?<a' b' c'>)"
PI_EXAMPLE = "(new x.(u!x.0 | x?y.0)) | u?z.(z!t.0)"


def diag(text, labels="auto"):
    return D.term_to_diagram(parse_solos(text), labels)


def test_golden_diagram_shape():
    d = diag(GOLDEN)
    assert len(d.edges) == 3
    assert sorted(n.bound for n in d.nodes.values()) == [False, False, True, True, True, True]
    d.check()


def test_empty_and_single():
    assert D.term_to_diagram(parse_solos("0")).nodes == {}
    d = D.term_to_diagram(parse_solos("u!<x x x>"))
    assert len(d.nodes) == 2 and not any(n.bound for n in d.nodes.values())
    (e,) = d.edges.values()
    assert e.sources[0] == e.sources[1] == e.sources[2] != e.target


def test_iso():
    a = diag("new x.(u!<x y x> | u?<y y x>)", None)
    b = diag("new q.(u?<y y q> | u!<q y q>)", None)
    assert D.diagram_iso(a, b) is not None
    assert D.diagram_iso(diag("u!<x y z>", None), diag("u?<x y z>", None)) is None
    # Renumbering nodes.
    perm = {i: 10 - i for i in a.nodes}
    c = D.Diagram(
        {perm[i]: D.DiagNode(perm[i], n.bound, n.name) for i, n in a.nodes.items()},
        {k: D.MultiEdge(k, e.polarity, tuple(perm[s] for s in e.sources), perm[e.target], e.label)  # type: ignore[arg-type]
         for k, e in a.edges.items()},
    )
    assert D.diagram_iso(a, c) is not None


def test_iso_respects_labels():
    a = D.term_to_diagram(parse_solos("u!<a b c>@l | u?<a b c>@m"))
    b = D.term_to_diagram(parse_solos("u!<a b c>@m | u?<a b c>@l"))
    assert D.diagram_iso(a, b) is None
    assert D.diagram_iso(a, D.term_to_diagram(parse_solos("u?<a b c>@m | u!<a b c>@l"))) is not None


def test_dual_pairs():
    (p,) = D.find_dual_pairs(diag(GOLDEN))
    assert p.acyclic and p.freeness_ok
    pairs = D.find_dual_pairs(diag(CYCLIC))
    first = next(q for q in pairs if {q.inp, q.out} == {0, 1})
    assert not first.acyclic
    (q,) = D.find_dual_pairs(diag("u!<x y z> | u?<x' y' z'>"))
    assert q.acyclic and not q.freeness_ok


def test_golden_reduction():
    d = diag(GOLDEN)
    (p,) = D.find_dual_pairs(d)
    h = D.reduce_diagram(d, p.inp, p.out)
    assert D.diagram_iso(h, D.term_to_diagram(parse_solos("new y. v!<u u y>@e2"))) is not None


def test_intermediate_states():
    d = diag(GOLDEN)
    (p,) = D.find_dual_pairs(d)
    g = D.erase_and_identify(d, p.inp, p.out)
    assert len(g.edges) == 1 and len(g.idents) == 3
    h = D.contract(g, 0)
    assert len(h.idents) == 2 and len(h.nodes) == len(g.nodes) - 1


def test_stuck_on_free_pair():
    d = diag("u!<x y z> | u?<x' y' z'>")
    (q,) = D.find_dual_pairs(d)
    with pytest.raises(D.StuckIdentification):
        D.reduce_diagram(d, q.inp, q.out)
    assert D.lts_transitions(d) == []


def test_lts_labels():
    d = D.term_to_diagram(parse_solos(GOLDEN.replace("u?<z w w>", "u?<z w w>@l").replace("u!<u x y>", "u!<u x y>@m")))
    ((lab, h),) = D.lts_transitions(d)
    assert lab == ("l", "m")
    assert D.lts_transitions(D.Diagram()) == []


def test_transition_count_matches_term_pairs():
    t = translate_pi(parse_pi(PI_EXAMPLE))
    c = solos.canonical_form(t)
    ok_pairs = 0
    for i, j in solos.redexes(c):
        try:
            solos.fire(c, i, j)
            ok_pairs += 1
        except solos.FreenessError:
            pass
    assert len(D.lts_transitions(D.term_to_diagram(c, "auto"))) == ok_pairs


def test_membership():
    assert D.is_ac_member(D.term_to_diagram(translate_pi(parse_pi(PI_EXAMPLE)), "auto")).member
    res = D.is_ac_member(diag(CYCLIC))
    assert res.status == "non-member" and res.witness == [("e1", "e0")]
    assert D.is_ac_member(D.Diagram()).member
    assert D.is_ac_member(diag(GOLDEN), budget=0).status == "budget"


def test_self_loop_is_dropped_but_free_pair_sticks():
    d = D.Diagram({0: D.DiagNode(0, False, "a"), 1: D.DiagNode(1, False, "b")}, {}, [(0, 0), (0, 1)])
    assert D.contractible(d, 0) and not D.contractible(d, 1)
    with pytest.raises(D.StuckIdentification):
        D.contract_all(d)


def test_contraction_keeps_free_node():
    d = D.Diagram({0: D.DiagNode(0, True, "x"), 1: D.DiagNode(1, False, "a"), 2: D.DiagNode(2, True, "y")},
                  {}, [(0, 1), (2, 0)])
    h = D.contract_all(d)
    assert h.nodes == {}  # both sides isolated afterwards
    g = D.contract(d, 0)
    assert 1 in g.nodes and 0 not in g.nodes
    g = D.contract(d, 1)
    assert set(g.nodes) == {0, 1}


def test_dot():
    text = D.to_dot(diag(GOLDEN))
    assert text.startswith("graph") and "fillcolor=black" in text and "fillcolor=white" in text


@st.composite
def terms(draw):
    return random_solos(random.Random(draw(st.integers(0, 10**6))), n_solos=draw(st.integers(0, 6)))


@given(terms())
def test_faithful_reduction(t):
    d = D.term_to_diagram(t)
    term_side = [D.term_to_diagram(r) for r in solos.reduce_steps(t)]
    diag_side = [h for _, h in D.lts_transitions(d)]
    assert len(term_side) == len(diag_side)
    for x in term_side:
        assert any(D.diagram_iso(x, y) is not None for y in diag_side)
    for h in diag_side:
        assert len(h.edges) == len(d.edges) - 2
        assert len(h.nodes) <= len(d.nodes)


@given(terms())
def test_diagram_round_trip(t):
    d = D.term_to_diagram(t)
    back = D.diagram_to_canonical(d).to_term()
    assert solos.congruent(back, t)


def _oriented_components_are_trees(names_edges):
    indeg = {}
    for a, b in names_edges:
        indeg[b] = indeg.get(b, 0) + 1
        if indeg[b] > 1:
            return False
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in names_edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


@given(st.integers(0, 10**6))
def test_identifications_point_at_receivers(s):
    """Orienting each new identification from its sent to its received occurrence
    gives a forest, for every redex of every acyclic term reached."""
    rng = random.Random(s)
    p = random_pi(rng)
    gamma = pi_context(p)
    t = translate_pi(p)
    for _ in range(3):
        d = check_typed(gamma, t)
        c = d.term
        for i, j in solos.redexes(c):
            edges = []
            for k in (1, 2, 3):
                a, b = c.solos[i].objects[k - 1], c.solos[j].objects[k - 1]
                if d.protocol(i, k) is Protocol.S:
                    assert d.protocol(j, k) is Protocol.R
                    edges.append((a, b))
                else:
                    assert d.protocol(j, k) is Protocol.S
                    edges.append((b, a))
            assert _oriented_components_are_trees(edges)
        nxt = solos.reduce_steps(t)
        if not nxt:
            break
        t = rng.choice(nxt)
