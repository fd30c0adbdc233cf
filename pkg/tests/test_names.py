from solace.names import MARKER, NameSupply, base_of


def test_fresh_names_avoid_taken_and_user_names():
    s = NameSupply({"x", "x#0"})
    a, b = s.fresh("x"), s.fresh("x")
    assert a != b and MARKER in a and a not in {"x", "x#0"}
    assert base_of(a) == "x"


def test_base_of_generated():
    assert base_of("v#12") == "v"
    assert base_of("plain") == "plain"
