import random

import pytest
from hypothesis import given, strategies as st

from solace.din.core import FREE, OUTWARD, TAU, Cell, LinearType, Net, NetBuilder, SimpleNet, Symbol, validate_net, wire_net
from solace.din.fmt import NetFormatError, format_net, parse_net, to_dot
from solace.din.iso import net_iso
from solace.random_terms import random_net

S = Symbol


def test_types_are_dual():
    for t in LinearType:
        assert t.dual.dual is t and t.dual is not t


def test_cell_arities():
    arity = {S.PAR: 2, S.BOTTOM: 0, S.TENSOR: 2, S.ONE: 0, S.DER: 1, S.WEAK: 0,
             S.CONTR: 2, S.CODER: 1, S.COWEAK: 0, S.COCONTR: 2}
    assert {s: s.arity for s in S} == arity
    assert {s for s in S if s.labeled} == {S.DER, S.CODER}


def test_labels():
    assert Cell(S.DER).label == TAU
    with pytest.raises(ValueError):
        Cell(S.PAR, "l")


def test_validate_examples():
    assert validate_net(wire_net()) == []
    b = NetBuilder()
    c, d = b.cell(S.CODER, "l"), b.cell(S.DER, "m")
    b.connect((c, 0), (d, 0))
    b.expose((c, 1))
    b.expose((d, 1))
    net = b.build()
    assert validate_net(net) == []
    assert net.interface_types() == [LinearType.I, LinearType.O]


def test_validate_rejects_sharing_and_typing():
    net = SimpleNet({0: Cell(S.WEAK), 1: Cell(S.WEAK)}, {(0, 0): (FREE, 0), (FREE, 0): (1, 0), (1, 0): (FREE, 0)}, 1)
    assert validate_net(net)
    net = SimpleNet({0: Cell(S.WEAK), 1: Cell(S.WEAK)}, {(0, 0): (1, 0), (1, 0): (0, 0)})
    assert any("joins" in p for p in validate_net(net))
    net = SimpleNet({0: Cell(S.DER, "l"), 1: Cell(S.CODER, "l")}, {(0, 0): (1, 0), (1, 0): (0, 0), (0, 1): (1, 1), (1, 1): (0, 1)})
    assert any("label" in p for p in validate_net(net))
    net = SimpleNet({0: Cell(S.WEAK)}, {}, 0)
    assert any("not wired" in p for p in validate_net(net))


def test_zero_net_keeps_interface():
    z = Net([], 3)
    assert z.is_zero and z.nfree == 3 and len(z) == 0


def test_builder_counts_closed_relay_cycles():
    b = NetBuilder()
    b.add_loop()
    x, y = b.relay()
    u, v = b.relay()
    b.connect(y, u)
    b.connect(v, x)
    assert b.build().loops == 2


def test_format_example():
    b = NetBuilder()
    c, d = b.cell(S.CODER, "l"), b.cell(S.DER)
    b.connect((c, 0), (d, 0))
    b.expose((c, 1))
    b.expose((d, 1))
    text = format_net(b.build())
    assert text == "interface f0:i f1:o\ncell 0 coder l\ncell 1 der\nwire f0 0.1\nwire f1 1.1\nwire 0.0 1.0\nloops 0\n"


@pytest.mark.parametrize("text", [
    "cell 0 foo",
    "cell 0 weak\ncell 0 weak",
    "cell 0 weak\nwire 0.0 0.0",
    "cell 0 weak\nwire 0.0 f0\nwire 0.0 f1",
    "interface f0:!o\ncell 0 weak\nwire 0.0 f0",
    "interface f1:o\nwire f0 f1",
    "bogus line",
    "cell 0 weak",
])
def test_parse_errors(text):
    with pytest.raises(NetFormatError):
        parse_net(text)


def test_comments_and_dot():
    net = parse_net("# a wire\ninterface f0:* f1:*\nwire f0 f1\nloops 1\n")
    assert net.loops == 1 and net.nfree == 2
    assert "graph" in to_dot(net)


@given(st.integers(0, 10**6))
def test_random_nets_are_valid(s):
    net = random_net(random.Random(s))
    assert validate_net(net) == []
    for k, t in enumerate(net.interface_types()):
        q = net.link[(FREE, k)]
        if q[0] != FREE:
            assert t is OUTWARD[net.cells[q[0]].symbol][q[1]]


@given(st.integers(0, 10**6))
def test_format_round_trip_is_bit_exact(s):
    net = random_net(random.Random(s))
    text = format_net(net)
    back = parse_net(text)
    assert format_net(back) == text
    assert net_iso(back, net)
