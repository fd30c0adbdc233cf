"""Compound cells and communication areas, with executable checks of their reduction laws.

Fragments are ordinary simple nets whose free ports play the role of the
compound's ports: port 0 is principal whenever the compound has one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..solos import Polarity
from .core import FREE, TAU, Cell, NetBuilder, SimpleNet, Symbol, wire_net
from .engine import din_lts_transition, expand, normalize_d
from .iso import net_iso, net_iso_generalized
from .rules import apply_rule, find_net_redexes

S = Symbol


def gen_contraction(arity: int, co: bool = False) -> SimpleNet:
    """Canonical left comb: free port 0 is principal, ports 1..arity auxiliary."""
    binary, nullary = (S.COCONTR, S.COWEAK) if co else (S.CONTR, S.WEAK)
    b = NetBuilder()
    if arity == 0:
        b.expose((b.cell(nullary), 0))
        return b.build()
    if arity == 1:
        x, y = b.relay()
        b.expose(x)
        b.expose(y)
        return b.build()
    cells = [b.cell(binary) for _ in range(arity - 1)]
    b.expose((cells[-1], 0))
    for k in range(len(cells) - 1, 0, -1):
        b.connect((cells[k], 1), (cells[k - 1], 0))
    b.expose((cells[0], 1))
    for c in cells:
        b.expose((c, 2))
    return b.build()


def compound(kind: Symbol, arity: int, label: str | None = None) -> SimpleNet:
    """``?⊗`` (kind DER) or ``!⅋`` (kind CODER) of the given arity.

    The (co)dereliction is the principal (port 0); its auxiliary feeds a chain of
    ``arity`` tensors (pars) ending in a one (bottom), whose first auxiliaries are
    the exposed ports 1..arity."""
    binary, end = (S.TENSOR, S.ONE) if kind is S.DER else (S.PAR, S.BOTTOM)
    b = NetBuilder()
    head = b.cell(kind, label if label is not None else TAU)
    b.expose((head, 0))
    prev = (head, 1)
    for _ in range(arity):
        c = b.cell(binary)
        b.connect(prev, (c, 0))
        b.expose((c, 1))
        prev = (c, 2)
    b.connect(prev, (b.cell(end), 0))
    return b.build()


def prefix_cell(polarity: Polarity, n: int, label: str | None = None) -> SimpleNet:
    """n-ary input (outermost ``!⅋``) or output (outermost ``?⊗``) cell.

    Free port 0 is principal; ports 1..2n are delta+_1, delta-_1, ..., delta+_n, delta-_n.
    Only the outermost compound carries ``label``."""
    outer = S.CODER if polarity is Polarity.IN else S.DER
    inner = S.DER if outer is S.CODER else S.CODER
    b = NetBuilder()
    if n == 0:
        ends = b.include(compound(outer, 0, label))
        b.expose(ends[0])
        return b.build()
    kinds = [outer if j % 2 == 0 else inner for j in range(2 * n)]
    own: list[object] = []
    below = None
    for j, kind in enumerate(kinds):
        last = j == 2 * n - 1
        ends = b.include(compound(kind, 1 if last else 2, label if j == 0 else None))
        if below is None:
            principal = ends[0]
        else:
            b.connect(below, ends[0])
        own.append(ends[1])
        below = None if last else ends[2]
    b.expose(principal)
    # ?⊗ compounds own the delta+ ports, !⅋ compounds the delta- ports.
    plus = [e for e, k in zip(own, kinds) if k is S.DER]
    minus = [e for e, k in zip(own, kinds) if k is S.CODER]
    for p, m in zip(plus, minus):
        b.expose(p)
        b.expose(m)
    return b.build()


@dataclass
class AreaHandle:
    order: int
    pairs: list[tuple[int, int]] = field(default_factory=list)
    """Free-port indices (p+, p-) of each pair of associated ports."""


def _slot(i: int, j: int) -> int:
    # Auxiliary slot (1-based) of gamma_i facing pair j: pairs other than i, in order.
    return j + 1 if j < i else j


def comm_area(order: int) -> tuple[SimpleNet, AreaHandle]:
    """Canonical area: order+2 pairs of (order+1)-ary generalized cocontraction (p+)
    and contraction (p-) combs, each pair's auxiliaries wired to every other pair."""
    if order < -2:
        raise ValueError("areas have order at least -2")
    npairs = order + 2
    b = NetBuilder()
    plus = [b.include(gen_contraction(order + 1, co=True)) for _ in range(npairs)]
    minus = [b.include(gen_contraction(order + 1, co=False)) for _ in range(npairs)]
    pairs = []
    for i in range(npairs):
        pairs.append((b.expose(plus[i][0]), b.expose(minus[i][0])))
    for i in range(npairs):
        for j in range(i + 1, npairs):
            b.connect(plus[i][_slot(i, j)], minus[j][_slot(j, i)])
            b.connect(minus[i][_slot(i, j)], plus[j][_slot(j, i)])
    return b.build(), AreaHandle(order, pairs)


# --- law checks --------------------------------------------------------------


def aggregate(n1: int, n2: int) -> SimpleNet:
    """Two canonical areas linked on their first pairs (p+ to p-, p- to p+).

    Interface: the remaining pairs of the first area, then those of the second."""
    a1, h1 = comm_area(n1)
    a2, h2 = comm_area(n2)
    b = NetBuilder()
    e1, e2 = b.include(a1), b.include(a2)
    (p1, m1), (p2, m2) = h1.pairs[0], h2.pairs[0]
    b.connect(e1[p1], e2[m2])
    b.connect(e1[m1], e2[p2])
    for ends, h in ((e1, h1), (e2, h2)):
        for p, m in h.pairs[1:]:
            b.expose(ends[p])
            b.expose(ends[m])
    return b.build()


def check_aggregation(n1: int, n2: int, depth: int | None = None) -> bool:
    if n1 < -1 or n2 < -1:
        raise ValueError("aggregation needs areas of order at least -1")
    joined = normalize_d(aggregate(n1, n2), depth)
    expected, _ = comm_area(n1 + n2)
    return not joined.exhausted and net_iso_generalized(joined.net, expected)


@dataclass
class ForwardingReport:
    ok: bool
    summands: int
    communicating: int
    problems: list[str] = field(default_factory=list)
    exhausted: bool = False

    def __bool__(self) -> bool:
        return self.ok


def forwarding_net(p: int, l: str = "l", m: str = "m") -> SimpleNet:
    """Coder(l)+weakening on one pair and der(m)+coweakening on another pair of an
    order p+2 area.  Interface: coder aux, der aux, then the untouched pairs."""
    area, h = comm_area(p + 2)
    b = NetBuilder()
    e = b.include(area)
    coder, weak = b.cell(S.CODER, l), b.cell(S.WEAK)
    der, coweak = b.cell(S.DER, m), b.cell(S.COWEAK)
    (p0, m0), (p1, m1) = h.pairs[0], h.pairs[1]
    b.connect((coder, 0), e[m0])
    b.connect((weak, 0), e[p0])
    b.connect((der, 0), e[p1])
    b.connect((coweak, 0), e[m1])
    b.expose((coder, 1))
    b.expose((der, 1))
    for pp, mm in h.pairs[2:]:
        b.expose(e[pp])
        b.expose(e[mm])
    return b.build()


def forwarded(net: SimpleNet, cell: int) -> bool:
    """The principal port of ``cell`` reaches a free port through auxiliary-to-principal
    hops across generalized cocontractions (for a coder) or contractions (for a der)."""
    via = S.COCONTR if net.cells[cell].symbol is S.CODER else S.CONTR
    q = net.link[(cell, 0)]
    seen = set()
    while q[0] != FREE:
        if q[1] == 0 or net.cells[q[0]].symbol is not via or q[0] in seen:
            return False
        seen.add(q[0])
        q = net.link[(q[0], 0)]
    return True


def check_forwarding(p: int, l: str = "l", m: str = "m", depth: int | None = None) -> ForwardingReport:
    if p < -2:
        raise ValueError("p must be at least -2")
    s = forwarding_net(p, l, m)
    result = expand(s, {l, m}, depth)
    rest, _ = comm_area(p)
    b = NetBuilder()
    x, y = b.relay()
    b.expose(x)
    b.expose(y)
    ends = b.include(rest)
    for e in ends:
        b.expose(e)
    expected = b.build()
    problems: list[str] = []
    communicating = 0
    for k, t in enumerate(result.summands):
        by_label = {c.label: i for i, c in t.cells.items() if c.label in (l, m)}
        if set(by_label) != {l, m}:
            problems.append(f"summand {k} lost a labelled cell")
            continue
        ci, di = by_label[l], by_label[m]
        if t.link[(ci, 0)] == (di, 0):
            communicating += 1
            redex = next(r for r in find_net_redexes(t, {l, m}) if set(r.cells) == {ci, di})
            after = normalize_d(apply_rule(t, redex).summands[0], depth).net
            if not net_iso_generalized(after, expected):
                problems.append(f"summand {k}: the residue is not an area of order {p}")
        elif not (forwarded(t, ci) and forwarded(t, di)):
            problems.append(f"summand {k}: neither communicating nor forwarded")
    if communicating != 1:
        problems.append(f"{communicating} communicating summands instead of 1")
    ok = not problems and not result.exhausted
    return ForwardingReport(ok, len(result.summands), communicating, problems, result.exhausted)


def prefix_pair(n_out: int, n_in: int, l: str = "l", m: str = "m") -> SimpleNet:
    """Output prefix (m, n_out) facing input prefix (l, n_in).

    Interface: the input's delta ports, then the output's."""
    inp = prefix_cell(Polarity.IN, n_in, l)
    out = prefix_cell(Polarity.OUT, n_out, m)
    b = NetBuilder()
    ei, eo = b.include(inp), b.include(out)
    b.connect(ei[0], eo[0])
    for e in ei[1:] + eo[1:]:
        b.expose(e)
    return b.build()


def prefix_residue(n: int) -> SimpleNet:
    """The 2n wires left by equal-arity prefixes: input delta+_i to output delta-_i and
    input delta-_i to output delta+_i, on the interface of ``prefix_pair``."""
    net = SimpleNet(nfree=4 * n)
    for i in range(n):
        net.connect((FREE, 2 * i), (FREE, 2 * n + 2 * i + 1))
        net.connect((FREE, 2 * i + 1), (FREE, 2 * n + 2 * i))
    return net


def check_prefix_reduction(n: int, p: int, l: str = "l", m: str = "m", depth: int | None = None) -> bool:
    s = prefix_pair(n, p, l, m)
    step = din_lts_transition(s, l, m, depth)
    if len(step.reducts) != 1 or step.exhausted:
        return False
    u = step.reducts[0]
    if n == p:
        final = normalize_d(u, depth)
        return not final.exhausted and net_iso(final.net, prefix_residue(n))
    rest = expand(u, {TAU}, depth)
    return not rest.exhausted and len(rest.summands) == 0


__all__ = [
    "AreaHandle",
    "ForwardingReport",
    "aggregate",
    "check_aggregation",
    "check_forwarding",
    "check_prefix_reduction",
    "comm_area",
    "compound",
    "forwarded",
    "forwarding_net",
    "gen_contraction",
    "prefix_cell",
    "prefix_pair",
    "prefix_residue",
    "wire_net",
]
