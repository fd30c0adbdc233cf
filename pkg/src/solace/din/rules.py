"""Interaction rules between two cells facing each other on their principal ports."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import FREE, TAU, Cell, Net, Port, SimpleNet, Symbol

S = Symbol

MULTIPLICATIVE = "multiplicative"
COMMUNICATION = "communication"
NONDETERMINISTIC = "nondeterministic"
STRUCTURAL = "structural"

# A right-hand side endpoint: ("h", side, aux index) for an auxiliary port of the
# redex (side 0 or 1 in rule orientation) or ("n", k, port) for port of new cell k.
End = tuple
Variant = tuple[list[Cell], list[tuple[End, End]]]


def _h(side: int, i: int) -> End:
    return ("h", side, i)


def _n(k: int, p: int) -> End:
    return ("n", k, p)


def _route(label: str | None, mover: Symbol, eraser: Symbol) -> list[Variant]:
    """(co)dereliction against a binary (co)contraction: one summand per branch."""
    out = []
    for branch in (1, 2):
        other = 3 - branch
        cells = [Cell(mover, label), Cell(eraser)]
        conns = [(_n(0, 0), _h(1, branch)), (_n(0, 1), _h(0, 1)), (_n(1, 0), _h(1, other))]
        out.append((cells, conns))
    return out


def _grid() -> list[Variant]:
    # side 0 is the contraction, side 1 the cocontraction.
    cells = [Cell(S.COCONTR), Cell(S.COCONTR), Cell(S.CONTR), Cell(S.CONTR)]
    conns = [
        (_n(0, 0), _h(0, 1)),
        (_n(1, 0), _h(0, 2)),
        (_n(2, 0), _h(1, 1)),
        (_n(3, 0), _h(1, 2)),
    ]
    for i in (1, 2):
        for j in (1, 2):
            conns.append((_n(i - 1, j), _n(2 + j - 1, i)))
    return [(cells, conns)]


def _variants(a: Cell, b: Cell) -> tuple[str, list[Variant]] | None:
    """Family and right-hand sides for the oriented pair (a, b), or None."""
    sa, sb = a.symbol, b.symbol
    if (sa, sb) == (S.PAR, S.TENSOR):
        return MULTIPLICATIVE, [([], [(_h(0, 1), _h(1, 1)), (_h(0, 2), _h(1, 2))])]
    if (sa, sb) == (S.BOTTOM, S.ONE):
        return MULTIPLICATIVE, [([], [])]
    if (sa, sb) == (S.PAR, S.ONE):
        return MULTIPLICATIVE, [([Cell(S.COWEAK), Cell(S.ONE)], [(_n(0, 0), _h(0, 1)), (_n(1, 0), _h(0, 2))])]
    if (sa, sb) == (S.TENSOR, S.BOTTOM):
        return MULTIPLICATIVE, [([Cell(S.WEAK), Cell(S.BOTTOM)], [(_n(0, 0), _h(0, 1)), (_n(1, 0), _h(0, 2))])]
    if (sa, sb) == (S.DER, S.CODER):
        return COMMUNICATION, [([], [(_h(0, 1), _h(1, 1))])]
    if (sa, sb) == (S.DER, S.COCONTR):
        return NONDETERMINISTIC, _route(a.label, S.DER, S.WEAK)
    if (sa, sb) == (S.CODER, S.CONTR):
        return NONDETERMINISTIC, _route(a.label, S.CODER, S.COWEAK)
    if (sa, sb) in ((S.DER, S.COWEAK), (S.CODER, S.WEAK)):
        return NONDETERMINISTIC, []
    if (sa, sb) == (S.CONTR, S.COWEAK):
        return STRUCTURAL, [([Cell(S.COWEAK), Cell(S.COWEAK)], [(_n(0, 0), _h(0, 1)), (_n(1, 0), _h(0, 2))])]
    if (sa, sb) == (S.COCONTR, S.WEAK):
        return STRUCTURAL, [([Cell(S.WEAK), Cell(S.WEAK)], [(_n(0, 0), _h(0, 1)), (_n(1, 0), _h(0, 2))])]
    if (sa, sb) == (S.WEAK, S.COWEAK):
        return STRUCTURAL, [([], [])]
    if (sa, sb) == (S.CONTR, S.COCONTR):
        return STRUCTURAL, _grid()
    return None


def orient(net: SimpleNet, a: int, b: int) -> tuple[int, int, str, list[Variant]]:
    ca, cb = net.cells[a], net.cells[b]
    got = _variants(ca, cb)
    if got is not None:
        return a, b, *got
    got = _variants(cb, ca)
    if got is not None:
        return b, a, *got
    raise ValueError(f"no rule for {ca.symbol.value}/{cb.symbol.value}")


@dataclass(frozen=True)
class Redex:
    a: int
    b: int
    family: str
    enabled: bool
    rule: str

    @property
    def cells(self) -> tuple[int, int]:
        return (self.a, self.b)


def classify(net: SimpleNet, a: int, b: int, nd: Iterable[str], comm: Iterable[str]) -> Redex:
    x, y, family, _ = orient(net, a, b)
    cx, cy = net.cells[x], net.cells[y]
    rule = f"{cx.symbol.value}/{cy.symbol.value}"
    if family == COMMUNICATION:
        enabled = cx.label in comm and cy.label in comm
    elif family == NONDETERMINISTIC:
        enabled = cx.label in nd
    else:
        enabled = True
    return Redex(x, y, family, enabled, rule)


def find_net_redexes(s: SimpleNet, R: Iterable[str], comm: Iterable[str] | None = None) -> list[Redex]:
    """Every principal pair, classified.  Communication and non-deterministic steps
    are enabled by labels in ``R``; pass ``comm`` to use a different set for
    communication (R-reduction proper communicates only over tau)."""
    R = set(R)
    comm_set = R if comm is None else set(comm)
    return [classify(s, a, b, R, comm_set) for a, b in s.principal_pairs()]


def rewrite_inplace(net: SimpleNet, a: int, b: int, variant: Variant) -> set[int]:
    """Replace cells ``a`` and ``b`` (rule orientation) by ``variant`` inside ``net``.

    Returns the ids of cells whose principal port may now face another one."""
    holes: dict[End, Port] = {}
    for side, c in enumerate((a, b)):
        for i in range(1, net.cells[c].arity + 1):
            holes[_h(side, i)] = (c, i)
    hole_of = {p: h for h, p in holes.items()}
    ext = {h: net.link[p] for h, p in holes.items()}
    for c in (a, b):
        for i in range(net.cells[c].arity + 1):
            del net.link[(c, i)]
        del net.cells[c]
    cells, conns = variant
    new_ids = [net.add_cell(cell) for cell in cells]

    def real(e: End) -> Port:
        return (new_ids[e[1]], e[2])

    rhs: dict[End, End] = {}
    for x, y in conns:
        rhs[x] = y
        rhs[y] = x
    touched = set(new_ids)
    visited: set[End] = set()

    def walk(h: End, came: str):
        while True:
            visited.add(h)
            if came == "ext":
                nxt = rhs[h]
                if nxt[0] == "h":
                    h, came = nxt, "rhs"
                    continue
                return real(nxt)
            q = ext[h]
            if q in hole_of:
                h, came = hole_of[q], "ext"
                continue
            return q

    def join(p: Port, q: Port) -> None:
        net.connect(p, q)
        for r in (p, q):
            if r[0] != FREE:
                touched.add(r[0])

    for x, y in conns:
        if x[0] == "n" and y[0] == "n":
            join(real(x), real(y))
    for x, y in conns:
        for u, v in ((x, y), (y, x)):
            if u[0] == "n" and v[0] == "h" and v not in visited:
                join(real(u), walk(v, "rhs"))
    for h, q in ext.items():
        if h in visited or q in hole_of:
            continue
        join(q, walk(h, "ext"))
    for h in holes:
        if h not in visited:
            net.loops += 1
            cur, came = h, "ext"
            while cur not in visited:
                visited.add(cur)
                if came == "ext":
                    cur, came = rhs[cur], "rhs"
                else:
                    cur, came = hole_of[ext[cur]], "ext"
    return touched


def apply_rule(s: SimpleNet, redex: Redex) -> Net:
    """Fire ``redex`` (enabled or not) and return the resulting sum."""
    a, b, _, variants = orient(s, redex.a, redex.b)
    out = []
    for v in variants:
        t = s.copy()
        rewrite_inplace(t, a, b, v)
        out.append(t)
    return Net(out, s.nfree)


def redex_net(left: Cell, right: Cell) -> SimpleNet:
    """The two-cell net of a rule: principals joined, auxiliaries free (left first)."""
    net = SimpleNet()
    a = net.add_cell(left)
    b = net.add_cell(right)
    net.connect((a, 0), (b, 0))
    k = 0
    for c in (a, b):
        for i in range(1, net.cells[c].arity + 1):
            net.connect((c, i), (FREE, k))
            k += 1
    net.nfree = k
    return net


ALL_RULES: list[tuple[Cell, Cell]] = [
    (Cell(S.PAR), Cell(S.TENSOR)),
    (Cell(S.BOTTOM), Cell(S.ONE)),
    (Cell(S.PAR), Cell(S.ONE)),
    (Cell(S.TENSOR), Cell(S.BOTTOM)),
    (Cell(S.DER, "l"), Cell(S.CODER, "m")),
    (Cell(S.DER, "l"), Cell(S.COCONTR)),
    (Cell(S.CODER, "l"), Cell(S.CONTR)),
    (Cell(S.DER, "l"), Cell(S.COWEAK)),
    (Cell(S.CODER, "l"), Cell(S.WEAK)),
    (Cell(S.CONTR), Cell(S.COWEAK)),
    (Cell(S.COCONTR), Cell(S.WEAK)),
    (Cell(S.WEAK), Cell(S.COWEAK)),
    (Cell(S.CONTR), Cell(S.COCONTR)),
]
"""One representative of each of the thirteen principal-pair rules."""


__all__ = [
    "ALL_RULES",
    "COMMUNICATION",
    "MULTIPLICATIVE",
    "NONDETERMINISTIC",
    "STRUCTURAL",
    "Redex",
    "TAU",
    "apply_rule",
    "classify",
    "find_net_redexes",
    "orient",
    "redex_net",
    "rewrite_inplace",
]
