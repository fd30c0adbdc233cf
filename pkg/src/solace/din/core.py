"""Cells, simple nets, sums, and a builder for gluing fragments."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

FREE = -1
TAU = "tau"
Port = tuple[int, int]


class LinearType(enum.Enum):
    O = "o"
    I = "i"  # iota, the dual of o
    BANG = "!o"
    WHY = "?i"

    @property
    def dual(self) -> "LinearType":
        return _DUAL[self]


_DUAL = {
    LinearType.O: LinearType.I,
    LinearType.I: LinearType.O,
    LinearType.BANG: LinearType.WHY,
    LinearType.WHY: LinearType.BANG,
}


class Symbol(enum.Enum):
    PAR = "par"
    BOTTOM = "bottom"
    TENSOR = "tensor"
    ONE = "one"
    DER = "der"
    WEAK = "weak"
    CONTR = "contr"
    CODER = "coder"
    COWEAK = "coweak"
    COCONTR = "cocontr"

    @property
    def arity(self) -> int:
        return len(OUTWARD[self]) - 1

    @property
    def labeled(self) -> bool:
        return self in (Symbol.DER, Symbol.CODER)


_o, _i, _b, _w = LinearType.O, LinearType.I, LinearType.BANG, LinearType.WHY

# Type of the wire leaving each port, principal port first.  With o = ?i par o and
# i = !o tensor i, a par cell reads (o; ?i, o) and its auxiliary wires leave as !o, i.
OUTWARD: dict[Symbol, tuple[LinearType, ...]] = {
    Symbol.PAR: (_o, _b, _i),
    Symbol.BOTTOM: (_o,),
    Symbol.TENSOR: (_i, _w, _o),
    Symbol.ONE: (_i,),
    Symbol.DER: (_w, _o),
    Symbol.WEAK: (_w,),
    Symbol.CONTR: (_w, _b, _b),
    Symbol.CODER: (_b, _i),
    Symbol.COWEAK: (_b,),
    Symbol.COCONTR: (_b, _w, _w),
}


@dataclass(frozen=True)
class Cell:
    symbol: Symbol
    label: str | None = None

    def __post_init__(self) -> None:
        if self.symbol.labeled and self.label is None:
            object.__setattr__(self, "label", TAU)
        if not self.symbol.labeled and self.label is not None:
            raise ValueError(f"{self.symbol.value} cells carry no label")

    @property
    def arity(self) -> int:
        return self.symbol.arity


class SimpleNet:
    """Cells plus a perfect matching on ports.

    Free ports are ``(FREE, k)`` for ``k < nfree``; their order is the interface.
    Treat instances as values: the public operations return new nets.
    """

    __slots__ = ("cells", "link", "nfree", "loops", "_next")

    def __init__(self, cells: dict[int, Cell] | None = None, link: dict[Port, Port] | None = None,
                 nfree: int = 0, loops: int = 0) -> None:
        self.cells = cells if cells is not None else {}
        self.link = link if link is not None else {}
        self.nfree = nfree
        self.loops = loops
        self._next = max(self.cells, default=-1) + 1

    def copy(self) -> "SimpleNet":
        return SimpleNet(dict(self.cells), dict(self.link), self.nfree, self.loops)

    def __len__(self) -> int:
        return len(self.cells)

    def __repr__(self) -> str:
        return f"SimpleNet({len(self.cells)} cells, {self.nfree} free ports, {self.loops} loops)"

    @staticmethod
    def free(k: int) -> Port:
        return (FREE, k)

    def partner(self, p: Port) -> Port:
        return self.link[p]

    def ports(self, c: int) -> list[Port]:
        return [(c, i) for i in range(self.cells[c].arity + 1)]

    def add_cell(self, cell: Cell) -> int:
        c = self._next
        self._next += 1
        self.cells[c] = cell
        return c

    def connect(self, p: Port, q: Port) -> None:
        self.link[p] = q
        self.link[q] = p

    def principal_pairs(self) -> list[tuple[int, int]]:
        out = []
        for c in sorted(self.cells):
            q = self.link.get((c, 0))
            if q is not None and q[0] > c and q[1] == 0:
                out.append((c, q[0]))
        return out

    def labels(self) -> dict[str, int]:
        return {cell.label: c for c, cell in self.cells.items() if cell.label not in (None, TAU)}

    def outward_type(self, p: Port) -> LinearType | None:
        if p[0] == FREE:
            q = self.link[p]
            return None if q[0] == FREE else self.outward_type(q).dual  # type: ignore[union-attr]
        return OUTWARD[self.cells[p[0]].symbol][p[1]]

    def interface_types(self) -> list[LinearType | None]:
        """Type of the wire arriving at each free port, None when unconstrained."""
        out = []
        for k in range(self.nfree):
            q = self.link[(FREE, k)]
            out.append(None if q[0] == FREE else OUTWARD[self.cells[q[0]].symbol][q[1]])
        return out

    def validate(self) -> list[str]:
        problems = []
        expected = {(FREE, k) for k in range(self.nfree)}
        for c, cell in self.cells.items():
            expected |= {(c, i) for i in range(cell.arity + 1)}
        for p in expected:
            if p not in self.link:
                problems.append(f"port {fmt_port(p)} is not wired")
        for p, q in self.link.items():
            if p not in expected:
                problems.append(f"unknown port {fmt_port(p)}")
            elif self.link.get(q) != p:
                problems.append(f"port {fmt_port(q)} is shared or the wiring is not symmetric")
            elif p == q:
                problems.append(f"port {fmt_port(p)} is wired to itself")
        if problems:
            return problems
        for p, q in self.link.items():
            if p < q and p[0] != FREE and q[0] != FREE:
                tp, tq = self.outward_type(p), self.outward_type(q)
                if tp is not None and tq is not tp.dual:  # type: ignore[union-attr]
                    problems.append(f"wire {fmt_port(p)}-{fmt_port(q)} joins {tp.value} with {tq.value}")  # type: ignore[union-attr]
        seen: dict[str, int] = {}
        for c, cell in sorted(self.cells.items()):
            if cell.label not in (None, TAU):
                if cell.label in seen:
                    problems.append(f"label {cell.label} used by cells {seen[cell.label]} and {c}")
                seen[cell.label] = c  # type: ignore[index]
        return problems


def fmt_port(p: Port) -> str:
    return f"f{p[1]}" if p[0] == FREE else f"{p[0]}.{p[1]}"


def validate_net(s: SimpleNet) -> list[str]:
    """Empty list when ``s`` is well formed and well typed."""
    return s.validate()


@dataclass
class Net:
    """A formal sum of simple nets over one interface; no summands is the 0 net."""

    summands: list[SimpleNet] = field(default_factory=list)
    nfree: int = 0

    @classmethod
    def of(cls, s: SimpleNet) -> "Net":
        return cls([s], s.nfree)

    @property
    def is_zero(self) -> bool:
        return not self.summands

    def __len__(self) -> int:
        return len(self.summands)


class NetBuilder:
    """Assemble nets from cells, nested fragments and pass-through wires.

    Endpoints are cell ports ``(c, i)``, free ends ``("free", k)`` and the two
    sides of relays ``("relay", r, 0|1)``.  ``build`` traces through relays.
    """

    def __init__(self) -> None:
        self.cells: dict[int, Cell] = {}
        self.adj: dict[object, object] = {}
        self._relays = 0
        self._free: list[object] = []

    def cell(self, symbol: Symbol, label: str | None = None) -> int:
        c = len(self.cells)
        self.cells[c] = Cell(symbol, label)
        return c

    def relay(self) -> tuple[tuple, tuple]:
        r = self._relays
        self._relays += 1
        return ("relay", r, 0), ("relay", r, 1)

    def connect(self, x, y) -> None:
        for e in (x, y):
            if e in self.adj:
                raise ValueError(f"endpoint {e} already wired")
        self.adj[x] = y
        self.adj[y] = x

    def expose(self, x) -> int:
        """Make endpoint ``x`` the next free port; returns its index."""
        k = len(self._free)
        end = ("free", k)
        self._free.append(end)
        self.connect(end, x)
        return k

    def include(self, net: SimpleNet) -> list[object]:
        """Copy ``net`` in; returns the endpoint standing for each of its free ports."""
        ids = {c: self.cell(cell.symbol, cell.label) for c, cell in sorted(net.cells.items())}
        ends: list[object] = [None] * net.nfree
        done: set[Port] = set()
        for p, q in net.link.items():
            if p in done:
                continue
            done |= {p, q}
            if p[0] != FREE and q[0] != FREE:
                self.connect((ids[p[0]], p[1]), (ids[q[0]], q[1]))
            elif p[0] == FREE and q[0] == FREE:
                a, b = self.relay()
                ends[p[1]], ends[q[1]] = a, b
            else:
                f, c = (p, q) if p[0] == FREE else (q, p)
                ends[f[1]] = (ids[c[0]], c[1])
        for _ in range(net.loops):
            self.add_loop()
        return ends

    def add_loop(self) -> None:
        a, b = self.relay()
        self.connect(a, b)

    def build(self) -> SimpleNet:
        net = SimpleNet(dict(self.cells), {}, len(self._free))
        endpoints = [(c, i) for c, cell in self.cells.items() for i in range(cell.arity + 1)] + self._free
        for e in endpoints:
            if e not in self.adj:
                raise ValueError(f"endpoint {e} left dangling")
        seen_relays: set[int] = set()

        def real(e) -> Port:
            return (FREE, e[1]) if isinstance(e[0], str) and e[0] == "free" else e

        done: set = set()
        for e in endpoints:
            if e in done:
                continue
            cur = self.adj[e]
            while isinstance(cur, tuple) and cur and cur[0] == "relay":
                seen_relays.add(cur[1])
                other = ("relay", cur[1], 1 - cur[2])
                if other not in self.adj:
                    raise ValueError(f"relay {cur[1]} left dangling")
                cur = self.adj[other]
            done |= {e, cur}
            net.connect(real(e), real(cur))
        for r in range(self._relays):
            if r in seen_relays:
                continue
            # An unvisited relay lies on a closed cycle of relays.
            start = ("relay", r, 0)
            cur = start
            while True:
                seen_relays.add(cur[1])
                nxt = self.adj[cur]
                cur = ("relay", nxt[1], 1 - nxt[2])
                if cur[1] == r:
                    break
            net.loops += 1
        return net


def wire_net(n_wires: int = 1) -> SimpleNet:
    """``n_wires`` wires joining free ports 2k and 2k+1."""
    net = SimpleNet(nfree=2 * n_wires)
    for k in range(n_wires):
        net.connect((FREE, 2 * k), (FREE, 2 * k + 1))
    return net
