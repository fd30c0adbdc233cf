"""Isomorphism of simple nets, optionally modulo the shape of generalized (co)contractions.

A net becomes a port-level graph: one vertex per cell, per port and per free
port, and an edge for every wire.  Matching is colour refinement with
individualisation; distinct free-port labels make refinement discrete on
almost every net that arises here, so backtracking is rare.
"""

from __future__ import annotations

import hashlib

from .core import FREE, Cell, Port, SimpleNet, Symbol

_FAMILIES = ((Symbol.CONTR, Symbol.WEAK), (Symbol.COCONTR, Symbol.COWEAK))


def _cell_kind(cell: Cell) -> str:
    return cell.symbol.value if cell.label is None else f"{cell.symbol.value}:{cell.label}"


def _trees(net: SimpleNet) -> tuple[dict[int, tuple[Symbol, list[Port]]], set[int]]:
    """Maximal (co)contraction trees: root -> (family, leaf aux ports), plus consumed cells."""
    roots: dict[int, tuple[Symbol, list[Port]]] = {}
    consumed: set[int] = set()
    for binary, nullary in _FAMILIES:
        def is_binary(c: int) -> bool:
            return c != FREE and net.cells[c].symbol is binary

        for c in sorted(net.cells):
            if not is_binary(c):
                continue
            up = net.link[(c, 0)]
            if up[0] != FREE and up[1] > 0 and is_binary(up[0]):
                continue
            leaves: list[Port] = []
            members = {c}
            stack = [(c, 2), (c, 1)]
            while stack:
                x = stack.pop()
                q = net.link[x]
                if q[0] != FREE and q[1] == 0 and q[0] not in members:
                    sym = net.cells[q[0]].symbol
                    if sym is binary:
                        members.add(q[0])
                        stack += [(q[0], 2), (q[0], 1)]
                        continue
                    if sym is nullary:
                        members.add(q[0])
                        continue
                leaves.append(x)
            roots[c] = (binary, leaves)
            consumed |= members
    return roots, consumed


class PortGraph:
    """Vertex-labelled undirected graph; ``adj`` may repeat a neighbour."""

    __slots__ = ("labels", "adj")

    def __init__(self, labels: list[str], adj: list[list[int]]) -> None:
        self.labels = labels
        self.adj = adj

    def __len__(self) -> int:
        return len(self.labels)

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj)


def net_graph(net: SimpleNet, generalized: bool = False) -> PortGraph:
    ids: dict[object, int] = {}
    labels: list[str] = []
    edges: list[tuple[object, object]] = []

    def node(key: object, label: str) -> object:
        ids[key] = len(labels)
        labels.append(label)
        return key

    for k in range(net.nfree):
        node(("f", k), f"free{k}")
    endpoint: dict[Port, object] = {(FREE, k): ("f", k) for k in range(net.nfree)}
    roots: dict[int, tuple[Symbol, list[Port]]] = {}
    consumed: set[int] = set()
    if generalized:
        roots, consumed = _trees(net)
    relays: dict[int, list[object]] = {}
    for c, (fam, leaves) in roots.items():
        if len(leaves) == 1:
            endpoint[(c, 0)] = endpoint[leaves[0]] = ("r", c)
            relays[c] = []
            continue
        if not leaves:
            kind = (Symbol.WEAK if fam is Symbol.CONTR else Symbol.COWEAK).value
        else:
            kind = f"G{fam.value}"
        node(("c", c), kind)
        endpoint[(c, 0)] = node(("p", c, 0), f"{kind}.0")
        edges.append((("c", c), ("p", c, 0)))
        for j, leaf in enumerate(leaves):
            endpoint[leaf] = node(("a", c, j), f"{kind}.aux")
            edges.append((("c", c), ("a", c, j)))
    for c, cell in net.cells.items():
        if c in consumed:
            continue
        node(("c", c), _cell_kind(cell))
        for i in range(cell.arity + 1):
            endpoint[(c, i)] = node(("p", c, i), f"{cell.symbol.value}.{i}")
            edges.append((("c", c), ("p", c, i)))
    wires = []
    for p, q in net.link.items():
        if p < q and p in endpoint and q in endpoint:
            a, b = endpoint[p], endpoint[q]
            if a[0] == "r" and b[0] == "r" and a == b:
                continue  # a relay closed on itself
            for x, y in ((a, b), (b, a)):
                if x[0] == "r":
                    relays[x[1]].append(y)
            if a[0] != "r" and b[0] != "r":
                wires.append((a, b))
    # Splice relays: each has two neighbours, possibly other relays.
    done: set[int] = set()
    for r, nbrs in relays.items():
        if r in done:
            continue
        ends = []
        for start in nbrs:
            prev, cur = ("r", r), start
            while cur[0] == "r" and cur[1] not in done:
                done.add(cur[1])
                nxt = [y for y in relays[cur[1]] if y != prev] or relays[cur[1]]
                prev, cur = cur, nxt[0]
            ends.append(cur)
        done.add(r)
        if len(ends) == 2 and ends[0][0] != "r" and ends[1][0] != "r":
            wires.append((ends[0], ends[1]))
    adj: list[list[int]] = [[] for _ in labels]
    for a, b in edges + wires:
        ia, ib = ids[a], ids[b]
        adj[ia].append(ib)
        adj[ib].append(ia)
    return PortGraph(labels, adj)


def _refine(graphs: list[PortGraph], colours: list[list[int]]) -> list[list[int]]:
    """Joint colour refinement; colour numbers are comparable across ``graphs``."""
    count = len({c for cs in colours for c in cs})
    while True:
        sigs = [
            [(cs[v], tuple(sorted(cs[u] for u in g.adj[v]))) for v in range(len(g))]
            for g, cs in zip(graphs, colours)
        ]
        table = {sig: k for k, sig in enumerate(sorted({s for ss in sigs for s in ss}))}
        colours = [[table[s] for s in ss] for ss in sigs]
        new = len(table)
        if new == count:
            return colours
        count = new


def _initial(graphs: list[PortGraph]) -> list[list[int]]:
    table = {lab: k for k, lab in enumerate(sorted({l for g in graphs for l in g.labels}))}
    return [[table[l] for l in g.labels] for g in graphs]


def _histogram(cs: list[int]) -> list[int]:
    return sorted(cs)


def graph_hash(g: PortGraph) -> str:
    (cs,) = _refine([g], _initial([g]))
    # Colours were ranked by sorted signatures of this graph alone, so the
    # histogram is an isomorphism invariant.
    return hashlib.sha1(repr((len(g), g.edge_count(), _histogram(cs))).encode()).hexdigest()


def graph_iso(g1: PortGraph, g2: PortGraph) -> bool:
    if len(g1) != len(g2) or g1.edge_count() != g2.edge_count():
        return False
    if sorted(g1.labels) != sorted(g2.labels):
        return False
    return _search(g1, g2, *_initial([g1, g2]))


def _search(g1: PortGraph, g2: PortGraph, c1: list[int], c2: list[int]) -> bool:
    c1, c2 = _refine([g1, g2], [c1, c2])
    if _histogram(c1) != _histogram(c2):
        return False
    classes: dict[int, list[int]] = {}
    for v, c in enumerate(c1):
        classes.setdefault(c, []).append(v)
    open_classes = [vs for vs in classes.values() if len(vs) > 1]
    if not open_classes:
        where = {c: v for v, c in enumerate(c2)}
        f = [where[c] for c in c1]
        return all(
            g1.labels[v] == g2.labels[f[v]] and sorted(f[u] for u in g1.adj[v]) == sorted(g2.adj[f[v]])
            for v in range(len(g1))
        )
    cls = min(open_classes, key=len)
    colour = c1[cls[0]]
    fresh = max(max(c1), max(c2)) + 1
    v = cls[0]
    for w in (x for x, c in enumerate(c2) if c == colour):
        d1, d2 = list(c1), list(c2)
        d1[v] = d2[w] = fresh
        if _search(g1, g2, d1, d2):
            return True
    return False


def _same(a: SimpleNet, b: SimpleNet, generalized: bool) -> bool:
    return graph_iso(net_graph(a, generalized), net_graph(b, generalized))


def net_iso(a: SimpleNet, b: SimpleNet) -> bool:
    """Exact isomorphism fixing free ports, including the count of closed loops."""
    return a.nfree == b.nfree and a.loops == b.loops and _same(a, b, False)


def net_iso_generalized(a: SimpleNet, b: SimpleNet) -> bool:
    """Isomorphism after collapsing every (co)contraction tree into one unordered cell.

    Loops and weakenings hanging off such trees are ignored."""
    return a.nfree == b.nfree and _same(a, b, True)


def net_key(net: SimpleNet, generalized: bool = False) -> str:
    """An isomorphism-invariant hash; isomorphic nets always share a key."""
    loops = "" if generalized else net.loops
    return f"{net.nfree}/{loops}/{graph_hash(net_graph(net, generalized))}"


class NetSet:
    """Simple nets kept up to isomorphism."""

    def __init__(self, generalized: bool = False) -> None:
        self.generalized = generalized
        self._buckets: dict[str, list[PortGraph]] = {}
        self.items: list[SimpleNet] = []

    def _key(self, net: SimpleNet) -> tuple[str, PortGraph]:
        g = net_graph(net, self.generalized)
        loops = "" if self.generalized else net.loops
        return f"{net.nfree}/{loops}/{graph_hash(g)}", g

    def add(self, net: SimpleNet) -> bool:
        key, g = self._key(net)
        bucket = self._buckets.setdefault(key, [])
        if any(graph_iso(g, h) for h in bucket):
            return False
        bucket.append(g)
        self.items.append(net)
        return True

    def __contains__(self, net: SimpleNet) -> bool:
        key, g = self._key(net)
        return any(graph_iso(g, h) for h in self._buckets.get(key, []))

    def __len__(self) -> int:
        return len(self.items)


def multiset_iso(xs: list[SimpleNet], ys: list[SimpleNet], generalized: bool = False) -> bool:
    """Sums compared as multisets of simple nets."""
    if len(xs) != len(ys):
        return False
    eq = net_iso_generalized if generalized else net_iso
    left = list(ys)
    for x in xs:
        for k, y in enumerate(left):
            if eq(x, y):
                del left[k]
                break
        else:
            return False
    return True
