"""Solo diagrams: graphs of names and ternary multiedges, reduced by identification edges."""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field, replace

from .solos import Canonical, Polarity, Solo, SoloTerm, canonical_form


@dataclass(frozen=True)
class DiagNode:
    id: int
    bound: bool
    name: str | None = None


@dataclass(frozen=True)
class MultiEdge:
    id: int
    polarity: Polarity
    sources: tuple[int, int, int]
    target: int
    label: str | None = None

    def nodes(self) -> tuple[int, ...]:
        return (*self.sources, self.target)


@dataclass
class Diagram:
    nodes: dict[int, DiagNode] = field(default_factory=dict)
    edges: dict[int, MultiEdge] = field(default_factory=dict)
    idents: list[tuple[int, int]] = field(default_factory=list)

    def copy(self) -> "Diagram":
        return Diagram(dict(self.nodes), dict(self.edges), list(self.idents))

    def edge_by_label(self, label: str) -> MultiEdge:
        for e in self.edges.values():
            if e.label == label:
                return e
        raise KeyError(label)

    def labels(self) -> set[str]:
        return {e.label for e in self.edges.values() if e.label is not None}

    def occurrence_counts(self, node: int) -> tuple[int, int, int]:
        """(source occurrences, target occurrences, identification memberships)."""
        n = sum(e.sources.count(node) for e in self.edges.values())
        k = sum(e.target == node for e in self.edges.values())
        p = sum((a == node) + (b == node) for a, b in self.idents)
        return n, k, p

    def check(self) -> None:
        used = {x for e in self.edges.values() for x in e.nodes()} | {x for ab in self.idents for x in ab}
        if not used <= set(self.nodes):
            raise ValueError("edge mentions an unknown node")
        if set(self.nodes) - used:
            raise ValueError("isolated node")
        labels = [e.label for e in self.edges.values() if e.label is not None]
        if len(labels) != len(set(labels)):
            raise ValueError("labels are not distinct")


def term_to_diagram(t: SoloTerm | Canonical, labels: Mapping[int, str] | str | None = None) -> Diagram:
    """One node per name, one multiedge per solo.

    ``labels`` may map solo positions to labels, be the string ``"auto"`` (labels
    ``e0, e1, ...``), or be None to keep the solos' own labels.
    """
    c = t if isinstance(t, Canonical) else canonical_form(t)
    bound = set(c.bound)
    ids: dict[str, int] = {}
    d = Diagram()
    for x in c.bound:
        if any(x in s.names() for s in c.solos):
            ids[x] = len(ids)
    for s in c.solos:
        for x in (s.subject, *s.objects):
            if x not in ids:
                ids[x] = len(ids)
    for x, i in ids.items():
        d.nodes[i] = DiagNode(i, x in bound, x)
    for k, s in enumerate(c.solos):
        if labels == "auto":
            label = f"e{k}"
        elif isinstance(labels, Mapping):
            label = labels.get(k)
        else:
            label = s.label
        d.edges[k] = MultiEdge(k, s.polarity, tuple(ids[x] for x in s.objects), ids[s.subject], label)  # type: ignore[arg-type]
    return d


def diagram_to_canonical(d: Diagram) -> Canonical:
    """Read a diagram back as a term (identification edges are not representable)."""
    if d.idents:
        raise ValueError("diagram still carries identification edges")

    def nm(i: int) -> str:
        node = d.nodes[i]
        return node.name if node.name is not None else f"n{i}"

    names = {i: nm(i) for i in d.nodes}
    if len(set(names.values())) != len(names):
        names = {i: (f"{nm(i)}_{i}" if d.nodes[i].bound else nm(i)) for i in d.nodes}
    binders = tuple((names[i], None) for i in sorted(d.nodes) if d.nodes[i].bound)
    solos = tuple(
        Solo(e.polarity, names[e.target], tuple(names[x] for x in e.sources), e.label)  # type: ignore[arg-type]
        for _, e in sorted(d.edges.items())
    )
    return Canonical(binders, solos)


# --- isomorphism ------------------------------------------------------------


def _node_sig(d: Diagram, i: int, use_labels: bool) -> tuple:
    node = d.nodes[i]
    roles = []
    for e in d.edges.values():
        for pos, x in enumerate(e.nodes()):
            if x == i:
                roles.append((e.polarity.value, pos, e.label if use_labels else None))
    idn = sum((a == i) + (b == i) for a, b in d.idents)
    return (node.bound, None if node.bound else node.name, tuple(sorted(roles, key=repr)), idn)


def diagram_iso(a: Diagram, b: Diagram) -> dict[int, int] | None:
    """Isomorphism respecting binding, names of free nodes, polarity, source order, target,
    and labels when both diagrams are labeled.  Returns the node mapping or None."""
    if len(a.nodes) != len(b.nodes) or len(a.edges) != len(b.edges) or len(a.idents) != len(b.idents):
        return None
    use_labels = all(e.label is not None for e in a.edges.values()) and all(
        e.label is not None for e in b.edges.values()
    )
    sig_a = {i: _node_sig(a, i, use_labels) for i in a.nodes}
    sig_b = {i: _node_sig(b, i, use_labels) for i in b.nodes}
    if sorted(map(repr, sig_a.values())) != sorted(map(repr, sig_b.values())):
        return None

    # Explore a's edges in an order that keeps the mapped frontier connected.
    items: list[tuple[str, object]] = []
    seen: set[int] = set()
    pending = sorted(a.edges.values(), key=lambda e: e.id)
    ident_left = list(a.idents)
    while pending or ident_left:
        pick = next((e for e in pending if seen & set(e.nodes())), None)
        if pick is not None or pending:
            e = pick or pending[0]
            pending.remove(e)
            items.append(("edge", e))
            seen |= set(e.nodes())
        else:
            ab = next((x for x in ident_left if seen & set(x)), ident_left[0])
            ident_left.remove(ab)
            items.append(("ident", ab))
            seen |= set(ab)
    b_edges = list(b.edges.values())

    def bind(x: int, y: int, fwd: dict, back: dict) -> bool:
        if x in fwd:
            return fwd[x] == y
        if y in back or sig_a[x] != sig_b[y]:
            return False
        fwd[x] = y
        back[y] = x
        return True

    def go(k: int, used_e: frozenset, used_i: tuple, fwd: dict, back: dict) -> dict | None:
        if k == len(items):
            rest_a = [i for i in a.nodes if i not in fwd]
            rest_b = [i for i in b.nodes if i not in back]
            f2, b2 = dict(fwd), dict(back)
            for x in rest_a:
                y = next((y for y in rest_b if y not in b2 and sig_a[x] == sig_b[y]), None)
                if y is None:
                    return None
                f2[x] = y
                b2[y] = x
            return f2
        kind, item = items[k]
        if kind == "edge":
            e = item
            assert isinstance(e, MultiEdge)
            for j, f in enumerate(b_edges):
                if j in used_e or f.polarity is not e.polarity:
                    continue
                if use_labels and f.label != e.label:
                    continue
                f2, b2 = dict(fwd), dict(back)
                if all(bind(x, y, f2, b2) for x, y in zip(e.nodes(), f.nodes())):
                    res = go(k + 1, used_e | {j}, used_i, f2, b2)
                    if res is not None:
                        return res
        else:
            x1, x2 = item  # type: ignore[misc]
            for j, (y1, y2) in enumerate(b.idents):
                if used_i[j]:
                    continue
                for p, q in ((y1, y2), (y2, y1)):
                    f2, b2 = dict(fwd), dict(back)
                    if bind(x1, p, f2, b2) and bind(x2, q, f2, b2):
                        ui = used_i[:j] + (True,) + used_i[j + 1 :]
                        res = go(k + 1, used_e, ui, f2, b2)
                        if res is not None:
                            return res
        return None

    return go(0, frozenset(), (False,) * len(b.idents), {}, {})


def canonical_key(d: Diagram) -> tuple | None:
    """Exact canonical key when every multiedge carries a distinct label, else None."""
    labels = [e.label for e in d.edges.values()]
    if None in labels or len(set(labels)) != len(labels) or d.idents:
        return None
    num: dict[int, int] = {}
    rows = []
    for e in sorted(d.edges.values(), key=lambda e: e.label):  # type: ignore[arg-type, return-value]
        for x in e.nodes():
            if x not in num:
                num[x] = len(num)
        rows.append((e.label, e.polarity.value, tuple(num[x] for x in e.nodes())))
    nodes = tuple(
        (num[i], d.nodes[i].bound, None if d.nodes[i].bound else d.nodes[i].name) for i in sorted(num, key=num.get)
    )
    return (tuple(rows), nodes)


# --- reduction ------------------------------------------------------------


class StuckIdentification(Exception):
    def __init__(self, edge: tuple[int, int], diagram: Diagram) -> None:
        a, b = edge
        na, nb = diagram.nodes[a], diagram.nodes[b]
        super().__init__(f"identification {na.name or a} -- {nb.name or b} cannot be contracted (both endpoints free)")
        self.edge = edge
        self.diagram = diagram


@dataclass(frozen=True)
class DualPair:
    inp: int
    out: int
    acyclic: bool
    freeness_ok: bool


def _classes(d: Diagram, pairs) -> tuple[bool, dict[int, set[int]]]:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    acyclic = True
    for x, y in pairs:
        rx, ry = find(x), find(y)
        if rx == ry:
            acyclic = False
        else:
            parent[rx] = ry
    groups: dict[int, set[int]] = {}
    for x in list(parent):
        groups.setdefault(find(x), set()).add(x)
    return acyclic, groups


def find_dual_pairs(d: Diagram) -> list[DualPair]:
    out = []
    for e1 in sorted(d.edges.values(), key=lambda e: e.id):
        if e1.polarity is not Polarity.IN:
            continue
        for e2 in sorted(d.edges.values(), key=lambda e: e.id):
            if e2.polarity is not Polarity.OUT or e2.target != e1.target:
                continue
            acyclic, groups = _classes(d, zip(e1.sources, e2.sources))
            free_ok = all(sum(not d.nodes[x].bound for x in g) <= 1 for g in groups.values())
            out.append(DualPair(e1.id, e2.id, acyclic, free_ok))
    return out


def erase_and_identify(d: Diagram, e1: int, e2: int) -> Diagram:
    """Drop the two multiedges of a dual pair and add three identification edges."""
    a, b = d.edges[e1], d.edges[e2]
    if a.target != b.target or a.polarity is b.polarity:
        raise ValueError("not a dual pair")
    g = d.copy()
    del g.edges[e1], g.edges[e2]
    g.idents.extend(zip(a.sources, b.sources))
    return g


def contractible(d: Diagram, k: int) -> bool:
    # A self-loop identifies nothing, free or not; it is simply dropped.
    x, y = d.idents[k]
    return x == y or d.nodes[x].bound or d.nodes[y].bound


def contract(d: Diagram, k: int) -> Diagram:
    """Merge the two ends of identification edge number ``k``."""
    x, y = d.idents[k]
    if not contractible(d, k):
        raise StuckIdentification((x, y), d)
    g = d.copy()
    del g.idents[k]
    if x == y:
        return g
    nx, ny = d.nodes[x], d.nodes[y]
    if nx.bound and ny.bound:
        keep, gone = min(x, y), max(x, y)
    else:
        keep, gone = (y, x) if nx.bound else (x, y)

    def sw(i: int) -> int:
        return keep if i == gone else i

    for eid, e in g.edges.items():
        if gone in e.nodes():
            g.edges[eid] = replace(e, sources=tuple(map(sw, e.sources)), target=sw(e.target))
    g.idents = [(sw(p), sw(q)) for p, q in g.idents]
    del g.nodes[gone]
    return g


def drop_isolated(d: Diagram) -> Diagram:
    used = {x for e in d.edges.values() for x in e.nodes()} | {x for ab in d.idents for x in ab}
    g = d.copy()
    g.nodes = {i: n for i, n in d.nodes.items() if i in used}
    return g


def contract_all(d: Diagram) -> Diagram:
    g = d
    while g.idents:
        k = next((k for k in range(len(g.idents)) if contractible(g, k)), None)
        if k is None:
            raise StuckIdentification(g.idents[0], g)
        g = contract(g, k)
    return drop_isolated(g)


def reduce_diagram(d: Diagram, e1: int, e2: int) -> Diagram:
    """Full reduction step; raises StuckIdentification when some identification cannot be contracted."""
    before_nodes = len(d.nodes)
    g = contract_all(erase_and_identify(d, e1, e2))
    assert len(g.edges) == len(d.edges) - 2 and len(g.nodes) <= before_nodes
    return g


def lts_transitions(d: Diagram) -> list[tuple[tuple[str | None, str | None], Diagram]]:
    out = []
    for p in find_dual_pairs(d):
        try:
            h = reduce_diagram(d, p.inp, p.out)
        except StuckIdentification:
            continue
        out.append(((d.edges[p.inp].label, d.edges[p.out].label), h))
    return out


# --- membership in the acyclic transition system ----------------------------


@dataclass
class Membership:
    status: str  # "member", "non-member", "budget"
    witness: list[tuple[str | None, str | None]] = field(default_factory=list)
    states: int = 0

    @property
    def member(self) -> bool:
        return self.status == "member"


def is_ac_member(d: Diagram, budget: int = 10_000) -> Membership:
    """Every reachable diagram must have only acyclic, freeness-respecting redexes."""
    seen: set = set()
    count = 0

    def visit(g: Diagram, path: list) -> Membership | None:
        nonlocal count
        key = canonical_key(g)
        if key is not None:
            if key in seen:
                return None
            seen.add(key)
        count += 1
        if count > budget:
            return Membership("budget", list(path), count)
        pairs = find_dual_pairs(g)
        for p in pairs:
            if not (p.acyclic and p.freeness_ok):
                return Membership("non-member", path + [(g.edges[p.inp].label, g.edges[p.out].label)], count)
        for p in pairs:
            res = visit(reduce_diagram(g, p.inp, p.out), path + [(g.edges[p.inp].label, g.edges[p.out].label)])
            if res is not None:
                return res
        return None

    res = visit(d, [])
    return res if res is not None else Membership("member", [], count)


def iter_reachable(d: Diagram, limit: int = 1000) -> Iterator[Diagram]:
    """Reachable diagrams (labels distinct), each once."""
    seen: set = set()
    stack = [d]
    while stack and len(seen) < limit:
        g = stack.pop()
        key = canonical_key(g)
        if key in seen:
            continue
        seen.add(key)
        yield g
        stack.extend(h for _, h in lts_transitions(g))


# --- DOT --------------------------------------------------------------------


def to_dot(d: Diagram, name: str = "diagram") -> str:
    lines = [f"graph {name} {{", "  node [shape=circle, width=0.3, label=\"\"];"]
    for i, n in sorted(d.nodes.items()):
        fill = "black" if n.bound else "white"
        lines.append(f'  n{i} [style=filled, fillcolor={fill}, xlabel="{n.name or i}"];')
    for eid, e in sorted(d.edges.items()):
        lines.append(f'  e{eid} [shape=box, width=0.2, height=0.2, label="{e.label or ""}"];')
        for k, s in enumerate(e.sources, start=1):
            lines.append(f'  n{s} -- e{eid} [taillabel="{k}"];')
        if e.polarity is Polarity.IN:
            lines.append(f"  e{eid} -- n{e.target} [dir=forward];")
        else:
            lines.append(f"  e{eid} -- n{e.target} [dir=back];")
    for a, b in d.idents:
        lines.append(f"  n{a} -- n{b} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
