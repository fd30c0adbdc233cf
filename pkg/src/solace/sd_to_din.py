"""Solo diagrams as interaction nets, and a bisimulation harness between the two LTSs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagrams import Diagram, StuckIdentification, canonical_key, contract, drop_isolated, lts_transitions, reduce_diagram
from .din.core import TAU, NetBuilder, SimpleNet, Symbol
from .din.engine import Equivalence, din_lts, din_lts_transition, sim_d_report
from .din.fmt import format_net
from .din.iso import net_key
from .din.rules import STRUCTURAL, find_net_redexes
from .din.toolbox import comm_area, prefix_cell
from .solos import Polarity

S = Symbol


def occurrences(g: Diagram) -> dict[int, list[tuple]]:
    """Per node, its occurrences in the order that assigns area pairs.

    Multiedge occurrences come first, by edge id then position (sources 0..2,
    target 3); identification memberships follow, by edge index then end."""
    occ: dict[int, list[tuple]] = {i: [] for i in g.nodes}
    for eid, e in sorted(g.edges.items()):
        for pos, x in enumerate(e.sources):
            occ[x].append(("edge", eid, pos))
        occ[e.target].append(("edge", eid, 3))
    for k, (a, b) in enumerate(g.idents):
        occ[a].append(("ident", k, 0))
        occ[b].append(("ident", k, 1))
    return occ


@dataclass
class Translation:
    net: SimpleNet
    areas: dict[int, int] = field(default_factory=dict)
    """Order of the area standing for each node."""


def translate_diagram_detailed(g: Diagram) -> Translation:
    occ = occurrences(g)
    b = NetBuilder()
    pair_of: dict[tuple, tuple[object, object]] = {}
    orders = {}
    for node, occs in sorted(occ.items()):
        if not occs:
            continue
        area, handle = comm_area(len(occs) - 2)
        orders[node] = handle.order
        ends = b.include(area)
        for o, (pp, pm) in zip(occs, handle.pairs):
            pair_of[o] = (ends[pp], ends[pm])
    for eid, e in sorted(g.edges.items()):
        label = e.label if e.label is not None else TAU
        cell = b.include(prefix_cell(e.polarity, 3, label))
        plus, minus = pair_of[("edge", eid, 3)]
        if e.polarity is Polarity.IN:
            b.connect(cell[0], minus)
            b.connect((b.cell(S.WEAK), 0), plus)
        else:
            b.connect(cell[0], plus)
            b.connect((b.cell(S.COWEAK), 0), minus)
        for pos in range(3):
            p, m = pair_of[("edge", eid, pos)]
            b.connect(cell[1 + 2 * pos], p)
            b.connect(cell[2 + 2 * pos], m)
    for k in range(len(g.idents)):
        p1, m1 = pair_of[("ident", k, 0)]
        p2, m2 = pair_of[("ident", k, 1)]
        b.connect(p1, m2)
        b.connect(m1, p2)
    return Translation(b.build(), orders)


def translate_diagram(g: Diagram) -> SimpleNet:
    """Canonical areas for nodes, 3-ary prefix cells for multiedges, wire pairs for
    identification edges.  The result is closed."""
    return translate_diagram_detailed(g).net


def normality_violations(net: SimpleNet) -> list[str]:
    """Deterministic redexes other than structural ones on (co)weakenings."""
    bad = []
    for r in find_net_redexes(net, ()):
        if not r.enabled:
            continue
        syms = {net.cells[c].symbol for c in r.cells}
        if r.family == STRUCTURAL and syms & {S.WEAK, S.COWEAK}:
            continue
        bad.append(f"{r.rule} between cells {r.a} and {r.b}")
    return bad


# --- squares -------------------------------------------------------------------


@dataclass
class SquareResult:
    ok: bool
    label: tuple[str, str]
    message: str = ""
    exhausted: bool = False
    join_steps: tuple[int, int] | None = None
    net_digest: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _digest(net: SimpleNet) -> str:
    return net_key(net).rsplit("/", 1)[-1][:10]


def _match(candidates: list[SimpleNet], target: SimpleNet, depth: int | None):
    """First candidate joining ``target`` under sim_d, with its report."""
    reports = []
    for t in candidates:
        rep = sim_d_report(t, target, depth)
        reports.append(rep)
        if rep.verdict is Equivalence.EQUIVALENT:
            return t, rep, reports
    return None, None, reports


def check_square_forward(g: Diagram, label: tuple[str, str], h: Diagram, depth: int | None = None) -> SquareResult:
    l, m = label
    s = translate_diagram(g)
    found = din_lts_transition(s, l, m, depth)
    if not found.reducts:
        why = "search depth exhausted" if found.exhausted else "no net transition"
        return SquareResult(False, label, why, found.exhausted)
    target = translate_diagram(h)
    t, rep, reports = _match(found.reducts, target, depth)
    if t is None:
        return SquareResult(False, label, "no net reduct joins the translated diagram reduct",
                            any(r.exhausted for r in reports))
    return SquareResult(True, label, "", False, rep.steps, _digest(t))


def check_square_backward(g: Diagram, s: SimpleNet, label: tuple[str, str], depth: int | None = None,
                          reducts: list[SimpleNet] | None = None) -> SquareResult:
    l, m = label
    if reducts is None:
        found = din_lts_transition(s, l, m, depth)
        reducts, exhausted = found.reducts, found.exhausted
    else:
        exhausted = False
    if not reducts:
        return SquareResult(False, label, "no net transition to match", exhausted)
    ein = next((e for e in g.edges.values() if e.label == l), None)
    eout = next((e for e in g.edges.values() if e.label == m), None)
    if ein is None or eout is None:
        return SquareResult(False, label, "labels not found in the diagram")
    if ein.polarity is not Polarity.IN or eout.polarity is not Polarity.OUT or ein.target != eout.target:
        return SquareResult(False, label, f"multiedges {l} and {m} are not a dual pair")
    try:
        h = reduce_diagram(g, ein.id, eout.id)
    except StuckIdentification as exc:
        return SquareResult(False, label, f"diagram step is stuck: {exc}")
    target = translate_diagram(h)
    for t in reducts:
        rep = sim_d_report(t, target, depth)
        if rep.verdict is not Equivalence.EQUIVALENT:
            return SquareResult(False, label,
                                "net reduct does not join the translated diagram reduct:\n"
                                f"net side:\n{format_net(t)}diagram side:\n{format_net(target)}",
                                rep.exhausted)
    return SquareResult(True, label, "", False, rep.steps, _digest(reducts[0]))


def check_ident_contraction(g: Diagram, k: int, depth: int | None = None) -> bool:
    """Contracting identification edge ``k`` then translating agrees (sim_d) with
    translating, which leaves the two areas to aggregate under reduction."""
    a, b = g.idents[k]
    if a == b:
        raise ValueError("identification edge is a self-loop; the two areas would coincide")
    if not (g.nodes[a].bound or g.nodes[b].bound):
        raise ValueError("identification edge joins two free nodes")
    before = translate_diagram(g)
    after = translate_diagram(drop_isolated(contract(g, k)))
    return sim_d_report(before, after, depth).verdict is Equivalence.EQUIVALENT


# --- harness ---------------------------------------------------------------------


@dataclass
class Row:
    state: int
    label: tuple[str, str]
    diagram_reduct: int | None
    net_digest: str
    join_steps: tuple[int, int] | None
    ok: bool
    note: str = ""


@dataclass
class BisimReport:
    rows: list[Row] = field(default_factory=list)
    mismatches: list[str] = field(default_factory=list)
    exhaustions: int = 0
    states: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.exhaustions == 0

    def table(self) -> str:
        lines = ["state  label        diagram-reduct  net-digest  join  status"]
        for r in self.rows:
            lab = f"({r.label[0]},{r.label[1]})"
            dr = "-" if r.diagram_reduct is None else str(r.diagram_reduct)
            js = "-" if r.join_steps is None else f"{r.join_steps[0]}+{r.join_steps[1]}"
            status = "ok" if r.ok else f"FAIL {r.note}"
            lines.append(f"{r.state:<6} {lab:<12} {dr:<15} {r.net_digest:<11} {js:<5} {status}")
        return "\n".join(lines) + "\n"


def bisim_check(g: Diagram, depth: int | None = None, max_states: int = 200) -> BisimReport:
    """Compare the transitions of ``g`` and of its translation, state by state.

    Diagram states are explored breadth first, each isomorphism class once."""
    rep = BisimReport()
    ids: dict[object, int] = {}
    queue: list[tuple[int, Diagram]] = []

    def state_id(h: Diagram) -> int:
        key = canonical_key(h)
        if key is None:
            key = ("unlabelled", len(ids))
        if key not in ids:
            ids[key] = len(ids)
            queue.append((ids[key], h))
        return ids[key]

    state_id(g)
    while queue:
        state, cur = queue.pop(0)
        if state >= max_states:
            rep.exhaustions += 1
            break
        rep.states += 1
        s = translate_diagram(cur)
        d_moves = {}
        for lab, h in lts_transitions(cur):
            if lab[0] is None or lab[1] is None:
                raise ValueError("the harness needs a labelled diagram")
            d_moves[lab] = h
        n_moves = din_lts(s, depth)
        rep.exhaustions += sum(tr.exhausted for tr in n_moves.values())
        n_labels = {lab for lab, tr in n_moves.items() if tr.reducts}
        if set(d_moves) != n_labels:
            only_d = sorted(set(d_moves) - n_labels)
            only_n = sorted(n_labels - set(d_moves))
            rep.mismatches.append(f"state {state}: label sets differ (diagram only {only_d}, net only {only_n})")
        for lab, h in sorted(d_moves.items()):
            child = state_id(h)
            fwd = check_square_forward(cur, lab, h, depth)
            rep.exhaustions += fwd.exhausted
            if not fwd.ok:
                rep.mismatches.append(f"state {state} {lab}: forward square: {fwd.message}")
            rep.rows.append(Row(state, lab, child, fwd.net_digest, fwd.join_steps, fwd.ok, "" if fwd.ok else "forward"))
        for lab in sorted(n_labels):
            # The reducts found by din_lts also serve the backward check.
            back = check_square_backward(cur, s, lab, depth, n_moves[lab].reducts)
            if not back.ok:
                rep.mismatches.append(f"state {state} {lab}: backward square: {back.message.splitlines()[0].rstrip(':')}")
                rep.rows.append(Row(state, lab, None, _digest(n_moves[lab].reducts[0]), None, False, "backward"))
    return rep


__all__ = [
    "BisimReport",
    "Row",
    "SquareResult",
    "Translation",
    "bisim_check",
    "check_ident_contraction",
    "check_square_backward",
    "check_square_forward",
    "normality_violations",
    "occurrences",
    "translate_diagram",
    "translate_diagram_detailed",
]
