"""Reduction strategies over nets: normalisation, sum expansion, closures, sim_d and the LTS.

Each search counts only non-deterministic and contraction/cocontraction steps
against its depth.  The remaining rules strictly shrink the pair
(binary cells, all cells), so they always run to completion.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .core import FREE, TAU, Net, SimpleNet, Symbol
from .iso import NetSet, multiset_iso, net_iso, net_iso_generalized, net_key
from .rules import (
    COMMUNICATION,
    NONDETERMINISTIC,
    STRUCTURAL,
    Redex,
    classify,
    orient,
    rewrite_inplace,
)

TARGET, CHEAP, BRANCH, GRID = 0, 1, 2, 3
Priority = Callable[[SimpleNet, Redex], "int | None"]


def depth_override(default: int) -> int:
    """``SOLACE_DEPTH`` replaces every default search depth when set."""
    raw = os.environ.get("SOLACE_DEPTH")
    return int(raw) if raw else default


def is_grid(net: SimpleNet, r: Redex) -> bool:
    return {net.cells[r.a].symbol, net.cells[r.b].symbol} == {Symbol.CONTR, Symbol.COCONTR}


def make_priority(R: Iterable[str] = (), target: tuple[str, str] | None = None) -> Priority:
    """Bucket for each redex of R-reduction (tau-only communication), or None when disabled.

    With ``target = (l, m)`` the communication between coder(l) and der(m) gets
    the top bucket and is reported instead of being fired."""
    R = frozenset(R)

    def prio(net: SimpleNet, r: Redex) -> int | None:
        if r.family == COMMUNICATION:
            if target is not None:
                labels = {net.cells[c].symbol: net.cells[c].label for c in r.cells}
                if labels.get(Symbol.CODER) == target[0] and labels.get(Symbol.DER) == target[1]:
                    return TARGET
            return CHEAP if r.enabled else None
        if r.family == NONDETERMINISTIC:
            return BRANCH if r.enabled else None
        if r.family == STRUCTURAL and is_grid(net, r):
            return GRID
        return CHEAP

    return prio


class Reducer:
    """A net under rewriting, with its enabled redexes sorted into priority buckets."""

    __slots__ = ("net", "R", "comm", "priority", "buckets", "steps", "pick")

    def __init__(self, net: SimpleNet, R: Iterable[str] = (), priority: Priority | None = None,
                 pick: Callable = min, _scan: bool = True) -> None:
        self.net = net
        self.R = frozenset(R)
        self.comm = frozenset({TAU})
        self.priority = priority or make_priority(self.R)
        self.buckets: list[set[tuple[int, int]]] = [set() for _ in range(4)]
        self.steps = 0
        self.pick = pick
        if _scan:
            self._scan(net.cells)

    def clone(self) -> "Reducer":
        r = Reducer(self.net.copy(), self.R, self.priority, self.pick, _scan=False)
        r.buckets = [set(b) for b in self.buckets]
        r.steps = self.steps
        return r

    def _classify(self, a: int, b: int) -> Redex:
        return classify(self.net, a, b, self.R, self.comm)

    def _scan(self, cells: Iterable[int]) -> None:
        net = self.net
        for c in list(cells):
            if c not in net.cells:
                continue
            q = net.link[(c, 0)]
            if q[0] == FREE or q[1] != 0:
                continue
            pair = (min(c, q[0]), max(c, q[0]))
            p = self.priority(net, self._classify(*pair))
            if p is not None:
                self.buckets[p].add(pair)

    def _live(self, pair: tuple[int, int]) -> bool:
        a, b = pair
        return a in self.net.cells and b in self.net.cells and self.net.link[(a, 0)] == (b, 0)

    def next(self, limit: int = GRID) -> tuple[int, Redex] | None:
        """Highest-priority live redex (bucket index, redex); None when normal."""
        for k in range(limit + 1):
            bucket = self.buckets[k]
            while bucket:
                pair = self.pick(bucket)
                if self._live(pair):
                    return k, self._classify(*pair)
                bucket.discard(pair)
        return None

    def fire(self, redex: Redex, variant: int = 0) -> None:
        a, b, _, variants = orient(self.net, redex.a, redex.b)
        for bucket in self.buckets:
            bucket.discard((min(a, b), max(a, b)))
        touched = rewrite_inplace(self.net, a, b, variants[variant])
        self.steps += 1
        self._scan(touched)

    def variants(self, redex: Redex) -> int:
        return len(orient(self.net, redex.a, redex.b)[3])


def _run_deterministic(r: Reducer, fuel: int, limit: int = GRID) -> tuple[int, Redex] | None:
    """Fire cheap and grid redexes while fuel lasts; return the first redex left over."""
    while True:
        got = r.next(limit)
        if got is None:
            return None
        k, redex = got
        if k in (TARGET, BRANCH):
            return got
        if k == GRID:
            if fuel <= 0:
                return got
            fuel -= 1
        r.fire(redex)


@dataclass
class Normalized:
    net: SimpleNet
    steps: int
    exhausted: bool


def normalize_d(net: SimpleNet, depth: int | None = None) -> Normalized:
    """Deterministic reduction (no non-deterministic step) to normal form, or until
    ``depth`` contraction/cocontraction steps have been spent."""
    if depth is None:
        depth = depth_override(2 * len(net))
    r = Reducer(net.copy())
    left = _run_deterministic(r, depth)
    return Normalized(r.net, r.steps, left is not None)


@dataclass
class Expansion:
    summands: list[SimpleNet]
    exhausted: bool

    def __iter__(self) -> Iterator[SimpleNet]:
        return iter(self.summands)

    def __len__(self) -> int:
        return len(self.summands)


def expand(net: SimpleNet, R: Iterable[str], depth: int | None = None) -> Expansion:
    """Normalise under R-reduction, splitting the sum at every non-deterministic step.

    Summands still holding redexes when the depth runs out are kept and flagged."""
    if depth is None:
        depth = depth_override(4 * len(net))
    out: list[SimpleNet] = []
    exhausted = False
    stack = [(Reducer(net.copy(), R), depth)]
    while stack:
        r, fuel = stack.pop()
        while True:
            got = r.next()
            if got is None:
                out.append(r.net)
                break
            k, redex = got
            if k == CHEAP:
                r.fire(redex)
                continue
            if fuel <= 0:
                exhausted = True
                out.append(r.net)
                break
            fuel -= 1
            n = r.variants(redex)
            for v in range(n - 1, 0, -1):
                child = r.clone()
                child.fire(redex, v)
                stack.append((child, fuel))
            if n == 0:
                break
            r.fire(redex, 0)
    return Expansion(out, exhausted)


class Equivalence(enum.Enum):
    EQUIVALENT = "equivalent"
    UNKNOWN = "unknown"


@dataclass
class SimReport:
    verdict: Equivalence
    steps: tuple[int, int]
    exhausted: bool

    def __bool__(self) -> bool:
        return self.verdict is Equivalence.EQUIVALENT


def _interface(net: SimpleNet) -> list:
    return net.interface_types()


def sim_d_report(a: SimpleNet, b: SimpleNet, depth: int | None = None) -> SimReport:
    if a.nfree != b.nfree or not _compatible(_interface(a), _interface(b)):
        raise ValueError(f"interfaces differ: {_show(a)} vs {_show(b)}")
    if net_iso(a, b):
        return SimReport(Equivalence.EQUIVALENT, (0, 0), False)
    na = normalize_d(a, depth if depth is not None else depth_override(2 * len(a)))
    nb = normalize_d(b, depth if depth is not None else depth_override(2 * len(b)))
    same = net_iso_generalized(na.net, nb.net)
    verdict = Equivalence.EQUIVALENT if same else Equivalence.UNKNOWN
    return SimReport(verdict, (na.steps, nb.steps), na.exhausted or nb.exhausted)


def sim_d(a: SimpleNet, b: SimpleNet, depth: int | None = None) -> Equivalence:
    """EQUIVALENT when both nets reach the same deterministic normal form (up to the
    shape of generalized (co)contractions) within ``depth``; UNKNOWN otherwise."""
    return sim_d_report(a, b, depth).verdict


def _compatible(xs: list, ys: list) -> bool:
    return all(x is None or y is None or x is y for x, y in zip(xs, ys))


def _show(net: SimpleNet) -> str:
    types = [t.value if t is not None else "*" for t in net.interface_types()]
    return "(" + " ".join(types) + ")"


# --- the labelled transition system ---------------------------------------


@dataclass
class Transitions:
    """Reducts of one (l, m) transition; ``exhausted`` marks a truncated search."""

    reducts: list[SimpleNet] = field(default_factory=list)
    exhausted: bool = False
    branches: int = 0

    def __iter__(self) -> Iterator[SimpleNet]:
        return iter(self.reducts)

    def __len__(self) -> int:
        return len(self.reducts)


def din_lts_transition(s: SimpleNet, l: str, m: str, depth: int | None = None) -> Transitions:
    """All t with s ~>*_{l,m} s0 + S, s0 holding the coder(l)/der(m) redex, s0 -> t."""
    if l == m:
        raise ValueError("transition labels must differ")
    if depth is None:
        depth = depth_override(4 * len(s))
    labels = {c.label for c in s.cells.values()}
    found = Transitions()
    if l not in labels or m not in labels:
        return found
    seen = NetSet()
    prio = make_priority({l, m}, (l, m))
    stack = [(Reducer(s.copy(), {l, m}, prio), depth)]
    while stack:
        r, fuel = stack.pop()
        found.branches += 1
        while True:
            got = r.next()
            if got is None:
                break
            k, redex = got
            if k == TARGET:
                r.fire(redex)
                seen.add(r.net)
                break
            if k == CHEAP:
                r.fire(redex)
                continue
            if fuel <= 0:
                found.exhausted = True
                break
            fuel -= 1
            if k == GRID:
                r.fire(redex)
                continue
            n = r.variants(redex)
            for v in range(n - 1, 0, -1):
                child = r.clone()
                child.fire(redex, v)
                stack.append((child, fuel))
            if n == 0:
                break
            r.fire(redex, 0)
    found.reducts = seen.items
    return found


def transition_labels(s: SimpleNet) -> list[tuple[str, str]]:
    """Candidate (coder label, der label) pairs present in ``s``."""
    coders = sorted({c.label for c in s.cells.values() if c.symbol is Symbol.CODER and c.label != TAU})
    ders = sorted({c.label for c in s.cells.values() if c.symbol is Symbol.DER and c.label != TAU})
    return [(l, m) for l in coders for m in ders if l != m]  # type: ignore[misc]


def din_lts(s: SimpleNet, depth: int | None = None) -> dict[tuple[str, str], Transitions]:
    """Every transition of ``s``; the net is first brought to deterministic normal form."""
    pre = normalize_d(s, depth).net
    out = {}
    for l, m in transition_labels(pre):
        t = din_lts_transition(pre, l, m, depth if depth is not None else None)
        if t.reducts or t.exhausted:
            out[(l, m)] = t
    return out


# --- closures on sums --------------------------------------------------------


def _redexes(net: SimpleNet, R: frozenset[str]) -> list[Redex]:
    r = Reducer(net, R)
    out = []
    for bucket in r.buckets[CHEAP:]:
        for pair in sorted(bucket):
            out.append(r._classify(*pair))
    return out


def step_sum(summands: list[SimpleNet], R: Iterable[str]) -> Iterator[list[SimpleNet]]:
    """Every one-step R-reduct of a sum (one redex in one summand)."""
    R = frozenset(R)
    for i, s in enumerate(summands):
        for redex in _redexes(s, R):
            yield summands[:i] + _fire_copy(s, redex) + summands[i + 1 :]


def _fire_copy(s: SimpleNet, redex: Redex) -> list[SimpleNet]:
    a, b, _, variants = orient(s, redex.a, redex.b)
    res = []
    for v in variants:
        t = s.copy()
        rewrite_inplace(t, a, b, v)
        res.append(t)
    return res


def _sum_key(summands: list[SimpleNet]) -> tuple:
    return tuple(sorted(net_key(s) for s in summands))


class _SumSet:
    def __init__(self) -> None:
        self.buckets: dict[tuple, list[list[SimpleNet]]] = {}

    def add(self, summands: list[SimpleNet]) -> bool:
        bucket = self.buckets.setdefault(_sum_key(summands), [])
        if any(multiset_iso(summands, other) for other in bucket):
            return False
        bucket.append(summands)
        return True

    def find(self, summands: list[SimpleNet]) -> bool:
        return any(multiset_iso(summands, o) for o in self.buckets.get(_sum_key(summands), []))

    def all(self) -> list[list[SimpleNet]]:
        return [x for b in self.buckets.values() for x in b]


@dataclass
class Closure:
    nets: list[Net]
    exhausted: bool


def reduce_closure(S: Net | SimpleNet, R: Iterable[str], depth: int) -> Closure:
    """Breadth-first set of sums reachable in at most ``depth`` steps."""
    start = Net.of(S) if isinstance(S, SimpleNet) else S
    seen = _SumSet()
    seen.add(list(start.summands))
    frontier = [list(start.summands)]
    exhausted = False
    for level in range(depth + 1):
        nxt = []
        for cur in frontier:
            for red in step_sum(cur, R):
                if level == depth:
                    exhausted = True
                    break
                if seen.add(red):
                    nxt.append(red)
        frontier = nxt
        if not frontier:
            break
    return Closure([Net(x, start.nfree) for x in seen.all()], exhausted)


def run_strategy(S: Net | SimpleNet, R: Iterable[str], depth: int, rightmost: bool = False) -> tuple[list[SimpleNet], bool]:
    """A maximal sequence of single steps: the first (or last) redex of the first
    (or last) reducible summand.  Returns the final sum and whether it is normal."""
    R = frozenset(R)
    cur = list((Net.of(S) if isinstance(S, SimpleNet) else S).summands)
    for _ in range(depth):
        order = range(len(cur) - 1, -1, -1) if rightmost else range(len(cur))
        for i in order:
            reds = _redexes(cur[i], R)
            if reds:
                redex = reds[-1] if rightmost else reds[0]
                cur = cur[:i] + _fire_copy(cur[i], redex) + cur[i + 1 :]
                break
        else:
            return cur, True
    return cur, not any(_redexes(s, R) for s in cur)


def joinable(x: list[SimpleNet], y: list[SimpleNet], R: Iterable[str], depth: int) -> bool:
    """Do two sums share a reduct within ``depth`` further steps each?"""
    if multiset_iso(x, y):
        return True
    nfree = x[0].nfree if x else (y[0].nfree if y else 0)
    cx = reduce_closure(Net(x, nfree), R, depth)
    reach = _SumSet()
    for n in cx.nets:
        reach.add(list(n.summands))
    cy = reduce_closure(Net(y, nfree), R, depth)
    return any(reach.find(list(n.summands)) for n in cy.nets)


__all__ = [
    "Closure",
    "Equivalence",
    "Expansion",
    "Normalized",
    "Reducer",
    "SimReport",
    "Transitions",
    "din_lts",
    "din_lts_transition",
    "expand",
    "joinable",
    "make_priority",
    "normalize_d",
    "reduce_closure",
    "run_strategy",
    "sim_d",
    "sim_d_report",
    "step_sum",
    "transition_labels",
]
