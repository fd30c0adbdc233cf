"""Monadic finitary pi-calculus: terms, congruence, substitution, reduction."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from typing import Union

from .names import NameSupply


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Input:
    subject: str
    binder: str
    body: "PiTerm"


@dataclass(frozen=True)
class Output:
    subject: str
    obj: str
    body: "PiTerm"


@dataclass(frozen=True)
class Par:
    left: "PiTerm"
    right: "PiTerm"


@dataclass(frozen=True)
class Nu:
    binder: str
    body: "PiTerm"


PiTerm = Union[Nil, Input, Output, Par, Nu]


def par_all(terms: list[PiTerm]) -> PiTerm:
    terms = [t for t in terms if not isinstance(t, Nil)]
    if not terms:
        return Nil()
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Par(t, out)
    return out


def nu_all(binders, body: PiTerm) -> PiTerm:
    for x in reversed(list(binders)):
        body = Nu(x, body)
    return body


def free_names(t: PiTerm) -> set[str]:
    match t:
        case Nil():
            return set()
        case Input(u, x, p):
            return {u} | (free_names(p) - {x})
        case Output(u, x, p):
            return {u, x} | free_names(p)
        case Par(p, q):
            return free_names(p) | free_names(q)
        case Nu(x, p):
            return free_names(p) - {x}
    raise TypeError(t)


def all_names(t: PiTerm) -> set[str]:
    match t:
        case Nil():
            return set()
        case Input(u, x, p) | Output(u, x, p):
            return {u, x} | all_names(p)
        case Par(p, q):
            return all_names(p) | all_names(q)
        case Nu(x, p):
            return {x} | all_names(p)
    raise TypeError(t)


def size(t: PiTerm) -> int:
    """Number of constructors, counting Nil."""
    match t:
        case Nil():
            return 1
        case Input(_, _, p) | Output(_, _, p) | Nu(_, p):
            return 1 + size(p)
        case Par(p, q):
            return 1 + size(p) + size(q)
    raise TypeError(t)


def substitute(t: PiTerm, frm: str, to: str, supply: NameSupply | None = None) -> PiTerm:
    """Replace free ``frm`` by ``to``, renaming binders that would capture ``to``."""
    if frm == to:
        return t
    if supply is None:
        supply = NameSupply(all_names(t) | {frm, to})

    def go(t: PiTerm) -> PiTerm:
        match t:
            case Nil():
                return t
            case Output(u, x, p):
                return Output(to if u == frm else u, to if x == frm else x, go(p))
            case Par(p, q):
                return Par(go(p), go(q))
            case Input(u, x, p):
                u2 = to if u == frm else u
                if x == frm:
                    return Input(u2, x, p)
                if x == to and frm in free_names(p):
                    y = supply.fresh(x)
                    return Input(u2, y, go(substitute(p, x, y, supply)))
                return Input(u2, x, go(p))
            case Nu(x, p):
                if x == frm:
                    return t
                if x == to and frm in free_names(p):
                    y = supply.fresh(x)
                    return Nu(y, go(substitute(p, x, y, supply)))
                return Nu(x, go(p))
        raise TypeError(t)

    return go(t)


# --- canonical form -------------------------------------------------------


@dataclass(frozen=True)
class Guard:
    kind: str  # "in" or "out"
    subject: str
    name: str  # input binder or output object
    cont: "Level"


@dataclass(frozen=True)
class Level:
    """``new binders.(g1 | ... | gn)`` where each g is a prefixed process."""

    binders: tuple[str, ...]
    guards: tuple[Guard, ...]

    def free_names(self) -> set[str]:
        out: set[str] = set()
        for g in self.guards:
            inner = g.cont.free_names()
            if g.kind == "in":
                inner.discard(g.name)
            else:
                inner.add(g.name)
            out |= inner | {g.subject}
        return out - set(self.binders)

    def to_term(self) -> PiTerm:
        parts: list[PiTerm] = []
        for g in self.guards:
            body = g.cont.to_term()
            parts.append(Input(g.subject, g.name, body) if g.kind == "in" else Output(g.subject, g.name, body))
        return nu_all(self.binders, par_all(parts))


def uniquify(t: PiTerm, supply: NameSupply | None = None) -> PiTerm:
    """Alpha-rename so binders are pairwise distinct and distinct from free names."""
    if supply is None:
        supply = NameSupply(all_names(t))
    used = set(free_names(t))

    def go(t: PiTerm, env: dict[str, str]) -> PiTerm:
        match t:
            case Nil():
                return t
            case Output(u, x, p):
                return Output(env.get(u, u), env.get(x, x), go(p, env))
            case Par(p, q):
                return Par(go(p, env), go(q, env))
            case Input(u, x, p):
                y = supply.fresh(x) if x in used else x
                used.add(y)
                return Input(env.get(u, u), y, go(p, {**env, x: y}))
            case Nu(x, p):
                y = supply.fresh(x) if x in used else x
                used.add(y)
                return Nu(y, go(p, {**env, x: y}))
        raise TypeError(t)

    return go(t, {})


def _flatten(t: PiTerm) -> Level:
    binders: list[str] = []
    guards: list[Guard] = []

    def collect(t: PiTerm) -> None:
        match t:
            case Nil():
                pass
            case Par(p, q):
                collect(p)
                collect(q)
            case Nu(x, p):
                binders.append(x)
                collect(p)
            case Input(u, x, p):
                guards.append(Guard("in", u, x, _flatten(p)))
            case Output(u, x, p):
                guards.append(Guard("out", u, x, _flatten(p)))

    collect(t)
    probe = Level((), tuple(guards))
    live = probe.free_names()
    return Level(tuple(x for x in binders if x in live), tuple(guards))


def canonical_form(t: PiTerm) -> Level:
    return _flatten(uniquify(t))


def canonicalize(t: PiTerm) -> PiTerm:
    return canonical_form(t).to_term()


# --- congruence -----------------------------------------------------------


def _signature(level: Level, free: frozenset[str]) -> tuple:
    def nm(x: str) -> str:
        return x if x in free else "*"

    parts = sorted(
        (g.kind, nm(g.subject), nm(g.name) if g.kind == "out" else "*", _signature(g.cont, free))
        for g in level.guards
    )
    return (len(level.binders), tuple(parts))


@dataclass(frozen=True)
class _State:
    fwd: dict
    back: dict
    site_a: dict
    site_b: dict


def _bind(x: str, y: str, st: _State) -> _State | None:
    sa, sb = st.site_a.get(x), st.site_b.get(y)
    if sa is None or sb is None:
        return st if (sa is None and sb is None and x == y) else None
    if x in st.fwd:
        return st if st.fwd[x] == y else None
    if y in st.back or sa != sb:
        return None
    return _State({**st.fwd, x: y}, {**st.back, y: x}, st.site_a, st.site_b)


def _match_levels(la: Level, lb: Level, depth: int, st: _State) -> Iterator[_State]:
    if len(la.binders) != len(lb.binders) or len(la.guards) != len(lb.guards):
        return
    site_a = {**st.site_a, **{x: ("L", depth) for x in la.binders}}
    site_b = {**st.site_b, **{y: ("L", depth) for y in lb.binders}}
    yield from _match_guards(list(la.guards), list(lb.guards), depth, _State(st.fwd, st.back, site_a, site_b))


def _match_guards(gas: list[Guard], gbs: list[Guard], depth: int, st: _State) -> Iterator[_State]:
    if not gas:
        yield st
        return
    g, rest = gas[0], gas[1:]
    for i, h in enumerate(gbs):
        if h.kind != g.kind:
            continue
        st1 = _bind(g.subject, h.subject, st)
        if st1 is None:
            continue
        if g.kind == "out":
            st2 = _bind(g.name, h.name, st1)
        else:
            site = ("I", depth, i)
            st2 = _State(
                {**st1.fwd, g.name: h.name},
                {**st1.back, h.name: g.name},
                {**st1.site_a, g.name: site},
                {**st1.site_b, h.name: site},
            )
        if st2 is None:
            continue
        for st3 in _match_levels(g.cont, h.cont, depth + 1, st2):
            yield from _match_guards(rest, gbs[:i] + gbs[i + 1 :], depth, st3)


def congruent(a: PiTerm, b: PiTerm) -> bool:
    la, lb = canonical_form(a), canonical_form(b)
    fa, fb = la.free_names(), lb.free_names()
    if fa != fb:
        return False
    free = frozenset(fa)
    if _signature(la, free) != _signature(lb, free):
        return False
    # Names of b that clash with a's bound names are kept apart by the site maps.
    return next(_match_levels(la, lb, 0, _State({}, {}, {}, {})), None) is not None


# --- reduction ------------------------------------------------------------


def reduce_steps(t: PiTerm) -> list[PiTerm]:
    """All one-step reducts, canonicalized, one representative per congruence class."""
    level = canonical_form(t)
    supply = NameSupply(all_names(level.to_term()))
    guards = list(level.guards)
    found: list[PiTerm] = []
    for i, g in enumerate(guards):
        if g.kind != "out":
            continue
        for j, h in enumerate(guards):
            if h.kind != "in" or h.subject != g.subject:
                continue
            rest = [guards[k] for k in range(len(guards)) if k not in (i, j)]
            received = substitute(h.cont.to_term(), h.name, g.name, supply)
            body = par_all([Level((), tuple(rest)).to_term(), g.cont.to_term(), received])
            reduct = canonicalize(nu_all(level.binders, body))
            if not any(congruent(reduct, r) for r in found):
                found.append(reduct)
    return found
