"""Triadic solos calculus: syntax, canonical forms, unification-based reduction."""

from __future__ import annotations

import enum
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from typing import Union

from .names import NameSupply


class Polarity(enum.Enum):
    IN = "?"
    OUT = "!"

    @property
    def dual(self) -> "Polarity":
        return Polarity.OUT if self is Polarity.IN else Polarity.IN


class SoloType(enum.Enum):
    V = "V"
    W = "W"

    @property
    def flip(self) -> "SoloType":
        return SoloType.W if self is SoloType.V else SoloType.V


@dataclass(frozen=True)
class Solo:
    polarity: Polarity
    subject: str
    objects: tuple[str, str, str]
    label: str | None = None

    def __post_init__(self) -> None:
        if len(self.objects) != 3:
            raise ValueError("solos are triadic")

    def names(self) -> tuple[str, ...]:
        return (self.subject, *self.objects)

    def rename(self, sigma: dict[str, str]) -> "Solo":
        return Solo(
            self.polarity,
            sigma.get(self.subject, self.subject),
            tuple(sigma.get(x, x) for x in self.objects),  # type: ignore[arg-type]
            self.label,
        )


def solo_in(u: str, x: str, y: str, z: str, label: str | None = None) -> Solo:
    return Solo(Polarity.IN, u, (x, y, z), label)


def solo_out(u: str, x: str, y: str, z: str, label: str | None = None) -> Solo:
    return Solo(Polarity.OUT, u, (x, y, z), label)


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Atom:
    solo: Solo


@dataclass(frozen=True)
class Par:
    left: "SoloTerm"
    right: "SoloTerm"


@dataclass(frozen=True)
class Nu:
    binder: str
    body: "SoloTerm"
    annotation: SoloType | None = None


SoloTerm = Union[Nil, Atom, Par, Nu]


def par_all(terms: Sequence[SoloTerm]) -> SoloTerm:
    terms = [t for t in terms if not isinstance(t, Nil)]
    if not terms:
        return Nil()
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Par(t, out)
    return out


def nu_all(binders: Sequence[tuple[str, SoloType | None]], body: SoloTerm) -> SoloTerm:
    for x, ty in reversed(list(binders)):
        body = Nu(x, body, ty)
    return body


def free_names(t: SoloTerm) -> set[str]:
    match t:
        case Nil():
            return set()
        case Atom(s):
            return set(s.names())
        case Par(p, q):
            return free_names(p) | free_names(q)
        case Nu(x, p, _):
            return free_names(p) - {x}
    raise TypeError(t)


def all_names(t: SoloTerm) -> set[str]:
    match t:
        case Nil():
            return set()
        case Atom(s):
            return set(s.names())
        case Par(p, q):
            return all_names(p) | all_names(q)
        case Nu(x, p, _):
            return {x} | all_names(p)
    raise TypeError(t)


def solos_of(t: SoloTerm) -> list[Solo]:
    match t:
        case Nil():
            return []
        case Atom(s):
            return [s]
        case Par(p, q):
            return solos_of(p) + solos_of(q)
        case Nu(_, p, _):
            return solos_of(p)
    raise TypeError(t)


def substitute(t: SoloTerm, frm: str, to: str) -> SoloTerm:
    """Capture-avoiding ``t[to/frm]``."""
    if frm == to:
        return t
    supply = NameSupply(all_names(t) | {frm, to})

    def go(t: SoloTerm, sigma: dict[str, str]) -> SoloTerm:
        match t:
            case Nil():
                return t
            case Atom(s):
                return Atom(s.rename(sigma))
            case Par(p, q):
                return Par(go(p, sigma), go(q, sigma))
            case Nu(x, p, ty):
                if x == frm:
                    return Nu(x, p, ty)
                if x == to:
                    y = supply.fresh(x)
                    return Nu(y, go(p, {**sigma, x: y}), ty)
                return Nu(x, go(p, sigma), ty)
        raise TypeError(t)

    return go(t, {frm: to})


# --- canonical form -------------------------------------------------------


@dataclass(frozen=True)
class Canonical:
    """``new binders.(s1 | ... | sn)``; binder names distinct from free names."""

    binders: tuple[tuple[str, SoloType | None], ...]
    solos: tuple[Solo, ...]

    @property
    def bound(self) -> tuple[str, ...]:
        return tuple(x for x, _ in self.binders)

    def free_names(self) -> set[str]:
        names = {x for s in self.solos for x in s.names()}
        return names - set(self.bound)

    def to_term(self) -> SoloTerm:
        return nu_all(self.binders, par_all([Atom(s) for s in self.solos]))


def canonical_form(t: SoloTerm) -> Canonical:
    free = free_names(t)
    supply = NameSupply(all_names(t))
    used = set(free)
    binders: list[tuple[str, SoloType | None]] = []
    solos: list[Solo] = []

    def go(t: SoloTerm, env: dict[str, str]) -> None:
        match t:
            case Nil():
                pass
            case Atom(s):
                solos.append(s.rename(env))
            case Par(p, q):
                go(p, env)
                go(q, env)
            case Nu(x, p, ty):
                y = supply.fresh(x) if x in used else x
                used.add(y)
                binders.append((y, ty))
                go(p, {**env, x: y})

    go(t, {})
    live = {x for s in solos for x in s.names()}
    return Canonical(tuple(b for b in binders if b[0] in live), tuple(solos))


def canonicalize(t: SoloTerm) -> SoloTerm:
    return canonical_form(t).to_term()


def _match(a: Canonical, b: Canonical, strict: bool) -> Iterator[dict[str, str]]:
    bound_a, bound_b = set(a.bound), set(b.bound)
    ann_a, ann_b = dict(a.binders), dict(b.binders)

    def bind(x: str, y: str, fwd: dict, back: dict) -> bool:
        if (x in bound_a) != (y in bound_b):
            return False
        if x not in bound_a:
            return x == y
        if x in fwd:
            return fwd[x] == y
        if y in back:
            return False
        if strict and ann_a[x] != ann_b[y]:
            return False
        fwd[x] = y
        back[y] = x
        return True

    def go(i: int, remaining: list[Solo], fwd: dict, back: dict) -> Iterator[dict[str, str]]:
        if i == len(a.solos):
            yield fwd
            return
        s = a.solos[i]
        for k, t in enumerate(remaining):
            if t.polarity is not s.polarity:
                continue
            if strict and t.label != s.label:
                continue
            f2, b2 = dict(fwd), dict(back)
            if all(bind(x, y, f2, b2) for x, y in zip(s.names(), t.names())):
                yield from go(i + 1, remaining[:k] + remaining[k + 1 :], f2, b2)

    yield from go(0, list(b.solos), {}, {})


def _shape(c: Canonical) -> tuple:
    bound = set(c.bound)
    return tuple(
        sorted(
            (s.polarity.value, *(("*" if x in bound else x) for x in s.names()))
            for s in c.solos
        )
    )


def congruent(a: SoloTerm, b: SoloTerm, strict: bool = False) -> bool:
    """Structural congruence.  ``strict`` also compares labels and annotations."""
    ca, cb = canonical_form(a), canonical_form(b)
    if len(ca.binders) != len(cb.binders) or _shape(ca) != _shape(cb):
        return False
    return next(_match(ca, cb, strict), None) is not None


def shape_key(t: SoloTerm) -> tuple:
    """A congruence-invariant key, useful for bucketing before ``congruent``."""
    c = canonical_form(t)
    return (len(c.binders), _shape(c))


# --- unification and reduction --------------------------------------------


class FreenessError(Exception):
    """Two free names would have to be identified."""

    def __init__(self, names: Sequence[str]) -> None:
        super().__init__(f"class holds several free names: {', '.join(sorted(names))}")
        self.names = tuple(sorted(names))


@dataclass(frozen=True)
class Unifier:
    classes: tuple[frozenset[str], ...]
    representative: dict[frozenset[str], str] = field(hash=False)
    substitution: dict[str, str] = field(hash=False)


def unify(out: Solo, inp: Solo, bound: Sequence[str]) -> Unifier:
    """Most general unifier of the object triples that only moves names of ``bound``.

    The representative of a class is its free name when it has one, otherwise the
    member appearing first in ``bound``.  Raises :class:`FreenessError` when a
    class contains two free names.
    """
    if out.polarity is not Polarity.OUT or inp.polarity is not Polarity.IN:
        raise ValueError("unify expects an output and an input solo")
    if out.subject != inp.subject:
        raise ValueError("solos do not share a subject")
    order = {x: i for i, x in enumerate(bound)}
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in zip(out.objects, inp.objects):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry
    groups: dict[str, set[str]] = {}
    for x in list(parent):
        groups.setdefault(find(x), set()).add(x)
    classes = []
    reps = {}
    sigma = {}
    for members in groups.values():
        free = [x for x in members if x not in order]
        if len(free) > 1:
            raise FreenessError(free)
        rep = free[0] if free else min(members, key=order.__getitem__)
        cls = frozenset(members)
        classes.append(cls)
        reps[cls] = rep
        for x in members:
            if x != rep:
                sigma[x] = rep
    classes.sort(key=lambda c: sorted(c))
    return Unifier(tuple(classes), reps, sigma)


def redexes(c: Canonical) -> Iterator[tuple[int, int]]:
    """Index pairs (output, input) of solos sharing a subject."""
    for i, s in enumerate(c.solos):
        if s.polarity is not Polarity.OUT:
            continue
        for j, t in enumerate(c.solos):
            if t.polarity is Polarity.IN and t.subject == s.subject:
                yield i, j


def fire(c: Canonical, i: int, j: int) -> Canonical:
    """Fire the redex made of output ``i`` and input ``j``; may raise FreenessError."""
    u = unify(c.solos[i], c.solos[j], c.bound)
    sigma = u.substitution
    rest = tuple(s.rename(sigma) for k, s in enumerate(c.solos) if k not in (i, j))
    live = {x for s in rest for x in s.names()}
    binders = tuple(b for b in c.binders if b[0] not in sigma and b[0] in live)
    return Canonical(binders, rest)


def reduce_steps(t: SoloTerm) -> list[SoloTerm]:
    """One reduct per redex that unifies (not deduplicated)."""
    c = canonical_form(t)
    out = []
    for i, j in redexes(c):
        try:
            out.append(fire(c, i, j).to_term())
        except FreenessError:
            pass
    return out

