"""V/W typing of solos terms, send/receive decoration, and the acyclicity conditions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product

from .solos import Canonical, Polarity, Solo, SoloTerm, SoloType, canonical_form
from .syntax import format_solo

V, W = SoloType.V, SoloType.W
Context = dict[str, SoloType]


class Protocol(enum.Enum):
    S = "S"
    R = "R"


# Object types demanded by the subject's type.
EXPECTED: dict[SoloType, tuple[SoloType, SoloType, SoloType]] = {V: (W, W, V), W: (W, V, V)}

DECORATION: dict[tuple[SoloType, Polarity], tuple[Protocol, Protocol, Protocol]] = {
    (V, Polarity.IN): (Protocol.R, Protocol.S, Protocol.S),
    (V, Polarity.OUT): (Protocol.S, Protocol.R, Protocol.R),
    (W, Polarity.IN): (Protocol.R, Protocol.S, Protocol.R),
    (W, Polarity.OUT): (Protocol.S, Protocol.R, Protocol.S),
}


class TypingError(Exception):
    def __init__(self, message: str, solo: Solo | None = None, position: int | None = None,
                 conflict: tuple[Solo, ...] = ()) -> None:
        super().__init__(message)
        self.solo = solo
        self.position = position
        self.conflict = conflict


@dataclass
class TypingDerivation:
    context: Context
    term: Canonical
    types: dict[str, SoloType]
    decoration: dict[tuple[int, int], Protocol]

    @property
    def solos(self) -> tuple[Solo, ...]:
        return self.term.solos

    def protocol(self, solo: int, position: int) -> Protocol:
        """Protocol of the object at ``position`` (1..3) of solo number ``solo``."""
        return self.decoration[(solo, position)]

    def decorated(self, i: int) -> str:
        s = self.solos[i]
        objs = " ".join(f"{x}^{self.decoration[(i, k + 1)].value}" for k, x in enumerate(s.objects))
        return f"{s.subject}{s.polarity.value}<{objs}>"


def check_typed(gamma: Context, t: SoloTerm | Canonical) -> TypingDerivation:
    c = t if isinstance(t, Canonical) else canonical_form(t)
    types = dict(gamma)
    for x, ty in c.binders:
        if ty is None:
            raise TypingError(f"binder {x} carries no type annotation")
        types[x] = ty
    decoration = {}
    for i, s in enumerate(c.solos):
        subj = types.get(s.subject)
        if subj is None:
            raise TypingError(f"name {s.subject} is not typed", s, 0)
        for k, (x, want) in enumerate(zip(s.objects, EXPECTED[subj]), start=1):
            got = types.get(x)
            if got is None:
                raise TypingError(f"name {x} is not typed", s, k)
            if got is not want:
                raise TypingError(
                    f"{format_solo(s)}: object {k} ({x}) has type {got.value}, "
                    f"a {subj.value}-subject needs {want.value}", s, k,
                )
        for k, prot in enumerate(DECORATION[(subj, s.polarity)], start=1):
            decoration[(i, k)] = prot
    return TypingDerivation(dict(gamma), c, types, decoration)


# --- inference ------------------------------------------------------------

_TOP = object()  # stands for the value W in the parity union-find


class _Parity:
    """Union-find where each element carries its parity relative to the root."""

    def __init__(self) -> None:
        self.parent: dict = {}
        self.parity: dict = {}

    def find(self, x) -> tuple[object, int]:
        if x not in self.parent:
            self.parent[x] = x
            self.parity[x] = 0
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        acc = 0
        for y in reversed(path):
            acc ^= self.parity[y]
            self.parity[y] = acc
            self.parent[y] = x
        return x, (self.parity[path[0]] if path else 0)

    def union(self, a, b, diff: int) -> bool:
        """Require value(a) xor value(b) == diff; False on contradiction."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == diff
        self.parent[ra] = rb
        self.parity[ra] = pa ^ pb ^ diff
        return True


def _bit(ty: SoloType) -> int:
    return 0 if ty is W else 1


def _solve(solos: tuple[Solo, ...], fixed: dict[str, SoloType]) -> dict[str, SoloType] | None:
    uf = _Parity()
    uf.find(_TOP)
    for x, ty in fixed.items():
        if not uf.union(x, _TOP, _bit(ty)):
            return None
    for s in solos:
        o1, o2, o3 = s.objects
        if not (uf.union(o1, _TOP, 0) and uf.union(o3, _TOP, 1) and uf.union(o2, s.subject, 1)):
            return None
    top, _ = uf.find(_TOP)
    out = {}
    for x in {n for s in solos for n in s.names()} | set(fixed):
        root, par = uf.find(x)
        if root == top:
            _, ptop = uf.find(_TOP)
            out[x] = W if par ^ ptop == 0 else V
        else:
            out[x] = W if par == 0 else V
    return out


@dataclass
class Inference:
    term: SoloTerm
    context: Context
    derivation: TypingDerivation = field(repr=False)


def infer_types(t: SoloTerm) -> Inference:
    """Annotate every binder and type every free name; unconstrained names get W."""
    c = canonical_form(t)
    fixed = {x: ty for x, ty in c.binders if ty is not None}
    sol = _solve(c.solos, fixed)
    if sol is None:
        core = list(c.solos)
        k = 0
        while k < len(core):
            trial = core[:k] + core[k + 1 :]
            if _solve(tuple(trial), {x: ty for x, ty in fixed.items()}) is None:
                core = trial
            else:
                k += 1
        shown = ", ".join(format_solo(s) for s in core) or "binder annotations"
        raise TypingError(f"no V/W typing exists; conflicting solos: {shown}", conflict=tuple(core))
    binders = tuple((x, sol.get(x, W)) for x, _ in c.binders)
    annotated = Canonical(binders, c.solos)
    gamma = {x: sol[x] for x in annotated.free_names()}
    return Inference(annotated.to_term(), gamma, check_typed(gamma, annotated))


def all_typings(t: SoloTerm) -> list[dict[str, SoloType]]:
    """Exhaustive enumeration over the two-valued domain (small terms only)."""
    c = canonical_form(t)
    names = sorted({n for s in c.solos for n in s.names()})
    fixed = {x: ty for x, ty in c.binders if ty is not None}
    found = []
    for values in product((V, W), repeat=len(names)):
        env = dict(zip(names, values))
        if any(env[x] is not ty for x, ty in fixed.items() if x in env):
            continue
        if all(tuple(env[x] for x in s.objects) == EXPECTED[env[s.subject]] for s in c.solos):
            found.append(env)
    return found


# --- guard relation and acyclicity -----------------------------------------


@dataclass
class GuardRelation:
    triangle: set[tuple[int, int]]
    perp: set[frozenset[int]]
    roots: set[int]
    plus: set[tuple[int, int]]
    star: set[tuple[int, int]]

    def below(self, s: int, t: int) -> bool:
        return (s, t) in self.triangle


def receivers(d: TypingDerivation, i: int) -> set[str]:
    """Names with an R-occurrence in solo ``i``."""
    s = d.solos[i]
    return {x for k, x in enumerate(s.objects, start=1) if d.decoration[(i, k)] is Protocol.R}


def guard_relation(d: TypingDerivation) -> GuardRelation:
    n = len(d.solos)
    recv = [receivers(d, i) for i in range(n)]
    tri = {(s, t) for s in range(n) for t in range(n) if d.solos[t].subject in recv[s]}
    perp = {
        frozenset((s, t))
        for s in range(n)
        for t in range(s + 1, n)
        if d.solos[s].subject == d.solos[t].subject and d.solos[s].polarity is not d.solos[t].polarity
    }
    roots = {s for s in range(n) if not any((t, s) in tri for t in range(n))}
    succ: dict[int, set[int]] = {s: set() for s in range(n)}
    for s, t in tri:
        succ[s].add(t)
    plus = set()
    for s in range(n):
        stack, seen = list(succ[s]), set()
        while stack:
            t = stack.pop()
            if t in seen:
                continue
            seen.add(t)
            stack.extend(succ[t])
        plus |= {(s, t) for t in seen}
    star = plus | {(s, s) for s in range(n)}
    return GuardRelation(tri, perp, roots, plus, star)


@dataclass
class AcyclicityReport:
    ok: bool
    condition: str | None = None
    witness: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "acyclic" if self.ok else f"{self.condition} violated: {self.witness}"


def check_acyclic(d: TypingDerivation) -> AcyclicityReport:
    solos = d.solos
    n = len(solos)
    g = guard_relation(d)
    bound = set(d.term.bound)

    def where(i: int, k: int) -> str:
        return f"{d.decorated(i)} (solo {i}, position {k})"

    seen_r: dict[str, tuple[int, int]] = {}
    for i, s in enumerate(solos):
        for k, x in enumerate(s.objects, start=1):
            if d.decoration[(i, k)] is Protocol.R:
                if x in seen_r:
                    return AcyclicityReport(False, "AC1", f"{x} received at {where(*seen_r[x])} and {where(i, k)}")
                seen_r[x] = (i, k)
    for pair in sorted(g.perp, key=sorted):
        for s in sorted(pair):
            if s not in g.roots:
                a, b = sorted(pair)
                return AcyclicityReport(False, "AC2", f"{d.decorated(a)} and {d.decorated(b)} interact but solo {s} is not a root")
    for x, (i, k) in seen_r.items():
        for t in range(n):
            if x in solos[t].objects and (i, t) not in g.star:
                return AcyclicityReport(False, "AC3", f"{x} received at {where(i, k)} occurs in {d.decorated(t)} outside its scope")
    for i, s in enumerate(solos):
        if s.polarity is Polarity.IN:
            continue
        for k, x in enumerate(s.objects, start=1):
            if d.decoration[(i, k)] is Protocol.S and seen_r.get(x, (None,))[0] == i:
                return AcyclicityReport(False, "AC4", f"{x} is both sent and received by output {where(i, k)}")
    for x, (i, k) in seen_r.items():
        if x not in bound:
            return AcyclicityReport(False, "AC5", f"free name {x} received at {where(i, k)}")
    return AcyclicityReport(True)
