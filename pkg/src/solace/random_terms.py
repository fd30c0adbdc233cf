"""Seeded generators of pi-terms, solos terms and well-typed nets for property checks."""

from __future__ import annotations

import random

from . import pi, solos
from .din.core import FREE, OUTWARD, TAU, Cell, LinearType, SimpleNet, Symbol
from .solos import Polarity, Solo, SoloType
from .typecheck import EXPECTED

PI_NAMES = ("a", "b", "c", "x", "y")


def random_pi(rng: random.Random, max_size: int = 12, names: tuple[str, ...] = PI_NAMES) -> pi.PiTerm:
    """A term with between 1 and ``max_size`` constructors (Nil included)."""
    return _pi(rng, rng.randint(1, max_size), list(names))


def _pi(rng: random.Random, budget: int, names: list[str]) -> pi.PiTerm:
    if budget <= 1:
        return pi.Nil()
    kind = rng.choice(["in", "out", "nu", "par"] if budget >= 3 else ["in", "out", "nu"])
    if kind == "par":
        left = rng.randint(1, budget - 2)
        return pi.Par(_pi(rng, left, names), _pi(rng, budget - 1 - left, names))
    body = _pi(rng, budget - 1, names)
    if kind == "nu":
        return pi.Nu(rng.choice(names), body)
    u, x = rng.choice(names), rng.choice(names)
    return pi.Input(u, x, body) if kind == "in" else pi.Output(u, x, body)


def random_solos(rng: random.Random, n_solos: int = 4, n_names: int = 4, p_bound: float = 0.6) -> solos.SoloTerm:
    """Untyped term: a few subjects so that dual pairs are common."""
    names = [f"n{i}" for i in range(n_names)]
    subjects = names[: max(1, n_names // 2)]
    atoms = []
    for _ in range(n_solos):
        pol = rng.choice(list(Polarity))
        objs = tuple(rng.choice(names) for _ in range(3))
        atoms.append(solos.Atom(Solo(pol, rng.choice(subjects), objs)))  # type: ignore[arg-type]
    bound = [(x, None) for x in names if rng.random() < p_bound]
    return solos.nu_all(bound, solos.par_all(atoms))


def random_typed_solos(rng: random.Random, n_solos: int = 4, n_names: int = 6,
                       p_bound: float = 0.6) -> tuple[solos.SoloTerm, dict[str, SoloType]]:
    """A term typable by construction, with its context for the free names."""
    types = {f"n{i}": (SoloType.W if i % 2 == 0 else SoloType.V) for i in range(n_names)}
    by_type = {t: [x for x, u in types.items() if u is t] for t in SoloType}
    hot = {t: xs[:2] for t, xs in by_type.items()}
    atoms = []
    for _ in range(n_solos):
        ty = rng.choice(list(SoloType))
        subj = rng.choice(hot[ty])
        objs = tuple(rng.choice(by_type[want]) for want in EXPECTED[ty])
        atoms.append(solos.Atom(Solo(rng.choice(list(Polarity)), subj, objs)))  # type: ignore[arg-type]
    used = {x for a in atoms for x in a.solo.names()}
    bound = [(x, types[x]) for x in sorted(used) if rng.random() < p_bound]
    term = solos.nu_all(bound, solos.par_all(atoms))
    gamma = {x: types[x] for x in used if x not in dict(bound)}
    return term, gamma


def random_net(rng: random.Random, max_cells: int = 6, labels: tuple[str, ...] = ("a", "b")) -> SimpleNet:
    """A well-typed simple net: random cells, type-respecting random wiring, the
    unmatched ports made free."""
    n = rng.randint(1, max_cells)
    net = SimpleNet()
    spare = list(labels)
    rng.shuffle(spare)
    for _ in range(n):
        sym = rng.choice(list(Symbol))
        label = None
        if sym.labeled:
            label = spare.pop() if spare and rng.random() < 0.5 else TAU
        net.add_cell(Cell(sym, label))
    ports = {t: [] for t in LinearType}
    for c, cell in net.cells.items():
        for i, t in enumerate(OUTWARD[cell.symbol]):
            ports[t].append((c, i))
    free = []
    for t, d in ((LinearType.O, LinearType.I), (LinearType.BANG, LinearType.WHY)):
        xs, ys = ports[t], ports[d]
        rng.shuffle(xs)
        rng.shuffle(ys)
        k = min(len(xs), len(ys))
        k = rng.randint(max(0, k - 1), k) if k else 0
        for p, q in zip(xs[:k], ys[:k]):
            if p[0] == q[0] and rng.random() < 0.5:
                free += [p, q]
                continue
            net.connect(p, q)
        free += xs[k:] + ys[k:]
    rng.shuffle(free)
    for k, p in enumerate(free):
        net.connect(p, (FREE, k))
    net.nfree = len(free)
    return net


__all__ = ["PI_NAMES", "random_net", "random_pi", "random_solos", "random_typed_solos"]
