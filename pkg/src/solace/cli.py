"""Command-line front end.

Exit status: 0 success, 1 a check failed, 2 usage or parse error, 3 a search
budget ran out before an answer was reached.
"""

from __future__ import annotations

import argparse
import random
import sys
from collections.abc import Callable, Sequence
from typing import TextIO

from . import diagrams, pi, solos
from .din import engine, toolbox
from .din.core import TAU, SimpleNet
from .din.fmt import NetFormatError, format_net, parse_net
from .din.fmt import to_dot as net_to_dot
from .random_terms import random_net, random_pi, random_solos, random_typed_solos
from .sd_to_din import bisim_check, translate_diagram
from .solos import SoloType
from .syntax import ParseError, format_pi, format_solos, parse_pi, parse_solos
from .translate import translate_pi
from .typecheck import TypingError, check_acyclic, check_typed, infer_types

OK, FAILED, USAGE, EXHAUSTED = 0, 1, 2, 3


class _Exit(Exception):
    def __init__(self, status: int, message: str = "") -> None:
        super().__init__(message)
        self.status = status


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Exit(USAGE, f"cannot read {path}: {exc.strerror}") from None


def _solos_file(path: str) -> solos.SoloTerm:
    return parse_solos(_read(path))


def _diagram_file(path: str) -> diagrams.Diagram:
    """A solos term read as a diagram; unlabelled solos get e0, e1, ..."""
    c = solos.canonical_form(_solos_file(path))
    if all(s.label is None for s in c.solos):
        return diagrams.term_to_diagram(c, "auto")
    d = diagrams.term_to_diagram(c)
    try:
        d.check()
    except ValueError as exc:
        raise _Exit(USAGE, str(exc)) from None
    return d


def _show_diagram(d: diagrams.Diagram) -> str:
    if not d.idents:
        return format_solos(diagrams.diagram_to_canonical(d).to_term())
    return describe_diagram(d).rstrip("\n")


def describe_diagram(d: diagrams.Diagram) -> str:
    lines = []
    for i, n in sorted(d.nodes.items()):
        lines.append(f"node {i} {'bound' if n.bound else 'free'} {n.name or '-'}")
    for eid, e in sorted(d.edges.items()):
        src = " ".join(map(str, e.sources))
        label = f" @{e.label}" if e.label is not None else ""
        lines.append(f"edge {eid} {e.polarity.name.lower()} {src} -> {e.target}{label}")
    for a, b in d.idents:
        lines.append(f"ident {a} {b}")
    return "\n".join(lines) + "\n"


def _context(spec: str | None, t: solos.SoloTerm) -> dict[str, SoloType]:
    """Free names default to W; ``x:V,y:W`` overrides."""
    gamma = {x: SoloType.W for x in solos.free_names(t)}
    for item in filter(None, (spec or "").split(",")):
        name, _, ty = item.partition(":")
        try:
            gamma[name.strip()] = SoloType(ty.strip())
        except ValueError:
            raise _Exit(USAGE, f"bad context entry {item!r}") from None
    return gamma


# --- term reduction ------------------------------------------------------------


def _explore(start, step: Callable, same: Callable, show: Callable, mode: str, budget: int, out: TextIO) -> int:
    if mode == "trace":
        cur = start
        out.write(show(cur) + "\n")
        for _ in range(budget):
            nxt = step(cur)
            if not nxt:
                return OK
            cur = nxt[0]
            out.write("-> " + show(cur) + "\n")
        return EXHAUSTED
    if mode == "step":
        seen: list = []
        for r in step(start):
            if not any(same(r, o) for o in seen):
                seen.append(r)
                out.write(show(r) + "\n")
        return OK
    seen = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for cur in frontier:
            for r in step(cur):
                if any(same(r, o) for o in seen):
                    continue
                if len(seen) >= budget:
                    for x in seen:
                        out.write(show(x) + "\n")
                    return EXHAUSTED
                seen.append(r)
                nxt.append(r)
        frontier = nxt
    for x in seen:
        out.write(show(x) + "\n")
    return OK


def _diagram_step(d: diagrams.Diagram) -> list[diagrams.Diagram]:
    return [h for _, h in diagrams.lts_transitions(d)]


def _net_labels(s: SimpleNet) -> set[str]:
    return {c.label for c in s.cells.values() if c.label not in (None, TAU)} | {TAU}


def _reduce_net(args, out: TextIO) -> int:
    s = parse_net(_read(args.file))
    R = set(args.labels.split(",")) if args.labels else _net_labels(s)
    depth = args.budget

    def show(summands: list[SimpleNet]) -> str:
        if not summands:
            return "# the zero net\n"
        return "".join(f"# summand {k}\n{format_net(t)}" for k, t in enumerate(summands)).rstrip("\n")

    if args.mode == "trace":
        cur = [s]
        out.write(show(cur) + "\n")
        for _ in range(depth):
            nxt = next(engine.step_sum(cur, R), None)
            if nxt is None:
                return OK
            cur = nxt
            out.write("# ->\n" + show(cur) + "\n")
        return EXHAUSTED
    if args.mode == "step":
        for k, red in enumerate(engine.step_sum([s], R)):
            out.write(f"# reduct {k}\n{show(red)}\n")
        return OK
    closure = engine.reduce_closure(s, R, depth)
    for k, n in enumerate(closure.nets):
        out.write(f"# state {k}\n{show(list(n.summands))}\n")
    return EXHAUSTED if closure.exhausted else OK


def cmd_reduce(args, out: TextIO) -> int:
    if args.kind == "net":
        return _reduce_net(args, out)
    if args.kind == "pi":
        t = parse_pi(_read(args.file))
        return _explore(t, pi.reduce_steps, pi.congruent, format_pi, args.mode, args.budget, out)
    if args.kind == "solos":
        t = _solos_file(args.file)
        return _explore(t, solos.reduce_steps, solos.congruent, format_solos, args.mode, args.budget, out)
    d = _diagram_file(args.file)
    same = lambda a, b: diagrams.diagram_iso(a, b) is not None  # noqa: E731
    return _explore(d, _diagram_step, same, _show_diagram, args.mode, args.budget, out)


# --- other commands ----------------------------------------------------------


def cmd_parse(args, out: TextIO) -> int:
    text = _read(args.file)
    out.write((format_pi(parse_pi(text)) if args.kind == "pi" else format_solos(parse_solos(text))) + "\n")
    return OK


def cmd_translate(args, out: TextIO) -> int:
    out.write(format_solos(translate_pi(parse_pi(_read(args.file)))) + "\n")
    return OK


def cmd_typecheck(args, out: TextIO) -> int:
    t = _solos_file(args.file)
    if args.infer:
        inf = infer_types(t)
        ctx = ", ".join(f"{x}:{ty.value}" for x, ty in sorted(inf.context.items()))
        out.write(f"context: {ctx or '-'}\n{format_solos(inf.term)}\n")
        d = inf.derivation
    else:
        d = check_typed(_context(args.context, t), t)
        out.write("well typed\n")
    if args.decorate:
        for i in range(len(d.solos)):
            out.write(d.decorated(i) + "\n")
    return OK


def cmd_acyclic(args, out: TextIO) -> int:
    t = _solos_file(args.file)
    d = infer_types(t).derivation if args.infer else check_typed(_context(args.context, t), t)
    report = check_acyclic(d)
    out.write(f"{report}\n")
    return OK if report else FAILED


def cmd_ac_member(args, out: TextIO) -> int:
    res = diagrams.is_ac_member(_diagram_file(args.file), args.budget)
    path = " ".join(f"({a},{b})" for a, b in res.witness)
    if res.status == "member":
        out.write(f"member ({res.states} states)\n")
        return OK
    if res.status == "budget":
        out.write(f"budget exhausted after {res.states} states\n")
        return EXHAUSTED
    out.write(f"non-member; witness path: {path}\n")
    return FAILED


def cmd_to_diagram(args, out: TextIO) -> int:
    out.write(describe_diagram(_diagram_file(args.file)))
    return OK


def cmd_to_net(args, out: TextIO) -> int:
    out.write(format_net(translate_diagram(_diagram_file(args.file))))
    return OK


def cmd_dot(args, out: TextIO) -> int:
    if args.kind == "diagram":
        out.write(diagrams.to_dot(_diagram_file(args.file)))
    else:
        out.write(net_to_dot(parse_net(_read(args.file))))
    return OK


def cmd_bisim(args, out: TextIO) -> int:
    if args.lang == "pi":
        d = diagrams.term_to_diagram(translate_pi(parse_pi(_read(args.file))), "auto")
    else:
        d = _diagram_file(args.file)
    rep = bisim_check(d, args.depth, args.max_states)
    out.write(rep.table())
    for m in rep.mismatches:
        out.write(f"mismatch: {m}\n")
    out.write(f"{rep.states} states, {len(rep.mismatches)} mismatches, {rep.exhaustions} exhaustions\n")
    if rep.mismatches:
        return FAILED
    return EXHAUSTED if rep.exhaustions else OK


def cmd_toolbox(args, out: TextIO) -> int:
    if args.check == "aggregate":
        grid = [tuple(args.params)] if args.params else [(a, b) for a in range(-1, 4) for b in range(-1, 4)]
        ok = True
        for a, b in grid:
            res = toolbox.check_aggregation(a, b, args.depth)
            out.write(f"aggregate {a} {b}: {'ok' if res else 'FAIL'}\n")
            ok &= res
        return OK if ok else FAILED
    if args.check == "prefix":
        grid = [tuple(args.params)] if args.params else [(n, p) for n in range(4) for p in range(4)]
        ok = True
        for n, p in grid:
            res = toolbox.check_prefix_reduction(n, p, depth=args.depth)
            out.write(f"prefix {n} {p}: {'ok' if res else 'FAIL'}\n")
            ok &= res
        return OK if ok else FAILED
    orders = args.params or [-2, -1, 0, 1]
    status = OK
    for p in orders:
        rep = toolbox.check_forwarding(p, depth=args.depth)
        verdict = "ok" if rep.ok else "FAIL " + "; ".join(rep.problems)
        out.write(f"forward {p}: {rep.summands} summands, {rep.communicating} communicating: {verdict}\n")
        if not rep.ok:
            status = EXHAUSTED if rep.exhausted and status == OK else FAILED
    return status


def cmd_sample(args, out: TextIO) -> int:
    rng = random.Random(args.seed)
    for _ in range(args.count):
        if args.kind == "pi":
            out.write(format_pi(random_pi(rng)) + "\n")
        elif args.kind == "solos":
            out.write(format_solos(random_solos(rng)) + "\n")
        elif args.kind == "typed-solos":
            t, _ = random_typed_solos(rng)
            out.write(format_solos(t) + "\n")
        else:
            out.write(format_net(random_net(rng)))
    return OK


# --- parser ----------------------------------------------------------------


def _pair(params: Sequence[int]) -> list[int]:
    if params and len(params) != 2:
        raise _Exit(USAGE, "expected two integers or none for the full grid")
    return list(params)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="solace", description="Solos, solo diagrams and differential interaction nets.")
    p.add_argument("--seed", type=int, default=0, help="seed for commands that sample randomly (default 0)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("parse", cmd_parse, "parse a term and print it back")
    sp.add_argument("kind", choices=["pi", "solos"])
    sp.add_argument("file")

    sp = add("translate", cmd_translate, "translate a pi-term into solos")
    sp.add_argument("direction", choices=["pi-to-solos"])
    sp.add_argument("file")

    sp = add("reduce", cmd_reduce, "one-step reducts (default), a trace, or every reachable state")
    sp.add_argument("kind", choices=["pi", "solos", "diagram", "net"])
    sp.add_argument("file")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--all", dest="mode", action="store_const", const="all")
    mode.add_argument("--trace", dest="mode", action="store_const", const="trace")
    sp.set_defaults(mode="step")
    sp.add_argument("--budget", type=int, default=engine.depth_override(200),
                    help="maximum states (--all) or steps (--trace)")
    sp.add_argument("--labels", help="net only: comma-separated labels enabled for non-deterministic steps")

    for name, fn, help_ in (("typecheck", cmd_typecheck, "check V/W typing"),
                            ("acyclic", cmd_acyclic, "check the acyclicity conditions AC1-AC5")):
        sp = add(name, fn, help_)
        sp.add_argument("file")
        sp.add_argument("--infer", action="store_true", help="infer missing binder and free-name types")
        sp.add_argument("--context", help="types of free names, e.g. u:W,v:V (default: all W)")
        if name == "typecheck":
            sp.add_argument("--decorate", action="store_true", help="print the send/receive decoration")

    sp = add("ac-member", cmd_ac_member, "decide membership in the acyclic diagram LTS")
    sp.add_argument("file")
    sp.add_argument("--budget", type=int, default=10_000)

    sp = add("to-diagram", cmd_to_diagram, "print the solo diagram of a term")
    sp.add_argument("file")
    sp = add("to-net", cmd_to_net, "print the interaction net of a term's diagram")
    sp.add_argument("file")

    sp = add("dot", cmd_dot, "render a diagram (from a solos term) or a net as DOT")
    sp.add_argument("kind", choices=["diagram", "net"])
    sp.add_argument("file")

    sp = add("bisim", cmd_bisim, "compare diagram and net transitions state by state")
    sp.add_argument("file")
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--lang", choices=["solos", "pi"], default="solos")
    sp.add_argument("--max-states", type=int, default=200)

    sp = add("toolbox", cmd_toolbox, "check the area and prefix-cell reduction laws")
    sp.add_argument("check", choices=["aggregate", "forward", "prefix"])
    sp.add_argument("params", nargs="*", type=int,
                    help="aggregate N1 N2 | prefix N P | forward P...; none runs the default grid")
    sp.add_argument("--depth", type=int, default=None)

    sp = add("sample", cmd_sample, "print random terms or nets drawn with --seed")
    sp.add_argument("kind", choices=["pi", "solos", "typed-solos", "net"])
    sp.add_argument("--count", type=int, default=1)
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        if args.command == "toolbox" and args.check != "forward":
            args.params = _pair(args.params)
        return args.fn(args, out)
    except _Exit as exc:
        if str(exc):
            err.write(f"solace: {exc}\n")
        return exc.status
    except (ParseError, NetFormatError) as exc:
        err.write(f"solace: parse error: {exc}\n")
        return USAGE
    except TypingError as exc:
        err.write(f"solace: typing error: {exc}\n")
        return FAILED


if __name__ == "__main__":
    raise SystemExit(main())
