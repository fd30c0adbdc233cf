"""Line-based text format and DOT rendering for simple nets.

    interface f0:!o f1:*
    cell 0 coder l
    cell 1 der
    wire 0.0 1.0
    wire 0.1 f0
    wire 1.1 f1
    loops 0

``*`` marks a free port wired straight to another free port.  Printing is
canonical (cells by id, wires by their smaller endpoint), so printing a parsed
canonical text gives it back byte for byte.
"""

from __future__ import annotations

import re

from .core import FREE, TAU, Cell, LinearType, Port, SimpleNet, Symbol, fmt_port

_TYPES = {t.value: t for t in LinearType}
_SYMBOLS = {s.value: s for s in Symbol}
_PORT = re.compile(r"^(?:f(\d+)|(\d+)\.(\d+))$")


class NetFormatError(ValueError):
    pass


def _port_order(p: Port) -> tuple:
    return (0, p[1]) if p[0] == FREE else (1, p[0], p[1])


def format_net(net: SimpleNet) -> str:
    lines = []
    iface = []
    for k, t in enumerate(net.interface_types()):
        iface.append(f"f{k}:{'*' if t is None else t.value}")
    lines.append(" ".join(["interface", *iface]))
    for c, cell in sorted(net.cells.items()):
        label = "" if cell.label in (None, TAU) else f" {cell.label}"
        lines.append(f"cell {c} {cell.symbol.value}{label}")
    wires = sorted(
        (tuple(sorted((p, q), key=_port_order)) for p, q in net.link.items() if _port_order(p) <= _port_order(q)),
        key=lambda w: (_port_order(w[0]), _port_order(w[1])),
    )
    for p, q in wires:
        lines.append(f"wire {fmt_port(p)} {fmt_port(q)}")
    lines.append(f"loops {net.loops}")
    return "\n".join(lines) + "\n"


def _parse_port(text: str, lineno: int) -> Port:
    m = _PORT.match(text)
    if not m:
        raise NetFormatError(f"line {lineno}: bad port {text!r}")
    if m.group(1) is not None:
        return (FREE, int(m.group(1)))
    return (int(m.group(2)), int(m.group(3)))


def parse_net(text: str) -> SimpleNet:
    cells: dict[int, Cell] = {}
    link: dict[Port, Port] = {}
    declared: list[LinearType | None] | None = None
    loops = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        if head == "interface":
            declared = []
            for k, item in enumerate(rest):
                name, _, ty = item.partition(":")
                if name != f"f{k}":
                    raise NetFormatError(f"line {lineno}: interface entries must be f0, f1, ... in order")
                if ty == "*":
                    declared.append(None)
                elif ty in _TYPES:
                    declared.append(_TYPES[ty])
                else:
                    raise NetFormatError(f"line {lineno}: unknown type {ty!r}")
        elif head == "cell":
            if len(rest) not in (2, 3) or not rest[0].isdigit() or rest[1] not in _SYMBOLS:
                raise NetFormatError(f"line {lineno}: expected 'cell <id> <symbol> [label]'")
            c = int(rest[0])
            if c in cells:
                raise NetFormatError(f"line {lineno}: cell {c} declared twice")
            try:
                cells[c] = Cell(_SYMBOLS[rest[1]], rest[2] if len(rest) == 3 else None)
            except ValueError as exc:
                raise NetFormatError(f"line {lineno}: {exc}") from None
        elif head == "wire":
            if len(rest) != 2:
                raise NetFormatError(f"line {lineno}: expected 'wire <port> <port>'")
            p, q = (_parse_port(x, lineno) for x in rest)
            for x in (p, q):
                if x in link:
                    raise NetFormatError(f"line {lineno}: port {fmt_port(x)} wired twice")
            if p == q:
                raise NetFormatError(f"line {lineno}: port wired to itself")
            link[p] = q
            link[q] = p
        elif head == "loops":
            if len(rest) != 1 or not rest[0].isdigit():
                raise NetFormatError(f"line {lineno}: expected 'loops <n>'")
            loops = int(rest[0])
        else:
            raise NetFormatError(f"line {lineno}: unknown directive {head!r}")
    frees = [p[1] for p in link if p[0] == FREE]
    nfree = len(declared) if declared is not None else (max(frees) + 1 if frees else 0)
    net = SimpleNet(cells, link, nfree, loops)
    problems = net.validate()
    if problems:
        raise NetFormatError("; ".join(problems))
    if declared is not None and declared != net.interface_types():
        raise NetFormatError("interface line disagrees with the cells wired to the free ports")
    return net


def to_dot(net: SimpleNet, name: str = "net") -> str:
    """Cells as triangles; the end of a wire at auxiliary port 1 carries a dot."""
    lines = [f"graph {name} {{", "  node [fontsize=10];"]
    for k in range(net.nfree):
        lines.append(f'  f{k} [shape=plaintext, label="f{k}"];')
    for c, cell in sorted(net.cells.items()):
        text = cell.symbol.value if cell.label in (None, TAU) else f"{cell.symbol.value} {cell.label}"
        lines.append(f'  c{c} [shape=triangle, label="{text}"];')
    for p, q in sorted((p, q) for p, q in net.link.items() if _port_order(p) <= _port_order(q)):
        attrs = []
        if p[0] != FREE and p[1] == 1:
            attrs.append("arrowtail=dot")
        if q[0] != FREE and q[1] == 1:
            attrs.append("arrowhead=dot")
        if attrs:
            attrs.append("dir=both")
        tail = f"f{p[1]}" if p[0] == FREE else f"c{p[0]}"
        head = f"f{q[1]}" if q[0] == FREE else f"c{q[0]}"
        attrs.append(f'taillabel="{p[1]}"' if p[0] != FREE else 'taillabel=""')
        attrs.append(f'headlabel="{q[1]}"' if q[0] != FREE else 'headlabel=""')
        lines.append(f"  {tail} -- {head} [{', '.join(attrs)}];")
    if net.loops:
        lines.append(f'  loops [shape=plaintext, label="{net.loops} loop(s)"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = ["NetFormatError", "format_net", "parse_net", "to_dot"]
