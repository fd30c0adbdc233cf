"""Encoding of pi-terms into typed solos terms."""

from __future__ import annotations

from . import pi
from .names import NameSupply
from .solos import Atom, Nil, Nu, SoloTerm, SoloType, par_all, solo_in, solo_out

V, W = SoloType.V, SoloType.W


def cat(v: str, supply: NameSupply | None = None) -> SoloTerm:
    """``new z. v?<z z v>``: absorbs the continuation channel ``v``."""
    if supply is None:
        supply = NameSupply({v})
    z = supply.fresh("z")
    return Nu(z, Atom(solo_in(v, z, z, v)), W)


def translate_under(p: pi.PiTerm, v: str, supply: NameSupply) -> SoloTerm:
    """The translation parameterised by the continuation name ``v``."""
    match p:
        case pi.Nil():
            return Nil()
        case pi.Par(a, b):
            return par_all([translate_under(a, v, supply), translate_under(b, v, supply)])
        case pi.Nu(x, body):
            return Nu(x, translate_under(body, v, supply), W)
        case pi.Input(u, x, body):
            w, y, v2 = supply.fresh("w"), supply.fresh("y"), supply.fresh("v")
            inner = Nu(x, Nu(v2, par_all([Atom(solo_in(w, x, v, v2)), translate_under(body, v2, supply)]), V), W)
            return _announce(u, v, w, y, inner, supply)
        case pi.Output(u, x, body):
            w, y, v2 = supply.fresh("w"), supply.fresh("y"), supply.fresh("v")
            inner = Nu(v2, par_all([Atom(solo_out(w, x, v2, v)), translate_under(body, v2, supply)]), V)
            return _announce(u, v, w, y, inner, supply)
    raise TypeError(p)


def _announce(u: str, v: str, w: str, y: str, inner: SoloTerm, supply: NameSupply) -> SoloTerm:
    body = par_all([Atom(solo_out(v, u, w, y)), cat(y, supply), inner])
    return Nu(w, Nu(y, body, V), W)


def translate_pi(p: pi.PiTerm) -> SoloTerm:
    """Top-level translation ``new v.([[p]]_v | Cat v)``."""
    supply = NameSupply(pi.all_names(p))
    v = supply.fresh("v")
    return Nu(v, par_all([translate_under(p, v, supply), cat(v, supply)]), V)


def pi_context(p: pi.PiTerm) -> dict[str, SoloType]:
    """Every free pi name is typed W."""
    return {x: W for x in pi.free_names(p)}
