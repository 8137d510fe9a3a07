"""Write-only boolean instrumentation.

Each observer flag latches, at one access site, whether its predicate
holds at the moment the access executes. Flags start at 0, are
assigned 0/1 at the site, and are never read by program logic; they
exist so the analysis can partition on their valuations.
"""

from __future__ import annotations

from dataclasses import replace

from ..lang.ast import Assign, BoolConst, If, Num, Stmt, cond_vars
from ..lang.checks import check_program
from .config import ObserverSpec, ObsFlag, TransformError
from .core import ScalarProgram


def _insert(body: tuple[Stmt, ...], path: tuple, new: list[Stmt]) -> tuple[Stmt, ...]:
    if len(path) == 1:
        k = path[0]
        return body[:k] + tuple(new) + body[k:]
    i, attr, rest = path[0], path[1], path[2:]
    s = body[i]
    if attr == "then":
        s = replace(s, then=_insert(s.then, rest, new))
    elif attr == "els":
        s = replace(s, els=_insert(s.els, rest, new))
    elif attr == "body":
        s = replace(s, body=_insert(s.body, rest, new))
    else:
        raise TransformError(f"bad path step {attr!r}")
    return body[:i] + (s,) + body[i + 1:]


def _latch(flag: ObsFlag) -> Stmt:
    if flag.pred == BoolConst(True):
        return Assign(flag.name, Num(1))
    if flag.pred == BoolConst(False):
        return Assign(flag.name, Num(0))
    return If(flag.pred, (Assign(flag.name, Num(1)),), (Assign(flag.name, Num(0)),))


def instrument_observers(sp: ScalarProgram, spec: ObserverSpec) -> ScalarProgram:
    if not sp.origin or any(s.path == () for s in sp.origin):
        if spec.flags:
            raise TransformError("program has no instrumentable access map")
        return sp
    p = sp.program
    declared = set(p.params) | set(p.locals)
    names = [f.name for f in spec.flags]
    if len(set(names)) != len(names):
        raise TransformError("duplicate observer flag names")
    clash = sorted(set(names) & declared)
    if clash:
        raise TransformError(f"observer flags collide with program names: {', '.join(clash)}")
    sites = {s.id: s for s in sp.origin}
    blocks: dict[int, list[Stmt]] = {}
    for f in spec.flags:
        if f.site not in sites:
            raise TransformError(f"observer targets unknown access {f.site}")
        loose = sorted(set(cond_vars(f.pred)) - declared)
        if loose:
            raise TransformError(f"observer predicate mentions unknown names: {', '.join(loose)}")
        blocks.setdefault(f.site, []).append(_latch(f))

    body = p.body
    for sid in sorted(blocks, key=lambda s: sites[s].path[0::2], reverse=True):
        body = _insert(body, sites[sid].path, blocks[sid])
    inits = [Assign(n, Num(0)) for n in names]
    body = _insert(body, (sp.prologue_len,), inits)

    prog = replace(p, locals=p.locals + tuple(names), body=body)
    check_program(prog)
    return replace(
        sp,
        program=prog,
        flags=sp.flags + tuple(names),
        origin=tuple(replace(s, path=()) for s in sp.origin),
        prologue_len=sp.prologue_len + len(inits),
    )
