"""Rewrite an array program into a purely scalar one.

Each abstracted array f gets k symbolic cells: per cell j a tuple of
index parameters f$j$x0.. (one per dimension) and a value variable
f$j$v. A read r=f[i] becomes a havoc of r followed by one guarded
assume per live cell; a write f[i]=r updates every live cell whose
index matches. The prologue havocs the cell values and pins the index
parameters inside the array bounds, adds the ordering chain and focus
precondition when configured, asserts nothing and reads nothing.

The result is a plain Program (so the whole lang toolbox applies)
wrapped with enough metadata to instrument observers, lift invariants
and check targets later.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping

from ..bridge import BridgeError, formula_to_cond
from ..lang.ast import (
    ArrRead,
    ArrWrite,
    Assert,
    Assign,
    Assume,
    Cmp,
    Cond,
    CondAnd,
    CondNot,
    CondOr,
    Expr,
    Havoc,
    If,
    Num,
    Program,
    Stmt,
    Target,
    Var,
    While,
    cond_reads,
    expr_reads,
)
from ..lang.checks import check_program
from .config import ArrayCells, IndexConfig, TransformError


def index_var(array: str, cell: int, dim: int) -> str:
    return f"{array}${cell}$x{dim}"


def value_var(array: str, cell: int) -> str:
    return f"{array}${cell}$v"


def init_var(array: str, cell: int) -> str:
    return f"{array}${cell}$init"


@dataclass(frozen=True)
class Cell:
    array: str
    pos: int
    index: tuple[str, ...]
    value: str
    frozen: bool = False
    init: str | None = None

    @property
    def live(self) -> bool:
        return not self.frozen


def cells_for(array: str, dims: int, spec: ArrayCells) -> tuple[Cell, ...]:
    out = []
    for j in range(spec.count):
        frozen = j in spec.frozen
        out.append(
            Cell(
                array,
                j,
                tuple(index_var(array, j, d) for d in range(dims)),
                value_var(array, j),
                frozen,
                init_var(array, j) if spec.snapshot and not frozen else None,
            )
        )
    return tuple(out)


@dataclass(frozen=True)
class AccessSite:
    """One syntactic array access and where its translation sits.

    `path` addresses the insertion point just before the emitted
    statements: alternating (statement index, branch attribute) steps
    ending in a plain index into the innermost statement tuple.
    `width` counts the emitted statements, so path[-1] + width indexes
    just past them. Observer latches insert at `path`: splitting the
    state before the guarded cell updates keeps each partition's
    branch decisions sharp.
    """

    id: int
    array: str
    kind: str  # "read" | "write"
    index: tuple[str, ...]
    var: str | None  # read target
    value: Expr | None  # written expression
    path: tuple
    width: int = 0

    def index_exprs(self) -> tuple[Expr, ...]:
        return tuple(Var(n) for n in self.index)


@dataclass(frozen=True)
class ScalarProgram:
    program: Program  # array-free
    source: Program  # the decomposed original
    cfg: IndexConfig
    cells: Mapping[str, tuple[Cell, ...]]
    origin: tuple[AccessSite, ...]
    flags: tuple[str, ...] = ()
    target: Target | None = None
    prologue_len: int = 0

    def all_cells(self) -> Iterator[Cell]:
        for cs in self.cells.values():
            yield from cs


def imp(a: Cond, b: Cond) -> Cond:
    """a ==> b in the form the parser produces."""
    return CondOr((CondNot(a), b))


def _index_guard(cell: Cell, index: tuple[Expr, ...]) -> Cond:
    eqs = tuple(Cmp("==", ie, Var(xv)) for ie, xv in zip(index, cell.index))
    return eqs[0] if len(eqs) == 1 else CondAnd(eqs)


def _cells(cfg: IndexConfig, array: str, dims: int) -> tuple[Cell, ...]:
    spec = cfg.arrays.get(array)
    if spec is None:
        return ()
    return cells_for(array, dims, spec)


def transform_read(stmt: Assign, cfg: IndexConfig) -> list[Stmt]:
    """r = f[i...]  ->  havoc r; one guarded assume per live cell."""
    read = stmt.expr
    if not isinstance(read, ArrRead):
        raise TransformError("transform_read expects an elementary array read")
    out: list[Stmt] = [Havoc(stmt.var, line=stmt.line)]
    for cell in _cells(cfg, read.array, len(read.index)):
        if cell.frozen:
            continue
        guard = _index_guard(cell, read.index)
        body = (Assume(Cmp("==", Var(stmt.var), Var(cell.value)), line=stmt.line),)
        out.append(If(guard, body, line=stmt.line))
    return out


def transform_write(stmt: ArrWrite, cfg: IndexConfig) -> list[Stmt]:
    """f[i...] = r  ->  one guarded cell update per live cell."""
    out: list[Stmt] = []
    for cell in _cells(cfg, stmt.array, len(stmt.index)):
        if cell.frozen:
            continue
        guard = _index_guard(cell, stmt.index)
        body = (Assign(cell.value, stmt.value, line=stmt.line),)
        out.append(If(guard, body, line=stmt.line))
    return out


def _check_decomposed(p: Program) -> None:
    from ..lang.ast import cond_vars, is_elementary_read, is_elementary_write, walk_stmts

    for s in walk_stmts(p.body):
        if isinstance(s, Assign):
            if isinstance(s.expr, ArrRead):
                if not is_elementary_read(s):
                    raise TransformError(f"line {s.line}: array read is not elementary")
            elif list(expr_reads(s.expr)):
                raise TransformError(f"line {s.line}: array read buried in expression")
        elif isinstance(s, ArrWrite):
            if not is_elementary_write(s):
                raise TransformError(f"line {s.line}: array write is not elementary")
        elif isinstance(s, (If, While, Assume, Assert)):
            if list(cond_reads(s.cond)):
                raise TransformError(f"line {s.line}: array read inside a condition")


class _Walker:
    def __init__(self, p: Program, cfg: IndexConfig):
        self.p = p
        self.cfg = cfg
        self.dims = {a.name: a.dims for a in p.arrays}
        self.sites: list[AccessSite] = []
        self.next_id = 0

    def _bounds_assert(self, array: str, index: tuple[Expr, ...], line: int) -> Stmt:
        parts = []
        for ie, dim in zip(index, self.dims[array]):
            parts.append(Cmp("<=", Num(0), ie))
            parts.append(Cmp("<", ie, dim))
        cond = parts[0] if len(parts) == 1 else CondAnd(tuple(parts))
        return Assert(cond, line=line)

    def block(self, stmts: tuple[Stmt, ...], prefix: tuple, out: list[Stmt]) -> None:
        for s in stmts:
            if isinstance(s, Assign) and isinstance(s.expr, ArrRead):
                r = s.expr
                start = len(out)
                if self.cfg.bounds_checks:
                    out.append(self._bounds_assert(r.array, r.index, s.line))
                out.extend(transform_read(s, self.cfg))
                self.sites.append(
                    AccessSite(
                        self.next_id, r.array, "read",
                        tuple(v.name for v in r.index), s.var, None,
                        prefix + (start,), len(out) - start,
                    )
                )
                self.next_id += 1
            elif isinstance(s, ArrWrite):
                start = len(out)
                if self.cfg.bounds_checks:
                    out.append(self._bounds_assert(s.array, s.index, s.line))
                out.extend(transform_write(s, self.cfg))
                self.sites.append(
                    AccessSite(
                        self.next_id, s.array, "write",
                        tuple(v.name for v in s.index), None, s.value,
                        prefix + (start,), len(out) - start,
                    )
                )
                self.next_id += 1
            elif isinstance(s, If):
                at = len(out)
                then: list[Stmt] = []
                self.block(s.then, prefix + (at, "then"), then)
                els: list[Stmt] = []
                self.block(s.els, prefix + (at, "els"), els)
                out.append(If(s.cond, tuple(then), tuple(els), line=s.line))
            elif isinstance(s, While):
                at = len(out)
                body: list[Stmt] = []
                self.block(s.body, prefix + (at, "body"), body)
                out.append(While(s.cond, tuple(body), line=s.line))
            else:
                out.append(s)


def transform_program(p: Program, cfg: IndexConfig) -> ScalarProgram:
    _check_decomposed(p)
    declared_arrays = {a.name: a for a in p.arrays}
    unknown = sorted(set(cfg.arrays) - set(declared_arrays))
    if unknown:
        raise TransformError(f"config names unknown arrays: {', '.join(unknown)}")

    cells: dict[str, tuple[Cell, ...]] = {}
    for a in p.arrays:
        spec = cfg.arrays.get(a.name)
        if spec is None:
            continue
        if spec.ordered and len(a.dims) != 1:
            raise TransformError(f"ordered cells need a 1-dimensional array, {a.name} has {len(a.dims)}")
        cells[a.name] = cells_for(a.name, len(a.dims), spec)

    generated: list[str] = []
    for cs in cells.values():
        for c in cs:
            generated.extend(c.index)
            generated.append(c.value)
            if c.init:
                generated.append(c.init)
    declared = set(p.params) | set(p.locals) | set(declared_arrays)
    clash = sorted(set(generated) & declared)
    if clash:
        raise TransformError(f"generated names collide with program names: {', '.join(clash)}")

    index_params = [n for cs in cells.values() for c in cs for n in c.index]
    if cfg.focus is not None:
        allowed = set(p.params) | set(index_params)
        loose = sorted(set(cfg.focus.free_vars()) - allowed)
        if loose:
            raise TransformError(f"focus mentions non-index, non-parameter variables: {', '.join(loose)}")

    pro: list[Stmt] = []
    for cs in cells.values():
        for c in cs:
            pro.append(Havoc(c.value))
    for name, cs in cells.items():
        dims = declared_arrays[name].dims
        for c in cs:
            for xv, dim in zip(c.index, dims):
                pro.append(Assume(CondAnd((Cmp("<=", Num(0), Var(xv)), Cmp("<", Var(xv), dim)))))
    for name, cs in cells.items():
        if cfg.arrays[name].ordered:
            for a, b in zip(cs, cs[1:]):
                pro.append(Assume(Cmp("<", Var(a.index[0]), Var(b.index[0]))))
    # at entry every cell of an array describes the same contents:
    # matching indices force matching values
    for name, cs in cells.items():
        if cfg.arrays[name].ordered:
            continue
        for i, a in enumerate(cs):
            for b in cs[i + 1:]:
                guard = _index_guard(b, tuple(Var(n) for n in a.index))
                pro.append(Assume(imp(guard, Cmp("==", Var(a.value), Var(b.value)))))
    if cfg.focus is not None:
        try:
            pro.append(Assume(formula_to_cond(cfg.focus)))
        except BridgeError as e:
            raise TransformError(f"focus has no source form: {e}") from e
    for cs in cells.values():
        for c in cs:
            if c.init:
                pro.append(Assign(c.init, Var(c.value)))

    walker = _Walker(p, cfg)
    body: list[Stmt] = list(pro)
    walker.block(p.body, (), body)

    value_locals = [c.value for cs in cells.values() for c in cs]
    init_locals = [c.init for cs in cells.values() for c in cs if c.init]
    prog = Program(
        p.name,
        p.params + tuple(index_params),
        (),
        p.locals + tuple(value_locals) + tuple(init_locals),
        tuple(body),
    )
    check_program(prog)
    sp = ScalarProgram(
        prog, p, cfg, cells, tuple(walker.sites),
        target=p.target, prologue_len=len(pro),
    )
    if cfg.observers is not None:
        from .observers import instrument_observers

        sp = instrument_observers(sp, cfg.observers)
    return sp
