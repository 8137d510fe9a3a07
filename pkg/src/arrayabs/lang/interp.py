"""Concrete enumerating interpreter: the ground-truth oracle.

The interpreter executes programs over mathematical integers. `havoc`
branches over a finite value set, so a single initial state expands
into the full set of reachable final states; `enumerate_executions`
additionally enumerates every parameter valuation and every initial
array content within the given bounds. Assume-violations silently
drop a path; assertion failures and out-of-bounds accesses produce
distinguished error states that remain in the result set.

States returned are canonical, hashable, and totally ordered, so sets
of outcomes compare across runs and implementations. A shared step
budget makes enumeration blow-ups an explicit error rather than a
hang.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

from .ast import (
    Add,
    ArrRead,
    ArrWrite,
    Assert,
    Assign,
    Assume,
    BoolConst,
    Cmp,
    Cond,
    CondAnd,
    CondNot,
    CondOr,
    Expr,
    Havoc,
    If,
    Mul,
    Num,
    Program,
    Stmt,
    Sub,
    Var,
    While,
)

OK = "ok"
ASSERT_FAILED = "assert-failed"
OUT_OF_BOUNDS = "out-of-bounds"

Arrays = dict[str, dict[tuple[int, ...], int]]
Trace = Callable[[tuple[int, ...], dict[str, int]], None]


class EnumerationBudgetError(RuntimeError):
    pass


class _OutOfBounds(Exception):
    pass


@dataclass(frozen=True, order=True)
class ConcreteState:
    """Final program state in canonical form."""

    status: str
    scalars: tuple[tuple[str, int], ...]
    arrays: tuple[tuple[str, tuple[tuple[tuple[int, ...], int], ...]], ...]

    @staticmethod
    def make(status: str, scalars: Mapping[str, int], arrays: Mapping[str, Mapping[tuple[int, ...], int]]) -> "ConcreteState":
        return ConcreteState(
            status,
            tuple(sorted(scalars.items())),
            tuple(sorted((n, tuple(sorted(f.items()))) for n, f in arrays.items())),
        )

    def scalar_dict(self) -> dict[str, int]:
        return dict(self.scalars)

    def array_dict(self, name: str) -> dict[tuple[int, ...], int]:
        for n, f in self.arrays:
            if n == name:
                return dict(f)
        raise KeyError(name)

    def project(self, scalar_names: Sequence[str], array_names: Sequence[str] = ()) -> "ConcreteState":
        """Restriction to the given variables (drops temporaries)."""
        keep = set(scalar_names)
        akeep = set(array_names)
        return ConcreteState(
            self.status,
            tuple((n, v) for n, v in self.scalars if n in keep),
            tuple((n, f) for n, f in self.arrays if n in akeep),
        )


@dataclass(frozen=True)
class Bounds:
    """Finite ranges for the enumeration."""

    params: Mapping[str, Sequence[int]] = field(default_factory=dict)
    values: Sequence[int] = (0, 1, 2)
    max_steps: int = 1_000_000


def eval_expr(
    e: Expr,
    scalars: Mapping[str, int],
    arrays: Mapping[str, Mapping[tuple[int, ...], int]],
    olds: Mapping[str, Mapping[tuple[int, ...], int]] | None = None,
) -> int:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return scalars[e.name]
    if isinstance(e, Add):
        return eval_expr(e.left, scalars, arrays, olds) + eval_expr(e.right, scalars, arrays, olds)
    if isinstance(e, Sub):
        return eval_expr(e.left, scalars, arrays, olds) - eval_expr(e.right, scalars, arrays, olds)
    if isinstance(e, Mul):
        return e.factor * eval_expr(e.arg, scalars, arrays, olds)
    if isinstance(e, ArrRead):
        idx = tuple(eval_expr(i, scalars, arrays, olds) for i in e.index)
        table = (olds if e.initial and olds is not None else arrays)[e.array]
        if idx not in table:
            raise _OutOfBounds()
        return table[idx]
    raise TypeError(f"not an expression: {e!r}")


def eval_cond(
    c: Cond,
    scalars: Mapping[str, int],
    arrays: Mapping[str, Mapping[tuple[int, ...], int]],
    olds: Mapping[str, Mapping[tuple[int, ...], int]] | None = None,
) -> bool:
    if isinstance(c, BoolConst):
        return c.value
    if isinstance(c, Cmp):
        a = eval_expr(c.left, scalars, arrays, olds)
        b = eval_expr(c.right, scalars, arrays, olds)
        return {
            "==": a == b, "!=": a != b, "<": a < b,
            "<=": a <= b, ">": a > b, ">=": a >= b,
        }[c.op]
    if isinstance(c, CondAnd):
        return all(eval_cond(p, scalars, arrays, olds) for p in c.parts)
    if isinstance(c, CondOr):
        return any(eval_cond(p, scalars, arrays, olds) for p in c.parts)
    if isinstance(c, CondNot):
        return not eval_cond(c.arg, scalars, arrays, olds)
    raise TypeError(f"not a condition: {c!r}")


class _Runner:
    def __init__(self, values: Sequence[int], budget: list[int], trace: Trace | None):
        self.values = tuple(values)
        self.budget = budget
        self.trace = trace

    def spend(self) -> None:
        self.budget[0] -= 1
        if self.budget[0] < 0:
            raise EnumerationBudgetError("enumeration budget exceeded")

    def seq(
        self,
        stmts: tuple[Stmt, ...],
        k: int,
        scalars: dict[str, int],
        arrays: Arrays,
        path: tuple[int, ...],
    ) -> Iterator[tuple[str, dict[str, int], Arrays]]:
        if k == len(stmts):
            yield OK, scalars, arrays
            return
        s = stmts[k]
        self.spend()
        if self.trace is not None:
            self.trace(path + (k,), dict(scalars))
        if isinstance(s, Assign):
            try:
                v = eval_expr(s.expr, scalars, arrays)
            except _OutOfBounds:
                yield OUT_OF_BOUNDS, scalars, arrays
                return
            yield from self.seq(stmts, k + 1, {**scalars, s.var: v}, arrays, path)
        elif isinstance(s, Havoc):
            for v in self.values:
                yield from self.seq(stmts, k + 1, {**scalars, s.var: v}, arrays, path)
        elif isinstance(s, ArrWrite):
            try:
                idx = tuple(eval_expr(i, scalars, arrays) for i in s.index)
                val = eval_expr(s.value, scalars, arrays)
            except _OutOfBounds:
                yield OUT_OF_BOUNDS, scalars, arrays
                return
            if idx not in arrays[s.array]:
                yield OUT_OF_BOUNDS, scalars, arrays
                return
            updated = {**arrays, s.array: {**arrays[s.array], idx: val}}
            yield from self.seq(stmts, k + 1, scalars, updated, path)
        elif isinstance(s, Assume):
            try:
                ok = eval_cond(s.cond, scalars, arrays)
            except _OutOfBounds:
                yield OUT_OF_BOUNDS, scalars, arrays
                return
            if ok:
                yield from self.seq(stmts, k + 1, scalars, arrays, path)
        elif isinstance(s, Assert):
            try:
                ok = eval_cond(s.cond, scalars, arrays)
            except _OutOfBounds:
                yield OUT_OF_BOUNDS, scalars, arrays
                return
            if ok:
                yield from self.seq(stmts, k + 1, scalars, arrays, path)
            else:
                yield ASSERT_FAILED, scalars, arrays
        elif isinstance(s, If):
            try:
                cond = eval_cond(s.cond, scalars, arrays)
            except _OutOfBounds:
                yield OUT_OF_BOUNDS, scalars, arrays
                return
            branch = s.then if cond else s.els
            sub = (k, 0) if cond else (k, 1)
            for st, sc, ar in self.seq(branch, 0, scalars, arrays, path + sub):
                if st == OK:
                    yield from self.seq(stmts, k + 1, sc, ar, path)
                else:
                    yield st, sc, ar
        elif isinstance(s, While):
            try:
                cond = eval_cond(s.cond, scalars, arrays)
            except _OutOfBounds:
                yield OUT_OF_BOUNDS, scalars, arrays
                return
            if not cond:
                yield from self.seq(stmts, k + 1, scalars, arrays, path)
                return
            for st, sc, ar in self.seq(s.body, 0, scalars, arrays, path + (k, 0)):
                if st == OK:
                    # back to the loop head
                    yield from self.seq(stmts, k, sc, ar, path)
                else:
                    yield st, sc, ar
        else:
            raise TypeError(f"not a statement: {s!r}")


def run_program(
    p: Program,
    scalars: Mapping[str, int],
    arrays: Mapping[str, Mapping[tuple[int, ...], int]],
    values: Sequence[int] = (0, 1, 2),
    max_steps: int = 1_000_000,
    trace: Trace | None = None,
) -> tuple[ConcreteState, ...]:
    """All final states from one initial state (havoc branches over values)."""
    init_scalars = {n: 0 for n in p.locals}
    init_scalars.update(scalars)
    init_arrays: Arrays = {n: dict(f) for n, f in arrays.items()}
    runner = _Runner(values, [max_steps], trace)
    out = {
        ConcreteState.make(st, sc, ar)
        for st, sc, ar in runner.seq(p.body, 0, init_scalars, init_arrays, ())
    }
    return tuple(sorted(out))


def index_box(p: Program, params: Mapping[str, int]) -> dict[str, list[tuple[int, ...]]]:
    """Declared index tuples per array under a parameter valuation."""
    out: dict[str, list[tuple[int, ...]]] = {}
    for a in p.arrays:
        lens = [max(0, eval_expr(d, params, {})) for d in a.dims]
        out[a.name] = list(itertools.product(*[range(n) for n in lens]))
    return out


def enumerate_executions(p: Program, bounds: Bounds, trace: Trace | None = None) -> tuple[ConcreteState, ...]:
    """The exact, deterministically ordered set of reachable final states.

    Parameters range over bounds.params; every array content over
    bounds.values per cell; havoc over bounds.values. Error states are
    included. Raises EnumerationBudgetError when the shared step budget
    is exhausted.
    """
    for n in p.params:
        if n not in bounds.params:
            raise ValueError(f"no bounds given for parameter {n}")
    budget = [bounds.max_steps]
    finals: set[ConcreteState] = set()
    for pvals in itertools.product(*[bounds.params[n] for n in p.params]):
        penv = dict(zip(p.params, pvals))
        box = index_box(p, penv)
        per_array = []
        for a in p.arrays:
            cells = box[a.name]
            per_array.append(
                [dict(zip(cells, vals)) for vals in itertools.product(bounds.values, repeat=len(cells))]
            )
        for contents in itertools.product(*per_array):
            arrays = {a.name: contents[i] for i, a in enumerate(p.arrays)}
            scalars = {**{n: 0 for n in p.locals}, **penv}
            runner = _Runner(bounds.values, budget, trace)
            for st, sc, ar in runner.seq(p.body, 0, scalars, arrays, ()):
                finals.add(ConcreteState.make(st, sc, ar))
    return tuple(sorted(finals))
