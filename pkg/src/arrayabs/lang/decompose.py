"""Hoist array accesses into elementary statements.

After this pass every array access is either `r = f[i, ...]` or
`f[i, ...] = r` where all indices are plain variables and the value is
a variable or literal. Reads buried in expressions or conditions move
into fresh temporaries; a while-condition's reads are re-evaluated at
the end of each iteration, preserving the original semantics exactly.
Programs that are already in this form come back unchanged.
"""

from __future__ import annotations

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


class _Decomposer:
    def __init__(self, used: set[str]):
        self.used = used
        self.counter = 0
        self.new_locals: list[str] = []

    def fresh(self) -> str:
        while True:
            name = f"tmp{self.counter}"
            self.counter += 1
            if name not in self.used:
                self.used.add(name)
                self.new_locals.append(name)
                return name

    def index_var(self, e: Expr, out: list[Stmt], line: int) -> Var:
        e = self.expr(e, out, line)
        if isinstance(e, Var):
            return e
        v = self.fresh()
        out.append(Assign(v, e, line=line))
        return Var(v)

    def expr(self, e: Expr, out: list[Stmt], line: int) -> Expr:
        """Read-free copy of e; hoisted statements appended to out."""
        if isinstance(e, (Num, Var)):
            return e
        if isinstance(e, Add):
            return Add(self.expr(e.left, out, line), self.expr(e.right, out, line))
        if isinstance(e, Sub):
            return Sub(self.expr(e.left, out, line), self.expr(e.right, out, line))
        if isinstance(e, Mul):
            return Mul(e.factor, self.expr(e.arg, out, line))
        if isinstance(e, ArrRead):
            idx = tuple(self.index_var(i, out, line) for i in e.index)
            v = self.fresh()
            out.append(Assign(v, ArrRead(e.array, idx), line=line))
            return Var(v)
        raise TypeError(f"not an expression: {e!r}")

    def cond(self, c: Cond, out: list[Stmt], line: int) -> Cond:
        if isinstance(c, BoolConst):
            return c
        if isinstance(c, Cmp):
            return Cmp(c.op, self.expr(c.left, out, line), self.expr(c.right, out, line))
        if isinstance(c, CondAnd):
            return CondAnd(tuple(self.cond(p, out, line) for p in c.parts))
        if isinstance(c, CondOr):
            return CondOr(tuple(self.cond(p, out, line) for p in c.parts))
        if isinstance(c, CondNot):
            return CondNot(self.cond(c.arg, out, line))
        raise TypeError(f"not a condition: {c!r}")

    def stmt(self, s: Stmt) -> list[Stmt]:
        out: list[Stmt] = []
        if isinstance(s, Assign):
            if isinstance(s.expr, ArrRead):
                # keep the read in place; only indices may need hoisting
                idx = tuple(self.index_var(i, out, s.line) for i in s.expr.index)
                out.append(Assign(s.var, ArrRead(s.expr.array, idx), line=s.line))
            else:
                e = self.expr(s.expr, out, s.line)
                out.append(Assign(s.var, e, line=s.line))
        elif isinstance(s, Havoc):
            out.append(s)
        elif isinstance(s, ArrWrite):
            idx = tuple(self.index_var(i, out, s.line) for i in s.index)
            val = self.expr(s.value, out, s.line)
            if not isinstance(val, (Var, Num)):
                v = self.fresh()
                out.append(Assign(v, val, line=s.line))
                val = Var(v)
            out.append(ArrWrite(s.array, idx, val, line=s.line))
        elif isinstance(s, Assume):
            c = self.cond(s.cond, out, s.line)
            out.append(Assume(c, line=s.line))
        elif isinstance(s, Assert):
            c = self.cond(s.cond, out, s.line)
            out.append(Assert(c, line=s.line))
        elif isinstance(s, If):
            c = self.cond(s.cond, out, s.line)
            out.append(If(c, self.block(s.then), self.block(s.els), line=s.line))
        elif isinstance(s, While):
            pre: list[Stmt] = []
            c = self.cond(s.cond, pre, s.line)
            # reads feeding the condition are refreshed at the end of
            # each iteration, mirroring re-evaluation of the condition
            body = self.block(s.body) + tuple(pre)
            out.extend(pre)
            out.append(While(c, body, line=s.line))
        else:
            raise TypeError(f"not a statement: {s!r}")
        return out

    def block(self, stmts: tuple[Stmt, ...]) -> tuple[Stmt, ...]:
        out: list[Stmt] = []
        for s in stmts:
            out.extend(self.stmt(s))
        return tuple(out)


def decompose_accesses(p: Program) -> Program:
    used = set(p.params) | set(p.locals) | {a.name for a in p.arrays}
    if p.target is not None:
        used |= set(p.target.indices)
    d = _Decomposer(used)
    body = d.block(p.body)
    return Program(
        p.name,
        p.params,
        p.arrays,
        p.locals + tuple(d.new_locals),
        body,
        p.target,
    )
