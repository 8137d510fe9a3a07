"""Partitioned abstract interpretation of scalar programs.

The state is a map from flag valuations to product-domain elements.
Flags are write-only booleans assigned constants by instrumented
branches; they carry no numeric content and are excluded from the
numeric universe. Assigning a flag moves partitions between buckets
(joining on collision), so each bucket's element describes exactly the
runs that reached it with those flag values. With no flags the state
is a single bucket and the analysis is a plain product-domain
interpretation.

Loops run an ascending pass (join for `widening_delay` steps, then
widening) followed by bounded narrowing. Assertion checks and loop
invariant snapshots happen in one final pass over the stable state, so
verdicts never depend on intermediate iterates.

Widened elements are stored unreduced; guard assumes reduce their own
copies. Reducing the stored head element could re-tighten what the
widening just relaxed and loop forever.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from ..bridge import BridgeError, cond_to_formula, expr_to_lin
from ..lang.ast import (
    Assert,
    Assign,
    Assume,
    Havoc,
    If,
    Num,
    Program,
    Stmt,
    While,
)
from ..lia import FALSE, Formula, Lin, eq, land, lnot, lor, subst
from .product import Product

Valuation = tuple  # of 0 | 1 | None per flag, None meaning unknown


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class AbstractState:
    """Disjunction over flag valuations of product elements."""

    flags: tuple[str, ...]
    parts: Mapping[Valuation, Product]

    @staticmethod
    def bottom(flags: tuple[str, ...]) -> "AbstractState":
        return AbstractState(flags, {})

    def is_empty(self) -> bool:
        return not self.parts

    def _norm(self, parts: dict[Valuation, Product]) -> "AbstractState":
        return AbstractState(
            self.flags, {k: v for k, v in parts.items() if not v.is_empty()}
        )

    def map(self, fn) -> "AbstractState":
        return self._norm({k: fn(v) for k, v in self.parts.items()})

    def join(self, other: "AbstractState") -> "AbstractState":
        out = dict(self.parts)
        for k, v in other.parts.items():
            out[k] = out[k].join(v) if k in out else v
        return self._norm(out)

    def widen(self, other: "AbstractState") -> "AbstractState":
        out = dict(other.parts)
        for k, v in self.parts.items():
            out[k] = v.widen(other.parts[k]) if k in other.parts else v
        return AbstractState(self.flags, out)

    def narrow(self, other: "AbstractState") -> "AbstractState":
        out = dict(other.parts)
        for k, v in self.parts.items():
            if k in other.parts:
                out[k] = v.narrow(other.parts[k])
        return self._norm(out)

    def leq(self, other: "AbstractState") -> bool:
        return all(
            k in other.parts and v.leq(other.parts[k]) for k, v in self.parts.items()
        )

    def assume(self, f: Formula) -> "AbstractState":
        return self.map(lambda el: el.assume(f).reduce())

    def assign_flag(self, flag: str, value: int) -> "AbstractState":
        i = self.flags.index(flag)
        out: dict[Valuation, Product] = {}
        for k, v in self.parts.items():
            nk = k[:i] + (value,) + k[i + 1:]
            out[nk] = out[nk].join(v) if nk in out else v
        return self._norm(out)

    def forget_flag(self, flag: str) -> "AbstractState":
        i = self.flags.index(flag)
        out: dict[Valuation, Product] = {}
        for k, v in self.parts.items():
            nk = k[:i] + (None,) + k[i + 1:]
            out[nk] = out[nk].join(v) if nk in out else v
        return self._norm(out)

    def collapse(self) -> "AbstractState":
        """Merge every bucket; flag values become unknown."""
        if len(self.parts) <= 1:
            return self
        el = None
        for v in self.parts.values():
            el = v if el is None else el.join(v)
        return AbstractState(self.flags, {(None,) * len(self.flags): el})

    def entails(self, f: Formula) -> bool:
        """Sound entailment: the negation is unreachable in every bucket."""
        neg = lnot(f)
        for k, el in self.parts.items():
            g = self._ground(neg, k)
            free = set(g.free_vars())
            if free & set(self.flags):
                return False  # flag value unknown in this bucket
            unknown = free - set(el.vars)
            if unknown:
                raise AnalysisError(f"unknown variables in query: {sorted(unknown)}")
            if not el.assume(g).reduce().is_empty():
                return False
        return True

    def _ground(self, f: Formula, valuation: Valuation) -> Formula:
        env = {
            fl: Lin.of(v)
            for fl, v in zip(self.flags, valuation)
            if v is not None
        }
        return subst(f, env) if env else f

    def to_formula(self) -> Formula:
        """Disjunction of bucket descriptions, flag values included."""
        disjuncts = []
        for k, el in sorted(self.parts.items(), key=lambda kv: str(kv[0])):
            lits = [
                eq(Lin.var(fl), Lin.of(v))
                for fl, v in zip(self.flags, k)
                if v is not None
            ]
            disjuncts.append(land(*lits, el.reduce().to_formula()))
        return lor(*disjuncts) if disjuncts else FALSE


@dataclass(frozen=True)
class AssertVerdict:
    line: int
    formula: Formula
    proven: bool


@dataclass
class AnalysisResult:
    program: Program
    flags: tuple[str, ...]
    entry: AbstractState
    exit: AbstractState
    asserts: tuple[AssertVerdict, ...]
    loop_invariants: tuple[tuple[int, AbstractState], ...]

    def all_asserts_hold(self) -> bool:
        return all(a.proven for a in self.asserts)

    def exit_entails(self, f: Formula) -> bool:
        return self.exit.entails(f)


@dataclass
class _Interp:
    numeric: tuple[str, ...]
    flags: tuple[str, ...]
    widening_delay: int
    partition_cap: int
    asserts: list[AssertVerdict] = field(default_factory=list)
    heads: list[tuple[int, AbstractState]] = field(default_factory=list)

    def _lin(self, expr) -> Lin:
        try:
            lin = expr_to_lin(expr)
        except BridgeError as e:
            raise AnalysisError(f"not scalar-linear: {e}") from e
        self._check_vars(lin.vars())
        return lin

    def _cond(self, cond) -> Formula:
        try:
            f = cond_to_formula(cond)
        except BridgeError as e:
            raise AnalysisError(f"condition not scalar: {e}") from e
        self._check_vars(f.free_vars())
        return f

    def _check_vars(self, vs: Iterable[str]) -> None:
        for v in vs:
            if v in self.flags:
                raise AnalysisError(f"observer flag {v} read by the program")
            if v not in self.numeric:
                raise AnalysisError(f"unknown variable {v}")

    def block(self, stmts: Iterable[Stmt], st: AbstractState, check: bool) -> AbstractState:
        for s in stmts:
            st = self.stmt(s, st, check)
            if st.is_empty():
                return st
        return st

    def stmt(self, s: Stmt, st: AbstractState, check: bool) -> AbstractState:
        if isinstance(s, Assign):
            if s.var in self.flags:
                if not isinstance(s.expr, Num):
                    raise AnalysisError("flags may only be assigned constants")
                return st.assign_flag(s.var, s.expr.value)
            return st.map(lambda el: el.assign(s.var, self._lin(s.expr)))
        if isinstance(s, Havoc):
            if s.var in self.flags:
                return st.forget_flag(s.var)
            if s.var not in self.numeric:
                raise AnalysisError(f"unknown variable {s.var}")
            return st.map(lambda el: el.forget(s.var))
        if isinstance(s, Assume):
            return st.assume(self._cond(s.cond))
        if isinstance(s, Assert):
            f = self._cond(s.cond)
            if check:
                self.asserts.append(AssertVerdict(s.line, f, st.entails(f)))
            return st.assume(f)
        if isinstance(s, If):
            f = self._cond(s.cond)
            a = self.block(s.then, st.assume(f), check)
            b = self.block(s.els, st.assume(lnot(f)), check)
            out = a.join(b)
            if len(out.parts) > self.partition_cap:
                out = out.collapse()
            return out
        if isinstance(s, While):
            return self.loop(s, st, check)
        raise AnalysisError(f"array statement reached the analysis: {s!r}")

    def loop(self, s: While, st: AbstractState, check: bool) -> AbstractState:
        f = self._cond(s.cond)
        inv = st
        rounds = 0
        while True:
            body_out = self.block(s.body, inv.assume(f), False)
            nxt = st.join(body_out)
            if nxt.leq(inv):
                break
            rounds += 1
            inv = inv.join(nxt) if rounds <= self.widening_delay else inv.widen(nxt)
            if len(inv.parts) > self.partition_cap:
                inv = inv.collapse()
        # one descending step to recover bounds the widening threw away
        body_out = self.block(s.body, inv.assume(f), False)
        inv = inv.narrow(st.join(body_out))
        if check:
            self.heads.append((s.line, inv))
            self.block(s.body, inv.assume(f), True)
        return inv.assume(lnot(f))


def analyze_program(
    program: Program,
    *,
    flags: tuple[str, ...] = (),
    widening_delay: int = 2,
    partition_cap: int = 12,
) -> AnalysisResult:
    """Abstractly interpret an array-free program.

    `flags` names locals to partition on; everything else is tracked
    numerically. Entry follows the evaluation rules: parameters are
    unconstrained, locals (flags included) start at zero.
    """
    for fl in flags:
        if fl not in program.locals:
            raise AnalysisError(f"flag {fl} is not a local variable")
    numeric = tuple(v for v in program.params + program.locals if v not in flags)
    el = Product.top(numeric)
    for v in program.locals:
        if v not in flags:
            el = el.assign(v, Lin.of(0))
    entry = AbstractState(tuple(flags), {(0,) * len(flags): el})
    interp = _Interp(numeric, tuple(flags), widening_delay, partition_cap)
    exit_state = interp.block(program.body, entry, True)
    return AnalysisResult(
        program=program,
        flags=tuple(flags),
        entry=entry,
        exit=exit_state,
        asserts=tuple(interp.asserts),
        loop_invariants=tuple(interp.heads),
    )


def analyze_scalar(sp, **kw) -> AnalysisResult:
    """analyze_program over a transformed program, partitioning on its
    observer flags."""
    return analyze_program(sp.program, flags=sp.flags, **kw)
