"""From scalar facts back to array facts.

A transformed program treats the tracked positions as arbitrary
parameters, so any invariant of its scalar state holds for every
admissible choice of positions. Reading the invariant that way gives
a universally quantified statement about the array contents:

    forall positions in U:  phi(positions, values, scalars)

where U collects the range constraints, the ordering of the position
parameters, and the focus precondition. This module builds that
quantified form, decides entailment of `ensures` clauses, and
implements the left-neighbour strengthening for ordered two-cell
layouts.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .bridge import BridgeError, expr_to_lin, formula_to_cond
from .lang.ast import (
    ArrRead,
    BoolConst,
    Cmp,
    Cond,
    CondAnd,
    CondNot,
    CondOr,
    Expr,
    Mul,
    Num,
    Sub,
    Target,
    Var,
)
from .lang.ast import Add as EAdd
from .lang.printer import cond_str
from .lia import (
    Budget,
    BudgetError,
    Formula,
    Lin,
    eliminate_quantifiers,
    eq,
    exists,
    forall,
    implies,
    is_sat,
    land,
    le,
    lnot,
    lor,
    lt,
    ne,
    rename,
    simplify,
    subst,
    to_smtlib,
    to_str,
)
from .transform.core import Cell, ScalarProgram


class LiftError(ValueError):
    pass


# ------------------------------------------------------------- quantify


@dataclass(frozen=True)
class QuantifiedInvariant:
    """forall `indices` satisfying `universe`: `matrix` holds.

    Position parameters are quantified; everything else (program
    scalars, cell values) stays free. A live cell's value variable
    denotes the final array content at its position, a frozen cell's
    value and any snapshot variable denote the content at entry.
    """

    indices: tuple[str, ...]
    universe: Formula
    matrix: Formula
    cells: Mapping[str, tuple[Cell, ...]]
    # variables whose value depends on the tracked positions (observer
    # flags): each instantiation of the invariant gets its own copy
    per_position: tuple[str, ...] = ()

    def to_formula(self) -> Formula:
        return forall(self.indices, implies(self.universe, self.matrix))

    def render(self) -> str:
        """Condition syntax of the source language where possible."""
        body = implies(self.universe, self.matrix)
        try:
            text = cond_str(formula_to_cond(simplify(body)))
        except BridgeError:
            text = to_str(body)
        quant = f"forall {', '.join(self.indices)}: " if self.indices else ""
        return quant + text


def _range_formulas(sp: ScalarProgram) -> list[Formula]:
    out = []
    for name, cs in sp.cells.items():
        dims = [expr_to_lin(d) for d in sp.source.array(name).dims]
        for c in cs:
            for xv, dim in zip(c.index, dims):
                x = Lin.var(xv)
                out.append(land(le(Lin.of(0), x), lt(x, dim)))
    return out


def _ordering_formulas(sp: ScalarProgram) -> list[Formula]:
    out = []
    for name, cs in sp.cells.items():
        if sp.cfg.arrays[name].ordered:
            for a, b in zip(cs, cs[1:]):
                out.append(lt(Lin.var(a.index[0]), Lin.var(b.index[0])))
    return out


def universe_of(sp: ScalarProgram) -> Formula:
    """Admissible positions: ranges, ordering, focus."""
    parts = _range_formulas(sp) + _ordering_formulas(sp)
    if sp.cfg.focus is not None:
        parts.append(sp.cfg.focus)
    return land(*parts)


def quantify(
    phi: Formula,
    sp: ScalarProgram,
    *,
    per_position: tuple[str, ...] | None = None,
) -> QuantifiedInvariant:
    """Read a scalar invariant as a universal array invariant.

    phi must speak only of program scalars and generated cell
    variables; it is typically the exit state of an analysis of
    sp.program. Pass per_position to override which variables are
    treated as position-dependent (default: the observer flags).
    """
    indices = tuple(n for c in sp.all_cells() for n in c.index)
    allowed = set(sp.program.params) | set(sp.program.locals)
    loose = sorted(set(phi.free_vars()) - allowed)
    if loose:
        raise LiftError(f"invariant mentions unknown variables: {', '.join(loose)}")
    if per_position is None:
        per_position = sp.flags
    return QuantifiedInvariant(indices, universe_of(sp), phi, dict(sp.cells), per_position)


# --------------------------------------------------------- check_target


def _fresh(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    n = 0
    while f"{base}~{n}" in taken:
        n += 1
    return f"{base}~{n}"


class _TargetTranslator:
    """Rewrite an ensures condition over a fixed index renaming.

    Array reads become value symbols, one per distinct
    (array, entry/final, index terms) triple; the bookkeeping of which
    symbol stands for which position drives the instantiation search.
    """

    def __init__(self, index_map: Mapping[str, str]):
        self.index_map = dict(index_map)
        # (array, initial, terms) -> symbol
        self.accesses: dict[tuple[str, bool, tuple[Lin, ...]], str] = {}

    def expr(self, e: Expr) -> Lin:
        if isinstance(e, Num):
            return Lin.of(e.value)
        if isinstance(e, Var):
            return Lin.var(self.index_map.get(e.name, e.name))
        if isinstance(e, EAdd):
            return self.expr(e.left) + self.expr(e.right)
        if isinstance(e, Sub):
            return self.expr(e.left) - self.expr(e.right)
        if isinstance(e, Mul):
            return self.expr(e.arg).scale(e.factor)
        if isinstance(e, ArrRead):
            key = (e.array, e.initial, tuple(self.expr(i) for i in e.index))
            sym = self.accesses.get(key)
            if sym is None:
                tag = "entry" if e.initial else "final"
                sym = f"{e.array}@{tag}{len(self.accesses)}"
                self.accesses[key] = sym
            return Lin.var(sym)
        raise LiftError(f"no translation for expression {e!r}")

    def cond(self, c: Cond) -> Formula:
        if isinstance(c, BoolConst):
            return land() if c.value else lor()
        if isinstance(c, Cmp):
            a, b = self.expr(c.left), self.expr(c.right)
            op = {
                "==": eq, "!=": ne,
                "<": lt, "<=": le,
                ">": lambda x, y: lt(y, x), ">=": lambda x, y: le(y, x),
            }[c.op]
            return op(a, b)
        if isinstance(c, CondAnd):
            return land(*(self.cond(p) for p in c.parts))
        if isinstance(c, CondOr):
            return lor(*(self.cond(p) for p in c.parts))
        if isinstance(c, CondNot):
            return lnot(self.cond(c.arg))
        raise LiftError(f"not a condition: {c!r}")


def _cell_bindings(
    inv: QuantifiedInvariant,
    accesses: dict[tuple[str, bool, tuple[Lin, ...]], str],
) -> list[dict[str, Lin]]:
    """Every way of pinning cells to accessed positions, one array at
    a time. Each binding is a substitution: index variables go to the
    position terms, value variables to the access symbols. Cells left
    out keep their own names (an arbitrary admissible position).

    A bound cell's value always routes through the canonical symbol
    for that position, even when the clause never mentions it:
    distinct bindings of one cell must not pin its free name to two
    different spots.
    """

    def sym_for(array: str, initial: bool, t: tuple[Lin, ...]) -> str:
        key = (array, initial, t)
        sym = accesses.get(key)
        if sym is None:
            tag = "entry" if initial else "final"
            sym = f"{array}@{tag}{len(accesses)}"
            accesses[key] = sym
        return sym

    by_array: dict[str, list[tuple[bool, tuple[Lin, ...]]]] = {}
    for array, initial, terms in list(accesses):
        by_array.setdefault(array, []).append((initial, terms))

    out: list[dict[str, Lin]] = []
    for array, uses in sorted(by_array.items()):
        cs = inv.cells.get(array)
        if cs is None:
            continue  # untracked array: symbols stay unconstrained
        terms = []
        seen = set()
        for _initial, t in uses:
            if t not in seen:
                seen.add(t)
                terms.append(t)
        for t in terms:
            if len(t) != len(cs[0].index):
                raise LiftError(
                    f"target indexes {array} with {len(t)} subscripts, cells have {len(cs[0].index)}"
                )
        choices = [terms + [None] for _ in cs]
        for combo in itertools.product(*choices):
            if all(t is None for t in combo):
                continue
            env: dict[str, Lin] = {}
            for c, t in zip(cs, combo):
                if t is None:
                    continue
                for xv, term in zip(c.index, t):
                    env[xv] = term
                env[c.value] = Lin.var(sym_for(array, c.frozen, t))
                if c.init:
                    env[c.init] = Lin.var(sym_for(array, True, t))
            out.append(env)
    return out


def export_smt(f: Formula, directory: str | Path, tag: str) -> Path:
    """Drop the query as an SMT-LIB script for outside cross-checking."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    p = d / f"{tag}.smt2"
    p.write_text(to_smtlib(f))
    return p


def check_target(
    inv: QuantifiedInvariant,
    target: Target,
    *,
    budget: Budget | None = None,
    smtlib_dir: str | Path | None = None,
    tag: str = "target",
) -> bool:
    """Does the lifted invariant entail the ensures clause?

    The clause's indices become fresh constants, its array reads
    become value symbols, and the invariant is instantiated at every
    combination of accessed positions; the conjunction must leave the
    negated clause unsatisfiable. Instantiating at the mentioned
    positions is complete when enough cells track the right spots,
    and sound regardless.
    """
    taken = set(inv.matrix.free_vars()) | set(inv.universe.free_vars()) | set(inv.indices)
    for cs in inv.cells.values():
        for c in cs:
            taken.update(c.index)
            taken.add(c.value)
            if c.init:
                taken.add(c.init)
    index_map = {}
    for k in target.indices:
        nm = _fresh(k, taken)
        taken.add(nm)
        index_map[k] = nm

    tr = _TargetTranslator(index_map)
    goal = tr.cond(target.cond)

    base = implies(inv.universe, inv.matrix)
    premises = [base]
    local = [v for v in inv.per_position if v in base.free_vars()]
    for n, env in enumerate(_cell_bindings(inv, tr.accesses)):
        copy = subst(base, env)
        if local:
            # flags travel with the positions: each instantiation of
            # the invariant speaks about its own observer outcome
            copy = rename(copy, {v: f"{v}~{n}" for v in local})
        premises.append(copy)

    query = land(*premises, lnot(goal))
    if smtlib_dir is not None:
        export_smt(query, smtlib_dir, tag)
    try:
        model = is_sat(query, budget or Budget())
    except BudgetError:
        warnings.warn("target check ran out of budget; reporting not proven", stacklevel=2)
        return False
    return model is None


# ---------------------------------------------------------- reduce_dual


def _dual_array(sp: ScalarProgram, array: str | None) -> str:
    good = [
        name
        for name, spec in sp.cfg.arrays.items()
        if spec.ordered and spec.count == 2 and not spec.frozen
    ]
    if array is not None:
        if array not in good:
            raise LiftError(f"{array} is not configured as an ordered pair of cells")
        return array
    if len(good) != 1:
        raise LiftError("need exactly one ordered two-cell array (or name one)")
    return good[0]


def reduce_dual(
    phi: Formula,
    sp: ScalarProgram,
    *,
    array: str | None = None,
    symmetric: bool = False,
    budget: Budget | None = None,
) -> Formula:
    """Strengthen an ordered-pair invariant without changing its
    meaning on arrays.

    A tuple (a, va, a', va') can only describe a real array if every
    position left of a' can also be filled: values must exist for
    them compatible with phi. Conjoining

        QE( forall a. exists va. (U and a < a') -> phi )

    removes the tuples that fail this, which is exactly the
    information a convex or disjunctive scalar domain loses about
    non-adjacent positions. With symmetric=True the mirrored pass
    quantifies the right cell as well. Runs of phi through this are
    decreasing and idempotent; if elimination exceeds the budget, phi
    comes back unchanged (which is always sound) with a warning.
    """
    name = _dual_array(sp, array)
    left, right = sp.cells[name]
    dim = expr_to_lin(sp.source.array(name).dims[0])

    def in_range(xv: str) -> Formula:
        x = Lin.var(xv)
        return land(le(Lin.of(0), x), lt(x, dim))

    ordered = lt(Lin.var(left.index[0]), Lin.var(right.index[0]))
    uni = [in_range(left.index[0]), in_range(right.index[0]), ordered]
    if sp.cfg.focus is not None:
        allowed = set(sp.source.params) | {left.index[0], right.index[0]}
        if not set(sp.cfg.focus.free_vars()) <= allowed:
            warnings.warn(
                "focus mentions other tracked positions; skipping pair reduction",
                stacklevel=2,
            )
            return phi
        uni.append(sp.cfg.focus)

    def one_pass(f: Formula, cell: Cell) -> Formula:
        vals = [cell.value] + ([cell.init] if cell.init else [])
        q = forall(
            (cell.index[0],),
            exists(vals, implies(land(*uni), f)),
        )
        return land(f, eliminate_quantifiers(q, budget or Budget()))

    try:
        out = one_pass(phi, left)
        if symmetric:
            out = one_pass(out, right)
        return simplify(out)
    except BudgetError:
        warnings.warn("pair reduction ran out of budget; keeping the invariant as is", stacklevel=2)
        return phi
