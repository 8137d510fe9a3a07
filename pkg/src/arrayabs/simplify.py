"""Small disjunctive normal forms, modulo a universe constraint.

Analysis results and quantifier elimination both produce correct but
unwieldy formulas. dnf_simplify rewrites one into a short DNF that
agrees with the original wherever the universe constraint holds: pick
a model, conjoin the literals it satisfies, strip the literals that
are not needed to stay inside the original formula, emit, exclude,
repeat. Every emitted conjunction is minimal, so guards implied by
the universe disappear instead of being dragged along.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .lia import (
    TRUE,
    Budget,
    BudgetError,
    Formula,
    Model,
    is_sat,
    land,
    lnot,
    lor,
)
from .lia import simplify as _fsimplify


class SimplifyError(ValueError):
    pass


def _literals(f: Formula) -> list[Formula]:
    """Both polarities of every atom of f, first-occurrence order."""
    out: list[Formula] = []
    for a in f.atoms():
        out.append(a)
        out.append(lnot(a))
    seen: set[str] = set()

    def bools(g: Formula) -> None:
        if g.kind == "bvar" and g.name not in seen:
            seen.add(g.name)
            out.append(g)
            out.append(lnot(g))
        for x in g.args:
            bools(x)

    bools(f)
    return out


def true_predicates(atoms: Iterable[Formula], m: Model) -> list[Formula]:
    """The atoms the model satisfies, in the given order."""
    out = []
    for a in atoms:
        missing = [v for v in a.free_vars() if v not in m]
        if missing:
            raise SimplifyError(f"model does not assign {', '.join(missing)}")
        if a.evaluate(m):
            out.append(a)
    return out


def generalize(
    s: Sequence[Formula],
    g: Formula,
    budget: Budget | None = None,
) -> list[Formula]:
    """Smallest prefix-greedy subset of s still contradicting g.

    Deletion in declaration order: drop an atom whenever the rest
    stays unsatisfiable with g. The result is minimal with respect to
    inclusion (not necessarily of least cardinality).
    """
    budget = budget or Budget()
    if is_sat(land(*s, g), budget) is not None:
        raise SimplifyError("conjunction does not contradict the guard")
    keep = list(s)
    i = 0
    while i < len(keep):
        trial = keep[:i] + keep[i + 1:]
        if is_sat(land(*trial, g), budget) is None:
            keep = trial
        else:
            i += 1
    return keep


@dataclass(frozen=True)
class DnfResult:
    """Disjunction of atom conjunctions; complete=False means the
    solver budget ran out and the tail of the enumeration is missing
    (what was emitted is still implied by the input)."""

    disjuncts: tuple[tuple[Formula, ...], ...]
    complete: bool
    iterations: int

    def __iter__(self) -> Iterator[tuple[Formula, ...]]:
        return iter(self.disjuncts)

    def __len__(self) -> int:
        return len(self.disjuncts)

    def to_formula(self) -> Formula:
        return _fsimplify(lor(*(land(*d) for d in self.disjuncts)))


def dnf_simplify(f: Formula, u: Formula = TRUE, *, budget: Budget | None = None) -> DnfResult:
    """Short DNF f' with f and u ⊨ f' and f' and u ⊨ f.

    Both f and u must be quantifier-free. Atoms of u never appear in
    the output; each disjunct is a minimal conjunction of literals of
    f. Model choice is deterministic, so outputs are stable.
    """
    if f.has_quantifier() or u.has_quantifier():
        raise SimplifyError("dnf_simplify needs quantifier-free arguments")
    budget = budget or Budget()
    lits = _literals(f)
    guard = land(u, lnot(f))
    work = f
    out: list[tuple[Formula, ...]] = []
    rounds = 0
    try:
        while True:
            m = is_sat(land(work, u), budget)
            if m is None:
                break
            rounds += 1
            assert rounds <= 2 ** len(lits) + 1, "enumeration failed to shrink"
            sat_lits = true_predicates(lits, m)
            core = generalize(sat_lits, guard, budget)
            out.append(tuple(core))
            work = land(work, lnot(land(*core)))
    except BudgetError:
        return DnfResult(tuple(out), False, rounds)
    return DnfResult(tuple(out), True, rounds)
