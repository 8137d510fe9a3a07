"""Affine equalities domain (Karr).

Elements are conjunctions of equalities sum(c_i * v_i) = b kept in
reduced row echelon form over the rationals, one row per pivot
variable. The canonical form makes equality a tuple comparison. Joins
compute the affine hull: the implied-equality spaces of both sides are
intersected (Zassenhaus block trick). Assignments go through a fresh
column so invertible updates like x = x + 1 stay exact. Chains are
finite (each strict join drops rank), so no widening is needed.

Integer semantics: a reduced row with no integer solution, like
2x = 1, marks the element empty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from ..lia import FALSE, Formula, Lin, TRUE, eq0, land

Row = tuple[Fraction, ...]  # coefficients per variable, then the constant


def _rref(rows: list[list[Fraction]], width: int) -> tuple[list[list[Fraction]], bool]:
    """Reduce in place over the first `width` columns; the remaining
    columns ride along. Returns (rows, contradiction) where a
    contradiction is a zero coefficient row with nonzero tail inside
    the ride-along constant column (callers with extra columns pass
    width covering all pivot-eligible columns)."""
    pivots: list[int] = []
    r = 0
    for c in range(width):
        sel = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r] + [row for row in rows[r:] if any(x != 0 for x in row)], False


def _scale_int(row: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in row:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in row]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


@dataclass(frozen=True)
class AffineEqs:
    vars: tuple[str, ...]
    rows: tuple[Row, ...] = ()
    empty: bool = False

    @staticmethod
    def top(vars: Sequence[str]) -> "AffineEqs":
        return AffineEqs(tuple(vars))

    @staticmethod
    def bottom(vars: Sequence[str]) -> "AffineEqs":
        return AffineEqs(tuple(vars), (), True)

    def _canon(self, raw: list[list[Fraction]]) -> "AffineEqs":
        n = len(self.vars)
        rows, _ = _rref(raw, n)
        out: list[Row] = []
        for row in rows:
            if all(x == 0 for x in row[:n]):
                if row[n] != 0:
                    return AffineEqs.bottom(self.vars)
                continue
            ints = _scale_int(row)
            g = 0
            for x in ints[:n]:
                g = math.gcd(g, abs(x))
            if g and ints[n] % g != 0:  # no integer point on this row
                return AffineEqs.bottom(self.vars)
            out.append(tuple(row))
        return AffineEqs(self.vars, tuple(out))

    # -- constraints

    def _row_of(self, lin: Lin) -> list[Fraction]:
        """Row for lin = 0."""
        coeffs = dict(lin.coeffs)
        unknown = set(coeffs) - set(self.vars)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)}")
        return [Fraction(coeffs.get(v, 0)) for v in self.vars] + [Fraction(-lin.const)]

    def add_eq(self, lin: Lin) -> "AffineEqs":
        """Meet with lin = 0."""
        if self.empty:
            return self
        return self._canon([list(r) for r in self.rows] + [self._row_of(lin)])

    def meet(self, other: "AffineEqs") -> "AffineEqs":
        if self.empty:
            return self
        if other.empty:
            return other
        return self._canon([list(r) for r in self.rows + other.rows])

    # -- transfer

    def forget(self, v: str) -> "AffineEqs":
        if self.empty or v not in self.vars:
            return self
        c = self.vars.index(v)
        rows = [list(r) for r in self.rows]
        pivot = next((r for r in rows if r[c] != 0), None)
        if pivot is None:
            return self
        out = []
        for r in rows:
            if r is pivot:
                continue
            if r[c] != 0:
                f = r[c] / pivot[c]
                r = [x - f * y for x, y in zip(r, pivot)]
            out.append(r)
        return self._canon(out)

    def assign(self, v: str, lin: Lin) -> "AffineEqs":
        """Exact affine assignment v := lin."""
        if self.empty:
            return self
        c = self.vars.index(v)
        # route the old value of v through a temporary extra column
        rows = [list(r) + [Fraction(0)] for r in self.rows]
        for r in rows:
            r[-1], r[c] = r[c], Fraction(0)  # rename v -> tmp
        coeffs = dict(lin.coeffs)
        new = [Fraction(coeffs.get(w, 0)) for w in self.vars] + [Fraction(-lin.const), Fraction(0)]
        new[-1] += new[c]  # occurrences of v in lin mean the old value
        new[c] = Fraction(-1)  # lin - v_new = 0
        rows.append(new)
        # eliminate the temporary column
        tmp = len(self.vars) + 1
        pivot = next((r for r in rows if r[tmp] != 0), None)
        if pivot is not None:
            rows = [
                r if r is pivot or r[tmp] == 0
                else [x - (r[tmp] / pivot[tmp]) * y for x, y in zip(r, pivot)]
                for r in rows
            ]
            rows = [r for r in rows if r is not pivot]
        rows = [r[:-1] for r in rows]
        return self._canon(rows)

    # -- lattice

    def is_empty(self) -> bool:
        return self.empty

    def implies_row(self, row: Sequence[Fraction]) -> bool:
        work = list(row)
        n = len(self.vars)
        for r in self.rows:
            lead = next(i for i in range(n) if r[i] != 0)
            if work[lead] != 0:
                f = work[lead] / r[lead]
                work = [x - f * y for x, y in zip(work, r)]
        return all(x == 0 for x in work)

    def leq(self, other: "AffineEqs") -> bool:
        if self.empty:
            return True
        if other.empty:
            return False
        return all(self.implies_row(r) for r in other.rows)

    def join(self, other: "AffineEqs") -> "AffineEqs":
        if self.empty:
            return other
        if other.empty:
            return self
        w = len(self.vars) + 1
        block: list[list[Fraction]] = []
        for r in self.rows:
            block.append(list(r) + list(r))
        for r in other.rows:
            block.append(list(r) + [Fraction(0)] * w)
        block, _ = _rref(block, 2 * w)
        inter = [row[w:] for row in block if all(x == 0 for x in row[:w])]
        return self._canon(inter)

    def widen(self, other: "AffineEqs") -> "AffineEqs":
        # rank strictly drops on unstable joins, chains are finite
        return self.join(other)

    # -- queries

    def equalities(self) -> Iterator[tuple[dict[str, int], int]]:
        """Integer-scaled rows: (coeffs, b) meaning sum = b."""
        for r in self.rows:
            ints = _scale_int(r)
            coeffs = {v: c for v, c in zip(self.vars, ints) if c != 0}
            yield coeffs, ints[-1]

    def value_of(self, v: str) -> Fraction | None:
        """The constant value of v, when the system pins one."""
        if self.empty or v not in self.vars:
            return None
        c = self.vars.index(v)
        for r in self.rows:
            if r[c] == 1 and all(x == 0 for i, x in enumerate(r[:-1]) if i != c):
                return r[-1]
        return None

    def to_formula(self) -> Formula:
        if self.empty:
            return FALSE
        parts = []
        for coeffs, b in self.equalities():
            parts.append(eq0(Lin.make(coeffs) - Lin.of(b)))
        return land(*parts) if parts else TRUE
