"""Octagon domain over integer variables.

Constraints of the form ±v ±w <= c and ±v <= c, held in a coherent
difference-bound matrix over the signed variables +v, -v. Node 2i is
+v_i, node 2i+1 is -v_i; m[a][b] bounds (signed a) - (signed b), with
None standing for +infinity. A single unary bound v <= c appears as
the even-odd entry +v - (-v) <= 2c.

Canonical form is the tight integer closure: shortest paths, unary
bounds floored to even values, and the pairwise strengthening step
m[a][b] <= m[a][a^1]/2 + m[b^1][b]/2, iterated to a fixpoint.
Emptiness shows up as a negative diagonal. Joins and widenings work
entrywise; widening results are deliberately left unclosed so the
ascending iteration terminates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from ..lia import Formula, Lin, TRUE, ge0, land

INF = None  # +infinity marker inside the matrix


def _add(a: int | None, b: int | None) -> int | None:
    if a is None or b is None:
        return INF
    return a + b


def _min(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _le(a: int | None, b: int | None) -> bool:
    """a <= b with None as +infinity."""
    if b is None:
        return True
    if a is None:
        return False
    return a <= b


@dataclass(frozen=True)
class Octagon:
    vars: tuple[str, ...]
    m: tuple[tuple[int | None, ...], ...] = ()
    empty: bool = False
    closed: bool = field(default=False, compare=False)

    # -- construction

    @staticmethod
    def top(vars: Sequence[str]) -> "Octagon":
        vs = tuple(vars)
        n = 2 * len(vs)
        m = tuple(tuple(0 if i == j else INF for j in range(n)) for i in range(n))
        return Octagon(vs, m, False, True)

    @staticmethod
    def bottom(vars: Sequence[str]) -> "Octagon":
        return Octagon(tuple(vars), (), True, True)

    def _pos(self, v: str) -> int:
        return 2 * self.vars.index(v)

    def _rows(self) -> list[list[int | None]]:
        return [list(r) for r in self.m]

    def _with(self, rows: list[list[int | None]], closed: bool = False) -> "Octagon":
        return Octagon(self.vars, tuple(tuple(r) for r in rows), False, closed)

    # -- canonical form

    def close(self) -> "Octagon":
        """Tight integer closure; detects emptiness."""
        if self.empty or self.closed:
            return self
        n = len(self.m)
        d = self._rows()
        changed = True
        rounds = 0
        while changed:
            rounds += 1
            if rounds > 50:  # the fixpoint is reached in 2 rounds in theory
                raise RuntimeError("octagon closure failed to stabilize")
            changed = False
            for k in range(n):
                for i in range(n):
                    dik = d[i][k]
                    if dik is None:
                        continue
                    row_k = d[k]
                    row_i = d[i]
                    for j in range(n):
                        dkj = row_k[j]
                        if dkj is None:
                            continue
                        s = dik + dkj
                        if row_i[j] is None or s < row_i[j]:
                            row_i[j] = s
            for i in range(n):
                if d[i][i] is not None and d[i][i] < 0:
                    return Octagon.bottom(self.vars)
                d[i][i] = 0
            # integer tightening of unary rows, then strengthening
            for i in range(n):
                b = d[i][i ^ 1]
                if b is not None and b % 2 != 0:
                    d[i][i ^ 1] = b - 1
                    changed = True
            for i in range(n):
                bi = d[i][i ^ 1]
                if bi is None:
                    continue
                for j in range(n):
                    bj = d[j ^ 1][j]
                    if bj is None:
                        continue
                    s = bi // 2 + bj // 2
                    if d[i][j] is None or s < d[i][j]:
                        d[i][j] = s
                        changed = True
            for i in range(n):
                if d[i][i] is not None and d[i][i] < 0:
                    return Octagon.bottom(self.vars)
        return self._with(d, closed=True)

    # -- lattice

    def is_empty(self) -> bool:
        return self.close().empty

    def leq(self, other: "Octagon") -> bool:
        a = self.close()
        b = other.close()
        if a.empty:
            return True
        if b.empty:
            return False
        return all(_le(x, y) for ra, rb in zip(a.m, b.m) for x, y in zip(ra, rb))

    def join(self, other: "Octagon") -> "Octagon":
        a = self.close()
        b = other.close()
        if a.empty:
            return b
        if b.empty:
            return a
        rows = [
            [INF if (x is None or y is None) else max(x, y) for x, y in zip(ra, rb)]
            for ra, rb in zip(a.m, b.m)
        ]
        for i in range(len(rows)):
            rows[i][i] = 0
        return a._with(rows, closed=True)  # entrywise max of closed is closed

    def meet(self, other: "Octagon") -> "Octagon":
        if self.empty:
            return self
        if other.empty:
            return other
        rows = [[_min(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(self.m, other.m)]
        return self._with(rows).close()

    def widen(self, other: "Octagon") -> "Octagon":
        """Keep stable bounds, drop the rest. Left side is used as
        stored (possibly unclosed); the result stays unclosed."""
        if self.empty:
            return other.close()
        b = other.close()
        if b.empty:
            return self
        rows = [
            [x if _le(y, x) else INF for x, y in zip(ra, rb)]
            for ra, rb in zip(self.m, b.m)
        ]
        for i in range(len(rows)):
            rows[i][i] = 0
        return self._with(rows, closed=False)

    def narrow(self, other: "Octagon") -> "Octagon":
        """Refine only infinite bounds by the other side's."""
        if self.empty or other.is_empty():
            return self if self.empty else other.close()
        b = other.close()
        rows = [
            [y if x is None else x for x, y in zip(ra, rb)]
            for ra, rb in zip(self.m, b.m)
        ]
        return self._with(rows).close()

    # -- constraints

    def add(self, coeffs: dict[str, int], k: int) -> "Octagon":
        """Meet with sum(coeffs)*vars <= k, |coeffs| in {1,2}, unit."""
        if self.empty:
            return self
        items = sorted(coeffs.items())
        rows = self._rows()

        def put(a: int, b: int, c: int) -> None:
            if rows[a][b] is None or c < rows[a][b]:
                rows[a][b] = c
                rows[b ^ 1][a ^ 1] = c

        if len(items) == 1:
            (v, cv), = items
            p = self._pos(v)
            if cv == 1:  # v <= k
                put(p, p ^ 1, 2 * k)
            elif cv == -1:  # -v <= k
                put(p ^ 1, p, 2 * k)
            else:
                raise ValueError(f"non-unit coefficient {cv}")
        elif len(items) == 2:
            (v, cv), (w, cw) = items
            p, q = self._pos(v), self._pos(w)
            if cv == 1 and cw == -1:
                put(p, q, k)  # v - w <= k
            elif cv == -1 and cw == 1:
                put(q, p, k)
            elif cv == 1 and cw == 1:
                put(p, q ^ 1, k)  # v + w <= k
            elif cv == -1 and cw == -1:
                put(p ^ 1, q, k)  # -v - w <= k
            else:
                raise ValueError(f"non-unit coefficients {cv},{cw}")
        else:
            raise ValueError("octagon constraints take one or two variables")
        return self._with(rows)

    def assume(self, lin: Lin) -> "Octagon":
        """Meet with lin >= 0 when octagonal, identity otherwise."""
        if self.empty:
            return self
        coeffs = dict(lin.coeffs)
        if 1 <= len(coeffs) <= 2 and all(abs(c) == 1 for c in coeffs.values()):
            # lin >= 0  <=>  -lin <= const
            return self.add({v: -c for v, c in coeffs.items()}, lin.const)
        return self

    # -- transfer helpers

    def forget(self, v: str) -> "Octagon":
        if self.empty:
            return self
        a = self.close()
        if a.empty:
            return a
        p = a._pos(v)
        rows = a._rows()
        n = len(rows)
        for i in (p, p ^ 1):
            for j in range(n):
                if i != j:
                    rows[i][j] = INF
                    rows[j][i] = INF
        return a._with(rows, closed=True)

    def assign(self, v: str, lin: Lin) -> "Octagon":
        if self.empty:
            return self
        coeffs = dict(lin.coeffs)
        k = lin.const
        if not coeffs:
            out = self.forget(v)
            return out.add({v: 1}, k).add({v: -1}, -k)
        if len(coeffs) == 1:
            (w, c), = coeffs.items()
            if w == v and c == 1:
                return self._shift(v, k)
            if c in (1, -1) and w != v:
                out = self.forget(v)
                # v - c*w <= k and c*w - v <= -k
                out = out.add({v: 1, w: -c}, k)
                return out.add({v: -1, w: c}, -k)
        # general affine right side: fall back to interval evaluation
        lo, hi = self.eval_range(lin)
        out = self.forget(v)
        if hi is not None:
            out = out.add({v: 1}, hi)
        if lo is not None:
            out = out.add({v: -1}, -lo)
        return out

    def _shift(self, v: str, k: int) -> "Octagon":
        a = self.close()
        if a.empty:
            return a
        p = a._pos(v)
        rows = a._rows()
        n = len(rows)
        for j in range(n):
            if j not in (p, p ^ 1):
                rows[p][j] = _add(rows[p][j], k)
                rows[j][p] = _add(rows[j][p], -k)
                rows[p ^ 1][j] = _add(rows[p ^ 1][j], -k)
                rows[j][p ^ 1] = _add(rows[j][p ^ 1], k)
        rows[p][p ^ 1] = _add(rows[p][p ^ 1], 2 * k)
        rows[p ^ 1][p] = _add(rows[p ^ 1][p], -2 * k)
        return a._with(rows, closed=True)

    # -- queries

    def bounds(self, v: str) -> tuple[int | None, int | None]:
        a = self.close()
        if a.empty:
            return (0, -1)
        p = a._pos(v)
        up = a.m[p][p ^ 1]
        lo = a.m[p ^ 1][p]
        return (None if lo is None else -(lo // 2), None if up is None else up // 2)

    def eval_range(self, lin: Lin) -> tuple[int | None, int | None]:
        a = self.close()
        lo: int | None = lin.const
        hi: int | None = lin.const
        for v, c in lin.coeffs:
            vlo, vhi = a.bounds(v)
            tlo, thi = (vlo, vhi) if c > 0 else (vhi, vlo)
            lo = None if (lo is None or tlo is None) else lo + c * tlo
            hi = None if (hi is None or thi is None) else hi + c * thi
        return lo, hi

    def constraints(self) -> Iterator[tuple[dict[str, int], int]]:
        """Yield (coeffs, k) meaning sum(coeffs) <= k, from the closed form."""
        a = self.close()
        if a.empty:
            return
        n = len(a.m)
        for i in range(n):
            for j in range(n):
                c = a.m[i][j]
                if c is None or i == j:
                    continue
                if i == (j ^ 1):  # unary: emit once from the even row
                    vi = a.vars[i // 2]
                    if i % 2 == 0:
                        yield {vi: 1}, c // 2
                    else:
                        yield {vi: -1}, c // 2
                    continue
                if i > (j ^ 1):  # coherent mirror already emitted
                    continue
                vi, vj = a.vars[i // 2], a.vars[j // 2]
                si = 1 if i % 2 == 0 else -1
                sj = 1 if j % 2 == 0 else -1
                yield {vi: si, vj: -sj} if vi != vj else {vi: si - sj}, c

    def to_formula(self) -> Formula:
        from ..lia import FALSE

        if self.is_empty():
            return FALSE
        parts = []
        for coeffs, k in self.constraints():
            lin = Lin.of(k) - Lin.make(coeffs)
            parts.append(ge0(lin))
        return land(*parts) if parts else TRUE
