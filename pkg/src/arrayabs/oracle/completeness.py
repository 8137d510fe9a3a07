"""Loop-free programs: does the cell abstraction lose anything?

With at least one cell per syntactic access, the transformed program's
final states, concretized over every index instantiation, project to
exactly the same scalar outcomes as the original program. This module
checks that equality by enumerating both sides on bounded domains, and
provides the random program generator the suite drives it with. When
the cell budget is below the access count the inclusion can go strict;
the checker reports which side has surplus states.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from ..lang.ast import (
    Add,
    ArrayDecl,
    ArrRead,
    ArrWrite,
    Assign,
    Assume,
    Cmp,
    CondAnd,
    Havoc,
    If,
    Num,
    Program,
    Stmt,
    Sub,
    Var,
    While,
    walk_stmts,
)
from ..lang.decompose import decompose_accesses
from ..lang.interp import Bounds, enumerate_executions
from ..transform.core import ArrayCells, IndexConfig, transform_program
from .domains import OracleError

Outcome = tuple  # (status, scalar value tuple)


@dataclass(frozen=True)
class CompletenessResult:
    equal: bool
    sound: bool  # concrete side contained in abstract side
    concrete_only: tuple
    abstract_only: tuple
    scalars: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.equal


def _loopfree(p: Program) -> bool:
    return not any(isinstance(s, While) for s in walk_stmts(p.body))


def check_completeness(
    p: Program,
    cfg: IndexConfig,
    *,
    values: tuple[int, ...] = (0, 1, 2),
    params: dict[str, tuple[int, ...]] | None = None,
    max_steps: int = 2_000_000,
) -> CompletenessResult:
    """Compare scalar outcome sets of p and of its transformation.

    Both sides run under the bounded enumerator: the concrete side
    over every initial array content, the transformed side over every
    admissible position tuple. Every configured array must be nonempty
    under every parameter valuation, and cells must be plain (no
    frozen, no snapshots).
    """
    if not _loopfree(p):
        raise OracleError("completeness check needs a loop-free program")
    for name, spec in cfg.arrays.items():
        if spec.frozen or spec.snapshot:
            raise OracleError("plain cells only")
    params = params or {}
    for n in p.params:
        if n not in params:
            raise OracleError(f"no bounds for parameter {n}")

    bounds = Bounds(params=params, values=values, max_steps=max_steps)
    names = list(p.scalars())
    concrete = {
        (st.status, tuple(st.scalar_dict()[n] for n in names))
        for st in enumerate_executions(p, bounds)
    }

    sp = transform_program(decompose_accesses(p), cfg)
    boxes: dict[str, list[tuple[int, ...]]] = {}
    index_bounds = dict(params)
    for name, spec in cfg.arrays.items():
        decl = p.array(name)
        lens = []
        for d in decl.dims:
            if isinstance(d, Num):
                lens.append(d.value)
            elif isinstance(d, Var):
                lens.append(max(params[d.name]))
            else:
                raise OracleError("dimensions must be literals or parameters")
        if any(l <= 0 for l in lens):
            raise OracleError(f"array {name} may be empty under the given bounds")
        boxes[name] = list(itertools.product(*[range(l) for l in lens]))
        for c in sp.cells[name]:
            for xv, l in zip(c.index, lens):
                index_bounds[xv] = tuple(range(l))

    abounds = Bounds(params=index_bounds, values=values, max_steps=max_steps)
    finals = enumerate_executions(sp.program, abounds)

    # (status, scalars, positions) -> set of cell-value tuples
    cells = [c for name in cfg.arrays for c in sp.cells[name]]
    seen: dict[tuple, set[tuple]] = {}
    for st in finals:
        sc = st.scalar_dict()
        key = (
            st.status,
            tuple(sc[n] for n in names),
            tuple(sc[xv] for c in cells for xv in c.index),
        )
        seen.setdefault(key, set()).add(tuple(sc[c.value] for c in cells))

    # gamma: a scalar outcome survives if some array contents pass
    # the membership test at every position instantiation
    per_array_instantiations = []
    for name, spec in cfg.arrays.items():
        k = spec.count
        box = boxes[name]
        if spec.ordered:
            combos = [t for t in itertools.product(box, repeat=k) if all(x < y for x, y in zip(t, t[1:]))]
        else:
            combos = list(itertools.product(box, repeat=k))
        per_array_instantiations.append(combos)

    # candidate contents per box: every value some cell was observed to
    # hold while tracking that box (writes can leave the initial value
    # universe, so enumerating `values` alone would miss witnesses)
    offsets = []
    pos = 0
    for c in cells:
        offsets.append(pos)
        pos += len(c.index)
    cell_array = [name for name in cfg.arrays for _c in sp.cells[name]]
    observed: dict[tuple, set] = {}
    for (_status, _s, xs), vss in seen.items():
        for vs in vss:
            for i, c in enumerate(cells):
                b = xs[offsets[i]:offsets[i] + len(c.index)]
                observed.setdefault((cell_array[i], b), set()).add(vs[i])

    contents_space = []
    for name in cfg.arrays:
        box = boxes[name]
        per_box = [sorted(observed.get((name, b), ())) for b in box]
        contents_space.append(
            [dict(zip(box, vs)) for vs in itertools.product(*per_box)]
        )

    abstract = set()
    candidates = {(status, s) for (status, s, _x) in seen}
    for status, s in candidates:
        found = False
        for contents in itertools.product(*contents_space):
            ok = True
            for inst in itertools.product(*per_array_instantiations):
                xs = tuple(x for combo in inst for a in combo for x in a)
                vs = tuple(
                    arr[a]
                    for arr, combo in zip(contents, inst)
                    for a in combo
                )
                if vs not in seen.get((status, s, xs), ()):
                    ok = False
                    break
            if ok:
                found = True
                break
        if found:
            abstract.add((status, s))

    concrete_only = tuple(sorted(concrete - abstract))
    abstract_only = tuple(sorted(abstract - concrete))
    return CompletenessResult(
        equal=not concrete_only and not abstract_only,
        sound=not concrete_only,
        concrete_only=concrete_only,
        abstract_only=abstract_only,
        scalars=tuple(names),
    )


# ------------------------------------------------------ random programs


def random_loopfree_program(
    rng: random.Random,
    *,
    max_arrays: int = 2,
    max_accesses: int = 4,
    max_len: int = 3,
    n_scalars: int = 3,
) -> tuple[Program, IndexConfig]:
    """A small loop-free program plus the cell budget the theorem asks
    for (one cell per access). Every access index is havocked into
    range first, so runs stay in bounds."""
    n_arrays = rng.randint(1, max_arrays)
    arrays = []
    for i in range(n_arrays):
        arrays.append(ArrayDecl(f"f{i}", (Num(rng.randint(1, max_len)),)))
    scalars = [f"s{i}" for i in range(n_scalars)]
    idxs: list[str] = []
    body: list[Stmt] = []
    accesses = {a.name: 0 for a in arrays}
    budget = rng.randint(1, max_accesses)

    def lin_expr():
        v = rng.choice(scalars)
        c = rng.randint(-2, 2)
        kind = rng.randrange(3)
        if kind == 0:
            return Num(c)
        if kind == 1:
            return Var(v)
        return (Add if rng.getrandbits(1) else Sub)(Var(v), Num(abs(c)))

    def new_index(arr: ArrayDecl) -> str:
        nm = f"j{len(idxs)}"
        idxs.append(nm)
        body.append(Havoc(nm))
        body.append(
            Assume(
                CondAnd(
                    (
                        Cmp("<=", Num(0), Var(nm)),
                        Cmp("<", Var(nm), arr.dims[0]),
                    )
                )
            )
        )
        return nm

    stmts = rng.randint(2, 6)
    for _ in range(stmts):
        kind = rng.randrange(5)
        placed = sum(accesses.values())
        if kind in (0, 1) and placed < budget:
            arr = rng.choice(arrays)
            accesses[arr.name] += 1
            j = new_index(arr)
            if kind == 0:
                body.append(Assign(rng.choice(scalars), ArrRead(arr.name, (Var(j),))))
            else:
                body.append(ArrWrite(arr.name, (Var(j),), lin_expr()))
        elif kind == 2:
            body.append(Assign(rng.choice(scalars), lin_expr()))
        elif kind == 3:
            body.append(
                If(
                    Cmp(rng.choice(["<", "<=", "=="]), Var(rng.choice(scalars)), lin_expr()),
                    (Assign(rng.choice(scalars), lin_expr()),),
                    (),
                )
            )
        else:
            body.append(Havoc(rng.choice(scalars)))

    used = [a for a in arrays if accesses[a.name] > 0]
    cfg = IndexConfig(arrays={a.name: ArrayCells(max(1, accesses[a.name])) for a in used})
    p = Program(
        "r",
        (),
        tuple(used),
        tuple(scalars) + tuple(idxs),
        tuple(body),
    )
    return p, cfg
