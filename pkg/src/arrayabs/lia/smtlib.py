"""SMT-LIB 2 export and a small reader for round-trip checks.

Divisibility m | t is emitted with a fresh quotient variable as
(exists ((q Int)) (= t (* m q))); the reader folds that pattern (and
`mod`) back into a divisibility atom when it can, otherwise it keeps
the quantifier.
"""

from __future__ import annotations

from .formula import Formula, Lin, dvd, eq0, exists, forall, ge0, land, lnot, lor

# ---------------------------------------------------------------------------
# Export


def _sexpr_lin(lin: Lin) -> str:
    parts: list[str] = []
    for v, c in lin.coeffs:
        if c == 1:
            parts.append(_symbol(v))
        else:
            parts.append(f"(* {_int(c)} {_symbol(v)})")
    if lin.const or not parts:
        parts.append(_int(lin.const))
    if len(parts) == 1:
        return parts[0]
    return f"(+ {' '.join(parts)})"


def _int(n: int) -> str:
    return str(n) if n >= 0 else f"(- {-n})"


_QCOUNT = [0]


def _sexpr(f: Formula) -> str:
    k = f.kind
    if k == "true":
        return "true"
    if k == "false":
        return "false"
    if k == "bvar":
        return _symbol(f.name)
    if k == "atom":
        if f.op == "ge":
            return f"(>= {_sexpr_lin(f.lin)} 0)"
        _QCOUNT[0] += 1
        q = f"q!{_QCOUNT[0]}"
        return f"(exists (({q} Int)) (= {_sexpr_lin(f.lin)} (* {f.mod} {q})))"
    if k == "not":
        return f"(not {_sexpr(f.args[0])})"
    if k in ("and", "or"):
        return f"({k} {' '.join(_sexpr(a) for a in f.args)})"
    quant = "exists" if k == "exists" else "forall"
    binds = " ".join(f"({_symbol(v)} Int)" for v in f.bound)
    return f"({quant} ({binds}) {_sexpr(f.args[0])})"


def to_smtlib(f: Formula, logic: str = "LIA") -> str:
    """Complete script: declarations, one assert, (check-sat)."""
    _QCOUNT[0] = 0
    body = _sexpr(f)
    lines = [f"(set-logic {logic})"]
    bools = _bool_vars(f)
    for v in f.free_vars():
        sort = "Bool" if v in bools else "Int"
        lines.append(f"(declare-const {_symbol(v)} {sort})")
    lines.append(f"(assert {body})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def _bool_vars(f: Formula) -> set[str]:
    out: set[str] = set()

    def walk(g: Formula) -> None:
        if g.kind == "bvar":
            out.add(g.name)
        for a in g.args:
            walk(a)

    walk(f)
    return out


_PLAIN = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_!.~$%^&*-+<>@/")


def _symbol(name: str) -> str:
    if name and all(ch in _PLAIN for ch in name) and not name[0].isdigit():
        return name
    return f"|{name}|"


# ---------------------------------------------------------------------------
# Reader


class SmtParseError(ValueError):
    pass


def _tokenize(text: str) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "()":
            out.append(ch)
            i += 1
        elif ch == "|":
            j = text.index("|", i + 1)
            out.append(text[i + 1 : j])
            i = j + 1
        elif ch == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif ch.isspace():
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "();":
                j += 1
            out.append(text[i:j])
            i = j
    return out


def _read_sexprs(tokens: list[str]):
    pos = [0]

    def read():
        tok = tokens[pos[0]]
        pos[0] += 1
        if tok == "(":
            items = []
            while tokens[pos[0]] != ")":
                items.append(read())
            pos[0] += 1
            return items
        return tok

    exprs = []
    while pos[0] < len(tokens):
        exprs.append(read())
    return exprs


def from_smtlib(text: str) -> Formula:
    """Formula asserted by the script (conjunction when several)."""
    exprs = _read_sexprs(_tokenize(text))
    bools: set[str] = set()
    asserts: list[Formula] = []
    for e in exprs:
        if not isinstance(e, list) or not e:
            continue
        head = e[0]
        if head == "declare-const" and len(e) == 3 and e[2] == "Bool":
            bools.add(e[1])
        elif head == "declare-fun" and len(e) == 4 and e[2] == [] and e[3] == "Bool":
            bools.add(e[1])
        elif head == "assert":
            asserts.append(_formula(e[1], bools))
    return land(*asserts)


def _term(e, bools: set[str]) -> Lin:
    if isinstance(e, str):
        if e.lstrip("-").isdigit():
            return Lin.of(int(e))
        return Lin.var(e)
    head = e[0]
    if head == "+":
        out = Lin.of(0)
        for a in e[1:]:
            out = out + _term(a, bools)
        return out
    if head == "-":
        if len(e) == 2:
            return -_term(e[1], bools)
        out = _term(e[1], bools)
        for a in e[2:]:
            out = out - _term(a, bools)
        return out
    if head == "*":
        lins = [_term(a, bools) for a in e[1:]]
        consts = [l for l in lins if l.is_const()]
        others = [l for l in lins if not l.is_const()]
        if len(others) > 1:
            raise SmtParseError("nonlinear product")
        k = 1
        for c in consts:
            k *= c.const
        return others[0].scale(k) if others else Lin.of(k)
    raise SmtParseError(f"bad term {e!r}")


def _formula(e, bools: set[str]) -> Formula:
    if isinstance(e, str):
        if e == "true":
            from .formula import TRUE

            return TRUE
        if e == "false":
            from .formula import FALSE

            return FALSE
        from .formula import bvar

        return bvar(e)
    head = e[0]
    if head == "and":
        return land(*(_formula(a, bools) for a in e[1:]))
    if head == "or":
        return lor(*(_formula(a, bools) for a in e[1:]))
    if head == "not":
        return lnot(_formula(e[1], bools))
    if head == "=>":
        parts = [_formula(a, bools) for a in e[1:]]
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = lor(lnot(p), out)
        return out
    if head in ("<=", "<", ">=", ">", "="):
        lhs = _term(e[1], bools)
        rhs = _term(e[2], bools)
        if head == "<=":
            return ge0(rhs - lhs)
        if head == "<":
            return ge0(rhs - lhs - 1)
        if head == ">=":
            return ge0(lhs - rhs)
        if head == ">":
            return ge0(lhs - rhs - 1)
        return eq0(lhs - rhs)
    if head in ("exists", "forall"):
        binds = [b[0] for b in e[1]]
        body = e[2]
        # fold (exists ((q Int)) (= t (* m q))) into a divisibility atom
        if head == "exists" and len(binds) == 1 and isinstance(body, list) and body[0] == "=":
            q = binds[0]
            for a, b in ((body[1], body[2]), (body[2], body[1])):
                if (
                    isinstance(b, list)
                    and b[0] == "*"
                    and len(b) == 3
                    and isinstance(b[2], str)
                    and b[2] == q
                    and isinstance(b[1], str)
                    and b[1].lstrip("-").isdigit()
                ):
                    t = _term(a, bools)
                    if q not in t.vars():
                        return dvd(int(b[1]), t)
        inner = _formula(body, bools)
        return (exists if head == "exists" else forall)(binds, inner)
    if head == "mod" or head == "divisible":
        raise SmtParseError(f"unsupported operator {head}")
    raise SmtParseError(f"bad formula {e!r}")
