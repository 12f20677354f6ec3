"""Canonical source renderer.

Prints an AST back to parseable RPS text with minimal parentheses. Used
for round-trip testing and to derive the program identity hash that ties
traces to the program they were recorded against. Reference patterns
inserted by match-ergonomics normalization are skipped, so printed
patterns stay close to what the user wrote.
"""

from __future__ import annotations

import hashlib

from rpscov import nodes as N

_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 3, "<=": 3, ">": 3, ">=": 3,
         "+": 4, "-": 4, "*": 5, "/": 5, "%": 5}
_UNARY_PREC = 6
_POSTFIX_PREC = 7
_PRIMARY_PREC = 8


def _escape(text: str, quote: str) -> str:
    out = []
    for c in text:
        if c == quote:
            out.append("\\" + quote)
        elif c == "\\":
            out.append("\\\\")
        elif c == "\n":
            out.append("\\n")
        elif c == "\t":
            out.append("\\t")
        elif c == "\r":
            out.append("\\r")
        elif c == "\0":
            out.append("\\0")
        else:
            out.append(c)
    return "".join(out)


def render_lit(value: object, kind: str, suffix: str | None = None) -> str:
    if kind == "int":
        return str(value) + (suffix or "")
    if kind == "bool":
        return "true" if value else "false"
    if kind == "char":
        return f"'{_escape(str(value), chr(39))}'"
    if kind == "str":
        return f'"{_escape(str(value), chr(34))}"'
    raise AssertionError(f"unknown literal kind {kind}")


# ── types ────────────────────────────────────────────────────────


def render_type(t: N.TypeExpr) -> str:
    if isinstance(t, N.NamedType):
        if t.args:
            return t.name + "<" + ", ".join(render_type(a) for a in t.args) + ">"
        return t.name
    if isinstance(t, N.TupleType):
        if len(t.elems) == 1:
            return f"({render_type(t.elems[0])},)"
        return "(" + ", ".join(render_type(e) for e in t.elems) + ")"
    if isinstance(t, N.ArrayType):
        return f"[{render_type(t.elem)}; {t.length}]"
    if isinstance(t, N.SliceTypeExpr):
        return f"[{render_type(t.elem)}]"
    if isinstance(t, N.RefType):
        return ("&mut " if t.mutable else "&") + render_type(t.inner)
    raise AssertionError(f"unknown type node {t!r}")


# ── patterns ─────────────────────────────────────────────────────


def render_pattern(p: N.Pattern) -> str:
    if isinstance(p, N.LiteralPat):
        return render_lit(p.value, p.lit_kind, p.suffix)
    if isinstance(p, N.NameRefPat):
        return p.name
    if isinstance(p, N.IdentPat):
        out = ""
        if p.by_ref:
            out += "ref "
        if p.mutable:
            out += "mut "
        out += p.name
        if p.sub is not None:
            out += " @ " + render_pattern(p.sub)
        return out
    if isinstance(p, N.WildcardPat):
        return "_"
    if isinstance(p, N.RestPat):
        return ".."
    if isinstance(p, N.RangePat):
        lo = render_lit(p.lo, p.lit_kind, p.suffix) if p.lo is not None else ""
        hi = render_lit(p.hi, p.lit_kind, p.suffix) if p.hi is not None else ""
        dots = "..=" if (p.inclusive and p.hi is not None) else ".."
        return lo + dots + hi
    if isinstance(p, N.RefPat):
        if p.implicit:
            return render_pattern(p.inner)
        return ("&mut " if p.mutable else "&") + render_pattern(p.inner)
    if isinstance(p, N.StructPat):
        parts = []
        for f in p.fields:
            if f.pat is None:
                parts.append(f.name)
            else:
                parts.append(f"{f.name}: {render_pattern(f.pat)}")
        if p.has_rest:
            parts.append("..")
        body = " { " + ", ".join(parts) + " }" if parts else " {}"
        return "::".join(p.path) + body
    if isinstance(p, N.TupleStructPat):
        inner = ", ".join(render_pattern(e) for e in p.elems)
        return "::".join(p.path) + f"({inner})"
    if isinstance(p, N.TuplePat):
        if len(p.elems) == 1 and not isinstance(p.elems[0], N.RestPat):
            return f"({render_pattern(p.elems[0])},)"
        return "(" + ", ".join(render_pattern(e) for e in p.elems) + ")"
    if isinstance(p, N.GroupPat):
        return f"({render_pattern(p.inner)})"
    if isinstance(p, N.SlicePat):
        return "[" + ", ".join(render_pattern(e) for e in p.elems) + "]"
    if isinstance(p, N.PathPat):
        return "::".join(p.path)
    if isinstance(p, N.OrPat):
        return " | ".join(render_pattern(a) for a in p.alts)
    raise AssertionError(f"unknown pattern node {p!r}")


# ── expressions ──────────────────────────────────────────────────


def _paren(text: str, cond: bool) -> str:
    return f"({text})" if cond else text


def render_expr(e: N.Expr, prec: int = 0, ns: bool = False, indent: int = 0) -> str:
    """Render with surrounding precedence `prec`; `ns` marks positions
    where a bare struct literal would be misparsed (condition and
    scrutinee heads) and forces parentheses around one."""
    pad = "    " * indent
    if isinstance(e, N.LitExpr):
        return render_lit(e.value, e.lit_kind, e.suffix)
    if isinstance(e, N.PathExpr):
        return "::".join(e.path)
    if isinstance(e, N.CallExpr):
        args = ", ".join(render_expr(a, 0, False, indent) for a in e.args)
        return _paren(f"{render_expr(e.callee, _POSTFIX_PREC, ns, indent)}({args})",
                      prec > _POSTFIX_PREC)
    if isinstance(e, N.StructExpr):
        parts = ", ".join(f"{n}: {render_expr(v, 0, False, indent)}" for n, v in e.fields)
        body = f" {{ {parts} }}" if parts else " {}"
        return _paren("::".join(e.path) + body, ns)
    if isinstance(e, N.TupleExpr):
        if len(e.elems) == 1:
            return f"({render_expr(e.elems[0], 0, False, indent)},)"
        return "(" + ", ".join(render_expr(x, 0, False, indent) for x in e.elems) + ")"
    if isinstance(e, N.ArrayExpr):
        return "[" + ", ".join(render_expr(x, 0, False, indent) for x in e.elems) + "]"
    if isinstance(e, N.RefExpr):
        inner = render_expr(e.inner, _UNARY_PREC, ns, indent)
        text = ("&mut " if e.mutable else "&") + inner
        return _paren(text, prec > _UNARY_PREC)
    if isinstance(e, N.UnaryExpr):
        text = e.op + render_expr(e.operand, _UNARY_PREC, ns, indent)
        return _paren(text, prec > _UNARY_PREC)
    if isinstance(e, N.BinaryExpr):
        p = _PREC[e.op]
        lhs = render_expr(e.lhs, p, ns, indent)
        rhs = render_expr(e.rhs, p + 1, ns, indent)
        return _paren(f"{lhs} {e.op} {rhs}", prec > p)
    if isinstance(e, N.FieldExpr):
        base = render_expr(e.base, _POSTFIX_PREC, ns, indent)
        return _paren(f"{base}.{e.name}", prec > _POSTFIX_PREC)
    if isinstance(e, N.IndexExpr):
        base = render_expr(e.base, _POSTFIX_PREC, ns, indent)
        idx = render_expr(e.index, 0, False, indent)
        return _paren(f"{base}[{idx}]", prec > _POSTFIX_PREC)
    if isinstance(e, N.QuestionMarkExpr):
        base = render_expr(e.inner, _POSTFIX_PREC, ns, indent)
        return _paren(f"{base}?", prec > _POSTFIX_PREC)
    if isinstance(e, N.BlockExpr):
        return render_block(e.block, indent)
    if isinstance(e, N.IfExpr):
        return _render_if(e, indent)
    if isinstance(e, N.IfLetExpr):
        return _render_if(e, indent)
    if isinstance(e, N.MatchExpr):
        head = render_expr(e.scrutinee, 0, True, indent)
        lines = [f"match {head} {{"]
        for arm in e.arms:
            lead = "    " * (indent + 1) + render_pattern(arm.pat)
            if arm.guard is not None:
                lead += " if " + render_expr(arm.guard, 0, True, indent + 1)
            lead += " => " + render_expr(arm.body, 0, False, indent + 1) + ","
            lines.append(lead)
        lines.append(pad + "}")
        return "\n".join(lines)
    if isinstance(e, N.ReturnExpr):
        if e.value is None:
            return "return"
        return "return " + render_expr(e.value, 0, ns, indent)
    if isinstance(e, N.PrintExpr):
        name = "println" if e.newline else "print"
        return f'{name}!("{_escape(e.template, chr(34))}")'
    if isinstance(e, N.PanicExpr):
        return f'panic!("{_escape(e.message, chr(34))}")'
    raise AssertionError(f"unknown expression node {e!r}")


def _render_if(e, indent: int) -> str:
    parts = []
    node = e
    first = True
    while True:
        kw = "if" if first else "else if"
        if isinstance(node, N.IfLetExpr):
            head = (f"{kw} let {render_pattern(node.pat)} = "
                    f"{render_expr(node.scrutinee, 0, True, indent)}")
        else:
            head = f"{kw} {render_expr(node.cond, 0, True, indent)}"
        parts.append(head + " " + render_block(node.then, indent))
        first = False
        els = node.else_
        if els is None:
            return " ".join(parts) if len(parts) == 1 else _join_if(parts)
        if isinstance(els, (N.IfExpr, N.IfLetExpr)):
            node = els
            continue
        parts.append("else " + render_block(els, indent))
        return _join_if(parts)


def _join_if(parts: list[str]) -> str:
    # `} else if ... {` chains: glue block ends to the next keyword.
    return " ".join(parts)


def render_block(b: N.Block, indent: int = 0) -> str:
    pad = "    " * indent
    inner = "    " * (indent + 1)
    lines = ["{"]
    for s in b.stmts:
        lines.append(inner + render_stmt(s, indent + 1))
    if b.tail is not None:
        lines.append(inner + render_expr(b.tail, 0, False, indent + 1))
    lines.append(pad + "}")
    if len(lines) == 2:
        return "{ }"
    return "\n".join(lines)


def render_stmt(s: N.Stmt, indent: int = 0) -> str:
    if isinstance(s, N.LetStmt):
        out = "let " + render_pattern(s.pat)
        if s.ty_ann is not None:
            out += ": " + render_type(s.ty_ann)
        return out + " = " + render_expr(s.init, 0, False, indent) + ";"
    if isinstance(s, N.LetElseStmt):
        out = "let " + render_pattern(s.pat)
        if s.ty_ann is not None:
            out += ": " + render_type(s.ty_ann)
        out += " = " + render_expr(s.init, 0, False, indent)
        return out + " else " + render_block(s.else_block, indent) + ";"
    if isinstance(s, N.AssignStmt):
        return f"{s.name} = {render_expr(s.value, 0, False, indent)};"
    if isinstance(s, N.ExprStmt):
        text = render_expr(s.expr, 0, False, indent)
        return text + (";" if s.has_semi else "")
    if isinstance(s, N.WhileStmt):
        head = render_expr(s.cond, 0, True, indent)
        return f"while {head} " + render_block(s.body, indent)
    raise AssertionError(f"unknown statement node {s!r}")


# ── items and programs ───────────────────────────────────────────


def render_item(item: N.Item) -> str:
    if isinstance(item, N.EnumDef):
        lines = [f"enum {item.name} {{"]
        for v in item.variants:
            if v.style == "unit":
                lines.append(f"    {v.name},")
            elif v.style == "tuple":
                fields = ", ".join(render_type(t) for t in v.tuple_fields)
                lines.append(f"    {v.name}({fields}),")
            else:
                fields = ", ".join(f"{n}: {render_type(t)}" for n, t in v.named_fields)
                lines.append(f"    {v.name} {{ {fields} }},")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(item, N.StructDef):
        if item.style == "unit":
            return f"struct {item.name};"
        if item.style == "tuple":
            fields = ", ".join(render_type(t) for t in item.tuple_fields)
            return f"struct {item.name}({fields});"
        lines = [f"struct {item.name} {{"]
        for n, t in item.named_fields:
            lines.append(f"    {n}: {render_type(t)},")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(item, N.ConstDef):
        return (f"const {item.name}: {render_type(item.ty)} = "
                f"{render_expr(item.value)};")
    if isinstance(item, N.StaticDef):
        mut = "mut " if item.mutable else ""
        return (f"static {mut}{item.name}: {render_type(item.ty)} = "
                f"{render_expr(item.value)};")
    if isinstance(item, N.FnDef):
        params = ", ".join(
            ("mut " if p.mutable else "") + f"{p.name}: {render_type(p.ty)}"
            for p in item.params
        )
        head = f"fn {item.name}({params})"
        if item.ret is not None:
            head += " -> " + render_type(item.ret)
        return head + " " + render_block(item.body, 0)
    raise AssertionError(f"unknown item node {item!r}")


def render_program(prog: N.Program) -> str:
    return "\n\n".join(render_item(i) for i in prog.items) + "\n"


def program_hash(prog: N.Program) -> str:
    """Identity of a program for trace validation: the hash of its
    canonical rendering, stable across whitespace and comment changes."""
    text = render_program(prog)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
