"""Text format for systems, tests and test weights.

Grammar (one directive per line, ``#`` starts a comment)::

    param NAME = EXPR          # default value, overridable from the CLI
    omega TEST = EXPR          # weight of a test, in (0, 1]
    pts NAME                   # opens a system block
    npt NAME                   # opens a test block
    states S1 S2 ...
    actions A1 A2 ...
    init S
    success S                  # tests only
    trans SRC LABEL -> DST: EXPR, DST: EXPR, ...
    trans SRC LABEL -> DST     # Dirac shorthand

Probabilities are exact: ``1/3``, ``0.25`` and expressions over params such
as ``1/2 - eps``.  An entry written with a param expression that evaluates
to 0 is dropped, so a param can switch a branch off; a literal 0 is an error.
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Optional

from .pts import ModelError, Npt, Pts, validate_npt, validate_pts

_NAME = re.compile(r"[^\s,:#=]+")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class ParseError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        self.line, self.col, self.message = line, col, message
        super().__init__(f"line {line}, column {col}: {message}")


@dataclass
class Model:
    systems: dict = field(default_factory=dict)  # name -> Pts or Npt, in file order
    omega: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def pts_blocks(self) -> list:
        return [m for m in self.systems.values() if isinstance(m, Pts)]

    def tests(self) -> list:
        return [m for m in self.systems.values() if isinstance(m, Npt)]

    def find_state(self, ref: str):
        """Resolve ``state`` or ``block:state`` to ``(Pts, state)``."""
        if ":" in ref:
            block, state = ref.split(":", 1)
            if block not in self.systems:
                raise KeyError(f"no block named {block!r}")
            base = _base(self.systems[block])
            if not base.has_state(state):
                raise KeyError(f"block {block!r} has no state {state!r}")
            return base, state
        hits = [m for m in self.pts_blocks() if m.has_state(ref)]
        if not hits:
            if ref in self.systems:
                base = _base(self.systems[ref])
                return base, base.init
            raise KeyError(f"no state named {ref!r}")
        if len(hits) > 1:
            raise KeyError(f"state {ref!r} is ambiguous; qualify it as block:state")
        return hits[0], ref


def _base(m):
    return m.base if isinstance(m, Npt) else m


_BINOPS = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b,
           ast.Mult: lambda a, b: a * b, ast.Div: lambda a, b: a / b}


def eval_expr(text: str, params: dict) -> tuple:
    """Evaluate a rational expression; returns ``(value, uses_params)``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {text.strip()!r}") from exc
    used = [False]

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Div) and right == 0:
                raise ValueError("division by zero")
            return _BINOPS[type(node.op)](left, right)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            segment = ast.get_source_segment(text.strip(), node)
            return Fraction(Decimal(segment)) if segment else Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise ValueError(f"unknown parameter {node.id!r}")
            used[0] = True
            return params[node.id]
        raise ValueError(f"unsupported expression {text.strip()!r}")

    return ev(tree), used[0]


def parse_fraction(text: str) -> Fraction:
    value, _ = eval_expr(text, {})
    return value


@dataclass
class _Block:
    kind: str
    name: str
    line: int
    states: Optional[list] = None
    actions: Optional[list] = None
    init: Optional[str] = None
    success: Optional[str] = None
    trans: list = field(default_factory=list)  # (src, label, entries, line)


def parse_model(text: str, overrides: Optional[dict] = None) -> Model:
    """Parse and validate every block of a model file.

    ``overrides`` maps param names to values replacing the file defaults.
    Raises :class:`ParseError` on the first problem found.
    """
    overrides = {k: Fraction(v) for k, v in (overrides or {}).items()}
    model = Model()
    blocks = []
    current = None
    omega_lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        body = line.strip()
        word, _, rest = body.partition(" ")
        rest = rest.strip()
        if word in ("param", "omega"):
            name, eq, expr = rest.partition("=")
            name = name.strip()
            if not eq or not _NAME.fullmatch(name):
                raise ParseError(lineno, col, f"expected '{word} NAME = VALUE'")
            if word == "param":
                if not _IDENT.match(name):
                    raise ParseError(lineno, col, f"bad parameter name {name!r}")
                try:
                    value, _ = eval_expr(expr, model.params)
                except ValueError as exc:
                    raise ParseError(lineno, col + len(body) - len(expr.lstrip()), str(exc))
                model.params[name] = overrides.get(name, value)
            else:
                omega_lines.append((name, expr, lineno, col))
        elif word in ("pts", "npt"):
            if not _NAME.fullmatch(rest):
                raise ParseError(lineno, col, f"expected '{word} NAME'")
            if any(b.name == rest for b in blocks):
                raise ParseError(lineno, col, f"duplicate block name {rest!r}")
            current = _Block(word, rest, lineno)
            blocks.append(current)
        elif word in ("states", "actions", "init", "success", "trans"):
            if current is None:
                raise ParseError(lineno, col, f"'{word}' outside of a block")
            _block_line(current, word, rest, lineno, col, body, model.params)
        else:
            raise ParseError(lineno, col, f"unknown directive {word!r}")
    unknown = set(overrides) - set(model.params)
    if unknown:
        raise ParseError(0, 0, f"unknown parameter(s): {', '.join(sorted(unknown))}")
    for block in blocks:
        model.systems[block.name] = _build(block)
    for name, expr, lineno, col in omega_lines:
        try:
            value, _ = eval_expr(expr, model.params)
        except ValueError as exc:
            raise ParseError(lineno, col, str(exc))
        if not 0 < value <= 1:
            raise ParseError(lineno, col, f"weight {value} of {name!r} not in (0,1]")
        model.omega[name] = value
    return model


def _block_line(block, word, rest, lineno, col, body, params):
    if word in ("states", "actions"):
        names = rest.split()
        if not names and word == "states":
            raise ParseError(lineno, col, "empty state list")
        setattr(block, word, names)
    elif word in ("init", "success"):
        if word == "success" and block.kind != "npt":
            raise ParseError(lineno, col, "'success' is only allowed in npt blocks")
        if not _NAME.fullmatch(rest):
            raise ParseError(lineno, col, f"expected '{word} STATE'")
        setattr(block, word, rest)
    else:
        head, arrow, dist = rest.partition("->")
        parts = head.split()
        if not arrow or len(parts) != 2:
            raise ParseError(lineno, col, "expected 'trans SRC LABEL -> DST: P, ...'")
        entries = []
        start = body.index("->") + 2  # offset of the distribution within the line
        items = dist.split(",")
        if len(items) == 1 and ":" not in items[0]:
            target = items[0].strip()
            if not _NAME.fullmatch(target):
                raise ParseError(lineno, col + start, "expected a target state")
            entries.append((target, Fraction(1)))
        else:
            for item in items:
                offset, start = start, start + len(item) + 1
                item_col = col + offset + len(item) - len(item.lstrip())
                target, colon, expr = item.partition(":")
                target = target.strip()
                if not colon or not _NAME.fullmatch(target):
                    raise ParseError(lineno, item_col, f"bad distribution entry {item.strip()!r}")
                expr_col = col + offset + item.index(":") + 1 + len(expr) - len(expr.lstrip())
                try:
                    value, uses = eval_expr(expr, params)
                except ValueError as exc:
                    raise ParseError(lineno, expr_col, str(exc))
                if value == 0 and uses:
                    continue
                entries.append((target, value))
        block.trans.append((parts[0], parts[1], entries, lineno))


def _build(block):
    for attr in ("states", "actions", "init"):
        if getattr(block, attr) is None:
            raise ParseError(block.line, 1, f"block {block.name!r} has no '{attr}' line")
    if block.kind == "npt" and block.success is None:
        raise ParseError(block.line, 1, f"test {block.name!r} has no 'success' line")
    raw = [(src, label, entries) for src, label, entries, _ in block.trans]
    try:
        pts = validate_pts(block.name, block.states, block.actions, block.init, raw)
        if block.kind == "npt":
            return validate_npt(pts, block.success)
        return pts
    except ModelError as exc:
        msg, idx = exc.problems[0]
        line = block.trans[idx][3] if idx is not None else block.line
        raise ParseError(line, 1, msg) from exc


def _fmt(q: Fraction) -> str:
    return str(Fraction(q))


def emit_model(model: Model) -> str:
    """Canonical text for a model; params are already instantiated."""
    out = []
    for name, w in model.omega.items():
        out.append(f"omega {name} = {_fmt(w)}")
    for name, m in model.systems.items():
        base = _base(m)
        if out:
            out.append("")
        out.append(f"{'npt' if isinstance(m, Npt) else 'pts'} {name}")
        out.append("states " + " ".join(map(str, base.states)))
        out.append("actions " + " ".join(base.actions))
        out.append(f"init {base.init}")
        if isinstance(m, Npt):
            out.append(f"success {m.success}")
        for tr in base.transitions:
            dist = ", ".join(f"{s}: {_fmt(p)}" for s, p in tr.target.items())
            out.append(f"trans {tr.source} {tr.label} -> {dist}")
    return "\n".join(out) + ("\n" if out else "")


def rename_states(p: Pts, name: Optional[str] = None) -> Pts:
    """Copy of ``p`` whose states are plain strings usable in the text format."""
    def key(s):
        if isinstance(s, tuple):
            return "(" + "|".join(key(x) for x in s) + ")"
        return str(s)

    mapping = {s: key(s) for s in p.states}
    raw = [(mapping[tr.source], tr.label, [(mapping[s], q) for s, q in tr.target.items()])
           for tr in p.transitions]
    return validate_pts(name or p.name, [mapping[s] for s in p.states], p.actions,
                        mapping[p.init], raw)


def _dot_id(x) -> str:
    return '"' + str(x).replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(model) -> str:
    """Graphviz description: states, one point node per transition, weighted edges."""
    systems = model.systems.values() if isinstance(model, Model) else [model]
    out = ["digraph model {", "  rankdir=TB;"]
    for m in systems:
        base = _base(m)
        out.append(f"  subgraph {_dot_id('cluster_' + base.name)} {{")
        out.append(f"    label={_dot_id(base.name)};")
        for s in base.states:
            shape = "doublecircle" if isinstance(m, Npt) and s == m.success else "circle"
            out.append(f"    {_dot_id(f'{base.name}/{s}')} [label={_dot_id(s)}, shape={shape}];")
        for i, tr in enumerate(base.transitions):
            act = _dot_id(f"{base.name}/#{i}")
            out.append(f"    {act} [label=\"\", shape=point];")
            out.append(f"    {_dot_id(f'{base.name}/{tr.source}')} -> {act} [label={_dot_id(tr.label)}];")
            for s, p in tr.target.items():
                out.append(f"    {act} -> {_dot_id(f'{base.name}/{s}')} "
                           f"[label={_dot_id(_fmt(p))}, style=dotted];")
        out.append("  }")
    out.append("}")
    return "\n".join(out) + "\n"
