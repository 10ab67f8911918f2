"""The machine's instruction set: operations on value trees.

Products and coproducts act on two set nodes (Cartesian pairs, disjoint
union with duplicates) or on two leaves (multiplication, addition).  The
coproduct of arrows is the conditional; naturals form a lattice under
min/max with truncated subtraction as supplement; booleans are the leaves
0 and 1.  ``select`` filters a set by a predicate term, the pullback-style
query operation.

All operations are pure: results are freshly built and never alias their
operands.
"""

from __future__ import annotations

from .errors import (
    DivisionByZero,
    EvalError,
    MixedKinds,
    NotALeaf,
    NotASet,
    NotBoolean,
)
from .tree import LEAF, SET, VAR, Node, node_equal

#: Operation identifiers recognized by the evaluator (case-sensitive).
BUILTIN_OPS = frozenset(
    {
        "prod", "sum", "pair", "if",
        "min", "max", "monus", "rem",
        "and", "or", "not", "implies",
        "eq", "le", "lt",
        "select", "seteq",
    }
)


def _nat(node: Node, who: str) -> int:
    if node.kind != LEAF:
        raise NotALeaf(f"{who} needs natural-number leaves, got {node!r}")
    return node.value


def _bool(node: Node, who: str = "boolean operation") -> int:
    if node.kind != LEAF or node.value not in (0, 1):
        raise NotBoolean(f"{who} needs a boolean leaf (0 or 1), got {node!r}")
    return node.value


def product(a: Node, b: Node) -> Node:
    """Leaves multiply; sets make all pairs {fst snd}, labeled p0, p1, ..."""
    if a.kind == LEAF and b.kind == LEAF:
        return Node.leaf(a.value * b.value)
    if a.kind == SET and b.kind == SET:
        out = Node.set_node()
        k = 0
        for _, ca in a.children:
            for _, cb in b.children:
                out.add_child(f"p{k}", pair(ca, cb))
                k += 1
        return out
    raise MixedKinds(f"product of {a!r} and {b!r}")


def coproduct(a: Node, b: Node) -> Node:
    """Leaves add; sets concatenate children, duplicates preserved."""
    if a.kind == LEAF and b.kind == LEAF:
        return Node.leaf(a.value + b.value)
    if a.kind == SET and b.kind == SET:
        out = Node.set_node()
        k = 0
        for _, child in list(a.children) + list(b.children):
            out.add_child(f"p{k}", child.copy())
            k += 1
        return out
    raise MixedKinds(f"coproduct of {a!r} and {b!r}")


def pair(f: Node, g: Node) -> Node:
    return Node.set_node([("fst", f.copy()), ("snd", g.copy())])


def if_arrow(cond: Node, f: Node, g: Node) -> Node:
    """f when cond is true(1), g when false(0).

    This is the strict value-level form; the evaluator supplies the
    branches unevaluated and only evaluates the one selected.
    """
    return (f if _bool(cond, "if") else g).copy()


def nat_lattice(op: str, a: Node, b: Node) -> Node:
    x, y = _nat(a, op), _nat(b, op)
    if op == "min":
        return Node.leaf(min(x, y))
    if op == "max":
        return Node.leaf(max(x, y))
    if op == "monus":
        return Node.leaf(x - y if x >= y else 0)
    raise EvalError(f"unknown lattice operation {op!r}")


def remainder(a: Node, b: Node) -> Node:
    x, y = _nat(a, "rem"), _nat(b, "rem")
    if y == 0:
        raise DivisionByZero(f"rem({x}, 0)")
    return Node.leaf(x % y)


def bool_lattice(op: str, *args: Node) -> Node:
    if op == "not":
        (a,) = args
        return Node.leaf(1 - _bool(a, "not"))
    a, b = args
    x, y = _bool(a, op), _bool(b, op)
    if op == "and":
        return Node.leaf(x & y)
    if op == "or":
        return Node.leaf(x | y)
    if op == "implies":
        return Node.leaf((1 - x) | y)
    raise EvalError(f"unknown boolean operation {op!r}")


def nat_compare(op: str, a: Node, b: Node) -> Node:
    x, y = _nat(a, op), _nat(b, op)
    if op == "eq":
        return Node.leaf(int(x == y))
    if op == "le":
        return Node.leaf(int(x <= y))
    if op == "lt":
        return Node.leaf(int(x < y))
    raise EvalError(f"unknown comparison {op!r}")


def struct_eq(a: Node, b: Node) -> Node:
    """1 iff the trees are structurally equal (order-sensitive)."""
    return Node.leaf(int(node_equal(a, b)))


def select(m: Node, predicate: Node, ctx) -> Node:
    """Children of ``m`` for which the predicate holds, order and labels kept.

    The predicate is a term with at most one distinct variable; each child
    is substituted for that variable.  The child is also pushed as the
    innermost reference scope, so field access like ``[name]`` works on
    record children.
    """
    from .evaluator import evaluate  # local import: select drives evaluation

    if m.kind != SET:
        raise NotASet(f"select needs a set, got {m!r}")
    names = _predicate_vars(predicate)
    if len(names) > 1:
        raise EvalError(f"select predicate uses several variables: {sorted(names)}")
    var_name = next(iter(names)) if names else None
    out = Node.set_node()
    for label, child in m.children:
        pred = predicate.copy()
        if var_name is not None:
            pred = _bind_var(pred, var_name, child)
        ctx.scopes.insert(0, child)
        try:
            result = evaluate(pred, ctx)
        finally:
            ctx.scopes.pop(0)
        if _bool(result, "select predicate"):
            out.children.append((label, child.copy()))
    return out


def _predicate_vars(node: Node) -> set[str]:
    names: set[str] = set()
    if node.kind == VAR:
        names.add(node.var)
    elif node.kind == SET:
        if node.op is not None and node.op.startswith("$"):
            raise EvalError("function variables are not allowed in select predicates")
        for _, child in node.children:
            names |= _predicate_vars(child)
    return names


def _bind_var(node: Node, name: str, value: Node) -> Node:
    if node.kind == VAR and node.var == name:
        return value.copy()
    if node.kind == SET:
        node.children = [
            (label, _bind_var(child, name, value)) for label, child in node.children
        ]
    return node


#: ops applied strictly to fully evaluated operands, keyed by identifier.
_EAGER_ARITY = {
    "prod": 2, "sum": 2, "pair": 2,
    "min": 2, "max": 2, "monus": 2, "rem": 2,
    "and": 2, "or": 2, "implies": 2, "not": 1,
    "eq": 2, "le": 2, "lt": 2, "seteq": 2,
}


def apply_builtin(op: str, operands: list[Node]) -> Node:
    """Dispatch an eager built-in; ``if`` and ``select`` are not eager."""
    arity = _EAGER_ARITY.get(op)
    if arity is None:
        raise EvalError(f"{op!r} is not an eager built-in")
    if len(operands) != arity:
        raise EvalError(f"{op} expects {arity} operands, got {len(operands)}")
    if op == "prod":
        return product(*operands)
    if op == "sum":
        return coproduct(*operands)
    if op == "pair":
        return pair(*operands)
    if op in ("min", "max", "monus"):
        return nat_lattice(op, *operands)
    if op == "rem":
        return remainder(*operands)
    if op in ("and", "or", "implies", "not"):
        return bool_lattice(op, *operands)
    if op in ("eq", "le", "lt"):
        return nat_compare(op, *operands)
    return struct_eq(*operands)
