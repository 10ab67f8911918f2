"""Shared test utilities: random generators and independent oracles.

Every oracle here recomputes expected values from scratch (plain Python
arithmetic, list scans, datetime) so the machine under test never checks
itself.
"""

from __future__ import annotations

import random
from typing import Optional

from evocat.tree import Node, Path

LABELS = [
    "a", "b", "c", "d", "e", "f", "g", "h", "k", "m",
    "n", "p", "q", "r", "s", "t", "u", "w", "x", "y",
]

EXPR_OPS = ["sum", "prod", "min", "max", "monus", "rem"]


def leaf(v: int) -> Node:
    return Node.leaf(v)


def setn(*children: Node, op: Optional[str] = None, labels: Optional[list] = None) -> Node:
    if labels is None:
        labels = [None] * len(children)
    return Node.set_node(list(zip(labels, children)), op=op)


# --- random value trees (no terms) -----------------------------------------


def gen_value_tree(rng: random.Random, depth: int = 4, fanout: int = 5) -> Node:
    if depth == 0 or rng.random() < 0.4:
        return Node.leaf(rng.randrange(100))
    node = Node.set_node()
    labels = rng.sample(LABELS, rng.randrange(fanout + 1))
    for label in labels:
        use_label = label if rng.random() < 0.7 else None
        node.children.append((use_label, gen_value_tree(rng, depth - 1, fanout)))
    return node


# --- random trees for round-trip (all node kinds) ---------------------------


def gen_any_tree(rng: random.Random, depth: int = 6, fanout: int = 5) -> Node:
    roll = rng.random()
    if depth == 0 or roll < 0.35:
        return Node.leaf(rng.randrange(1000))
    if roll < 0.42:
        segs = tuple(
            rng.choice(LABELS) if rng.random() < 0.8 else rng.randrange(4)
            for _ in range(rng.randrange(1, 4))
        )
        return Node.ref_node(Path(segs))
    if roll < 0.48:
        return Node.var_node(rng.choice(LABELS).upper())
    op = None
    r = rng.random()
    if r < 0.25:
        op = rng.choice(EXPR_OPS)
    elif r < 0.3:
        op = "$" + rng.choice(LABELS)
    node = Node.set_node(op=op)
    labels = rng.sample(LABELS, rng.randrange(min(fanout, 5) + 1))
    for label in labels:
        use_label = label if rng.random() < 0.6 else None
        node.children.append((use_label, gen_any_tree(rng, depth - 1, fanout)))
    return node


# --- arithmetic expression terms and their oracle ----------------------------


def gen_expr(rng: random.Random, depth: int) -> Node:
    if depth == 0 or rng.random() < 0.3:
        return Node.leaf(rng.randrange(12))
    op = rng.choice(EXPR_OPS)
    return setn(gen_expr(rng, depth - 1), gen_expr(rng, depth - 1), op=op)


def expr_oracle(node: Node) -> int:
    """Independent recursive evaluator; raises ZeroDivisionError like a%0."""
    if node.kind == "leaf":
        return node.value
    args = [expr_oracle(child) for _, child in node.children]
    op = node.op
    if op == "sum":
        return args[0] + args[1]
    if op == "prod":
        return args[0] * args[1]
    if op == "min":
        return min(args)
    if op == "max":
        return max(args)
    if op == "monus":
        return args[0] - args[1] if args[0] >= args[1] else 0
    if op == "rem":
        return args[0] % args[1]
    raise ValueError(op)


# --- Euclid with iteration count ---------------------------------------------


def euclid(a: int, b: int) -> tuple[int, int]:
    """(gcd, iterations of the swap-and-remainder step)."""
    steps = 0
    while b:
        a, b = b, a % b
        steps += 1
    return a, steps


# --- random paths -------------------------------------------------------------


def gen_label_path(rng: random.Random, max_len: int = 6) -> Path:
    return Path(tuple(rng.choice(LABELS) for _ in range(rng.randrange(max_len + 1))))


# --- polynomials for the derivative check -------------------------------------


def atom_x() -> Node:
    return Node.set_node(op="x")


def gen_poly_expr(rng: random.Random, depth: int) -> Node:
    roll = rng.random()
    if depth == 0 or roll < 0.3:
        return atom_x() if rng.random() < 0.5 else Node.leaf(rng.randrange(6))
    op = "prod" if rng.random() < 0.5 else "sum"
    return setn(gen_poly_expr(rng, depth - 1), gen_poly_expr(rng, depth - 1), op=op)


def poly_coeffs(node: Node) -> list[int]:
    """Coefficient vector (ascending degree) of an expression over x."""
    if node.kind == "leaf":
        return [node.value]
    if node.op == "x":
        return [0, 1]
    if node.op in ("sum", "prod") and len(node.children) == 2:
        ca = poly_coeffs(node.children[0][1])
        cb = poly_coeffs(node.children[1][1])
        if node.op == "sum":
            out = [0] * max(len(ca), len(cb))
            for i, v in enumerate(ca):
                out[i] += v
            for i, v in enumerate(cb):
                out[i] += v
        else:
            out = [0] * (len(ca) + len(cb) - 1)
            for i, u in enumerate(ca):
                for j, v in enumerate(cb):
                    out[i + j] += u * v
        return out
    raise ValueError(f"not a polynomial expression: {node!r}")


def poly_derivative(coeffs: list[int]) -> list[int]:
    return [i * c for i, c in enumerate(coeffs)][1:] or [0]


def normalize_coeffs(coeffs: list[int]) -> list[int]:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out
