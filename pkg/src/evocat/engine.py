"""The two program disciplines: sequential instruction lists and rewriting.

A sequential body is a list of instructions ``{ at = [path] to = <term> }``;
a reserved frame child ``ip`` is the instruction pointer, and writing to it
is the jump.  A rewrite body is a list of formulas ``{ lhs <pattern> rhs
<template> }`` applied by priority: evaluate every ready sub-term, find the
first formula with matches (collected preorder, outermost first,
non-overlapping), replace them all, repeat.

Patterns are trees whose leaves may be variables ``$x`` (match any subtree,
repeated occurrences must match equal subtrees) and whose operation slot
may hold a function variable ``$f`` applied to one previously bound
variable, the decidable fragment of second-order matching.  ``$f`` binds
to the matched subtree with every occurrence of the argument's value
replaced by a hole.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import EvalError, EvoError, UnboundVariable
from .evaluator import (
    DEFAULT_FUEL,
    EvalContext,
    evaluate,
    is_function_instance,
)
from .tree import (
    HOLE,
    LEAF,
    REF,
    SET,
    VAR,
    Node,
    Path,
    StateTree,
    node_equal,
    replace_subtree,
)

#: frame children the rewrite engine must not scan or rewrite
RESERVED_FRAME_LABELS = frozenset({"args", "mode", "body", "rules", "ip"})

_IP = Path.of("ip")


@dataclass
class Abstraction:
    """A one-hole context: the body of a matched function variable."""

    body: Node

    def plug(self, argument: Node) -> Node:
        return _plug(self.body.copy(), argument)


def _plug(node: Node, argument: Node) -> Node:
    if node.kind == HOLE:
        return argument.copy()
    if node.kind == SET:
        node.children = [(label, _plug(child, argument)) for label, child in node.children]
    return node


@dataclass
class Binding:
    """Match results: subtrees for variables, abstractions for function
    variables.  Repeated variables only ever bind equal subtrees."""

    vars: dict[str, Node] = field(default_factory=dict)
    funcs: dict[str, Abstraction] = field(default_factory=dict)


@dataclass
class Instruction:
    at: Path
    to: Node


@dataclass
class Formula:
    lhs: Node
    rhs: Node
    index: int  # 0-based position in the rule list


# --- matching ----------------------------------------------------------------


def match(pattern: Node, subject: Node) -> Optional[Binding]:
    """Match ``subject`` against ``pattern``; None when they disagree."""
    binding = Binding()
    deferred: list[tuple[str, str, Node]] = []
    if not _walk(pattern, subject, binding, deferred):
        return None
    for fname, argname, node in deferred:
        argval = binding.vars.get(argname)
        if argval is None:
            raise EvalError(
                f"function variable ${fname} applied to ${argname}, which the pattern never binds"
            )
        abstraction = Abstraction(_abstract(node.copy(), argval))
        seen = binding.funcs.get(fname)
        if seen is not None:
            if not node_equal(seen.body, abstraction.body):
                return None
        else:
            binding.funcs[fname] = abstraction
    return binding


def _walk(p: Node, t: Node, binding: Binding, deferred: list) -> bool:
    if p.kind == VAR:
        seen = binding.vars.get(p.var)
        if seen is not None:
            return node_equal(seen, t)
        binding.vars[p.var] = t
        return True
    if p.kind == LEAF:
        return t.kind == LEAF and p.value == t.value
    if p.kind == REF:
        return t.kind == REF and p.ref == t.ref
    if p.kind == HOLE:
        raise EvalError("hole nodes cannot appear in patterns")
    # p is a set
    if p.op is not None and p.op.startswith("$"):
        if len(p.children) != 1 or p.children[0][1].kind != VAR:
            raise EvalError(
                f"function variable {p.op} must be applied to exactly one variable"
            )
        deferred.append((p.op[1:], p.children[0][1].var, t))
        return True
    if t.kind != SET or p.op != t.op or len(p.children) != len(t.children):
        return False
    for (pl, pc), (tl, tc) in zip(p.children, t.children):
        if pl != tl:
            return False
        if not _walk(pc, tc, binding, deferred):
            return False
    return True


def _abstract(node: Node, value: Node) -> Node:
    """Replace every subtree equal to ``value`` by a hole (zero occurrences
    leave a vacuous abstraction, the constant function)."""
    if node_equal(node, value):
        return Node.hole()
    if node.kind == SET:
        node.children = [(label, _abstract(child, value)) for label, child in node.children]
    return node


# --- substitution ------------------------------------------------------------


def substitute(template: Node, binding: Binding) -> Node:
    """Instantiate a template: variables become deep copies of their
    bindings, ``$f(s)`` becomes f's body with the hole replaced by s."""
    if template.kind == VAR:
        bound = binding.vars.get(template.var)
        if bound is None:
            raise UnboundVariable(f"${template.var} is not bound")
        return bound.copy()
    if template.kind in (LEAF, REF):
        return template.copy()
    if template.kind == HOLE:
        raise EvalError("hole nodes cannot appear in templates")
    if template.op is not None and template.op.startswith("$"):
        name = template.op[1:]
        abstraction = binding.funcs.get(name)
        if abstraction is None:
            raise UnboundVariable(f"${name} is not bound")
        if len(template.children) != 1:
            raise EvalError(
                f"function variable ${name} must be applied to exactly one argument"
            )
        argument = substitute(template.children[0][1], binding)
        return abstraction.plug(argument)
    out = Node(SET, op=template.op)
    out.children = [
        (label, substitute(child, binding)) for label, child in template.children
    ]
    return out


# --- program extraction -------------------------------------------------------


def instructions_from(body: Union[Node, list[Node]]) -> list[Instruction]:
    """Read ``{ at = [path] to = ... }`` entries out of a body node."""
    nodes = [child for _, child in body.children] if isinstance(body, Node) else body
    program: list[Instruction] = []
    for index, node in enumerate(nodes):
        if node.kind != SET:
            raise EvalError(f"instruction #{index} is not a set node")
        at = node.child("at")
        to = node.child("to")
        if at is None or to is None or len(node.children) != 2:
            raise EvalError(f"instruction #{index} must have exactly 'at' and 'to'")
        if at.kind != REF:
            raise EvalError(f"instruction #{index}: 'at' must be an address [path]")
        program.append(Instruction(at.ref, to))
    return program


def formulas_from(rules: Union[Node, list[Node]]) -> list[Formula]:
    """Read ``{ lhs ... rhs ... }`` entries out of a rules node and check
    them: rhs variables must occur in the lhs, function variables take one
    argument, and that argument must be bound first-order elsewhere."""
    nodes = [child for _, child in rules.children] if isinstance(rules, Node) else rules
    formulas: list[Formula] = []
    for index, node in enumerate(nodes):
        if node.kind != SET:
            raise EvalError(f"formula #{index} is not a set node")
        lhs = node.child("lhs")
        rhs = node.child("rhs")
        if lhs is None or rhs is None:
            raise EvalError(f"formula #{index} must have 'lhs' and 'rhs'")
        _validate_formula(lhs, rhs, index)
        formulas.append(Formula(lhs, rhs, index))
    return formulas


def _collect_vars(node: Node, first_order: set, funcs: set, fn_args: set) -> None:
    if node.kind == VAR:
        first_order.add(node.var)
        return
    if node.kind != SET:
        return
    if node.op is not None and node.op.startswith("$"):
        funcs.add(node.op[1:])
        for _, child in node.children:
            if child.kind == VAR:
                fn_args.add(child.var)
            else:
                _collect_vars(child, first_order, funcs, fn_args)
        return
    for _, child in node.children:
        _collect_vars(child, first_order, funcs, fn_args)


def _validate_formula(lhs: Node, rhs: Node, index: int) -> None:
    lhs_vars: set[str] = set()
    lhs_funcs: set[str] = set()
    lhs_fn_args: set[str] = set()
    _collect_vars(lhs, lhs_vars, lhs_funcs, lhs_fn_args)
    missing = lhs_fn_args - lhs_vars
    if missing:
        raise EvalError(
            f"formula #{index}: function-variable arguments {sorted(missing)} "
            "are never bound first-order in the lhs"
        )
    rhs_vars: set[str] = set()
    rhs_funcs: set[str] = set()
    rhs_fn_args: set[str] = set()
    _collect_vars(rhs, rhs_vars, rhs_funcs, rhs_fn_args)
    free = (rhs_vars | rhs_fn_args) - lhs_vars - lhs_fn_args
    if free:
        raise EvalError(f"formula #{index}: rhs variables {sorted(free)} not bound by lhs")
    free_funcs = rhs_funcs - lhs_funcs
    if free_funcs:
        raise EvalError(
            f"formula #{index}: rhs function variables {sorted(free_funcs)} not bound by lhs"
        )


# --- sequential execution -----------------------------------------------------


def _as_frame(frame: Union[StateTree, Node]) -> Node:
    return frame.root if isinstance(frame, StateTree) else frame


def _context_for(frame: Node, ctx: Optional[EvalContext], fuel: Optional[int]) -> EvalContext:
    if ctx is None:
        ctx = EvalContext(frame, fuel=fuel if fuel is not None else DEFAULT_FUEL)
    elif fuel is not None:
        ctx.fuel = fuel
    return ctx


def run_sequential(
    body: Union[Node, list[Node]],
    frame: Union[StateTree, Node],
    ctx: Optional[EvalContext] = None,
    fuel: Optional[int] = None,
) -> StateTree:
    """Execute an instruction list against a frame.

    The reserved child ``ip`` starts at 0; each step evaluates the
    instruction's tree term in the frame context, applies the replacement
    at the address, and increments ``ip`` unless the instruction wrote it.
    Execution halts once ``ip`` runs past the last instruction.
    """
    root = _as_frame(frame)
    if root.kind != SET:
        raise EvalError("a sequential frame must be a set node")
    ctx = _context_for(root, ctx, fuel)
    program = instructions_from(body)
    root.set_child("ip", Node.leaf(0))
    while True:
        ip_node = root.child("ip")
        if ip_node is None or ip_node.kind != LEAF:
            raise EvalError("frame child 'ip' must be a natural-number leaf")
        index = ip_node.value
        if index >= len(program):
            break
        inst = program[index]
        ctx.emit("seq", index, str(inst.at))
        try:
            ctx.spend()
            ctx.count("instruction")
            value = evaluate(inst.to.copy(), ctx)
            _apply_write(root, inst.at, value, ctx)
        except EvoError as err:
            err.instruction = index  # type: ignore[attr-defined]
            raise
        if inst.at != _IP:
            root.set_child("ip", Node.leaf(index + 1))
    return frame if isinstance(frame, StateTree) else StateTree(root)


def _apply_write(root: Node, at: Path, value: Node, ctx: EvalContext) -> None:
    if ctx.devices is not None:
        device = ctx.devices.lookup(str(at))
        if device is not None:
            from .devices import write_device

            write_device(ctx.devices, at, value)
            ctx.count("device_write")
            return
    replace_subtree(root, at, value)


# --- rewriting ------------------------------------------------------------------


def run_rewrite(
    rules: Union[Node, list[Node]],
    frame: Union[StateTree, Node],
    ctx: Optional[EvalContext] = None,
    fuel: Optional[int] = None,
) -> StateTree:
    """Rewrite the frame's data children to a normal form under the rules.

    Loop: (1) evaluate every ready sub-term (built-in operations with fully
    evaluated operands, references); (2) take the first formula with
    matches, collected preorder and outermost first, skipping descendants
    of matched nodes; (3) replace them all with instantiated right sides.
    Stops when, after a ready sweep, no formula matches.
    """
    root = _as_frame(frame)
    if root.kind != SET:
        raise EvalError("a rewrite frame must be a set node")
    ctx = _context_for(root, ctx, fuel)
    formulas = formulas_from(rules)
    while True:
        with ctx.lenient():
            for label, child in root.children:
                if label not in RESERVED_FRAME_LABELS:
                    evaluate(child, ctx)
        hits: list[tuple[Node, Path, Binding]] = []
        fired: Optional[Formula] = None
        for formula in formulas:
            for index, (label, child) in enumerate(root.children):
                if label in RESERVED_FRAME_LABELS:
                    continue
                seg = label if label is not None else index
                _collect_matches(formula.lhs, child, Path.of(seg), hits)
            if hits:
                fired = formula
                break
        if fired is None:
            break
        for node, path, binding in hits:
            replacement = substitute(fired.rhs, binding)
            ctx.emit("rew", fired.index + 1, str(path))
            ctx.spend()
            ctx.count("firing")
            node.become(replacement)
    return frame if isinstance(frame, StateTree) else StateTree(root)


def _collect_matches(
    lhs: Node, node: Node, path: Path, hits: list[tuple[Node, Path, Binding]]
) -> None:
    binding = match(lhs, node)
    if binding is not None:
        hits.append((node, path, binding))
        return
    if node.kind != SET or is_function_instance(node):
        return
    for index, (label, child) in enumerate(node.children):
        seg = label if label is not None else index
        _collect_matches(lhs, child, path.child(seg), hits)
