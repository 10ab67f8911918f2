"""Turning terms into values by in-place subtree replacement.

A term is a set node carrying an operation identifier, or a reference
``[path]``.  Evaluation is leftmost-innermost except for ``if`` (condition
first, only the selected branch evaluated) and ``select`` (the predicate is
instantiated per child).  Evaluation triggered through data access replaces
the evaluated node inside the tree, so repeated reads cost nothing; a
detached node evaluates without touching any tree.

References resolve through a scope chain, innermost context first and the
machine root last, which is also how function identifiers find their
templates.  A shared fuel budget bounds every run; a set of in-progress
paths turns reference cycles into errors instead of hangs.
"""

from __future__ import annotations

from collections import Counter
from contextlib import contextmanager
from typing import Optional, Union

from . import algebra
from .errors import (
    CyclicReference,
    EvalError,
    FuelExhausted,
    PathUnresolvable,
    UnboundDevice,
    UnboundVariable,
    UnknownOperation,
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
    resolve_chain,
)

DEFAULT_FUEL = 10**6

#: labels every function instance carries
_INSTANCE_REQUIRED = ("args", "mode", "result")

MODE_SEQUENTIAL = 0
MODE_REWRITE = 1


class TraceSink:
    """Collects one event per machine transition; optionally prints them.

    A line is ``<step> <mode> <index> <path>``: a global step counter, the
    engine mode (``seq``/``rew``), the instruction index (0-based) or
    formula index (1-based), and the target path.
    """

    def __init__(self, stream=None):
        self.events: list[tuple[int, str, int, str]] = []
        self.stream = stream

    def emit(self, mode: str, index: int, path: str) -> None:
        step = len(self.events)
        self.events.append((step, mode, index, path))
        if self.stream is not None:
            self.stream.write(f"{step} {mode} {index} {path}\n")


class EvalContext:
    """Everything one logical thread of evaluation needs.

    ``scopes`` is the reference-resolution chain, innermost first; the last
    entry is normally the machine root.  ``fuel`` decreases on every
    subtree replacement and exhaustion raises instead of hanging.
    ``strict`` distinguishes eager evaluation (unknown operations are
    errors, templates are called) from the rewrite engine's ready-term
    sweep (anything not ready is left in place).
    """

    def __init__(
        self,
        root: Union[StateTree, Node, None] = None,
        *,
        scopes: Optional[list[Node]] = None,
        fuel: int = DEFAULT_FUEL,
        devices=None,
        trace: Optional[TraceSink] = None,
        strict: bool = True,
    ):
        if scopes is not None:
            self.scopes = scopes
        elif root is not None:
            self.scopes = [root.root if isinstance(root, StateTree) else root]
        else:
            self.scopes = []
        self.fuel = fuel
        self.devices = devices
        self.trace = trace
        self.strict = strict
        self.stats: Counter = Counter()
        self.in_progress: set[tuple[int, str]] = set()

    def spend(self, n: int = 1) -> None:
        if self.fuel < n:
            raise FuelExhausted("step budget exhausted")
        self.fuel -= n

    def count(self, key: str, n: int = 1) -> None:
        self.stats[key] += n

    def emit(self, mode: str, index: int, path: str) -> None:
        if self.trace is not None:
            self.trace.emit(mode, index, path)

    @contextmanager
    def using_scopes(self, scopes: list[Node]):
        saved = self.scopes
        self.scopes = scopes
        try:
            yield self
        finally:
            self.scopes = saved

    @contextmanager
    def scopes_pushed(self, inner: list[Node]):
        saved = self.scopes
        self.scopes = inner + self.scopes
        try:
            yield self
        finally:
            self.scopes = saved

    @contextmanager
    def lenient(self):
        saved = self.strict
        self.strict = False
        try:
            yield self
        finally:
            self.strict = saved


def is_function_instance(node: Node) -> bool:
    """A set shaped like a function/appliance frame: args, mode, result,
    and a body (sequential) or rules (rewrite) child."""
    if node.kind != SET or node.op is not None:
        return False
    if any(node.child(label) is None for label in _INSTANCE_REQUIRED):
        return False
    mode = node.child("mode")
    if mode.kind != LEAF or mode.value not in (MODE_SEQUENTIAL, MODE_REWRITE):
        return False
    code = node.child("body") if mode.value == MODE_SEQUENTIAL else node.child("rules")
    return code is not None and code.kind == SET


def instance_args_ready(node: Node) -> Optional[str]:
    """Name of the first argument slot still holding a placeholder, else None."""
    args = node.child("args")
    for index, (label, slot) in enumerate(args.children):
        if _contains_var(slot):
            return label if label is not None else f"#{index}"
    return None


def _contains_var(node: Node) -> bool:
    if node.kind == VAR:
        return True
    if node.kind == SET:
        return any(_contains_var(child) for _, child in node.children)
    return False


def is_value(node: Node) -> bool:
    """Fully evaluated: no operation, reference or variable anywhere.
    Function instances count as values (they are the machine's closures)."""
    if node.kind == LEAF:
        return True
    if node.kind != SET:
        return False
    if is_function_instance(node):
        return True
    if node.op is not None:
        return False
    return all(is_value(child) for _, child in node.children)


# --- access: data_of / deref ------------------------------------------------


def _device_read(ctx: EvalContext, path: Path) -> Optional[Node]:
    if ctx.devices is None:
        return None
    device = ctx.devices.lookup(str(path))
    if device is None:
        return None
    if device.direction != "in":
        raise UnboundDevice(f"cannot read from output device at {path}")
    ctx.count("device_read")
    return device.read()


def _force_at(scope_stack: list[Node], path: Path, ctx: EvalContext) -> Optional[Node]:
    """Resolve ``path`` from ``scope_stack[0]`` and force the target: call it
    if it is a filled function instance, evaluate it if it is a term.
    Returns the in-tree node, or None when the path does not resolve."""
    chain = resolve_chain(scope_stack[0], path)
    if chain is None:
        return None
    target = chain[-1]
    key = (id(scope_stack[0]), str(path))
    if key in ctx.in_progress:
        raise CyclicReference(f"reference cycle through {path}")
    ctx.in_progress.add(key)
    try:
        enclosing = list(reversed(chain[:-1])) + list(scope_stack)
        with ctx.using_scopes(enclosing):
            if is_function_instance(target) and instance_args_ready(target) is None:
                from .templates import call

                call(target, ctx)
            else:
                evaluate(target, ctx)
    finally:
        ctx.in_progress.discard(key)
    return target


def tree_data_of(root: Node, at: Path, ctx: Optional[EvalContext] = None) -> Node:
    """Contents of the node at ``at`` below ``root`` (the in-tree node,
    evaluated and memoized when it was a term)."""
    if ctx is None:
        ctx = EvalContext(root)
    device = _device_read(ctx, at)
    if device is not None:
        return device
    if ctx.scopes and ctx.scopes[0] is root:
        stack = list(ctx.scopes)
    else:
        stack = [root] + list(ctx.scopes)
    target = _force_at(stack, at, ctx)
    if target is None:
        raise PathUnresolvable(str(at))
    return target


def deref(path: Path, ctx: EvalContext) -> Node:
    """Contents of the addressed node, searched innermost scope first,
    returned as a fresh copy (a term consumes a value, not an alias)."""
    device = _device_read(ctx, path)
    if device is not None:
        return device
    for i in range(len(ctx.scopes)):
        target = _force_at(ctx.scopes[i:], path, ctx)
        if target is not None:
            return target.copy()
    raise PathUnresolvable(str(path))


# --- the evaluator ----------------------------------------------------------


def evaluate(node: Node, ctx: EvalContext) -> Node:
    """Reduce ``node`` to a value in place and return it.

    Strict mode raises UnknownOperation for unresolvable identifiers and
    calls templates for known ones; lenient mode (the rewrite engine's
    ready-term sweep) fires built-ins whose operands are values and leaves
    everything else untouched.
    """
    kind = node.kind
    if kind in (LEAF, VAR, HOLE):
        return node
    if kind == REF:
        value = deref(node.ref, ctx)
        ctx.spend()
        ctx.count("deref")
        return node.become(value)
    if is_function_instance(node):
        return node
    op = node.op
    if op is None:
        for _, child in node.children:
            evaluate(child, ctx)
        return node
    if op == "if":
        return _eval_if(node, ctx)
    if op == "select":
        return _eval_select(node, ctx)
    if op in algebra.BUILTIN_OPS:
        return _eval_eager(node, ctx)
    if op.startswith("$"):
        raise UnboundVariable(f"function variable {op} outside a rewrite rule")
    if not ctx.strict:
        for _, child in node.children:
            evaluate(child, ctx)
        return node
    return _eval_call(node, ctx)


def _fire(node: Node, result: Node, ctx: EvalContext) -> Node:
    ctx.spend()
    ctx.count("op")
    return node.become(result)


def _eval_if(node: Node, ctx: EvalContext) -> Node:
    if len(node.children) != 3:
        raise EvalError(f"if expects 3 operands, got {len(node.children)}")
    cond = evaluate(node.children[0][1], ctx)
    if not ctx.strict and not is_value(cond):
        return node
    branch = node.children[1][1] if algebra._bool(cond, "if") else node.children[2][1]
    evaluate(branch, ctx)
    if not ctx.strict and not is_value(branch):
        return node
    return _fire(node, branch, ctx)


def _eval_select(node: Node, ctx: EvalContext) -> Node:
    if len(node.children) != 2:
        raise EvalError(f"select expects 2 operands, got {len(node.children)}")
    source = evaluate(node.children[0][1], ctx)
    if not ctx.strict and not is_value(source):
        return node
    result = algebra.select(source, node.children[1][1], ctx)
    return _fire(node, result, ctx)


def _eval_eager(node: Node, ctx: EvalContext) -> Node:
    for _, child in node.children:
        evaluate(child, ctx)
    if not ctx.strict and not all(is_value(child) for _, child in node.children):
        return node
    result = algebra.apply_builtin(node.op, [child for _, child in node.children])
    return _fire(node, result, ctx)


def _eval_call(node: Node, ctx: EvalContext) -> Node:
    from .templates import bind_operands, call, lookup_template

    template = lookup_template(node.op, ctx)
    if template is None:
        raise UnknownOperation(f"unknown operation {node.op!r}")
    for _, child in node.children:
        evaluate(child, ctx)
    instance = template.copy()
    bind_operands(instance, [child for _, child in node.children])
    call(instance, ctx)
    ctx.count("call")
    return node.become(instance)
