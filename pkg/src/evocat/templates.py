"""Function and type templates, and the heap appliance.

A template is an ordinary subtree shaped like a callable frame: ``args``
(argument slots holding ``$`` placeholders), ``mode`` (0 sequential,
1 rewrite), ``body`` or ``rules``, and a reserved ``result`` slot.  Use is
always by copy: the instance is filled in and called, and the result value
replaces the instance node; the template itself never changes.  A type
template is the same idea for data: a set of field slots whose members may
themselves be callable (the instance's member functions see the enclosing
instance's fields through the reference scope chain).

The heap appliance stores items as the unlabeled children of its ``data``
child in implicit binary-heap order (children of slot k live at 2k+1 and
2k+2), ordered by the instance's ``compare`` function when it has one and
by natural-number ``<`` otherwise.
"""

from __future__ import annotations

from importlib import resources
from typing import Optional, Union

from .engine import run_rewrite, run_sequential
from .errors import (
    CompareFailed,
    DuplicateSibling,
    EmptyHeap,
    EvalError,
    EvoError,
    MissingArgument,
    NotASet,
    PathUnresolvable,
)
from .evaluator import (
    MODE_SEQUENTIAL,
    EvalContext,
    instance_args_ready,
    is_function_instance,
)
from .tree import LEAF, SET, Node, Path, StateTree, resolve

from . import textio


def instantiate(source: Union[StateTree, Node], path: Union[Path, str]) -> Node:
    """Deep-copy the template subtree at ``path``; the copy is detached and
    later writes to it never touch the template."""
    root = source.root if isinstance(source, StateTree) else source
    if isinstance(path, str):
        path = Path.parse(path)
    node = resolve(root, path)
    if node is None:
        raise PathUnresolvable(str(path))
    if node.kind != SET:
        raise NotASet(f"{path} is not a template set node")
    return node.copy()


def lookup_template(name: str, ctx: EvalContext) -> Optional[Node]:
    """Resolve an operation identifier to a template, innermost scope first."""
    for scope in ctx.scopes:
        if scope.kind != SET:
            continue
        child = scope.child(name)
        if child is not None and is_function_instance(child):
            return child
    return None


def bind_operands(instance: Node, operands: list[Node]) -> None:
    """Fill the instance's argument slots positionally with copies."""
    args = instance.child("args")
    if args is None or args.kind != SET:
        raise EvalError("instance has no argument set")
    if len(operands) != len(args.children):
        raise MissingArgument(
            f"call provides {len(operands)} operands for {len(args.children)} slots"
        )
    args.children = [
        (label, operand.copy())
        for (label, _), operand in zip(args.children, operands)
    ]


def assign_argument(instance: Node, label: str, value: Node) -> None:
    """Fill one named argument slot; the slot must exist."""
    args = instance.child("args")
    if args is None or args.kind != SET:
        raise EvalError("instance has no argument set")
    if args.child(label) is None:
        raise MissingArgument(f"no argument slot named {label!r}")
    args.set_child(label, value.copy())


def call(instance: Node, ctx: EvalContext) -> Node:
    """Run a filled instance and replace it with its result value.

    The instance frame becomes the innermost reference scope; its body
    executes under the engine selected by ``mode``.  Afterwards the value
    of the ``result`` slot takes the instance node's place and is returned.
    """
    if not is_function_instance(instance):
        raise EvalError("call target is not a function instance")
    unfilled = instance_args_ready(instance)
    if unfilled is not None:
        raise MissingArgument(f"argument slot {unfilled!r} is still empty")
    ctx.spend()
    mode = instance.child("mode").value
    with ctx.scopes_pushed([instance]):
        if mode == MODE_SEQUENTIAL:
            run_sequential(instance.child("body"), instance, ctx)
        else:
            run_rewrite(instance.child("rules"), instance, ctx)
    result = instance.child("result")
    if result is None:
        raise EvalError("instance lost its result slot")
    return instance.become(result)


def run_entry(
    root: Union[StateTree, Node],
    entry: Union[Path, str],
    arguments: Optional[dict[str, Node]] = None,
    ctx: Optional[EvalContext] = None,
) -> Node:
    """Instantiate the template at ``entry``, fill named argument slots,
    call it, and return the result value.  The machine tree is the
    outermost scope of the run."""
    root_node = root.root if isinstance(root, StateTree) else root
    if ctx is None:
        ctx = EvalContext(root_node)
    instance = instantiate(root_node, entry)
    if not is_function_instance(instance):
        raise NotASet(f"{entry} is not a function template")
    for label, value in (arguments or {}).items():
        assign_argument(instance, label, value)
    if ctx.scopes and ctx.scopes[0] is root_node:
        return call(instance, ctx)
    with ctx.scopes_pushed([root_node]):
        return call(instance, ctx)


# --- program assembly ---------------------------------------------------------


def merge_program(base: StateTree, program: Union[StateTree, Node]) -> StateTree:
    """Adjoin a program's top-level entries to the machine root; a
    duplicate top-level label is a load error, not a shadowing."""
    node = program.root if isinstance(program, StateTree) else program
    if node.kind != SET:
        raise NotASet("a program file must be a set of top-level entries")
    for label, child in node.children:
        if label is not None and base.root.child(label) is not None:
            raise DuplicateSibling(f"duplicate top-level label {label!r}")
        base.root.add_child(label, child)
    return base


def load_stdlib() -> StateTree:
    """The shipped template library: gcd, fact, div, Date, deriv, heap."""
    source = resources.files(__package__).joinpath("stdlib.evo").read_text("utf-8")
    return textio.parse(source)


# --- heap appliance -------------------------------------------------------------


def _heap_data(heap: Union[StateTree, Node]) -> Node:
    node = heap.root if isinstance(heap, StateTree) else heap
    data = node.child("data") if node.kind == SET else None
    if data is None or data.kind != SET:
        raise EvalError("not a heap appliance: no 'data' set")
    return data


def _heap_less(heap: Node, a: Node, b: Node, ctx: EvalContext) -> bool:
    compare = heap.child("compare")
    try:
        if compare is not None and is_function_instance(compare):
            instance = compare.copy()
            bind_operands(instance, [a, b])
            result = call(instance, ctx)
            if result.kind != LEAF or result.value not in (0, 1):
                raise EvalError("compare must return a boolean leaf")
            return bool(result.value)
        if a.kind != LEAF or b.kind != LEAF:
            raise EvalError("default compare orders natural-number leaves only")
        return a.value < b.value
    except EvoError as err:
        raise CompareFailed(f"compare failed: {err}") from err


def heap_put(heap: Union[StateTree, Node], item: Node, ctx: Optional[EvalContext] = None) -> None:
    """Insert a copy of ``item`` and restore heap order."""
    node = heap.root if isinstance(heap, StateTree) else heap
    if ctx is None:
        ctx = EvalContext(node)
    data = _heap_data(heap)
    data.children.append((None, item.copy()))
    slots = data.children
    i = len(slots) - 1
    while i > 0:
        parent = (i - 1) // 2
        if _heap_less(node, slots[i][1], slots[parent][1], ctx):
            slots[i], slots[parent] = slots[parent], slots[i]
            i = parent
        else:
            break


def heap_get(heap: Union[StateTree, Node], ctx: Optional[EvalContext] = None) -> Node:
    """Remove and return the minimum item under the heap's order."""
    node = heap.root if isinstance(heap, StateTree) else heap
    if ctx is None:
        ctx = EvalContext(node)
    data = _heap_data(heap)
    slots = data.children
    if not slots:
        raise EmptyHeap("get on an empty heap")
    top = slots[0][1]
    last = slots.pop()
    if slots:
        slots[0] = last
        i = 0
        n = len(slots)
        while True:
            left, right = 2 * i + 1, 2 * i + 2
            smallest = i
            if left < n and _heap_less(node, slots[left][1], slots[smallest][1], ctx):
                smallest = left
            if right < n and _heap_less(node, slots[right][1], slots[smallest][1], ctx):
                smallest = right
            if smallest == i:
                break
            slots[i], slots[smallest] = slots[smallest], slots[i]
            i = smallest
    return top
