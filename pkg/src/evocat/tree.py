"""The state tree: labeled ordered children, leaf naturals, path addressing.

A machine state is a tree.  Inner nodes are sets of labeled children (order
significant, labels unique among siblings, a child may also be unlabeled and
addressable only by position).  Leaves hold arbitrary-precision naturals.
Two further node kinds exist for programs: a reference ``[path]`` and a
pattern variable ``$x``; a fifth internal kind marks the hole of a
function-variable abstraction and never appears in files.

Addressing follows the usual path discipline: the empty path is the
identity, composition is concatenation, a label segment selects the child
with that label and an ordinal segment ``#k`` selects the k-th child by
position.  The one mutation primitive is subtree replacement, implemented
as in-place "becoming" so that views into a tree stay valid across
transitions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import (
    DuplicateSibling,
    NotASet,
    OrdinalInMeet,
    ParseError,
    PathUnresolvable,
)

# Node kinds
SET = "set"
LEAF = "leaf"
REF = "ref"
VAR = "var"
HOLE = "hole"

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_ORDINAL_RE = re.compile(r"#(\d+)\Z")

Segment = Union[str, int]


@dataclass(frozen=True)
class Path:
    """A composition of edge labels; the empty path is the identity."""

    segments: tuple[Segment, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "Path":
        """Parse dot notation: ``a.b.#1``.  ``""`` and ``"."`` are identity."""
        if text in ("", "."):
            return cls(())
        segs: list[Segment] = []
        for piece in text.split("."):
            m = _ORDINAL_RE.match(piece)
            if m:
                segs.append(int(m.group(1)))
            elif _IDENT_RE.match(piece):
                segs.append(piece)
            else:
                raise ParseError(f"invalid path segment {piece!r}")
        return cls(tuple(segs))

    @classmethod
    def of(cls, *segments: Segment) -> "Path":
        return cls(tuple(segments))

    def join(self, other: "Path") -> "Path":
        return Path(self.segments + other.segments)

    def child(self, seg: Segment) -> "Path":
        return Path(self.segments + (seg,))

    def parent(self) -> "Path":
        return Path(self.segments[:-1])

    def last(self) -> Segment:
        return self.segments[-1]

    def is_prefix_of(self, other: "Path") -> bool:
        return self.segments == other.segments[: len(self.segments)]

    def has_ordinals(self) -> bool:
        return any(isinstance(s, int) for s in self.segments)

    def __len__(self) -> int:
        return len(self.segments)

    def __bool__(self) -> bool:
        return bool(self.segments)

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.segments)

    def __str__(self) -> str:
        if not self.segments:
            return "."
        return ".".join(s if isinstance(s, str) else f"#{s}" for s in self.segments)


def compose(f: Path, g: Path) -> Path:
    """Path composition: segments of f followed by segments of g."""
    return f.join(g)


def meet(e: Path, c: Path) -> Path:
    """Longest common prefix of two label-only paths (their meet)."""
    if e.has_ordinals() or c.has_ordinals():
        raise OrdinalInMeet("meet is defined on label-only paths")
    common: list[Segment] = []
    for a, b in zip(e.segments, c.segments):
        if a != b:
            break
        common.append(a)
    return Path(tuple(common))


class Node:
    """A single vertex of the state tree.  Mutable; identity matters.

    ``children`` is a list of ``(label, node)`` pairs; a label of ``None``
    means the child is addressed only by its position.
    """

    __slots__ = ("kind", "value", "children", "op", "ref", "var")

    def __init__(
        self,
        kind: str,
        *,
        value: int = 0,
        children: Optional[list[tuple[Optional[str], "Node"]]] = None,
        op: Optional[str] = None,
        ref: Optional[Path] = None,
        var: Optional[str] = None,
    ):
        self.kind = kind
        self.value = value
        self.children: list[tuple[Optional[str], Node]] = children if children is not None else []
        self.op = op
        self.ref = ref
        self.var = var

    # --- constructors ---

    @classmethod
    def leaf(cls, value: int) -> "Node":
        if value < 0:
            raise ValueError("leaf values are naturals")
        return cls(LEAF, value=value)

    @classmethod
    def set_node(
        cls,
        children: Optional[list[tuple[Optional[str], "Node"]]] = None,
        op: Optional[str] = None,
    ) -> "Node":
        node = cls(SET, op=op)
        for label, child in children or []:
            node.add_child(label, child)
        return node

    @classmethod
    def ref_node(cls, path: Union[Path, str]) -> "Node":
        if isinstance(path, str):
            path = Path.parse(path)
        return cls(REF, ref=path)

    @classmethod
    def var_node(cls, name: str) -> "Node":
        return cls(VAR, var=name)

    @classmethod
    def hole(cls) -> "Node":
        return cls(HOLE)

    # --- children ---

    def labels(self) -> list[Optional[str]]:
        return [label for label, _ in self.children]

    def child(self, label: str) -> Optional["Node"]:
        for lab, node in self.children:
            if lab == label:
                return node
        return None

    def child_at(self, index: int) -> Optional["Node"]:
        if 0 <= index < len(self.children):
            return self.children[index][1]
        return None

    def index_of(self, label: str) -> Optional[int]:
        for i, (lab, _) in enumerate(self.children):
            if lab == label:
                return i
        return None

    def add_child(self, label: Optional[str], node: "Node") -> "Node":
        if label is not None and self.child(label) is not None:
            raise DuplicateSibling(f"duplicate sibling label {label!r}")
        self.children.append((label, node))
        return node

    def set_child(self, label: str, node: "Node") -> "Node":
        """Replace the child carrying ``label`` in place, or append it."""
        idx = self.index_of(label)
        if idx is None:
            self.children.append((label, node))
        else:
            self.children[idx][1].become(node)
            node = self.children[idx][1]
        return node

    # --- whole-node operations ---

    def copy(self) -> "Node":
        node = Node(self.kind, value=self.value, op=self.op, ref=self.ref, var=self.var)
        node.children = [(label, child.copy()) for label, child in self.children]
        return node

    def become(self, other: "Node") -> "Node":
        """Take over the content of ``other``; identity is preserved."""
        if other is self:
            return self
        self.kind = other.kind
        self.value = other.value
        self.children = other.children
        self.op = other.op
        self.ref = other.ref
        self.var = other.var
        return self

    def __repr__(self) -> str:  # debugging aid only
        if self.kind == LEAF:
            return f"<leaf {self.value}>"
        if self.kind == REF:
            return f"<ref [{self.ref}]>"
        if self.kind == VAR:
            return f"<var ${self.var}>"
        if self.kind == HOLE:
            return "<hole>"
        op = f" :{self.op}" if self.op else ""
        return f"<set{op} |{len(self.children)}|>"


def node_equal(a: Node, b: Node) -> bool:
    """Structural equality: kind, payload, labels and order, recursively."""
    if a is b:
        return True
    if a.kind != b.kind:
        return False
    if a.kind == LEAF:
        return a.value == b.value
    if a.kind == REF:
        return a.ref == b.ref
    if a.kind == VAR:
        return a.var == b.var
    if a.kind == HOLE:
        return True
    if a.op != b.op or len(a.children) != len(b.children):
        return False
    return all(
        la == lb and node_equal(ca, cb)
        for (la, ca), (lb, cb) in zip(a.children, b.children)
    )


def resolve(context: Node, path: Path) -> Optional[Node]:
    """Follow ``path`` from ``context``; None when any step fails."""
    node = context
    for seg in path:
        if node.kind != SET:
            return None
        if isinstance(seg, int):
            node = node.child_at(seg)
        else:
            node = node.child(seg)
        if node is None:
            return None
    return node


def resolve_chain(context: Node, path: Path) -> Optional[list[Node]]:
    """Like resolve, but returns every node along the way (target last)."""
    node = context
    chain: list[Node] = []
    for seg in path:
        if node.kind != SET:
            return None
        node = node.child_at(seg) if isinstance(seg, int) else node.child(seg)
        if node is None:
            return None
        chain.append(node)
    return chain


class StateTree:
    """A machine state: a root node plus path-addressed operations.

    Subtree views share nodes with the enclosing tree, so replacement
    through a view is visible outside it (and vice versa).
    """

    __slots__ = ("root",)

    def __init__(self, root: Optional[Node] = None):
        self.root = root if root is not None else Node.set_node()

    def resolve(self, path: Union[Path, str]) -> Optional[Node]:
        return resolve(self.root, _as_path(path))

    def replace(self, at: Union[Path, str], new: Node) -> "StateTree":
        return replace_subtree(self, _as_path(at), new)

    def view(self, at: Union[Path, str]) -> "StateTree":
        return subtree_view(self, _as_path(at))

    def data_of(self, at: Union[Path, str], ctx=None) -> Node:
        return data_of(self, _as_path(at), ctx)

    def render(self) -> str:
        from . import textio

        return textio.render(self)

    def copy(self) -> "StateTree":
        return StateTree(self.root.copy())


def _as_path(path: Union[Path, str]) -> Path:
    return Path.parse(path) if isinstance(path, str) else path


def _as_root(tree: Union[StateTree, Node]) -> Node:
    return tree.root if isinstance(tree, StateTree) else tree


def _contains(node: Node, target: Node) -> bool:
    if node is target:
        return True
    return any(_contains(child, target) for _, child in node.children)


def replace_subtree(tree: Union[StateTree, Node], at: Path, new: Node) -> StateTree:
    """Replace the subtree at ``at`` with ``new`` (insert when the final
    segment does not exist yet); all other nodes are untouched.

    ``new`` is adopted, not copied.  Adopting a node that still contains
    the node being replaced would tie the tree into a cycle, so that is
    rejected.
    """
    root = _as_root(tree)
    if not at:
        if new is not root and _contains(new, root):
            raise PathUnresolvable("replacement contains the node it replaces")
        root.become(new)
        return tree if isinstance(tree, StateTree) else StateTree(root)
    parent = resolve(root, at.parent())
    if parent is None:
        raise PathUnresolvable(f"no node at {at.parent()}")
    if parent.kind != SET:
        raise PathUnresolvable(f"{at.parent()} is not a set, cannot hold {at.last()!r}")
    seg = at.last()
    if isinstance(seg, int):
        existing = parent.child_at(seg)
        if existing is None and seg != len(parent.children):
            raise PathUnresolvable(f"no child #{seg} at {at.parent()}")
    else:
        existing = parent.child(seg)
    if existing is None:
        parent.add_child(seg if isinstance(seg, str) else None, new)
    else:
        if new is not existing and _contains(new, existing):
            raise PathUnresolvable("replacement contains the node it replaces")
        existing.become(new)
    return tree if isinstance(tree, StateTree) else StateTree(root)


def subtree_view(tree: Union[StateTree, Node], at: Path) -> StateTree:
    """A machine rooted at the subtree; shares structure with ``tree``."""
    root = _as_root(tree)
    node = resolve(root, at)
    if node is None:
        raise PathUnresolvable(str(at))
    if node.kind != SET:
        raise NotASet(f"{at} is not a set node")
    return StateTree(node)


def data_of(tree: Union[StateTree, Node], at: Path, ctx=None) -> Node:
    """Contents of the node at ``at``, evaluated if it is a term."""
    from .evaluator import tree_data_of

    return tree_data_of(_as_root(tree), at, ctx)
