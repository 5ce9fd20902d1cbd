"""Statement-tree data model for unit-test bodies.

A test body is an ordered forest of statements. Statements that can contain
nested statements (``if``, loops, ``try``, blocks, ...) are *tree statements*;
everything else (expression statements, declarations, ``return``, ...) is a
*non-tree statement*, i.e. a leaf. The category is decided purely by the
statement kind, never by whether children happen to be present: an ``if`` with
an empty body is still a tree statement.

Invariants enforced on construction:

- node ids form the contiguous range ``0..n-1``,
- leaves have no children,
- child spans nest strictly inside their parent's span,
- sibling spans (including the roots) are disjoint and in source order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator


class StmtKind(Enum):
    """Statement kinds of the supported grammar subset."""

    EXPRESSION = "ExpressionStmt"
    LOCAL_DECLARATION = "LocalDeclaration"
    RETURN = "Return"
    THROW = "Throw"
    BREAK = "Break"
    CONTINUE = "Continue"
    EMPTY = "EmptyStmt"
    IF = "If"
    FOR = "For"
    FOR_EACH = "ForEach"
    WHILE = "While"
    DO_WHILE = "DoWhile"
    TRY = "Try"
    SYNCHRONIZED = "SynchronizedBlock"
    BLOCK = "Block"
    LABELED = "LabeledStmt"


#: Kinds that may contain nested statements.
TREE_KINDS = frozenset(
    {
        StmtKind.IF,
        StmtKind.FOR,
        StmtKind.FOR_EACH,
        StmtKind.WHILE,
        StmtKind.DO_WHILE,
        StmtKind.TRY,
        StmtKind.SYNCHRONIZED,
        StmtKind.BLOCK,
        StmtKind.LABELED,
    }
)


class Category(Enum):
    TREE = "TreeStmt"
    NON_TREE = "NonTreeStmt"


class ModelError(ValueError):
    """Violation of a statement-tree invariant."""


class NotAncestorClosedError(ModelError):
    """A retained set kept a node while dropping one of its ancestors."""

    def __init__(self, node_id: int):
        self.node_id = node_id
        super().__init__(f"retained set is not ancestor-closed: node {node_id} "
                         f"is retained but an ancestor is not")


@dataclass(frozen=True)
class StatementNode:
    """One statement in a test body.

    ``span`` is a half-open ``[start, end)`` index range into the owning
    test's source text. ``children`` holds ids of directly nested statements,
    in source order; it is empty for every non-tree statement.
    """

    id: int
    kind: StmtKind
    span: tuple[int, int]
    children: tuple[int, ...] = ()
    parent: int | None = None

    @property
    def category(self) -> Category:
        return Category.TREE if self.kind in TREE_KINDS else Category.NON_TREE

    @property
    def is_leaf_kind(self) -> bool:
        return self.kind not in TREE_KINDS


@dataclass(frozen=True)
class TestCaseAst:
    """A named test with an ordered forest of statements.

    ``statements`` is indexed by node id (ids are contiguous from 0, assigned
    in depth-first pre-order by the parser). Instances are immutable and safe
    to share between threads.
    """

    __test__ = False  # domain type, not a pytest suite

    test_name: str
    source: str
    statements: tuple[StatementNode, ...]
    roots: tuple[int, ...]
    project: str = ""

    def __post_init__(self) -> None:
        _validate(self)

    # -- lookups ---------------------------------------------------------

    def node(self, node_id: int) -> StatementNode:
        return self.statements[node_id]

    @property
    def total_statements(self) -> int:
        return len(self.statements)

    def all_ids(self) -> frozenset[int]:
        return frozenset(range(len(self.statements)))

    def subtree_ids(self, node_id: int) -> frozenset[int]:
        """The node itself plus every transitive descendant."""
        out = []
        stack = [node_id]
        while stack:
            cur = stack.pop()
            out.append(cur)
            stack.extend(self.statements[cur].children)
        return frozenset(out)

    def ancestors(self, node_id: int) -> Iterator[int]:
        cur = self.statements[node_id].parent
        while cur is not None:
            yield cur
            cur = self.statements[cur].parent

    def ancestor_closure(self, ids: Iterable[int]) -> frozenset[int]:
        """Smallest ancestor-closed superset of ``ids``."""
        closed = set(ids)
        for node_id in list(closed):
            closed.update(self.ancestors(node_id))
        return frozenset(closed)

    def is_ancestor_closed(self, retained: Iterable[int]) -> bool:
        kept = set(retained)
        return all(
            self.statements[i].parent is None or self.statements[i].parent in kept
            for i in kept
        )


def count_categories(ast: TestCaseAst) -> tuple[int, int, int]:
    """Return ``(stmts, ntn, tn)``: total, leaf, and tree statement counts.

    Counts include nested statements at every depth.
    """
    tn = sum(1 for node in ast.statements if node.category is Category.TREE)
    return len(ast.statements), len(ast.statements) - tn, tn


def render(ast: TestCaseAst, retained: Iterable[int]) -> str:
    """Materialize the test text with all non-retained statements deleted.

    ``retained`` must be ancestor-closed (a kept statement may not lose an
    enclosing statement). Retained tree statements keep their header and
    braces even when every child is removed, so an emptied ``if`` survives as
    ``if (cond) { }``.
    """
    kept = set(retained)
    for node_id in kept:
        node = ast.statements[node_id]
        if node.parent is not None and node.parent not in kept:
            raise NotAncestorClosedError(node_id)

    # Removal is subtree-wise, so deleting the spans of *maximal* removed
    # nodes (those whose parent survives) deletes exactly the removed set.
    cut_spans = sorted(
        node.span
        for node in ast.statements
        if node.id not in kept and (node.parent is None or node.parent in kept)
    )
    pieces = []
    pos = 0
    for start, end in cut_spans:
        pieces.append(ast.source[pos:start])
        pos = end
    pieces.append(ast.source[pos:])
    return "".join(pieces)


def _validate(ast: TestCaseAst) -> None:
    n = len(ast.statements)
    for index, node in enumerate(ast.statements):
        if node.id != index:
            raise ModelError(f"statement ids must be contiguous from 0; "
                             f"position {index} holds id {node.id}")
        start, end = node.span
        if not (0 <= start <= end <= len(ast.source)):
            raise ModelError(f"node {node.id}: span {node.span} outside source")
        if node.is_leaf_kind and node.children:
            raise ModelError(f"node {node.id}: {node.kind.value} is a leaf kind "
                             f"but has children")
        for child_id in node.children:
            if not 0 <= child_id < n:
                raise ModelError(f"node {node.id}: child {child_id} out of range")
            child = ast.statements[child_id]
            if child.parent != node.id:
                raise ModelError(f"node {child_id}: parent link does not match "
                                 f"its position under node {node.id}")
            if not (start < child.span[0] and child.span[1] < end):
                raise ModelError(f"node {child_id}: span {child.span} not strictly "
                                 f"inside parent span {node.span}")
        _check_sibling_order(ast, node.children, f"children of node {node.id}")

    for root_id in ast.roots:
        if ast.statements[root_id].parent is not None:
            raise ModelError(f"root {root_id} has a parent")
    _check_sibling_order(ast, ast.roots, "roots")

    reachable = set()
    for root_id in ast.roots:
        for node_id in ast.subtree_ids(root_id):
            if node_id in reachable:
                raise ModelError(f"node {node_id} reachable twice")
            reachable.add(node_id)
    if len(reachable) != n:
        raise ModelError("statements not reachable from roots: "
                         f"{sorted(set(range(n)) - reachable)}")


def _check_sibling_order(ast: TestCaseAst, ids: tuple[int, ...], what: str) -> None:
    prev_end = -1
    for node_id in ids:
        start, end = ast.statements[node_id].span
        if start < prev_end:
            raise ModelError(f"{what}: spans overlap or are out of source order")
        prev_end = end
