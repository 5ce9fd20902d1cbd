import random

import pytest

from redustat.model import (
    Category,
    ModelError,
    NotAncestorClosedError,
    StatementNode,
    StmtKind,
    TestCaseAst,
    TREE_KINDS,
    count_categories,
    render,
)
from redustat.parser import parse_test, token_texts

from conftest import random_ast


def test_category_is_decided_by_kind_alone():
    for kind in StmtKind:
        node = StatementNode(id=0, kind=kind, span=(0, 1))
        expected = Category.TREE if kind in TREE_KINDS else Category.NON_TREE
        assert node.category is expected


def test_tree_kinds_are_exactly_the_nesting_statements():
    assert {k.value for k in TREE_KINDS} == {
        "If", "For", "ForEach", "While", "DoWhile", "Try",
        "SynchronizedBlock", "Block", "LabeledStmt",
    }


def test_count_categories_leaf_only_body():
    ast = parse_test("int x = 1; assertEquals(1, x);")
    assert count_categories(ast) == (2, 2, 0)


def test_count_categories_if_with_two_children():
    ast = parse_test("if (a) { foo(); bar(); }")
    assert count_categories(ast) == (3, 2, 1)


def test_count_categories_thirteen_leaf_flat_body():
    # same shape as the widest leaf-only corpus row: 13 statements, no trees
    ast = parse_test("\n".join(f"check{i}();" for i in range(13)))
    assert count_categories(ast) == (13, 13, 0)


def test_count_categories_seven_statement_tree_with_one_tree_stmt():
    # 7 statements of which 6 leaves and 1 tree statement
    ast = parse_test(
        "setUp();\n"
        "int x = 1;\n"
        "try {\n"
        "    mightThrow(x);\n"
        "    fail();\n"
        "} catch (Exception e) {\n"
        "    log(e);\n"
        "}\n"
        "tearDown();\n"
    )
    assert count_categories(ast) == (7, 6, 1)


def test_count_categories_empty_body():
    ast = parse_test("")
    assert count_categories(ast) == (0, 0, 0)


def test_counts_match_independent_recursive_tally():
    rng = random.Random(7)
    for _ in range(100):
        ast = random_ast(rng)

        def tally(node_id):
            node = ast.node(node_id)
            total = 1
            leaves = 0 if node.kind in TREE_KINDS else 1
            for child in node.children:
                sub_total, sub_leaves = tally(child)
                total += sub_total
                leaves += sub_leaves
            return total, leaves

        total = leaves = 0
        for root in ast.roots:
            t, l = tally(root)
            total += t
            leaves += l
        stmts, ntn, tn = count_categories(ast)
        assert stmts == total
        assert ntn == leaves
        assert tn == total - leaves


def test_category_partition_is_total():
    rng = random.Random(8)
    for _ in range(50):
        ast = random_ast(rng)
        stmts, ntn, tn = count_categories(ast)
        assert stmts == ntn + tn == ast.total_statements


def test_render_identity_keeps_all_tokens(flat_five):
    assert token_texts(render(flat_five, flat_five.all_ids())) == \
        token_texts(flat_five.source)


def test_render_empty_retained_set_is_empty_body(flat_five):
    assert token_texts(render(flat_five, set())) == []


def test_render_keeps_empty_shell_of_tree_statement():
    ast = parse_test("if (a) { foo(); bar(); }")
    shell = render(ast, {0})
    reparsed = parse_test(shell)
    assert count_categories(reparsed) == (1, 0, 1)
    assert reparsed.statements[0].kind is StmtKind.IF


def test_render_rejects_non_ancestor_closed_set():
    ast = parse_test("if (a) { foo(); }")
    with pytest.raises(NotAncestorClosedError) as info:
        render(ast, {1})
    assert info.value.node_id == 1


def test_render_removed_subtree_drops_descendants():
    ast = parse_test("if (a) { foo(); bar(); }\nafter();\n")
    kept = render(ast, {3})
    assert token_texts(kept) == token_texts("after();")


def test_parse_render_round_trip_is_isomorphic():
    rng = random.Random(9)
    for _ in range(100):
        ast = random_ast(rng)
        reparsed = parse_test(render(ast, ast.all_ids()))
        assert _shape(ast) == _shape(reparsed)


def test_count_additivity_over_random_splits():
    rng = random.Random(10)
    for _ in range(50):
        ast = random_ast(rng)
        ids = sorted(ast.all_ids())
        removed = {i for i in ids if rng.random() < 0.5}
        removed_tn = sum(1 for i in removed
                         if ast.node(i).category is Category.TREE)
        removed_ntn = sum(1 for i in removed
                          if ast.node(i).category is Category.NON_TREE)
        assert removed_ntn + removed_tn == len(removed)


def test_subtree_ids_and_ancestors():
    ast = parse_test("if (a) { x(); if (b) { y(); } }\nz();\n")
    # ids: 0=outer if, 1=x, 2=inner if, 3=y, 4=z
    assert ast.subtree_ids(0) == {0, 1, 2, 3}
    assert ast.subtree_ids(2) == {2, 3}
    assert list(ast.ancestors(3)) == [2, 0]
    assert ast.ancestor_closure({3}) == {0, 2, 3}
    assert ast.is_ancestor_closed({0, 2, 3})
    assert not ast.is_ancestor_closed({2, 3})


def test_construction_rejects_bad_ids():
    with pytest.raises(ModelError):
        TestCaseAst(
            test_name="bad",
            source="a();",
            statements=(StatementNode(id=1, kind=StmtKind.EXPRESSION, span=(0, 4)),),
            roots=(1,),
        )


def test_construction_rejects_leaf_with_children():
    nodes = (
        StatementNode(id=0, kind=StmtKind.RETURN, span=(0, 9), children=(1,)),
        StatementNode(id=1, kind=StmtKind.EXPRESSION, span=(2, 6), parent=0),
    )
    with pytest.raises(ModelError):
        TestCaseAst(test_name="bad", source="return x;", statements=nodes, roots=(0,))


def _shape(ast):
    return [
        (node.kind, tuple(node.children), node.parent)
        for node in ast.statements
    ]
