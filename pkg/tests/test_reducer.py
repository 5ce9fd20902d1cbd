import random
import sys
import textwrap

import pytest

from redustat.model import count_categories
from redustat.oracle import (
    MatchPolicy,
    OracleConfig,
    OriginalDoesNotFailError,
    ScriptedOracle,
    VerdictStatus,
    baseline_signature,
    evaluate,
)
from redustat.parser import parse_test, token_texts
from redustat.reducer import (
    RemovalOrder,
    TooLargeError,
    brute_force_minimal,
    reduce_test,
    reduction_pass,
    verify_one_minimal,
)

from conftest import random_ast


def scripted(*sets, blockers=()):
    return ScriptedOracle(failure_sets=tuple(frozenset(s) for s in sets),
                          blockers=frozenset(blockers))


def test_flat_singleton_cause(flat_five):
    outcome = reduce_test(flat_five, scripted({3}))
    assert outcome.retained == {3}
    assert outcome.removed == {0, 1, 2, 4}
    assert outcome.removed_ntn == 4 and outcome.removed_tn == 0
    assert evaluate(scripted({3}), outcome.retained).status is VerdictStatus.FAIL


def test_ancestor_must_stay_retained():
    # If(children 1, 2) plus trailing leaf 3; the failure needs only node 2
    ast = parse_test("if (a) { one();\n two(); }\nthree();\n")
    outcome = reduce_test(ast, scripted({2}))
    assert outcome.retained == {0, 2}
    assert outcome.removed == {1, 3}
    assert outcome.removed_ntn == 2 and outcome.removed_tn == 0
    assert brute_force_minimal(ast, scripted({2})) == {0, 2}


def test_thirteen_leaf_flat_with_six_leaf_cause():
    ast = parse_test("\n".join(f"s{i}();" for i in range(13)))
    cause = {1, 3, 5, 7, 9, 11}
    outcome = reduce_test(ast, scripted(cause))
    assert outcome.retained == cause
    stmts, _, _ = count_categories(ast)
    ars = len(outcome.removed)
    assert ars == 7
    assert abs(ars / stmts * 100 - 53.84) < 0.01


def test_minimal_source_still_fails_and_reparses(flat_five):
    oracle = scripted({1, 4})
    outcome = reduce_test(flat_five, oracle)
    assert outcome.retained == {1, 4}
    reparsed = parse_test(outcome.minimal_source)
    assert count_categories(reparsed) == (2, 2, 0)


def test_outcome_bookkeeping(flat_five):
    outcome = reduce_test(flat_five, scripted({0}))
    assert outcome.retained | outcome.removed == flat_five.all_ids()
    assert not outcome.retained & outcome.removed
    assert outcome.removed_ntn + outcome.removed_tn == len(outcome.removed)
    assert outcome.oracle_calls <= outcome.passes * 5 + 1
    assert outcome.wall_time_ms >= 0
    trace_ids = [entry.node_id for entry in outcome.trace]
    assert set(trace_ids) <= flat_five.all_ids()


def test_report_schema(flat_five):
    report = reduce_test(flat_five, scripted({2})).to_report()
    assert report["retained"] == [2]
    assert report["removed"] == [0, 1, 3, 4]
    assert report["baseline_signature"] == "scripted"
    assert all(entry["decision"] in ("accepted", "rejected")
               for entry in report["trace"])
    assert all(entry["verdict"] in ("Fail", "Pass", "Invalid")
               for entry in report["trace"])


def test_original_must_fail(flat_five):
    with pytest.raises(OriginalDoesNotFailError):
        reduce_test(flat_five, scripted({17}))


def test_pass_on_one_minimal_set_is_fixpoint(flat_five):
    oracle = scripted({2})
    retained, changed = reduction_pass(flat_five, oracle, frozenset({2}),
                                       RemovalOrder.LEAVES_FIRST)
    assert retained == {2}
    assert not changed


def test_subtrees_first_needs_fewer_calls_than_leaves_first():
    source = "if (a) { x();\n y(); }\nz();\n"
    oracle = scripted({3})

    def calls_with(order):
        ast = parse_test(source)
        baseline = baseline_signature(oracle, ast)
        counter = CountingOracle(failure_sets=oracle.failure_sets)
        retained = ast.all_ids()
        while True:
            retained, changed = reduction_pass(ast, counter, retained, order,
                                               baseline)
            if not changed:
                break
        return counter.calls, retained

    subtree_calls, subtree_result = calls_with(RemovalOrder.SUBTREES_FIRST)
    leaf_calls, leaf_result = calls_with(RemovalOrder.LEAVES_FIRST)
    assert subtree_result == leaf_result == {3}
    assert subtree_calls < leaf_calls


class CountingOracle(ScriptedOracle):
    """Scripted oracle that counts evaluations."""

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "calls", 0)

    def fails(self, retained):
        object.__setattr__(self, "calls", self.calls + 1)
        return super().fails(retained)


def test_any_order_reaches_same_fixpoint_for_monotone_oracles():
    rng = random.Random(21)
    for _ in range(50):
        ast = random_ast(rng)
        ids = sorted(ast.all_ids())
        cause = frozenset(rng.sample(ids, rng.randint(1, min(3, len(ids)))))
        oracle = scripted(cause)
        results = set()
        for order in RemovalOrder:
            retained = ast.all_ids()
            while True:
                retained, changed = reduction_pass(ast, oracle, retained, order,
                                                   "scripted")
                if not changed:
                    break
            results.add(retained)
        assert len(results) == 1
        assert results.pop() == ast.ancestor_closure(cause)


def test_brute_force_trivial_cases(flat_five):
    assert brute_force_minimal(flat_five, scripted({3})) == {3}
    assert brute_force_minimal(flat_five, scripted({1, 4})) == {1, 4}


def test_brute_force_tie_breaks_lexicographically(flat_five):
    oracle = scripted({4}, {1})  # two singleton causes; {1} sorts first
    assert brute_force_minimal(flat_five, oracle) == {1}


def test_brute_force_bound():
    ast = parse_test("\n".join(f"s{i}();" for i in range(21)))
    with pytest.raises(TooLargeError):
        brute_force_minimal(ast, scripted({0}))


def test_greedy_is_one_minimal_but_not_always_minimum(flat_five):
    # Two overlapping causes: the descending sweep commits to {0, 1} even
    # though {3} alone is smaller. 1-minimality still holds; global
    # minimality is only guaranteed for single-failure-set oracles.
    oracle = scripted({0, 1}, {3})
    outcome = reduce_test(flat_five, oracle)
    assert outcome.retained == {0, 1}
    assert verify_one_minimal(flat_five, oracle, outcome.retained)
    assert brute_force_minimal(flat_five, oracle) == {3}


def test_empty_retained_set_is_reachable():
    ast = parse_test("a();\n")
    oracle = scripted({0})
    outcome = reduce_test(ast, oracle)
    assert outcome.retained == {0}  # removing everything would pass


def test_blockers_keep_soundness_and_one_minimality():
    rng = random.Random(22)
    for _ in range(100):
        ast = random_ast(rng, max_statements=10)
        ids = sorted(ast.all_ids())
        cause = frozenset(rng.sample(ids, rng.randint(1, min(2, len(ids)))))
        blockers = frozenset(rng.sample(ids, min(len(ids), rng.randint(2, 3))))
        oracle = scripted(cause, blockers=blockers)
        outcome = reduce_test(ast, oracle)
        assert evaluate(oracle, outcome.retained).status is VerdictStatus.FAIL
        assert verify_one_minimal(ast, oracle, outcome.retained,
                                  baseline="scripted")


def test_invalid_candidates_keep_statements(tmp_path):
    # the command oracle reports Invalid unless node 2 ("third") is retained,
    # and fails only while "second" is present: Invalid must not be treated
    # as a successful removal
    script = tmp_path / "oracle.py"
    script.write_text(textwrap.dedent(
        """\
        import sys
        text = open(sys.argv[1], encoding="utf-8").read()
        if "third();" not in text:
            sys.exit(9)
        if "second();" in text:
            print("AssertionError: still broken")
            sys.exit(1)
        sys.exit(0)
        """
    ), encoding="utf-8")
    config = OracleConfig(
        command_template=f"{sys.executable} {script} {{candidate}}",
        workdir=str(tmp_path),
        signature_pattern=r"AssertionError[^\n]*",
        match_policy=MatchPolicy.SAME_SIGNATURE,
    )
    ast = parse_test("first();\nsecond();\nthird();\n", test_name="inv")
    outcome = reduce_test(ast, config)
    assert outcome.retained == {1, 2}
    assert any(entry.status is VerdictStatus.INVALID for entry in outcome.trace)


def test_reduction_with_command_oracle_end_to_end(tmp_path):
    script = tmp_path / "oracle.py"
    script.write_text(textwrap.dedent(
        """\
        import sys
        text = open(sys.argv[1], encoding="utf-8").read()
        if "mustKeep();" in text:
            print("AssertionError: expected:<a> but was:<b>")
            sys.exit(1)
        sys.exit(0)
        """
    ), encoding="utf-8")
    config = OracleConfig(
        command_template=f"{sys.executable} {script} {{candidate}}",
        workdir=str(tmp_path),
        signature_pattern=r"AssertionError[^\n]*",
        match_policy=MatchPolicy.SAME_SIGNATURE,
    )
    ast = parse_test(
        "prepare();\nif (ready) { mustKeep();\n other(); }\ncleanup();\n",
        test_name="e2e",
    )
    outcome = reduce_test(ast, config)
    assert token_texts(outcome.minimal_source) == token_texts(
        "if (ready) { mustKeep(); }")
    assert outcome.removed_ntn == 3 and outcome.removed_tn == 0
