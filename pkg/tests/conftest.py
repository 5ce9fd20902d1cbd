"""Shared helpers: deterministic random test-body generation.

The generator mirrors the supported grammar (leaves plus braced tree
statements) so parser, reducer and acceptance tests all draw from the same
instance space: bounded statement count, bounded nesting depth.
"""

from __future__ import annotations

import random

import pytest

from redustat.model import TestCaseAst
from redustat.parser import parse_test

_LEAVES = (
    "int v{k} = {n};",
    "helper{k}(v{p});",
    "assertEquals({n}, v{p});",
    "values.add({n});",
    "obj.method{k}();",
)

_TREES = ("if", "for", "foreach", "while", "try")


def random_test_source(rng: random.Random, max_statements: int = 12,
                       max_depth: int = 3) -> str:
    counter = 0

    def leaf() -> list[str]:
        nonlocal counter
        counter += 1
        template = rng.choice(_LEAVES)
        return [template.format(k=counter, p=max(counter - 1, 0),
                                n=rng.randint(0, 99))]

    def tree(body: list[list[str]]) -> list[str]:
        nonlocal counter
        counter += 1
        k = counter
        lines = ["    " + line for group in body for line in group]
        shape = rng.choice(_TREES)
        if shape == "if":
            return [f"if (flag{k}) {{"] + lines + ["}"]
        if shape == "for":
            return [f"for (int i{k} = 0; i{k} < {rng.randint(2, 5)}; i{k}++) {{"] + lines + ["}"]
        if shape == "foreach":
            return [f"for (String s{k} : items) {{"] + lines + ["}"]
        if shape == "while":
            return [f"while (more{k}()) {{"] + lines + ["}"]
        split = len(body) // 2
        first = ["    " + line for group in body[:split] for line in group]
        second = ["    " + line for group in body[split:] for line in group]
        return ["try {"] + first + [f"}} catch (Exception e{k}) {{"] + second + ["}"]

    def statements(budget: int, depth: int) -> tuple[list[list[str]], int]:
        groups: list[list[str]] = []
        used = 0
        while used < budget:
            remaining = budget - used
            if depth < max_depth and remaining >= 2 and rng.random() < 0.4:
                inner, inner_used = statements(rng.randint(1, min(remaining - 1, 4)),
                                               depth + 1)
                groups.append(tree(inner))
                used += inner_used + 1
            else:
                groups.append(leaf())
                used += 1
        return groups, used

    total = rng.randint(1, max_statements)
    groups, _ = statements(total, 1)
    return "\n".join(line for group in groups for line in group) + "\n"


def random_ast(rng: random.Random, max_statements: int = 12,
               max_depth: int = 3, test_name: str = "random") -> TestCaseAst:
    return parse_test(random_test_source(rng, max_statements, max_depth),
                      test_name=test_name)


@pytest.fixture
def flat_five() -> TestCaseAst:
    return parse_test("a();\nb();\nc();\nd();\ne();\n", test_name="flat5")
