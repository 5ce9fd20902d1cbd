#!/usr/bin/env python3
"""Fixture oracle: fails with a fixed assertion message.

Exits 1 (printing the assertion line) while the candidate still contains the
``explode();`` statement, exits 0 otherwise. Used by oracle and CLI tests as
the repo-shipped external command.
"""

import os
import sys


def main() -> int:
    candidate = sys.argv[1]
    assert os.environ.get("REDUSTAT_CANDIDATE") == candidate
    with open(candidate, encoding="utf-8") as handle:
        text = handle.read()
    if "explode();" in text:
        print("AssertionError: expected:<0> but was:<1> "
              f"at {candidate}:7 after 12 ms")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
