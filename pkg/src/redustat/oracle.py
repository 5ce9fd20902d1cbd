"""Failure oracles: decide whether a candidate test still fails the same way.

Two oracle families:

- :class:`ExternalCommandOracle` writes the candidate source to a file,
  substitutes its path into a command template, and classifies the run by
  exit code plus an optional failure-fingerprint regex. This is the bridge
  to real build/test tooling.
- :class:`ScriptedOracle` decides directly on retained statement-id sets,
  giving cheap deterministic ground truth for experiments and tests.

Exit-code contract for external commands: an exit code in
``fail_exit_codes`` means Fail (subject to the signature policy), 0 means
Pass, and anything else (including timeouts and non-compiling candidates) is
Invalid. Invalid is deliberately distinct from a spawn failure: a candidate
that cannot even be attempted aborts the reduction instead of being treated
as "not failing".

Verdict evaluation blocks. Distinct oracle instances may run concurrently in
different working directories, but one ExternalCommandOracle config must not
be invoked concurrently with itself: the command typically mutates its
workdir.
"""

from __future__ import annotations

import os
import re
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass
from enum import Enum
from typing import Union


class VerdictStatus(Enum):
    FAIL = "Fail"
    PASS = "Pass"
    INVALID = "Invalid"


class MatchPolicy(Enum):
    ANY_FAILURE = "any"
    SAME_SIGNATURE = "same"


#: Signature reported by scripted oracles; constant because the scripted
#: failure predicate has no output to fingerprint.
SCRIPTED_SIGNATURE = "scripted"

#: Environment variable pointing the command under test at the candidate file.
CANDIDATE_ENV_VAR = "REDUSTAT_CANDIDATE"


class OracleSpawnError(RuntimeError):
    """The oracle command could not be started at all."""


class OriginalDoesNotFailError(ValueError):
    """The unreduced test does not fail; reduction must not start."""

    def __init__(self, verdict: "OracleVerdict"):
        self.verdict = verdict
        super().__init__(
            f"original test does not fail (verdict: {verdict.status.value})")


@dataclass(frozen=True)
class OracleVerdict:
    """Outcome of evaluating one candidate."""

    status: VerdictStatus
    signature: str = ""
    duration_ms: float = 0.0

    def __post_init__(self) -> None:
        if (self.status is VerdictStatus.FAIL) != bool(self.signature):
            raise ValueError("a verdict is Fail if and only if it carries a "
                             "non-empty signature")


@dataclass(frozen=True)
class OracleConfig:
    """Configuration of an external-command oracle.

    ``command_template`` is split with shlex; every occurrence of the
    ``{candidate}`` placeholder is replaced by the candidate file path. The
    same path is exported as ``REDUSTAT_CANDIDATE``.
    """

    command_template: str
    workdir: str = "."
    timeout_ms: int = 60_000
    fail_exit_codes: frozenset[int] = frozenset({1})
    signature_pattern: str | None = None
    match_policy: MatchPolicy = MatchPolicy.SAME_SIGNATURE
    retries: int = 0
    candidate_suffix: str = ".java"
    scratch_dir: str | None = None  # candidate files land here when set

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if self.match_policy is MatchPolicy.SAME_SIGNATURE and not self.signature_pattern:
            raise ValueError("signature_pattern is required under the "
                             "SameSignature policy")


@dataclass(frozen=True)
class ScriptedOracle:
    """Deterministic oracle over retained statement-id sets.

    A candidate fails when it retains some ``failure_set`` entirely. With
    empty ``blockers`` the predicate is monotone: any superset of a failing
    set fails too.

    Non-empty ``blockers`` model entangled statements that break the failure
    when partially removed: a candidate retaining *some but not all* blocker
    ids passes no matter what. Retaining every blocker (in particular, the
    unreduced test) or none of them leaves the failure-set rule in charge,
    which makes the predicate non-monotone while the original test still
    fails.
    """

    failure_sets: tuple[frozenset[int], ...]
    blockers: frozenset[int] = frozenset()
    match_policy: MatchPolicy = MatchPolicy.ANY_FAILURE

    def __post_init__(self) -> None:
        if not self.failure_sets:
            raise ValueError("at least one failure set is required")
        if any(not fs for fs in self.failure_sets):
            raise ValueError("failure sets must be non-empty")

    @property
    def monotone(self) -> bool:
        return not self.blockers

    def fails(self, retained: frozenset[int]) -> bool:
        if self.blockers:
            present = len(self.blockers & retained)
            if 0 < present < len(self.blockers):
                return False
        return any(fs <= retained for fs in self.failure_sets)


Oracle = Union[OracleConfig, ScriptedOracle]


def evaluate(oracle: Oracle, candidate) -> OracleVerdict:
    """Evaluate one candidate.

    For a :class:`ScriptedOracle`, ``candidate`` is the retained id-set; for
    an :class:`OracleConfig`, it is the rendered candidate source text.
    """
    if isinstance(oracle, ScriptedOracle):
        retained = frozenset(candidate)
        if oracle.fails(retained):
            return OracleVerdict(VerdictStatus.FAIL, SCRIPTED_SIGNATURE)
        return OracleVerdict(VerdictStatus.PASS)
    return _run_external(oracle, candidate)


def baseline_signature(oracle: Oracle, original) -> str:
    """Signature of the unreduced test's failure.

    ``original`` is a :class:`~redustat.model.TestCaseAst`. Raises
    :class:`OriginalDoesNotFailError` when the full test passes or is
    Invalid, in which case reduction must not start.
    """
    if isinstance(oracle, ScriptedOracle):
        verdict = evaluate(oracle, original.all_ids())
    else:
        verdict = evaluate(oracle, original.source)
    if verdict.status is not VerdictStatus.FAIL:
        raise OriginalDoesNotFailError(verdict)
    return verdict.signature


def _run_external(config: OracleConfig, source_text: str) -> OracleVerdict:
    attempts = 1 + max(config.retries, 0)
    verdict = None
    for _ in range(attempts):
        verdict = _run_external_once(config, source_text)
        # Retries (default 0) only re-attempt Invalid verdicts: those are the
        # lossy outcome for the reducer, and the knob exists for flaky infra.
        if verdict.status is not VerdictStatus.INVALID:
            return verdict
    return verdict


def _run_external_once(config: OracleConfig, source_text: str) -> OracleVerdict:
    started = time.monotonic()
    with tempfile.NamedTemporaryFile(
        "w", suffix=config.candidate_suffix, delete=False, encoding="utf-8",
        dir=config.scratch_dir,
    ) as handle:
        handle.write(source_text)
        candidate_path = handle.name
    try:
        argv = [
            part.replace("{candidate}", candidate_path)
            for part in shlex.split(config.command_template)
        ]
        env = dict(os.environ, **{CANDIDATE_ENV_VAR: candidate_path})
        try:
            proc = subprocess.run(
                argv,
                cwd=config.workdir,
                env=env,
                capture_output=True,
                text=True,
                timeout=config.timeout_ms / 1000.0,
            )
        except subprocess.TimeoutExpired:
            return OracleVerdict(VerdictStatus.INVALID,
                                 duration_ms=_elapsed_ms(started))
        except OSError as exc:
            raise OracleSpawnError(f"cannot run oracle command {argv!r}: {exc}") from exc

        duration = _elapsed_ms(started)
        if proc.returncode == 0:
            return OracleVerdict(VerdictStatus.PASS, duration_ms=duration)
        if proc.returncode in config.fail_exit_codes:
            signature = _extract_signature(config, proc.stdout + proc.stderr,
                                           proc.returncode)
            return OracleVerdict(VerdictStatus.FAIL, signature, duration)
        return OracleVerdict(VerdictStatus.INVALID, duration_ms=duration)
    finally:
        try:
            os.unlink(candidate_path)
        except OSError:
            pass


def _elapsed_ms(started: float) -> float:
    return (time.monotonic() - started) * 1000.0


def _extract_signature(config: OracleConfig, output: str, returncode: int) -> str:
    if config.signature_pattern:
        match = re.search(config.signature_pattern, output)
        if match:
            raw = match.group(1) if match.groups() else match.group(0)
            normalized = normalize_signature(raw)
            if normalized:
                return normalized
    # Failing exit code with nothing to fingerprint: fall back to the exit
    # code itself so the Fail invariant (non-empty signature) holds.
    return f"exit:{returncode}"


_ADDRESS_RE = re.compile(r"0x[0-9A-Fa-f]+")
_PATH_RE = re.compile(r"(?:[A-Za-z]:)?(?:[\\/][\w.\-+]+)+")
_LINE_RE = re.compile(r"(?:\bline\s+\d+|:\d+(?::\d+)?)")
_DURATION_RE = re.compile(r"\b\d+(?:\.\d+)?\s*(?:ms|s|sec|secs|seconds)\b")


def normalize_signature(text: str) -> str:
    """Canonicalize a failure fingerprint before comparison.

    Reduction legitimately changes line numbers, timings, temp-file paths
    and addresses, so those are blanked out.
    """
    text = _ADDRESS_RE.sub("<addr>", text)
    text = _PATH_RE.sub("<path>", text)
    text = _LINE_RE.sub("<line>", text)
    text = _DURATION_RE.sub("<dur>", text)
    return " ".join(text.split())


def verdict_accepted(verdict: OracleVerdict, baseline: str,
                     policy: MatchPolicy) -> bool:
    """Does this verdict count as "still failing" under the policy?"""
    if verdict.status is not VerdictStatus.FAIL:
        return False
    if policy is MatchPolicy.ANY_FAILURE:
        return True
    return verdict.signature == baseline


def oracle_policy(oracle: Oracle) -> MatchPolicy:
    return oracle.match_policy
