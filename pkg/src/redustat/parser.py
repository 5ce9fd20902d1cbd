"""Parser for a Java-like statement grammar over test-method bodies.

The input is the *body* of a test method: a sequence of statements without
the enclosing method braces. Expressions are opaque token spans; only the
statement structure is modelled, because reduction removes whole statements.
Consequences of that choice:

- lambda bodies and anonymous-class bodies are part of the surrounding
  expression statement, not nested statements;
- every control construct requires a braced body (``if (x) foo();`` is
  rejected), which keeps removal of any child statement syntactically safe;
- an ``if``/``else if``/``else`` chain is a single ``If`` node whose children
  are the statements of all branches, flattened in source order, mirroring
  how ``try``/``catch``/``finally`` is one ``Try`` node.

The full grammar is documented in ``docs/grammar.md``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import StatementNode, StmtKind, TestCaseAst


class StatementSyntaxError(ValueError):
    """Malformed input, with 1-based line/column of the offending token."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class UnsupportedConstructError(StatementSyntaxError):
    """Grammatically recognizable construct outside the supported subset."""

    def __init__(self, construct: str, line: int, column: int):
        self.construct = construct
        super(StatementSyntaxError, self).__init__(
            f"unsupported construct '{construct}' (line {line}, column {column})"
        )
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int
    line: int
    column: int


_PUNCT = set("(){}[];:,.?=+-*/%<>!&|^~@")
_OPEN = {"(": ")", "[": "]", "{": "}"}
_CLOSE = {")", "]", "}"}

_PRIMITIVES = {
    "int", "long", "short", "byte", "char", "boolean", "float", "double",
    "var", "void",
}


def tokenize(source: str) -> list[Token]:
    """Split source into tokens, dropping whitespace and comments.

    String and character literals become single tokens so that braces or
    semicolons inside them never affect statement boundaries.
    """
    tokens: list[Token] = []
    i = 0
    line = 1
    line_start = 0
    n = len(source)

    def advance_lines(text: str, upto: int) -> None:
        nonlocal line, line_start
        for k in range(len(text)):
            if text[k] == "\n":
                line += 1
                line_start = upto - len(text) + k + 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            if ch == "\n":
                line += 1
                line_start = i + 1
            i += 1
            continue
        col = i - line_start + 1
        if source.startswith("//", i):
            end = source.find("\n", i)
            i = n if end == -1 else end
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end == -1:
                raise StatementSyntaxError("unterminated block comment", line, col)
            advance_lines(source[i:end + 2], end + 2)
            i = end + 2
            continue
        if ch in "\"'":
            j = i + 1
            while j < n:
                if source[j] == "\\":
                    j += 2
                    continue
                if source[j] == ch:
                    break
                if source[j] == "\n":
                    raise StatementSyntaxError("unterminated literal", line, col)
                j += 1
            if j >= n:
                raise StatementSyntaxError("unterminated literal", line, col)
            tokens.append(Token(source[i:j + 1], i, j + 1, line, col))
            i = j + 1
            continue
        if ch.isalpha() or ch == "_" or ch == "$":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] in "_$"):
                j += 1
            tokens.append(Token(source[i:j], i, j, line, col))
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] in "._"):
                j += 1
            tokens.append(Token(source[i:j], i, j, line, col))
            i = j
            continue
        if ch in _PUNCT:
            tokens.append(Token(ch, i, i + 1, line, col))
            i += 1
            continue
        raise StatementSyntaxError(f"unexpected character {ch!r}", line, col)
    return tokens


def token_texts(source: str) -> list[str]:
    """Token sequence used for whitespace-insensitive source comparison."""
    return [t.text for t in tokenize(source)]


# -- parsing ---------------------------------------------------------------

_UNSUPPORTED_STARTERS = {"switch", "class", "interface", "enum", "record"}


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0

    # Nodes are built as mutable dicts first, then numbered in depth-first
    # pre-order and frozen into StatementNode tuples.

    def parse_body(self) -> tuple[tuple[StatementNode, ...], tuple[int, ...]]:
        forest = self.parse_statements(stop_at_brace=False)
        nodes: list[StatementNode] = []
        roots = tuple(self._freeze(tree, None, nodes) for tree in forest)
        return tuple(nodes), roots

    def _freeze(self, tree: dict, parent: int | None, out: list[StatementNode]) -> int:
        node_id = len(out)
        out.append(None)  # type: ignore[arg-type]  # reserve pre-order slot
        child_ids = tuple(self._freeze(c, node_id, out) for c in tree["children"])
        out[node_id] = StatementNode(
            id=node_id,
            kind=tree["kind"],
            span=tree["span"],
            children=child_ids,
            parent=parent,
        )
        return node_id

    # -- token helpers ---------------------------------------------------

    def _peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self, expected: str | None = None) -> Token:
        tok = self._peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("", 0, 0, 1, 1)
            raise StatementSyntaxError(
                f"unexpected end of input{f', expected {expected!r}' if expected else ''}",
                last.line, last.column)
        if expected is not None and tok.text != expected:
            raise StatementSyntaxError(
                f"expected {expected!r}, found {tok.text!r}", tok.line, tok.column)
        self.pos += 1
        return tok

    def _at(self, text: str) -> bool:
        tok = self._peek()
        return tok is not None and tok.text == text

    def _skip_parenthesized(self) -> tuple[int, int]:
        """Consume a balanced ``( ... )`` group, returning top-level
        semicolon count and colon count (used to tell ``for`` variants apart)."""
        self._next("(")
        depth = 1
        semis = 0
        colons = 0
        while depth > 0:
            tok = self._next()
            if tok.text in _OPEN:
                depth += 1
            elif tok.text in _CLOSE:
                depth -= 1
            elif depth == 1 and tok.text == ";":
                semis += 1
            elif depth == 1 and tok.text == ":":
                colons += 1
        return semis, colons

    # -- statements ------------------------------------------------------

    def parse_statements(self, stop_at_brace: bool) -> list[dict]:
        out = []
        while True:
            tok = self._peek()
            if tok is None:
                if stop_at_brace:
                    last = self.tokens[-1] if self.tokens else Token("", 0, 0, 1, 1)
                    raise StatementSyntaxError("missing closing '}'",
                                               last.line, last.column)
                return out
            if tok.text == "}":
                if stop_at_brace:
                    return out
                raise StatementSyntaxError("unmatched '}'", tok.line, tok.column)
            out.append(self.parse_statement())

    def parse_statement(self) -> dict:
        tok = self._peek()
        assert tok is not None
        text = tok.text
        if text in _UNSUPPORTED_STARTERS:
            raise UnsupportedConstructError(text, tok.line, tok.column)
        if text == ";":
            self._next()
            return self._node(StmtKind.EMPTY, tok.start, tok.end, [])
        if text == "{":
            return self._braced(StmtKind.BLOCK, tok.start)
        if text == "if":
            return self._if_statement()
        if text == "while":
            self._next()
            self._skip_parenthesized()
            return self._body_into(StmtKind.WHILE, tok.start)
        if text == "for":
            self._next()
            semis, colons = self._skip_parenthesized()
            if semis == 2:
                kind = StmtKind.FOR
            elif colons >= 1:
                kind = StmtKind.FOR_EACH
            else:
                raise StatementSyntaxError(
                    "for header needs either two ';' or a ':'", tok.line, tok.column)
            return self._body_into(kind, tok.start)
        if text == "do":
            return self._do_while()
        if text == "try":
            return self._try_statement()
        if text == "synchronized":
            self._next()
            self._skip_parenthesized()
            return self._body_into(StmtKind.SYNCHRONIZED, tok.start)
        if text == "return":
            return self._leaf_to_semicolon(StmtKind.RETURN)
        if text == "throw":
            return self._leaf_to_semicolon(StmtKind.THROW)
        if text == "break":
            return self._leaf_to_semicolon(StmtKind.BREAK)
        if text == "continue":
            return self._leaf_to_semicolon(StmtKind.CONTINUE)
        if self._is_label_start():
            return self._labeled_statement()
        return self._leaf_to_semicolon(None)

    def _node(self, kind: StmtKind, start: int, end: int, children: list[dict]) -> dict:
        return {"kind": kind, "span": (start, end), "children": children}

    def _braced(self, kind: StmtKind, start: int) -> dict:
        self._next("{")
        children = self.parse_statements(stop_at_brace=True)
        close = self._next("}")
        return self._node(kind, start, close.end, children)

    def _body_into(self, kind: StmtKind, start: int) -> dict:
        tok = self._peek()
        if tok is None or tok.text != "{":
            where = tok or self.tokens[-1]
            raise StatementSyntaxError(
                f"{kind.value} body must be a braced block", where.line, where.column)
        node = self._braced(kind, start)
        return node

    def _if_statement(self) -> dict:
        start_tok = self._next("if")
        self._skip_parenthesized()
        node = self._body_into(StmtKind.IF, start_tok.start)
        while self._at("else"):
            self._next("else")
            if self._at("if"):
                self._next("if")
                self._skip_parenthesized()
                branch = self._body_into(StmtKind.IF, start_tok.start)
                node["children"].extend(branch["children"])
                node["span"] = (start_tok.start, branch["span"][1])
                continue
            branch = self._body_into(StmtKind.IF, start_tok.start)
            node["children"].extend(branch["children"])
            node["span"] = (start_tok.start, branch["span"][1])
            break
        return node

    def _do_while(self) -> dict:
        start_tok = self._next("do")
        node = self._body_into(StmtKind.DO_WHILE, start_tok.start)
        self._next("while")
        self._skip_parenthesized()
        semi = self._next(";")
        node["span"] = (start_tok.start, semi.end)
        return node

    def _try_statement(self) -> dict:
        start_tok = self._next("try")
        if self._at("("):
            self._skip_parenthesized()  # try-with-resources header
        node = self._body_into(StmtKind.TRY, start_tok.start)
        while self._at("catch"):
            self._next("catch")
            self._skip_parenthesized()
            block = self._body_into(StmtKind.TRY, start_tok.start)
            node["children"].extend(block["children"])
            node["span"] = (start_tok.start, block["span"][1])
        if self._at("finally"):
            self._next("finally")
            block = self._body_into(StmtKind.TRY, start_tok.start)
            node["children"].extend(block["children"])
            node["span"] = (start_tok.start, block["span"][1])
        return node

    def _is_label_start(self) -> bool:
        tok = self._peek()
        if tok is None or not (tok.text[0].isalpha() or tok.text[0] in "_$"):
            return False
        after = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
        return after is not None and after.text == ":"

    def _labeled_statement(self) -> dict:
        label = self._next()
        self._next(":")
        tok = self._peek()
        if tok is None or tok.text != "{":
            where = tok or self.tokens[-1]
            raise StatementSyntaxError(
                "labeled statement body must be a braced block", where.line, where.column)
        node = self._braced(StmtKind.LABELED, label.start)
        return node

    def _leaf_to_semicolon(self, kind: StmtKind | None) -> dict:
        """Consume tokens until a ';' at bracket depth zero.

        Depth counts parentheses, brackets *and* braces, so statement lambdas
        and anonymous-class bodies stay inside one leaf.
        """
        start_tok = self._peek()
        assert start_tok is not None
        first = self.pos
        depth = 0
        while True:
            tok = self._peek()
            if tok is None:
                raise StatementSyntaxError(
                    "statement not terminated by ';'", start_tok.line, start_tok.column)
            self.pos += 1
            if tok.text in _OPEN:
                depth += 1
            elif tok.text in _CLOSE:
                depth -= 1
                if depth < 0:
                    raise StatementSyntaxError(
                        f"unmatched {tok.text!r}", tok.line, tok.column)
            elif tok.text == ";" and depth == 0:
                break
        if kind is None:
            kind = _classify_leaf([t.text for t in self.tokens[first:self.pos - 1]])
        return self._node(kind, start_tok.start, self.tokens[self.pos - 1].end, [])


def _classify_leaf(texts: list[str]) -> StmtKind:
    """Tell a local declaration from an expression statement.

    Purely cosmetic for reduction purposes (both are leaves); a conservative
    type-then-name shape check is enough.
    """
    i = 0
    if i < len(texts) and texts[i] == "final":
        i += 1
        if i == len(texts):
            return StmtKind.EXPRESSION
    if i >= len(texts) or not _is_word(texts[i]):
        return StmtKind.EXPRESSION
    if texts[i] in _PRIMITIVES:
        i += 1
    else:
        i += 1
        while i + 1 < len(texts) and texts[i] == "." and _is_word(texts[i + 1]):
            i += 2
        if i < len(texts) and texts[i] == "<":
            depth = 1
            i += 1
            while i < len(texts) and depth > 0:
                if texts[i] == "<":
                    depth += 1
                elif texts[i] == ">":
                    depth -= 1
                i += 1
            if depth != 0:
                return StmtKind.EXPRESSION
    while i + 1 < len(texts) and texts[i] == "[" and texts[i + 1] == "]":
        i += 2
    if i < len(texts) and _is_word(texts[i]) and texts[i] not in _PRIMITIVES:
        nxt = texts[i + 1] if i + 1 < len(texts) else None
        if nxt in (None, "=", ",") or (nxt == "[" and i + 2 < len(texts)
                                       and texts[i + 2] == "]"):
            return StmtKind.LOCAL_DECLARATION
    return StmtKind.EXPRESSION


def _is_word(text: str) -> bool:
    return bool(text) and (text[0].isalpha() or text[0] in "_$")


def parse_test(source: str, test_name: str = "test", project: str = "") -> TestCaseAst:
    """Parse a test-method body into a :class:`TestCaseAst`.

    Statement ids are assigned in depth-first pre-order. Raises
    :class:`StatementSyntaxError` on malformed input and
    :class:`UnsupportedConstructError` for recognizable constructs outside
    the grammar subset (``switch``, type declarations, ...).
    """
    parser = _Parser(source)
    statements, roots = parser.parse_body()
    return TestCaseAst(
        test_name=test_name,
        source=source,
        statements=statements,
        roots=roots,
        project=project,
    )
