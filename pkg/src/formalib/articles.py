"""Parse formal-library article source into directives, items, and symbols.

The grammar is a deliberately small, line-oriented subset:

    article   = "environ" directive* "begin" body
    directive = KEYWORD name ("," name)* ";"          (may span lines)
    body      = (comment-line | item-block | other-line)*

An item block opens at a line whose first token is ``theorem``,
``definition``, or ``scheme``.  A ``theorem`` closes at the first ``;`` at
proof depth 0, or at the ``end;`` that closes a ``proof`` opened at depth 0.
``definition`` and ``scheme`` close at their matching ``end;`` (``proof``
blocks inside them may nest).  Lines whose first non-blank characters are
``::`` are comments and never open items.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InvalidArticleName, MalformedEnvironment, UnterminatedBlock

DIRECTIVE_KINDS = (
    "vocabularies",
    "notations",
    "constructors",
    "registrations",
    "requirements",
    "definitions",
    "theorems",
    "schemes",
    "expansions",
    "equalities",
)

ITEM_KINDS = ("theorem", "definition", "scheme")

#: Definition keywords that introduce a new symbol; the token immediately
#: after the keyword is taken as the symbol name.
SYMBOL_KEYWORDS = ("func", "pred", "mode", "attr")

NAME_MAX_LEN = 8

_NAME_RE = re.compile(r"[A-Z][A-Z0-9_]*\Z")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
# Tokens are runs of non-separator characters; "," and ";" always stand alone.
_TOKEN_RE = re.compile(r"[;,]|[^\s;,]+")


def validate_article_name(value: str) -> tuple[str, list[str]]:
    """Check an article name, returning it with any warnings.

    Names must be uppercase identifiers.  Names longer than eight characters
    are accepted but flagged, since classic corpora cap file stems at eight
    characters and such articles will not interoperate with older tooling.
    """
    if not _NAME_RE.match(value):
        raise InvalidArticleName(value)
    warnings = []
    if len(value) > NAME_MAX_LEN:
        warnings.append(
            f"article name {value} is longer than {NAME_MAX_LEN} characters"
        )
    return value, warnings


@dataclass(frozen=True)
class Directive:
    kind: str
    names: tuple[str, ...]


@dataclass(frozen=True)
class Item:
    """One addressable theorem/definition/scheme block.

    ``anchor`` is the surrogate identifier "ARTICLE:kind:ordinal"; the source
    language has no persistent identifiers, so ordinals are assigned per kind
    in source order.  ``span`` is 1-based and inclusive.  ``statement_text``
    is the block text with proof bodies removed.
    """

    anchor: str
    kind: str
    ordinal: int
    label: str
    span: tuple[int, int]
    statement_text: str


@dataclass(frozen=True)
class Article:
    name: str
    env: tuple[Directive, ...]
    items: tuple[Item, ...]
    lines: tuple[str, ...]
    symbols: tuple[tuple[str, str], ...] = ()
    warnings: tuple[str, ...] = ()

    def source(self) -> str:
        return "\n".join(self.lines)

    def item_by_anchor(self, anchor: str) -> Item | None:
        for item in self.items:
            if item.anchor == anchor:
                return item
        return None


@dataclass
class _Token:
    text: str
    line: int  # 1-based
    start: int  # column offset within the line
    end: int


def _is_comment_line(line: str) -> bool:
    return line.lstrip().startswith("::")


def _line_tokens(line: str, lineno: int) -> list[_Token]:
    return [
        _Token(m.group(), lineno, m.start(), m.end())
        for m in _TOKEN_RE.finditer(line)
    ]


class _TokenStream:
    """Flat token stream over non-comment lines, with lookahead."""

    def __init__(self, lines: list[str], start_line: int = 0):
        self.tokens: list[_Token] = []
        for i in range(start_line, len(lines)):
            if _is_comment_line(lines[i]):
                continue
            self.tokens.extend(_line_tokens(lines[i], i + 1))
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token | None:
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok


def _parse_environment(
    stream: _TokenStream, total_lines: int, warnings: list[str]
) -> tuple[list[Directive], int]:
    """Parse directives up to ``begin``; returns (directives, begin line)."""
    first = stream.next()
    if first is None or first.text != "environ":
        line = first.line if first is not None else max(total_lines, 1)
        raise MalformedEnvironment("expected 'environ' to open the article", line)

    directives: list[Directive] = []
    while True:
        tok = stream.next()
        if tok is None:
            raise MalformedEnvironment(
                "missing 'begin' after the environment part", max(total_lines, 1)
            )
        if tok.text == "begin":
            return directives, tok.line
        if tok.text not in DIRECTIVE_KINDS:
            raise MalformedEnvironment(f"unknown directive {tok.text!r}", tok.line)
        kind_tok = tok
        names: list[str] = []
        while True:
            name_tok = stream.next()
            if name_tok is None:
                raise MalformedEnvironment(
                    f"directive {kind_tok.text!r} has no terminating ';'",
                    kind_tok.line,
                )
            if name_tok.text == "begin":
                raise MalformedEnvironment(
                    f"directive {kind_tok.text!r} has no terminating ';'",
                    name_tok.line,
                )
            if name_tok.text == ";":
                raise MalformedEnvironment(
                    f"directive {kind_tok.text!r} names no articles",
                    name_tok.line,
                )
            if not _NAME_RE.match(name_tok.text):
                raise MalformedEnvironment(
                    f"invalid article name {name_tok.text!r} in directive "
                    f"{kind_tok.text!r}",
                    name_tok.line,
                )
            if len(name_tok.text) > NAME_MAX_LEN:
                warnings.append(
                    f"line {name_tok.line}: article name {name_tok.text} is longer "
                    f"than {NAME_MAX_LEN} characters"
                )
            names.append(name_tok.text)
            sep = stream.next()
            if sep is None or sep.text not in (",", ";"):
                raise MalformedEnvironment(
                    f"directive {kind_tok.text!r} has no terminating ';'",
                    sep.line if sep is not None else kind_tok.line,
                )
            if sep.text == ";":
                break
        directives.append(Directive(kind_tok.text, tuple(names)))


class _BodyScanner:
    """Walks the body lines, producing items with proof bodies excluded."""

    def __init__(self, name: str, lines: list[str], first_body_line: int):
        self.name = name
        self.lines = lines
        self.counters = {kind: 0 for kind in ITEM_KINDS}
        self.items: list[Item] = []
        # Tokenize the body once; comment lines contribute no tokens.
        self.tokens: list[_Token] = []
        self.line_first_token: dict[int, int] = {}  # 0-based line -> token index
        for i in range(first_body_line, len(lines)):
            if _is_comment_line(lines[i]):
                continue
            toks = _line_tokens(lines[i], i + 1)
            if toks:
                self.line_first_token[i] = len(self.tokens)
                self.tokens.extend(toks)
        self.line_idx = first_body_line  # 0-based index of the next line to look at

    def scan(self) -> list[Item]:
        while self.line_idx < len(self.lines):
            start = self.line_first_token.get(self.line_idx)
            if start is None or self.tokens[start].text not in ITEM_KINDS:
                self.line_idx += 1
                continue
            self._scan_item(self.tokens[start].text, start)
        return self.items

    def _scan_item(self, kind: str, token_start: int) -> None:
        open_line = self.line_idx + 1  # 1-based
        tokens = self.tokens
        # Exclusion regions for proof bodies, as ((line, col), (line, col)).
        exclusions: list[tuple[tuple[int, int], tuple[int, int]]] = []
        proof_stack: list[tuple[int, int]] = []
        depth = 1 if kind in ("definition", "scheme") else 0
        close_tok: _Token | None = None

        i = token_start + 1  # skip the opening keyword
        while i < len(tokens):
            tok = tokens[i]
            if tok.text == "proof":
                proof_stack.append((tok.line, tok.start))
                depth += 1
            elif (
                tok.text == "end"
                and i + 1 < len(tokens)
                and tokens[i + 1].text == ";"
            ):
                end_tok = tokens[i + 1]
                if proof_stack:
                    start = proof_stack.pop()
                    if not proof_stack:
                        exclusions.append((start, (end_tok.line, end_tok.end)))
                depth -= 1
                i += 2
                if depth <= 0:
                    close_tok = end_tok
                    break
                continue
            elif tok.text == ";" and depth == 0 and kind == "theorem":
                close_tok = tok
                break
            i += 1

        if close_tok is None:
            if proof_stack:
                raise UnterminatedBlock("proof", proof_stack[0][0])
            raise UnterminatedBlock(kind, open_line)

        span = (open_line, close_tok.line)
        label = self._extract_label(kind, tokens[token_start : token_start + 3])
        self.counters[kind] += 1
        ordinal = self.counters[kind]
        statement = self._statement_text(span, exclusions)
        self.items.append(
            Item(
                anchor=f"{self.name}:{kind}:{ordinal}",
                kind=kind,
                ordinal=ordinal,
                label=label,
                span=span,
                statement_text=statement,
            )
        )
        self.line_idx = close_tok.line  # continue after the closing line

    @staticmethod
    def _extract_label(kind: str, tokens: list[_Token]) -> str:
        if kind == "definition" or len(tokens) < 2:
            return ""
        tok = tokens[1].text
        if kind == "theorem":
            if len(tok) > 1 and tok.endswith(":") and _IDENT_RE.match(tok[:-1]):
                return tok[:-1]
            if _IDENT_RE.match(tok) and len(tokens) > 2 and tokens[2].text == ":":
                return tok
            return ""
        # scheme: the identifier following the keyword names the scheme
        m = re.match(r"[A-Za-z_][A-Za-z0-9_]*", tok)
        return m.group() if m else ""

    def _statement_text(
        self,
        span: tuple[int, int],
        exclusions: list[tuple[tuple[int, int], tuple[int, int]]],
    ) -> str:
        kept: list[str] = []
        for lineno in range(span[0], span[1] + 1):
            line = self.lines[lineno - 1]
            pieces: list[str] = []
            col = 0
            for (sl, sc), (el, ec) in exclusions:
                if el < lineno or sl > lineno:
                    continue
                start = sc if sl == lineno else 0
                end = ec if el == lineno else len(line)
                if start > col:
                    pieces.append(line[col:start])
                col = max(col, end)
            pieces.append(line[col:])
            kept.append("".join(pieces).rstrip())
        return "\n".join(s for s in kept if s.strip())


def parse_article(name: str, source: str) -> Article:
    """Parse ``source`` into an :class:`Article` named ``name``.

    Raises :class:`MalformedEnvironment` when the environment part is absent
    or a directive is broken, and :class:`UnterminatedBlock` when an item or
    proof never closes.  Joining the returned ``lines`` with newlines
    reproduces ``source`` byte for byte.
    """
    name, warnings = validate_article_name(name)
    lines = source.split("\n")

    stream = _TokenStream(lines)
    directives, begin_line = _parse_environment(stream, len(lines), warnings)
    items = _BodyScanner(name, lines, begin_line).scan()

    article = Article(
        name=name,
        env=tuple(directives),
        items=tuple(items),
        lines=tuple(lines),
        warnings=tuple(warnings),
    )
    symbols = extract_symbols(article)
    return Article(
        name=article.name,
        env=article.env,
        items=article.items,
        lines=article.lines,
        symbols=tuple(symbols),
        warnings=article.warnings,
    )


def extract_symbols(article: Article) -> list[tuple[str, str]]:
    """Collect symbols introduced by definition items.

    Within each definition's statement text, every ``func``/``pred``/``mode``/
    ``attr`` keyword introduces the identifier token that follows it.  Pairs
    are returned in source order.
    """
    out: list[tuple[str, str]] = []
    for item in article.items:
        if item.kind != "definition":
            continue
        toks = _TOKEN_RE.findall(item.statement_text)
        for i, tok in enumerate(toks[:-1]):
            if tok in SYMBOL_KEYWORDS and _IDENT_RE.match(toks[i + 1]):
                out.append((toks[i + 1], item.anchor))
    return out
