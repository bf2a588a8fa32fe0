"""Incremental search over article names and symbols.

A linear scan over precomputed lowercase keys; no trie, because the corpus
scale (tens of thousands of entries) stays well inside the interactive
latency budget.  Entries are presorted by within-tier rank (key length, then
key, then kind and target) so a query only bins entries into its three match
tiers (exact, prefix, substring) and never sorts.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .articles import Article


@dataclass(frozen=True)
class IndexEntry:
    key: str
    kind: str  # "article" | "symbol"
    target: str  # article name, or defining item anchor for symbols


@dataclass(frozen=True)
class NameIndex:
    entries: tuple[IndexEntry, ...]  # presorted by (len(key), key, kind, target)
    lowered: tuple[str, ...]
    warnings: tuple[str, ...] = ()

    @classmethod
    def from_entries(
        cls, entries: Iterable[IndexEntry], warnings: Iterable[str] = ()
    ) -> "NameIndex":
        ordered = sorted(
            entries, key=lambda e: (len(e.key), e.key.lower(), e.kind, e.target)
        )
        return cls(
            tuple(ordered),
            tuple(e.key.lower() for e in ordered),
            tuple(warnings),
        )


def build_index(articles: Iterable[Article]) -> NameIndex:
    """One entry per article plus one per defined symbol.

    A symbol defined by several articles is kept once per definition and
    recorded as a warning naming the defining anchors.
    """
    entries: list[IndexEntry] = []
    warnings: list[str] = []
    seen_symbols: dict[str, str] = {}
    for article in articles:
        entries.append(IndexEntry(article.name, "article", article.name))
        for symbol, anchor in article.symbols:
            if symbol in seen_symbols:
                warnings.append(
                    f"symbol {symbol!r} defined by both {seen_symbols[symbol]} "
                    f"and {anchor}"
                )
            else:
                seen_symbols[symbol] = anchor
            entries.append(IndexEntry(symbol, "symbol", anchor))
    return NameIndex.from_entries(entries, warnings)


def query(
    index: NameIndex,
    text: str,
    kind_filter: str | None = None,
    limit: int = 50,
) -> list[IndexEntry]:
    """Ranked case-insensitive lookup.

    Tiers: exact match, then prefix, then substring; within a tier shorter
    keys come first, then lexicographic order.  The ranking is total, so
    extending a query only ever narrows the (unlimited) result list.
    """
    if limit <= 0:
        raise ValueError("limit must be positive")
    q = text.lower()
    qlen = len(q)
    exact: list[IndexEntry] = []
    prefix: list[IndexEntry] = []
    substring: list[IndexEntry] = []
    for entry, lowered in zip(index.entries, index.lowered):
        if kind_filter is not None and entry.kind != kind_filter:
            continue
        pos = lowered.find(q)
        if pos < 0:
            continue
        if pos == 0:
            if len(lowered) == qlen:
                exact.append(entry)
            else:
                prefix.append(entry)
        else:
            substring.append(entry)
    return (exact + prefix + substring)[:limit]
