"""Versioned comments attached to items, embedded into article text.

Comments live in an append-only revision log, one JSON-lines file per
article.  For display and for library updates they are embedded into the
article source as ``::@ `` comment lines directly above their item, which is
what lets a three-way merge re-anchor them when the library changes: the
annotated text differs from the pristine text only by those inserted lines,
so any update that leaves the surrounding lines alone merges cleanly.
"""

from __future__ import annotations

import json
import os
import threading
from collections.abc import Callable, Collection, Iterable, Sequence
from dataclasses import dataclass, asdict
from datetime import datetime, timezone
from pathlib import Path

from .articles import Article, parse_article
from .diff3 import Chunk, MergeResult, merge_with_resolver
from .errors import StripMismatch, UnknownAnchor, UnknownRevision, UserBlocked

#: Prefix marking an embedded annotation line.  "::" keeps it a valid source
#: comment; the "@" distinguishes it from ordinary comments.
MARKER = "::@"
_PREFIX = MARKER + " "


@dataclass(frozen=True)
class CommentRevision:
    anchor: str
    revision_id: int
    parent: int | None
    author: str
    timestamp: str
    deleted: bool
    body: str


@dataclass(frozen=True)
class AnnotatedSource:
    lines: tuple[str, ...]


def _article_of(anchor: str) -> str:
    return anchor.split(":", 1)[0]


class CommentStore:
    """Append-only revision log, one ``<ARTICLE>.jsonl`` file per article.

    Writes are serialized by a store-wide lock (single writer, any number of
    readers), so concurrent saves can never mint duplicate revision ids.
    """

    def __init__(self, root: str | Path, now: Callable[[], str] | None = None):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._now = now or (lambda: datetime.now(timezone.utc).isoformat())
        self._write_lock = threading.Lock()

    def _path(self, article: str) -> Path:
        return self.root / f"{article}.jsonl"

    def _read(self, article: str) -> list[CommentRevision]:
        path = self._path(article)
        if not path.exists():
            return []
        revisions = []
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    revisions.append(CommentRevision(**json.loads(line)))
        return revisions

    def _append(self, revision: CommentRevision) -> None:
        with self._path(_article_of(revision.anchor)).open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(asdict(revision), ensure_ascii=False) + "\n")

    def history(self, anchor: str) -> list[CommentRevision]:
        return [r for r in self._read(_article_of(anchor)) if r.anchor == anchor]

    def latest(self, anchor: str) -> CommentRevision | None:
        revisions = self.history(anchor)
        return revisions[-1] if revisions else None

    def latest_comments(self, article: str) -> dict[str, str]:
        """Latest non-deleted comment body per anchor of one article."""
        latest: dict[str, CommentRevision] = {}
        for rev in self._read(article):
            latest[rev.anchor] = rev
        return {a: r.body for a, r in latest.items() if not r.deleted}

    def articles(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.jsonl"))

    def append_revision(
        self, anchor: str, body: str, author: str, deleted: bool = False
    ) -> CommentRevision:
        with self._write_lock:
            revisions = self.history(anchor)
            revision = CommentRevision(
                anchor=anchor,
                revision_id=revisions[-1].revision_id + 1 if revisions else 1,
                parent=revisions[-1].revision_id if revisions else None,
                author=author,
                timestamp=self._now(),
                deleted=deleted,
                body=body,
            )
            self._append(revision)
            return revision

    def rekey_article(
        self, article: str, anchor_map: dict[str, str], archive_label: str
    ) -> None:
        """Move whole revision histories to new anchors after an update.

        Revision contents are preserved verbatim; only the anchor key
        changes.  The previous file is archived, never discarded.
        """
        with self._write_lock:
            path = self._path(article)
            if not path.exists():
                return
            revisions = self._read(article)
            archive_dir = self.root / "archive"
            archive_dir.mkdir(exist_ok=True)
            archive = archive_dir / f"{article}.{archive_label}.jsonl"
            os.replace(path, archive)
            tmp = path.with_suffix(".jsonl.tmp")
            with tmp.open("w", encoding="utf-8") as fh:
                for rev in revisions:
                    record = asdict(rev)
                    record["anchor"] = anchor_map.get(rev.anchor, rev.anchor)
                    fh.write(json.dumps(record, ensure_ascii=False) + "\n")
            os.replace(tmp, path)


def save_comment(
    anchor: str,
    body: str,
    author: str,
    store: CommentStore,
    known_anchors: Collection[str] | None = None,
    blocked: Collection[str] = (),
) -> CommentRevision:
    """Append a new revision for ``anchor`` and return it.

    ``known_anchors``, when given, is the set of anchors in the current
    corpus; ``blocked`` is the set of users barred from writing.
    """
    if author in blocked:
        raise UserBlocked(author)
    if known_anchors is not None and anchor not in known_anchors:
        raise UnknownAnchor(anchor)
    return store.append_revision(anchor, body, author)


def delete_comment(
    anchor: str, author: str, store: CommentStore, blocked: Collection[str] = ()
) -> CommentRevision:
    """Append a deletion marker; history stays intact."""
    if author in blocked:
        raise UserBlocked(author)
    latest = store.latest(anchor)
    if latest is None:
        raise UnknownAnchor(anchor)
    return store.append_revision(anchor, latest.body, author, deleted=True)


def rollback(
    anchor: str,
    to_revision: int,
    author: str,
    store: CommentStore,
    blocked: Collection[str] = (),
) -> CommentRevision:
    """Restore an earlier body as a new revision; history is never rewritten."""
    if author in blocked:
        raise UserBlocked(author)
    target = next(
        (r for r in store.history(anchor) if r.revision_id == to_revision), None
    )
    if target is None:
        raise UnknownRevision(anchor, to_revision)
    return store.append_revision(anchor, target.body, author)


def embed_comments(article: Article, store: CommentStore) -> AnnotatedSource:
    """Insert each latest comment directly above its item's opening line."""
    return embed_bodies(article, store.latest_comments(article.name))


def embed_bodies(article: Article, bodies: dict[str, str]) -> AnnotatedSource:
    starts: dict[int, str] = {}
    for item in article.items:
        if item.anchor in bodies:
            starts[item.span[0]] = bodies[item.anchor]
    out: list[str] = []
    for lineno, line in enumerate(article.lines, start=1):
        if lineno in starts:
            out.extend(_PREFIX + body_line for body_line in starts[lineno].split("\n"))
        out.append(line)
    return AnnotatedSource(tuple(out))


def strip_annotations(lines: Iterable[str]) -> list[str]:
    return [line for line in lines if not line.startswith(MARKER)]


def extract_embedded(lines: Iterable[str]) -> list[tuple[int, str]]:
    """Recover embedded comment runs from annotated text.

    Returns (pristine line number the run sits above, body) pairs, where the
    line number is 1-based within the stripped text.  A run at end of file
    reports the line number just past the last pristine line.
    """
    runs: list[tuple[int, str]] = []
    pristine_count = 0
    current: list[str] | None = None
    for line in lines:
        if line.startswith(MARKER):
            body_line = line[len(_PREFIX) :] if line.startswith(_PREFIX) else ""
            current = [body_line] if current is None else current + [body_line]
        else:
            pristine_count += 1
            if current is not None:
                runs.append((pristine_count, "\n".join(current)))
                current = None
    if current is not None:
        runs.append((pristine_count + 1, "\n".join(current)))
    return runs


def _annotation_insert(chunk: Chunk) -> tuple[str, ...] | None:
    """Resolve a pure insert-vs-insert where ours added only comment lines.

    When an update inserts new text at the exact line a comment sits above,
    nothing in the base was deleted or rewritten, so the comment stays
    attached to the upper side of the insertion point: comment lines first,
    then the update's new lines.
    """
    if chunk.base_lines:
        return None
    if not all(line.startswith(MARKER) for line in chunk.ours_lines):
        return None
    return chunk.ours_lines + chunk.theirs_lines


def rebase_annotations(
    old_pristine: Sequence[str],
    annotated: AnnotatedSource,
    new_pristine: Sequence[str],
) -> MergeResult:
    """Three-way merge carrying annotations onto an updated article.

    The annotated text is "ours", the update is "theirs", and the old
    pristine text is the base.  Because ours differs from base only by
    inserted annotation lines, comments survive any update that leaves the
    lines around their insertion point alone; anything else conflicts and is
    left for an administrator.
    """
    if strip_annotations(annotated.lines) != list(old_pristine):
        raise StripMismatch(
            "annotated text does not strip back to the old pristine text"
        )
    return merge_with_resolver(
        list(old_pristine),
        list(annotated.lines),
        list(new_pristine),
        _annotation_insert,
    )


@dataclass(frozen=True)
class ReattachResult:
    """Comments mapped onto a freshly parsed post-update article."""

    article: Article
    bodies: dict[str, str]  # new anchor -> body
    orphaned: tuple[str, ...]  # bodies with no item below their run


def reattach_comments(article_name: str, merged_lines: Sequence[str]) -> ReattachResult:
    """Attach each embedded run to the item opening right below it."""
    pristine = strip_annotations(merged_lines)
    article = parse_article(article_name, "\n".join(pristine))
    by_start = {item.span[0]: item for item in article.items}
    bodies: dict[str, str] = {}
    orphaned: list[str] = []
    for lineno, body in extract_embedded(merged_lines):
        item = by_start.get(lineno)
        if item is None:
            orphaned.append(body)
        else:
            bodies[item.anchor] = body
    return ReattachResult(article, bodies, tuple(orphaned))
