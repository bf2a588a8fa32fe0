"""Line-based three-way merge built on a Myers LCS diff.

Both derived line sequences are aligned against the common base; runs where
all three agree are stable, and the regions between are classified by which
side changed.  Divergent changes to the same region become conflicts carried
as data, never exceptions.  Ties in the edit script prefer deletions over
insertions, which pins one canonical alignment and makes merges reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Sequence

CONFLICT_OURS = "<<<<<<< ours"
CONFLICT_BASE = "||||||| base"
CONFLICT_SEP = "======="
CONFLICT_THEIRS = ">>>>>>> theirs"


def lcs_matches(a: Sequence[str], b: Sequence[str]) -> list[tuple[int, int]]:
    """Pairs (i, j) of matched lines a[i] == b[j], strictly increasing.

    Myers' greedy O((N+M)D) algorithm.  When a diagonal can be reached by
    either a deletion or an insertion, the deletion wins.
    """
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return []
    max_d = n + m
    v: dict[int, int] = {1: 0}
    trace: list[dict[int, int]] = []
    found = False
    for d in range(max_d + 1):
        trace.append(dict(v))
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and v.get(k - 1, 0) < v.get(k + 1, 0)):
                x = v.get(k + 1, 0)
            else:
                x = v.get(k - 1, 0) + 1
            y = x - k
            while x < n and y < m and a[x] == b[y]:
                x += 1
                y += 1
            v[k] = x
            if x >= n and y >= m:
                found = True
                break
        if found:
            break

    # Backtrack, collecting the diagonal (match) moves.
    matches: list[tuple[int, int]] = []
    x, y = n, m
    for d in range(len(trace) - 1, -1, -1):
        vd = trace[d]
        k = x - y
        if k == -d or (k != d and vd.get(k - 1, 0) < vd.get(k + 1, 0)):
            prev_k = k + 1
        else:
            prev_k = k - 1
        prev_x = vd.get(prev_k, 0)
        prev_y = prev_x - prev_k
        while x > prev_x and y > prev_y:
            matches.append((x - 1, y - 1))
            x -= 1
            y -= 1
        if d > 0:
            x, y = prev_x, prev_y
    matches.reverse()
    return matches


@dataclass(frozen=True)
class Conflict:
    """One unresolved region; ``base_range`` is a 0-based [start, end) slice."""

    base_range: tuple[int, int]
    ours_lines: tuple[str, ...]
    theirs_lines: tuple[str, ...]


@dataclass(frozen=True)
class Chunk:
    """One aligned region: stable, or changed on one or both sides."""

    stable: bool
    base_range: tuple[int, int]
    base_lines: tuple[str, ...]
    ours_lines: tuple[str, ...]
    theirs_lines: tuple[str, ...]


@dataclass(frozen=True)
class MergeResult:
    merged_lines: tuple[str, ...]
    conflicts: tuple[Conflict, ...]

    @property
    def clean(self) -> bool:
        return not self.conflicts


def iter_chunks(
    base: Sequence[str], ours: Sequence[str], theirs: Sequence[str]
) -> list[Chunk]:
    """Partition the three texts into aligned stable/changed chunks."""
    ma = dict(lcs_matches(base, ours))
    mb = dict(lcs_matches(base, theirs))
    n, na_len, nb_len = len(base), len(ours), len(theirs)

    chunks: list[Chunk] = []
    o = a = b = 0
    while o < n or a < na_len or b < nb_len:
        # Extend the stable run where base, ours, and theirs stay aligned.
        i = 0
        while o + i < n and ma.get(o + i) == a + i and mb.get(o + i) == b + i:
            i += 1
        if i:
            lines = tuple(base[o : o + i])
            chunks.append(Chunk(True, (o, o + i), lines, lines, lines))
            o, a, b = o + i, a + i, b + i
            continue
        # Chunk ends at the next base line matched on both sides.
        no = o
        while no < n and not (no in ma and no in mb):
            no += 1
        na, nb = (ma[no], mb[no]) if no < n else (na_len, nb_len)
        chunks.append(
            Chunk(
                False,
                (o, no),
                tuple(base[o:no]),
                tuple(ours[a:na]),
                tuple(theirs[b:nb]),
            )
        )
        o, a, b = no, na, nb
    return chunks


def _assemble(chunks: list[Chunk], resolve) -> MergeResult:
    merged: list[str] = []
    conflicts: list[Conflict] = []
    for chunk in chunks:
        if chunk.stable:
            merged.extend(chunk.base_lines)
            continue
        if chunk.ours_lines == chunk.base_lines:
            merged.extend(chunk.theirs_lines)
            continue
        if chunk.theirs_lines == chunk.base_lines:
            merged.extend(chunk.ours_lines)
            continue
        resolution = resolve(chunk)
        if resolution is not None:
            merged.extend(resolution)
            continue
        conflicts.append(
            Conflict(chunk.base_range, chunk.ours_lines, chunk.theirs_lines)
        )
        merged.append(CONFLICT_OURS)
        merged.extend(chunk.ours_lines)
        merged.append(CONFLICT_BASE)
        merged.extend(chunk.base_lines)
        merged.append(CONFLICT_SEP)
        merged.extend(chunk.theirs_lines)
        merged.append(CONFLICT_THEIRS)
    return MergeResult(tuple(merged), tuple(conflicts))


def _same_change(chunk: Chunk) -> tuple[str, ...] | None:
    if chunk.ours_lines == chunk.theirs_lines:
        return chunk.ours_lines
    return None


def diff3_merge(
    base: Sequence[str], ours: Sequence[str], theirs: Sequence[str]
) -> MergeResult:
    """Merge ``ours`` and ``theirs`` against their common ``base``.

    Non-overlapping edits merge cleanly; identical edits to the same region
    merge cleanly; divergent edits to the same region produce a
    :class:`Conflict` and a marker block in the merged text.
    """
    return _assemble(iter_chunks(base, ours, theirs), _same_change)


def merge_with_resolver(
    base: Sequence[str],
    ours: Sequence[str],
    theirs: Sequence[str],
    resolve,
) -> MergeResult:
    """Like :func:`diff3_merge`, with a caller-supplied resolution attempt.

    ``resolve(chunk)`` may return replacement lines for a both-changed chunk
    or None to leave it conflicting; identical both-side changes are always
    resolved first.
    """

    def full_resolve(chunk: Chunk):
        same = _same_change(chunk)
        if same is not None:
            return same
        return resolve(chunk)

    return _assemble(iter_chunks(base, ours, theirs), full_resolve)


def format_conflict_report(path_label: str, base: Sequence[str], result: MergeResult) -> str:
    """Human-readable conflict report for administrator resolution."""
    out = [f"conflicts in {path_label}: {len(result.conflicts)}"]
    for idx, c in enumerate(result.conflicts, start=1):
        lo, hi = c.base_range
        out.append(f"-- conflict {idx}: base lines {lo + 1}..{hi}")
        out.append(CONFLICT_OURS)
        out.extend(c.ours_lines)
        out.append(CONFLICT_BASE)
        out.extend(base[lo:hi])
        out.append(CONFLICT_SEP)
        out.extend(c.theirs_lines)
        out.append(CONFLICT_THEIRS)
    return "\n".join(out) + "\n"
