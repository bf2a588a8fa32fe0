"""Corpus lifecycle: ingest a directory of articles, derive every structure
the platform serves, and carry annotations across library updates.

The served :class:`CorpusState` is an immutable snapshot; ingest and update
build a complete new snapshot first and only then swap it in, so a failing
build leaves the previous state fully intact.  Comment re-anchoring runs as a
three-way merge per article; conflicted articles are written to a report
file, their comment histories are left untouched, and mutations on them are
refused until an administrator resolves the conflict.
"""

from __future__ import annotations

import hashlib
import json
import shutil
import threading
from dataclasses import dataclass, field, replace
from pathlib import Path

from .annotations import (
    CommentStore,
    embed_bodies,
    reattach_comments,
    rebase_annotations,
)
from .articles import Article, parse_article, validate_article_name
from .config import Config
from .depgraph import DepGraph, assign_layers, build_graph, transitive_reduction
from .diff3 import MergeResult, format_conflict_report
from .errors import FormalibError
from .lsi import (
    FeedbackLog,
    LsiModel,
    TermDocMatrix,
    build_tfidf,
    default_rank,
    empty_model,
    load_model,
    save_model,
    truncated_svd,
)
from .namesearch import NameIndex, build_index
from .users import UserRegistry


@dataclass(frozen=True)
class CorpusState:
    version_label: str
    corpus_hash: str
    articles: dict[str, Article]
    graph: DepGraph  # full graph, layered
    reduced: DepGraph  # transitive reduction, layered
    lsi_matrix: TermDocMatrix
    lsi_model: LsiModel
    names: NameIndex
    anchors: frozenset[str]
    frozen_articles: frozenset[str] = frozenset()
    warnings: tuple[str, ...] = ()


def read_corpus_dir(directory: str | Path) -> dict[str, str]:
    """Map article names to sources from the ``*.miz`` files in a directory."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FormalibError(f"not a corpus directory: {directory}")
    sources: dict[str, str] = {}
    for path in sorted(directory.glob("*.miz")):
        name, _ = validate_article_name(path.stem.upper())
        sources[name] = path.read_text(encoding="utf-8")
    if not sources:
        raise FormalibError(f"no .miz articles in {directory}")
    return sources


def compute_corpus_hash(sources: dict[str, str]) -> str:
    digest = hashlib.sha256()
    for name in sorted(sources):
        digest.update(name.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(sources[name].encode("utf-8"))
        digest.update(b"\x00")
    return digest.hexdigest()


def corpus_documents(articles: dict[str, Article]) -> list[tuple[str, str]]:
    """LSI documents: every item's statement, in deterministic order."""
    docs = []
    for name in sorted(articles):
        for item in articles[name].items:
            docs.append((item.anchor, item.statement_text))
    return docs


def build_state(
    sources: dict[str, str],
    version_label: str,
    directive_kinds: frozenset[str],
    lsi_k: int,
    cached_model: tuple[TermDocMatrix, LsiModel] | None = None,
    frozen_articles: frozenset[str] = frozenset(),
) -> CorpusState:
    """Parse and derive everything; raises before any state is swapped in."""
    articles = {name: parse_article(name, text) for name, text in sorted(sources.items())}
    warnings = [w for art in articles.values() for w in art.warnings]

    graph = build_graph(articles.values(), directive_kinds)
    warnings.extend(graph.warnings)
    graph = assign_layers(graph)
    reduced = assign_layers(transitive_reduction(graph))

    if cached_model is not None:
        matrix, model = cached_model
    else:
        docs = corpus_documents(articles)
        if docs:
            matrix = build_tfidf(docs)
            k = min(lsi_k, default_rank(len(matrix.terms), len(matrix.docs)))
            model = truncated_svd(matrix, k)
        else:
            matrix, model = empty_model()

    names = build_index(articles.values())
    warnings.extend(names.warnings)
    anchors = frozenset(i.anchor for art in articles.values() for i in art.items)
    return CorpusState(
        version_label=version_label,
        corpus_hash=compute_corpus_hash(sources),
        articles=articles,
        graph=graph,
        reduced=reduced,
        lsi_matrix=matrix,
        lsi_model=model,
        names=names,
        anchors=anchors,
        frozen_articles=frozen_articles,
        warnings=tuple(warnings),
    )


# -- update planning -------------------------------------------------------


@dataclass(frozen=True)
class ArticlePlan:
    """Outcome of rebasing one article's comments onto a new corpus version."""

    article: str
    status: str  # "clean" | "conflict" | "removed"
    commented_anchors: tuple[str, ...]
    anchor_map: dict[str, str] = field(default_factory=dict)
    conflict_count: int = 0
    merge: MergeResult | None = None


@dataclass(frozen=True)
class UpdateReport:
    version_label: str
    plans: tuple[ArticlePlan, ...]

    @property
    def conflicted(self) -> list[ArticlePlan]:
        return [p for p in self.plans if p.status != "clean"]

    @property
    def conflict_count(self) -> int:
        return sum(max(p.conflict_count, 1) for p in self.conflicted)

    @property
    def carried(self) -> int:
        return sum(len(p.commented_anchors) for p in self.plans if p.status == "clean")

    def summary(self) -> dict:
        return {
            "version_label": self.version_label,
            "conflicts": self.conflict_count,
            "conflicted_articles": [
                {"article": p.article, "anchors": list(p.commented_anchors)}
                for p in self.conflicted
            ],
            "comments_carried": self.carried,
        }


def plan_rebase(
    old_sources: dict[str, str],
    store: CommentStore,
    new_sources: dict[str, str],
) -> list[ArticlePlan]:
    """Pure dry run of the per-article comment rebase; mutates nothing."""
    plans: list[ArticlePlan] = []
    for name in sorted(old_sources):
        old_article = parse_article(name, old_sources[name])
        bodies = store.latest_comments(name)
        bodies = {a: b for a, b in bodies.items() if old_article.item_by_anchor(a)}
        if not bodies:
            continue
        commented = tuple(
            item.anchor for item in old_article.items if item.anchor in bodies
        )
        if name not in new_sources:
            plans.append(ArticlePlan(name, "removed", commented, conflict_count=1))
            continue
        annotated = embed_bodies(old_article, bodies)
        result = rebase_annotations(
            list(old_article.lines), annotated, new_sources[name].split("\n")
        )
        if not result.clean:
            plans.append(
                ArticlePlan(
                    name,
                    "conflict",
                    commented,
                    conflict_count=len(result.conflicts),
                    merge=result,
                )
            )
            continue
        reattached = reattach_comments(name, result.merged_lines)
        if reattached.orphaned or len(reattached.bodies) != len(commented):
            plans.append(
                ArticlePlan(
                    name,
                    "conflict",
                    commented,
                    conflict_count=max(1, len(reattached.orphaned)),
                    merge=result,
                )
            )
            continue
        anchor_map = dict(zip(commented, reattached.bodies.keys()))
        plans.append(ArticlePlan(name, "clean", commented, anchor_map=anchor_map))
    return plans


# -- repository ------------------------------------------------------------


class CorpusRepository:
    """Owns the data directory and the currently served snapshot."""

    def __init__(self, config: Config):
        self.config = config
        self.data_dir = Path(config.data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.comments = CommentStore(self.data_dir / "comments")
        self.feedback = FeedbackLog(self.data_dir / "feedback.jsonl")
        self.users = UserRegistry(self.data_dir / "users.json")
        self._lock = threading.Lock()
        self._state: CorpusState | None = None
        self.last_lsi_rebuilt: bool | None = None

    # paths
    @property
    def corpus_dir(self) -> Path:
        return self.data_dir / "corpus"

    @property
    def meta_path(self) -> Path:
        return self.data_dir / "meta.json"

    @property
    def model_path(self) -> Path:
        return self.data_dir / "lsi.bin"

    @property
    def conflicts_dir(self) -> Path:
        return self.data_dir / "conflicts"

    @property
    def state(self) -> CorpusState | None:
        return self._state

    def require_state(self) -> CorpusState:
        if self._state is None:
            raise FormalibError("no corpus ingested yet")
        return self._state

    # -- snapshot construction ------------------------------------------

    def _read_meta(self) -> dict | None:
        if not self.meta_path.exists():
            return None
        return json.loads(self.meta_path.read_text(encoding="utf-8"))

    def _cached_model(
        self, sources: dict[str, str], corpus_hash: str
    ) -> tuple[TermDocMatrix, LsiModel] | None:
        """Reload the persisted factorization when the corpus is unchanged."""
        meta = self._read_meta()
        if meta is None or meta.get("corpus_hash") != corpus_hash:
            return None
        if meta.get("lsi_k") != self.config.lsi_k or not self.model_path.exists():
            return None
        articles = {n: parse_article(n, t) for n, t in sources.items()}
        docs = corpus_documents(articles)
        if not docs:
            return empty_model()
        matrix = build_tfidf(docs)
        terms, idf, model = load_model(self.model_path)
        if terms != matrix.terms or model.U.shape[0] != len(matrix.terms):
            return None
        return matrix, model

    def _frozen_from_disk(self) -> frozenset[str]:
        if not self.conflicts_dir.is_dir():
            return frozenset()
        return frozenset(p.stem for p in self.conflicts_dir.glob("*.txt"))

    def _build(self, sources: dict[str, str], label: str) -> CorpusState:
        corpus_hash = compute_corpus_hash(sources)
        cached = self._cached_model(sources, corpus_hash)
        self.last_lsi_rebuilt = cached is None
        return build_state(
            sources,
            label,
            self.config.directive_kinds,
            self.config.lsi_k,
            cached_model=cached,
            frozen_articles=self._frozen_from_disk(),
        )

    def _persist(self, sources: dict[str, str], state: CorpusState) -> None:
        staging = self.data_dir / "corpus.new"
        if staging.exists():
            shutil.rmtree(staging)
        staging.mkdir()
        for name, text in sources.items():
            (staging / f"{name}.miz").write_text(text, encoding="utf-8")
        old = self.data_dir / "corpus.old"
        if old.exists():
            shutil.rmtree(old)
        if self.corpus_dir.exists():
            self.corpus_dir.rename(old)
        staging.rename(self.corpus_dir)
        if old.exists():
            shutil.rmtree(old)

        save_model(self.model_path, state.lsi_matrix, state.lsi_model)
        meta = {
            "version_label": state.version_label,
            "corpus_hash": state.corpus_hash,
            "lsi_k": self.config.lsi_k,
            "directive_kinds": sorted(self.config.directive_kinds),
        }
        tmp = self.meta_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
        tmp.replace(self.meta_path)

    # -- operations -------------------------------------------------------

    def load(self) -> CorpusState | None:
        """Restore the served snapshot from the data directory, if present."""
        with self._lock:
            if not self.corpus_dir.is_dir():
                return None
            meta = self._read_meta() or {}
            sources = read_corpus_dir(self.corpus_dir)
            state = self._build(sources, meta.get("version_label", "unknown"))
            self._state = state
            return state

    def ingest(self, directory: str | Path, label: str) -> CorpusState:
        """Parse, derive, persist, and atomically publish a corpus."""
        with self._lock:
            sources = read_corpus_dir(directory)
            state = self._build(sources, label)  # any error aborts here
            self._persist(sources, state)
            self._state = state
            return state

    def update(self, directory: str | Path, label: str) -> UpdateReport:
        """Rebase comments onto a new corpus version, then publish it.

        The new corpus is fully built (and therefore validated) before any
        mutation; a build failure leaves the previous snapshot serving and
        the comment store untouched.
        """
        with self._lock:
            old_state = self.require_state()
            new_sources = read_corpus_dir(directory)
            old_sources = {
                name: "\n".join(article.lines)
                for name, article in old_state.articles.items()
            }

            plans = plan_rebase(old_sources, self.comments, new_sources)
            new_state = self._build(new_sources, label)  # validate before mutating

            frozen = set(old_state.frozen_articles)
            for plan in plans:
                if plan.status == "clean":
                    rekey = {o: n for o, n in plan.anchor_map.items() if o != n}
                    if rekey:
                        self.comments.rekey_article(plan.article, rekey, label)
                    frozen.discard(plan.article)
                else:
                    self.conflicts_dir.mkdir(parents=True, exist_ok=True)
                    if plan.merge is not None:
                        report = format_conflict_report(
                            plan.article, old_sources[plan.article].split("\n"), plan.merge
                        )
                    else:
                        report = (
                            f"article {plan.article} was removed by update {label}; "
                            f"comments on {', '.join(plan.commented_anchors)} "
                            "need manual placement\n"
                        )
                    (self.conflicts_dir / f"{plan.article}.txt").write_text(
                        report, encoding="utf-8"
                    )
                    frozen.add(plan.article)

            new_state = replace(new_state, frozen_articles=frozenset(frozen))
            self._persist(new_sources, new_state)
            self._state = new_state
            return UpdateReport(version_label=label, plans=tuple(plans))
