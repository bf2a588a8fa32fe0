"""Ingest, atomic swap, and the comment-carrying update workflow."""

from __future__ import annotations

from pathlib import Path

import pytest

from formalib.annotations import save_comment
from formalib.config import Config
from formalib.corpus import CorpusRepository, compute_corpus_hash
from formalib.errors import FormalibError

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_V1 = FIXTURES / "corpus"
CORPUS_V2 = FIXTURES / "corpus_v2"
CORPUS_CYCLIC = FIXTURES / "corpus_cyclic"


def make_repo(tmp_path, lsi_k: int = 8) -> CorpusRepository:
    return CorpusRepository(Config(data_dir=tmp_path / "data", lsi_k=lsi_k))


@pytest.fixture
def repo(tmp_path):
    return make_repo(tmp_path)


def write_mini_corpus(root: Path) -> Path:
    root.mkdir()
    (root / "AAA.miz").write_text(
        "environ\n theorems BBB, CCC;\nbegin\ntheorem Th1: union x y = union y x;\n"
    )
    (root / "BBB.miz").write_text(
        "environ\n theorems CCC;\nbegin\n"
        "definition\n  func union A B -> set means x in it iff x in A or x in B;\nend;\n"
    )
    (root / "CCC.miz").write_text("environ\nbegin\ntheorem Th1: x = x;\n")
    return root


class TestIngest:
    def test_three_article_fixture(self, repo, tmp_path):
        corpus = write_mini_corpus(tmp_path / "mini")
        state = repo.ingest(corpus, "v1")
        assert set(state.articles) == {"AAA", "BBB", "CCC"}
        assert state.graph.edges == {("AAA", "BBB"), ("AAA", "CCC"), ("BBB", "CCC")}
        # AAA -> CCC is implied via BBB
        assert state.reduced.edges == {("AAA", "BBB"), ("BBB", "CCC")}
        assert state.graph.layers == {"CCC": 0, "BBB": 1, "AAA": 2}
        assert state.version_label == "v1"

    def test_cyclic_corpus_aborts_keeping_prior_state(self, repo, tmp_path):
        corpus = write_mini_corpus(tmp_path / "mini")
        state = repo.ingest(corpus, "v1")
        with pytest.raises(FormalibError):
            repo.ingest(CORPUS_CYCLIC, "v2")
        assert repo.state is state
        assert repo.state.version_label == "v1"

    def test_reingest_identical_skips_lsi_rebuild(self, repo, tmp_path):
        corpus = write_mini_corpus(tmp_path / "mini")
        first = repo.ingest(corpus, "v1")
        assert repo.last_lsi_rebuilt is True
        second = repo.ingest(corpus, "v1b")
        assert repo.last_lsi_rebuilt is False
        assert second.corpus_hash == first.corpus_hash
        assert second.lsi_model.S == pytest.approx(first.lsi_model.S)

    def test_full_fixture_corpus(self, repo):
        state = repo.ingest(CORPUS_V1, "mml-v1")
        assert len(state.articles) == 12
        assert state.warnings == ()
        assert len(state.anchors) == sum(
            len(a.items) for a in state.articles.values()
        )
        assert state.graph.layers["TARSKI"] == 0
        assert state.graph.layers["CARD_1"] == 8
        # every reduced edge also exists in the full graph
        assert state.reduced.edges <= state.graph.edges

    def test_load_restores_persisted_state(self, repo, tmp_path):
        corpus = write_mini_corpus(tmp_path / "mini")
        ingested = repo.ingest(corpus, "v1")
        fresh = CorpusRepository(repo.config)
        loaded = fresh.load()
        assert loaded is not None
        assert loaded.corpus_hash == ingested.corpus_hash
        assert loaded.version_label == "v1"
        assert fresh.last_lsi_rebuilt is False  # cached model reused

    def test_corpus_hash_depends_on_content(self):
        a = {"A": "environ\nbegin\n"}
        b = {"A": "environ\nbegin\ntheorem x = x;\n"}
        assert compute_corpus_hash(a) != compute_corpus_hash(b)
        assert compute_corpus_hash(a) == compute_corpus_hash(dict(a))


class TestUpdate:
    def ingest_v1_with_comments(self, repo):
        state = repo.ingest(CORPUS_V1, "v1")
        save_comment(
            "ENUMSET1:theorem:2", "membership in a pair", "alice", repo.comments,
            known_anchors=state.anchors,
        )
        save_comment(
            "TARSKI:theorem:1", "reflexivity of equality", "alice", repo.comments,
            known_anchors=state.anchors,
        )
        return state

    def test_identity_update_keeps_anchors(self, repo):
        state = self.ingest_v1_with_comments(repo)
        report = repo.update(CORPUS_V1, "v1-again")
        assert report.conflict_count == 0
        assert report.carried == 2
        new_state = repo.state
        assert new_state.anchors == state.anchors
        assert repo.comments.latest("ENUMSET1:theorem:2").body == "membership in a pair"

    def test_update_with_changes_carries_and_conflicts(self, repo):
        self.ingest_v1_with_comments(repo)
        report = repo.update(CORPUS_V2, "v2")
        # ENUMSET1's commented theorem was deleted: exactly one conflict
        assert report.conflict_count == 1
        (conflicted,) = report.conflicted
        assert conflicted.article == "ENUMSET1"
        assert conflicted.commented_anchors == ("ENUMSET1:theorem:2",)
        # TARSKI's comment carried over untouched
        assert report.carried == 1
        assert repo.comments.latest("TARSKI:theorem:1").body == "reflexivity of equality"
        # conflicted article is frozen and has a report file
        assert "ENUMSET1" in repo.state.frozen_articles
        report_file = repo.conflicts_dir / "ENUMSET1.txt"
        assert report_file.exists()
        assert "<<<<<<< ours" in report_file.read_text()

    def test_update_reanchors_shifted_items(self, repo, tmp_path):
        corpus = write_mini_corpus(tmp_path / "mini")
        (corpus / "CCC.miz").write_text(
            "environ\nbegin\ntheorem Th1: x = x;\n\ntheorem Th2: y = y;\n"
        )
        state = repo.ingest(corpus, "v1")
        save_comment(
            "CCC:theorem:2", "identity note", "alice", repo.comments,
            known_anchors=state.anchors,
        )
        newdir = tmp_path / "mini2"
        newdir.mkdir()
        for path in corpus.glob("*.miz"):
            (newdir / path.name).write_text(path.read_text())
        (newdir / "CCC.miz").write_text(
            "environ\nbegin\ntheorem Th0: w = w;\n\ntheorem Th1: x = x;\n"
            "\ntheorem Th2: y = y;\n"
        )
        report = repo.update(newdir, "v2")
        assert report.conflict_count == 0
        assert repo.comments.latest("CCC:theorem:3").body == "identity note"
        assert repo.comments.latest("CCC:theorem:2") is None

    def test_update_inserting_item_at_comment_point_attaches_above(self, repo, tmp_path):
        # the documented edge: the update inserts a new theorem exactly where
        # a comment sits; the comment stays on the upper side and therefore
        # re-attaches to the newly inserted item
        corpus = write_mini_corpus(tmp_path / "mini")
        state = repo.ingest(corpus, "v1")
        save_comment(
            "CCC:theorem:1", "identity note", "alice", repo.comments,
            known_anchors=state.anchors,
        )
        newdir = tmp_path / "mini2"
        newdir.mkdir()
        for path in corpus.glob("*.miz"):
            (newdir / path.name).write_text(path.read_text())
        (newdir / "CCC.miz").write_text(
            "environ\nbegin\ntheorem Th0: y = y;\ntheorem Th1: x = x;\n"
        )
        report = repo.update(newdir, "v2")
        assert report.conflict_count == 0
        assert repo.comments.latest("CCC:theorem:1").body == "identity note"

    def test_failed_update_mutates_nothing(self, repo):
        state = self.ingest_v1_with_comments(repo)
        history_before = repo.comments.history("ENUMSET1:theorem:2")
        with pytest.raises(FormalibError):
            repo.update(CORPUS_CYCLIC, "broken")
        assert repo.state is state
        assert repo.comments.history("ENUMSET1:theorem:2") == history_before
        assert not repo.conflicts_dir.exists()

    def test_removed_article_with_comments_conflicts(self, repo, tmp_path):
        corpus = write_mini_corpus(tmp_path / "mini")
        state = repo.ingest(corpus, "v1")
        save_comment(
            "CCC:theorem:1", "note", "alice", repo.comments,
            known_anchors=state.anchors,
        )
        newdir = tmp_path / "mini2"
        newdir.mkdir()
        # drop CCC entirely; rewire AAA/BBB so the corpus stays valid
        (newdir / "AAA.miz").write_text(
            "environ\n theorems BBB;\nbegin\ntheorem Th1: union x y = union y x;\n"
        )
        (newdir / "BBB.miz").write_text((corpus / "BBB.miz").read_text().replace(
            " theorems CCC;\n", ""
        ))
        report = repo.update(newdir, "v2")
        assert report.conflict_count == 1
        assert report.conflicted[0].article == "CCC"
        assert "CCC" in repo.state.frozen_articles


class TestDegenerateCorpora:
    def test_corpus_without_items_ingests(self, repo, tmp_path):
        corpus = tmp_path / "bare"
        corpus.mkdir()
        (corpus / "AAA.miz").write_text("environ\nbegin\nreserve x for set;\n")
        (corpus / "BBB.miz").write_text("environ\n theorems AAA;\nbegin\n")
        state = repo.ingest(corpus, "bare")
        assert state.anchors == frozenset()
        assert state.lsi_model.k == 0
        from formalib.lsi import rank

        assert rank(state.lsi_model, state.lsi_matrix, "anything", 5) == []
        # and the persisted empty model loads back on re-ingest
        repo.ingest(corpus, "bare2")
        assert repo.last_lsi_rebuilt is False

    def test_single_item_corpus(self, repo, tmp_path):
        corpus = tmp_path / "single"
        corpus.mkdir()
        (corpus / "ONE.miz").write_text(
            "environ\nbegin\ntheorem Th1: singleton x = singleton x;\n"
        )
        state = repo.ingest(corpus, "one")
        assert state.lsi_model.k >= 1
        from formalib.lsi import rank

        results = rank(state.lsi_model, state.lsi_matrix, "singleton x", 5)
        assert results and results[0][0] == "ONE:theorem:1"
