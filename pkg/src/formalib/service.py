"""HTTP facade over the corpus repository.

JSON in and out; token auth for mutations.  Status mapping: 401 for bad or
missing tokens, 403 for blocked users and missing admin rights, 404 for
unknown names/anchors/nodes, 409 for articles frozen by pending merge
conflicts.  Every response carries the served corpus hash in X-Corpus-Hash,
so clients can assert they never observe a half-swapped state.
"""

from __future__ import annotations

from dataclasses import asdict

from fastapi import Depends, FastAPI, Header, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import wire
from .annotations import rollback as rollback_comment
from .annotations import save_comment
from .corpus import CorpusRepository, CorpusState
from .depgraph import export_dot, graph_payload, neighborhood
from .errors import (
    FormalibError,
    UnknownAnchor,
    UnknownNode,
    UnknownRevision,
    UserBlocked,
)
from .lsi import rank, record_feedback
from .namesearch import query as name_query
from .render import render_article
from .users import User


class CommentBody(BaseModel):
    body: str


class RollbackBody(BaseModel):
    to: int


class TheoremSearchBody(BaseModel):
    query: str
    limit: int = 20


class FeedbackBody(BaseModel):
    query: str
    anchor: str


class BlockBody(BaseModel):
    blocked: bool = True


class UpdateBody(BaseModel):
    path: str
    label: str


def _json(payload) -> Response:
    return Response(wire.canonical_json(payload), media_type="application/json")


def create_app(repo: CorpusRepository) -> FastAPI:
    app = FastAPI(title="formalib", docs_url=None, redoc_url=None)
    # the browser UI may be served from another origin during development
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["X-Corpus-Hash"],
    )

    def snapshot(request: Request) -> CorpusState:
        """The immutable state this request is answered from.

        Remembered on the request so the response header reports the hash of
        the snapshot actually used, not whatever is current afterwards.
        """
        current = repo.state
        if current is None:
            raise HTTPException(503, "no corpus ingested")
        request.state.corpus_hash = current.corpus_hash
        return current

    def authenticated(authorization: str | None = Header(default=None)) -> User:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(401, "missing bearer token")
        user = repo.users.by_token(authorization.removeprefix("Bearer ").strip())
        if user is None:
            raise HTTPException(401, "invalid token")
        return user

    def writer(user: User = Depends(authenticated)) -> User:
        if user.blocked:
            raise HTTPException(403, "user is blocked")
        return user

    def admin(user: User = Depends(writer)) -> User:
        if user.role != "admin":
            raise HTTPException(403, "admin role required")
        return user

    def anchor_article(s: CorpusState, anchor: str) -> str:
        name = anchor.split(":", 1)[0]
        if anchor not in s.anchors:
            raise HTTPException(404, f"unknown anchor: {anchor}")
        return name

    def check_not_frozen(s: CorpusState, article: str) -> None:
        if article in s.frozen_articles:
            raise HTTPException(
                409, f"article {article} has unresolved merge conflicts"
            )

    @app.middleware("http")
    async def corpus_hash_header(request: Request, call_next):
        response = await call_next(request)
        corpus_hash = getattr(request.state, "corpus_hash", None)
        if corpus_hash is None:
            current = repo.state
            corpus_hash = current.corpus_hash if current is not None else None
        if corpus_hash is not None:
            response.headers["X-Corpus-Hash"] = corpus_hash
        return response

    # -- articles ---------------------------------------------------------

    @app.get("/api/articles")
    def list_articles(s: CorpusState = Depends(snapshot)):
        return _json(wire.article_list_payload(s))

    @app.get("/api/articles/{name}")
    def get_article(name: str, s: CorpusState = Depends(snapshot)):
        article = s.articles.get(name)
        if article is None:
            raise HTTPException(404, f"unknown article: {name}")
        frozen = name in s.frozen_articles
        comments = {} if frozen else repo.comments.latest_comments(name)
        document = render_article(article, set(s.articles), comments)
        meta = {}
        if not frozen:
            for item in article.items:
                latest = repo.comments.latest(item.anchor)
                if latest is not None and not latest.deleted:
                    meta[item.anchor] = {
                        "revision_id": latest.revision_id,
                        "author": latest.author,
                        "timestamp": latest.timestamp,
                    }
        return _json(
            {
                "name": name,
                "version_label": s.version_label,
                "frozen": frozen,
                "document": document,
                "items": [
                    {
                        "anchor": i.anchor,
                        "kind": i.kind,
                        "label": i.label,
                        "span": list(i.span),
                        "statement": i.statement_text,
                    }
                    for i in article.items
                ],
                "comments": meta,
            }
        )

    # -- search -------------------------------------------------------------

    @app.get("/api/search/names")
    def search_names(
        q: str = Query(default=""),
        kind: str | None = Query(default=None),
        limit: int = Query(default=50, ge=1, le=1000),
        s: CorpusState = Depends(snapshot),
    ):
        if kind not in (None, "article", "symbol"):
            raise HTTPException(422, "kind must be 'article' or 'symbol'")
        entries = name_query(s.names, q, kind_filter=kind, limit=limit)
        return _json(wire.name_results_payload(entries))

    @app.post("/api/search/theorems")
    def search_theorems(body: TheoremSearchBody, s: CorpusState = Depends(snapshot)):
        if body.limit < 1:
            raise HTTPException(422, "limit must be positive")
        results = rank(s.lsi_model, s.lsi_matrix, body.query, body.limit)
        return _json(wire.theorem_results_payload(s, results))

    @app.post("/api/feedback")
    def feedback(
        body: FeedbackBody,
        user: User = Depends(writer),
        s: CorpusState = Depends(snapshot),
    ):
        anchor_article(s, body.anchor)
        record = record_feedback(body.query, body.anchor, user.id, repo.feedback)
        return _json(asdict(record))

    # -- comments -----------------------------------------------------------

    @app.get("/api/comments/{anchor}")
    def latest_comment(anchor: str, s: CorpusState = Depends(snapshot)):
        anchor_article(s, anchor)
        return _json(wire.revision_payload(repo.comments.latest(anchor)))

    @app.get("/api/comments/{anchor}/history")
    def comment_history(anchor: str, s: CorpusState = Depends(snapshot)):
        anchor_article(s, anchor)
        return _json(wire.history_payload(repo.comments.history(anchor)))

    @app.post("/api/comments/{anchor}")
    def post_comment(
        anchor: str,
        body: CommentBody,
        user: User = Depends(writer),
        s: CorpusState = Depends(snapshot),
    ):
        article = anchor_article(s, anchor)
        check_not_frozen(s, article)
        revision = save_comment(
            anchor,
            body.body,
            user.id,
            repo.comments,
            known_anchors=s.anchors,
            blocked=repo.users.blocked_ids(),
        )
        return _json(asdict(revision))

    @app.post("/api/comments/{anchor}/rollback")
    def rollback(
        anchor: str,
        body: RollbackBody,
        user: User = Depends(writer),
        s: CorpusState = Depends(snapshot),
    ):
        article = anchor_article(s, anchor)
        check_not_frozen(s, article)
        try:
            revision = rollback_comment(
                anchor, body.to, user.id, repo.comments,
                blocked=repo.users.blocked_ids(),
            )
        except UnknownRevision as err:
            raise HTTPException(404, str(err))
        return _json(asdict(revision))

    # -- graph ----------------------------------------------------------------

    def _graph(s: CorpusState, reduced: bool):
        return s.reduced if reduced else s.graph

    @app.get("/api/graph")
    def graph(
        reduced: bool = Query(default=False), s: CorpusState = Depends(snapshot)
    ):
        return _json(graph_payload(_graph(s, reduced)))

    @app.get("/api/graph/neighborhood")
    def graph_neighborhood(
        node: str, radius: int = Query(default=1, ge=0, le=50),
        reduced: bool = Query(default=False),
        s: CorpusState = Depends(snapshot),
    ):
        try:
            sub = neighborhood(_graph(s, reduced), node, radius)
        except UnknownNode as err:
            raise HTTPException(404, str(err))
        return _json(graph_payload(sub))

    @app.get("/api/graph.dot")
    def graph_dot(
        reduced: bool = Query(default=False),
        sfdp: bool = Query(default=False),
        s: CorpusState = Depends(snapshot),
    ):
        return Response(
            export_dot(_graph(s, reduced), sfdp=sfdp), media_type="text/plain"
        )

    # -- admin ------------------------------------------------------------------

    @app.post("/api/admin/users/{user_id}/block")
    def block_user(user_id: str, body: BlockBody, _: User = Depends(admin)):
        user = repo.users.set_blocked(user_id, body.blocked)
        if user is None:
            raise HTTPException(404, f"unknown user: {user_id}")
        return _json({"id": user.id, "blocked": user.blocked})

    @app.post("/api/admin/update")
    def admin_update(body: UpdateBody, _: User = Depends(admin)):
        try:
            report = repo.update(body.path, body.label)
        except FormalibError as err:
            raise HTTPException(400, str(err))
        return _json(report.summary())

    @app.exception_handler(UserBlocked)
    async def blocked_handler(_request, exc: UserBlocked):
        return Response(
            wire.canonical_json({"detail": str(exc)}),
            status_code=403,
            media_type="application/json",
        )

    @app.exception_handler(UnknownAnchor)
    async def unknown_anchor_handler(_request, exc: UnknownAnchor):
        return Response(
            wire.canonical_json({"detail": str(exc)}),
            status_code=404,
            media_type="application/json",
        )

    return app
