"""Latent semantic indexing over item statements.

Pipeline: tokenize statements, weight with log-scaled tf-idf, L2-normalize
document columns, factor the term-document matrix with a truncated SVD, and
rank queries by cosine similarity in the concept space.  Queries are folded
in as q_hat = S^-1 * U^T * q, so no query language is needed: a query is just
formal text.

The SVD is computed by a Lanczos iteration on the Gram matrix (the smaller of
W^T W and W W^T), one singular triplet at a time, deflating each converged
eigenpair out of the operator.  Full reorthogonalization keeps the Krylov
basis orthonormal, a fixed seed makes results reproducible, and signs are
fixed by forcing the largest-magnitude entry of each U column positive.
"""

from __future__ import annotations

import json
import math
import re
import struct
import threading
from collections import Counter
from collections.abc import Callable, Collection, Sequence
from dataclasses import dataclass, asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from scipy import sparse

from .errors import (
    ConvergenceFailure,
    EmptyCorpus,
    RankTooLarge,
    UserBlocked,
)

#: Structural words of the formal language; useless as index terms.
STOPWORDS = frozenset(
    """for holds being be is st ex not and or implies iff of the it let
    assume then thus hence proof end theorem definition""".split()
)

_WORD_RE = re.compile(r"[A-Za-z0-9_]+")
_INT_RE = re.compile(r"[0-9]+\Z")

MAGIC = b"LSI1"

#: Relative change between successive singular-value estimates that counts
#: as converged.
CONVERGENCE_TOL = 1e-10

#: Singular values below this fraction of the largest are treated as zero:
#: the Gram-matrix formulation squares the condition number, so components
#: below sqrt(machine epsilon) relative are indistinguishable from noise.
RANK_TOL = 5e-8


def tokenize(statement_text: str) -> list[str]:
    """Lowercased word tokens, minus stopwords and pure integers."""
    out = []
    for word in _WORD_RE.findall(statement_text):
        term = word.lower()
        if term in STOPWORDS or _INT_RE.match(term):
            continue
        out.append(term)
    return out


@dataclass(eq=False)
class TermDocMatrix:
    terms: tuple[str, ...]
    docs: tuple[str, ...]
    weights: sparse.csc_matrix  # terms x docs, columns L2-normalized
    idf: np.ndarray

    def term_index(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.terms)}


def build_tfidf(docs: Sequence[tuple[str, str]]) -> TermDocMatrix:
    """Weight tokenized documents: (1 + ln tf) * idf, columns L2-normalized.

    idf[t] = ln((1 + N) / (1 + df_t)) + 1, which stays strictly positive even
    for terms present in every document.
    """
    if not docs:
        raise EmptyCorpus("no documents to index")
    anchors = [anchor for anchor, _ in docs]
    if len(set(anchors)) != len(anchors):
        raise ValueError("document anchors must be unique")

    token_lists = [tokenize(text) for _, text in docs]
    vocabulary = sorted({t for toks in token_lists for t in toks})
    index = {t: i for i, t in enumerate(vocabulary)}

    n_docs = len(docs)
    df = np.zeros(len(vocabulary))
    for toks in token_lists:
        for t in set(toks):
            df[index[t]] += 1
    idf = np.log((1 + n_docs) / (1 + df)) + 1.0

    rows, cols, data = [], [], []
    for j, toks in enumerate(token_lists):
        counts = Counter(toks)
        if not counts:
            continue
        col_rows = sorted(index[t] for t in counts)
        weights = np.array(
            [(1.0 + math.log(counts[vocabulary[i]])) * idf[i] for i in col_rows]
        )
        norm = np.linalg.norm(weights)
        if norm > 0:
            weights = weights / norm
        rows.extend(col_rows)
        cols.extend([j] * len(col_rows))
        data.extend(weights)

    weights = sparse.csc_matrix(
        (data, (rows, cols)), shape=(len(vocabulary), n_docs)
    )
    return TermDocMatrix(tuple(vocabulary), tuple(anchors), weights, idf)


@dataclass(eq=False)
class LsiModel:
    k: int
    U: np.ndarray  # terms x k, orthonormal columns
    S: np.ndarray  # k singular values, descending, positive
    V: np.ndarray  # docs x k, orthonormal columns


def empty_model() -> tuple[TermDocMatrix, LsiModel]:
    """Degenerate factorization for a corpus with nothing to index."""
    matrix = TermDocMatrix((), (), sparse.csc_matrix((0, 0)), np.zeros(0))
    model = LsiModel(k=0, U=np.zeros((0, 0)), S=np.zeros(0), V=np.zeros((0, 0)))
    return matrix, model


def default_rank(n_terms: int, n_docs: int, cap: int = 150) -> int:
    return max(1, min(cap, min(n_terms, n_docs) - 1))


def _lanczos_largest(
    apply_op: Callable[[np.ndarray], np.ndarray],
    dim: int,
    rng: np.random.Generator,
    max_iter: int,
    component: int,
) -> tuple[float, np.ndarray]:
    """Largest eigenpair of a symmetric PSD operator via Lanczos.

    Builds an orthonormal Krylov basis with full reorthogonalization and
    tracks the largest Ritz value; converged when successive estimates agree
    to within CONVERGENCE_TOL relatively (a Krylov breakdown means the
    invariant subspace is exhausted, which is also convergence).
    """
    q = rng.standard_normal(dim)
    q /= np.linalg.norm(q)
    basis = [q]
    alphas: list[float] = []
    betas: list[float] = []
    prev_est: float | None = None
    streak = 0

    for _ in range(max_iter):
        w = apply_op(basis[-1])
        alpha = float(basis[-1] @ w)
        alphas.append(alpha)
        w -= alpha * basis[-1]
        if len(basis) > 1:
            w -= betas[-1] * basis[-2]
        # Full reorthogonalization, twice for good measure.
        for _ in range(2):
            for vec in basis:
                w -= (vec @ w) * vec
        beta = float(np.linalg.norm(w))

        t = _tridiag(alphas, betas)
        theta, coeffs = _largest_eig(t)
        est = math.sqrt(max(theta, 0.0))

        if prev_est is not None and abs(est - prev_est) <= CONVERGENCE_TOL * max(
            est, 1e-300
        ):
            streak += 1
        else:
            streak = 0
        exhausted = beta < 1e-13 or len(basis) >= dim
        if streak >= 2 or exhausted:
            return theta, _ritz_vector(basis, coeffs)
        prev_est = est
        betas.append(beta)
        basis.append(w / beta)

    raise ConvergenceFailure(component, max_iter)


def _tridiag(alphas: list[float], betas: list[float]) -> np.ndarray:
    n = len(alphas)
    t = np.diag(np.array(alphas))
    for i, b in enumerate(betas[: n - 1]):
        t[i, i + 1] = b
        t[i + 1, i] = b
    return t


def _largest_eig(t: np.ndarray) -> tuple[float, np.ndarray]:
    vals, vecs = np.linalg.eigh(t)
    return float(vals[-1]), vecs[:, -1]


def _ritz_vector(basis: list[np.ndarray], coeffs: np.ndarray) -> np.ndarray:
    v = np.zeros_like(basis[0])
    for c, vec in zip(coeffs, basis):
        v += c * vec
    return v / np.linalg.norm(v)


def truncated_svd(m: TermDocMatrix, k: int) -> LsiModel:
    """Top-k singular triplets of the weighted term-document matrix.

    Raises RankTooLarge if k exceeds min(#terms, #docs).  If the matrix has
    effective rank r < k, the model is truncated to r components so that
    every returned singular value is strictly positive.
    """
    n_terms, n_docs = m.weights.shape
    limit = min(n_terms, n_docs)
    if not 1 <= k <= limit:
        raise RankTooLarge(k, limit)

    w = m.weights
    gram_on_docs = n_docs <= n_terms
    dim = n_docs if gram_on_docs else n_terms
    max_iter = 10 * limit
    rng = np.random.default_rng(0x1517)

    sigmas: list[float] = []
    small_vecs: list[np.ndarray] = []  # eigenvectors of the Gram matrix
    lambdas: list[float] = []

    for component in range(k):
        def apply_op(x: np.ndarray) -> np.ndarray:
            if gram_on_docs:
                y = w.T @ (w @ x)
            else:
                y = w @ (w.T @ x)
            for lam, vec in zip(lambdas, small_vecs):
                y -= lam * (vec @ x) * vec
            return np.asarray(y).ravel()

        theta, vec = _lanczos_largest(apply_op, dim, rng, max_iter, component)
        sigma = math.sqrt(max(theta, 0.0))
        if sigmas and sigma > sigmas[-1]:
            sigma = sigmas[-1]  # deflation noise cannot exceed the spectrum
        if sigma <= (sigmas[0] if sigmas else sigma) * RANK_TOL or sigma == 0.0:
            break  # effective rank reached
        # Orthogonalize explicitly against previous eigenvectors.
        for prev in small_vecs:
            vec -= (prev @ vec) * prev
        vec /= np.linalg.norm(vec)
        sigmas.append(sigma)
        lambdas.append(theta)
        small_vecs.append(vec)

    r = len(sigmas)
    s = np.array(sigmas)
    small = np.column_stack(small_vecs) if r else np.zeros((dim, 0))
    if gram_on_docs:
        v = small
        u = np.asarray(w @ v) / s if r else np.zeros((n_terms, 0))
    else:
        u = small
        v = np.asarray(w.T @ u) / s if r else np.zeros((n_docs, 0))

    for j in range(r):
        pivot = int(np.argmax(np.abs(u[:, j])))
        if u[pivot, j] < 0:
            u[:, j] = -u[:, j]
            v[:, j] = -v[:, j]
    return LsiModel(k=r, U=u, S=s, V=v)


def query_vector(m: TermDocMatrix, query_text: str) -> np.ndarray | None:
    """Tf-idf query vector over the corpus vocabulary, or None if empty."""
    counts = Counter(tokenize(query_text))
    index = m.term_index()
    q = np.zeros(len(m.terms))
    for term, tf in counts.items():
        i = index.get(term)
        if i is not None:
            q[i] = (1.0 + math.log(tf)) * m.idf[i]
    norm = np.linalg.norm(q)
    if norm == 0:
        return None
    return q / norm


def rank(
    model: LsiModel, m: TermDocMatrix, query_text: str, limit: int
) -> list[tuple[str, float]]:
    """Rank documents by cosine similarity to the folded-in query.

    Results are sorted by score descending, ties broken by anchor; at most
    ``limit`` entries.  Queries with no index terms return [].
    """
    if limit <= 0:
        raise ValueError("limit must be positive")
    q = query_vector(m, query_text)
    if q is None or model.k == 0:
        return []
    q_hat = (model.U.T @ q) / model.S
    q_norm = np.linalg.norm(q_hat)
    if q_norm < 1e-300:
        return []
    row_norms = np.linalg.norm(model.V, axis=1)
    scores = np.zeros(len(m.docs))
    nonzero = row_norms > 0
    scores[nonzero] = (model.V[nonzero] @ q_hat) / (row_norms[nonzero] * q_norm)
    order = sorted(range(len(m.docs)), key=lambda i: (-scores[i], m.docs[i]))
    return [(m.docs[i], float(scores[i])) for i in order[:limit]]


# -- relevance feedback -------------------------------------------------


@dataclass(frozen=True)
class FeedbackRecord:
    query_text: str
    anchor: str
    vote: str
    user: str
    timestamp: str


class FeedbackLog:
    """Append-only JSON-lines log of "good" votes on search results."""

    def __init__(self, path: str | Path, now: Callable[[], str] | None = None):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._now = now or (lambda: datetime.now(timezone.utc).isoformat())
        self._write_lock = threading.Lock()

    def append(self, query_text: str, anchor: str, user: str) -> FeedbackRecord:
        record = FeedbackRecord(
            query_text=query_text,
            anchor=anchor,
            vote="good",
            user=user,
            timestamp=self._now(),
        )
        with self._write_lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(asdict(record), ensure_ascii=False) + "\n")
        return record

    def records(self) -> list[FeedbackRecord]:
        if not self.path.exists():
            return []
        out = []
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    out.append(FeedbackRecord(**json.loads(line)))
        return out


def record_feedback(
    query_text: str,
    anchor: str,
    user: str,
    log: FeedbackLog,
    blocked: Collection[str] = (),
) -> FeedbackRecord:
    if user in blocked:
        raise UserBlocked(user)
    return log.append(query_text, anchor, user)


# -- model persistence ---------------------------------------------------


def save_model(path: str | Path, m: TermDocMatrix, model: LsiModel) -> None:
    """Binary layout: magic, k/#terms/#docs, lexicon, idf, S, U, V (f64 LE)."""
    with Path(path).open("wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<III", model.k, len(m.terms), len(m.docs)))
        for term in m.terms:
            raw = term.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
        fh.write(np.asarray(m.idf, dtype="<f8").tobytes())
        fh.write(np.asarray(model.S, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.U, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.V, dtype="<f8").tobytes())


def load_model(path: str | Path) -> tuple[tuple[str, ...], np.ndarray, LsiModel]:
    """Read back (terms, idf, model) written by :func:`save_model`."""
    with Path(path).open("rb") as fh:
        if fh.read(4) != MAGIC:
            raise ValueError(f"{path}: not a model file")
        k, n_terms, n_docs = struct.unpack("<III", fh.read(12))
        terms = []
        for _ in range(n_terms):
            (length,) = struct.unpack("<I", fh.read(4))
            terms.append(fh.read(length).decode("utf-8"))
        idf = np.frombuffer(fh.read(8 * n_terms), dtype="<f8").copy()
        s = np.frombuffer(fh.read(8 * k), dtype="<f8").copy()
        u = np.frombuffer(fh.read(8 * n_terms * k), dtype="<f8").reshape(n_terms, k).copy()
        v = np.frombuffer(fh.read(8 * n_docs * k), dtype="<f8").reshape(n_docs, k).copy()
    return tuple(terms), idf, LsiModel(k=k, U=u, S=s, V=v)
