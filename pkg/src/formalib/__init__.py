"""Knowledge platform for formal mathematics article libraries."""

from .articles import Article, Directive, Item, parse_article, extract_symbols
from .depgraph import (
    DepGraph,
    assign_layers,
    build_graph,
    export_dot,
    export_json,
    neighborhood,
    search_nodes,
    transitive_reduction,
)
from .diff3 import Conflict, MergeResult, diff3_merge
from .annotations import (
    AnnotatedSource,
    CommentRevision,
    CommentStore,
    embed_comments,
    rebase_annotations,
    rollback,
    save_comment,
    strip_annotations,
)
from .lsi import (
    FeedbackLog,
    FeedbackRecord,
    LsiModel,
    TermDocMatrix,
    build_tfidf,
    rank,
    record_feedback,
    tokenize,
    truncated_svd,
)
from .namesearch import IndexEntry, NameIndex, build_index
from .render import render_article

__version__ = "0.1.0"
